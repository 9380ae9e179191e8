//! Serialization conventions: exact rationals as `"p/q"` strings, bignums
//! as decimal strings, floats as shortest round-trip decimals, and the
//! versioned output envelope.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use cfdim_core::num::{parse_rational, Param};

use crate::error::CliError;

/// Schema tag of a command's output.
pub fn schema(command: &str) -> String {
    format!("cfdim/{command}/v1")
}

/// `"p/q"` for an exact rational (always with a denominator).
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal string of a bignum.
pub fn big_string(x: &BigUint) -> String {
    x.to_str_radix(10)
}

/// An exact rational parameter, written as `"p/q"`.
///
/// Accepts `p/q`, integers and decimal literals; decimals are converted to
/// the simplest rational within `10^-15`, so the echoed form re-parses to the
/// same value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rat(pub BigRational);

impl FromStr for Rat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s).map(Rat).map_err(|_| format!("not a rational number: {s:?}"))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&ratio_string(&self.0))
    }
}

/// An exact non-negative parameter that may be `inf`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Par(pub Param);

impl FromStr for Par {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Param::from_str(s).map(Par).map_err(|_| format!("not a rational number or inf: {s:?}"))
    }
}

impl fmt::Display for Par {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Param::Finite(r) => f.write_str(&ratio_string(r)),
            Param::Infinite => f.write_str("inf"),
        }
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Rat);
string_serde!(Par);

/// The output envelope `{schema, config, result}`.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, R: Serialize> {
    /// Versioned schema tag.
    pub schema: String,
    /// Full effective configuration.
    pub config: &'a C,
    /// Command result.
    pub result: &'a R,
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// CSV with a header row.
pub fn to_csv(columns: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(std::io::Error::other(e.to_string()));
    w.write_record(columns).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(std::io::Error::other(e.to_string())))?;
    String::from_utf8(bytes).map_err(|e| CliError::Parse(e.to_string()))
}

/// Shortest round-trip decimal of a float (as serde_json writes it).
pub fn float_string(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).unwrap_or_else(|_| x.to_string())
    } else {
        x.to_string()
    }
}

/// Parse a digit file: integers separated by whitespace or commas; text after
/// `#` on a line is ignored. Every digit must be at least 1.
pub fn parse_digits(text: &str) -> Result<Vec<u64>, CliError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            let a: u64 = tok
                .parse()
                .map_err(|_| CliError::Parse(format!("line {}: not a digit: {tok:?}", ln + 1)))?;
            if a == 0 {
                return Err(CliError::Parse(format!("line {}: partial quotients are at least 1", ln + 1)));
            }
            out.push(a);
        }
    }
    Ok(out)
}

/// Write digits in the format read by [`parse_digits`] (20 per line).
pub fn format_digits(digits: &[u64]) -> String {
    let mut s = String::with_capacity(digits.len() * 2 + 64);
    for line in digits.chunks(20) {
        let strs: Vec<String> = line.iter().map(u64::to_string).collect();
        s.push_str(&strs.join(" "));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_round_trip_through_strings() {
        let r: Rat = "0.333".parse().unwrap();
        assert_eq!(r.to_string(), "333/1000");
        assert_eq!(r.to_string().parse::<Rat>().unwrap(), r);
        let p: Par = "inf".parse().unwrap();
        assert_eq!(p.to_string(), "inf");
        assert_eq!("3".parse::<Par>().unwrap().to_string(), "3/1");
        assert!("x".parse::<Rat>().is_err());
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(j, "\"333/1000\"");
        assert_eq!(serde_json::from_str::<Rat>(&j).unwrap(), r);
    }

    #[test]
    fn digit_files() {
        assert_eq!(parse_digits("1 2,3\n# c\n4 # x\n").unwrap(), vec![1, 2, 3, 4]);
        assert!(parse_digits("1 0").is_err());
        assert!(parse_digits("1 a").is_err());
        let d: Vec<u64> = (1..=45).collect();
        assert_eq!(parse_digits(&format_digits(&d)).unwrap(), d);
    }

    #[test]
    fn csv_has_header() {
        let s = to_csv(&["a", "b"], &[vec!["1".into(), "2".into()]]).unwrap();
        assert_eq!(s, "a,b\n1,2\n");
    }
}
