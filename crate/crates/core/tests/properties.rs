//! Property tests of the exact kernels, the estimators and the Cantor
//! constructions against independent brute-force oracles.

use cfdim_core::cantor::insert::{delete_marked, insert_map};
use cfdim_core::cantor::measure::Measure;
use cfdim_core::cantor::{construct_sequences, CantorSpec, Children};
use cfdim_core::cf::{basic_interval, continuants, expand, run_continuant, run_continuant_closed_form, DigitSeq, RealInput};
use cfdim_core::exponents::{decompose, estimates_from_records, Block};
use cfdim_core::runlength::run_profile;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow};
use proptest::prelude::*;

fn digits(max_len: usize, max_digit: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1..=max_digit, 1..=max_len)
}

fn q_of(d: &[u64]) -> BigUint {
    continuants(d).q(d.len() as isize).clone()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn continuant_product_and_power_bounds(d in digits(30, 10)) {
        let q = q_of(&d);
        let lo: BigUint = d.iter().map(|&a| BigUint::from(a)).product();
        let hi: BigUint = d.iter().map(|&a| BigUint::from(a + 1)).product();
        prop_assert!(lo <= q && q <= hi);
        // q_n ≥ 2^{(n−1)/2}  ⇔  q_n² ≥ 2^{n−1}.
        let two = BigUint::from(2u32);
        prop_assert!(&q * &q >= two.pow(d.len() - 1));
    }

    #[test]
    fn continuants_split_within_factor_two(d in digits(30, 10), cut in 1usize..29) {
        prop_assume!(cut < d.len());
        let whole = q_of(&d);
        let prod = q_of(&d[..cut]) * q_of(&d[cut..]);
        prop_assert!(prod <= whole);
        prop_assert!(whole <= BigUint::from(2u32) * prod);
    }

    #[test]
    fn determinant_identity(d in digits(30, 50)) {
        let t = continuants(&d);
        for k in 0..=d.len() as isize {
            let lhs = BigInt::from(t.p(k).clone()) * BigInt::from(t.q(k - 1).clone());
            let rhs = BigInt::from(t.p(k - 1).clone()) * BigInt::from(t.q(k).clone());
            let det = lhs - rhs;
            prop_assert!(det == BigInt::one() || det == -BigInt::one());
        }
    }

    #[test]
    fn interval_length_and_two_sided_bound(d in digits(25, 20)) {
        let iv = basic_interval(&d);
        prop_assert_eq!(&iv.right - &iv.left, iv.length.clone());
        let q = BigInt::from(q_of(&d));
        let q2 = &q * &q;
        prop_assert!(iv.length >= BigRational::new(BigInt::one(), BigInt::from(2) * &q2));
        prop_assert!(iv.length <= BigRational::new(BigInt::one(), q2));
    }

    #[test]
    fn children_nest_disjointly_with_parity_order(d in digits(12, 6), b in 2u64..6) {
        let parent = basic_interval(&d);
        let kids: Vec<_> = (1..=b)
            .map(|a| {
                let mut e = d.clone();
                e.push(a);
                basic_interval(&e)
            })
            .collect();
        for k in &kids {
            prop_assert!(k.left >= parent.left && k.right <= parent.right);
        }
        // Increasing digit moves right for odd order n+1, left for even.
        let odd = (d.len() + 1) % 2 == 1;
        for w in kids.windows(2) {
            if odd {
                prop_assert!(w[1].right <= w[0].left);
            } else {
                prop_assert!(w[0].right <= w[1].left);
            }
        }
    }

    #[test]
    fn expanding_an_interior_point_recovers_the_digits(d in digits(15, 30)) {
        let iv = basic_interval(&d);
        let mid = (&iv.left + &iv.right) / BigRational::from_integer(BigInt::from(2));
        let p = mid.numer().to_string().parse::<u64>();
        let q = mid.denom().to_string().parse::<u64>();
        prop_assume!(p.is_ok() && q.is_ok());
        let e = expand(&RealInput::rational(p.unwrap(), q.unwrap()), d.len()).unwrap();
        prop_assert_eq!(&e.digits[..d.len()], &d[..]);
    }

    #[test]
    fn run_profile_matches_quadratic_oracle(d in digits(200, 3)) {
        let rp = run_profile(&d);
        for n in 1..=d.len() {
            let mut best = 0;
            for s in 0..n {
                let mut l = 0;
                while s + l < n && d[s + l] == d[s] {
                    l += 1;
                }
                best = best.max(l);
            }
            prop_assert_eq!(rp.at(n) as usize, best);
        }
    }

    #[test]
    fn records_match_naive_selection(d in digits(150, 3)) {
        prop_assume!(d.contains(&1));
        let bd = decompose(&DigitSeq::from_digits(d.clone()), 1).unwrap();
        let mut runs = Vec::new();
        let mut j = 0;
        while j < d.len() {
            if d[j] == 1 {
                let s = j;
                while j < d.len() && d[j] == 1 {
                    j += 1;
                }
                runs.push((s as u64, j as u64));
            } else {
                j += 1;
            }
        }
        let raw: Vec<(u64, u64)> = bd.raw_blocks.iter().map(|b| (b.n, b.m)).collect();
        prop_assert_eq!(&raw, &runs);
        let mut recs: Vec<(u64, u64)> = Vec::new();
        for &(n, m) in &runs {
            if recs.last().map_or(true, |&(n0, m0)| m - n > m0 - n0) {
                recs.push((n, m));
            }
        }
        let got: Vec<(u64, u64)> = bd.record_blocks.iter().map(|b| (b.n, b.m)).collect();
        prop_assert_eq!(got, recs);
    }

    #[test]
    fn estimates_are_ordered(lens in prop::collection::vec(1u64..50, 2..20), gaps in prop::collection::vec(1u64..100, 20)) {
        let mut recs = Vec::new();
        let mut pos = 0;
        let mut len = 0;
        for (k, &l) in lens.iter().enumerate() {
            len += l;
            pos += gaps[k];
            recs.push(Block { n: pos, m: pos + len, open: false });
            pos += len;
        }
        let e = estimates_from_records(&recs).unwrap();
        prop_assert!(e.nu_hat_est <= e.nu_est);
        prop_assert!(e.nu_hat_est >= 0.0);
    }
}

#[test]
fn run_continuant_closed_form_is_exact() {
    for i in 1..=5 {
        for n in 0..=40 {
            assert_eq!(run_continuant(i, n), run_continuant_closed_form(i, n));
        }
    }
}

fn measure() -> Measure {
    let seq = construct_sequences(&BigRational::new(1.into(), 3.into()), &BigRational::from_integer(1.into()), 8).unwrap();
    Measure::new(CantorSpec::new(seq, 3, 1, 4).unwrap(), 6).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn child_masses_sum_to_parent(choices in prop::collection::vec(0u64..3, 1..400)) {
        let m = measure();
        let mut c = m.cursor();
        for ch in choices {
            let a = match c.children().unwrap() {
                Children::Fixed(i) => i,
                Children::Range(b) => 1 + ch % b,
            };
            c.push(a).unwrap();
        }
        let parent = c.ln_mass();
        let total: f64 = match c.children().unwrap() {
            Children::Fixed(i) => c.child_ln_mass(i).unwrap().exp(),
            Children::Range(b) => (1..=b).map(|a| c.child_ln_mass(a).unwrap().exp()).sum(),
        };
        prop_assert!((total / parent.exp() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn insertion_round_trips(choices in prop::collection::vec(0u64..3, 1..2000)) {
        let m = measure();
        let sp = m.spec();
        let x: Vec<u64> = choices
            .iter()
            .enumerate()
            .map(|(j, &ch)| match sp.allowed_at(j as u64 + 1).unwrap() {
                Children::Fixed(i) => i,
                Children::Range(b) => 1 + ch % b,
            })
            .collect();
        let f = insert_map(sp, &x).unwrap();
        prop_assert_eq!(delete_marked(&f.digits, &f.marked), x);
        prop_assert!(f.marked.iter().all(|&p| f.digits[p as usize - 1] == sp.d));
    }
}
