//! Property tests for the exact-arithmetic primitives and the codebook
//! round trip.

use codelim::*;
use num::{BigInt, BigRational, BigUint, One, Zero};
use proptest::prelude::*;

fn radix(d: u32) -> Radix {
    Radix::new(d).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn width_value_tracks_rationals(
        d in 2u32..=5,
        a in 0u64..5000,
        ea in -6i64..=6,
        b in 0u64..5000,
        eb in -6i64..=6,
    ) {
        let r = radix(d);
        let wa = WidthValue::new(r, BigUint::from(a), ea);
        let wb = WidthValue::new(r, BigUint::from(b), eb);
        let pow = |e: i64| -> BigRational {
            let base = BigRational::from(BigInt::from(d));
            let mut acc = BigRational::one();
            for _ in 0..e.unsigned_abs() {
                acc *= &base;
            }
            if e >= 0 { acc.recip() } else { acc }
        };
        let ra = BigRational::from(BigInt::from(a)) * pow(ea);
        let rb = BigRational::from(BigInt::from(b)) * pow(eb);
        prop_assert_eq!(wa.to_rational(r), ra.clone());
        prop_assert_eq!(wa.add(&wb, r).to_rational(r), &ra + &rb);
        prop_assert_eq!(wa.cmp_with(&wb, r), ra.cmp(&rb));
        match wa.checked_sub(&wb, r) {
            Some(diff) => prop_assert_eq!(diff.to_rational(r), &ra - &rb),
            None => prop_assert!(ra < rb),
        }
        // Equal values compare equal structurally, whatever the input scale.
        let rescaled = WidthValue::new(
            r,
            BigUint::from(a) * BigUint::from(d).pow(3),
            ea + 3,
        );
        prop_assert_eq!(&wa, &rescaled);
    }

    #[test]
    fn padding_invariants(n in 1u64..500, d in 2u32..=9) {
        let padded = pad_dummies(n, radix(d));
        prop_assert!(padded >= n);
        prop_assert!(padded - n < u64::from(d) - 1);
        prop_assert_eq!(padded % u64::from(d - 1), 1 % u64::from(d - 1));
    }

    #[test]
    fn canonical_books_round_trip(
        seed_weights in proptest::collection::vec(1u32..=40, 2..=10),
        d_idx in 0usize..4,
        message in proptest::collection::vec(0usize..10, 0..=30),
    ) {
        let d = [2u32, 3, 4, 10][d_idx];
        let r = radix(d);
        let weights: Vec<BigRational> =
            seed_weights.iter().map(|&w| rat(i64::from(w), 1)).collect();
        let wv = WeightVector::new(&weights, r).unwrap();
        let hard_cap = ((wv.n_padded() as u32) - 1) / (d - 1);
        let problem = CodingProblem::new(
            &weights, r, LengthBounds::new(0, hard_cap.max(1)).unwrap(), Penalty::Linear,
        ).unwrap();
        let result = solve(&problem).unwrap();
        let book = assign_canonical(&result.lengths, r).unwrap();

        // Output lengths are exactly the input lengths.
        prop_assert_eq!(&book.lengths(), &result.lengths);
        // Prefix-freedom by pairwise scan.
        let words = book.codewords();
        for i in 0..words.len() {
            for j in 0..words.len() {
                if i != j {
                    prop_assert!(!words[j].starts_with(words[i].as_slice()));
                }
            }
        }
        // Round trip for an arbitrary in-range message.
        let message: Vec<usize> =
            message.into_iter().map(|s| s % weights.len()).collect();
        let stream = encode(&message, &book).unwrap();
        prop_assert_eq!(decode(&stream, &book).unwrap(), message);
    }

    #[test]
    fn canonical_prefix_free_with_kraft_slack(
        seed_weights in proptest::collection::vec(1u32..=40, 3..=10),
        drop in 0usize..3,
    ) {
        // Dropping symbols from a full code leaves kraft < 1; canonical
        // assignment must still be prefix-free.
        let r = radix(2);
        let weights: Vec<BigRational> =
            seed_weights.iter().map(|&w| rat(i64::from(w), 1)).collect();
        let wv = WeightVector::new(&weights, r).unwrap();
        let lengths = oracle::reference_huffman(&wv, r);
        let keep = &lengths[..lengths.len() - drop.min(lengths.len() - 1)];
        prop_assert!(kraft_sum(keep, r) <= BigRational::one());
        let book = assign_canonical(keep, r).unwrap();
        let words = book.codewords();
        for i in 0..words.len() {
            for j in 0..words.len() {
                if i != j {
                    prop_assert!(!words[j].starts_with(words[i].as_slice()));
                }
            }
        }
    }

    #[test]
    fn kraft_equality_is_exact_for_solved_codes(
        seed_weights in proptest::collection::vec((1u32..=60, 1u32..=9), 2..=8),
        d in 2u32..=4,
        span in 1u32..=6,
    ) {
        let r = radix(d);
        let weights: Vec<BigRational> = seed_weights
            .iter()
            .map(|&(n, den)| rat(i64::from(n), i64::from(den)))
            .collect();
        let problem = match CodingProblem::new(
            &weights, r, LengthBounds::new(0, span).unwrap(), Penalty::Linear,
        ) {
            Ok(p) => p,
            Err(e) if e.is_infeasible() => return Ok(()),
            Err(e) => panic!("unexpected error: {e}"),
        };
        let result = solve(&problem).unwrap();
        prop_assert!(kraft_sum(&result.padded_lengths, r).is_one());
        prop_assert!(result.kraft <= BigRational::one());
    }

    #[test]
    fn penalty_tables_stay_convex(
        t_num in 1i64..=4,
        t_den in 1i64..=6,
        l_min in 0u32..=3,
        d in 2u32..=4,
    ) {
        let penalty = Penalty::Exponential {
            t: rat(t_num, t_den),
            precision: Penalty::default_precision(),
        };
        let table = penalty.table(l_min, radix(d), 8).unwrap();
        for delta in 1..=8u32 {
            prop_assert!(table.diff(delta) >= BigRational::zero());
            if delta >= 2 {
                prop_assert!(table.diff(delta) >= table.diff(delta - 1));
            }
        }
    }
}
