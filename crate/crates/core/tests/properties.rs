//! Randomized invariants over the code/decoder/estimator surface.

use parity_codes::codes::{AttributeString, OutputCode};
use parity_codes::decoder::{decode_nearest, hamming_distance};
use parity_codes::estimator::binomial_tail;
use parity_codes::xorlearn::quad_transform;
use proptest::prelude::*;

fn family(k: usize, which: u8) -> OutputCode {
    match which % 3 {
        0 => OutputCode::identity(k).unwrap(),
        1 => OutputCode::repetition(k, 3).unwrap(),
        _ => OutputCode::pairwise_parity(k.max(2)).unwrap(),
    }
}

proptest! {
    #[test]
    fn encode_is_linear(k in 2usize..10, which in 0u8..3, a in any::<u32>(), b in any::<u32>()) {
        let code = family(k, which);
        let k = code.k();
        let mask = (1u32 << k) - 1;
        let xa = AttributeString::from_index(k, a & mask).unwrap();
        let xb = AttributeString::from_index(k, b & mask).unwrap();
        let sum = xa.xor(&xb).unwrap();
        let lhs = code.encode(&sum).unwrap();
        let ya = code.encode(&xa).unwrap();
        let yb = code.encode(&xb).unwrap();
        // XOR of the two codewords, bit by bit
        let bits: Vec<u8> = (0..code.n()).map(|i| ya.bit(i) ^ yb.bit(i)).collect();
        prop_assert_eq!(lhs.to_string(), bits.iter().map(|b| b.to_string()).collect::<String>());
    }

    #[test]
    fn decode_inverts_encode(k in 1usize..9, which in 0u8..3, v in any::<u32>()) {
        let code = family(k, which);
        let k = code.k();
        let m = AttributeString::from_index(k, v & ((1 << k) - 1)).unwrap();
        let r = decode_nearest(&code, &code.encode(&m).unwrap()).unwrap();
        prop_assert_eq!(r.message, m);
        prop_assert_eq!(r.distance, 0);
        prop_assert!(!r.tie);
    }

    #[test]
    fn decoded_distance_is_consistent(k in 2usize..7, v in any::<u64>(), which in 0u8..3) {
        let code = family(k, which);
        let bits: Vec<u8> = (0..code.n()).map(|i| (v >> (i % 64) & 1) as u8).collect();
        let obs = parity_codes::codes::OutputString::from_bits(&bits).unwrap();
        let r = decode_nearest(&code, &obs).unwrap();
        let cw = code.encode(&r.message).unwrap();
        prop_assert_eq!(r.distance, hamming_distance(&cw, &obs).unwrap());
    }

    #[test]
    fn binomial_tail_is_a_probability_and_monotone(p in 0.0f64..=1.0, n in 0u64..400) {
        let mut last = 1.0f64;
        for x in 0..=(n as i64 + 1) {
            let v = binomial_tail(p, n, x).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!(v <= last + 1e-14);
            last = v;
        }
    }

    #[test]
    fn quad_transform_keeps_linear_prefix(x in prop::collection::vec(-10.0f64..10.0, 2..10)) {
        let t = quad_transform(&x).unwrap();
        let d = x.len();
        prop_assert_eq!(t.len(), d + d * (d - 1) / 2);
        prop_assert_eq!(&t[..d], &x[..]);
        // last entry is the product of the final pair
        prop_assert_eq!(t[t.len() - 1], x[d - 2] * x[d - 1]);
    }
}
