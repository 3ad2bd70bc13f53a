//! Cross-checks the binomial tail against exact rational arithmetic.
//!
//! The oracle sums C(n,i) * a^i * (b-a)^(n-i) over the tail as big
//! integers with denominator b^n, then converts the ratio to f64 by binary
//! scaling. It shares nothing with the library's floating-point path.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use parity_codes::estimator::binomial_tail;

/// floor-free ratio -> f64 via 64-bit scaling; accurate to ~2^-62 relative.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift: i64 = den.bits() as i64 - num.bits() as i64 + 63;
    let scaled = if shift >= 0 {
        num << shift as u64
    } else {
        num >> (-shift) as u64
    };
    let q = (scaled / den).to_f64().expect("quotient fits in f64 range");
    q * 2f64.powi(-shift as i32)
}

/// Exact P(X >= x) for X ~ Binomial(n, a/b).
fn tail_exact(a: u64, b: u64, n: u64, x: u64) -> f64 {
    assert!(a <= b && x <= n);
    let big_a = BigUint::from(a);
    let big_c = BigUint::from(b - a);
    // start at i = x: C(n,x) * a^x * (b-a)^(n-x)
    let mut coeff = BigUint::one();
    for i in 0..x {
        coeff = coeff * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    let mut term = &coeff * big_a.pow(x as u32) * big_c.pow((n - x) as u32);
    let mut numer = BigUint::zero();
    for i in x..=n {
        numer += &term;
        if i < n {
            // T_{i+1} = T_i * (n-i)/(i+1) * a/(b-a); the division is exact
            // only after the multiplications, so order matters
            term = term * BigUint::from(n - i) * &big_a / (BigUint::from(i + 1) * &big_c);
        }
        if big_c.is_zero() {
            break; // a == b: only the i = n term is nonzero anyway
        }
    }
    ratio_to_f64(&numer, &BigUint::from(b).pow(n as u32))
}

#[test]
fn tail_matches_exact_rationals_on_grid() {
    for n in [1u64, 2, 7, 20, 55, 128, 200] {
        for (a, b) in [
            (1u64, 10u64),
            (1, 2),
            (3, 10),
            (7, 10),
            (9, 10),
            (1, 7),
            (2, 3),
        ] {
            let p = a as f64 / b as f64;
            let step = (n / 12).max(1);
            for x in (0..=n).step_by(step as usize) {
                let exact = tail_exact(a, b, n, x);
                let got = binomial_tail(p, n, x as i64).unwrap();
                assert!(
                    (got - exact).abs() <= 1e-12,
                    "n={n} p={a}/{b} x={x}: got {got}, exact {exact}"
                );
            }
        }
    }
}

#[test]
fn tail_matches_exact_rationals_at_n_10000() {
    for x in [4900u64, 5000, 5100, 5300] {
        let exact = tail_exact(1, 2, 10_000, x);
        let got = binomial_tail(0.5, 10_000, x as i64).unwrap();
        assert!(
            (got - exact).abs() <= 1e-12,
            "x={x}: got {got}, exact {exact}, diff {:e}",
            (got - exact).abs()
        );
    }
}

#[test]
fn tail_matches_exact_rationals_in_far_tail() {
    // small probabilities: relative structure must survive
    let exact = tail_exact(1, 10, 100, 40);
    let got = binomial_tail(0.1, 100, 40).unwrap();
    assert!((got - exact).abs() <= 1e-12 && (got / exact - 1.0).abs() < 1e-10);

    let exact = tail_exact(1, 2, 20, 14);
    let got = binomial_tail(0.5, 20, 14).unwrap();
    assert!((got - exact).abs() <= 1e-15);
}
