//! Numeric kernels: a numerically stable binomial pmf/tail and small
//! floating-point helpers shared across modules.
//!
//! The pmf uses the saddle-point decomposition (Stirling-error series plus
//! binomial deviance) so terms keep full relative precision even for n in
//! the thousands; tails are summed over the smaller side with a compensated
//! accumulator.

/// ln(2*pi)
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Values within this distance of an integer are treated as that integer
/// before ceil/floor. Threshold expressions like (alpha+eps1)*M are exact
/// integers mathematically more often than in f64 arithmetic.
const SNAP_EPS: f64 = 1e-9;

pub(crate) fn ceil_snapped(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < SNAP_EPS {
        r as i64
    } else {
        v.ceil() as i64
    }
}

pub(crate) fn floor_snapped(v: f64) -> i64 {
    let r = v.round();
    if (v - r).abs() < SNAP_EPS {
        r as i64
    } else {
        v.floor() as i64
    }
}

/// Mixes a master seed with a stream index into an independent sub-seed
/// (splitmix64-style finalizer), so parallel workers can derive their RNG
/// from (seed, index) without coordination.
pub(crate) fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Kahan compensated accumulator.
#[derive(Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, value: f64) {
        let y = value - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

// stirlerr(n) = ln(n!) - ln(sqrt(2*pi*n) * (n/e)^n) at integer n.
const STIRLERR_TABLE: [f64; 16] = [
    0.0, // n = 0, never used: the pmf handles x == 0 and x == n directly
    0.081_061_466_795_327_26,
    0.041_340_695_955_409_29,
    0.027_677_925_684_998_34,
    0.020_790_672_103_765_093,
    0.016_644_691_189_821_193,
    0.013_876_128_823_070_748,
    0.011_896_709_945_891_77,
    0.010_411_265_261_972_096,
    0.009_255_462_182_712_733,
    0.008_330_563_433_362_87,
    0.007_573_675_487_951_841,
    0.006_942_840_107_209_53,
    0.006_408_994_188_004_207,
    0.005_951_370_112_758_848,
    0.005_554_733_551_962_801,
];

const S0: f64 = 1.0 / 12.0;
const S1: f64 = 1.0 / 360.0;
const S2: f64 = 1.0 / 1260.0;
const S3: f64 = 1.0 / 1680.0;
const S4: f64 = 1.0 / 1188.0;

fn stirlerr(n: u64) -> f64 {
    if n <= 15 {
        return STIRLERR_TABLE[n as usize];
    }
    let nf = n as f64;
    let nn = nf * nf;
    if n > 500 {
        (S0 - S1 / nn) / nf
    } else if n > 80 {
        (S0 - (S1 - S2 / nn) / nn) / nf
    } else if n > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / nf
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / nf
    }
}

/// Binomial deviance term x*ln(x/np) + np - x, evaluated by series when
/// x is close to np to avoid cancellation.
fn bd0(x: f64, np: f64) -> f64 {
    if (x - np).abs() < 0.1 * (x + np) {
        let mut v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        v *= v;
        let mut j = 1u32;
        loop {
            ej *= v;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
            j += 1;
        }
    }
    x * (x / np).ln() + np - x
}

/// P(X = x) for X ~ Binomial(n, p).
pub(crate) fn binom_pmf(n: u64, x: u64, p: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    debug_assert!(x <= n);
    let q = 1.0 - p;
    if p == 0.0 {
        return if x == 0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    let nf = n as f64;
    if x == 0 {
        return (nf * (-p).ln_1p()).exp();
    }
    if x == n {
        return (nf * p.ln()).exp();
    }
    let xf = x as f64;
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(xf, nf * p) - bd0(nf - xf, nf * q);
    let lf = LN_2PI + xf.ln() + (-xf / nf).ln_1p();
    (lc - 0.5 * lf).exp()
}

/// Upper tail P(X >= x) for X ~ Binomial(n, p); x may be any integer.
/// Returns 1 for x <= 0 and 0 for x > n. Sums whichever side of the
/// distribution has fewer terms, with compensated summation.
pub(crate) fn binom_tail_upper(p: f64, n: u64, x: i64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&p));
    if x <= 0 {
        return 1.0;
    }
    if x as u64 > n {
        return 0.0;
    }
    let x = x as u64;
    if p == 0.0 {
        return 0.0; // x >= 1
    }
    if p == 1.0 {
        return 1.0; // x <= n
    }
    let q = 1.0 - p;
    let mean = n as f64 * p;
    let mut acc = KahanSum::default();
    if (x as f64) <= mean {
        // complement of the (smaller) lower sum over 0..x
        let mut term = binom_pmf(n, x - 1, p);
        let mut i = x - 1;
        loop {
            acc.add(term);
            if i == 0 {
                break;
            }
            // T_{i-1} = T_i * (i * q) / ((n - i + 1) * p)
            term *= (i as f64 * q) / ((n - i + 1) as f64 * p);
            i -= 1;
        }
        (1.0 - acc.value()).clamp(0.0, 1.0)
    } else {
        let mut term = binom_pmf(n, x, p);
        let mut i = x;
        loop {
            acc.add(term);
            if i == n {
                break;
            }
            // T_{i+1} = T_i * ((n - i) * p) / ((i + 1) * q)
            term *= ((n - i) as f64 * p) / ((i + 1) as f64 * q);
            i += 1;
        }
        acc.value().clamp(0.0, 1.0)
    }
}

/// Ordinary least squares fit y = intercept + slope * x.
/// Returns (slope, intercept, r_squared).
pub(crate) fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    debug_assert_eq!(xs.len(), ys.len());
    debug_assert!(xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if ss_tot <= f64::MIN_POSITIVE {
        1.0 // constant data is fit perfectly by the constant line
    } else {
        1.0 - ss_res / ss_tot
    };
    (slope, intercept, r_squared)
}
