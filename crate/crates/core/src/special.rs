//! Scalar special functions: log-gamma, regularized incomplete beta and gamma,
//! and the standard normal and Student t distribution functions.
//!
//! Public entry points validate their arguments and return [`Error::Domain`]
//! instead of NaN. The crate-internal `*_unchecked` variants skip validation
//! for hot loops whose arguments are already known to be in range.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Probability(f64);

impl Probability {
    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(domain(format!("probability must lie in [0, 1], got {value}")))
        }
    }

    /// Clamps into `[0, 1]`; used for quantities that are probabilities up to rounding.
    pub(crate) fn clamped(value: f64) -> Self {
        Self(value.clamp(0.0, 1.0))
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Probability {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

// Lanczos approximation, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural logarithm of the gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("log_gamma requires finite x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum in its accurate range.
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    if x == 1.0 || x == 2.0 {
        return 0.0;
    }
    let z = x - 1.0;
    let mut sum = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Stirling correction `ln Γ(z) - [(z - ½) ln z - z + ln √(2π)]`, accurate for z ≥ 10.
fn stirling_correction(z: f64) -> f64 {
    let r = 1.0 / z;
    let r2 = r * r;
    r * (1.0 / 12.0 - r2 * (1.0 / 360.0 - r2 * (1.0 / 1260.0 - r2 * (1.0 / 1680.0 - r2 / 1188.0))))
}

/// `ln Γ(x + d) - ln Γ(x)` without the cancellation of two large log-gammas.
pub(crate) fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    let y = x + d;
    if x.min(y) < 10.0 {
        return ln_gamma_unchecked(y) - ln_gamma_unchecked(x);
    }
    (x - 0.5) * (d / x).ln_1p() + d * y.ln() - d + stirling_correction(y) - stirling_correction(x)
}

pub(crate) fn ln_beta(a: f64, b: f64) -> f64 {
    let (small, large) = if a < b { (a, b) } else { (b, a) };
    ln_gamma_unchecked(small) - ln_gamma_ratio(large, small)
}

/// Regularized incomplete beta `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<Probability> {
    if !(a > 0.0 && a.is_finite()) || !(b > 0.0 && b.is_finite()) {
        return Err(domain(format!("incomplete beta requires a, b > 0, got a = {a}, b = {b}")));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(format!("incomplete beta requires x in [0, 1], got {x}")));
    }
    Ok(Probability::clamped(inc_beta(a, b, x, 1.0 - x)))
}

/// `I_x(a, b)` with the complement `y = 1 - x` supplied separately so callers
/// holding an exact `1 - x` do not lose it to rounding.
pub(crate) fn inc_beta(a: f64, b: f64, x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if y <= 0.0 {
        return 1.0;
    }
    if x > a / (a + b) {
        1.0 - inc_beta_cf_scaled(b, a, y, x)
    } else {
        inc_beta_cf_scaled(a, b, x, y)
    }
}

/// Prefactor times the continued fraction; converges for x ≤ a / (a + b).
fn inc_beta_cf_scaled(a: f64, b: f64, x: f64, y: f64) -> f64 {
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    if ln_front < -745.0 {
        return 0.0;
    }
    ln_front.exp() * beta_continued_fraction(a, b, x) / a
}

// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    const MAX_ITER: usize = 20_000;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Lower regularized incomplete gamma `P(a, x)`.
pub fn regularized_gamma_p(a: f64, x: f64) -> Result<Probability> {
    check_gamma_args(a, x)?;
    Ok(Probability::clamped(gamma_p_q(a, x).0))
}

/// Upper regularized incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn regularized_gamma_q(a: f64, x: f64) -> Result<Probability> {
    check_gamma_args(a, x)?;
    Ok(Probability::clamped(gamma_p_q(a, x).1))
}

fn check_gamma_args(a: f64, x: f64) -> Result<()> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain(format!("incomplete gamma requires a > 0, got {a}")));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("incomplete gamma requires x >= 0, got {x}")));
    }
    Ok(())
}

/// Returns `(P(a, x), Q(a, x))`, each computed on its accurate side.
pub(crate) fn gamma_p_q(a: f64, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (0.0, 1.0);
    }
    if x.is_infinite() {
        return (1.0, 0.0);
    }
    let ln_front = a * x.ln() - x - ln_gamma_unchecked(a);
    if x < a + 1.0 {
        // Series.
        let mut ap = a;
        let mut del = 1.0 / a;
        let mut sum = del;
        for _ in 0..10_000 {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if del.abs() < sum.abs() * 1e-17 {
                break;
            }
        }
        let p = (ln_front.exp() * sum).min(1.0);
        (p, 1.0 - p)
    } else {
        // Continued fraction (Lentz).
        const TINY: f64 = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < 1e-16 {
                break;
            }
        }
        let q = (ln_front.exp() * h).min(1.0);
        (1.0 - q, q)
    }
}

/// Standard normal density.
#[inline]
pub fn normal_pdf(z: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * z * z).exp()
}

#[inline]
pub fn normal_ln_pdf(z: f64) -> f64 {
    -LN_SQRT_2PI - 0.5 * z * z
}

/// Standard normal cdf.
#[inline]
pub fn normal_cdf(z: f64) -> Probability {
    Probability::clamped(normal_cdf_unchecked(z))
}

#[inline]
pub(crate) fn normal_cdf_unchecked(z: f64) -> f64 {
    0.5 * libm::erfc(-z * FRAC_1_SQRT_2)
}

/// `Φ(hi) - Φ(lo)` for `hi ≥ lo`, evaluated on the tail where it does not cancel.
pub(crate) fn normal_cdf_diff(hi: f64, lo: f64) -> f64 {
    if lo > 0.0 {
        normal_cdf_unchecked(-lo) - normal_cdf_unchecked(-hi)
    } else {
        normal_cdf_unchecked(hi) - normal_cdf_unchecked(lo)
    }
}

/// Standard normal quantile: Acklam's rational approximation followed by one
/// Halley step against `erfc`, which brings it to full double precision.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("normal quantile requires p in (0, 1), got {p}")));
    }
    Ok(normal_quantile_unchecked(p))
}

pub(crate) fn normal_quantile_unchecked(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    // Halley refinement, done on the lower tail for accuracy.
    let (x, flip) = if x > 0.0 { (-x, true) } else { (x, false) };
    let target = if flip { 1.0 - p } else { p };
    let e = normal_cdf_unchecked(x) - target;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    let refined = x - u / (1.0 + 0.5 * x * u);
    if flip {
        -refined
    } else {
        refined
    }
}

/// Standard Student t density with `nu` degrees of freedom.
pub fn student_t_pdf(nu: f64, t: f64) -> Result<f64> {
    check_nu(nu)?;
    Ok(t_ln_pdf(nu, t).exp())
}

pub(crate) fn t_ln_norm(nu: f64) -> f64 {
    ln_gamma_ratio(0.5 * nu, 0.5) - 0.5 * (nu * PI).ln()
}

#[inline]
pub(crate) fn t_ln_pdf(nu: f64, t: f64) -> f64 {
    t_ln_norm(nu) - 0.5 * (nu + 1.0) * (t * t / nu).ln_1p()
}

/// Standard Student t cdf, via `F(t) = ½ I_{ν/(ν+t²)}(ν/2, ½)` for t ≤ 0.
pub fn student_t_cdf(nu: f64, t: f64) -> Result<Probability> {
    check_nu(nu)?;
    if t.is_nan() {
        return Err(domain("student_t_cdf: t is NaN"));
    }
    Ok(Probability::clamped(t_cdf(nu, t)))
}

fn check_nu(nu: f64) -> Result<()> {
    if nu > 0.0 && !nu.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("degrees of freedom must be > 0, got {nu}")))
    }
}

/// Unchecked Student t cdf.
#[inline]
pub(crate) fn t_cdf(nu: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.5;
    }
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    if nu.is_infinite() {
        return normal_cdf_unchecked(t);
    }
    let t2 = t * t;
    let (x, y) = if t2 < nu {
        let x = nu / (nu + t2);
        (x, t2 / (nu + t2))
    } else {
        let r = nu / t2;
        (r / (1.0 + r), 1.0 / (1.0 + r))
    };
    let tail = 0.5 * inc_beta(0.5 * nu, 0.5, x, y);
    if t < 0.0 {
        tail
    } else {
        1.0 - tail
    }
}

/// `F(hi) - F(lo)` for the standard t, without cancellation when both are in the upper tail.
pub(crate) fn t_cdf_diff(nu: f64, hi: f64, lo: f64) -> f64 {
    if lo > 0.0 {
        t_cdf(nu, -lo) - t_cdf(nu, -hi)
    } else {
        t_cdf(nu, hi) - t_cdf(nu, lo)
    }
}

/// Standard Student t quantile by safeguarded Newton iteration inside a
/// bisection bracket seeded from the normal quantile.
pub fn student_t_quantile(nu: f64, p: f64) -> Result<f64> {
    check_nu(nu)?;
    if !(p > 0.0 && p < 1.0) {
        return Err(domain(format!("student_t_quantile requires p in (0, 1), got {p}")));
    }
    Ok(t_quantile(nu, p))
}

pub(crate) fn t_quantile(nu: f64, p: f64) -> f64 {
    if p == 0.5 {
        return 0.0;
    }
    if p > 0.5 {
        return -t_lower_quantile(nu, 1.0 - p);
    }
    t_lower_quantile(nu, p)
}

// Solves F(q) = p for p < 1/2, so q < 0 and the lower tail carries full precision.
fn t_lower_quantile(nu: f64, p: f64) -> f64 {
    let ln_norm = t_ln_norm(nu);
    let pdf = |t: f64| (ln_norm - 0.5 * (nu + 1.0) * (t * t / nu).ln_1p()).exp();

    let mut hi = 0.0_f64;
    let mut lo = normal_quantile_unchecked(p).min(-1e-3);
    while t_cdf(nu, lo) > p {
        hi = lo;
        lo *= 4.0;
        if lo < -1e300 {
            return f64::NEG_INFINITY;
        }
    }
    let mut x = 0.5 * (lo + hi);
    if t_cdf(nu, x) < p {
        lo = x;
    } else {
        hi = x;
    }
    x = 0.5 * (lo + hi);
    for _ in 0..400 {
        let f = t_cdf(nu, x) - p;
        if f == 0.0 {
            return x;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let d = pdf(x);
        let newton = x - f / d;
        let next = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
            return next;
        }
        if hi - lo <= 4.0 * f64::EPSILON * lo.abs() {
            return next;
        }
        x = next;
    }
    x
}
