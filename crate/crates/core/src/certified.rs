//! Certified numerics: values with rigorous error bounds, evaluation
//! configuration, and bounds for tails of power-product series.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// How the part of a series beyond the cutoff is handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    /// Report the truncated sum; the tail only enters the error bound.
    BoundOnly,
    /// Add an Euler–Maclaurin estimate of the tail; its error enters the bound.
    IntegralCorrection,
}

/// Evaluation settings shared by all series evaluators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Largest summation index per variable.
    pub cutoff: usize,
    pub tail_mode: TailMode,
    /// When set, the cutoff is doubled until the error bound meets this target
    /// or `max_cutoff` is reached.
    pub target_abs_err: Option<f64>,
    pub max_cutoff: usize,
    /// Evaluate even when the convergence hypotheses are not met.
    pub override_domain: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            cutoff: 2000,
            tail_mode: TailMode::IntegralCorrection,
            target_abs_err: None,
            max_cutoff: 1 << 21,
            override_domain: false,
        }
    }
}

impl EvalConfig {
    pub fn with_cutoff(cutoff: usize) -> Self {
        EvalConfig { cutoff: cutoff.max(1), ..Default::default() }
    }

    pub fn bound_only(mut self) -> Self {
        self.tail_mode = TailMode::BoundOnly;
        self
    }

    pub fn with_override(mut self) -> Self {
        self.override_domain = true;
        self
    }

    /// Runs `eval` at the configured cutoff, doubling it while a target
    /// accuracy is set and not yet met.
    pub fn adaptive<E>(&self, mut eval: impl FnMut(usize) -> Result<Approx, E>) -> Result<Approx, E> {
        let mut m = self.cutoff.max(1);
        loop {
            let a = eval(m)?;
            match self.target_abs_err {
                Some(t) if a.err_bound > t && m * 2 <= self.max_cutoff => m *= 2,
                _ => return Ok(a),
            }
        }
    }
}

/// A complex value with a rigorous bound on its distance to the true value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approx {
    pub value: Complex64,
    pub err_bound: f64,
}

impl Approx {
    pub fn new(value: Complex64, err_bound: f64) -> Self {
        Approx { value, err_bound }
    }

    pub fn exact(value: Complex64) -> Self {
        Approx { value, err_bound: 0.0 }
    }

    pub fn real(v: f64) -> Self {
        Approx::exact(Complex64::new(v, 0.0))
    }

    pub fn zero() -> Self {
        Approx::real(0.0)
    }

    pub fn one() -> Self {
        Approx::real(1.0)
    }

    /// Upper bound on the modulus of the true value.
    pub fn abs_upper(&self) -> f64 {
        self.value.norm() + self.err_bound
    }

    /// Whether `truth` is within the error bound (plus `slack`).
    pub fn contains(&self, truth: Complex64, slack: f64) -> bool {
        (self.value - truth).norm() <= self.err_bound + slack
    }

    pub fn scale(self, c: f64) -> Self {
        Approx { value: self.value * c, err_bound: self.err_bound * c.abs() }
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, o: Approx) -> Approx {
        Approx { value: self.value + o.value, err_bound: self.err_bound + o.err_bound }
    }
}

impl AddAssign for Approx {
    fn add_assign(&mut self, o: Approx) {
        *self = *self + o;
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, o: Approx) -> Approx {
        Approx { value: self.value - o.value, err_bound: self.err_bound + o.err_bound }
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx { value: -self.value, err_bound: self.err_bound }
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, o: Approx) -> Approx {
        let err = self.value.norm() * o.err_bound + o.value.norm() * self.err_bound + self.err_bound * o.err_bound;
        Approx { value: self.value * o.value, err_bound: err }
    }
}

impl std::iter::Sum for Approx {
    fn sum<I: Iterator<Item = Approx>>(iter: I) -> Approx {
        iter.fold(Approx::zero(), |a, b| a + b)
    }
}

/// `base^{-s}` for a positive real base.
#[inline]
pub fn inv_pow(base: f64, s: Complex64) -> Complex64 {
    if s.im == 0.0 {
        Complex64::new(base.powf(-s.re), 0.0)
    } else {
        (-s * base.ln()).exp()
    }
}

/// One factor `(m + x)^{-s}` of a power product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFactor {
    pub s: Complex64,
    pub x: f64,
}

impl PowerFactor {
    pub fn new(s: Complex64, x: f64) -> Self {
        PowerFactor { s, x }
    }
}

/// Estimate and bounds for `Σ_{m ≥ a} Π_c (m + x_c)^{-s_c}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailEstimate {
    pub estimate: Complex64,
    /// Bound on `|estimate - true tail|`.
    pub err: f64,
    /// Bound on `Σ_{m ≥ a} |term|`.
    pub abs: f64,
}

impl TailEstimate {
    fn divergent() -> Self {
        TailEstimate { estimate: Complex64::new(0.0, 0.0), err: f64::INFINITY, abs: f64::INFINITY }
    }

    pub fn as_approx(&self) -> Approx {
        Approx::new(self.estimate, self.err)
    }
}

fn product_at(factors: &[PowerFactor], m: f64) -> Complex64 {
    factors.iter().fold(Complex64::new(1.0, 0.0), |acc, f| acc * inv_pow(m + f.x, f.s))
}

/// `κ = Π_c max(1, ((a + x_c)/(a + x0))^{-σ_c})`, so that for `t ≥ a`,
/// `Π_c (t + x_c)^{-σ_c} ≤ κ (t + x0)^{-σ}` whenever every `x_c ≥ x0`.
fn kappa(factors: &[PowerFactor], a: f64, x0: f64) -> f64 {
    factors
        .iter()
        .map(|f| ((a + f.x) / (a + x0)).powf(-f.s.re).max(1.0))
        .product()
}

/// Upper bound on `Σ_{m ≥ a} Π_c |(m + x_c)^{-s_c}|`; infinite when the
/// total real exponent is at most 1.
pub fn power_tail_abs(factors: &[PowerFactor], a: u64) -> f64 {
    let sigma: f64 = factors.iter().map(|f| f.s.re).sum();
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let x0 = factors.iter().map(|f| f.x).fold(f64::INFINITY, f64::min);
    let x0 = if x0.is_finite() { x0 } else { 0.0 };
    let a = a as f64;
    if a + x0 <= 0.0 {
        return f64::INFINITY;
    }
    let u = a + x0;
    kappa(factors, a, x0) * (u.powf(-sigma) + u.powf(1.0 - sigma) / (sigma - 1.0))
}

/// Euler–Maclaurin estimate of `Σ_{m ≥ a} Π_c (m + x_c)^{-s_c}` with a
/// rigorous error bound.
///
/// Terms before `b = max(a, 2·max δ - x0, 8 S_abs)` are summed directly, where
/// `x0 = min x_c` and `δ_c = x_c - x0`. From `b` on, the tail equals
/// `∫_b^∞ f + f(b)/2 - f'(b)/12 + R` with `|R| ≤ (1/12)∫_b^∞ |f''|`, and the
/// integral is expanded as `Σ_k d_k (b+x0)^{1-S-k}/(S+k-1)` where `d_k` are
/// the coefficients of `Π_c (1 + δ_c w)^{-s_c}`.
pub fn power_tail(factors: &[PowerFactor], a: u64) -> TailEstimate {
    let s_tot: Complex64 = factors.iter().map(|f| f.s).sum();
    let sigma = s_tot.re;
    if sigma <= 1.0 || factors.is_empty() {
        return TailEstimate::divergent();
    }
    let s_abs: f64 = factors.iter().map(|f| f.s.norm()).sum();
    let x0 = factors.iter().map(|f| f.x).fold(f64::INFINITY, f64::min);
    let dmax = factors.iter().map(|f| f.x - x0).fold(0.0, f64::max);
    if (a as f64) + x0 <= 0.0 {
        return TailEstimate::divergent();
    }
    let b_min = (2.0 * dmax - x0).max(8.0 * s_abs).max(1.0).ceil();
    let b = if b_min > a as f64 { b_min as u64 } else { a };

    let mut head = Complex64::new(0.0, 0.0);
    let mut head_abs = 0.0;
    for m in a..b {
        let t = product_at(factors, m as f64);
        head += t;
        head_abs += t.norm();
    }

    let bf = b as f64;
    let u = bf + x0;
    let rho = dmax / u;

    // Coefficients of Π_c (1 + δ_c w)^{-s_c} up to degree K.
    let kmax = choose_degree(s_abs, rho);
    let mut d = vec![Complex64::new(0.0, 0.0); kmax + 1];
    d[0] = Complex64::new(1.0, 0.0);
    for f in factors {
        let delta = f.x - x0;
        if delta == 0.0 {
            continue;
        }
        let mut c = vec![Complex64::new(0.0, 0.0); kmax + 1];
        c[0] = Complex64::new(1.0, 0.0);
        for k in 1..=kmax {
            c[k] = c[k - 1] * (-f.s - (k as f64 - 1.0)) / (k as f64) * delta;
        }
        let mut nd = vec![Complex64::new(0.0, 0.0); kmax + 1];
        for i in 0..=kmax {
            if d[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..=kmax - i {
                nd[i + j] += d[i] * c[j];
            }
        }
        d = nd;
    }
    let ln_u = u.ln();
    let mut integral = Complex64::new(0.0, 0.0);
    for (k, dk) in d.iter().enumerate() {
        let e = Complex64::new(1.0 - k as f64, 0.0) - s_tot;
        integral += dk * (e * ln_u).exp() / (s_tot + (k as f64 - 1.0));
    }
    let series_rem = if dmax == 0.0 {
        0.0
    } else {
        u.powf(1.0 - sigma) / (sigma - 1.0) * binomial_tail(s_abs, rho, kmax)
    };

    let fb = product_at(factors, bf);
    let dlog: Complex64 = factors.iter().map(|f| -f.s / (bf + f.x)).sum();
    let fpb = fb * dlog;
    let em = integral + fb * 0.5 - fpb / 12.0;
    let kap = kappa(factors, bf, x0);
    let em_err = kap * (s_abs * s_abs + s_abs) * u.powf(-sigma - 1.0) / (12.0 * (sigma + 1.0));
    let rounding = 1e-15 * (em.norm() + head_abs);

    TailEstimate {
        estimate: head + em,
        err: em_err + series_rem + rounding,
        abs: head_abs + kap * (u.powf(-sigma) + u.powf(1.0 - sigma) / (sigma - 1.0)),
    }
}

/// Smallest `K` such that the majorant tail `Σ_{k>K} C(S+k-1, k) ρ^k` is
/// negligible, capped at 400.
fn choose_degree(s_abs: f64, rho: f64) -> usize {
    if rho == 0.0 {
        return 0;
    }
    let mut k = 0usize;
    let mut term = 1.0f64;
    loop {
        let next = term * (s_abs + k as f64) / (k as f64 + 1.0) * rho;
        if (next < 1e-20 && (s_abs + k as f64 + 1.0) / (k as f64 + 2.0) * rho < 0.75) || k >= 400 {
            return k;
        }
        term = next;
        k += 1;
    }
}

/// Bound on `Σ_{k>K} C(S+k-1, k) ρ^k` for `ρ ≤ 1/2`.
fn binomial_tail(s_abs: f64, rho: f64, kmax: usize) -> f64 {
    let mut term = 1.0f64;
    for k in 0..=kmax {
        term *= (s_abs + k as f64) / (k as f64 + 1.0) * rho;
    }
    let ratio = ((s_abs + kmax as f64 + 1.0) / (kmax as f64 + 2.0) * rho).max(rho);
    if ratio >= 1.0 {
        f64::INFINITY
    } else {
        term / (1.0 - ratio)
    }
}

/// Bound on `Σ_{m ≥ a} m^{-σ} (1 + ln m)^k` for `σ > 1`, `a ≥ 1`.
pub fn log_power_tail_bound(sigma: f64, k: u32, a: u64) -> f64 {
    if sigma <= 1.0 {
        return f64::INFINITY;
    }
    let a = a.max(1);
    let f = |t: f64| t.powf(-sigma) * (1.0 + t.ln()).powi(k as i32);
    // f decreases once t ≥ exp(k/σ - 1).
    let t0 = ((k as f64) / sigma - 1.0).exp();
    let b = a.max(t0.ceil() as u64 + 1);
    let head: f64 = (a..b).map(|m| f(m as f64)).sum();
    let bf = b as f64;
    let c = sigma - 1.0;
    let x = c * (1.0 + bf.ln());
    let mut poly = 0.0;
    let mut term = 1.0;
    for i in 0..=k {
        if i > 0 {
            term *= x / i as f64;
        }
        poly += term;
    }
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    head + f(bf) + bf.powf(-c) * fact * poly / c.powi(k as i32 + 1)
}

/// Bound on `Σ_{m ≥ a} Π_{c ∈ strip} |(m + x_c)^{-s_c}| · C · (1 + ln m)^logs`,
/// used when the remaining variables only admit logarithmically growing
/// partial sums.
pub fn log_weighted_tail(strip: &[PowerFactor], constant: f64, logs: u32, a: u64) -> f64 {
    let a = a.max(1);
    let af = a as f64;
    if strip.iter().any(|f| af + f.x <= 0.0) {
        return f64::INFINITY;
    }
    let sigma: f64 = strip.iter().map(|f| f.s.re).sum();
    let kap: f64 = strip.iter().map(|f| ((af + f.x) / af).powf(-f.s.re).max(1.0)).product();
    constant * kap * log_power_tail_bound(sigma, logs, a)
}

/// Growth model of one partial sum `H(n) = Σ_{k ≤ n} |(k + x)^{-s}|` beyond a
/// cutoff `M` where `H(M)` is known: either bounded by a constant, or by
/// `C (1 + ln n)` when `Re s = 1`. Returns `(C, is_log)`, or `None` when the
/// partial sums grow polynomially.
pub fn partial_sum_growth(f: PowerFactor, h_at_m: f64, m: u64) -> Option<(f64, bool)> {
    let s = f.s.re;
    if s > 1.0 {
        Some((h_at_m + power_tail_abs(&[f], m + 1), false))
    } else if s == 1.0 {
        let a = (m + 1) as f64;
        if a + f.x <= 0.0 {
            return None;
        }
        let q = (a / (a + f.x)).max(1.0);
        Some((h_at_m.max(q), true))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn brute(factors: &[PowerFactor], a: u64, n: u64) -> Complex64 {
        (a..n).map(|m| product_at(factors, m as f64)).sum()
    }

    #[test]
    fn zeta_two_tail() {
        // Σ_{m ≥ 1} m^{-2} = π²/6.
        let t = power_tail(&[PowerFactor::new(c(2.0), 0.0)], 1);
        let exact = std::f64::consts::PI.powi(2) / 6.0;
        assert!((t.estimate.re - exact).abs() <= t.err + 1e-14, "{t:?}");
        assert!(t.err < 1e-4);
        assert!(t.abs >= exact);
    }

    #[test]
    fn mixed_shift_tail_against_long_sum() {
        let f = [PowerFactor::new(c(2.0), 0.3), PowerFactor::new(c(3.0), 0.0), PowerFactor::new(Complex64::new(1.0, 2.0), 0.5)];
        let a = 50;
        let t = power_tail(&f, a);
        // Remaining tail beyond 10^6 is below 10^-30.
        let b = brute(&f, a, 1_000_000);
        assert!((t.estimate - b).norm() <= t.err + 1e-15, "{t:?} vs {b}");
        assert!(t.err < 1e-9);
        assert!(brute(&f, a, 1_000_000).norm() <= t.abs);
    }

    #[test]
    fn negative_exponent_factor() {
        let f = [PowerFactor::new(c(-1.0), 0.5), PowerFactor::new(c(4.0), 0.0)];
        let t = power_tail(&f, 10);
        let b = brute(&f, 10, 2_000_000);
        let rest = 0.5 / (2_000_000f64).powi(2) * 1.01;
        assert!((t.estimate - b).norm() <= t.err + rest, "{t:?} vs {b}");
    }

    #[test]
    fn divergent_is_infinite() {
        let t = power_tail(&[PowerFactor::new(c(1.0), 0.0)], 5);
        assert!(t.err.is_infinite());
        assert!(power_tail_abs(&[PowerFactor::new(c(1.0), 0.0)], 5).is_infinite());
    }

    #[test]
    fn log_tail_bound_dominates() {
        for &(s, k, a) in &[(2.0, 1u32, 10u64), (1.5, 2, 3), (3.0, 0, 1)] {
            let b = log_power_tail_bound(s, k, a);
            let partial: f64 = (a..200_000).map(|m| (m as f64).powf(-s) * (1.0 + (m as f64).ln()).powi(k as i32)).sum();
            assert!(partial <= b, "{s} {k} {a}: {partial} > {b}");
            assert!(b < 3.0 * partial + 1.0);
        }
    }

    #[test]
    fn approx_arithmetic() {
        let a = Approx::new(c(2.0), 0.1);
        let b = Approx::new(c(-3.0), 0.2);
        let p = a * b;
        assert_eq!(p.value, c(-6.0));
        assert!((p.err_bound - (2.0 * 0.2 + 3.0 * 0.1 + 0.02)).abs() < 1e-15);
        assert_eq!((a - b).err_bound, 0.30000000000000004);
        assert!(Approx::new(c(1.0), 0.5).contains(c(1.4), 0.0));
    }
}
