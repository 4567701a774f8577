//! Euler–Zagier multiple zeta-functions of Hurwitz type
//! `ζ`, `ζ*` and `ζ**`, evaluated by prefix-sum dynamic programming with
//! certified tails.
//!
//! Depth conventions: an empty argument list gives exactly 1, and
//! [`by_depth`] maps negative depths to exactly 0.

use num_complex::Complex64;

use crate::certified::{
    inv_pow, log_weighted_tail, partial_sum_growth, power_tail, power_tail_abs, Approx, EvalConfig, PowerFactor,
    TailMode,
};
use crate::error::{Result, ZetaError};

/// Relation between consecutive indices of a chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// `n_k > n_{k-1}`
    Strict,
    /// `n_k ≥ n_{k-1}`
    Weak,
}

/// One variable of a nested chain `0 = n_0 ⋚ n_1 ⋚ ⋯ ⋚ n_r`, contributing the
/// factor `(n_k + x)^{-s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainLevel {
    pub s: Complex64,
    pub x: f64,
    pub step: Step,
    /// Replace the factor by 1 when `n_k = 0`.
    pub omit_at_zero: bool,
}

impl ChainLevel {
    fn factor(&self) -> PowerFactor {
        PowerFactor::new(self.s, self.x)
    }

    fn weight(&self, n: usize) -> Result<Complex64> {
        if n == 0 && self.omit_at_zero {
            return Ok(Complex64::new(1.0, 0.0));
        }
        let base = n as f64 + self.x;
        if base <= 0.0 {
            return Err(ZetaError::Domain(format!(
                "index {n} with shift {} gives a nonpositive base",
                self.x
            )));
        }
        Ok(inv_pow(base, self.s))
    }
}

/// Sum of `Π_k (n_k + x_k)^{-s_k}` over chains `0 = n_0 ⋚ n_1 ⋚ ⋯ ⋚ n_r`,
/// truncated at `n_r ≤ cutoff`, plus a certified tail.
///
/// With `G_k(n)` the partial sum over chains with `n_k ≤ n`, the tail beyond
/// the cutoff `M` is `Σ_{n>M} a_r(n) G_{r-1}(n - ε_r)`, estimated as
/// `G_{r-1}(M) Σ_{n>M} a_r(n)`. The error is at most
/// `|G_{r-1}(M)|·err + R_r^abs · T_{r-1}`, where the absolute tails satisfy
/// `T_k ≤ R_k^abs (Ĝ_{k-1}(M) + T_{k-1})`.
pub fn chain_sum(levels: &[ChainLevel], cutoff: usize, mode: TailMode) -> Result<Approx> {
    let r = levels.len();
    if r == 0 {
        return Ok(Approx::one());
    }
    let m = cutoff.max(1);
    let mut g = vec![Complex64::new(1.0, 0.0); m + 1];
    let mut ga = vec![1.0f64; m + 1];
    // Values of G_{k}(M), Ĝ_k(M) and the absolute tails T_k per level.
    let mut g_at_m = vec![Complex64::new(1.0, 0.0); r + 1];
    let mut ga_at_m = vec![1.0f64; r + 1];
    let mut tails = vec![0.0f64; r + 1];
    // Growth data for the logarithmic fallback: per level (constant, is_log).
    let mut growth: Vec<Option<(f64, bool)>> = Vec::with_capacity(r);
    // Smallest index the current level can take.
    let mut lowest = 0usize;
    for (k, lv) in levels.iter().enumerate() {
        if lv.step == Step::Strict {
            lowest += 1;
        }
        let mut ng = vec![Complex64::new(0.0, 0.0); m + 1];
        let mut nga = vec![0.0f64; m + 1];
        let mut acc = Complex64::new(0.0, 0.0);
        let mut acc_a = 0.0f64;
        let mut single = 0.0f64;
        for n in lowest..=m {
            let p = if lv.step == Step::Strict { n - 1 } else { n };
            let w = lv.weight(n)?;
            acc += w * g[p];
            acc_a += w.norm() * ga[p];
            single += w.norm();
            ng[n] = acc;
            nga[n] = acc_a;
        }
        g = ng;
        ga = nga;
        g_at_m[k + 1] = g[m];
        ga_at_m[k + 1] = ga[m];
        let rabs = power_tail_abs(&[lv.factor()], m as u64 + 1);
        tails[k + 1] = rabs * (ga_at_m[k] + tails[k]);
        growth.push(partial_sum_growth(lv.factor(), single, m as u64));
    }

    let last = levels[r - 1];
    let a = m as u64 + 1;
    let (estimate, est_err) = match mode {
        TailMode::BoundOnly => (Complex64::new(0.0, 0.0), 0.0),
        TailMode::IntegralCorrection => {
            let t = power_tail(&[last.factor()], a);
            (g_at_m[r - 1] * t.estimate, g_at_m[r - 1].norm() * t.err)
        }
    };
    let mut err = match mode {
        TailMode::BoundOnly => tails[r],
        TailMode::IntegralCorrection => est_err + power_tail_abs(&[last.factor()], a) * tails[r - 1],
    };
    if !err.is_finite() {
        // Inner partial sums may grow logarithmically; bound the whole tail.
        let mut constant = 1.0;
        let mut logs = 0;
        for gr in &growth[..r - 1] {
            match gr {
                Some((c, is_log)) => {
                    constant *= c;
                    logs += u32::from(*is_log);
                }
                None => {
                    constant = f64::INFINITY;
                }
            }
        }
        let whole = log_weighted_tail(&[last.factor()], constant, logs, a);
        err = whole + estimate.norm();
    }
    let rounding = 1e-15 * (m as f64).sqrt() * (ga_at_m[r] + estimate.norm());
    Ok(Approx::new(g_at_m[r] + estimate, err + rounding))
}

fn check_domain(s: &[Complex64], cfg: &EvalConfig) -> Result<()> {
    if cfg.override_domain || s.is_empty() {
        return Ok(());
    }
    let r = s.len();
    if s[r - 1].re <= 1.0 {
        return Err(ZetaError::Domain(format!("last exponent needs Re(s) > 1, got {}", s[r - 1].re)));
    }
    if let Some((i, v)) = s[..r - 1].iter().enumerate().find(|(_, v)| v.re < 1.0) {
        return Err(ZetaError::Domain(format!("exponent {} needs Re(s) >= 1, got {}", i + 1, v.re)));
    }
    Ok(())
}

fn check_lengths(s: &[Complex64], y: &[f64]) -> Result<()> {
    if s.len() != y.len() {
        return Err(ZetaError::Precondition(format!("{} exponents but {} shifts", s.len(), y.len())));
    }
    if let Some(v) = y.iter().find(|v| !(**v >= 0.0)) {
        return Err(ZetaError::Domain(format!("shifts must be nonnegative, got {v}")));
    }
    Ok(())
}

fn eval_chain(s: &[Complex64], y: &[f64], steps: impl Fn(usize) -> Step, cfg: &EvalConfig) -> Result<Approx> {
    check_lengths(s, y)?;
    check_domain(s, cfg)?;
    let levels: Vec<ChainLevel> = s
        .iter()
        .zip(y)
        .enumerate()
        .map(|(k, (&s, &x))| ChainLevel { s, x, step: steps(k), omit_at_zero: false })
        .collect();
    cfg.adaptive(|m| chain_sum(&levels, m, cfg.tail_mode))
}

/// `ζ(s_1,…,s_r | y_1,…,y_r) = Σ_{0<m_1<⋯<m_r} Π (m_i + y_i)^{-s_i}`.
pub fn ez_zeta(s: &[Complex64], y: &[f64], cfg: &EvalConfig) -> Result<Approx> {
    eval_chain(s, y, |_| Step::Strict, cfg)
}

/// `ζ*(s | y) = Σ_{0<m_1≤⋯≤m_r} Π (m_i + y_i)^{-s_i}`.
pub fn ez_zeta_star(s: &[Complex64], y: &[f64], cfg: &EvalConfig) -> Result<Approx> {
    eval_chain(s, y, |k| if k == 0 { Step::Strict } else { Step::Weak }, cfg)
}

/// `ζ**(s | y) = Σ_{0≤m_1≤⋯≤m_r} Π (m_i + y_i)^{-s_i}`, requiring `y_i > 0`.
pub fn ez_zeta_star_star(s: &[Complex64], y: &[f64], cfg: &EvalConfig) -> Result<Approx> {
    if let Some(v) = y.iter().find(|v| **v <= 0.0) {
        return Err(ZetaError::Domain(format!("zero-started sums need positive shifts, got {v}")));
    }
    eval_chain(s, y, |_| Step::Weak, cfg)
}

/// Hurwitz zeta `ζ(s, x) = Σ_{m≥0} (m + x)^{-s}`.
pub fn hurwitz(s: Complex64, x: f64, cfg: &EvalConfig) -> Result<Approx> {
    ez_zeta_star_star(&[s], &[x], cfg)
}

/// Applies the depth conventions: depth 0 is exactly 1, negative depth
/// exactly 0, otherwise `eval` is called.
pub fn by_depth(depth: i64, eval: impl FnOnce() -> Result<Approx>) -> Result<Approx> {
    match depth {
        d if d < 0 => Ok(Approx::zero()),
        0 => Ok(Approx::one()),
        _ => eval(),
    }
}

/// Real exponents as complex numbers.
pub fn reals(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg(m: usize) -> EvalConfig {
        EvalConfig::with_cutoff(m)
    }

    /// Nested-loop evaluation of the truncated chain sum.
    fn naive(s: &[f64], y: &[f64], steps: &[Step], m: usize) -> f64 {
        fn rec(k: usize, lo: usize, s: &[f64], y: &[f64], steps: &[Step], m: usize) -> f64 {
            if k == s.len() {
                return 1.0;
            }
            let from = if steps[k] == Step::Strict { lo + 1 } else { lo };
            (from..=m).map(|n| (n as f64 + y[k]).powf(-s[k]) * rec(k + 1, n, s, y, steps, m)).sum()
        }
        rec(0, 0, s, y, steps, m)
    }

    #[test]
    fn conventions() {
        assert_eq!(ez_zeta(&[], &[], &cfg(10)).unwrap(), Approx::one());
        assert_eq!(ez_zeta_star(&[], &[], &cfg(10)).unwrap(), Approx::one());
        assert_eq!(ez_zeta_star_star(&[], &[], &cfg(10)).unwrap(), Approx::one());
        assert_eq!(by_depth(-1, || unreachable!()).unwrap(), Approx::zero());
        assert_eq!(by_depth(0, || unreachable!()).unwrap(), Approx::one());
    }

    #[test]
    fn single_values() {
        let z2 = ez_zeta(&reals(&[2.0]), &[0.0], &cfg(1000)).unwrap();
        assert!(z2.contains(Complex64::new(PI * PI / 6.0, 0.0), 1e-12));
        assert!(z2.err_bound < 1e-9);
        let z4 = hurwitz(Complex64::new(4.0, 0.0), 1.0, &cfg(1000)).unwrap();
        assert!(z4.contains(Complex64::new(PI.powi(4) / 90.0, 0.0), 1e-12));
        let half = ez_zeta_star_star(&reals(&[2.0]), &[0.5], &cfg(1000)).unwrap();
        assert!(half.contains(Complex64::new(PI * PI / 2.0, 0.0), 1e-12));
        let h = hurwitz(Complex64::new(3.0, 0.0), 0.7, &cfg(300)).unwrap();
        let d = ez_zeta_star_star(&reals(&[3.0]), &[0.7], &cfg(300)).unwrap();
        assert_eq!(h, d);
    }

    #[test]
    fn depth_two_values() {
        let v = ez_zeta(&reals(&[2.0, 2.0]), &[0.0, 0.0], &cfg(2000)).unwrap();
        assert!(v.contains(Complex64::new(PI.powi(4) / 120.0, 0.0), 1e-12), "{v:?}");
        assert!(v.err_bound < 1e-6);
        let star = ez_zeta_star(&reals(&[2.0, 2.0]), &[0.0, 0.0], &cfg(2000)).unwrap();
        let z4 = PI.powi(4) / 90.0;
        assert!(star.contains(v.value + z4, v.err_bound + 1e-12));
    }

    #[test]
    fn bound_only_covers_truth() {
        let c = cfg(500).bound_only();
        let v = ez_zeta(&reals(&[2.0, 3.0]), &[0.0, 0.0], &c).unwrap();
        let fine = ez_zeta(&reals(&[2.0, 3.0]), &[0.0, 0.0], &cfg(20000)).unwrap();
        assert!((v.value - fine.value).norm() <= v.err_bound + fine.err_bound);
        assert!(v.value.re <= fine.value.re);
    }

    #[test]
    fn dp_matches_nested_loops() {
        let cases: [(&[f64], &[f64]); 3] = [(&[2.0], &[0.3]), (&[1.0, 2.5], &[0.0, 0.5]), (&[2.0, 1.5, 3.0], &[0.5, 0.25, 1.0])];
        for (s, y) in cases {
            for (kind, steps) in [
                ("strict", vec![Step::Strict; s.len()]),
                ("weak", vec![Step::Weak; s.len()]),
            ] {
                let levels: Vec<ChainLevel> = s
                    .iter()
                    .zip(y)
                    .zip(&steps)
                    .map(|((&s, &x), &step)| ChainLevel { s: Complex64::new(s, 0.0), x, step, omit_at_zero: false })
                    .collect();
                if kind == "weak" && y.contains(&0.0) {
                    continue;
                }
                let m = 60;
                let dp = chain_sum(&levels, m, TailMode::BoundOnly).unwrap().value.re;
                let nv = naive(s, y, &steps, m);
                assert!((dp - nv).abs() <= 1e-12 * nv.abs(), "{kind} {s:?}: {dp} vs {nv}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(ez_zeta(&reals(&[2.0, 1.0]), &[0.0, 0.0], &cfg(10)).is_err());
        assert!(ez_zeta(&reals(&[0.5, 2.0]), &[0.0, 0.0], &cfg(10)).is_err());
        assert!(ez_zeta(&reals(&[1.0, 2.0]), &[0.0, 0.0], &cfg(10)).is_ok());
        assert!(ez_zeta_star_star(&reals(&[2.0]), &[0.0], &cfg(10)).is_err());
        assert!(ez_zeta(&reals(&[2.0, 1.0]), &[0.0, 0.0], &cfg(10).with_override()).is_ok());
    }

    #[test]
    fn borderline_inner_exponent_has_finite_bound() {
        let v = ez_zeta(&reals(&[1.0, 2.0]), &[0.0, 0.0], &cfg(5000)).unwrap();
        // ζ(1,2) = ζ(3) under the convention that the first index is smallest.
        let z3 = 1.2020569031595942;
        assert!(v.err_bound.is_finite());
        assert!(v.contains(Complex64::new(z3, 0.0), 1e-12), "{v:?}");
    }

    #[test]
    fn target_accuracy_raises_cutoff() {
        let mut c = cfg(10);
        c.target_abs_err = Some(1e-10);
        let v = ez_zeta(&reals(&[2.0, 2.0]), &[0.0, 0.0], &c).unwrap();
        assert!(v.err_bound <= 1e-10);
    }
}
