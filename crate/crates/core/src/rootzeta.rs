//! Zeta-functions of the root system of type `A_r`, their modified (`•`) and
//! Hurwitz-type variants, and the reductions to Euler–Zagier form.
//!
//! `ζ_r(s, A_r) = Σ_{m_1,…,m_r ≥ 1} Π_{1≤i<j≤r+1} (m_i + ⋯ + m_{j-1})^{-s(i,j)}`.
//!
//! In the `•` variants the first `d` variables start at 0. Without a shift,
//! factors whose segment `m_i,…,m_{j-1}` lies among the first `d` variables
//! and is entirely zero are dropped.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::certified::{inv_pow, Approx, EvalConfig, TailMode};
use crate::error::{Result, ZetaError};
use crate::ezzeta::{chain_sum, ez_zeta, ez_zeta_star_star, ChainLevel, Step};

/// Largest rank evaluated by the general nested sum.
pub const MAX_NESTED_RANK: usize = 4;

/// Exponents `s(i,j)` for `1 ≤ i < j ≤ r+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootExponents {
    r: usize,
    s: BTreeMap<(usize, usize), Complex64>,
}

/// All pairs `(i,j)` in flat order: grouped by `j - i`, then by `i`.
pub fn flat_pairs(r: usize) -> Vec<(usize, usize)> {
    (1..=r).flat_map(|gap| (1..=r + 1 - gap).map(move |i| (i, i + gap))).collect()
}

impl RootExponents {
    pub fn from_pairs(r: usize, pairs: impl IntoIterator<Item = ((usize, usize), Complex64)>) -> Result<Self> {
        let mut s = BTreeMap::new();
        for ((i, j), v) in pairs {
            if !(1 <= i && i < j && j <= r + 1) {
                return Err(ZetaError::Precondition(format!("pair ({i},{j}) is not a root of A_{r}")));
            }
            if s.insert((i, j), v).is_some() {
                return Err(ZetaError::Precondition(format!("pair ({i},{j}) given twice")));
            }
        }
        if s.len() != r * (r + 1) / 2 {
            return Err(ZetaError::Precondition(format!(
                "A_{r} needs {} exponents, got {}",
                r * (r + 1) / 2,
                s.len()
            )));
        }
        Ok(RootExponents { r, s })
    }

    /// Exponents listed as `s(1,2), s(2,3), …, s(r,r+1), s(1,3), …, s(1,r+1)`.
    pub fn from_flat(r: usize, values: &[Complex64]) -> Result<Self> {
        if values.len() != r * (r + 1) / 2 {
            return Err(ZetaError::Precondition(format!(
                "A_{r} needs {} exponents, got {}",
                r * (r + 1) / 2,
                values.len()
            )));
        }
        RootExponents::from_pairs(r, flat_pairs(r).into_iter().zip(values.iter().copied()))
    }

    /// `s(1, ℓ+1) = z_ℓ` and `s(i,j) = 0` for `i ≥ 2`.
    pub fn reduced(z: &[Complex64]) -> Self {
        let r = z.len();
        let s = flat_pairs(r)
            .into_iter()
            .map(|(i, j)| ((i, j), if i == 1 { z[j - 2] } else { Complex64::new(0.0, 0.0) }))
            .collect();
        RootExponents { r, s }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Complex64> {
        self.s.get(&(i, j)).copied()
    }

    pub fn flat(&self) -> Vec<Complex64> {
        flat_pairs(self.r).into_iter().map(|p| self.s[&p]).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.s.iter().map(|(k, v)| (*k, *v))
    }

    /// `s(1,2), …, s(1,r+1)`.
    pub fn first_row(&self) -> Vec<Complex64> {
        (2..=self.r + 1).map(|j| self.s[&(1, j)]).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.s.iter().all(|(&(i, _), v)| i == 1 || *v == Complex64::new(0.0, 0.0))
    }
}

impl fmt::Display for RootExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A_{}[", self.r)?;
        for (k, ((i, j), v)) in flat_pairs(self.r).into_iter().map(|p| (p, self.s[&p])).enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "s({i},{j})={v}")?;
        }
        write!(f, "]")
    }
}

/// How a root zeta value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootPath {
    /// Chain recursion when all `s(i,j)` with `i ≥ 2` vanish, nested sum otherwise.
    Auto,
    /// Always the nested sum over `m_1 + ⋯ + m_r ≤ M`.
    Nested,
}

fn check_domain(e: &RootExponents, cfg: &EvalConfig) -> Result<()> {
    if cfg.override_domain {
        return Ok(());
    }
    if let Some(((i, j), v)) = e.pairs().find(|(_, v)| v.re < 0.0) {
        return Err(ZetaError::Domain(format!("s({i},{j}) needs Re >= 0, got {v}")));
    }
    if let Some(((i, j), v)) = e.pairs().find(|((i, _), v)| *i == 1 && v.re <= 1.0) {
        return Err(ZetaError::Domain(format!("s({i},{j}) needs Re > 1, got {v}")));
    }
    Ok(())
}

fn cap(r: usize) -> usize {
    match r {
        1 => 1 << 20,
        2 => 4000,
        3 => 300,
        _ => 100,
    }
}

/// `ζ^•_{r,d}` (no shift) or `ζ^{•,H}_{r,d}` (shift `x > 0`), with explicit path.
pub fn root_zeta(e: &RootExponents, d: usize, shift: Option<f64>, path: RootPath, cfg: &EvalConfig) -> Result<Approx> {
    let r = e.r();
    if d > r {
        return Err(ZetaError::Precondition(format!("d = {d} exceeds r = {r}")));
    }
    if let Some(x) = shift {
        if !(x > 0.0) {
            return Err(ZetaError::Domain(format!("shift must be positive, got {x}")));
        }
    }
    if r == 0 {
        return Ok(Approx::one());
    }
    check_domain(e, cfg)?;
    if path == RootPath::Auto && e.is_reduced() {
        let levels = chain_levels(&e.first_row(), d, shift);
        return cfg.adaptive(|m| chain_sum(&levels, m, cfg.tail_mode));
    }
    if r > MAX_NESTED_RANK {
        return Err(ZetaError::Capability(format!(
            "general A_{r} sums are supported up to rank {MAX_NESTED_RANK}"
        )));
    }
    let limit = cap(r);
    let mut m = cfg.cutoff.clamp(1, limit);
    loop {
        let a = nested(e, d, shift, m)?;
        match cfg.target_abs_err {
            Some(t) if a.err_bound > t && m < limit => m = (m * 2).min(limit),
            _ => return Ok(a),
        }
    }
}

fn chain_levels(z: &[Complex64], d: usize, shift: Option<f64>) -> Vec<ChainLevel> {
    z.iter()
        .enumerate()
        .map(|(k, &s)| ChainLevel {
            s,
            x: shift.unwrap_or(0.0),
            step: if k < d { Step::Weak } else { Step::Strict },
            omit_at_zero: shift.is_none() && k < d,
        })
        .collect()
}

/// Truncated sum over `m_1 + ⋯ + m_r ≤ M`. Every omitted term has
/// `m_1 + ⋯ + m_r > M`, so the tail is dominated by the chain sum of the
/// first-row factors beyond `M`, times a bound on the remaining factors.
fn nested(e: &RootExponents, d: usize, shift: Option<f64>, m: usize) -> Result<Approx> {
    let r = e.r();
    let x = shift.unwrap_or(0.0);
    let pairs = flat_pairs(r);
    // tables[p][b] = (x + b)^{-s} for segment sums b ≤ M.
    let tables: Vec<Vec<Complex64>> = pairs
        .iter()
        .map(|&(i, j)| {
            let s = e.s[&(i, j)];
            (0..=m).map(|b| if x + b as f64 > 0.0 { inv_pow(x + b as f64, s) } else { Complex64::new(0.0, 0.0) }).collect()
        })
        .collect();
    let ctx = Nested { r, d, hurwitz: shift.is_some(), m, pairs: &pairs, tables: &tables };
    let lo1 = if d >= 1 { 0 } else { 1 };
    let parts: Vec<(Complex64, f64, u64)> = (lo1..=m)
        .into_par_iter()
        .map(|m1| {
            let mut idx = vec![0usize; r];
            idx[0] = m1;
            let mut acc = (Complex64::new(0.0, 0.0), 0.0, 0u64);
            ctx.descend(1, m1, &mut idx, &mut acc);
            acc
        })
        .collect();
    let (value, abs, count) = parts.iter().fold((Complex64::new(0.0, 0.0), 0.0, 0u64), |a, p| (a.0 + p.0, a.1 + p.1, a.2 + p.2));

    let mut others = 1.0f64;
    for ((i, _), v) in e.pairs() {
        if i == 1 {
            continue;
        }
        if v.re < 0.0 {
            others = f64::INFINITY;
        } else if shift.is_some() && x < 1.0 {
            others *= x.powf(-v.re);
        }
    }
    let majorant: Vec<ChainLevel> = chain_levels(&e.first_row(), d, shift)
        .into_iter()
        .map(|lv| ChainLevel { s: Complex64::new(lv.s.re, 0.0), ..lv })
        .collect();
    let tail = chain_sum(&majorant, m, TailMode::BoundOnly)?.err_bound;
    let rounding = 1e-15 * (count as f64).sqrt() * abs;
    Ok(Approx::new(value, others * tail + rounding))
}

struct Nested<'a> {
    r: usize,
    d: usize,
    hurwitz: bool,
    m: usize,
    pairs: &'a [(usize, usize)],
    tables: &'a [Vec<Complex64>],
}

impl Nested<'_> {
    fn descend(&self, k: usize, used: usize, idx: &mut Vec<usize>, acc: &mut (Complex64, f64, u64)) {
        if k == self.r {
            let t = self.term(idx);
            acc.0 += t;
            acc.1 += t.norm();
            acc.2 += 1;
            return;
        }
        let lo = if k < self.d { 0 } else { 1 };
        for v in lo..=self.m.saturating_sub(used) {
            idx[k] = v;
            self.descend(k + 1, used + v, idx, acc);
        }
    }

    /// Product over all pairs; `idx` is 0-based, so `m_i` is `idx[i-1]`.
    fn term(&self, idx: &[usize]) -> Complex64 {
        let mut t = Complex64::new(1.0, 0.0);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            if self.omitted(i, j, idx) {
                continue;
            }
            let b: usize = idx[i - 1..j - 1].iter().sum();
            t *= self.tables[p][b];
        }
        t
    }

    fn omitted(&self, i: usize, j: usize, idx: &[usize]) -> bool {
        !self.hurwitz && j <= self.d + 1 && idx[i - 1..j - 1].iter().all(|&v| v == 0)
    }
}

/// `ζ_r(s, A_r)`.
pub fn zeta_ar(e: &RootExponents, cfg: &EvalConfig) -> Result<Approx> {
    root_zeta(e, 0, None, RootPath::Auto, cfg)
}

/// `ζ^•_{r,d}(s, A_r)`.
pub fn zeta_bullet(e: &RootExponents, d: usize, cfg: &EvalConfig) -> Result<Approx> {
    root_zeta(e, d, None, RootPath::Auto, cfg)
}

/// `ζ^H_r(s, x, A_r)`.
pub fn zeta_h(e: &RootExponents, x: f64, cfg: &EvalConfig) -> Result<Approx> {
    root_zeta(e, 0, Some(x), RootPath::Auto, cfg)
}

/// `ζ^{•,H}_{r,d}(s, x, A_r)`.
pub fn zeta_bullet_h(e: &RootExponents, d: usize, x: f64, cfg: &EvalConfig) -> Result<Approx> {
    root_zeta(e, d, Some(x), RootPath::Auto, cfg)
}

/// One side-by-side comparison.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionCheck {
    pub lhs: Approx,
    pub rhs: Approx,
    pub discrepancy: f64,
    pub budget: f64,
    /// The left side recomputed by the nested sum, if the rank allows it.
    pub nested: Option<Approx>,
    pub pass: bool,
}

impl ReductionCheck {
    fn new(lhs: Approx, rhs: Approx, nested: Option<Approx>) -> Self {
        let discrepancy = (lhs.value - rhs.value).norm();
        let budget = lhs.err_bound + rhs.err_bound;
        let nested_ok = nested.is_none_or(|n| (n.value - rhs.value).norm() <= n.err_bound + rhs.err_bound + 1e-12);
        let pass = discrepancy <= budget + 1e-12 && nested_ok;
        ReductionCheck { lhs, rhs, discrepancy, budget, nested, pass }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReductionReport {
    /// `ζ^{•,H}_{p,p}(s_+, m) = ζ**(z | m, …, m)`.
    pub plus: ReductionCheck,
    /// `ζ^H_q(s_-, m) = ζ(z | m, …, m)`.
    pub minus: ReductionCheck,
}

impl ReductionReport {
    pub fn pass(&self) -> bool {
        self.plus.pass && self.minus.pass
    }
}

/// Compares the reduced root zetas with their Euler–Zagier forms at
/// `s(1, ℓ+1) = z_ℓ`, `s(i,j) = 0` for `i ≥ 2` and shift `m`.
pub fn check_reductions(z: &[Complex64], m: f64, cfg: &EvalConfig) -> Result<ReductionReport> {
    let e = RootExponents::reduced(z);
    let p = z.len();
    let ys = vec![m; p];
    let nested_cfg = EvalConfig { target_abs_err: None, ..cfg.clone() };
    let small = p <= MAX_NESTED_RANK;

    let lhs = root_zeta(&e, p, Some(m), RootPath::Auto, cfg)?;
    let rhs = ez_zeta_star_star(z, &ys, cfg)?;
    let nested_plus = if small { Some(root_zeta(&e, p, Some(m), RootPath::Nested, &nested_cfg)?) } else { None };
    let plus = ReductionCheck::new(lhs, rhs, nested_plus);

    let lhs = root_zeta(&e, 0, Some(m), RootPath::Auto, cfg)?;
    let rhs = ez_zeta(z, &ys, cfg)?;
    let nested_minus = if small { Some(root_zeta(&e, 0, Some(m), RootPath::Nested, &nested_cfg)?) } else { None };
    let minus = ReductionCheck::new(lhs, rhs, nested_minus);

    Ok(ReductionReport { plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ezzeta::reals;
    use std::f64::consts::PI;

    fn c(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    fn close(a: &Approx, truth: f64) {
        assert!(a.contains(c(truth), 1e-12), "{a:?} vs {truth}");
    }

    #[test]
    fn flat_order() {
        assert_eq!(flat_pairs(3), vec![(1, 2), (2, 3), (3, 4), (1, 3), (2, 4), (1, 4)]);
        let e = RootExponents::from_flat(2, &reals(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(e.get(2, 3), Some(c(2.0)));
        assert_eq!(e.get(1, 3), Some(c(3.0)));
        assert_eq!(e.flat(), reals(&[1.0, 2.0, 3.0]));
        assert!(RootExponents::from_flat(2, &reals(&[1.0])).is_err());
        assert!(RootExponents::from_pairs(1, [((2, 3), c(1.0))]).is_err());
    }

    #[test]
    fn rank_one() {
        let cfg = EvalConfig::default();
        let e = RootExponents::from_flat(1, &reals(&[3.0])).unwrap();
        close(&zeta_ar(&e, &cfg).unwrap(), 1.202_056_903_159_594_3);
        let e2 = RootExponents::from_flat(1, &reals(&[2.0])).unwrap();
        // The m = 0 term keeps the empty product 1.
        close(&zeta_bullet(&e2, 1, &cfg).unwrap(), 1.0 + PI * PI / 6.0);
        // ζ(2, 3/2) = π²/2 - 4
        close(&zeta_h(&e2, 0.5, &cfg).unwrap(), PI * PI / 2.0 - 4.0);
        close(&zeta_bullet_h(&e2, 1, 1.5, &cfg).unwrap(), PI * PI / 2.0 - 4.0);
        let nested = root_zeta(&e, 0, None, RootPath::Nested, &cfg).unwrap();
        close(&nested, 1.202_056_903_159_594_3);
    }

    #[test]
    fn rank_zero_is_one() {
        let e = RootExponents::from_flat(0, &[]).unwrap();
        assert_eq!(zeta_bullet(&e, 0, &EvalConfig::default()).unwrap(), Approx::one());
    }

    #[test]
    fn tornheim_sum() {
        let e = RootExponents::from_flat(2, &reals(&[2.0, 2.0, 2.0])).unwrap();
        let a = zeta_ar(&e, &EvalConfig::with_cutoff(2000)).unwrap();
        close(&a, PI.powi(6) / 2835.0);
        assert!(a.err_bound < 2e-3);
    }

    #[test]
    fn d_zero_is_identical() {
        let cfg = EvalConfig::with_cutoff(60);
        let e = RootExponents::from_flat(3, &reals(&[2.0, 1.0, 0.5, 2.0, 1.5, 3.0])).unwrap();
        assert_eq!(zeta_ar(&e, &cfg).unwrap(), zeta_bullet(&e, 0, &cfg).unwrap());
        assert_eq!(zeta_h(&e, 0.7, &cfg).unwrap(), zeta_bullet_h(&e, 0, 0.7, &cfg).unwrap());
    }

    #[test]
    fn bullet_omission_is_per_term() {
        // A_2, d = 2: the (1,2), (2,3) and (1,3) factors are dropped on zero segments.
        let e = RootExponents::from_flat(2, &reals(&[2.0, 3.0, 2.0])).unwrap();
        let a = root_zeta(&e, 2, None, RootPath::Nested, &EvalConfig::with_cutoff(1500)).unwrap();
        let mut brute = 0.0;
        let n = 1500usize;
        for m1 in 0..=n {
            for m2 in 0..=n - m1 {
                let f = |b: usize, s: f64| if b == 0 { 1.0 } else { (b as f64).powf(-s) };
                brute += f(m1, 2.0) * f(m2, 3.0) * f(m1 + m2, 2.0);
            }
        }
        assert!((a.value.re - brute).abs() < 1e-9, "{} vs {brute}", a.value.re);
    }

    #[test]
    fn reduced_nested_matches_chain() {
        let cfg = EvalConfig::with_cutoff(200);
        for z in [vec![2.0, 3.0], vec![3.0, 2.0, 2.0]] {
            let e = RootExponents::reduced(&reals(&z));
            for d in 0..=z.len() {
                for shift in [None, Some(0.5)] {
                    let fast = root_zeta(&e, d, shift, RootPath::Auto, &EvalConfig::with_cutoff(4000)).unwrap();
                    let slow = root_zeta(&e, d, shift, RootPath::Nested, &cfg).unwrap();
                    let gap = (fast.value - slow.value).norm();
                    assert!(gap <= fast.err_bound + slow.err_bound, "{z:?} d={d} {shift:?}: {fast:?} {slow:?}");
                }
            }
        }
    }

    #[test]
    fn reduction_identities() {
        let cfg = EvalConfig::with_cutoff(4000);
        let rep = check_reductions(&reals(&[3.0, 2.0]), 1.0, &cfg).unwrap();
        assert!(rep.pass(), "{rep:?}");
        let rep = check_reductions(&reals(&[2.0, 3.0]), 2.0, &cfg).unwrap();
        assert!(rep.pass(), "{rep:?}");
        assert!(rep.minus.budget < 1e-6);
    }

    #[test]
    fn errors() {
        let cfg = EvalConfig::default();
        let e = RootExponents::from_flat(5, &reals(&[2.0; 15])).unwrap();
        assert!(matches!(zeta_ar(&e, &cfg), Err(ZetaError::Capability(_))));
        let bad = RootExponents::from_flat(2, &reals(&[1.0, 2.0, 2.0])).unwrap();
        assert!(matches!(zeta_ar(&bad, &cfg), Err(ZetaError::Domain(_))));
        let e = RootExponents::from_flat(1, &reals(&[2.0])).unwrap();
        assert!(zeta_h(&e, 0.0, &cfg).is_err());
        assert!(zeta_bullet(&e, 2, &cfg).is_err());
        assert!(zeta_ar(&RootExponents::reduced(&reals(&[2.0; 6])), &cfg).is_ok());
    }
}
