//! Schur multiple zeta-functions of Hurwitz type on straight and skew shapes:
//!
//! `ζ_θ(s | x) = Σ_{M ∈ SSYT(θ)} Π_{(i,j) ∈ θ} (m_ij + x_ij)^{-s_ij}`.
//!
//! Truncated sums are computed by a transfer recursion over intermediate
//! shapes: a tableau with entries `≤ m` is a tableau with entries `≤ m-1` on
//! a smaller shape `ν`, extended by a horizontal strip `μ/ν` of entries `m`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::certified::{
    inv_pow, log_weighted_tail, partial_sum_growth, power_tail, power_tail_abs, Approx, EvalConfig, PowerFactor,
    TailMode,
};
use crate::error::{Result, ZetaError};
use crate::shapes::{Cell, Partition, SkewShape};
use crate::tableaux::{expand_content, in_w_lambda, ssyt_iter, w_violation, ContentSpec, Tableau};

/// A shape with exponent and shift tableaux.
#[derive(Debug, Clone, PartialEq)]
pub struct SchurInstance {
    pub exponents: Tableau<Complex64>,
    pub shifts: Tableau<f64>,
}

impl SchurInstance {
    pub fn new(exponents: Tableau<Complex64>, shifts: Tableau<f64>) -> Result<Self> {
        if exponents.shape() != shifts.shape() {
            return Err(ZetaError::Precondition("exponent and shift tableaux have different shapes".into()));
        }
        if let Some((c, v)) = shifts.iter().find(|(_, v)| !(**v >= 0.0)) {
            return Err(ZetaError::Domain(format!("shift at {c} must be nonnegative, got {v}")));
        }
        Ok(SchurInstance { exponents, shifts })
    }

    pub fn from_content(spec: &ContentSpec, shape: &SkewShape) -> Result<Self> {
        let (s, x) = expand_content(spec, shape)?;
        SchurInstance::new(s, x)
    }

    pub fn shape(&self) -> &SkewShape {
        self.exponents.shape()
    }

    fn factors(&self) -> Vec<PowerFactor> {
        self.exponents
            .values()
            .iter()
            .zip(self.shifts.values())
            .map(|(&s, &x)| PowerFactor::new(s, x))
            .collect()
    }
}

/// Evaluation strategy for truncated sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    /// Horizontal-strip transfer recursion with certified tail.
    StripTransfer,
    /// Literal enumeration of all tableaux up to the cutoff, with the same tail.
    Enumerate,
}

/// Intermediate shapes between the inner and outer partition of a skew shape
/// and the horizontal strips connecting them.
#[derive(Debug, Clone)]
pub struct StripTransfer {
    pub states: Vec<Partition>,
    /// `(from, to, cell indices of to/from)`, nonempty strips only, with
    /// `from` always preceding `to` in `states`.
    pub transitions: Vec<(usize, usize, Vec<usize>)>,
    /// For each state, the cell indices it covers.
    pub state_cells: Vec<Vec<usize>>,
    pub top: usize,
    pub bottom: usize,
}

impl StripTransfer {
    pub fn new(shape: &SkewShape) -> Self {
        let outer = shape.outer();
        let inner = shape.inner();
        let mut states: Vec<Partition> =
            outer.subpartitions().into_iter().filter(|p| p.contains_partition(inner)).collect();
        states.sort_by_key(|p| (p.size(), p.clone()));
        let index: HashMap<Partition, usize> = states.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let cells = shape.cells();
        let cell_index = |c: Cell| cells.binary_search(&c).expect("cell of the skew shape");
        let state_cells = states
            .iter()
            .map(|p| {
                p.cells().into_iter().filter(|c| !inner.contains(*c)).map(cell_index).collect()
            })
            .collect();
        let mut transitions = Vec::new();
        for (to, nu) in states.iter().enumerate() {
            for (from, mu) in states.iter().enumerate() {
                if from == to || !nu.contains_partition(mu) {
                    continue;
                }
                let horizontal = (2..=nu.rows()).all(|i| nu.part(i) <= mu.part(i - 1));
                if !horizontal {
                    continue;
                }
                let strip: Vec<usize> =
                    nu.cells().into_iter().filter(|c| !mu.contains(*c)).map(cell_index).collect();
                transitions.push((from, to, strip));
            }
        }
        let top = index[outer];
        let bottom = index[inner];
        StripTransfer { states, transitions, state_cells, top, bottom }
    }

    /// Truncated sums `F_ν(M)` for every intermediate shape, in any
    /// commutative ring, given the per-cell weight at entry value `m`.
    pub fn run<T: Clone + Zero + One>(&self, cutoff: usize, n_cells: usize, mut weight: impl FnMut(usize, usize) -> T) -> Vec<T> {
        let mut f = vec![T::zero(); self.states.len()];
        f[self.bottom] = T::one();
        let mut w: Vec<T> = vec![T::zero(); n_cells];
        for m in 1..=cutoff {
            for (c, slot) in w.iter_mut().enumerate() {
                *slot = weight(c, m);
            }
            let old = f.clone();
            for (from, to, strip) in &self.transitions {
                if old[*from].is_zero() {
                    continue;
                }
                let mut t = old[*from].clone();
                for &c in strip {
                    t = t * w[c].clone();
                }
                f[*to] = f[*to].clone() + t;
            }
        }
        f
    }
}

/// `Π (t_ij)^{-s_ij}` for a single filling `t` with positive entries.
pub fn schur_weight(s: &Tableau<Complex64>, t: &Tableau<f64>) -> Result<Complex64> {
    if s.shape() != t.shape() {
        return Err(ZetaError::Precondition("exponent and value tableaux have different shapes".into()));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    for ((c, sv), tv) in s.iter().zip(t.values()) {
        if *tv <= 0.0 {
            return Err(ZetaError::Domain(format!("entry at {c} must be positive, got {tv}")));
        }
        acc *= inv_pow(*tv, *sv);
    }
    Ok(acc)
}

fn check_domain(inst: &SchurInstance, cfg: &EvalConfig) -> Result<()> {
    if cfg.override_domain || in_w_lambda(&inst.exponents) {
        return Ok(());
    }
    Err(ZetaError::Domain(w_violation(&inst.exponents).unwrap_or_else(|| "outside W".into())))
}

/// Certified value of `ζ_θ(s | x)`.
pub fn schur_eval(inst: &SchurInstance, cfg: &EvalConfig) -> Result<Approx> {
    schur_eval_with(inst, cfg, Engine::StripTransfer)
}

pub fn schur_eval_with(inst: &SchurInstance, cfg: &EvalConfig, engine: Engine) -> Result<Approx> {
    check_domain(inst, cfg)?;
    if inst.shape().size() == 0 {
        return Ok(Approx::one());
    }
    let tr = StripTransfer::new(inst.shape());
    cfg.adaptive(|m| eval_at(inst, &tr, m, cfg.tail_mode, engine))
}

#[derive(Clone, Copy)]
struct Pair {
    v: Complex64,
    a: f64,
}

impl std::ops::Add for Pair {
    type Output = Pair;
    fn add(self, o: Pair) -> Pair {
        Pair { v: self.v + o.v, a: self.a + o.a }
    }
}

impl std::ops::Mul for Pair {
    type Output = Pair;
    fn mul(self, o: Pair) -> Pair {
        Pair { v: self.v * o.v, a: self.a * o.a }
    }
}

impl Zero for Pair {
    fn zero() -> Self {
        Pair { v: Complex64::zero(), a: 0.0 }
    }
    fn is_zero(&self) -> bool {
        self.a == 0.0 && self.v.is_zero()
    }
}

impl One for Pair {
    fn one() -> Self {
        Pair { v: Complex64::one(), a: 1.0 }
    }
}

fn eval_at(inst: &SchurInstance, tr: &StripTransfer, m: usize, mode: TailMode, engine: Engine) -> Result<Approx> {
    let factors = inst.factors();
    let n = factors.len();
    let mut partial = vec![0.0f64; n];
    let f: Vec<Pair> = tr.run(m, n, |c, k| {
        let v = inv_pow(k as f64 + factors[c].x, factors[c].s);
        let a = v.norm();
        partial[c] += a;
        Pair { v, a }
    });
    let head = match engine {
        Engine::StripTransfer => f[tr.top].v,
        Engine::Enumerate => schur_truncated_enumerate(inst, m as u32)?,
    };

    // Absolute tails T_ν ≥ Σ_{m > M} (terms of F^abs_ν), computed bottom-up.
    let a = m as u64 + 1;
    let strip_factors = |strip: &[usize]| strip.iter().map(|&c| factors[c]).collect::<Vec<_>>();
    let mut abs_tail = vec![0.0f64; tr.states.len()];
    for (from, to, strip) in &tr.transitions {
        let r = power_tail_abs(&strip_factors(strip), a);
        abs_tail[*to] += r * (f[*from].a + abs_tail[*from]);
    }
    let growth: Vec<Option<(f64, bool)>> =
        (0..n).map(|c| partial_sum_growth(factors[c], partial[c], m as u64)).collect();

    let mut estimate = Complex64::zero();
    let mut err = 0.0;
    for (from, to, strip) in &tr.transitions {
        if *to != tr.top {
            continue;
        }
        let sf = strip_factors(strip);
        let fm = f[*from];
        let (est, est_err, rabs) = match mode {
            TailMode::BoundOnly => (Complex64::zero(), 0.0, power_tail_abs(&sf, a)),
            TailMode::IntegralCorrection => {
                let t = power_tail(&sf, a);
                (fm.v * t.estimate, fm.v.norm() * t.err, t.abs)
            }
        };
        let mut term_err = match mode {
            TailMode::BoundOnly => rabs * (fm.a + abs_tail[*from]),
            TailMode::IntegralCorrection => est_err + rabs * abs_tail[*from],
        };
        if !term_err.is_finite() {
            let mut constant = 1.0;
            let mut logs = 0;
            for &c in &tr.state_cells[*from] {
                match growth[c] {
                    Some((k, is_log)) => {
                        constant *= k;
                        logs += u32::from(is_log);
                    }
                    None => constant = f64::INFINITY,
                }
            }
            term_err = log_weighted_tail(&sf, constant, logs, a) + est.norm();
        }
        estimate += est;
        err += term_err;
    }
    let rounding = 1e-15 * (m as f64).sqrt() * (n as f64) * (f[tr.top].a + estimate.norm());
    Ok(Approx::new(head + estimate, err + rounding))
}

/// Literal sum over all semistandard fillings with entries `≤ max_entry`.
pub fn schur_truncated_enumerate(inst: &SchurInstance, max_entry: u32) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for t in ssyt_iter(inst.shape(), max_entry) {
        let shifted = Tableau::new(
            inst.shape().clone(),
            t.values().iter().zip(inst.shifts.values()).map(|(&m, &x)| m as f64 + x).collect(),
        )?;
        acc += schur_weight(&inst.exponents, &shifted)?;
    }
    Ok(acc)
}

/// Exact truncated sum with integer exponents and rational shifts.
pub fn schur_exact(s: &Tableau<i64>, x: &Tableau<BigRational>, max_entry: usize) -> Result<BigRational> {
    if s.shape() != x.shape() {
        return Err(ZetaError::Precondition("exponent and shift tableaux have different shapes".into()));
    }
    let tr = StripTransfer::new(s.shape());
    let n = s.values().len();
    let mut bad = None;
    let f = tr.run(max_entry, n, |c, m| {
        let base = BigRational::from_integer(BigInt::from(m)) + &x.values()[c];
        if base.is_zero() {
            bad = Some(c);
            return BigRational::zero();
        }
        rational_inv_pow(&base, s.values()[c])
    });
    if let Some(c) = bad {
        return Err(ZetaError::Domain(format!("zero base at cell {}", s.cells()[c])));
    }
    Ok(f[tr.top].clone())
}

/// `base^{-s}` in exact arithmetic.
pub fn rational_inv_pow(base: &BigRational, s: i64) -> BigRational {
    let p = base.pow(s.unsigned_abs() as i32);
    if s >= 0 {
        p.recip()
    } else {
        p
    }
}

/// The instance with each listed cell's exponent raised by `a`.
pub fn shift_exponent(inst: &SchurInstance, cells: &[Cell], a: u32) -> Result<SchurInstance> {
    let mut out = inst.clone();
    for c in cells {
        let cur = *out
            .exponents
            .get(*c)
            .ok_or_else(|| ZetaError::Precondition(format!("cell {c} is not in {}", inst.shape())))?;
        out.exponents.set(*c, cur + f64::from(a))?;
    }
    Ok(out)
}

/// Central-difference derivative with one Richardson step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDifference {
    /// Extrapolated derivative; `err_bound` covers only the propagated
    /// truncation errors of the function values.
    pub estimate: Approx,
    /// Heuristic size of the remaining discretization error.
    pub discretization: f64,
}

/// `∂/∂y_ℓ ζ_θ(s | x)` for a content-parametrized instance.
pub fn d_dy(spec: &ContentSpec, shape: &SkewShape, ell: i64, h: f64, cfg: &EvalConfig) -> Result<FiniteDifference> {
    if !shape.contents().contains(&ell) {
        return Ok(FiniteDifference { estimate: Approx::zero(), discretization: 0.0 });
    }
    let y0 = spec.y_at(ell);
    if y0 - h < 0.0 {
        return Err(ZetaError::Precondition(format!("step {h} would make shift y_{ell} = {y0} negative")));
    }
    let eval = |y: f64| schur_eval(&SchurInstance::from_content(&spec.with_y(ell, y), shape)?, cfg);
    let central = |step: f64| -> Result<Approx> {
        let plus = eval(y0 + step)?;
        let minus = eval(y0 - step)?;
        Ok((plus - minus).scale(1.0 / (2.0 * step)))
    };
    let coarse = central(h)?;
    let fine = central(h / 2.0)?;
    let rich = fine.scale(4.0 / 3.0) - coarse.scale(1.0 / 3.0);
    Ok(FiniteDifference { estimate: rich, discretization: (rich.value - fine.value).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ezzeta::{ez_zeta, ez_zeta_star, hurwitz, reals};
    use std::f64::consts::PI;

    fn shape(s: &str) -> SkewShape {
        s.parse().unwrap()
    }

    fn inst(sh: &str, s: &[f64], x: &[f64]) -> SchurInstance {
        let sh = shape(sh);
        SchurInstance::new(
            Tableau::new(sh.clone(), reals(s)).unwrap(),
            Tableau::new(sh, x.to_vec()).unwrap(),
        )
        .unwrap()
    }

    fn close(a: &Approx, b: &Approx) -> bool {
        (a.value - b.value).norm() <= a.err_bound + b.err_bound + 1e-12
    }

    #[test]
    fn single_box() {
        let v = schur_eval(&inst("1", &[2.0], &[0.0]), &EvalConfig::with_cutoff(500)).unwrap();
        assert!(v.contains(Complex64::new(PI * PI / 6.0, 0.0), 1e-12));
    }

    #[test]
    fn column_and_row_reduce_to_chains() {
        let cfg = EvalConfig::with_cutoff(1000);
        let col = schur_eval(&inst("1,1", &[3.0, 2.0], &[0.0, 0.0]), &cfg).unwrap();
        let ez = ez_zeta(&reals(&[3.0, 2.0]), &[0.0, 0.0], &cfg).unwrap();
        assert!(close(&col, &ez), "{col:?} {ez:?}");
        let row = schur_eval(&inst("2", &[2.0, 2.0], &[0.5, 0.5]), &cfg).unwrap();
        let st = ez_zeta_star(&reals(&[2.0, 2.0]), &[0.5, 0.5], &cfg).unwrap();
        assert!(close(&row, &st));
        for n in 1..=4usize {
            let s: Vec<f64> = (0..n).map(|i| 2.0 + 0.5 * (i % 2) as f64).collect();
            let y: Vec<f64> = (0..n).map(|i| 0.3 * (i % 3) as f64).collect();
            let row_shape = n.to_string();
            let col_shape = vec!["1"; n].join(",");
            let r = schur_eval(&inst(&row_shape, &s, &y), &cfg).unwrap();
            let c = schur_eval(&inst(&col_shape, &s, &y), &cfg).unwrap();
            assert!(close(&r, &ez_zeta_star(&reals(&s), &y, &cfg).unwrap()));
            assert!(close(&c, &ez_zeta(&reals(&s), &y, &cfg).unwrap()));
        }
    }

    #[test]
    fn engines_agree() {
        let cfg = EvalConfig::with_cutoff(7);
        for (sh, n) in [("2,2", 4), ("3,2/1", 4), ("2,1", 3)] {
            let s: Vec<f64> = (0..n).map(|i| 2.0 + i as f64 * 0.25).collect();
            let x: Vec<f64> = (0..n).map(|i| 0.1 * i as f64).collect();
            let i = inst(sh, &s, &x);
            let a = schur_eval_with(&i, &cfg, Engine::StripTransfer).unwrap();
            let b = schur_eval_with(&i, &cfg, Engine::Enumerate).unwrap();
            assert!((a.value - b.value).norm() < 1e-13, "{sh}");
        }
    }

    #[test]
    fn exact_mode_matches_enumeration() {
        let sh = shape("2,1");
        let s = Tableau::new(sh.clone(), vec![2i64, 3, 2]).unwrap();
        let x = Tableau::filled(sh.clone(), BigRational::new(1.into(), 2.into()));
        let exact = schur_exact(&s, &x, 4).unwrap();
        let mut brute = BigRational::zero();
        for t in ssyt_iter(&sh, 4) {
            let mut w = BigRational::one();
            for (k, &m) in t.values().iter().enumerate() {
                let base = BigRational::from_integer(BigInt::from(m)) + &x.values()[k];
                w *= rational_inv_pow(&base, s.values()[k]);
            }
            brute += w;
        }
        assert_eq!(exact, brute);
    }

    #[test]
    fn tail_covers_high_cutoff() {
        let i = inst("2,2", &[2.0, 3.0, 2.0, 2.5], &[0.3, 0.0, 0.0, 0.3]);
        let lo = schur_eval(&i, &EvalConfig::with_cutoff(200)).unwrap();
        let hi = schur_eval(&i, &EvalConfig::with_cutoff(20000)).unwrap();
        assert!(close(&lo, &hi));
        assert!(hi.err_bound < 1e-8, "{hi:?}");
        let bo = schur_eval(&i, &EvalConfig::with_cutoff(200).bound_only()).unwrap();
        assert!(close(&bo, &hi));
        assert!(bo.value.re <= hi.value.re);
    }

    #[test]
    fn borderline_interior_cells() {
        // Re = 1 away from the corner: partial sums grow like log.
        let i = inst("2,2", &[1.0, 1.0, 1.0, 3.0], &[0.0; 4]);
        let lo = schur_eval(&i, &EvalConfig::with_cutoff(300)).unwrap();
        let hi = schur_eval(&i, &EvalConfig::with_cutoff(3000)).unwrap();
        assert!(lo.err_bound.is_finite() && hi.err_bound.is_finite());
        assert!(close(&lo, &hi));
    }

    #[test]
    fn weights_and_shifts() {
        let sh = shape("1");
        let s = Tableau::new(sh.clone(), reals(&[2.0])).unwrap();
        let t = Tableau::new(sh.clone(), vec![3.0]).unwrap();
        assert!((schur_weight(&s, &t).unwrap().re - 1.0 / 9.0).abs() < 1e-15);
        let zero = Tableau::filled(shape("2,2"), Complex64::zero());
        let any = Tableau::new(shape("2,2"), vec![1.5, 2.0, 7.0, 3.0]).unwrap();
        assert_eq!(schur_weight(&zero, &any).unwrap(), Complex64::one());
        assert!(schur_weight(&s, &Tableau::new(sh, vec![0.0]).unwrap()).is_err());

        let base = inst("2,1", &[2.0, 3.0, 2.0], &[0.0; 3]);
        assert_eq!(shift_exponent(&base, &[], 1).unwrap(), base);
        let one = shift_exponent(&base, &[Cell::new(1, 2)], 1).unwrap();
        assert_eq!(one.exponents.values(), &reals(&[2.0, 4.0, 2.0])[..]);
        let two = shift_exponent(&base, &[Cell::new(1, 1), Cell::new(2, 1)], 1).unwrap();
        assert_eq!(two.exponents.values(), &reals(&[3.0, 3.0, 3.0])[..]);
        assert!(shift_exponent(&base, &[Cell::new(2, 2)], 1).is_err());
    }

    #[test]
    fn hurwitz_derivative() {
        let spec = ContentSpec::new([(0, 3.0)], [(0, 0.25)]);
        let cfg = EvalConfig::with_cutoff(2000);
        let fd = d_dy(&spec, &shape("1"), 0, 1e-4, &cfg).unwrap();
        let exact = hurwitz(Complex64::new(4.0, 0.0), 1.25, &cfg).unwrap().value * -3.0;
        assert!((fd.estimate.value - exact).norm() < 1e-6, "{fd:?} {exact}");
        let none = d_dy(&spec, &shape("1"), 2, 1e-4, &cfg).unwrap();
        assert_eq!(none.estimate, Approx::zero());
        let bad = ContentSpec::new([(0, 3.0)], []);
        assert!(d_dy(&bad, &shape("1"), 0, 1e-4, &cfg).is_err());
    }

    #[test]
    fn domain_violation_is_reported() {
        let i = inst("2", &[2.0, 1.0], &[0.0, 0.0]);
        let e = schur_eval(&i, &EvalConfig::default()).unwrap_err();
        assert!(matches!(e, ZetaError::Domain(ref m) if m.contains("corner")));
    }
}
