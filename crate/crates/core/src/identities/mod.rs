//! Both sides of the determinant, expansion, Dirichlet-series and derivative
//! identities, compared against their combined certified error budgets.

mod determinantal;
mod expansions;
pub mod suite;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::certified::{Approx, EvalConfig};
use crate::error::{Result, ZetaError};
use crate::lgv::{verify_cancellation, CancellationReport};
use crate::perm::{permutations, sign};
use crate::rootzeta::{check_reductions, ReductionCheck};
use crate::shapes::{Partition, RimKind, SkewShape};
use crate::tableaux::{expand_content, w_violation, ContentSpec, Tableau};

pub use determinantal::{
    extended_jacobi_trudi, extended_jt_matrix, giambelli, jacobi_trudi_e, jacobi_trudi_e_matrix, jacobi_trudi_h,
    jacobi_trudi_h_matrix, skew_giambelli_hash, skew_giambelli_shapes, SkewGiambelliShapes,
};
pub use expansions::{
    derivative_fd_check, derivative_identity, dirichlet_series_expr, frobenius_expansion, hook_expansion_star,
    hook_expansion_zeta, DIRICHLET_INNER_CUTOFF, FD_TOLERANCE,
};

/// Absolute slack added to every budget to absorb floating-point rounding.
pub const DEFAULT_SLACK: f64 = 1e-9;

/// Largest determinant expanded as a permutation sum.
pub const MAX_DETERMINANT: usize = 8;

/// Which identity a report checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    JacobiTrudiH,
    JacobiTrudiE,
    ExtendedJacobiTrudi,
    /// The extended determinant without the diagonal-orbit sum.
    ExtendedJacobiTrudiSingle,
    Giambelli,
    SkewGiambelli,
    HookStar,
    HookZeta,
    Frobenius,
    Dirichlet,
    Derivative,
    DerivativeFd,
    LgvCancellation,
    ReductionPlus,
    ReductionMinus,
}

impl IdentityId {
    pub const ALL: [IdentityId; 15] = [
        IdentityId::JacobiTrudiH,
        IdentityId::JacobiTrudiE,
        IdentityId::ExtendedJacobiTrudi,
        IdentityId::ExtendedJacobiTrudiSingle,
        IdentityId::Giambelli,
        IdentityId::SkewGiambelli,
        IdentityId::HookStar,
        IdentityId::HookZeta,
        IdentityId::Frobenius,
        IdentityId::Dirichlet,
        IdentityId::Derivative,
        IdentityId::DerivativeFd,
        IdentityId::LgvCancellation,
        IdentityId::ReductionPlus,
        IdentityId::ReductionMinus,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::JacobiTrudiH => "jacobi_trudi_h",
            IdentityId::JacobiTrudiE => "jacobi_trudi_e",
            IdentityId::ExtendedJacobiTrudi => "extended_jacobi_trudi",
            IdentityId::ExtendedJacobiTrudiSingle => "extended_jacobi_trudi_single",
            IdentityId::Giambelli => "giambelli",
            IdentityId::SkewGiambelli => "skew_giambelli",
            IdentityId::HookStar => "hook_star",
            IdentityId::HookZeta => "hook_zeta",
            IdentityId::Frobenius => "frobenius",
            IdentityId::Dirichlet => "dirichlet",
            IdentityId::Derivative => "derivative",
            IdentityId::DerivativeFd => "derivative_fd",
            IdentityId::LgvCancellation => "lgv_cancellation",
            IdentityId::ReductionPlus => "reduction_plus",
            IdentityId::ReductionMinus => "reduction_minus",
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        IdentityId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == key)
            .ok_or_else(|| ZetaError::Parse(format!("unknown identity '{s}'")))
    }
}

/// Outcome of one identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub identity_id: IdentityId,
    pub shape: String,
    pub lhs: Approx,
    pub rhs: Approx,
    pub discrepancy: f64,
    pub budget: f64,
    pub slack: f64,
    pub pass: bool,
    pub cutoffs: BTreeMap<String, usize>,
    pub runtime_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
}

impl IdentityReport {
    pub fn new(identity_id: IdentityId, shape: impl fmt::Display, lhs: Approx, rhs: Approx, slack: f64) -> Self {
        let discrepancy = (lhs.value - rhs.value).norm();
        let budget = lhs.err_bound + rhs.err_bound;
        IdentityReport {
            identity_id,
            shape: shape.to_string(),
            lhs,
            rhs,
            discrepancy,
            budget,
            slack,
            pass: discrepancy <= budget + slack,
            cutoffs: BTreeMap::new(),
            runtime_ms: 0.0,
            details: None,
        }
    }

    pub fn with_cutoff(mut self, name: &str, value: usize) -> Self {
        self.cutoffs.insert(name.to_string(), value);
        self
    }

    pub fn with_details(mut self, details: Value) -> Self {
        self.details = Some(details);
        self
    }

    /// How far outside the budget the discrepancy lies, as a multiple of it.
    pub fn excess_ratio(&self) -> f64 {
        self.discrepancy / self.budget.max(f64::MIN_POSITIVE)
    }

    fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
        self
    }
}

/// Signed permutation expansion of a square matrix of certified values.
pub fn determinant(m: &[Vec<Approx>]) -> Result<Approx> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(ZetaError::Precondition("determinant of a non-square matrix".into()));
    }
    if n > MAX_DETERMINANT {
        return Err(ZetaError::Capability(format!("determinants above size {MAX_DETERMINANT} are not expanded")));
    }
    Ok(permutations(n)
        .iter()
        .map(|p| {
            let prod = p.iter().enumerate().fold(Approx::one(), |acc, (i, &j)| acc * m[i][j]);
            if sign(p) < 0 {
                -prod
            } else {
                prod
            }
        })
        .sum())
}

fn check_w(spec: &ContentSpec, shape: &SkewShape, cfg: &EvalConfig) -> Result<()> {
    let (s, _) = expand_content(spec, shape)?;
    if cfg.override_domain {
        return Ok(());
    }
    match w_violation(&s) {
        Some(msg) => Err(ZetaError::Domain(msg)),
        None => Ok(()),
    }
}

fn hook_shape(p: usize, q: usize) -> SkewShape {
    Partition::hook(p, q).as_skew()
}

/// Exact cancellation of the signed lattice-path sum, as a report whose two
/// sides are the signed total and the nonintersecting total.
pub fn lgv_cancellation(
    lambda: &Partition,
    height: usize,
    kind: RimKind,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let rep: CancellationReport = verify_cancellation(lambda, height, kind, s, x)?;
    let as_f64 = |v: &str| -> f64 {
        let r: BigRational = v.parse().unwrap_or_else(|_| BigRational::from_integer(BigInt::from(0)));
        num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
    };
    let lhs = Approx::real(as_f64(&rep.signed_total));
    let rhs = Approx::real(as_f64(&rep.nonintersecting_total));
    let mut out = IdentityReport::new(IdentityId::LgvCancellation, lambda, lhs, rhs, 0.0);
    out.pass = rep.pass;
    let details = serde_json::to_value(&rep).map_err(|e| ZetaError::Structural(e.to_string()))?;
    Ok(out.with_cutoff("height", height).with_details(details).timed(start))
}

/// The two reduced root-system identities at shift `m`, one report each.
pub fn reductions(z: &[Complex64], m: f64, cfg: &EvalConfig) -> Result<[IdentityReport; 2]> {
    let start = Instant::now();
    let rep = check_reductions(z, m, cfg)?;
    let label = format!(
        "z=({}) m={m}",
        z.iter().map(|v| format_complex(*v)).collect::<Vec<_>>().join(",")
    );
    let make = |id, c: &ReductionCheck| {
        let mut r = IdentityReport::new(id, &label, c.lhs, c.rhs, DEFAULT_SLACK).with_cutoff("cutoff", cfg.cutoff);
        r.pass &= c.pass;
        if let Some(n) = c.nested {
            r = r.with_details(serde_json::json!({ "nested": n }));
        }
        r.timed(start)
    };
    Ok([make(IdentityId::ReductionPlus, &rep.plus), make(IdentityId::ReductionMinus, &rep.minus)])
}

fn format_complex(v: Complex64) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else {
        format!("{}{:+}i", v.re, v.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_round_trip() {
        for id in IdentityId::ALL {
            assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
            let j = serde_json::to_value(id).unwrap();
            assert_eq!(j, Value::String(id.name().into()));
        }
        assert_eq!("jacobi-trudi-h".parse::<IdentityId>().unwrap(), IdentityId::JacobiTrudiH);
        assert!("nope".parse::<IdentityId>().is_err());
    }

    #[test]
    fn determinant_small() {
        let m = vec![
            vec![Approx::real(1.0), Approx::real(2.0)],
            vec![Approx::real(3.0), Approx::new(Complex64::new(4.0, 0.0), 0.5)],
        ];
        let d = determinant(&m).unwrap();
        assert_eq!(d.value, Complex64::new(-2.0, 0.0));
        assert_eq!(d.err_bound, 0.5);
        assert_eq!(determinant(&[]).unwrap(), Approx::one());
    }

    #[test]
    fn report_pass_rule() {
        let r = IdentityReport::new(
            IdentityId::HookStar,
            "(1)",
            Approx::new(Complex64::new(1.0, 0.0), 1e-3),
            Approx::real(1.002),
            DEFAULT_SLACK,
        );
        assert!(!r.pass);
        assert!((r.budget - 1e-3).abs() < 1e-15);
        assert!(r.excess_ratio() > 1.9);
    }
}
