//! Line-oriented suite manifests and the built-in suites.
//!
//! Each non-blank line that does not start with `#` reads
//!
//! ```text
//! <identity> <shape> [key=value ...]
//! ```
//!
//! Keys: `z=-1=2,0=3` and `y=0=0.3` (per-content exponents and shifts),
//! `s=[[…]]` and `x=[[…]]` (JSON tableaux, no spaces), `ell`, `order`, `h`,
//! `n` (path height), `kind` (`H` or `E`), `zs=2,3` and `m` (reductions),
//! `cutoff`, `inner` (Dirichlet inner cutoff) and `expect=fail`.
//! Reductions take `-` as their shape.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;

use super::{
    derivative_fd_check, derivative_identity, expansions::dirichlet_series_expr_with, extended_jacobi_trudi,
    frobenius_expansion, giambelli, hook_expansion_star, hook_expansion_zeta, jacobi_trudi_e, jacobi_trudi_h,
    lgv_cancellation, reductions, skew_giambelli_hash, IdentityId, IdentityReport, DIRICHLET_INNER_CUTOFF,
};
use crate::certified::EvalConfig;
use crate::error::{Result, ZetaError};
use crate::shapes::{Partition, RimKind};
use crate::tableaux::text::{from_json, parse_complex, parse_real};
use crate::tableaux::{expand_content, ContentSpec, Tableau};

/// One manifest line.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteCase {
    pub line: usize,
    pub identity: IdentityId,
    pub shape: String,
    pub spec: ContentSpec,
    pub s: Option<Tableau<Complex64>>,
    pub x: Option<Tableau<f64>>,
    pub ell: Option<i64>,
    pub order: Option<u32>,
    pub h: Option<f64>,
    pub height: Option<usize>,
    pub kind: RimKind,
    pub zs: Vec<f64>,
    pub m: Option<f64>,
    pub cutoff: Option<usize>,
    pub inner: Option<usize>,
    pub expect_pass: bool,
}

impl SuiteCase {
    fn bare(line: usize, identity: IdentityId, shape: String) -> Self {
        SuiteCase {
            line,
            identity,
            shape,
            spec: ContentSpec::default(),
            s: None,
            x: None,
            ell: None,
            order: None,
            h: None,
            height: None,
            kind: RimKind::H,
            zs: Vec::new(),
            m: None,
            cutoff: None,
            inner: None,
            expect_pass: true,
        }
    }

    fn partition(&self) -> Result<Partition> {
        self.shape.parse()
    }
}

fn perr(line: usize, msg: impl std::fmt::Display) -> ZetaError {
    ZetaError::Parse(format!("line {line}: {msg}"))
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| perr(line, format!("bad value {v:?} for {key}")))
}

/// Parses `k=v,k=v,…` with integer keys.
pub fn parse_content_list<T: std::str::FromStr>(v: &str) -> Result<BTreeMap<i64, T>> {
    v.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (k, x) = t
                .split_once('=')
                .ok_or_else(|| ZetaError::Parse(format!("content entries look like k=v, got {t:?}")))?;
            let k = k.trim().parse().map_err(|_| ZetaError::Parse(format!("bad content key {k:?}")))?;
            let x = x.trim().parse().map_err(|_| ZetaError::Parse(format!("bad value {x:?} for content {k}")))?;
            Ok((k, x))
        })
        .collect()
}

fn parse_json<T: Clone>(line: usize, v: &str, conv: impl FnMut(&Value) -> Result<T>) -> Result<Tableau<T>> {
    let j: Value = serde_json::from_str(v).map_err(|e| perr(line, e))?;
    from_json(&j, conv).map_err(|e| perr(line, e))
}

/// Parses manifest text.
pub fn parse_manifest(text: &str) -> Result<Vec<SuiteCase>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let identity: IdentityId = toks.next().unwrap_or_default().parse().map_err(|e| perr(line, e))?;
        let shape = toks.next().ok_or_else(|| perr(line, "missing shape"))?.to_string();
        let mut case = SuiteCase::bare(line, identity, shape);
        for tok in toks {
            let (k, v) = tok.split_once('=').ok_or_else(|| perr(line, format!("expected key=value, got {tok:?}")))?;
            match k {
                "z" => case.spec.z = parse_content_list(v).map_err(|e| perr(line, e))?,
                "y" => case.spec.y = parse_content_list(v).map_err(|e| perr(line, e))?,
                "s" => case.s = Some(parse_json(line, v, parse_complex)?),
                "x" => case.x = Some(parse_json(line, v, parse_real)?),
                "ell" => case.ell = Some(parse_num(line, k, v)?),
                "order" => case.order = Some(parse_num(line, k, v)?),
                "h" => case.h = Some(parse_num(line, k, v)?),
                "n" => case.height = Some(parse_num(line, k, v)?),
                "kind" => {
                    case.kind = match v {
                        "H" | "h" => RimKind::H,
                        "E" | "e" => RimKind::E,
                        _ => return Err(perr(line, format!("kind must be H or E, got {v:?}"))),
                    }
                }
                "zs" => case.zs = v.split(',').map(|t| parse_num(line, k, t)).collect::<Result<_>>()?,
                "m" => case.m = Some(parse_num(line, k, v)?),
                "cutoff" => case.cutoff = Some(parse_num(line, k, v)?),
                "inner" => case.inner = Some(parse_num(line, k, v)?),
                "expect" => {
                    case.expect_pass = match v {
                        "pass" => true,
                        "fail" => false,
                        _ => return Err(perr(line, format!("expect must be pass or fail, got {v:?}"))),
                    }
                }
                _ => return Err(perr(line, format!("unknown key {k:?}"))),
            }
        }
        if case.identity != IdentityId::ReductionPlus && case.identity != IdentityId::ReductionMinus {
            case.partition().map_err(|e| perr(line, e))?;
        }
        out.push(case);
    }
    Ok(out)
}

/// `(p, q)` of a hook shape.
fn hook_params(lambda: &Partition) -> Result<(usize, usize)> {
    if lambda.is_empty() || lambda.parts()[1..].iter().any(|&v| v != 1) {
        return Err(ZetaError::InvalidShape(format!("{lambda} is not a hook")));
    }
    Ok((lambda.part(1) - 1, lambda.rows() - 1))
}

fn exponents_and_shifts(case: &SuiteCase, lambda: &Partition) -> Result<(Tableau<Complex64>, Tableau<f64>)> {
    match &case.s {
        Some(s) => {
            let x = case.x.clone().unwrap_or_else(|| s.map(|_| 0.0));
            Ok((s.clone(), x))
        }
        None => expand_content(&case.spec, &lambda.as_skew()),
    }
}

fn exact_rational(v: f64) -> Result<BigRational> {
    BigRational::from_float(v).ok_or_else(|| ZetaError::Parse(format!("shift {v} is not finite")))
}

fn integer_exponent(z: &Complex64) -> Result<i64> {
    if z.im != 0.0 || z.re.fract() != 0.0 {
        return Err(ZetaError::Precondition(format!("exponent {z} is not an integer")));
    }
    Ok(z.re as i64)
}

/// Runs one case. A cutoff given in `flag_cutoff` overrides the manifest's,
/// which overrides `base`.
pub fn run_case(case: &SuiteCase, base: &EvalConfig, flag_cutoff: Option<usize>) -> Result<Vec<IdentityReport>> {
    let cutoff = flag_cutoff.or(case.cutoff).unwrap_or(base.cutoff);
    let cfg = EvalConfig { cutoff, ..base.clone() };
    if matches!(case.identity, IdentityId::ReductionPlus | IdentityId::ReductionMinus) {
        let z: Vec<Complex64> = case.zs.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let m = case.m.ok_or_else(|| perr(case.line, "reductions need m"))?;
        let [plus, minus] = reductions(&z, m, &cfg)?;
        return Ok(vec![if case.identity == IdentityId::ReductionPlus { plus } else { minus }]);
    }
    let lambda = case.partition()?;
    let report = match case.identity {
        IdentityId::JacobiTrudiH => jacobi_trudi_h(&case.spec, &lambda, &cfg)?,
        IdentityId::JacobiTrudiE => jacobi_trudi_e(&case.spec, &lambda, &cfg)?,
        IdentityId::ExtendedJacobiTrudi | IdentityId::ExtendedJacobiTrudiSingle => {
            let (s, x) = exponents_and_shifts(case, &lambda)?;
            extended_jacobi_trudi(&s, &x, case.identity == IdentityId::ExtendedJacobiTrudi, &cfg)?
        }
        IdentityId::Giambelli => giambelli(&case.spec, &lambda, &cfg)?,
        IdentityId::SkewGiambelli => {
            let (s, x) = exponents_and_shifts(case, &lambda)?;
            let gamma = Tableau::new(s.shape().clone(), s.values().iter().map(integer_exponent).collect::<Result<_>>()?)?;
            skew_giambelli_hash(&gamma, &x, &cfg)?
        }
        IdentityId::HookStar => {
            let (p, q) = hook_params(&lambda)?;
            hook_expansion_star(&case.spec, p, q, &cfg)?
        }
        IdentityId::HookZeta => {
            let (p, q) = hook_params(&lambda)?;
            hook_expansion_zeta(&case.spec, p, q, &cfg)?
        }
        IdentityId::Frobenius => frobenius_expansion(&case.spec, &lambda, &cfg)?,
        IdentityId::Dirichlet => {
            dirichlet_series_expr_with(&case.spec, &lambda, &cfg, case.inner.unwrap_or(DIRICHLET_INNER_CUTOFF))?
        }
        IdentityId::Derivative => {
            let (p, q) = hook_params(&lambda)?;
            let ell = case.ell.ok_or_else(|| perr(case.line, "derivative needs ell"))?;
            derivative_identity(&case.spec, p, q, ell, case.order.unwrap_or(1), &cfg)?
        }
        IdentityId::DerivativeFd => {
            let (p, q) = hook_params(&lambda)?;
            let ell = case.ell.ok_or_else(|| perr(case.line, "derivative_fd needs ell"))?;
            derivative_fd_check(&case.spec, p, q, ell, case.h.unwrap_or(1e-4), &cfg)?
        }
        IdentityId::LgvCancellation => {
            let (s, x) = exponents_and_shifts(case, &lambda)?;
            let si = Tableau::new(s.shape().clone(), s.values().iter().map(integer_exponent).collect::<Result<_>>()?)?;
            let xr = Tableau::new(x.shape().clone(), x.values().iter().map(|&v| exact_rational(v)).collect::<Result<_>>()?)?;
            let height = case.height.unwrap_or(lambda.rows().max(1));
            lgv_cancellation(&lambda, height, case.kind, &si, &xr)?
        }
        IdentityId::ReductionPlus | IdentityId::ReductionMinus => unreachable!("handled above"),
    };
    Ok(vec![report])
}

/// Whether the reports of a case match its expectation.
pub fn meets_expectation(case: &SuiteCase, reports: &[IdentityReport]) -> bool {
    let all_pass = reports.iter().all(|r| r.pass);
    all_pass == case.expect_pass
}

const JACOBI_TRUDI: &str = "\
# Jacobi–Trudi, complete and elementary forms
jacobi_trudi_h 1,1 z=-1=2,0=3
jacobi_trudi_e 1,1 z=-1=2,0=3
jacobi_trudi_e 2 z=0=3,1=2
jacobi_trudi_h 2,1 z=-1=2.5,0=3,1=2 y=-1=0.3,1=0.3
jacobi_trudi_e 2,1 z=-1=2.5,0=3,1=2 y=-1=0.3,1=0.3
jacobi_trudi_h 2,2 z=-1=2,0=3,1=2 y=0=0.3
jacobi_trudi_e 2,2 z=-1=2,0=3,1=2 y=0=0.3
jacobi_trudi_h 3,2 z=-1=2,0=3,1=2.5,2=2 y=-1=0.3,2=0.3
jacobi_trudi_e 3,2 z=-1=2,0=3,1=2.5,2=2 y=-1=0.3,2=0.3
# extended form with general exponents; the single-orbit term is expected to fail
extended_jacobi_trudi 2,1 s=[[3,2],[2]] x=[[0,0.5],[0.2]]
extended_jacobi_trudi 3,2,1 s=[[3,2,2],[2,2.5],[2]] x=[[0,0.3,0],[0.5,0],[0]]
extended_jacobi_trudi_single 2,2 s=[[3,2],[2,2]] x=[[0,0.5],[0.2,0]] expect=fail
";

const GIAMBELLI: &str = "\
giambelli 2,2 z=-1=2,0=3,1=2 y=-1=0.3
giambelli 3,2 z=-1=2,0=3,1=2,2=2.5 y=0=0.3
giambelli 3,3,1 z=-2=2,-1=2,0=3,1=2,2=2 y=1=0.3
skew_giambelli 2,2 z=-1=2,0=2,1=3
skew_giambelli 3,2 z=-1=2,0=2,1=3,2=2
";

const HOOK: &str = "\
hook_star 1,1 z=-1=2,0=3
hook_zeta 1,1 z=-1=2,0=3
hook_star 2,1 z=-1=2,0=3,1=2 y=-1=0.3,0=0.5
hook_zeta 2,1 z=-1=2,0=3,1=2 y=-1=0.3,0=0.5
hook_star 3,1 z=-1=2,0=3,1=2.5,2=2 y=1=0.3
hook_zeta 3,1 z=-1=2,0=3,1=2.5,2=2 y=1=0.3
hook_star 2,1,1 z=-2=2,-1=2.5,0=3,1=2 y=-2=0.3
hook_zeta 2,1,1 z=-2=2,-1=2.5,0=3,1=2 y=-2=0.3
";

const FROBENIUS: &str = "\
frobenius 2,2 z=-1=2,0=3,1=2 y=0=0.3
frobenius 3,2 z=-1=2,0=3,1=2,2=2.5 y=-1=0.3
";

const DIRICHLET: &str = "\
dirichlet 1 z=0=3 y=0=0.5 cutoff=400
dirichlet 2,1 z=-1=2,0=3,1=2 cutoff=300
dirichlet 3,1 z=-1=2,0=3,1=2,2=2 y=1=0.3 cutoff=300
dirichlet 2,2 z=-1=2,0=3,1=2 cutoff=300
";

const DERIVATIVE: &str = "\
derivative 2,1 z=-1=2,0=3,1=2 y=0=0.3,1=0.3 ell=0 order=1
derivative 2,1 z=-1=2,0=3,1=2 y=0=0.3,1=0.3 ell=1 order=1
derivative 2,1 z=-1=2,0=3,1=2 y=0=0.3,1=0.3 ell=0 order=2
derivative 2,1 z=-1=2,0=3,1=2 y=0=0.3,1=0.3 ell=1 order=2
derivative_fd 2,1 z=-1=2,0=3,1=2 y=0=0.3,1=0.3 ell=0 h=1e-4
derivative_fd 2,1 z=-1=2,0=3,1=2 y=0=0.3,1=0.3 ell=1 h=1e-4
";

const LGV_EXACT: &str = "\
lgv_cancellation 1,1 n=3 kind=H z=-1=2,0=3 y=0=0.5
lgv_cancellation 1,1 n=3 kind=E z=-1=2,0=3 y=0=0.5
lgv_cancellation 2,1 n=3 kind=H z=-1=2,0=3,1=2
lgv_cancellation 2,1 n=3 kind=E z=-1=2,0=3,1=2
lgv_cancellation 2,2 n=3 kind=H z=-1=3,0=2,1=3 y=-1=0.5,1=0.5
lgv_cancellation 3,1 n=3 kind=E z=-1=2,0=2,1=3,2=2 y=2=0.5
";

const REDUCTIONS: &str = "\
reduction_plus - zs=2 m=1
reduction_minus - zs=2 m=1
reduction_plus - zs=2,3 m=2
reduction_minus - zs=2,3 m=2
reduction_plus - zs=3,2,2 m=3
reduction_minus - zs=3,2,2 m=3
";

/// Names of the built-in suites.
pub const BUILTIN_SUITES: [&str; 9] =
    ["jacobi-trudi", "giambelli", "hook", "frobenius", "dirichlet", "derivative", "lgv-exact", "reductions", "all"];

/// Manifest text of a built-in suite.
pub fn builtin(name: &str) -> Result<String> {
    let parts = [JACOBI_TRUDI, GIAMBELLI, HOOK, FROBENIUS, DIRICHLET, DERIVATIVE, LGV_EXACT, REDUCTIONS];
    let text = match name {
        "jacobi-trudi" => JACOBI_TRUDI.to_string(),
        "giambelli" => GIAMBELLI.to_string(),
        "hook" => HOOK.to_string(),
        "frobenius" => FROBENIUS.to_string(),
        "dirichlet" => DIRICHLET.to_string(),
        "derivative" => DERIVATIVE.to_string(),
        "lgv-exact" => LGV_EXACT.to_string(),
        "reductions" => REDUCTIONS.to_string(),
        "all" => parts.concat(),
        _ => {
            return Err(ZetaError::Parse(format!(
                "unknown suite {name:?}; expected one of {}",
                BUILTIN_SUITES.join(", ")
            )))
        }
    };
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_keys() {
        let cases = parse_manifest(
            "# comment\n\njacobi_trudi_h 2,2 z=-1=2,0=3,1=2 y=0=0.3 cutoff=500 # trailing\n\
             extended_jacobi_trudi_single 2,2 s=[[3,2],[2,2]] expect=fail\n\
             reduction_plus - zs=2,3 m=1\n",
        )
        .unwrap();
        assert_eq!(cases.len(), 3);
        assert_eq!(cases[0].line, 3);
        assert_eq!(cases[0].spec.y_at(0), 0.3);
        assert_eq!(cases[0].cutoff, Some(500));
        assert!(!cases[1].expect_pass);
        assert_eq!(cases[2].zs, vec![2.0, 3.0]);
    }

    #[test]
    fn parse_errors() {
        for bad in ["frobnicate 2,2", "hook_star", "hook_star 2,1 z=1", "hook_star 2,1 foo=1", "hook_star 2,x"] {
            assert!(matches!(parse_manifest(bad), Err(ZetaError::Parse(_))), "{bad}");
        }
    }

    #[test]
    fn builtins_parse() {
        for name in BUILTIN_SUITES {
            assert!(!parse_manifest(&builtin(name).unwrap()).unwrap().is_empty());
        }
        assert!(builtin("nope").is_err());
    }

    #[test]
    fn lgv_builtin_passes() {
        let cfg = EvalConfig::default();
        for case in parse_manifest(LGV_EXACT).unwrap() {
            let reps = run_case(&case, &cfg, None).unwrap();
            assert!(meets_expectation(&case, &reps), "{reps:?}");
        }
    }

    #[test]
    fn cutoff_precedence() {
        let case = &parse_manifest("hook_star 1 z=0=3 cutoff=123").unwrap()[0];
        let base = EvalConfig::with_cutoff(50);
        assert_eq!(run_case(case, &base, None).unwrap()[0].cutoffs["cutoff"], 123);
        assert_eq!(run_case(case, &base, Some(77)).unwrap()[0].cutoffs["cutoff"], 77);
        let case = &parse_manifest("hook_star 1 z=0=3").unwrap()[0];
        assert_eq!(run_case(case, &base, None).unwrap()[0].cutoffs["cutoff"], 50);
    }
}
