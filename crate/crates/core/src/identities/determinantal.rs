//! Jacobi–Trudi, extended Jacobi–Trudi and Giambelli determinants.

use std::time::Instant;

use num_complex::Complex64;

use super::{check_w, determinant, hook_shape, IdentityId, IdentityReport, DEFAULT_SLACK};
use crate::certified::{Approx, EvalConfig};
use crate::error::{Result, ZetaError};
use crate::ezzeta::{by_depth, ez_zeta, ez_zeta_star};
use crate::schurzeta::{schur_eval, SchurInstance};
use crate::shapes::{hash_transpose, Cell, Partition, SkewShape};
use crate::tableaux::{apply_orbit, diagonal_orbit, in_i_theta, in_w_lambda_h, ContentSpec, Tableau};

/// Entries `ζ*_{λ_i-i+j}(z_{-j+1},…,z_{-j+λ_i-i+j} | y)`.
pub fn jacobi_trudi_h_matrix(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<Vec<Vec<Approx>>> {
    let r = lambda.rows();
    let mut m = Vec::with_capacity(r);
    for i in 1..=r {
        let mut row = Vec::with_capacity(r);
        for j in 1..=r {
            let d = lambda.part(i) as i64 - i as i64 + j as i64;
            let ji = j as i64;
            row.push(by_depth(d, || {
                let (z, y) = spec.slice((1..=d).map(|t| t - ji))?;
                ez_zeta_star(&z, &y, cfg)
            })?);
        }
        m.push(row);
    }
    Ok(m)
}

/// Entries `ζ_{λ'_i-i+j}(z_{j-1},z_{j-2},…,z_{j-(λ'_i-i+j)} | y)`.
pub fn jacobi_trudi_e_matrix(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<Vec<Vec<Approx>>> {
    let conj = lambda.conjugate();
    let r = conj.rows();
    let mut m = Vec::with_capacity(r);
    for i in 1..=r {
        let mut row = Vec::with_capacity(r);
        for j in 1..=r {
            let d = conj.part(i) as i64 - i as i64 + j as i64;
            let ji = j as i64;
            row.push(by_depth(d, || {
                let (z, y) = spec.slice((1..=d).map(|t| ji - t))?;
                ez_zeta(&z, &y, cfg)
            })?);
        }
        m.push(row);
    }
    Ok(m)
}

fn direct(spec: &ContentSpec, shape: &SkewShape, cfg: &EvalConfig) -> Result<Approx> {
    schur_eval(&SchurInstance::from_content(spec, shape)?, cfg)
}

fn determinant_report(
    id: IdentityId,
    spec: &ContentSpec,
    lambda: &Partition,
    cfg: &EvalConfig,
    matrix: impl FnOnce() -> Result<Vec<Vec<Approx>>>,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let shape = lambda.as_skew();
    check_w(spec, &shape, cfg)?;
    let lhs = direct(spec, &shape, cfg)?;
    let rhs = determinant(&matrix()?)?;
    Ok(IdentityReport::new(id, lambda, lhs, rhs, DEFAULT_SLACK).with_cutoff("cutoff", cfg.cutoff).timed(start))
}

/// Jacobi–Trudi in the complete (ζ*) form.
pub fn jacobi_trudi_h(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<IdentityReport> {
    determinant_report(IdentityId::JacobiTrudiH, spec, lambda, cfg, || jacobi_trudi_h_matrix(spec, lambda, cfg))
}

/// Jacobi–Trudi in the elementary (ζ) form.
pub fn jacobi_trudi_e(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<IdentityReport> {
    determinant_report(IdentityId::JacobiTrudiE, spec, lambda, cfg, || jacobi_trudi_e_matrix(spec, lambda, cfg))
}

/// `(m, n, X)` for `λ = (m, n, 1^{X-2})`.
fn extended_params(lambda: &Partition) -> Result<(usize, usize, usize)> {
    let x = lambda.rows();
    if x < 2 || lambda.parts()[2..].iter().any(|&v| v != 1) {
        return Err(ZetaError::InvalidShape(format!("{lambda} is not of the form (m,n,1,…,1) with at least two rows")));
    }
    Ok((lambda.part(1), lambda.part(2), x))
}

/// `(i,a), (i,a+1), …, (i,b)`; empty when `b < a`.
fn row_seg(i: usize, a: usize, b: usize) -> Vec<Cell> {
    (a..=b).map(|j| Cell::new(i, j)).collect()
}

/// `(a,j), (a-1,j), …, (b,j)`; empty when `a < b`.
fn col_seg(a: usize, b: usize, j: usize) -> Vec<Cell> {
    if a < b {
        return Vec::new();
    }
    (b..=a).rev().map(|i| Cell::new(i, j)).collect()
}

enum Entry {
    Zero,
    Chain(Vec<Cell>),
}

fn extended_entry(m: usize, n: usize, i: usize, j: usize) -> Entry {
    let tail = || [row_seg(2, 1, n), row_seg(1, n, m)].concat();
    match (i, j) {
        (1, 1) => Entry::Chain(row_seg(1, 1, m)),
        (2, 1) => Entry::Chain(row_seg(1, 1, n - 1)),
        (_, 1) => Entry::Zero,
        (1, 2) => Entry::Chain(tail()),
        (2, 2) => Entry::Chain(row_seg(2, 1, n)),
        (1, _) => Entry::Chain([col_seg(j, 3, 1), tail()].concat()),
        (2, _) => Entry::Chain([col_seg(j, 3, 1), row_seg(2, 1, n)].concat()),
        _ if j + 1 >= i => Entry::Chain(col_seg(j, i, 1)),
        _ => Entry::Zero,
    }
}

/// The `X × X` matrix for `λ = (m, n, 1^{X-2})` with general exponents.
pub fn extended_jt_matrix(s: &Tableau<Complex64>, x: &Tableau<f64>, cfg: &EvalConfig) -> Result<Vec<Vec<Approx>>> {
    let lambda = s.shape().outer().clone();
    let (m, n, rows) = extended_params(&lambda)?;
    let mut out = Vec::with_capacity(rows);
    for i in 1..=rows {
        let mut row = Vec::with_capacity(rows);
        for j in 1..=rows {
            row.push(match extended_entry(m, n, i, j) {
                Entry::Zero => Approx::zero(),
                Entry::Chain(cells) if cells.is_empty() => Approx::one(),
                Entry::Chain(cells) => {
                    let zs: Vec<Complex64> = cells.iter().map(|c| s.get(*c).copied()).collect::<Option<_>>().ok_or_else(
                        || ZetaError::Structural(format!("extended entry ({i},{j}) leaves {lambda}")),
                    )?;
                    let ys: Vec<f64> = cells.iter().map(|c| x.get(*c).copied().unwrap_or(0.0)).collect();
                    ez_zeta_star(&zs, &ys, cfg)?
                }
            });
        }
        out.push(row);
    }
    Ok(out)
}

/// Extended Jacobi–Trudi for `λ = (m, n, 1^{X-2})` and exponents in `W_{λ,H}`.
/// With `sum_diag` both sides are summed over the diagonal orbit of `(s, x)`;
/// without it only the identity term is compared.
pub fn extended_jacobi_trudi(
    s: &Tableau<Complex64>,
    x: &Tableau<f64>,
    sum_diag: bool,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    let start = Instant::now();
    if !s.shape().is_straight() || s.shape() != x.shape() {
        return Err(ZetaError::InvalidShape("exponents and shifts must share one straight shape".into()));
    }
    let lambda = s.shape().outer().clone();
    extended_params(&lambda)?;
    if !cfg.override_domain && !in_w_lambda_h(s) {
        return Err(ZetaError::Domain(format!("exponents are outside W_H for {lambda}")));
    }
    let orbits = diagonal_orbit(&lambda);
    let mut lhs = Approx::zero();
    let mut rhs = Approx::zero();
    let mut terms = 0usize;
    for o in orbits.iter().filter(|o| sum_diag || o.is_identity()) {
        let so = apply_orbit(o, s)?;
        let xo = apply_orbit(o, x)?;
        lhs += schur_eval(&SchurInstance::new(so.clone(), xo.clone())?, cfg)?;
        rhs += determinant(&extended_jt_matrix(&so, &xo, cfg)?)?;
        terms += 1;
    }
    let id = if sum_diag { IdentityId::ExtendedJacobiTrudi } else { IdentityId::ExtendedJacobiTrudiSingle };
    Ok(IdentityReport::new(id, &lambda, lhs, rhs, DEFAULT_SLACK)
        .with_cutoff("cutoff", cfg.cutoff)
        .with_details(serde_json::json!({ "orbit_terms": terms }))
        .timed(start))
}

/// Giambelli: the determinant of hook values over Frobenius coordinates.
pub fn giambelli(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<IdentityReport> {
    let f = lambda.frobenius();
    determinant_report(IdentityId::Giambelli, spec, lambda, cfg, || {
        f.p.iter()
            .map(|&p| f.q.iter().map(|&q| direct(spec, &hook_shape(p, q), cfg)).collect())
            .collect()
    })
}

/// Shapes entering the skew Giambelli determinant: `λ^#` and the
/// anti-diagonal transposes of the hooks `(p_i | q_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewGiambelliShapes {
    pub hash: SkewShape,
    pub hooks: Vec<Vec<Partition>>,
    pub entries: Vec<Vec<SkewShape>>,
}

pub fn skew_giambelli_shapes(lambda: &Partition) -> SkewGiambelliShapes {
    let f = lambda.frobenius();
    let hooks: Vec<Vec<Partition>> =
        f.p.iter().map(|&p| f.q.iter().map(|&q| Partition::hook(p, q)).collect()).collect();
    let entries = hooks.iter().map(|row| row.iter().map(|h| hash_transpose(&h.as_skew()).shape).collect()).collect();
    SkewGiambelliShapes { hash: hash_transpose(&lambda.as_skew()).shape, hooks, entries }
}

/// Skew Giambelli on `λ^#` for integer exponents constant along diagonals.
pub fn skew_giambelli_hash(gamma: &Tableau<i64>, x: &Tableau<f64>, cfg: &EvalConfig) -> Result<IdentityReport> {
    let start = Instant::now();
    if !gamma.shape().is_straight() || gamma.shape() != x.shape() {
        return Err(ZetaError::InvalidShape("exponents and shifts must share one straight shape".into()));
    }
    let (zk, yk) = match (gamma.content_values(), x.content_values()) {
        (Some(z), Some(y)) => (z, y),
        _ => return Err(ZetaError::Precondition("exponents and shifts must be constant along diagonals".into())),
    };
    let lambda = gamma.shape().outer().clone();
    let h = hash_transpose(gamma.shape());
    let gamma_hash = gamma.transport(&h.shape, &h.map)?;
    let as_u32 = gamma_hash.map(|&v| u32::try_from(v).unwrap_or(0));
    if !cfg.override_domain && !in_i_theta(&as_u32) {
        return Err(ZetaError::Domain(format!(
            "transported exponents on {} need entries >= 1 and corner entries >= 2",
            h.shape
        )));
    }
    let spec = ContentSpec {
        z: zk.into_iter().map(|(k, v)| (k, Complex64::new(v as f64, 0.0))).collect(),
        y: yk,
    };
    let lhs = direct(&spec, &h.shape, cfg)?;
    let shapes = skew_giambelli_shapes(&lambda);
    let matrix: Vec<Vec<Approx>> = shapes
        .entries
        .iter()
        .map(|row| row.iter().map(|sh| direct(&spec, sh, cfg)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let rhs = determinant(&matrix)?;
    Ok(IdentityReport::new(IdentityId::SkewGiambelli, &h.shape, lhs, rhs, DEFAULT_SLACK)
        .with_cutoff("cutoff", cfg.cutoff)
        .timed(start))
}
