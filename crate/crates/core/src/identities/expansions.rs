//! Hook and Frobenius expansions, the Dirichlet-series form, and the
//! derivative identities on hooks.

use std::collections::HashMap;
use std::time::Instant;

use num_complex::Complex64;

use super::{check_w, determinant, hook_shape, IdentityId, IdentityReport, DEFAULT_SLACK};
use crate::certified::{inv_pow, power_tail_abs, Approx, EvalConfig, PowerFactor, TailMode};
use crate::error::{Result, ZetaError};
use crate::ezzeta::{by_depth, ez_zeta, ez_zeta_star, ez_zeta_star_star};
use crate::perm::{permutations, sign};
use crate::schurzeta::{d_dy, schur_eval, shift_exponent, SchurInstance};
use crate::shapes::{Cell, Partition};
use crate::tableaux::ContentSpec;

/// Cutoff used for the inner sums of the Dirichlet-series form.
pub const DIRICHLET_INNER_CUTOFF: usize = 200;

/// Allowed gap between a finite-difference derivative and its closed form.
pub const FD_TOLERANCE: f64 = 1e-3;

/// `ζ*(z_a, z_{a+1}, …, z_b | y)`; 1 when `b < a`.
fn star_run(spec: &ContentSpec, a: i64, b: i64, cfg: &EvalConfig) -> Result<Approx> {
    by_depth(b - a + 1, || {
        let (z, y) = spec.slice(a..=b)?;
        ez_zeta_star(&z, &y, cfg)
    })
}

/// `ζ(z_a, z_{a-1}, …, z_b | y)`; 1 when `a < b`.
fn zeta_run_down(spec: &ContentSpec, a: i64, b: i64, cfg: &EvalConfig) -> Result<Approx> {
    by_depth(a - b + 1, || {
        let (z, y) = spec.slice((b..=a).rev())?;
        ez_zeta(&z, &y, cfg)
    })
}

fn alternate(j: usize, v: Approx) -> Approx {
    if j % 2 == 1 {
        -v
    } else {
        v
    }
}

fn star_side(spec: &ContentSpec, p: usize, q: usize, cfg: &EvalConfig) -> Result<Approx> {
    let (p, q) = (p as i64, q as i64);
    let mut acc = Approx::zero();
    for j in 0..=q {
        let t = star_run(spec, -j, p, cfg)? * zeta_run_down(spec, -j - 1, -q, cfg)?;
        acc += alternate(j as usize, t);
    }
    Ok(acc)
}

fn hook_report(
    id: IdentityId,
    spec: &ContentSpec,
    p: usize,
    q: usize,
    cfg: &EvalConfig,
    rhs: impl FnOnce() -> Result<Approx>,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let shape = hook_shape(p, q);
    check_w(spec, &shape, cfg)?;
    let lhs = schur_eval(&SchurInstance::from_content(spec, &shape)?, cfg)?;
    let rhs = rhs()?;
    Ok(IdentityReport::new(id, shape.outer(), lhs, rhs, DEFAULT_SLACK).with_cutoff("cutoff", cfg.cutoff).timed(start))
}

/// `ζ_{(p+1,1^q)} = Σ_{j=0}^q (-1)^j ζ*(z_{-j},…,z_p) ζ(z_{-j-1},…,z_{-q})`.
pub fn hook_expansion_star(spec: &ContentSpec, p: usize, q: usize, cfg: &EvalConfig) -> Result<IdentityReport> {
    hook_report(IdentityId::HookStar, spec, p, q, cfg, || star_side(spec, p, q, cfg))
}

/// `ζ_{(p+1,1^q)} = Σ_{j=0}^p (-1)^j ζ(z_j,…,z_0,…,z_{-q}) ζ*(z_{j+1},…,z_p)`.
pub fn hook_expansion_zeta(spec: &ContentSpec, p: usize, q: usize, cfg: &EvalConfig) -> Result<IdentityReport> {
    hook_report(IdentityId::HookZeta, spec, p, q, cfg, || {
        let (pi, qi) = (p as i64, q as i64);
        let mut acc = Approx::zero();
        for j in 0..=pi {
            let t = zeta_run_down(spec, j, -qi, cfg)? * star_run(spec, j + 1, pi, cfg)?;
            acc += alternate(j as usize, t);
        }
        Ok(acc)
    })
}

/// Signed sum over permutations and alternating sums over `j_k ∈ [0, q_k]`
/// of products of the star and plain runs.
pub fn frobenius_expansion(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<IdentityReport> {
    let start = Instant::now();
    let shape = lambda.as_skew();
    check_w(spec, &shape, cfg)?;
    let lhs = schur_eval(&SchurInstance::from_content(spec, &shape)?, cfg)?;
    let f = lambda.frobenius();
    let n = f.depth();
    let mut stars: HashMap<(usize, usize), Approx> = HashMap::new();
    let mut plains: HashMap<(usize, usize), Approx> = HashMap::new();
    for &q in &f.q {
        for j in 0..=q {
            for &p in &f.p {
                stars.insert((j, p), star_run(spec, -(j as i64), p as i64, cfg)?);
            }
            plains.insert((j, q), zeta_run_down(spec, -(j as i64) - 1, -(q as i64), cfg)?);
        }
    }
    let mut rhs = Approx::zero();
    let mut terms = 0usize;
    for sigma in permutations(n) {
        let mut js = vec![0usize; n];
        loop {
            let mut t = Approx::one();
            for k in 0..n {
                t = t * stars[&(js[k], f.p[sigma[k]])] * plains[&(js[k], f.q[k])];
            }
            let parity = js.iter().sum::<usize>() + usize::from(sign(&sigma) < 0);
            rhs += alternate(parity, t);
            terms += 1;
            let mut k = 0;
            while k < n {
                js[k] += 1;
                if js[k] <= f.q[k] {
                    break;
                }
                js[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(IdentityReport::new(IdentityId::Frobenius, lambda, lhs, rhs, DEFAULT_SLACK)
        .with_cutoff("cutoff", cfg.cutoff)
        .with_details(serde_json::json!({ "terms": terms }))
        .timed(start))
}

/// `ζ**(z_1,…,z_p | m+y_1,…,m+y_p)`.
fn dirichlet_arm(spec: &ContentSpec, p: usize, m: f64, cfg: &EvalConfig) -> Result<Approx> {
    by_depth(p as i64, || {
        let (z, y) = spec.slice(1..=p as i64)?;
        let y: Vec<f64> = y.iter().map(|v| v + m).collect();
        ez_zeta_star_star(&z, &y, cfg)
    })
}

/// `ζ(z_{-1},…,z_{-q} | m+y_{-1},…,m+y_{-q})`.
fn dirichlet_leg(spec: &ContentSpec, q: usize, m: f64, cfg: &EvalConfig) -> Result<Approx> {
    by_depth(q as i64, || {
        let (z, y) = spec.slice((1..=q as i64).map(|t| -t))?;
        let y: Vec<f64> = y.iter().map(|v| v + m).collect();
        ez_zeta(&z, &y, cfg)
    })
}

fn real_parts(spec: &ContentSpec) -> ContentSpec {
    ContentSpec { z: spec.z.iter().map(|(k, v)| (*k, Complex64::new(v.re, 0.0))).collect(), y: spec.y.clone() }
}

/// The Dirichlet-series form over the diagonal entries `m_11, …, m_NN`.
///
/// The sum over all diagonal index vectors factorizes, so it is evaluated as
/// `det[Σ_m (m+y_0)^{-z_0} A_{p_k}(m) B_{q_j}(m)]` with `m ≤ cfg.cutoff`
/// and a majorant for `m > cfg.cutoff`.
pub fn dirichlet_series_expr(spec: &ContentSpec, lambda: &Partition, cfg: &EvalConfig) -> Result<IdentityReport> {
    dirichlet_series_expr_with(spec, lambda, cfg, DIRICHLET_INNER_CUTOFF)
}

pub fn dirichlet_series_expr_with(
    spec: &ContentSpec,
    lambda: &Partition,
    cfg: &EvalConfig,
    inner_cutoff: usize,
) -> Result<IdentityReport> {
    let start = Instant::now();
    let shape = lambda.as_skew();
    check_w(spec, &shape, cfg)?;
    let lhs = schur_eval(&SchurInstance::from_content(spec, &shape)?, cfg)?;
    let f = lambda.frobenius();
    let n = f.depth();
    let outer = cfg.cutoff;
    let inner = EvalConfig { cutoff: inner_cutoff, target_abs_err: None, ..cfg.clone() };
    let z0 = spec.z_at(0)?;
    let y0 = spec.y_at(0);

    let mut ps: Vec<usize> = f.p.clone();
    ps.sort_unstable();
    ps.dedup();
    let mut qs: Vec<usize> = f.q.clone();
    qs.sort_unstable();
    qs.dedup();

    let mut g = vec![vec![Approx::zero(); n]; n];
    for m in 1..=outer {
        let mf = m as f64;
        let w = Approx::exact(inv_pow(mf + y0, z0));
        let arms: HashMap<usize, Approx> =
            ps.iter().map(|&p| Ok((p, dirichlet_arm(spec, p, mf, &inner)?))).collect::<Result<_>>()?;
        let legs: HashMap<usize, Approx> =
            qs.iter().map(|&q| Ok((q, dirichlet_leg(spec, q, mf, &inner)?))).collect::<Result<_>>()?;
        for k in 0..n {
            for j in 0..n {
                g[k][j] += w * arms[&f.p[k]] * legs[&f.q[j]];
            }
        }
    }

    // For m > outer every inner factor is dominated by its value at the
    // real parts and shift outer + 1.
    let re = real_parts(spec);
    let a = (outer + 1) as f64;
    let bound_cfg = EvalConfig { tail_mode: TailMode::BoundOnly, ..inner.clone() };
    let weight_tail = power_tail_abs(&[PowerFactor::new(z0, y0)], outer as u64 + 1);
    for k in 0..n {
        for j in 0..n {
            let arm = dirichlet_arm(&re, f.p[k], a, &bound_cfg)?.abs_upper();
            let leg = dirichlet_leg(&re, f.q[j], a, &bound_cfg)?.abs_upper();
            g[k][j].err_bound += arm * leg * weight_tail;
        }
    }
    let rhs = determinant(&g)?;
    Ok(IdentityReport::new(IdentityId::Dirichlet, lambda, lhs, rhs, DEFAULT_SLACK)
        .with_cutoff("cutoff", cfg.cutoff)
        .with_cutoff("outer", outer)
        .with_cutoff("inner", inner_cutoff)
        .timed(start))
}

fn content_cells(lambda: &Partition, ell: i64) -> Vec<Cell> {
    lambda.cells().into_iter().filter(|c| c.content() == ell).collect()
}

fn check_derivative_args(p: usize, ell: i64) -> Result<()> {
    if ell < 0 || ell > p as i64 {
        return Err(ZetaError::Precondition(format!("content {ell} is outside 0..={p}")));
    }
    Ok(())
}

/// Sum over content-`ℓ` cells of the value with that exponent raised by 1.
fn first_shift_sum(inst: &SchurInstance, cells: &[Cell], cfg: &EvalConfig) -> Result<Approx> {
    cells.iter().map(|c| schur_eval(&shift_exponent(inst, &[*c], 1)?, cfg)).sum()
}

/// Derivative identity of order 1 or 2 on the hook `(p+1, 1^q)`: raising
/// `z_ℓ` in every content-`ℓ` cell equals the star-side expansion with `z_ℓ`
/// raised by the order.
pub fn derivative_identity(
    spec: &ContentSpec,
    p: usize,
    q: usize,
    ell: i64,
    order: u32,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    let start = Instant::now();
    check_derivative_args(p, ell)?;
    if !(1..=2).contains(&order) {
        return Err(ZetaError::Precondition(format!("derivative order must be 1 or 2, got {order}")));
    }
    let lambda = Partition::hook(p, q);
    let shape = lambda.as_skew();
    check_w(spec, &shape, cfg)?;
    let inst = SchurInstance::from_content(spec, &shape)?;
    let cells = content_cells(&lambda, ell);
    let mut pairs = 0usize;
    let lhs = if order == 1 {
        first_shift_sum(&inst, &cells, cfg)?
    } else {
        let mut acc: Approx =
            cells.iter().map(|c| schur_eval(&shift_exponent(&inst, &[*c], 2)?, cfg)).sum::<Result<Approx>>()?;
        for (a, c1) in cells.iter().enumerate() {
            for c2 in &cells[a + 1..] {
                acc += schur_eval(&shift_exponent(&inst, &[*c1, *c2], 1)?, cfg)?.scale(2.0);
                pairs += 1;
            }
        }
        acc
    };
    let rhs = star_side(&spec.with_z_shift(ell, f64::from(order)), p, q, cfg)?;
    Ok(IdentityReport::new(IdentityId::Derivative, &lambda, lhs, rhs, DEFAULT_SLACK)
        .with_cutoff("cutoff", cfg.cutoff)
        .with_details(serde_json::json!({ "ell": ell, "order": order, "cells": cells.len(), "pairs": pairs }))
        .timed(start))
}

/// Central-difference `∂/∂y_ℓ` of the hook value against `-z_ℓ` times the
/// order-1 shifted sum. The comparison tolerance is [`FD_TOLERANCE`].
pub fn derivative_fd_check(
    spec: &ContentSpec,
    p: usize,
    q: usize,
    ell: i64,
    h: f64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    let start = Instant::now();
    check_derivative_args(p, ell)?;
    let lambda = Partition::hook(p, q);
    let shape = lambda.as_skew();
    check_w(spec, &shape, cfg)?;
    let fd = d_dy(spec, &shape, ell, h, cfg)?;
    let lhs = Approx::new(fd.estimate.value, fd.estimate.err_bound + fd.discretization);
    let inst = SchurInstance::from_content(spec, &shape)?;
    let shifted = first_shift_sum(&inst, &content_cells(&lambda, ell), cfg)?;
    let rhs = Approx::exact(-spec.z_at(ell)?) * shifted;
    Ok(IdentityReport::new(IdentityId::DerivativeFd, &lambda, lhs, rhs, FD_TOLERANCE)
        .with_cutoff("cutoff", cfg.cutoff)
        .with_details(serde_json::json!({ "ell": ell, "h": h, "discretization": fd.discretization }))
        .timed(start))
}
