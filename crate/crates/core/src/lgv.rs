//! Lattice-path model for Schur multiple zeta-functions at finite height `N`,
//! in exact rational arithmetic.
//!
//! H-patterns are families of right/up paths from `a_i = (r+1-i, 1)` to the
//! points `b_i = (r+1-i+λ_i, N)`; E-patterns use northeast/up paths from
//! `c_i = (r'+1-i, 1)` to `d_i = (r'+1-i+λ'_i, N+1)`. Each weighted edge of
//! path `i` is matched with a cell of the `i`-th ribbon of the rim
//! decomposition whose type equals the type of the pattern.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Result, ZetaError};
use crate::perm::{permutations, sign};
use crate::schurzeta::rational_inv_pow;
use crate::shapes::{rim_decomposition_of_type, Partition, RimDecomposition, RimKind};
use crate::tableaux::Tableau;

/// Largest number of patterns enumerated in one call.
pub const MAX_PATTERNS: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PathStep {
    Right,
    Up,
    NorthEast,
}

impl PathStep {
    fn apply(self, p: Point) -> Point {
        match self {
            PathStep::Right => Point::new(p.x + 1, p.y),
            PathStep::Up => Point::new(p.x, p.y + 1),
            PathStep::NorthEast => Point::new(p.x + 1, p.y + 1),
        }
    }

    fn weighted(self) -> bool {
        self != PathStep::Up
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct LatticePath {
    pub start: Point,
    pub steps: Vec<PathStep>,
}

impl LatticePath {
    /// All lattice points visited, in order.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut p = self.start;
        out.push(p);
        for s in &self.steps {
            p = s.apply(p);
            out.push(p);
        }
        out
    }

    pub fn end(&self) -> Point {
        self.steps.iter().fold(self.start, |p, s| s.apply(p))
    }

    /// The row of each weighted edge (horizontal or northeast), in order.
    pub fn weighted_rows(&self) -> Vec<i64> {
        let mut p = self.start;
        let mut out = Vec::new();
        for s in &self.steps {
            if s.weighted() {
                out.push(p.y);
            }
            p = s.apply(p);
        }
        out
    }
}

/// A family of paths together with its type `σ` (1-based: path `i` ends at
/// the `σ(i)`-th endpoint).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Pattern {
    pub kind: RimKind,
    pub height: usize,
    pub paths: Vec<LatticePath>,
    pub sigma: Vec<usize>,
}

impl Pattern {
    pub fn sign(&self) -> i32 {
        let zero_based: Vec<usize> = self.sigma.iter().map(|v| v - 1).collect();
        sign(&zero_based)
    }

    pub fn is_identity(&self) -> bool {
        self.sigma.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn is_nonintersecting(&self) -> bool {
        let mut seen = HashSet::new();
        self.paths.iter().all(|l| l.points().into_iter().all(|p| seen.insert(p)))
    }

    /// Plain-text picture: rows from top (`N`, or `N+1` for E) down to 1,
    /// with each vertex showing the 1-based index of the path through it,
    /// `*` where several meet and `.` elsewhere.
    pub fn render(&self) -> String {
        let mut owners: HashMap<Point, Vec<usize>> = HashMap::new();
        for (i, l) in self.paths.iter().enumerate() {
            for p in l.points() {
                owners.entry(p).or_default().push(i + 1);
            }
        }
        let max_x = owners.keys().map(|p| p.x).max().unwrap_or(1);
        let max_y = owners.keys().map(|p| p.y).max().unwrap_or(1);
        let mut out = String::new();
        for y in (1..=max_y).rev() {
            let _ = write!(out, "{y:>2} ");
            for x in 1..=max_x {
                let ch = match owners.get(&Point::new(x, y)).map(Vec::as_slice) {
                    None => '.',
                    Some([i]) if *i < 10 => char::from_digit(*i as u32, 10).expect("digit"),
                    Some(_) => '*',
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }
}

fn base_shape(lambda: &Partition, kind: RimKind) -> Partition {
    match kind {
        RimKind::H => lambda.clone(),
        RimKind::E => lambda.conjugate(),
    }
}

/// Start points `a_i` (H) or `c_i` (E).
pub fn start_points(lambda: &Partition, kind: RimKind) -> Vec<Point> {
    let t = base_shape(lambda, kind).rows() as i64;
    (1..=t).map(|i| Point::new(t + 1 - i, 1)).collect()
}

/// End points `b_i` at height `N` (H) or `d_i` at height `N+1` (E).
pub fn end_points(lambda: &Partition, kind: RimKind, height: usize) -> Vec<Point> {
    let mu = base_shape(lambda, kind);
    let t = mu.rows() as i64;
    let top = match kind {
        RimKind::H => height as i64,
        RimKind::E => height as i64 + 1,
    };
    (1..=t).map(|i| Point::new(t + 1 - i + mu.part(i as usize) as i64, top)).collect()
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn path_count(kind: RimKind, a: Point, b: Point) -> u128 {
    let dx = b.x - a.x;
    let dy = b.y - a.y;
    if dx < 0 || dy < 0 {
        return 0;
    }
    match kind {
        RimKind::H => binomial((dx + dy) as u128, dx as u128),
        RimKind::E if dx <= dy => binomial(dy as u128, dx as u128),
        RimKind::E => 0,
    }
}

/// All monotone paths from `a` to `b` with the step set of the given kind.
pub fn paths_between(kind: RimKind, a: Point, b: Point) -> Vec<LatticePath> {
    let weighted = match kind {
        RimKind::H => PathStep::Right,
        RimKind::E => PathStep::NorthEast,
    };
    let mut out = Vec::new();
    let mut steps = Vec::new();
    fn rec(p: Point, b: Point, w: PathStep, steps: &mut Vec<PathStep>, a: Point, out: &mut Vec<LatticePath>) {
        if p == b {
            out.push(LatticePath { start: a, steps: steps.clone() });
            return;
        }
        for s in [w, PathStep::Up] {
            let q = s.apply(p);
            let reachable = match w {
                PathStep::NorthEast => q.x <= b.x && q.y <= b.y && b.x - q.x <= b.y - q.y,
                _ => q.x <= b.x && q.y <= b.y,
            };
            if reachable {
                steps.push(s);
                rec(q, b, w, steps, a, out);
                steps.pop();
            }
        }
    }
    if path_count(kind, a, b) > 0 {
        rec(a, b, weighted, &mut steps, a, &mut out);
    }
    out
}

/// Total number of patterns at height `N`.
pub fn pattern_count(lambda: &Partition, height: usize, kind: RimKind) -> u128 {
    let a = start_points(lambda, kind);
    let b = end_points(lambda, kind, height);
    permutations(a.len())
        .into_iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| path_count(kind, a[i], b[j])).product::<u128>())
        .sum()
}

fn check_height(lambda: &Partition, height: usize) -> Result<()> {
    if height < lambda.rows().max(1) {
        return Err(ZetaError::Precondition(format!(
            "height {height} is below the number of rows of {lambda}"
        )));
    }
    Ok(())
}

/// Patterns of the given type only.
fn patterns_of_type(lambda: &Partition, height: usize, kind: RimKind, sigma: &[usize]) -> Vec<Pattern> {
    let a = start_points(lambda, kind);
    let b = end_points(lambda, kind, height);
    let choices: Vec<Vec<LatticePath>> =
        a.iter().zip(sigma).map(|(&p, &j)| paths_between(kind, p, b[j - 1])).collect();
    if choices.iter().any(Vec::is_empty) && !a.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        out.push(Pattern {
            kind,
            height,
            paths: idx.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect(),
            sigma: sigma.to_vec(),
        });
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Every H- or E-pattern of `λ` at height `N`, grouped by type.
pub fn enumerate_patterns(lambda: &Partition, height: usize, kind: RimKind) -> Result<Vec<Pattern>> {
    check_height(lambda, height)?;
    let total = pattern_count(lambda, height, kind);
    if total > MAX_PATTERNS {
        return Err(ZetaError::Capability(format!("{total} patterns exceed the limit of {MAX_PATTERNS}")));
    }
    let t = start_points(lambda, kind).len();
    Ok(permutations(t)
        .into_iter()
        .flat_map(|p| {
            let sigma: Vec<usize> = p.iter().map(|v| v + 1).collect();
            patterns_of_type(lambda, height, kind, &sigma)
        })
        .collect())
}

/// Rim decompositions looked up by type.
#[derive(Debug, Default)]
pub struct RimCache {
    map: HashMap<(RimKind, Vec<usize>), RimDecomposition>,
}

impl RimCache {
    pub fn get(&mut self, lambda: &Partition, kind: RimKind, sigma: &[usize]) -> Result<&RimDecomposition> {
        let key = (kind, sigma.to_vec());
        if !self.map.contains_key(&key) {
            let d = rim_decomposition_of_type(lambda, kind, sigma).ok_or_else(|| {
                ZetaError::Structural(format!("no {kind:?}-rim decomposition of {lambda} has type {sigma:?}"))
            })?;
            self.map.insert(key.clone(), d);
        }
        Ok(&self.map[&key])
    }
}

fn check_tableaux(lambda: &Partition, s: &Tableau<i64>, x: &Tableau<BigRational>) -> Result<()> {
    let shape = lambda.as_skew();
    if s.shape() != &shape || x.shape() != &shape {
        return Err(ZetaError::Precondition(format!("exponent and shift tableaux must have shape {lambda}")));
    }
    if let Some((c, v)) = x.iter().find(|(_, v)| v.is_negative()) {
        return Err(ZetaError::Domain(format!("shift at {c} must be nonnegative, got {v}")));
    }
    Ok(())
}

fn weight_with(
    pattern: &Pattern,
    lambda: &Partition,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
    cache: &mut RimCache,
) -> Result<BigRational> {
    let rim = cache.get(lambda, pattern.kind, &pattern.sigma)?;
    let mut w = BigRational::one();
    for (l, theta) in pattern.paths.iter().zip(&rim.ribbons) {
        let rows = l.weighted_rows();
        if rows.len() != theta.len() {
            return Err(ZetaError::Structural(format!(
                "path with {} weighted edges matched to a ribbon of {} cells",
                rows.len(),
                theta.len()
            )));
        }
        for (row, cell) in rows.into_iter().zip(theta) {
            let base = BigRational::from_integer(BigInt::from(row)) + x.get(*cell).expect("cell in shape");
            w *= rational_inv_pow(&base, *s.get(*cell).expect("cell in shape"));
        }
    }
    Ok(w)
}

/// `w^N_s(L)`: the product of the weights of all weighted edges.
pub fn pattern_weight(
    pattern: &Pattern,
    lambda: &Partition,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
) -> Result<BigRational> {
    check_tableaux(lambda, s, x)?;
    weight_with(pattern, lambda, s, x, &mut RimCache::default())
}

/// Swaps the tails of two paths at the first shared vertex: the smallest
/// index `i` whose path meets another, the first shared vertex `v` along
/// it, and the smallest other index `j` through `v`.
pub fn tail_swap(pattern: &Pattern) -> Option<Pattern> {
    let pts: Vec<Vec<Point>> = pattern.paths.iter().map(LatticePath::points).collect();
    let sets: Vec<HashSet<Point>> = pts.iter().map(|p| p.iter().copied().collect()).collect();
    for i in 0..pts.len() {
        for (pos_i, v) in pts[i].iter().enumerate() {
            let Some(j) = (0..pts.len()).find(|&j| j != i && sets[j].contains(v)) else {
                continue;
            };
            let pos_j = pts[j].iter().position(|p| p == v).expect("shared vertex");
            let li = &pattern.paths[i];
            let lj = &pattern.paths[j];
            let mut new_i = li.steps[..pos_i].to_vec();
            new_i.extend_from_slice(&lj.steps[pos_j..]);
            let mut new_j = lj.steps[..pos_j].to_vec();
            new_j.extend_from_slice(&li.steps[pos_i..]);
            let mut out = pattern.clone();
            out.paths[i].steps = new_i;
            out.paths[j].steps = new_j;
            out.sigma.swap(i, j);
            return Some(out);
        }
    }
    None
}

/// Totals of the signed pattern sum and its cancellation witness.
#[derive(Debug, Clone, Serialize)]
pub struct CancellationReport {
    pub shape: String,
    pub height: usize,
    pub kind: RimKind,
    pub patterns: usize,
    pub nonintersecting: usize,
    /// `Σ_L sgn(type L) w(L)` over all patterns.
    pub signed_total: String,
    /// The same sum over intersecting patterns only.
    pub intersecting_signed: String,
    /// `Σ w(L)` over nonintersecting patterns.
    pub nonintersecting_total: String,
    /// Every nonintersecting pattern has identity type.
    pub nonintersecting_identity: bool,
    /// The tail swap is a sign-reversing, weight-preserving involution on
    /// intersecting patterns.
    pub witness_ok: bool,
    pub pass: bool,
}

/// Computes all totals without requiring diagonal-constant parameters.
pub fn signed_sums(
    lambda: &Partition,
    height: usize,
    kind: RimKind,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
) -> Result<CancellationReport> {
    check_tableaux(lambda, s, x)?;
    let patterns = enumerate_patterns(lambda, height, kind)?;
    let mut cache = RimCache::default();
    let mut signed = BigRational::zero();
    let mut inter = BigRational::zero();
    let mut nonint = BigRational::zero();
    let mut n_nonint = 0;
    let mut identity = true;
    let mut witness_ok = true;
    for l in &patterns {
        let w = weight_with(l, lambda, s, x, &mut cache)?;
        let sw = if l.sign() > 0 { w.clone() } else { -w.clone() };
        signed += &sw;
        if l.is_nonintersecting() {
            n_nonint += 1;
            identity &= l.is_identity();
            nonint += w;
            continue;
        }
        inter += &sw;
        witness_ok &= match tail_swap(l) {
            Some(bar) => {
                let wb = weight_with(&bar, lambda, s, x, &mut cache)?;
                bar.sign() == -l.sign() && !bar.is_nonintersecting() && tail_swap(&bar).as_ref() == Some(l) && wb == w
            }
            None => false,
        };
    }
    let pass = signed == nonint && inter.is_zero() && identity && witness_ok;
    Ok(CancellationReport {
        shape: lambda.to_string(),
        height,
        kind,
        patterns: patterns.len(),
        nonintersecting: n_nonint,
        signed_total: signed.to_string(),
        intersecting_signed: inter.to_string(),
        nonintersecting_total: nonint.to_string(),
        nonintersecting_identity: identity,
        witness_ok,
        pass,
    })
}

/// The cancellation check for diagonal-constant exponents and shifts.
pub fn verify_cancellation(
    lambda: &Partition,
    height: usize,
    kind: RimKind,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
) -> Result<CancellationReport> {
    if !s.is_diagonal_constant() || !x.is_diagonal_constant() {
        return Err(ZetaError::Precondition("exponents and shifts must be constant along diagonals".into()));
    }
    signed_sums(lambda, height, kind, s, x)
}

/// Sum of weights over nonintersecting patterns of the given kind.
pub fn nonintersecting_total(
    lambda: &Partition,
    height: usize,
    kind: RimKind,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
) -> Result<BigRational> {
    check_tableaux(lambda, s, x)?;
    check_height(lambda, height)?;
    let t = start_points(lambda, kind).len();
    let identity: Vec<usize> = (1..=t).collect();
    let mut cache = RimCache::default();
    let mut acc = BigRational::zero();
    for l in patterns_of_type(lambda, height, kind, &identity) {
        if l.is_nonintersecting() {
            acc += weight_with(&l, lambda, s, x, &mut cache)?;
        }
    }
    Ok(acc)
}

/// Height-`N` truncation of `ζ_λ(s | x)` through nonintersecting H-patterns.
pub fn truncated_schur_via_paths(
    lambda: &Partition,
    height: usize,
    s: &Tableau<i64>,
    x: &Tableau<BigRational>,
) -> Result<BigRational> {
    nonintersecting_total(lambda, height, RimKind::H, s, x)
}
