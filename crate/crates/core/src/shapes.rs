//! Young diagram combinatorics: partitions, skew shapes, conjugation,
//! Frobenius coordinates, anti-diagonal transposition and rim decompositions.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

/// A box of a Young diagram, 1-indexed, rows growing downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// `col - row`.
    pub fn content(&self) -> i64 {
        self.col as i64 - self.row as i64
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition {
    parts: Vec<usize>,
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = ZetaError;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl Partition {
    /// Validates weak decrease; trailing zeros are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.contains(&0) {
            return Err(ZetaError::InvalidShape(format!("zero part inside {parts:?}")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ZetaError::InvalidShape(format!("parts not weakly decreasing: {parts:?}")));
        }
        Ok(Partition { parts })
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The hook `(p+1, 1^q)`.
    pub fn hook(p: usize, q: usize) -> Self {
        let mut parts = vec![p + 1];
        parts.extend(std::iter::repeat_n(1, q));
        Partition { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Number of nonzero rows.
    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// Length of the first row.
    pub fn cols(&self) -> usize {
        self.parts.first().copied().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `λ_i` for 1-indexed `i`, zero beyond the last row.
    pub fn part(&self, i: usize) -> usize {
        if i == 0 {
            return usize::MAX;
        }
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.row >= 1 && c.col >= 1 && c.col <= self.part(c.row)
    }

    /// Whether `other ⊆ self` as diagrams.
    pub fn contains_partition(&self, other: &Partition) -> bool {
        other.rows() <= self.rows() && (1..=other.rows()).all(|i| other.part(i) <= self.part(i))
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for (i, &l) in self.parts.iter().enumerate() {
            for j in 1..=l {
                out.push(Cell::new(i + 1, j));
            }
        }
        out
    }

    pub fn conjugate(&self) -> Partition {
        let parts = (1..=self.cols())
            .map(|j| self.parts.iter().filter(|&&l| l >= j).count())
            .collect();
        Partition { parts }
    }

    /// Number of diagonal boxes.
    pub fn durfee(&self) -> usize {
        self.parts.iter().enumerate().filter(|(i, &l)| l > *i).count()
    }

    pub fn frobenius(&self) -> FrobeniusCoords {
        let n = self.durfee();
        let conj = self.conjugate();
        FrobeniusCoords {
            p: (1..=n).map(|i| self.part(i) - i).collect(),
            q: (1..=n).map(|i| conj.part(i) - i).collect(),
        }
    }

    pub fn from_frobenius(f: &FrobeniusCoords) -> Partition {
        let n = f.p.len();
        if n == 0 {
            return Partition::empty();
        }
        // Columns 1..=n have lengths q_j + j; rows i ≤ n have λ_i = p_i + i.
        let col_len: Vec<usize> = (0..n).map(|j| f.q[j] + j + 1).collect();
        let rows = col_len[0];
        let parts = (1..=rows)
            .map(|i| {
                if i <= n {
                    f.p[i - 1] + i
                } else {
                    col_len.iter().filter(|&&c| c >= i).count()
                }
            })
            .collect();
        Partition { parts }
    }

    pub fn corners(&self) -> BTreeSet<Cell> {
        (1..=self.rows())
            .filter(|&i| self.part(i + 1) < self.part(i))
            .map(|i| Cell::new(i, self.part(i)))
            .collect()
    }

    /// The set of contents occurring in the diagram, ascending.
    pub fn contents(&self) -> Vec<i64> {
        if self.is_empty() {
            return Vec::new();
        }
        (-(self.rows() as i64 - 1)..=(self.cols() as i64 - 1)).collect()
    }

    /// Cells of content `k`, top to bottom.
    pub fn diagonal(&self, k: i64) -> Vec<Cell> {
        self.cells().into_iter().filter(|c| c.content() == k).collect()
    }

    pub fn as_skew(&self) -> SkewShape {
        SkewShape { outer: self.clone(), inner: Partition::empty() }
    }

    /// All partitions of `n`, in reverse lexicographic order.
    pub fn all_of_size(n: usize) -> Vec<Partition> {
        fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if n == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for k in (1..=n.min(max)).rev() {
                cur.push(k);
                rec(n - k, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// All partitions contained in `self`.
    pub fn subpartitions(&self) -> Vec<Partition> {
        fn rec(outer: &Partition, i: usize, prev: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if i > outer.rows() {
                out.push(Partition::new(cur.clone()).expect("valid"));
                return;
            }
            for v in 0..=outer.part(i).min(prev) {
                cur.push(v);
                rec(outer, i + 1, v, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, 1, usize::MAX, &mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }
}

fn fmt_parts(parts: &[usize]) -> String {
    if parts.is_empty() {
        "()".to_string()
    } else {
        parts.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let t = s.trim();
    let t = t.strip_prefix('(').and_then(|u| u.strip_suffix(')')).unwrap_or(t).trim();
    if t.is_empty() {
        return Ok(Vec::new());
    }
    t.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| ZetaError::Parse(format!("bad partition part {x:?} in {s:?}")))
        })
        .collect()
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_parts(&self.parts))
    }
}

impl FromStr for Partition {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        Partition::new(parse_parts(s)?)
    }
}

/// Frobenius coordinates `(p_1,…,p_N | q_1,…,q_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FrobeniusCoords {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
}

impl FrobeniusCoords {
    pub fn new(p: Vec<usize>, q: Vec<usize>) -> Result<Self> {
        if p.len() != q.len() {
            return Err(ZetaError::InvalidShape("arm and leg sequences differ in length".into()));
        }
        if p.windows(2).any(|w| w[0] <= w[1]) || q.windows(2).any(|w| w[0] <= w[1]) {
            return Err(ZetaError::InvalidShape("Frobenius coordinates must strictly decrease".into()));
        }
        Ok(FrobeniusCoords { p, q })
    }

    pub fn depth(&self) -> usize {
        self.p.len()
    }
}

impl fmt::Display for FrobeniusCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}|{})", j(&self.p), j(&self.q))
    }
}

impl FromStr for FrobeniusCoords {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|u| u.strip_suffix(')'))
            .ok_or_else(|| ZetaError::Parse(format!("Frobenius notation needs parentheses: {s:?}")))?;
        let (a, b) = inner
            .split_once('|')
            .ok_or_else(|| ZetaError::Parse(format!("missing '|' in {s:?}")))?;
        FrobeniusCoords::new(parse_parts(a)?, parse_parts(b)?)
    }
}

/// A skew diagram `outer / inner`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SkewShape {
    outer: Partition,
    inner: Partition,
}

impl SkewShape {
    pub fn new(outer: Partition, inner: Partition) -> Result<Self> {
        if !outer.contains_partition(&inner) {
            return Err(ZetaError::InvalidShape(format!("{inner} is not contained in {outer}")));
        }
        Ok(SkewShape { outer, inner }.normalized())
    }

    /// Trims trailing rows where inner and outer coincide.
    fn normalized(mut self) -> Self {
        while self.outer.rows() > 0 && self.outer.rows() == self.inner.rows() {
            let r = self.outer.rows();
            if self.outer.part(r) == self.inner.part(r) {
                self.outer.parts.pop();
                self.inner.parts.pop();
            } else {
                break;
            }
        }
        self
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn is_straight(&self) -> bool {
        self.inner.is_empty()
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.outer.contains(c) && !self.inner.contains(c)
    }

    pub fn size(&self) -> usize {
        self.outer.size() - self.inner.size()
    }

    /// Cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::with_capacity(self.size());
        for i in 1..=self.outer.rows() {
            for j in self.inner.part(i) + 1..=self.outer.part(i) {
                out.push(Cell::new(i, j));
            }
        }
        out
    }

    /// Cells with no right neighbor and no lower neighbor inside the shape.
    pub fn corners(&self) -> BTreeSet<Cell> {
        self.cells()
            .into_iter()
            .filter(|c| {
                !self.contains(Cell::new(c.row, c.col + 1)) && !self.contains(Cell::new(c.row + 1, c.col))
            })
            .collect()
    }

    pub fn contents(&self) -> Vec<i64> {
        let s: BTreeSet<i64> = self.cells().iter().map(|c| c.content()).collect();
        s.into_iter().collect()
    }

    /// Whether the shape is connected and free of 2×2 blocks.
    pub fn is_ribbon(&self) -> bool {
        is_ribbon_cells(&self.cells())
    }
}

impl From<Partition> for SkewShape {
    fn from(p: Partition) -> Self {
        p.as_skew()
    }
}

impl fmt::Display for SkewShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.is_empty() {
            write!(f, "{}", self.outer)
        } else {
            write!(f, "{}/{}", self.outer, self.inner)
        }
    }
}

impl FromStr for SkewShape {
    type Err = ZetaError;
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('/') {
            Some((a, b)) => SkewShape::new(a.parse()?, b.parse()?),
            None => Ok(s.parse::<Partition>()?.as_skew()),
        }
    }
}

/// Connectivity (edge adjacency) and absence of 2×2 blocks for a cell set.
pub fn is_ribbon_cells(cells: &[Cell]) -> bool {
    if cells.is_empty() {
        return false;
    }
    let set: BTreeSet<Cell> = cells.iter().copied().collect();
    for c in &set {
        let right = Cell::new(c.row, c.col + 1);
        let down = Cell::new(c.row + 1, c.col);
        let diag = Cell::new(c.row + 1, c.col + 1);
        if set.contains(&right) && set.contains(&down) && set.contains(&diag) {
            return false;
        }
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![*set.iter().next().unwrap()];
    while let Some(c) = stack.pop() {
        if !seen.insert(c) {
            continue;
        }
        let mut nbrs = vec![Cell::new(c.row + 1, c.col), Cell::new(c.row, c.col + 1)];
        if c.row > 1 {
            nbrs.push(Cell::new(c.row - 1, c.col));
        }
        if c.col > 1 {
            nbrs.push(Cell::new(c.row, c.col - 1));
        }
        stack.extend(nbrs.into_iter().filter(|n| set.contains(n) && !seen.contains(n)));
    }
    seen.len() == set.len()
}

/// Result of reflecting a skew shape across the anti-diagonal of an `n × n`
/// box: the image shape plus the cell bijection `(i,j) ↦ (n+1-j, n+1-i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashTranspose {
    pub shape: SkewShape,
    pub box_size: usize,
    /// Pairs `(source cell, image cell)` in the source's row-major order.
    pub map: Vec<(Cell, Cell)>,
}

impl HashTranspose {
    pub fn image_of(&self, c: Cell) -> Option<Cell> {
        self.map.iter().find(|(a, _)| *a == c).map(|(_, b)| *b)
    }
}

fn box_complement_conjugate(k: &Partition, n: usize) -> Partition {
    let kc = k.conjugate();
    let parts = (1..=n).map(|a| n - kc.part(n + 1 - a)).collect();
    Partition::new(parts).expect("complement of a partition in a box is a partition")
}

/// Anti-diagonal transpose in the smallest square box containing the outer shape.
pub fn hash_transpose(s: &SkewShape) -> HashTranspose {
    let n = s.outer().rows().max(s.outer().cols());
    hash_transpose_in_box(s, n).expect("box fits")
}

/// Anti-diagonal transpose in an explicit `n × n` box.
pub fn hash_transpose_in_box(s: &SkewShape, n: usize) -> Result<HashTranspose> {
    if s.outer().rows() > n || s.outer().cols() > n {
        return Err(ZetaError::InvalidShape(format!("{s} does not fit in a {n}x{n} box")));
    }
    let outer = box_complement_conjugate(s.inner(), n);
    let inner = box_complement_conjugate(s.outer(), n);
    let shape = SkewShape::new(outer, inner)?;
    let map = s
        .cells()
        .into_iter()
        .map(|c| (c, Cell::new(n + 1 - c.col, n + 1 - c.row)))
        .collect();
    Ok(HashTranspose { shape, box_size: n, map })
}

/// Which family of rim decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RimKind {
    H,
    E,
}

/// An ordered peeling of a partition into ribbons `θ_1, …, θ_t`, where empty
/// ribbons are kept as explicit empty slots. Each ribbon lists its cells from
/// its anchor cell (`(i,1)` for H, `(1,i)` for E) to its far end.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RimDecomposition {
    pub shape: Partition,
    pub kind: RimKind,
    pub ribbons: Vec<Vec<Cell>>,
}

impl RimDecomposition {
    /// Slot index (1-based) of the ribbon containing `c`.
    pub fn slot_of(&self, c: Cell) -> Option<usize> {
        self.ribbons.iter().position(|r| r.contains(&c)).map(|i| i + 1)
    }

    /// The permutation `σ` (1-based values) with `|θ_i| - i = μ_σ(i) - σ(i)`,
    /// where `μ` is the shape for H and its conjugate for E.
    pub fn type_permutation(&self) -> Vec<usize> {
        let base = match self.kind {
            RimKind::H => self.shape.clone(),
            RimKind::E => self.shape.conjugate(),
        };
        let t = self.ribbons.len();
        (1..=t)
            .map(|i| {
                let target = self.ribbons[i - 1].len() as i64 - i as i64;
                (1..=t)
                    .find(|&k| base.part(k) as i64 - k as i64 == target)
                    .expect("ribbon lengths realize a permutation")
            })
            .collect()
    }

    /// Checks the defining invariants.
    pub fn validate(&self) -> bool {
        let mut acc: BTreeSet<Cell> = BTreeSet::new();
        for (idx, r) in self.ribbons.iter().enumerate() {
            let i = idx + 1;
            if r.is_empty() {
                continue;
            }
            let anchor = match self.kind {
                RimKind::H => Cell::new(i, 1),
                RimKind::E => Cell::new(1, i),
            };
            if r[0] != anchor || !is_ribbon_cells(r) {
                return false;
            }
            for c in r {
                if !acc.insert(*c) {
                    return false;
                }
            }
            if !cells_form_partition(&acc) {
                return false;
            }
        }
        acc == self.shape.cells().into_iter().collect::<BTreeSet<_>>()
    }
}

fn cells_form_partition(cells: &BTreeSet<Cell>) -> bool {
    cells.iter().all(|c| {
        (c.row == 1 || cells.contains(&Cell::new(c.row - 1, c.col)))
            && (c.col == 1 || cells.contains(&Cell::new(c.row, c.col - 1)))
    })
}

/// Every H-rim decomposition of `lambda`, with exactly `rows` slots.
pub fn h_rim_decompositions(lambda: &Partition) -> Vec<RimDecomposition> {
    let r = lambda.rows();
    let mut out = Vec::new();
    let mut slots = vec![Vec::new(); r];
    h_rim_rec(lambda, r, lambda.parts().to_vec(), &mut slots, &mut out);
    out
}

fn h_rim_rec(
    lambda: &Partition,
    i: usize,
    mu: Vec<usize>,
    slots: &mut Vec<Vec<Cell>>,
    out: &mut Vec<RimDecomposition>,
) {
    if i == 0 {
        if mu.is_empty() {
            out.push(RimDecomposition { shape: lambda.clone(), kind: RimKind::H, ribbons: slots.clone() });
        }
        return;
    }
    let rows = mu.len();
    if rows < i {
        slots[i - 1] = Vec::new();
        h_rim_rec(lambda, i - 1, mu, slots, out);
        return;
    }
    if rows > i {
        return;
    }
    let part = |k: usize| if k == 0 { usize::MAX } else { mu.get(k - 1).copied().unwrap_or(0) };
    // Walk the outer rim from (i,1) towards the north-east.
    let mut path = Vec::new();
    let (mut a, mut b) = (i, 1usize);
    loop {
        path.push(Cell::new(a, b));
        if b == part(a) {
            // Row end: the prefix may stop here.
            let mut nu = mu.clone();
            nu[a - 1] = if a == i { 0 } else { part(a + 1) - 1 };
            for k in a + 1..=i {
                nu[k - 1] = if k == i { 0 } else { part(k + 1) - 1 };
            }
            while nu.last() == Some(&0) {
                nu.pop();
            }
            slots[i - 1] = path.clone();
            h_rim_rec(lambda, i - 1, nu, slots, out);
            if a == 1 {
                break;
            }
            a -= 1;
        } else {
            b += 1;
        }
    }
    slots[i - 1] = Vec::new();
}

/// Every E-rim decomposition of `lambda`, with exactly `cols` slots.
pub fn e_rim_decompositions(lambda: &Partition) -> Vec<RimDecomposition> {
    h_rim_decompositions(&lambda.conjugate())
        .into_iter()
        .map(|d| RimDecomposition {
            shape: lambda.clone(),
            kind: RimKind::E,
            ribbons: d
                .ribbons
                .into_iter()
                .map(|r| r.into_iter().map(|c| Cell::new(c.col, c.row)).collect())
                .collect(),
        })
        .collect()
}

/// The unique decomposition of the given kind whose type is `sigma`, if any.
pub fn rim_decomposition_of_type(lambda: &Partition, kind: RimKind, sigma: &[usize]) -> Option<RimDecomposition> {
    let all = match kind {
        RimKind::H => h_rim_decompositions(lambda),
        RimKind::E => e_rim_decompositions(lambda),
    };
    all.into_iter().find(|d| d.type_permutation() == sigma)
}
