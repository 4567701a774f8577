//! Tableaux over straight and skew shapes, content parametrizations, domain
//! predicates and the diagonal-permutation orbit.

mod sigma;
mod ssyt;
pub mod text;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};
use crate::perm::permutations;
use crate::shapes::{Cell, Partition, SkewShape};

pub use sigma::{decompose_sigma_tableau, is_sigma_tableau, HookPiece};
pub use ssyt::{is_ssyt, ssyt_iter, SsytIter};

/// A filling of every cell of a (possibly skew) shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Tableau<T> {
    shape: SkewShape,
    cells: Vec<Cell>,
    values: Vec<T>,
}

impl<T: Clone> Tableau<T> {
    /// Builds a tableau from values listed in row-major cell order.
    pub fn new(shape: impl Into<SkewShape>, values: Vec<T>) -> Result<Self> {
        let shape = shape.into();
        let cells = shape.cells();
        if cells.len() != values.len() {
            return Err(ZetaError::InvalidShape(format!(
                "{} values given for {} cells of {}",
                values.len(),
                cells.len(),
                shape
            )));
        }
        Ok(Tableau { shape, cells, values })
    }

    /// Constant filling.
    pub fn filled(shape: impl Into<SkewShape>, v: T) -> Self {
        let shape = shape.into();
        let cells = shape.cells();
        let values = vec![v; cells.len()];
        Tableau { shape, cells, values }
    }

    /// Filling computed cell by cell.
    pub fn from_fn(shape: impl Into<SkewShape>, f: impl FnMut(Cell) -> T) -> Self {
        let shape = shape.into();
        let cells = shape.cells();
        let values = cells.iter().copied().map(f).collect();
        Tableau { shape, cells, values }
    }

    /// Straight-shape tableau from rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())?;
        Tableau::new(shape, rows.into_iter().flatten().collect())
    }

    pub fn shape(&self) -> &SkewShape {
        &self.shape
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (Cell, &T)> {
        self.cells.iter().copied().zip(self.values.iter())
    }

    pub fn index_of(&self, c: Cell) -> Option<usize> {
        self.cells.binary_search(&c).ok()
    }

    pub fn get(&self, c: Cell) -> Option<&T> {
        self.index_of(c).map(|i| &self.values[i])
    }

    pub fn set(&mut self, c: Cell, v: T) -> Result<()> {
        let i = self
            .index_of(c)
            .ok_or_else(|| ZetaError::Precondition(format!("cell {c} is not in {}", self.shape)))?;
        self.values[i] = v;
        Ok(())
    }

    pub fn map<U: Clone>(&self, f: impl FnMut(&T) -> U) -> Tableau<U> {
        Tableau { shape: self.shape.clone(), cells: self.cells.clone(), values: self.values.iter().map(f).collect() }
    }

    /// Values row by row, `None` for the absent cells left of each skew row.
    pub fn rows(&self) -> Vec<Vec<Option<T>>> {
        let outer = self.shape.outer();
        (1..=outer.rows())
            .map(|i| (1..=outer.part(i)).map(|j| self.get(Cell::new(i, j)).cloned()).collect())
            .collect()
    }

    /// Moves values onto another shape through a cell bijection.
    pub fn transport(&self, target: &SkewShape, map: &[(Cell, Cell)]) -> Result<Tableau<T>> {
        let mut out: Vec<Option<T>> = vec![None; target.size()];
        let tcells = target.cells();
        for (src, dst) in map {
            let v = self
                .get(*src)
                .ok_or_else(|| ZetaError::Structural(format!("cell {src} missing from source")))?;
            let k = tcells
                .binary_search(dst)
                .map_err(|_| ZetaError::Structural(format!("cell {dst} missing from target")))?;
            out[k] = Some(v.clone());
        }
        let values = out
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| ZetaError::Structural("cell map is not onto the target shape".into()))?;
        Tableau::new(target.clone(), values)
    }
}

impl<T: Clone + PartialEq> Tableau<T> {
    /// Whether all cells of equal content carry equal values.
    pub fn is_diagonal_constant(&self) -> bool {
        let mut seen: BTreeMap<i64, &T> = BTreeMap::new();
        for (c, v) in self.iter() {
            match seen.get(&c.content()) {
                Some(w) if *w != v => return false,
                Some(_) => {}
                None => {
                    seen.insert(c.content(), v);
                }
            }
        }
        true
    }

    /// The value on each content diagonal, if diagonal-constant.
    pub fn content_values(&self) -> Option<BTreeMap<i64, T>> {
        if !self.is_diagonal_constant() {
            return None;
        }
        Some(self.iter().map(|(c, v)| (c.content(), v.clone())).collect())
    }
}

/// Diagonal-constant exponents `z_k` and shifts `y_k`, indexed by content.
///
/// Shifts absent from `y` are taken to be zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ContentSpec {
    pub z: BTreeMap<i64, Complex64>,
    pub y: BTreeMap<i64, f64>,
}

impl ContentSpec {
    pub fn new(z: impl IntoIterator<Item = (i64, f64)>, y: impl IntoIterator<Item = (i64, f64)>) -> Self {
        ContentSpec {
            z: z.into_iter().map(|(k, v)| (k, Complex64::new(v, 0.0))).collect(),
            y: y.into_iter().collect(),
        }
    }

    pub fn z_at(&self, k: i64) -> Result<Complex64> {
        self.z.get(&k).copied().ok_or(ZetaError::MissingContent(k))
    }

    pub fn y_at(&self, k: i64) -> f64 {
        self.y.get(&k).copied().unwrap_or(0.0)
    }

    /// Exponent and shift lists for the consecutive contents `ks`.
    pub fn slice(&self, ks: impl IntoIterator<Item = i64>) -> Result<(Vec<Complex64>, Vec<f64>)> {
        let mut z = Vec::new();
        let mut y = Vec::new();
        for k in ks {
            z.push(self.z_at(k)?);
            y.push(self.y_at(k));
        }
        Ok((z, y))
    }

    /// Copy with `z_k` raised by `a`.
    pub fn with_z_shift(&self, k: i64, a: f64) -> Self {
        let mut out = self.clone();
        if let Some(v) = out.z.get_mut(&k) {
            *v += a;
        }
        out
    }

    /// Copy with `y_k` replaced.
    pub fn with_y(&self, k: i64, v: f64) -> Self {
        let mut out = self.clone();
        out.y.insert(k, v);
        out
    }
}

/// `s_ij = z_{j-i}` and `x_ij = y_{j-i}` on the given shape.
pub fn expand_content(spec: &ContentSpec, shape: &SkewShape) -> Result<(Tableau<Complex64>, Tableau<f64>)> {
    for k in shape.contents() {
        spec.z_at(k)?;
    }
    let s = Tableau::from_fn(shape.clone(), |c| spec.z[&c.content()]);
    let x = Tableau::from_fn(shape.clone(), |c| spec.y_at(c.content()));
    Ok((s, x))
}

fn w_condition(s: &Tableau<Complex64>, strict: impl Fn(Cell) -> bool) -> bool {
    s.iter().all(|(c, v)| if strict(c) { v.re > 1.0 } else { v.re >= 1.0 })
}

/// `Re ≥ 1` everywhere and `Re > 1` on corners.
pub fn in_w_lambda(s: &Tableau<Complex64>) -> bool {
    let corners = s.shape().corners();
    w_condition(s, |c| corners.contains(&c))
}

/// First cell violating the W condition, with a description.
pub fn w_violation(s: &Tableau<Complex64>) -> Option<String> {
    let corners = s.shape().corners();
    s.iter().find_map(|(c, v)| {
        if corners.contains(&c) && v.re <= 1.0 {
            Some(format!("corner {c} needs Re(s) > 1, got {}", v.re))
        } else if v.re < 1.0 {
            Some(format!("cell {c} needs Re(s) >= 1, got {}", v.re))
        } else {
            None
        }
    })
}

/// Cells whose content equals `λ_i - i` for some row `i`.
pub fn h_cells(lambda: &Partition) -> Vec<Cell> {
    let ks: Vec<i64> = (1..=lambda.rows()).map(|i| lambda.part(i) as i64 - i as i64).collect();
    lambda.cells().into_iter().filter(|c| ks.contains(&c.content())).collect()
}

/// `Re > 1` on the cells of [`h_cells`], `Re ≥ 1` elsewhere. Straight shapes only.
pub fn in_w_lambda_h(s: &Tableau<Complex64>) -> bool {
    if !s.shape().is_straight() {
        return false;
    }
    let h = h_cells(s.shape().outer());
    w_condition(s, |c| h.contains(&c))
}

/// [`in_w_lambda`] together with diagonal constancy.
pub fn in_w_lambda_diag(s: &Tableau<Complex64>) -> bool {
    in_w_lambda(s) && s.is_diagonal_constant()
}

/// All entries at least 1 and corner entries at least 2.
pub fn in_i_theta(gamma: &Tableau<u32>) -> bool {
    let corners = gamma.shape().corners();
    gamma.iter().all(|(c, &v)| v >= if corners.contains(&c) { 2 } else { 1 })
}

/// One choice of a permutation of the cells on every content diagonal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalOrbit {
    pub shape: Partition,
    /// Cells of each content, top to bottom.
    pub diagonal_sets: BTreeMap<i64, Vec<Cell>>,
    /// Permutation (0-based) of each diagonal set.
    pub permutation_choice: BTreeMap<i64, Vec<usize>>,
}

impl DiagonalOrbit {
    pub fn is_identity(&self) -> bool {
        self.permutation_choice.values().all(|p| p.iter().enumerate().all(|(i, &v)| i == v))
    }
}

/// Every tuple of per-diagonal permutations. The lowest content varies
/// fastest; each factor runs through its permutations lexicographically.
pub fn diagonal_orbit(shape: &Partition) -> Vec<DiagonalOrbit> {
    let sets: BTreeMap<i64, Vec<Cell>> = shape.contents().into_iter().map(|k| (k, shape.diagonal(k))).collect();
    let keys: Vec<i64> = sets.keys().copied().collect();
    let perms: Vec<Vec<Vec<usize>>> = keys.iter().map(|k| permutations(sets[k].len())).collect();
    let mut idx = vec![0usize; keys.len()];
    let mut out = Vec::new();
    loop {
        let choice = keys.iter().enumerate().map(|(t, &k)| (k, perms[t][idx[t]].clone())).collect();
        out.push(DiagonalOrbit { shape: shape.clone(), diagonal_sets: sets.clone(), permutation_choice: choice });
        let mut t = 0;
        loop {
            if t == keys.len() {
                return out;
            }
            idx[t] += 1;
            if idx[t] < perms[t].len() {
                break;
            }
            idx[t] = 0;
            t += 1;
        }
    }
}

/// Permutes entries within each diagonal: the value at the `k`-th cell of
/// `I(j)` becomes the old value at cell `σ_j(k)`.
pub fn apply_orbit<T: Clone>(orbit: &DiagonalOrbit, t: &Tableau<T>) -> Result<Tableau<T>> {
    if t.shape() != &orbit.shape.as_skew() {
        return Err(ZetaError::Precondition("orbit and tableau shapes differ".into()));
    }
    let mut out = t.clone();
    for (k, cells) in &orbit.diagonal_sets {
        let p = &orbit.permutation_choice[k];
        for (pos, c) in cells.iter().enumerate() {
            out.set(*c, t.get(cells[p[pos]]).expect("cell in shape").clone())?;
        }
    }
    Ok(out)
}

/// Inverse orbit element.
pub fn invert_orbit(orbit: &DiagonalOrbit) -> DiagonalOrbit {
    let mut inv = orbit.clone();
    for (k, p) in &orbit.permutation_choice {
        let mut q = vec![0; p.len()];
        for (i, &v) in p.iter().enumerate() {
            q[v] = i;
        }
        inv.permutation_choice.insert(*k, q);
    }
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn w_domain_examples() {
        let t = |rows: Vec<Vec<f64>>| Tableau::from_rows(rows.into_iter().map(|r| r.into_iter().map(c).collect()).collect()).unwrap();
        assert!(in_w_lambda(&t(vec![vec![1.0, 2.0]])));
        assert!(!in_w_lambda(&t(vec![vec![2.0, 1.0]])));
        assert!(in_w_lambda(&t(vec![vec![2.0, 2.0], vec![2.0, 2.0]])));
        // H((2,1)) holds the cells of contents 1 and -1.
        let lam: Partition = "2,1".parse().unwrap();
        assert_eq!(h_cells(&lam), vec![Cell::new(1, 2), Cell::new(2, 1)]);
        assert!(in_w_lambda_h(&t(vec![vec![1.0, 2.0], vec![2.0]])));
        assert!(!in_w_lambda_h(&t(vec![vec![1.0, 1.0], vec![2.0]])));
        assert!(in_w_lambda_h(&t(vec![vec![2.0, 2.0, 2.0], vec![2.0]])));
        assert!(!in_w_lambda_h(&t(vec![vec![2.0, 0.5]])));
    }

    #[test]
    fn expand_examples() {
        let spec = ContentSpec::new([(0, 2.0)], []);
        let (s, x) = expand_content(&spec, &"1".parse::<SkewShape>().unwrap()).unwrap();
        assert_eq!(s.values(), &[c(2.0)]);
        assert_eq!(x.values(), &[0.0]);
        let spec = ContentSpec::new([(-1, 3.0), (0, 2.5), (1, 2.0)], []);
        let (s, _) = expand_content(&spec, &"2,2".parse::<SkewShape>().unwrap()).unwrap();
        assert_eq!(s.values(), &[c(2.5), c(2.0), c(3.0), c(2.5)]);
        assert!(s.is_diagonal_constant());
        let hook = Partition::hook(2, 2).as_skew();
        let spec = ContentSpec::new((-2..=2).map(|k| (k, 10.0 + k as f64)), []);
        let (s, _) = expand_content(&spec, &hook).unwrap();
        let rows = s.rows();
        assert_eq!(rows[0], vec![Some(c(10.0)), Some(c(11.0)), Some(c(12.0))]);
        assert_eq!(rows[1], vec![Some(c(9.0))]);
        assert_eq!(rows[2], vec![Some(c(8.0))]);
        let short = ContentSpec::new([(0, 2.0)], []);
        assert_eq!(expand_content(&short, &hook).unwrap_err(), ZetaError::MissingContent(-2));
    }

    #[test]
    fn orbit_of_43() {
        let lam: Partition = "4,3".parse().unwrap();
        let orbits = diagonal_orbit(&lam);
        assert_eq!(orbits.len(), 4);
        let t = Tableau::from_rows(vec![vec!['a', 'b', 'c', 'd'], vec!['e', 'f', 'g']]).unwrap();
        let got: Vec<String> = orbits
            .iter()
            .map(|o| apply_orbit(o, &t).unwrap().values().iter().collect())
            .collect();
        assert_eq!(got, vec!["abcdefg", "fbcdeag", "agcdefb", "fgcdeab"]);
        let row: Partition = "5".parse().unwrap();
        assert_eq!(diagonal_orbit(&row).len(), 1);
        for o in &orbits {
            let back = apply_orbit(&invert_orbit(o), &apply_orbit(o, &t).unwrap()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn i_theta_examples() {
        let t = |rows: Vec<Vec<u32>>| Tableau::from_rows(rows).unwrap();
        assert!(in_i_theta(&t(vec![vec![2]])));
        assert!(in_i_theta(&t(vec![vec![1, 2]])));
        assert!(!in_i_theta(&t(vec![vec![2, 1]])));
        assert!(in_i_theta(&t(vec![vec![1, 2], vec![2, 3]])));
    }
}
