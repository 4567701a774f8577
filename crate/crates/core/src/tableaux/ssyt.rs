use crate::shapes::{Cell, SkewShape};

use super::Tableau;

/// Row-major enumeration of semistandard fillings with entries in `1..=max`.
///
/// Each cell is bounded below by its left neighbor and by one more than the
/// cell above it, so every completed filling is semistandard. Fillings come
/// out in lexicographic order of their row-major reading.
#[derive(Debug, Clone)]
pub struct SsytIter {
    shape: SkewShape,
    cells: Vec<Cell>,
    left: Vec<Option<usize>>,
    above: Vec<Option<usize>>,
    vals: Vec<u32>,
    max: u32,
    started: bool,
    done: bool,
}

/// All semistandard tableaux of `shape` with entries at most `max_entry`.
pub fn ssyt_iter(shape: &SkewShape, max_entry: u32) -> SsytIter {
    let cells = shape.cells();
    let pos = |c: Cell| cells.binary_search(&c).ok();
    let left = cells.iter().map(|c| if c.col > 1 { pos(Cell::new(c.row, c.col - 1)) } else { None }).collect();
    let above = cells.iter().map(|c| if c.row > 1 { pos(Cell::new(c.row - 1, c.col)) } else { None }).collect();
    SsytIter {
        shape: shape.clone(),
        vals: vec![0; cells.len()],
        cells,
        left,
        above,
        max: max_entry,
        started: false,
        done: max_entry == 0,
    }
}

impl SsytIter {
    fn lower(&self, k: usize) -> u32 {
        let a = self.left[k].map_or(1, |i| self.vals[i]);
        let b = self.above[k].map_or(1, |i| self.vals[i] + 1);
        a.max(b)
    }

    fn settle(&mut self, mut k: usize, mut bump: bool) -> bool {
        let n = self.cells.len();
        loop {
            if k == n {
                return true;
            }
            let v = if bump { self.vals[k] + 1 } else { self.lower(k) };
            if v <= self.max {
                self.vals[k] = v;
                k += 1;
                bump = false;
            } else if k == 0 {
                return false;
            } else {
                k -= 1;
                bump = true;
            }
        }
    }
}

impl Iterator for SsytIter {
    type Item = Tableau<u32>;

    fn next(&mut self) -> Option<Tableau<u32>> {
        if self.done {
            return None;
        }
        let ok = if !self.started {
            self.started = true;
            self.settle(0, false)
        } else if self.cells.is_empty() {
            false
        } else {
            self.settle(self.cells.len() - 1, true)
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(Tableau { shape: self.shape.clone(), cells: self.cells.clone(), values: self.vals.clone() })
    }
}

/// Rows weakly increasing, columns strictly increasing, entries positive.
pub fn is_ssyt(t: &Tableau<u32>) -> bool {
    t.iter().all(|(c, &v)| {
        v >= 1
            && t.get(Cell::new(c.row, c.col + 1)).is_none_or(|&r| v <= r)
            && t.get(Cell::new(c.row + 1, c.col)).is_none_or(|&d| v < d)
    })
}
