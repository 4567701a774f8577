use crate::error::{Result, ZetaError};
use crate::shapes::{Cell, Partition};

use super::Tableau;

/// Checks conditions (I)–(III) for a σ-tableau on a straight shape of
/// Frobenius depth `N`; `sigma` is a 1-based permutation of `1..=N`.
///
/// (I) rows weakly increase among cells strictly right of the diagonal;
/// (II) columns strictly increase among diagonal cells and cells below it;
/// (III) `t[σ(i),σ(i)] ≤ t[i,i+1]` whenever `(i,i+1)` is a cell.
pub fn is_sigma_tableau(t: &Tableau<u32>, sigma: &[usize]) -> bool {
    if !t.shape().is_straight() {
        return false;
    }
    let lam = t.shape().outer();
    let n = lam.durfee();
    if !is_permutation(sigma, n) || t.values().contains(&0) {
        return false;
    }
    for (c, &v) in t.iter() {
        if c.col > c.row {
            if let Some(&r) = t.get(Cell::new(c.row, c.col + 1)) {
                if v > r {
                    return false;
                }
            }
        }
        if c.col <= c.row {
            if let Some(&d) = t.get(Cell::new(c.row + 1, c.col)) {
                if v >= d {
                    return false;
                }
            }
        }
    }
    (1..=n).all(|i| {
        let Some(&arm) = t.get(Cell::new(i, i + 1)) else {
            return true;
        };
        let s = sigma[i - 1];
        t.get(Cell::new(s, s)).is_some_and(|&d| d <= arm)
    })
}

fn is_permutation(sigma: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n + 1];
    sigma.len() == n && sigma.iter().all(|&v| v >= 1 && v <= n && !std::mem::replace(&mut seen[v], true))
}

/// One hook-shaped piece of a σ-tableau together with the cells it came from,
/// listed in the hook's row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct HookPiece {
    pub tableau: Tableau<u32>,
    pub source: Vec<Cell>,
}

/// Splits a σ-tableau into `N` hooks: piece `k` has first row
/// `t[σ(k),σ(k)], t[k,k+1], …, t[k,k+p_k]` and first column continuing with
/// `t[σ(k)+1,σ(k)], …, t[σ(k)+q_σ(k), σ(k)]`.
pub fn decompose_sigma_tableau(t: &Tableau<u32>, sigma: &[usize]) -> Result<Vec<HookPiece>> {
    if !is_sigma_tableau(t, sigma) {
        return Err(ZetaError::Precondition(format!("not a sigma-tableau for {sigma:?}")));
    }
    let lam = t.shape().outer();
    let f = lam.frobenius();
    let mut out = Vec::new();
    for k in 1..=f.depth() {
        let s = sigma[k - 1];
        let (p, q) = (f.p[k - 1], f.q[s - 1]);
        let mut source = vec![Cell::new(s, s)];
        source.extend((1..=p).map(|a| Cell::new(k, k + a)));
        source.extend((1..=q).map(|b| Cell::new(s + b, s)));
        let values = source.iter().map(|c| *t.get(*c).expect("cell in shape")).collect();
        out.push(HookPiece { tableau: Tableau::new(Partition::hook(p, q), values)?, source });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableaux::ssyt::{is_ssyt, ssyt_iter};

    #[test]
    fn ssyt_are_identity_tableaux() {
        let t = Tableau::from_rows(vec![vec![1, 1], vec![2]]).unwrap();
        assert!(is_sigma_tableau(&t, &[1]));
        let lam: Partition = "2,2".parse().unwrap();
        for t in ssyt_iter(&lam.as_skew(), 4) {
            assert!(is_sigma_tableau(&t, &[1, 2]));
            assert!(!is_sigma_tableau(&t, &[2, 1]));
        }
    }

    #[test]
    fn decomposition_of_22() {
        let t = Tableau::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let parts = decompose_sigma_tableau(&t, &[1, 2]).unwrap();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].tableau.shape().outer(), &Partition::hook(1, 1));
        assert_eq!(parts[0].tableau.values(), &[1, 2, 3]);
        assert_eq!(parts[1].tableau.values(), &[4]);
        assert!(parts.iter().all(|p| is_ssyt(&p.tableau)));
        let hook = Tableau::from_rows(vec![vec![1, 2, 2], vec![3]]).unwrap();
        let one = decompose_sigma_tableau(&hook, &[1]).unwrap();
        assert_eq!(one[0].tableau, hook);
    }

    #[test]
    fn swapped_sigma() {
        // Shape (2,2): diagonal (2,2) feeds the arm of row 1 under σ = (2,1).
        let t = Tableau::from_rows(vec![vec![5, 3], vec![6, 2]]).unwrap();
        assert!(is_sigma_tableau(&t, &[2, 1]));
        let parts = decompose_sigma_tableau(&t, &[2, 1]).unwrap();
        assert_eq!(parts[0].source, vec![Cell::new(2, 2), Cell::new(1, 2)]);
        assert_eq!(parts[0].tableau.values(), &[2, 3]);
        assert_eq!(parts[1].source, vec![Cell::new(1, 1), Cell::new(2, 1)]);
        assert_eq!(parts[1].tableau.values(), &[5, 6]);
    }
}
