//! Exact linear algebra over the integers and rationals: fraction-free
//! Bareiss elimination for determinants and ranks, integer nullspace bases,
//! and a dense rational solver used as a cross-check oracle for the
//! structured constructions.

use crate::graph::Graph;
use crate::rational::{rat, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Vertex-edge incidence matrix as dense integer rows (one row per vertex).
pub fn incidence_rows(g: &Graph) -> Vec<Vec<BigInt>> {
    let (n, m) = (g.vertex_count(), g.edge_count());
    let mut rows = vec![vec![BigInt::zero(); m]; n];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        rows[u][e] = BigInt::one();
        rows[v][e] = BigInt::one();
    }
    rows
}

/// Result of fraction-free elimination: echelon form, pivot columns, and
/// the determinant when the input was square.
pub struct Echelon {
    pub rows: Vec<Vec<BigInt>>,
    pub pivot_cols: Vec<usize>,
    pub det: Option<BigInt>,
}

/// Fraction-free Bareiss elimination.  Row swaps flip the determinant sign;
/// the final pivot of a full-rank square matrix is the determinant.
pub fn bareiss(mut rows: Vec<Vec<BigInt>>) -> Echelon {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivot_cols = Vec::new();
    let mut prev = BigInt::one();
    let mut sign = 1i8;
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if pr != r {
            rows.swap(pr, r);
            sign = -sign;
        }
        let pivot = rows[r][c].clone();
        for i in r + 1..nrows {
            let factor = rows[i][c].clone();
            for j in 0..ncols {
                let num = &pivot * &rows[i][j] - &factor * &rows[r][j];
                rows[i][j] = &num / &prev;
            }
        }
        prev = pivot;
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let det = if nrows == ncols {
        Some(if pivot_cols.len() < nrows {
            BigInt::zero()
        } else {
            let d = rows[nrows - 1][ncols - 1].clone();
            if sign < 0 {
                -d
            } else {
                d
            }
        })
    } else {
        None
    };
    Echelon {
        rows,
        pivot_cols,
        det,
    }
}

pub fn rank(rows: Vec<Vec<BigInt>>) -> usize {
    bareiss(rows).pivot_cols.len()
}

/// Integer basis of the right nullspace, one primitive vector per free
/// column of the echelon form.
pub fn integer_nullspace(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let ech = bareiss(rows);
    let pivots = &ech.pivot_cols;
    let rank = pivots.len();
    let is_pivot: Vec<bool> = {
        let mut v = vec![false; ncols];
        for &c in pivots {
            v[c] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        // Back-substitute in rationals, then clear denominators.
        let mut x = vec![Rat::zero(); ncols];
        x[free] = Rat::one();
        for r in (0..rank).rev() {
            let pc = pivots[r];
            let mut acc = Rat::zero();
            for c in pc + 1..ncols {
                if !ech.rows[r][c].is_zero() {
                    acc += Rat::from_integer(ech.rows[r][c].clone()) * &x[c];
                }
            }
            x[pc] = -acc / Rat::from_integer(ech.rows[r][pc].clone());
        }
        let mut denom_lcm = BigInt::one();
        for v in &x {
            denom_lcm = denom_lcm.lcm(v.denom());
        }
        let mut int_vec: Vec<BigInt> = x
            .iter()
            .map(|v| v.numer() * (&denom_lcm / v.denom()))
            .collect();
        let mut g = BigInt::zero();
        for v in &int_vec {
            g = g.gcd(v);
        }
        if !g.is_zero() && !g.is_one() {
            for v in &mut int_vec {
                *v = &*v / &g;
            }
        }
        // Normalize sign: first nonzero entry positive.
        if let Some(first) = int_vec.iter().find(|v| !v.is_zero()) {
            if first.is_negative() {
                for v in &mut int_vec {
                    *v = -v.clone();
                }
            }
        }
        basis.push(int_vec);
    }
    basis
}

/// Solves `M x = b` over the rationals by Gaussian elimination.
/// Returns `None` when the system is inconsistent; with an
/// underdetermined consistent system the free variables are set to zero.
pub fn solve_dense(m: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, r);
        let inv = a[r][c].recip();
        for j in c..=ncols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=ncols {
                    let sub = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    // Inconsistent when a zero row has nonzero rhs.
    for i in r..nrows {
        if !a[i][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![Rat::zero(); ncols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = a[row][ncols].clone();
    }
    Some(x)
}

/// Incidence matrix as rational rows.
pub fn incidence_rat(g: &Graph) -> Vec<Vec<Rat>> {
    incidence_rows(g)
        .into_iter()
        .map(|row| row.into_iter().map(Rat::from_integer).collect())
        .collect()
}

/// `A^T z` for the incidence matrix: per-edge sum of the endpoint values.
pub fn incidence_transpose_apply(g: &Graph, z: &[Rat]) -> Vec<Rat> {
    g.edges().iter().map(|&(u, v)| &z[u] + &z[v]).collect()
}

/// `A w` for the incidence matrix: per-vertex sum of incident edge values.
pub fn incidence_apply(g: &Graph, w: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); g.vertex_count()];
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        out[u] += &w[e];
        out[v] += &w[e];
    }
    out
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).fold(rat(0), |s, t| s + t)
}
