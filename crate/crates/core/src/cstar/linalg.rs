use super::scalar::{one, zero, CMat, CVec};
use crate::{Error, Result};

/// Pivots smaller than this multiple of the tolerance make the rank
/// decision unreliable.
const AMBIGUITY_FACTOR: f64 = 1e3;

/// Reduced row echelon form with partial pivoting. Returns the reduced
/// matrix and its pivot columns.
pub fn rref(m: &CMat, tol: f64) -> Result<(CMat, Vec<usize>)> {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    let mut largest: f64 = 0.0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let (p, mag) = (r..rows).map(|i| (i, a[(i, col)].norm())).fold((r, -1.0), |b, x| if x.1 > b.1 { x } else { b });
        if mag <= tol {
            for i in r..rows {
                a[(i, col)] = zero();
            }
            continue;
        }
        largest = largest.max(mag);
        if mag < tol * AMBIGUITY_FACTOR {
            return Err(Error::NumericalFailure {
                message: format!("pivot {mag:e} in column {col} is too close to the tolerance {tol:e}"),
                condition: largest / mag,
            });
        }
        a.swap_rows(r, p);
        let inv = one() / a[(r, col)];
        for j in col..cols {
            a[(r, j)] *= inv;
        }
        for i in 0..rows {
            if i != r {
                let f = a[(i, col)];
                if f.norm() > 0.0 {
                    for j in col..cols {
                        let v = a[(r, j)];
                        a[(i, j)] -= f * v;
                    }
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    Ok((a, pivots))
}

pub fn rank(m: &CMat, tol: f64) -> Result<usize> {
    Ok(rref(m, tol)?.1.len())
}

/// Basis of `{x : m·x = 0}` read off the reduced echelon form: one vector
/// per free column, with that coordinate equal to 1.
pub fn nullspace(m: &CMat, tol: f64) -> Result<Vec<CVec>> {
    let (r, pivots) = rref(m, tol)?;
    let cols = m.ncols();
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = CVec::zeros(cols);
        v[free] = one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -r[(row, free)];
        }
        out.push(v);
    }
    Ok(out)
}

/// Column-major `vec`.
pub fn vectorize(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVec, rows: usize, cols: usize) -> CMat {
    CMat::from_column_slice(rows, cols, v.as_slice())
}
