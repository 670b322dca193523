//! Dense integer matrices with checked 64-bit arithmetic, Smith normal form
//! and row-style Hermite normal form.

use std::fmt;

use crate::{Error, Result};

pub(crate) fn ck_mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b).ok_or(Error::Overflow("integer multiply"))
}

pub(crate) fn ck_add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::Overflow("integer add"))
}

pub(crate) fn ck_sub(a: i64, b: i64) -> Result<i64> {
    a.checked_sub(b).ok_or(Error::Overflow("integer subtract"))
}

/// `a + k*b`, checked.
fn axpy(a: i64, k: i64, b: i64) -> Result<i64> {
    ck_add(a, ck_mul(k, b)?)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in entries.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from row vectors. `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::InvalidInput(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        Ok(m)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<i64>], rows: usize) -> Result<Self> {
        Ok(Self::from_rows(cols, rows)?.transpose())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<i64> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput(format!("shape mismatch {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = axpy(out.get(i, j), a, other.get(k, j))?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>> {
        if v.len() != self.cols {
            return Err(Error::InvalidInput(format!("vector length {} does not match {} columns", v.len(), self.cols)));
        }
        (0..self.rows).map(|i| (0..self.cols).try_fold(0i64, |acc, j| axpy(acc, self.get(i, j), v[j]))).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hcat(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows {
            return Err(Error::InvalidInput("hcat row mismatch".into()));
        }
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<i64> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("determinant of non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&r| a[r][k] != 0) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| Error::Overflow("determinant"))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += k * row[src]`
    fn add_row(&mut self, dst: usize, k: i64, src: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = axpy(self.get(dst, j), k, self.get(src, j))?;
            self.set(dst, j, v);
        }
        Ok(())
    }

    /// `col[dst] += k * col[src]`
    fn add_col(&mut self, dst: usize, k: i64, src: usize) -> Result<()> {
        for i in 0..self.rows {
            let v = axpy(self.get(i, dst), k, self.get(i, src))?;
            self.set(i, dst, v);
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self.data[i * self.cols + j] = -self.data[i * self.cols + j];
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_rows())
    }
}

/// `U · M · V = D` with `D` diagonal, `d_i | d_{i+1}`, and `U`, `V`
/// unimodular. The inverses of `U` and `V` are tracked alongside.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries, `min(rows, cols)` of them.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d.get(i, i)).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|&&x| x != 0).count()
    }
}

struct SnfCalc {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfCalc {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    fn add_row(&mut self, dst: usize, k: i64, src: usize) -> Result<()> {
        self.d.add_row(dst, k, src)?;
        self.u.add_row(dst, k, src)?;
        self.u_inv.add_col(src, -k, dst)
    }

    fn add_col(&mut self, dst: usize, k: i64, src: usize) -> Result<()> {
        self.d.add_col(dst, k, src)?;
        self.v.add_col(dst, k, src)?;
        self.v_inv.add_row(src, -k, dst)
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    /// Position of the smallest nonzero |entry| in the trailing block.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(i64, usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let a = self.d.get(i, j).abs();
                if a != 0 && best.is_none_or(|(b, _, _)| a < b) {
                    best = Some((a, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn run(&mut self) -> Result<()> {
        let n = self.d.rows().min(self.d.cols());
        for t in 0..n {
            let Some((pi, pj)) = self.min_pivot(t) else {
                return Ok(());
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let p = self.d.get(t, t);
                let mut dirty = false;
                for i in t + 1..self.d.rows() {
                    let a = self.d.get(i, t);
                    if a != 0 {
                        self.add_row(i, -a.div_euclid(p), t)?;
                        if self.d.get(i, t) != 0 {
                            dirty = true;
                        }
                    }
                }
                for j in t + 1..self.d.cols() {
                    let a = self.d.get(t, j);
                    if a != 0 {
                        self.add_col(j, -a.div_euclid(p), t)?;
                        if self.d.get(t, j) != 0 {
                            dirty = true;
                        }
                    }
                }
                if dirty {
                    // a remainder smaller than the pivot exists in row/col t
                    let (pi, pj) = self.min_pivot(t).expect("nonzero entries remain");
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                // divisibility of the trailing block by the pivot
                let bad = (t + 1..self.d.rows()).find(|&i| (t + 1..self.d.cols()).any(|j| self.d.get(i, j) % p != 0));
                match bad {
                    Some(i) => self.add_row(t, 1, i)?,
                    None => break,
                }
            }
            if self.d.get(t, t) < 0 {
                self.negate_row(t);
            }
        }
        Ok(())
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm> {
    let mut calc = SnfCalc {
        d: m.clone(),
        u: IntMatrix::identity(m.rows()),
        u_inv: IntMatrix::identity(m.rows()),
        v: IntMatrix::identity(m.cols()),
        v_inv: IntMatrix::identity(m.cols()),
    };
    calc.run()?;
    Ok(SmithForm { u: calc.u, u_inv: calc.u_inv, d: calc.d, v: calc.v, v_inv: calc.v_inv })
}

/// Row-style Hermite normal form of the lattice spanned by `gens` (rows of
/// length `n`). Returns the nonzero rows: echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(gens: &[Vec<i64>], n: usize) -> Result<Vec<Vec<i64>>> {
    let mut rows: Vec<Vec<i64>> = gens.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut top = 0;
    for col in 0..n {
        loop {
            let nz: Vec<usize> = (top..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let &piv = nz.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            rows.swap(top, piv);
            let mut done = true;
            for r in top + 1..rows.len() {
                if rows[r][col] != 0 {
                    let q = rows[r][col].div_euclid(rows[top][col]);
                    let pivot = rows[top].clone();
                    for (x, &y) in rows[r][col..n].iter_mut().zip(&pivot[col..n]) {
                        *x = ck_sub(*x, ck_mul(q, y)?)?;
                    }
                    if rows[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if top < rows.len() && rows[top][col] != 0 {
            if rows[top][col] < 0 {
                for x in rows[top].iter_mut() {
                    *x = -*x;
                }
            }
            pivots.push(col);
            top += 1;
        }
    }
    rows.truncate(top);
    // reduce above pivots
    for (k, &col) in pivots.iter().enumerate() {
        let p = rows[k][col];
        for r in 0..k {
            let q = rows[r][col].div_euclid(p);
            if q != 0 {
                let pivot = rows[k].clone();
                for (x, &y) in rows[r][col..n].iter_mut().zip(&pivot[col..n]) {
                    *x = ck_sub(*x, ck_mul(q, y)?)?;
                }
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m).unwrap();
        let umv = s.u.mul(m).unwrap().mul(&s.v).unwrap();
        assert_eq!(umv, s.d);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(m.cols()));
        assert_eq!(s.u.determinant().unwrap().abs(), 1);
        assert_eq!(s.v.determinant().unwrap().abs(), 1);
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert_eq!(s.d.get(i, j), 0);
                }
            }
        }
        let diag = s.diagonal();
        for w in diag.windows(2) {
            assert!(w[0] >= 0);
            if w[0] == 0 {
                assert_eq!(w[1], 0);
            } else {
                assert_eq!(w[1] % w[0], 0, "divisibility chain {diag:?}");
            }
        }
        s
    }

    #[test]
    fn snf_examples() {
        let s = check_snf(&IntMatrix::from_rows(&[vec![2]], 1).unwrap());
        assert_eq!(s.diagonal(), vec![2]);
        let s = check_snf(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]], 2).unwrap());
        assert_eq!(s.diagonal(), vec![1, 6]);
        let s = check_snf(&IntMatrix::from_rows(&[vec![0]], 1).unwrap());
        assert_eq!(s.diagonal(), vec![0]);
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).unwrap();
        assert_eq!(check_snf(&m).diagonal(), vec![2, 6, 12]);
        let m = IntMatrix::from_rows(&[vec![1, 2, 3, 4], vec![2, 4, 6, 8]], 4).unwrap();
        assert_eq!(check_snf(&m).diagonal(), vec![1, 0]);
        check_snf(&IntMatrix::zeros(0, 3));
        check_snf(&IntMatrix::zeros(2, 0));
    }

    #[test]
    fn hermite_basic() {
        let h = hermite_rows(&[vec![4, 2], vec![2, 2], vec![0, 6]], 2).unwrap();
        assert_eq!(h, vec![vec![2, 0], vec![0, 2]]);
        let h = hermite_rows(&[vec![3, 1], vec![0, 5]], 2).unwrap();
        assert_eq!(h, vec![vec![3, 1], vec![0, 5]]);
    }

    proptest::proptest! {
        #[test]
        fn snf_round_trip(rows in 1usize..4, cols in 1usize..4, seed in proptest::collection::vec(-9i64..10, 16)) {
            let data: Vec<Vec<i64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j]).collect()).collect();
            check_snf(&IntMatrix::from_rows(&data, cols).unwrap());
        }
    }
}
