use nalgebra::{Complex, DMatrix, DVector};

use crate::abelian::Phase;

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn one() -> C64 {
    c(1.0, 0.0)
}

pub fn zero() -> C64 {
    c(0.0, 0.0)
}

/// `exp(2πi·k/n)`.
pub fn root_of_unity(k: i64, n: i64) -> C64 {
    Phase::new(k, n).to_complex()
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn approx_eq(a: &CMat, b: &CMat, tol: f64) -> bool {
    max_abs_diff(a, b) <= tol
}

pub fn is_unitary(m: &CMat, tol: f64) -> bool {
    m.is_square() && approx_eq(&(m.adjoint() * m), &CMat::identity(m.nrows(), m.ncols()), tol)
}

/// If `m` is within `tol` of `λ·I`, returns `λ`.
pub fn scalar_part(m: &CMat, tol: f64) -> Option<C64> {
    if !m.is_square() || m.nrows() == 0 {
        return None;
    }
    let lambda = m.trace() / c(m.nrows() as f64, 0.0);
    approx_eq(m, &(CMat::identity(m.nrows(), m.ncols()) * lambda), tol).then_some(lambda)
}

/// Compares matrices whose entries are integer multiples of `order`-th
/// roots of unity exactly, after snapping every entry. Returns `None` when
/// some entry is not of that form.
#[derive(Clone, Copy, Debug)]
pub struct PhaseComparator {
    pub order: i64,
    pub tol: f64,
}

impl PhaseComparator {
    pub fn new(order: i64) -> Self {
        PhaseComparator { order: order.max(1), tol: DEFAULT_TOLERANCE }
    }

    /// `(m, k)` with `z = m·ζ^k`, `m ≥ 0` an integer and `k = 0` when `m = 0`.
    pub fn snap(&self, z: C64) -> Option<(i64, Phase)> {
        let r = z.norm();
        let m = r.round();
        if (r - m).abs() > self.tol {
            return None;
        }
        if m == 0.0 {
            return Some((0, Phase::ZERO));
        }
        Phase::snap(z / m, self.order, self.tol).map(|p| (m as i64, p))
    }

    pub fn equal(&self, a: &CMat, b: &CMat) -> Option<bool> {
        if a.shape() != b.shape() {
            return Some(false);
        }
        let mut same = true;
        for (x, y) in a.iter().zip(b.iter()) {
            let (sx, sy) = (self.snap(*x)?, self.snap(*y)?);
            same &= sx == sy;
        }
        Some(same)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comparator_snaps_phases() {
        let cmp = PhaseComparator::new(6);
        let z = root_of_unity(1, 3) * c(2.0, 0.0) + c(1e-12, 0.0);
        assert_eq!(cmp.snap(z), Some((2, Phase::new(1, 3))));
        assert_eq!(cmp.snap(c(0.5, 0.0)), None);
        let a = CMat::from_diagonal(&CVec::from_vec(vec![one(), root_of_unity(1, 2)]));
        let b = CMat::from_diagonal(&CVec::from_vec(vec![one(), c(-1.0, 1e-13)]));
        assert_eq!(cmp.equal(&a, &b), Some(true));
        assert_eq!(cmp.equal(&a, &CMat::identity(2, 2)), Some(false));
    }

    #[test]
    fn scalar_detection() {
        let m = CMat::identity(3, 3) * root_of_unity(1, 4);
        assert!((scalar_part(&m, 1e-9).unwrap() - c(0.0, 1.0)).norm() < 1e-12);
        let mut n = m.clone();
        n[(0, 1)] = one();
        assert!(scalar_part(&n, 1e-9).is_none());
    }
}
