use std::cmp::Ordering;
use std::fmt;

use rand::rngs::SmallRng;
use rand::{RngExt, SeedableRng};

use super::linalg::{nullspace, rank, vectorize};
use super::scalar::{c, one, zero, CMat, CVec};
use crate::error::invalid;
use crate::{Error, Result};

/// A fiber algebra: full matrices `M_n` or functions on an `m`-point set.
/// Both are realized inside `M_N` (`N = n` resp. `m`, functions as
/// diagonal matrices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FiberAlgebra {
    Matrix(usize),
    Functions(usize),
}

impl FiberAlgebra {
    pub fn dim(&self) -> usize {
        match *self {
            FiberAlgebra::Matrix(n) => n * n,
            FiberAlgebra::Functions(m) => m,
        }
    }

    /// Size of the defining realization.
    pub fn size(&self) -> usize {
        match *self {
            FiberAlgebra::Matrix(n) | FiberAlgebra::Functions(n) => n,
        }
    }

    /// Basis element `k`: the matrix unit `E_{k/n, k%n}` or the point mass
    /// at `k`.
    pub fn basis_element(&self, k: usize) -> CMat {
        let n = self.size();
        let mut m = CMat::zeros(n, n);
        match *self {
            FiberAlgebra::Matrix(n) => m[(k / n, k % n)] = one(),
            FiberAlgebra::Functions(_) => m[(k, k)] = one(),
        }
        m
    }

    pub fn basis(&self) -> Vec<CMat> {
        (0..self.dim()).map(|k| self.basis_element(k)).collect()
    }

    pub fn element(&self, coords: &CVec) -> CMat {
        let n = self.size();
        let mut m = CMat::zeros(n, n);
        for k in 0..self.dim() {
            match *self {
                FiberAlgebra::Matrix(n) => m[(k / n, k % n)] = coords[k],
                FiberAlgebra::Functions(_) => m[(k, k)] = coords[k],
            }
        }
        m
    }

    /// Coordinates of a realized element; errors if `a` is not in the
    /// algebra.
    pub fn coords(&self, a: &CMat, tol: f64) -> Result<CVec> {
        let n = self.size();
        if a.shape() != (n, n) {
            return invalid(format!("expected a {n}x{n} matrix, got {}x{}", a.nrows(), a.ncols()));
        }
        match *self {
            FiberAlgebra::Matrix(n) => Ok(CVec::from_iterator(n * n, (0..n * n).map(|k| a[(k / n, k % n)]))),
            FiberAlgebra::Functions(m) => {
                for i in 0..m {
                    for j in 0..m {
                        if i != j && a[(i, j)].norm() > tol {
                            return invalid("element of a function algebra must be diagonal");
                        }
                    }
                }
                Ok(CVec::from_iterator(m, (0..m).map(|k| a[(k, k)])))
            }
        }
    }

    pub fn identity(&self) -> CMat {
        CMat::identity(self.size(), self.size())
    }

    pub fn concrete(&self) -> ConcreteAlgebra {
        ConcreteAlgebra::new(self.basis()).expect("fiber basis is independent")
    }
}

impl fmt::Display for FiberAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberAlgebra::Matrix(n) => write!(f, "MATRIX({n})"),
            FiberAlgebra::Functions(m) => write!(f, "FUNCTIONS({m})"),
        }
    }
}

/// A *-subalgebra of `M_N` with a distinguished basis. Elements are handled
/// either as matrices or as coordinate vectors in the basis.
#[derive(Clone, Debug)]
pub struct ConcreteAlgebra {
    basis: Vec<CMat>,
    size: usize,
    /// left inverse of the `vec` embedding of the basis
    solver: CMat,
}

impl ConcreteAlgebra {
    pub fn new(basis: Vec<CMat>) -> Result<Self> {
        let size = basis.first().map_or(0, |b| b.nrows());
        if basis.iter().any(|b| b.shape() != (size, size)) {
            return invalid("basis matrices must all be square of one size");
        }
        let cols: Vec<CVec> = basis.iter().map(vectorize).collect();
        let stacked = if cols.is_empty() { CMat::zeros(size * size, 0) } else { CMat::from_columns(&cols) };
        let gram = stacked.adjoint() * &stacked;
        let inv = gram.try_inverse().ok_or_else(|| Error::InvalidInput("basis matrices are linearly dependent".into()))?;
        Ok(ConcreteAlgebra { basis, size, solver: inv * stacked.adjoint() })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Side length of the realizing matrices.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn element(&self, coords: &CVec) -> CMat {
        let mut m = CMat::zeros(self.size, self.size);
        for (k, b) in self.basis.iter().enumerate() {
            if coords[k] != zero() {
                m += b * coords[k];
            }
        }
        m
    }

    /// Coordinates of `a`, checking that it lies in the span within `tol`.
    pub fn coords(&self, a: &CMat, tol: f64) -> Result<CVec> {
        if a.shape() != (self.size, self.size) {
            return invalid("matrix has the wrong size for this algebra");
        }
        let x = &self.solver * vectorize(a);
        let back = self.element(&x);
        let err = (back - a).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if err > tol {
            return invalid(format!("matrix is not in the algebra (residual {err:e})"));
        }
        Ok(x)
    }

    pub fn mul(&self, x: &CVec, y: &CVec, tol: f64) -> Result<CVec> {
        self.coords(&(self.element(x) * self.element(y)), tol)
    }

    pub fn adjoint(&self, x: &CVec, tol: f64) -> Result<CVec> {
        self.coords(&self.element(x).adjoint(), tol)
    }

    /// Checks closure under products and adjoints on basis elements.
    pub fn check_closed(&self, tol: f64) -> Result<()> {
        for (i, a) in self.basis.iter().enumerate() {
            self.coords(&a.adjoint(), tol).map_err(|_| Error::InvalidInput(format!("adjoint of basis element {i} leaves the span")))?;
            for (j, b) in self.basis.iter().enumerate() {
                self.coords(&(a * b), tol)
                    .map_err(|_| Error::InvalidInput(format!("product of basis elements {i}, {j} leaves the span")))?;
            }
        }
        Ok(())
    }

    /// Structure constants in this basis. Needs the identity matrix to lie
    /// in the algebra.
    pub fn structure(&self, tol: f64) -> Result<StructureTable> {
        let mut products = Vec::with_capacity(self.dim() * self.dim());
        for a in &self.basis {
            for b in &self.basis {
                products.push(self.coords(&(a * b), tol)?);
            }
        }
        let adjoints = self.basis.iter().map(|a| self.coords(&a.adjoint(), tol)).collect::<Result<_>>()?;
        let unit = self.coords(&CMat::identity(self.size, self.size), tol)?;
        Ok(StructureTable { dim: self.dim(), products, adjoints, unit })
    }
}

/// A finite-dimensional *-algebra given by structure constants: products
/// and adjoints of basis elements, and the unit, all as coordinate vectors.
#[derive(Clone, Debug)]
pub struct StructureTable {
    dim: usize,
    /// `products[i·dim + j] = e_i·e_j`
    products: Vec<CVec>,
    adjoints: Vec<CVec>,
    unit: CVec,
}

impl StructureTable {
    pub fn new(dim: usize, products: Vec<CVec>, adjoints: Vec<CVec>, unit: CVec) -> Result<Self> {
        if products.len() != dim * dim || adjoints.len() != dim || products.iter().chain(&adjoints).chain([&unit]).any(|v| v.len() != dim) {
            return invalid("structure table has inconsistent dimensions");
        }
        Ok(StructureTable { dim, products, adjoints, unit })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn product(&self, i: usize, j: usize) -> &CVec {
        &self.products[i * self.dim + j]
    }

    pub fn basis_adjoint(&self, i: usize) -> &CVec {
        &self.adjoints[i]
    }

    pub fn unit(&self) -> &CVec {
        &self.unit
    }

    pub fn basis_vector(&self, i: usize) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[i] = one();
        v
    }

    pub fn mul(&self, x: &CVec, y: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, z)| **z != zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, z)| **z != zero()) {
                out.axpy(xi * yj, self.product(i, j), one());
            }
        }
        out
    }

    pub fn adjoint(&self, x: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (i, xi) in x.iter().enumerate().filter(|(_, z)| **z != zero()) {
            out.axpy(xi.conj(), &self.adjoints[i], one());
        }
        out
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mul(&self, x: &CVec) -> CMat {
        let cols: Vec<CVec> = (0..self.dim).map(|j| self.mul(x, &self.basis_vector(j))).collect();
        CMat::from_columns(&cols)
    }

    /// Associativity on every basis triple, unit laws, and the involution
    /// axioms on basis pairs. Returns the first failure.
    pub fn check_axioms(&self, tol: f64) -> std::result::Result<(), AxiomFailure> {
        let d = self.dim;
        let close = |a: &CVec, b: &CVec| (a - b).iter().all(|z| z.norm() <= tol);
        for i in 0..d {
            let e = self.basis_vector(i);
            if !close(&self.mul(&self.unit, &e), &e) || !close(&self.mul(&e, &self.unit), &e) {
                return Err(AxiomFailure::Unit(i));
            }
            if !close(&self.adjoint(&self.adjoints[i]), &e) {
                return Err(AxiomFailure::Involution(i));
            }
            for j in 0..d {
                let lhs = self.adjoint(self.product(i, j));
                if !close(&lhs, &self.mul(&self.adjoints[j], &self.adjoints[i])) {
                    return Err(AxiomFailure::AntiMultiplicative(i, j));
                }
                for k in 0..d {
                    let left = self.mul(self.product(i, j), &self.basis_vector(k));
                    let right = self.mul(&e, self.product(j, k));
                    if !close(&left, &right) {
                        return Err(AxiomFailure::Associativity(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// A basis of the center, in reduced echelon form.
    pub fn center(&self, tol: f64) -> Result<Vec<CVec>> {
        let d = self.dim;
        let mut sys = CMat::zeros(d * d, d);
        for k in 0..d {
            for j in 0..d {
                let comm = self.product(j, k) - self.product(k, j);
                sys.view_mut((k * d, j), (d, 1)).copy_from(&comm);
            }
        }
        nullspace(&sys, tol)
    }

    /// Simple summands `M_d` with their central idempotents, ordered by `d`
    /// and then by the idempotent's coordinates.
    pub fn wedderburn(&self, tol: f64) -> Result<Vec<Summand>> {
        let center = self.center(tol)?;
        let k = center.len();
        let basis = CMat::from_columns(&center);
        let pinv =
            basis.clone().pseudo_inverse(1e-12).map_err(|m| Error::NumericalFailure { message: m.into(), condition: f64::INFINITY })?;
        // a generic central element separates the summands by its values;
        // retry with fresh weights if two values collide
        let mut rng = SmallRng::seed_from_u64(0x5eed);
        let mut found = None;
        for _ in 0..8 {
            let mut z = CVec::zeros(self.dim);
            for zj in &center {
                z += zj * c(rng.random::<f64>() + 0.5, rng.random::<f64>() - 0.5);
            }
            // L_z restricted to the center, in the basis of the center
            let images = CMat::from_columns(&center.iter().map(|b| self.mul(&z, b)).collect::<Vec<_>>());
            let restricted = &pinv * images;
            let eig = restricted
                .clone()
                .schur()
                .eigenvalues()
                .ok_or_else(|| Error::NumericalFailure { message: "eigenvalues of a central element".into(), condition: f64::INFINITY })?;
            let mut values: Vec<nalgebra::Complex<f64>> = Vec::new();
            for e in eig.iter() {
                if !values.iter().any(|v| (v - e).norm() < 1e-6) {
                    values.push(*e);
                }
            }
            if values.len() == k {
                found = Some((restricted, values));
                break;
            }
        }
        let (restricted, values) = found.ok_or_else(|| Error::NumericalFailure {
            message: format!("no central element separates the {k} summands"),
            condition: f64::INFINITY,
        })?;
        let id = CMat::identity(k, k);
        let mut out = Vec::new();
        for lm in &values {
            // eigenvector: the least singular direction of Z − λ
            let svd = (&restricted - &id * *lm).svd(false, true);
            let v_t = svd.v_t.expect("requested right singular vectors");
            let least = (0..k).min_by(|&a, &b| svd.singular_values[a].total_cmp(&svd.singular_values[b])).expect("k > 0");
            let coeffs: CVec = v_t.row(least).adjoint();
            let f = &basis * coeffs;
            // f is a multiple of a minimal central projection: f² = μ f
            let ff = self.mul(&f, &f);
            let pivot = f.icamax();
            let e = &f * (f[pivot] / ff[pivot]);
            if (self.mul(&e, &e) - &e).norm() > tol.max(1e-7) * (1.0 + e.norm()) {
                return Err(Error::NumericalFailure { message: "central eigenvector is not a projection".into(), condition: e.norm() });
            }
            let r = rank(&self.left_mul(&e), tol.max(1e-7))?;
            let d = (r as f64).sqrt().round() as usize;
            if d * d != r {
                return Err(Error::NumericalFailure {
                    message: format!("summand has dimension {r}, which is not a square"),
                    condition: r as f64,
                });
            }
            out.push(Summand { dim: d, idempotent: e });
        }
        out.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| lex_cmp(&a.idempotent, &b.idempotent)));
        let total: usize = out.iter().map(|s| s.dim * s.dim).sum();
        if total != self.dim {
            return Err(Error::InternalInconsistency(format!("summand dimensions add up to {total}, not {}", self.dim)));
        }
        Ok(out)
    }
}

/// The first violated *-algebra axiom, by basis indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomFailure {
    Unit(usize),
    Involution(usize),
    AntiMultiplicative(usize, usize),
    Associativity(usize, usize, usize),
}

fn lex_cmp(a: &CVec, b: &CVec) -> Ordering {
    let key = |z: &nalgebra::Complex<f64>| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64);
    a.iter().map(key).cmp(b.iter().map(key))
}

/// A simple summand `M_d` and its central support projection.
#[derive(Clone, Debug)]
pub struct Summand {
    pub dim: usize,
    pub idempotent: CVec,
}
