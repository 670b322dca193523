use super::action::UnitaryActionDatum;
use super::algebra::{FiberAlgebra, StructureTable};
use super::crossed::CrossedProduct;
use super::linalg::{nullspace, unvectorize};
use super::scalar::{approx_eq, CMat};
use crate::abelian::Character;
use crate::error::invalid;
use crate::{Error, Result};

/// A representation of a finite-dimensional algebra, by the images of its
/// basis elements.
#[derive(Clone, Debug)]
pub struct Representation {
    size: usize,
    images: Vec<CMat>,
}

impl Representation {
    pub fn new(images: Vec<CMat>) -> Result<Self> {
        let size = images.first().map_or(0, |m| m.nrows());
        if images.iter().any(|m| m.shape() != (size, size)) {
            return invalid("representation images must be square of one size");
        }
        Ok(Representation { size, images })
    }

    /// The integrated form `δ_s ⊗ a ↦ π(a)U_s` of a covariant pair: `pi`
    /// gives the images of the fiber basis, `u` one unitary per group
    /// element.
    pub fn integrated(pi: &[CMat], u: &[CMat]) -> Result<Self> {
        Self::new(u.iter().flat_map(|us| pi.iter().map(move |p| p * us)).collect())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn images(&self) -> &[CMat] {
        &self.images
    }

    pub fn direct_sum(&self, other: &Representation) -> Representation {
        let n = self.size + other.size;
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut m = CMat::zeros(n, n);
                m.view_mut((0, 0), (self.size, self.size)).copy_from(a);
                m.view_mut((self.size, self.size), (other.size, other.size)).copy_from(b);
                m
            })
            .collect();
        Representation { size: n, images }
    }

    /// Checks multiplicativity and adjoints on basis elements, and that the
    /// unit acts as the identity.
    pub fn check_homomorphism(&self, alg: &StructureTable, tol: f64) -> Result<()> {
        if self.images.len() != alg.dim() {
            return invalid(format!("{} images for an algebra of dimension {}", self.images.len(), alg.dim()));
        }
        let eval = |x: &super::scalar::CVec| {
            let mut m = CMat::zeros(self.size, self.size);
            for (k, xk) in x.iter().enumerate().filter(|(_, z)| z.norm() > 0.0) {
                m += &self.images[k] * *xk;
            }
            m
        };
        if !approx_eq(&eval(alg.unit()), &CMat::identity(self.size, self.size), tol) {
            return invalid("the unit does not act as the identity");
        }
        for i in 0..alg.dim() {
            if !approx_eq(&eval(alg.basis_adjoint(i)), &self.images[i].adjoint(), tol) {
                return invalid(format!("adjoint of basis element {i} is not preserved"));
            }
            for j in 0..alg.dim() {
                if !approx_eq(&eval(alg.product(i, j)), &(&self.images[i] * &self.images[j]), tol) {
                    return invalid(format!("product of basis elements {i}, {j} is not preserved"));
                }
            }
        }
        Ok(())
    }
}

/// The space of `T` with `T·r1(x) = r2(x)·T` for all `x`.
#[derive(Clone, Debug)]
pub struct Intertwiners {
    pub dim: usize,
    pub basis: Vec<CMat>,
}

pub fn intertwiner_space(r1: &Representation, r2: &Representation, tol: f64) -> Result<Intertwiners> {
    if r1.images.len() != r2.images.len() {
        return invalid("representations of different algebras");
    }
    let (n1, n2) = (r1.size, r2.size);
    let block = n1 * n2;
    let mut sys = CMat::zeros(block * r1.images.len(), block);
    let (id1, id2) = (CMat::identity(n1, n1), CMat::identity(n2, n2));
    for (k, (a, b)) in r1.images.iter().zip(&r2.images).enumerate() {
        // vec(T·A − B·T) = (Aᵀ ⊗ I − I ⊗ B) vec(T)
        let m = a.transpose().kronecker(&id2) - id1.kronecker(b);
        sys.view_mut((k * block, 0), (block, block)).copy_from(&m);
    }
    let basis: Vec<CMat> = nullspace(&sys, tol)?.iter().map(|v| unvectorize(v, n2, n1)).collect();
    Ok(Intertwiners { dim: basis.len(), basis })
}

/// The irreducible representations of `M_n ⋊_{Ad u} S`, one per character:
/// `δ_s ⊗ a ↦ a·ω(s)u_s`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub crossed: CrossedProduct,
    pub entries: Vec<(Character, Representation)>,
    /// `intertwiners[i][j]` is the intertwiner dimension between entries
    pub intertwiners: Vec<Vec<usize>>,
    pub sum_of_squares: usize,
}

pub fn spectrum_enumerate(u: &UnitaryActionDatum, tol: f64) -> Result<Spectrum> {
    let g = u.group().clone();
    let alpha = u.action(tol)?;
    let crossed = CrossedProduct::new(&alpha, tol)?;
    let pi = FiberAlgebra::Matrix(u.size()).basis();
    let mut entries = Vec::new();
    for omega in Character::all(&g) {
        let us: Vec<CMat> = g.elements().map(|s| Ok(u.unitary(&s) * omega.value(&s)?)).collect::<Result<_>>()?;
        for (s, us) in g.elements().zip(&us) {
            for a in &pi {
                if !approx_eq(&(us * a * us.adjoint()), &alpha.apply(&s, a, tol)?, tol) {
                    return Err(Error::InternalInconsistency(format!("covariance fails at {s:?} for {omega:?}")));
                }
            }
        }
        entries.push((omega, Representation::integrated(&pi, &us)?));
    }
    let mut intertwiners = vec![vec![0; entries.len()]; entries.len()];
    for i in 0..entries.len() {
        for j in 0..entries.len() {
            intertwiners[i][j] = intertwiner_space(&entries[i].1, &entries[j].1, tol)?.dim;
        }
    }
    let sum_of_squares = entries.iter().map(|(_, r)| r.size() * r.size()).sum();
    for (i, row) in intertwiners.iter().enumerate() {
        for (j, &d) in row.iter().enumerate() {
            if d != usize::from(i == j) {
                return Err(Error::InternalInconsistency(format!("irreps {i} and {j} have {d} intertwiners")));
            }
        }
    }
    if sum_of_squares != crossed.dim() {
        return Err(Error::InternalInconsistency(format!("irrep dimensions square-sum to {sum_of_squares}, not {}", crossed.dim())));
    }
    Ok(Spectrum { crossed, entries, intertwiners, sum_of_squares })
}

/// `x ↦ T·r(x)·T⁻¹`, an equivalent representation.
pub fn conjugated(r: &Representation, t: &CMat) -> Result<Representation> {
    let inv = t.clone().try_inverse().ok_or_else(|| Error::InvalidInput("conjugating matrix is singular".into()))?;
    Representation::new(r.images.iter().map(|m| t * m * &inv).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;
    use crate::cstar::scalar::{one, root_of_unity, zero, CVec};

    fn sign_lift() -> UnitaryActionDatum {
        let z = CMat::from_row_slice(2, 2, &[one(), zero(), zero(), -one()]);
        UnitaryActionDatum::from_generators(FiniteAbelianGroup::cyclic(2), vec![z], 1e-9).unwrap()
    }

    #[test]
    fn characters_of_z2() {
        let u = UnitaryActionDatum::trivial(FiniteAbelianGroup::cyclic(2), 1);
        let sp = spectrum_enumerate(&u, 1e-9).unwrap();
        assert_eq!(sp.entries.len(), 2);
        assert!(sp.entries.iter().all(|(_, r)| r.size() == 1));
        assert!((sp.entries[1].1.images()[1][(0, 0)] + one()).norm() < 1e-12);
    }

    #[test]
    fn diag_sign_spectrum() {
        let sp = spectrum_enumerate(&sign_lift(), 1e-9).unwrap();
        assert_eq!(sp.entries.iter().map(|(_, r)| r.size()).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(sp.sum_of_squares, 8);
        assert_eq!(sp.intertwiners, vec![vec![1, 0], vec![0, 1]]);
        for (_, r) in &sp.entries {
            r.check_homomorphism(sp.crossed.table(), 1e-9).unwrap();
        }
    }

    #[test]
    fn z3_diagonal_spectrum() {
        let v = CMat::from_diagonal(&CVec::from_vec(vec![one(), root_of_unity(1, 3)]));
        let u = UnitaryActionDatum::from_generators(FiniteAbelianGroup::cyclic(3), vec![v], 1e-9).unwrap();
        let sp = spectrum_enumerate(&u, 1e-9).unwrap();
        assert_eq!(sp.entries.len(), 3);
        assert_eq!(sp.sum_of_squares, 12);
    }

    #[test]
    fn intertwiner_dimensions() {
        let sp = spectrum_enumerate(&sign_lift(), 1e-9).unwrap();
        let r = &sp.entries[0].1;
        assert_eq!(intertwiner_space(&r.direct_sum(r), r, 1e-9).unwrap().dim, 2);
        let t = CMat::from_row_slice(2, 2, &[one(), one(), zero(), one()]);
        let r2 = conjugated(r, &t).unwrap();
        let it = intertwiner_space(r, &r2, 1e-9).unwrap();
        assert_eq!(it.dim, 1);
        assert!(it.basis[0].determinant().norm() > 1e-6);
    }
}
