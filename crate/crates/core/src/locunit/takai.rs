use std::collections::BTreeMap;
use std::fmt;

use super::datum::{extract_transition_class, LocallyUnitaryDatum};
use super::dual::DualBundlePresentation;
use crate::abelian::{double_dual, dual_group, Character, Element};
use crate::bundles::{glue_total_space, PointedCover, PrincipalBundle};
use crate::cech::cohomology;
use crate::cstar::{
    spectrum_enumerate, stone_von_neumann_torsor, ActionDatum, Automorphism, CMat, CVec, FiberAlgebra, UnitaryActionDatum, C64,
};
use crate::{Error, Result};

/// Convention for the dual action: `α̂_ω(δ_s ⊗ f)` is `conj(ω(s))·δ_s ⊗ f`
/// (`Conj`) or `ω(s)·δ_s ⊗ f` (`Plain`). The local unitaries follow the same
/// convention.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DualSign {
    #[default]
    Conj,
    Plain,
}

impl DualSign {
    fn apply(self, z: C64) -> C64 {
        match self {
            DualSign::Conj => z.conj(),
            DualSign::Plain => z,
        }
    }
}

impl fmt::Display for DualSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DualSign::Conj => "conj",
            DualSign::Plain => "plain",
        })
    }
}

/// Per-point certificate: `FUNCTIONS(X_u) ⋊ S_u ≅ M_n`, and the spectrum of
/// the dual action's crossed product.
#[derive(Clone, Debug, PartialEq)]
pub struct FibreStage {
    pub point: usize,
    pub size: usize,
    pub center_dim: usize,
    pub products_checked: usize,
    pub exact: Option<bool>,
    pub dual_spectrum: usize,
}

#[derive(Clone, Debug)]
pub struct TakaiReport {
    pub sign: DualSign,
    pub fibres: Vec<FibreStage>,
    pub datum: LocallyUnitaryDatum,
    /// transition bundle of the dual action, over the double dual
    pub recovered: PrincipalBundle,
    pub input_class: Element,
    /// the input class under the identification matching `sign`
    pub expected_class: Element,
    pub verdict: bool,
}

fn tag(stage: &str, e: Error) -> Error {
    let m = |s: String| format!("{stage}: {s}");
    match e {
        Error::InvalidInput(s) => Error::InvalidInput(m(s)),
        Error::NotLocallyUnitary(s) => Error::NotLocallyUnitary(m(s)),
        Error::DiscontinuousSection(s) => Error::DiscontinuousSection(m(s)),
        Error::InvalidWitness(s) => Error::InvalidWitness(m(s)),
        Error::InternalInconsistency(s) => Error::InternalInconsistency(m(s)),
        Error::NumericalFailure { message, condition } => Error::NumericalFailure { message: m(message), condition },
        other => other,
    }
}

/// Builds the dual action on the fibers `FUNCTIONS(X_u) ⋊ S_u ≅ M_|S_u|` of
/// the glued bundle, lifts it locally by `u_ω = Σ_x conj(ω(φ_i(x)))·e_x`,
/// extracts its transition class and compares it with the double-dual image
/// of the input class.
pub fn takai_pipeline(pc: &PointedCover, b: &PrincipalBundle, sign: DualSign, tol: f64) -> Result<TakaiReport> {
    let glued = glue_total_space(pc, b).map_err(|e| tag("glue", e))?;
    let p = b.presentation();
    let dual = DualBundlePresentation::new(p).map_err(|e| tag("dual", e))?;
    let mut fibres = Vec::new();
    let mut actions = Vec::new();
    let mut lifts = Vec::new();
    for u in 0..pc.len() {
        let g = pc.fiber(p, u);
        let gd = dual_group(g);
        let pts = glued.points_over(u);
        let n = pts.len();
        let pos: BTreeMap<usize, usize> = pts.iter().enumerate().map(|(k, &x)| (x, k)).collect();
        let perms = g
            .elements()
            .map(|s| pts.iter().map(|&x| Ok(pos[&glued.act(&s, x)?])).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(|e| tag("fibre", e))?;
        let svn = stone_von_neumann_torsor(g, &perms, tol).map_err(|e| tag("fibre", e))?;
        let center_dim = svn.source.center(tol).map_err(|e| tag("fibre", e))?.len();
        if !svn.check.holds() || center_dim != 1 {
            return Err(Error::InternalInconsistency(format!("fibre: crossed product at point {u} is not a full matrix algebra")));
        }
        let m = &svn.map;
        let m_inv = m.transpose();
        let chars = Character::all(g);
        let elems: Vec<Element> = g.elements().collect();
        let mut autos = Vec::new();
        let mut scalings = Vec::new();
        for omega in &chars {
            let mut diag = CVec::zeros(n * n);
            for (k, s) in elems.iter().enumerate() {
                let z = sign.apply(omega.value(s)?);
                for x in 0..n {
                    diag[k * n + x] = z;
                }
            }
            autos.push(Automorphism::Linear(m * CMat::from_diagonal(&diag) * &m_inv));
            scalings.push(diag);
        }
        let alpha = ActionDatum::new(gd.clone(), FiberAlgebra::Matrix(n), autos, tol).map_err(|e| tag("dual action", e))?;
        let fiber = FiberAlgebra::Matrix(n);
        for &i in pc.patches_of(u) {
            let mut us = Vec::new();
            for (omega, diag) in chars.iter().zip(&scalings) {
                let mut coords = CVec::zeros(n * n);
                for (x, &pt) in pts.iter().enumerate() {
                    coords[x] = sign.apply(omega.value(&glued.phi(i, pt)?)?);
                }
                // u_ω (δ_s ⊗ e_x) u_ω* = α̂_ω(δ_s ⊗ e_x)
                let t = &svn.source;
                let adj = t.adjoint(&coords);
                for k in 0..n * n {
                    let lhs = t.mul(&t.mul(&coords, &t.basis_vector(k)), &adj);
                    let rhs = t.basis_vector(k) * diag[k];
                    if (lhs - rhs).iter().any(|z| z.norm() > tol) {
                        return Err(Error::InternalInconsistency(format!(
                            "local unitaries: u_ω on patch {i} at point {u} does not implement the dual action"
                        )));
                    }
                }
                us.push(fiber.element(&(m * coords)));
            }
            let lift = UnitaryActionDatum::new(gd.clone(), us, tol).map_err(|e| tag("local unitaries", e))?;
            lifts.push(((i, u), lift));
        }
        let home_lift = &lifts.iter().find(|((i, v), _)| *i == pc.home(u) && *v == u).expect("home patch lift").1;
        let dual_spectrum = spectrum_enumerate(home_lift, tol).map_err(|e| tag("spectrum", e))?.entries.len();
        fibres.push(FibreStage {
            point: u,
            size: n,
            center_dim,
            products_checked: svn.check.products_checked,
            exact: svn.check.exact,
            dual_spectrum,
        });
        actions.push(alpha);
    }
    let datum =
        LocallyUnitaryDatum::new(dual.presentation().clone(), pc.clone(), actions, lifts, tol).map_err(|e| tag("local unitaries", e))?;
    let recovered = extract_transition_class(&datum, tol).map_err(|e| tag("extract", e))?;
    let h1 = cohomology(p, 1).map_err(|e| tag("compare", e))?;
    let input_class = b.class().to_vec();
    let mut expected = Vec::new();
    for ((e, _), v) in p.slots(1).into_iter().zip(b.cocycle().values()) {
        let g = p.fiber(e.least());
        let dd = double_dual(g, v)?.components().to_vec();
        expected.push(match sign {
            DualSign::Conj => dd,
            DualSign::Plain => g.neg(&dd),
        });
    }
    let expected_class = match sign {
        DualSign::Conj => input_class.clone(),
        DualSign::Plain => h1.group().neg(&input_class),
    };
    let verdict = recovered.presentation() == p
        && recovered.cocycle().values() == expected.as_slice()
        && recovered.class() == expected_class.as_slice();
    Ok(TakaiReport { sign, fibres, datum, recovered, input_class, expected_class, verdict })
}
