use super::datum::{extract_transition_class, LocallyUnitaryDatum};
use crate::abelian::Character;
use crate::bundles::{glue_total_space, transition_at, GluedSpace, PrincipalBundle};
use crate::cstar::{intertwiner_space, spectrum_enumerate, CMat, FiberAlgebra, Representation};
use crate::{Error, Result};

/// The spectrum of a locally unitary crossed product as a principal bundle
/// over the dual group bundle. Point `x` of the glued space over `u` is the
/// irreducible representation `irreps[u][identification[x]]`.
#[derive(Clone, Debug)]
pub struct SpectrumBundle {
    pub bundle: PrincipalBundle,
    pub glued: GluedSpace,
    /// per base point, the irreducibles in character order of the home lift
    pub irreps: Vec<Vec<Representation>>,
    pub identification: Vec<usize>,
}

/// `π ⋊ ω·u^i` on `C^n` for the lift on patch `i` at point `u`.
fn chart_rep(d: &LocallyUnitaryDatum, i: usize, u: usize, omega: &Character) -> Result<Representation> {
    let lift = d.lift(i, u);
    let g = d.fiber(u);
    let us = g.elements().map(|s| Ok(lift.unitary(&s) * omega.value(&s)?)).collect::<Result<Vec<CMat>>>()?;
    Representation::integrated(&FiberAlgebra::Matrix(lift.size()).basis(), &us)
}

/// Index of the unique entry of `list` equivalent to `r`.
fn locate(list: &[Representation], r: &Representation, tol: f64) -> Result<usize> {
    let mut found = None;
    for (k, q) in list.iter().enumerate() {
        if intertwiner_space(r, q, tol)?.dim > 0 {
            if found.is_some() {
                return Err(Error::InternalInconsistency("representation matches two irreducibles".into()));
            }
            found = Some(k);
        }
    }
    found.ok_or_else(|| Error::InternalInconsistency("representation matches no irreducible".into()))
}

pub fn spectrum_bundle(d: &LocallyUnitaryDatum, tol: f64) -> Result<SpectrumBundle> {
    let bundle = extract_transition_class(d, tol)?;
    let pc = d.pointed();
    let glued = glue_total_space(pc, &bundle)?;
    let mut irreps = Vec::with_capacity(pc.len());
    for u in 0..pc.len() {
        let home = pc.home(u);
        let sp = spectrum_enumerate(d.lift(home, u), tol)?;
        irreps.push(sp.entries.into_iter().map(|(_, r)| r).collect::<Vec<_>>());
    }
    let mut identification = vec![usize::MAX; glued.len()];
    for (u, here) in irreps.iter().enumerate() {
        let g = d.fiber(u);
        let chars = Character::all(g);
        for &i in pc.patches_of(u) {
            let mut hit = vec![false; chars.len()];
            for omega in &chars {
                let k = locate(here, &chart_rep(d, i, u, omega)?, tol)?;
                if std::mem::replace(&mut hit[k], true) {
                    return Err(Error::InternalInconsistency(format!("chart of patch {i} at point {u} is not injective")));
                }
                let x = glued.phi_inv(i, u, omega.components())?;
                match identification[x] {
                    usize::MAX => identification[x] = k,
                    prev if prev == k => {}
                    prev => {
                        return Err(Error::InternalInconsistency(format!(
                            "point {x} over {u} is irreducible {prev} in one chart and {k} in patch {i}"
                        )))
                    }
                }
            }
            // φ_i∘φ_j⁻¹(ω) = ω·γ_ij
            for &j in pc.patches_of(u) {
                let gamma = transition_at(pc, &bundle, i, j, u)?;
                for omega in &chars {
                    let shifted = Character::new(g, &g.add(omega.components(), &gamma))?;
                    let a = locate(here, &chart_rep(d, j, u, omega)?, tol)?;
                    let b = locate(here, &chart_rep(d, i, u, &shifted)?, tol)?;
                    if a != b {
                        return Err(Error::InternalInconsistency(format!(
                            "charts {i}, {j} at point {u} differ from the transition character"
                        )));
                    }
                }
            }
        }
    }
    Ok(SpectrumBundle { bundle, glued, irreps, identification })
}
