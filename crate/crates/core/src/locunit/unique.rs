use super::datum::{extract_transition_class, scalar_of, snap_character, LocallyUnitaryDatum};
use crate::bundles::verify_witness;
use crate::cech::Cochain;
use crate::cstar::{approx_eq, check_exterior_equivalence, CMat};
use crate::error::invalid;
use crate::{Error, Result};

/// An exterior equivalence from the action of `v` to that of `w`: per base
/// point, one unitary per fiber element with `u_(s+t) = u_s α_s(u_t)` and
/// `β_s = Ad u_s ∘ α_s`.
#[derive(Clone, Debug)]
pub struct ExteriorEquivalence {
    unitaries: Vec<Vec<CMat>>,
}

impl ExteriorEquivalence {
    pub fn new(v: &LocallyUnitaryDatum, w: &LocallyUnitaryDatum, unitaries: Vec<Vec<CMat>>, tol: f64) -> Result<Self> {
        check_same_base(v, w)?;
        if unitaries.len() != v.pointed().len() {
            return invalid(format!("{} unitary families given for {} points", unitaries.len(), v.pointed().len()));
        }
        for (u, us) in unitaries.iter().enumerate() {
            check_exterior_equivalence(v.action(u), w.action(u), us, tol)
                .map_err(|e| Error::InvalidInput(format!("at point {u}: {}", strip(&e))))?;
        }
        Ok(ExteriorEquivalence { unitaries })
    }

    pub fn unitaries(&self, u: usize) -> &[CMat] {
        &self.unitaries[u]
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::InvalidInput(m) => m.clone(),
        other => other.to_string(),
    }
}

fn check_same_base(v: &LocallyUnitaryDatum, w: &LocallyUnitaryDatum) -> Result<()> {
    if v.presentation() != w.presentation() || v.pointed() != w.pointed() {
        return invalid("locally unitary data live over different group bundles or base points");
    }
    Ok(())
}

/// The section family `β_i(u)(s) = scalar(u_s v^i_s (w^i_s)*)`: a
/// 0-cochain on the dual presentation with `η = β_i + γ_ij − β_j`, where
/// `γ`, `η` are the transition cocycles of `v` and `w`.
pub fn equivalence_to_iso(e: &ExteriorEquivalence, v: &LocallyUnitaryDatum, w: &LocallyUnitaryDatum, tol: f64) -> Result<Cochain> {
    check_same_base(v, w)?;
    let pc = v.pointed();
    let dual = v.dual();
    let mut values = Vec::new();
    for (s, c) in dual.presentation().slots(0) {
        let i = s.vertices()[0];
        let mut value: Option<(usize, Vec<i64>)> = None;
        for u in pc.points_in(&s, c) {
            let g = v.fiber(u);
            let (vi, wi) = (v.lift(i, u), w.lift(i, u));
            let scalars = g
                .elements()
                .enumerate()
                .map(|(k, t)| {
                    let m = &e.unitaries[u][k] * vi.unitary(&t) * wi.unitary(&t).adjoint();
                    scalar_of(&m, tol, || format!("u_s v_s (w_s)* on patch {i} at point {u}, s = {t:?},"))
                })
                .collect::<Result<Vec<_>>>()?;
            let chi = snap_character(g, &scalars, tol)?
                .ok_or_else(|| Error::NotLocallyUnitary(format!("scalars on patch {i} at point {u} are not a character")))?;
            let comps = dual.to_chart(pc, i, u, &chi)?;
            match &value {
                None => value = Some((u, comps)),
                Some((_, prev)) if *prev == comps => {}
                Some((u0, prev)) => {
                    return Err(Error::DiscontinuousSection(format!(
                        "section on patch {i} is {prev:?} at point {u0} and {comps:?} at point {u}"
                    )))
                }
            }
        }
        match value {
            Some((_, comps)) => values.push(comps),
            None => return invalid(format!("no sample point lies in patch {i}")),
        }
    }
    let beta = dual.presentation().cochain(0, values)?;
    let (left, right) = (extract_transition_class(v, tol)?, extract_transition_class(w, tol)?);
    if !verify_witness(&left, &right, &beta)? {
        return Err(Error::InternalInconsistency("extracted sections do not carry one transition cocycle to the other".into()));
    }
    Ok(beta)
}

/// `u_s = β_i(u)(s)·w^i_s (v^i_s)*` on any patch `i ∋ u`.
pub fn iso_to_equivalence(beta: &Cochain, v: &LocallyUnitaryDatum, w: &LocallyUnitaryDatum, tol: f64) -> Result<ExteriorEquivalence> {
    check_same_base(v, w)?;
    let (left, right) = (extract_transition_class(v, tol)?, extract_transition_class(w, tol)?);
    if !verify_witness(&left, &right, beta).map_err(|e| Error::InvalidWitness(strip(&e)))? {
        return Err(Error::InvalidWitness("sections do not carry one transition cocycle to the other".into()));
    }
    let pc = v.pointed();
    let dual = v.dual();
    let p = dual.presentation();
    let mut unitaries = Vec::with_capacity(pc.len());
    for u in 0..pc.len() {
        let g = v.fiber(u);
        let mut chosen: Option<(usize, Vec<CMat>)> = None;
        for &i in pc.patches_of(u) {
            let s = crate::cech::Simplex::vertex(i);
            let c = pc.component(u, &s).expect("member of its own patch");
            let chi = dual.to_fiber(pc, i, u, p.value(beta, &s, c)?)?;
            let us = g
                .elements()
                .map(|t| Ok(w.lift(i, u).unitary(&t) * v.lift(i, u).unitary(&t).adjoint() * chi.value(&t)?))
                .collect::<Result<Vec<CMat>>>()?;
            match &chosen {
                None => chosen = Some((i, us)),
                Some((i0, prev)) => {
                    if prev.iter().zip(&us).any(|(a, b)| !approx_eq(a, b, tol.max(1e-7))) {
                        return Err(Error::InvalidWitness(format!("patches {i0} and {i} give different unitaries at point {u}")));
                    }
                }
            }
        }
        unitaries.push(chosen.expect("every point lies in a patch").1);
    }
    ExteriorEquivalence::new(v, w, unitaries, tol.max(1e-7)).map_err(|e| Error::InvalidWitness(strip(&e)))
}
