use gb_core::abelian::{Element, FiniteAbelianGroup, Phase};
use gb_core::bundles::{iso_bundles, verify_witness, IsoOutcome, PointedCover, PrincipalBundle};
use gb_core::cech::{cohomology, BundlePresentation, Cochain};
use gb_core::cstar::{
    implementing_unitary, is_unitary_action, spectrum_enumerate, unitary_tensor_iso, ActionDatum, CMat, CrossedProduct, UnitaryActionDatum,
    UnitaryOutcome, C64,
};
use gb_core::locunit::{
    equivalence_to_iso, extract_transition_class, iso_to_equivalence, spectrum_bundle, takai_pipeline, DualSign, ExteriorEquivalence,
    LocallyUnitaryDatum,
};
use serde_json::{json, Value};

use crate::report::{CliError, Report, Verdict};
use crate::schema::Instance;

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum XprodOp {
    Build,
    Spectrum,
    Decompose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyOp {
    UnitaryIso,
    Equivalence,
    Locunit,
    Takai,
}

fn wrong_kind<T>(command: &str, inst: &Instance, wanted: &str) -> Result<T> {
    Err(CliError::invalid(format!("{command} needs a {wanted} file, got kind {}", inst.kind())))
}

fn slot_labels(p: &BundlePresentation, degree: usize) -> Vec<String> {
    p.slots(degree).into_iter().map(|(s, c)| format!("{s}#{c}")).collect()
}

fn cochain_text(p: &BundlePresentation, c: &Cochain) -> String {
    let parts: Vec<String> = slot_labels(p, c.degree()).iter().zip(c.values()).map(|(l, v)| format!("{l}={v:?}")).collect();
    format!("({})", parts.join(", "))
}

fn phase_text(p: Phase) -> String {
    match (p.num(), p.den()) {
        (0, _) => "1".into(),
        (1, 2) => "-1".into(),
        (1, 4) => "i".into(),
        (3, 4) => "-i".into(),
        (k, n) => format!("exp(2πi·{k}/{n})"),
    }
}

fn group_text(g: &FiniteAbelianGroup) -> String {
    g.to_string()
}

fn presentation_of(command: &str, inst: &Instance) -> Result<(BundlePresentation, Option<PrincipalBundle>)> {
    match inst {
        Instance::Cover(f) => Ok((f.presentation()?, None)),
        Instance::Bundle(f) => {
            let b = f.build()?;
            Ok((b.presentation().clone(), Some(b)))
        }
        Instance::Pointed(f) => {
            let (_, b) = f.build()?;
            Ok((b.presentation().clone(), Some(b)))
        }
        _ => wrong_kind(command, inst, "cover, bundle or pointed"),
    }
}

fn bundle_of(command: &str, inst: &Instance) -> Result<PrincipalBundle> {
    match inst {
        Instance::Bundle(f) => f.build(),
        Instance::Pointed(f) => Ok(f.build()?.1),
        _ => wrong_kind(command, inst, "bundle or pointed"),
    }
}

/// `Hⁿ` of the sheaf of sections, with a representative cocycle for every
/// standard generator.
pub fn cmd_cohomology(echo: &str, inst: &Instance, degree: usize) -> Result<Report> {
    if degree > 1 {
        return Err(CliError::invalid(format!("degree must be 0 or 1, got {degree}")));
    }
    let (p, bundle) = presentation_of("cohomology", inst)?;
    let h = cohomology(&p, degree)?;
    let mut r = Report::new(echo);
    r.line(format!("H{degree} = {}", group_text(h.group())));
    let mut reps = Vec::new();
    for k in 0..h.group().rank() {
        let gen = h.group().generator(k);
        let rep = h.representative(&gen)?;
        let cochain = p.cochain_from_flat(degree, &rep)?;
        // re-validate: a cocycle projecting back to the generator
        if h.class_of(&rep)? != gen {
            return Err(gb_core::Error::InternalInconsistency(format!("representative of generator {k} has the wrong class")).into());
        }
        r.line(format!("generator {k} (order {}): {}", h.group().moduli()[k], cochain_text(&p, &cochain)));
        reps.push(json!(rep));
    }
    r.cert("degree", json!(degree));
    r.cert("invariant_factors", json!(h.group().moduli()));
    r.cert("slots", json!(slot_labels(&p, degree)));
    r.cert("representatives", Value::Array(reps));
    if let (1, Some(b)) = (degree, bundle) {
        r.line(format!("class of the given cocycle = {:?}", b.class()));
        r.cert("class", json!(b.class()));
    }
    Ok(r)
}

/// Decides whether two bundles on one presentation are isomorphic.
pub fn cmd_iso(echo: &str, a: &Instance, b: &Instance) -> Result<Report> {
    let left = bundle_of("iso", a)?;
    let right = bundle_of("iso", b)?;
    if left.presentation() != right.presentation() {
        return Err(CliError::invalid("the two bundles are presented on different sheaves; give them on a common cover"));
    }
    let p = left.presentation();
    let mut r = Report::new(echo);
    r.cert("slots", json!(slot_labels(p, 0)));
    match iso_bundles(&left, &right)? {
        IsoOutcome::Isomorphic { witness } => {
            if !verify_witness(&left, &right, &witness)? {
                return Err(gb_core::Error::InternalInconsistency("witness does not carry one cocycle to the other".into()).into());
            }
            r.line(format!("isomorphic: classes {:?} = {:?}", left.class(), right.class()));
            r.line(format!("β = {} with η = β_i + γ_ij − β_j", cochain_text(p, &witness)));
            r.cert("witness", json!(witness.flat()));
        }
        IsoOutcome::Distinct { left: l, right: rc } => {
            // re-validate the class coordinates from the cocycles
            let h1 = cohomology(p, 1)?;
            if h1.class_of(&left.cocycle().flat())? != l || h1.class_of(&right.cocycle().flat())? != rc || l == rc {
                return Err(gb_core::Error::InternalInconsistency("class coordinates do not re-validate".into()).into());
            }
            r.verdict = Verdict::Fail;
            r.line(format!("not isomorphic: H1 = {}, classes {l:?} vs {rc:?}", group_text(h1.group())));
            r.cert("classes", json!([l, rc]));
        }
    }
    Ok(r)
}

/// The action and, when available, a unitary lift of it at point `u`.
fn action_at(inst: &Instance, u: usize, tol: f64) -> Result<(ActionDatum, Option<UnitaryActionDatum>)> {
    match inst {
        Instance::Action(f) => {
            if u != 0 {
                return Err(CliError::invalid(format!("an action file describes a single point; --point {u} is out of range")));
            }
            Ok((f.build(tol)?, None))
        }
        Instance::Locunit(f) => {
            let d = f.build(tol)?;
            if u >= d.pointed().len() {
                return Err(CliError::invalid(format!("point {u} is out of range; the file has {} points", d.pointed().len())));
            }
            Ok((d.action(u).clone(), Some(d.lift(d.pointed().home(u), u).clone())))
        }
        _ => wrong_kind("xprod", inst, "action or locunit"),
    }
}

fn commutator_scalar(a: &CMat, b: &CMat) -> C64 {
    let n = a.nrows() as f64;
    (a * b * a.adjoint() * b.adjoint()).trace() / n
}

/// Re-derives every obstruction phase from freshly computed implementing
/// unitaries.
fn revalidate_obstruction(alpha: &ActionDatum, table: &[(Element, Element, Phase)], tol: f64) -> Result<()> {
    let order = alpha.group().exponent();
    for (s, t, phase) in table {
        let (Some(vs), Some(vt)) = (implementing_unitary(alpha, s, tol)?, implementing_unitary(alpha, t, tol)?) else {
            return Err(gb_core::Error::InternalInconsistency("obstructed action without implementing unitaries".into()).into());
        };
        if Phase::snap(commutator_scalar(&vs, &vt), order, 1e-6) != Some(*phase) {
            return Err(gb_core::Error::InternalInconsistency(format!("obstruction at {s:?}, {t:?} does not re-validate")).into());
        }
    }
    Ok(())
}

fn obstruction_report(r: &mut Report, alpha: &ActionDatum, outcome: &UnitaryOutcome, tol: f64) -> Result<()> {
    r.verdict = Verdict::Fail;
    match outcome {
        UnitaryOutcome::Obstructed(table) => {
            revalidate_obstruction(alpha, table, tol)?;
            let (s, t, p) = &table[0];
            r.line(format!("OBSTRUCTED: V_s V_t V_s* V_t* = {} at s = {s:?}, t = {t:?}", phase_text(*p)));
            let cert: Vec<Value> = table.iter().map(|(s, t, p)| json!({"s": s, "t": t, "phase": [p.num(), p.den()]})).collect();
            r.cert("obstruction", Value::Array(cert));
        }
        UnitaryOutcome::NotPointwiseInner => {
            r.line("NOT POINTWISE INNER: some α_s is not implemented by a unitary");
            r.cert("obstruction", json!("not-pointwise-inner"));
        }
        UnitaryOutcome::Lift(_) => unreachable!("lifts are not obstructions"),
    }
    Ok(())
}

fn lift_of(
    alpha: &ActionDatum,
    given: Option<UnitaryActionDatum>,
    tol: f64,
) -> Result<std::result::Result<UnitaryActionDatum, UnitaryOutcome>> {
    if let Some(u) = given {
        return Ok(Ok(u));
    }
    Ok(match is_unitary_action(alpha, tol)? {
        UnitaryOutcome::Lift(u) => Ok(u),
        other => Err(other),
    })
}

pub fn cmd_xprod(echo: &str, inst: &Instance, point: usize, op: XprodOp, tol: f64) -> Result<Report> {
    let (alpha, given) = action_at(inst, point, tol)?;
    let mut r = Report::new(echo);
    r.cert("point", json!(point));
    r.cert("group", json!(alpha.group().moduli()));
    match op {
        XprodOp::Build => {
            let x = CrossedProduct::new(&alpha, tol)?;
            r.line(format!("A ⋊ S with S = {}, dim {}", group_text(alpha.group()), x.dim()));
            r.cert("dim", json!(x.dim()));
            match x.table().check_axioms(tol.max(1e-9)) {
                Ok(()) => {
                    let center = x.center(tol)?.len();
                    r.line("*-algebra axioms hold on all basis elements");
                    r.line(format!("center dimension {center}"));
                    r.cert("center_dim", json!(center));
                }
                Err(f) => {
                    r.verdict = Verdict::Fail;
                    r.line(format!("axiom failure: {f:?}"));
                    r.cert("axiom_failure", json!(format!("{f:?}")));
                }
            }
        }
        XprodOp::Decompose => {
            let x = CrossedProduct::new(&alpha, tol)?;
            let dims: Vec<usize> = x.wedderburn(tol)?.iter().map(|s| s.dim).collect();
            let total: usize = dims.iter().map(|d| d * d).sum();
            r.line(format!("summands MATRIX{dims:?}, sum-of-squares {total} = dim {}", x.dim()));
            r.cert("summands", json!(dims));
            r.cert("dim", json!(x.dim()));
            if total != x.dim() {
                r.verdict = Verdict::Fail;
            }
        }
        XprodOp::Spectrum => match lift_of(&alpha, given, tol)? {
            Ok(u) => {
                let sp = spectrum_enumerate(&u, tol)?;
                let dims: Vec<usize> = sp.entries.iter().map(|(_, rep)| rep.size()).collect();
                let chars: Vec<&[i64]> = sp.entries.iter().map(|(w, _)| w.components()).collect();
                let ok = sp.entries.len() as u128 == alpha.group().order()
                    && sp.sum_of_squares == sp.crossed.dim()
                    && sp.intertwiners.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &d)| d == usize::from(i == j)));
                r.line(format!(
                    "{} irreps, dims {dims:?}, sum-of-squares {} = dim {}",
                    sp.entries.len(),
                    sp.sum_of_squares,
                    sp.crossed.dim()
                ));
                r.line("pairwise intertwiner dimension 0 between distinct irreps");
                r.cert("characters", json!(chars));
                r.cert("dims", json!(dims));
                r.cert("intertwiners", json!(sp.intertwiners));
                if !ok {
                    r.verdict = Verdict::Fail;
                }
            }
            Err(outcome) => obstruction_report(&mut r, &alpha, &outcome, tol)?,
        },
    }
    Ok(r)
}

fn complex_json(z: C64) -> Value {
    let round = |x: f64| {
        let y = (x * 1e12).round() / 1e12;
        if y == 0.0 {
            0.0
        } else {
            y
        }
    };
    json!([round(z.re), round(z.im)])
}

fn matrix_json(m: &CMat) -> Value {
    Value::Array((0..m.nrows()).map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m[(i, j)])).collect())).collect())
}

fn verify_unitary_iso(r: &mut Report, inst: &Instance, tol: f64) -> Result<()> {
    let Instance::Action(f) = inst else {
        return wrong_kind("verify unitary-iso", inst, "action");
    };
    let alpha = f.build(tol)?;
    let exact_inputs = f.spec().is_exact();
    let outcome = is_unitary_action(&alpha, tol)?;
    let UnitaryOutcome::Lift(u) = outcome else {
        return obstruction_report(r, &alpha, &outcome, tol);
    };
    let gens: Vec<Value> = (0..alpha.group().rank()).map(|k| matrix_json(u.unitary(&alpha.group().generator(k)))).collect();
    r.line("unitary lift found");
    let iso = unitary_tensor_iso(&u, tol)?;
    let c = &iso.check;
    r.line(format!(
        "φ: C*(S) ⊗ M_{n} → M_{n} ⋊ S checked on {} basis products, max residual {:.1e}",
        c.products_checked,
        c.max_residual,
        n = u.size()
    ));
    r.cert("lift_generators", Value::Array(gens));
    r.cert("products_checked", json!(c.products_checked));
    if exact_inputs {
        let exact = c.exact.unwrap_or(false);
        r.line(format!("exact root-of-unity comparison: {}", if exact { "equal" } else { "differs" }));
        r.cert("exact", json!(exact));
    }
    let holds = c.failure.is_none() && (!exact_inputs || c.exact == Some(true));
    if !holds {
        r.verdict = Verdict::Fail;
        r.line(format!("failure: {:?}", c.failure));
        r.cert("failure", json!(format!("{:?}", c.failure)));
    }
    Ok(())
}

fn locunit_failure(r: &mut Report, e: gb_core::Error) -> Result<()> {
    match e {
        gb_core::Error::NotLocallyUnitary(m) | gb_core::Error::DiscontinuousSection(m) | gb_core::Error::InvalidWitness(m) => {
            r.verdict = Verdict::Fail;
            r.line(format!("FAIL: {m}"));
            r.cert("counterexample", json!(m));
            Ok(())
        }
        other => Err(other.into()),
    }
}

fn verify_locunit(r: &mut Report, inst: &Instance, tol: f64) -> Result<()> {
    let Instance::Locunit(f) = inst else {
        return wrong_kind("verify locunit", inst, "locunit");
    };
    let d = f.build(tol)?;
    let bundle = match extract_transition_class(&d, tol) {
        Ok(b) => b,
        Err(e) => return locunit_failure(r, e),
    };
    let p = bundle.presentation();
    r.line(format!("transition characters: {}", cochain_text(p, bundle.cocycle())));
    r.line(format!("class in H1(dual) = {}: {:?}", group_text(cohomology(p, 1)?.group()), bundle.class()));
    r.cert("transition_cocycle", json!(bundle.cocycle().flat()));
    r.cert("class", json!(bundle.class()));
    let sb = match spectrum_bundle(&d, tol) {
        Ok(sb) => sb,
        Err(e) => return locunit_failure(r, e),
    };
    let irreps: Vec<usize> = sb.irreps.iter().map(Vec::len).collect();
    r.line(format!("spectrum: irreps per point {irreps:?}, glued over the transition class"));
    r.cert("irreps_per_point", json!(irreps));
    if sb.bundle.class() != bundle.class() {
        r.verdict = Verdict::Fail;
        r.line("spectrum bundle class differs from the transition class");
    }
    Ok(())
}

fn datum_pair(f: &crate::schema::EquivalenceFile, tol: f64) -> Result<(LocallyUnitaryDatum, LocallyUnitaryDatum)> {
    Ok((f.left.build(tol)?, f.right.build(tol)?))
}

fn verify_equivalence(r: &mut Report, inst: &Instance, tol: f64) -> Result<()> {
    let Instance::Equivalence(f) = inst else {
        return wrong_kind("verify equivalence", inst, "equivalence");
    };
    let (v, w) = datum_pair(f, tol)?;
    let e = match ExteriorEquivalence::new(&v, &w, f.unitaries()?, tol) {
        Ok(e) => e,
        Err(gb_core::Error::InvalidInput(m)) => {
            r.verdict = Verdict::Fail;
            r.line(format!("not an exterior equivalence: {m}"));
            r.cert("counterexample", json!(m));
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };
    let beta = match equivalence_to_iso(&e, &v, &w, tol) {
        Ok(b) => b,
        Err(e) => return locunit_failure(r, e),
    };
    let p = v.dual().presentation();
    r.line(format!("extracted sections β = {}", cochain_text(p, &beta)));
    let back = iso_to_equivalence(&beta, &v, &w, tol)?;
    let again = equivalence_to_iso(&back, &v, &w, tol)?;
    r.line(format!("reconstructed equivalence re-extracts to β: {}", again == beta));
    r.cert("beta", json!(beta.flat()));
    r.cert("round_trip", json!(again == beta));
    if again != beta {
        r.verdict = Verdict::Fail;
    }
    Ok(())
}

fn pointed_bundle(inst: &Instance) -> Result<(PointedCover, PrincipalBundle)> {
    match inst {
        Instance::Bundle(f) => {
            let b = f.build()?;
            Ok((PointedCover::sample(b.presentation().cover()), b))
        }
        Instance::Pointed(f) => f.build(),
        _ => wrong_kind("verify takai", inst, "bundle or pointed"),
    }
}

fn verify_takai(r: &mut Report, inst: &Instance, sign: DualSign, tol: f64) -> Result<()> {
    let (pc, b) = pointed_bundle(inst)?;
    let rep = takai_pipeline(&pc, &b, sign, tol)?;
    r.line(format!("dual-sign {sign}"));
    for f in &rep.fibres {
        r.line(format!(
            "point {}: FUNCTIONS ⋊ S ≅ M_{} ({} products, exact {}), center dim {}, dual spectrum {}",
            f.point,
            f.size,
            f.products_checked,
            f.exact.map_or("n/a", |e| if e { "yes" } else { "no" }),
            f.center_dim,
            f.dual_spectrum
        ));
    }
    r.line(format!("input class {:?}, recovered class {:?}, expected {:?}", rep.input_class, rep.recovered.class(), rep.expected_class));
    r.cert("dual_sign", json!(sign.to_string()));
    r.cert("input_class", json!(rep.input_class));
    r.cert("recovered_class", json!(rep.recovered.class()));
    r.cert("expected_class", json!(rep.expected_class));
    r.cert("recovered_cocycle", json!(rep.recovered.cocycle().flat()));
    if rep.verdict {
        r.line("recovered class = double-dual of input class");
    } else {
        r.verdict = Verdict::Fail;
        r.line("recovered class differs from the double-dual image of the input class");
    }
    Ok(())
}

pub fn cmd_verify(echo: &str, inst: &Instance, op: VerifyOp, sign: DualSign, tol: f64) -> Result<Report> {
    let mut r = Report::new(echo);
    r.cert("tolerance", json!(tol));
    match op {
        VerifyOp::UnitaryIso => verify_unitary_iso(&mut r, inst, tol)?,
        VerifyOp::Locunit => verify_locunit(&mut r, inst, tol)?,
        VerifyOp::Equivalence => verify_equivalence(&mut r, inst, tol)?,
        VerifyOp::Takai => verify_takai(&mut r, inst, sign, tol)?,
    }
    Ok(r)
}
