//! Instance files: JSON with a top-level `"schema": 1` and a `"kind"`, the
//! rest of the object being the payload for that kind. Unknown fields are
//! rejected everywhere.

use std::fmt;

use gb_core::abelian::{FiniteAbelianGroup, GroupHom, IntMatrix};
use gb_core::bundles::{PointedCover, PrincipalBundle};
use gb_core::cech::{BundlePresentation, CoverComplex, Simplex};
use gb_core::cstar::{c, root_of_unity, ActionDatum, Automorphism, CMat, FiberAlgebra, UnitaryActionDatum, C64};
use gb_core::locunit::LocallyUnitaryDatum;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::Value;

use crate::report::CliError;

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Cover,
    Bundle,
    Pointed,
    Action,
    Locunit,
    Equivalence,
}

impl Kind {
    fn parse(s: &str) -> Option<Kind> {
        Some(match s {
            "cover" => Kind::Cover,
            "bundle" => Kind::Bundle,
            "pointed" => Kind::Pointed,
            "action" => Kind::Action,
            "locunit" => Kind::Locunit,
            "equivalence" => Kind::Equivalence,
            _ => return None,
        })
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Cover => "cover",
            Kind::Bundle => "bundle",
            Kind::Pointed => "pointed",
            Kind::Action => "action",
            Kind::Locunit => "locunit",
            Kind::Equivalence => "equivalence",
        })
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::invalid(msg))
}

#[derive(Clone, Debug)]
pub enum Instance {
    Cover(CoverFile),
    Bundle(BundleFile),
    Pointed(PointedFile),
    Action(ActionFile),
    Locunit(LocunitFile),
    Equivalence(EquivalenceFile),
}

impl Instance {
    pub fn kind(&self) -> Kind {
        match self {
            Instance::Cover(_) => Kind::Cover,
            Instance::Bundle(_) => Kind::Bundle,
            Instance::Pointed(_) => Kind::Pointed,
            Instance::Action(_) => Kind::Action,
            Instance::Locunit(_) => Kind::Locunit,
            Instance::Equivalence(_) => Kind::Equivalence,
        }
    }
}

fn payload<T: DeserializeOwned>(v: Value, kind: Kind) -> Result<T, CliError> {
    serde_json::from_value(v).map_err(|e| CliError::invalid(format!("{kind} payload: {e}")))
}

/// Parses and schema-checks an instance file.
pub fn parse(text: &str) -> Result<Instance, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::invalid(format!("malformed JSON: {e}")))?;
    let Value::Object(mut obj) = v else {
        return err("instance must be a JSON object");
    };
    match obj.remove("schema") {
        Some(Value::Number(n)) if n.as_u64() == Some(SCHEMA_VERSION) => {}
        Some(other) => return err(format!("unsupported schema version {other}, expected {SCHEMA_VERSION}")),
        None => return err("missing \"schema\" field"),
    }
    let kind = match obj.remove("kind") {
        Some(Value::String(s)) => Kind::parse(&s).ok_or_else(|| CliError::invalid(format!("unknown kind \"{s}\"")))?,
        Some(_) => return err("\"kind\" must be a string"),
        None => return err("missing \"kind\" field"),
    };
    let rest = Value::Object(obj);
    Ok(match kind {
        Kind::Cover => Instance::Cover(payload(rest, kind)?),
        Kind::Bundle => Instance::Bundle(payload(rest, kind)?),
        Kind::Pointed => Instance::Pointed(payload(rest, kind)?),
        Kind::Action => Instance::Action(payload(rest, kind)?),
        Kind::Locunit => Instance::Locunit(payload(rest, kind)?),
        Kind::Equivalence => Instance::Equivalence(payload(rest, kind)?),
    })
}

/// Nonempty overlaps with their component counts; face maps are needed only
/// into faces with several components.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub patches: usize,
    #[serde(default)]
    pub overlaps: Vec<OverlapSpec>,
    #[serde(default)]
    pub faces: Vec<FaceSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverlapSpec {
    pub simplex: Vec<usize>,
    #[serde(default = "one_component")]
    pub components: usize,
}

fn one_component() -> usize {
    1
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSpec {
    pub simplex: Vec<usize>,
    pub face: Vec<usize>,
    pub map: Vec<usize>,
}

impl CoverSpec {
    pub fn build(&self) -> Result<CoverComplex, CliError> {
        let comps =
            self.overlaps.iter().map(|o| Ok((Simplex::new(o.simplex.clone())?, o.components))).collect::<Result<Vec<_>, CliError>>()?;
        let faces = self
            .faces
            .iter()
            .map(|f| Ok(((Simplex::new(f.simplex.clone())?, Simplex::new(f.face.clone())?), f.map.clone())))
            .collect::<Result<Vec<_>, CliError>>()?;
        Ok(CoverComplex::new(self.patches, comps, faces)?)
    }
}

/// A gluing isomorphism `H_j → H_i` on one component of `U_ij`, `i < j`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingSpec {
    pub edge: [usize; 2],
    #[serde(default)]
    pub component: usize,
    pub matrix: Vec<Vec<i64>>,
}

/// A transition value on an ordered pair; `(j, i)` is read as the negative.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionSpec {
    pub edge: [usize; 2],
    #[serde(default)]
    pub component: usize,
    pub value: Vec<i64>,
}

pub fn group(moduli: &[i64]) -> Result<FiniteAbelianGroup, CliError> {
    Ok(FiniteAbelianGroup::new(moduli)?)
}

/// `fibers` lists the moduli of each patch's fiber group.
pub fn presentation(cover: &CoverSpec, fibers: &[Vec<i64>], gluing: &[GluingSpec]) -> Result<BundlePresentation, CliError> {
    let cover = cover.build()?;
    let fibers = fibers.iter().map(|m| group(m)).collect::<Result<Vec<_>, _>>()?;
    let mut glue = Vec::new();
    for g in gluing {
        let [i, j] = g.edge;
        if i >= j || j >= fibers.len() {
            return err(format!("gluing edge {:?} must be a pair i < j of patches", g.edge));
        }
        let m = IntMatrix::from_rows(&g.matrix, fibers[j].rank())?;
        glue.push((Simplex::edge(i, j), g.component, GroupHom::new(fibers[j].clone(), fibers[i].clone(), m)?));
    }
    Ok(BundlePresentation::new(cover, fibers, glue)?)
}

/// A sample point: the patches containing it and, where an overlap has
/// several components, which one.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub patches: Vec<usize>,
    #[serde(default)]
    pub components: Vec<PointComponentSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointComponentSpec {
    pub simplex: Vec<usize>,
    pub component: usize,
}

pub fn pointed_cover(cover: &CoverComplex, points: Option<&[PointSpec]>) -> Result<PointedCover, CliError> {
    let Some(points) = points else {
        return Ok(PointedCover::sample(cover));
    };
    let membership = points.iter().map(|p| p.patches.clone()).collect();
    let mut comps = Vec::new();
    for (u, p) in points.iter().enumerate() {
        for c in &p.components {
            comps.push((u, Simplex::new(c.simplex.clone())?, c.component));
        }
    }
    Ok(PointedCover::new(cover.clone(), membership, comps)?)
}

/// `kind: cover`: a cover with a constant fiber.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub cover: CoverSpec,
    pub fiber: Vec<i64>,
}

impl CoverFile {
    pub fn presentation(&self) -> Result<BundlePresentation, CliError> {
        Ok(BundlePresentation::constant(self.cover.build()?, &group(&self.fiber)?))
    }
}

/// `kind: bundle`: a presentation and a transition cocycle (zero when
/// omitted).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleFile {
    pub cover: CoverSpec,
    pub fibers: Vec<Vec<i64>>,
    #[serde(default)]
    pub gluing: Vec<GluingSpec>,
    #[serde(default)]
    pub cocycle: Option<Vec<TransitionSpec>>,
}

impl BundleFile {
    pub fn build(&self) -> Result<PrincipalBundle, CliError> {
        bundle(presentation(&self.cover, &self.fibers, &self.gluing)?, self.cocycle.as_deref())
    }
}

fn bundle(p: BundlePresentation, cocycle: Option<&[TransitionSpec]>) -> Result<PrincipalBundle, CliError> {
    let Some(entries) = cocycle else {
        return Ok(PrincipalBundle::trivial(p));
    };
    let entries: Vec<_> = entries.iter().map(|t| (t.edge[0], t.edge[1], t.component, t.value.clone())).collect();
    let c = p.normalize_oriented(&entries)?;
    Ok(PrincipalBundle::new(p, c)?)
}

/// `kind: pointed`: a bundle with sample points (one per overlap component
/// when omitted).
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointedFile {
    pub cover: CoverSpec,
    pub fibers: Vec<Vec<i64>>,
    #[serde(default)]
    pub gluing: Vec<GluingSpec>,
    #[serde(default)]
    pub cocycle: Option<Vec<TransitionSpec>>,
    #[serde(default)]
    pub points: Option<Vec<PointSpec>>,
}

impl PointedFile {
    pub fn build(&self) -> Result<(PointedCover, PrincipalBundle), CliError> {
        let b = bundle(presentation(&self.cover, &self.fibers, &self.gluing)?, self.cocycle.as_deref())?;
        let pc = pointed_cover(b.presentation().cover(), self.points.as_deref())?;
        Ok((pc, b))
    }
}

/// A complex entry: `[re, im]` or `{"root": [k, n]}` for `e^{2πik/n}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ComplexSpec {
    Pair([f64; 2]),
    Root { root: [i64; 2] },
}

impl ComplexSpec {
    pub fn value(&self) -> Result<C64, CliError> {
        match self {
            ComplexSpec::Pair([re, im]) if re.is_finite() && im.is_finite() => Ok(c(*re, *im)),
            ComplexSpec::Pair(_) => err("complex entries must be finite"),
            ComplexSpec::Root { root: [_, n] } if *n <= 0 => err("root of unity needs a positive order"),
            ComplexSpec::Root { root: [k, n] } => Ok(root_of_unity(*k, *n)),
        }
    }

    fn is_root(&self) -> bool {
        matches!(self, ComplexSpec::Root { .. })
    }
}

pub type MatrixSpec = Vec<Vec<ComplexSpec>>;

pub fn matrix(rows: &MatrixSpec) -> Result<CMat, CliError> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) || n == 0 {
        return err("matrices must be square and nonempty");
    }
    let mut m = CMat::zeros(n, n);
    for (i, r) in rows.iter().enumerate() {
        for (j, z) in r.iter().enumerate() {
            m[(i, j)] = z.value()?;
        }
    }
    Ok(m)
}

/// True when every entry is given exactly: a root of unity, or an integer
/// pair.
pub fn is_exact(rows: &MatrixSpec) -> bool {
    rows.iter().flatten().all(|z| z.is_root() || matches!(z, ComplexSpec::Pair([a, b]) if a.fract() == 0.0 && b.fract() == 0.0))
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum FiberSpec {
    Matrix(usize),
    Functions(usize),
}

impl FiberSpec {
    pub fn build(&self) -> FiberAlgebra {
        match *self {
            FiberSpec::Matrix(n) => FiberAlgebra::Matrix(n),
            FiberSpec::Functions(m) => FiberAlgebra::Functions(m),
        }
    }
}

/// The automorphism attached to one standard generator of the group.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase")]
pub enum GeneratorSpec {
    /// `Ad V`
    Conjugation(MatrixSpec),
    /// a permutation of the points of a function fiber
    Permutation(Vec<usize>),
}

impl GeneratorSpec {
    fn build(&self) -> Result<Automorphism, CliError> {
        Ok(match self {
            GeneratorSpec::Conjugation(m) => Automorphism::Conjugation(matrix(m)?),
            GeneratorSpec::Permutation(p) => Automorphism::Permutation(p.clone()),
        })
    }

    fn is_exact(&self) -> bool {
        match self {
            GeneratorSpec::Conjugation(m) => is_exact(m),
            GeneratorSpec::Permutation(_) => true,
        }
    }
}

/// An action of a finite abelian group on a fiber algebra, given on the
/// standard generators.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub fiber: FiberSpec,
    pub generators: Vec<GeneratorSpec>,
}

impl ActionSpec {
    pub fn build(&self, g: &FiniteAbelianGroup, tol: f64) -> Result<ActionDatum, CliError> {
        if self.generators.len() != g.rank() {
            return err(format!("{} generators given for {g}, which has {} generators", self.generators.len(), g.rank()));
        }
        let gens = self.generators.iter().map(GeneratorSpec::build).collect::<Result<Vec<_>, _>>()?;
        Ok(ActionDatum::from_generators(g.clone(), self.fiber.build(), gens, tol)?)
    }

    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(GeneratorSpec::is_exact)
    }
}

/// `kind: action`
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub group: Vec<i64>,
    pub fiber: FiberSpec,
    pub generators: Vec<GeneratorSpec>,
}

impl ActionFile {
    pub fn spec(&self) -> ActionSpec {
        ActionSpec { fiber: self.fiber.clone(), generators: self.generators.clone() }
    }

    pub fn build(&self, tol: f64) -> Result<ActionDatum, CliError> {
        self.spec().build(&group(&self.group)?, tol)
    }
}

/// A unitary lift on one patch at one point, given on the standard
/// generators of the fiber group.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpec {
    pub patch: usize,
    pub point: usize,
    pub generators: Vec<MatrixSpec>,
}

/// `kind: locunit`: actions of the fibers at each sample point, unitarily
/// implemented on each patch.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocunitFile {
    pub cover: CoverSpec,
    pub fibers: Vec<Vec<i64>>,
    #[serde(default)]
    pub gluing: Vec<GluingSpec>,
    pub points: Vec<PointSpec>,
    pub actions: Vec<ActionSpec>,
    pub lifts: Vec<LiftSpec>,
}

impl LocunitFile {
    pub fn build(&self, tol: f64) -> Result<LocallyUnitaryDatum, CliError> {
        let p = presentation(&self.cover, &self.fibers, &self.gluing)?;
        let pc = pointed_cover(p.cover(), Some(&self.points))?;
        if self.actions.len() != pc.len() {
            return err(format!("{} actions given for {} points", self.actions.len(), pc.len()));
        }
        let actions = self.actions.iter().enumerate().map(|(u, a)| a.build(pc.fiber(&p, u), tol)).collect::<Result<Vec<_>, _>>()?;
        let mut lifts = Vec::new();
        for l in &self.lifts {
            if l.point >= pc.len() {
                return err(format!("lift given at point {}, but there are {} points", l.point, pc.len()));
            }
            let gens = l.generators.iter().map(matrix).collect::<Result<Vec<_>, _>>()?;
            let u = UnitaryActionDatum::from_generators(pc.fiber(&p, l.point).clone(), gens, tol)?;
            lifts.push(((l.patch, l.point), u));
        }
        Ok(LocallyUnitaryDatum::new(p, pc, actions, lifts, tol)?)
    }
}

/// `kind: equivalence`: two locally unitary data over the same base and an
/// exterior equivalence between their actions, one unitary per fiber element
/// (in element order) at each point.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivalenceFile {
    pub left: LocunitFile,
    pub right: LocunitFile,
    pub unitaries: Vec<Vec<MatrixSpec>>,
}

impl EquivalenceFile {
    pub fn unitaries(&self) -> Result<Vec<Vec<CMat>>, CliError> {
        self.unitaries.iter().map(|us| us.iter().map(matrix).collect()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_fields_and_versions() {
        let ok = r#"{"schema": 1, "kind": "cover", "cover": {"patches": 1}, "fiber": [2]}"#;
        assert!(matches!(parse(ok), Ok(Instance::Cover(_))));
        let extra = r#"{"schema": 1, "kind": "cover", "cover": {"patches": 1}, "fiber": [2], "colour": 3}"#;
        assert!(parse(extra).unwrap_err().message.contains("colour"));
        let nested = r#"{"schema": 1, "kind": "cover", "cover": {"patches": 1, "arcs": 2}, "fiber": [2]}"#;
        assert!(parse(nested).unwrap_err().message.contains("arcs"));
        assert!(parse(r#"{"schema": 2, "kind": "cover"}"#).unwrap_err().message.contains("version"));
        assert!(parse(r#"{"kind": "cover"}"#).is_err());
        assert!(parse(r#"{"schema": 1, "kind": "sheaf"}"#).unwrap_err().message.contains("sheaf"));
        assert!(parse("[1, 2").unwrap_err().message.contains("malformed"));
    }

    #[test]
    fn flattened_payloads_reject_unknown_fields() {
        let b = r#"{"schema": 1, "kind": "bundle", "cover": {"patches": 1}, "fibers": [[2]], "cocycles": []}"#;
        assert!(parse(b).is_err());
    }

    #[test]
    fn complex_entries() {
        let m: MatrixSpec = serde_json::from_str(r#"[[[1, 0], {"root": [1, 4]}], [[0, 0], [0.5, -0.5]]]"#).unwrap();
        let x = matrix(&m).unwrap();
        assert!((x[(0, 1)] - c(0.0, 1.0)).norm() < 1e-15);
        assert!(!is_exact(&m));
        let exact: MatrixSpec = serde_json::from_str(r#"[[[1, 0], {"root": [1, 3]}], [[0, 0], [-1, 0]]]"#).unwrap();
        assert!(is_exact(&exact));
        let bad: MatrixSpec = serde_json::from_str(r#"[[[1, 0]], [[0, 0]]]"#).unwrap();
        assert!(matrix(&bad).is_err());
    }

    #[test]
    fn cocycles_are_oriented() {
        let text = r#"{"schema": 1, "kind": "bundle",
            "cover": {"patches": 3, "overlaps": [{"simplex": [0, 1]}, {"simplex": [1, 2]}, {"simplex": [0, 2]}]},
            "fibers": [[3], [3], [3]],
            "cocycle": [{"edge": [1, 0], "value": [1]}, {"edge": [1, 2], "value": [0]}, {"edge": [0, 2], "value": [0]}]}"#;
        let Instance::Bundle(b) = parse(text).unwrap() else { panic!() };
        assert_eq!(b.build().unwrap().cocycle().values()[0], vec![2]);
    }
}
