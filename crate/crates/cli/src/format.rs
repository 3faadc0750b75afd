//! JSON descriptions of fields, algebras, bases and vectors.
//!
//! An algebra is described by its basis, its nonzero structure constants
//! and an optional unit and augmentation.  Coefficients are exact decimal
//! strings such as `"3"` or `"-2/5"`.  Unit laws are implied by `unit` and
//! are never written out.

use serde::{Deserialize, Serialize};
use stasheff::ainfty::builtins::builtin;
use stasheff::ainfty::{AInfAlgebra, AlgebraBuilder};
use stasheff::artin::{builtin_base, ArtinianDGAlgebra};
use stasheff::error::{Error, Result};
use stasheff::field::Field;
use stasheff::graded::GradedSpace;
use stasheff::linalg::SparseVec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum FieldDesc {
    Q,
    Fp { p: u64 },
}

impl FieldDesc {
    pub fn to_field(self) -> Result<Field> {
        match self {
            FieldDesc::Q => Ok(Field::Rational),
            FieldDesc::Fp { p } => Field::prime(p),
        }
    }

    pub fn of(field: Field) -> Self {
        match field.order() {
            None => FieldDesc::Q,
            Some(p) => FieldDesc::Fp { p },
        }
    }
}

/// Parses the command-line spelling of a field: `Q` or `F<p>`.
pub fn parse_field(s: &str) -> Result<Field> {
    let s = s.trim();
    if s == "Q" {
        return Ok(Field::Rational);
    }
    let p = s
        .strip_prefix('F')
        .and_then(|p| p.parse::<u64>().ok())
        .ok_or_else(|| Error::Parse(format!("unknown field `{s}`; expected `Q` or `F<p>`")))?;
    Field::prime(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDesc {
    pub label: String,
    pub degree: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDesc {
    pub label: String,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpDesc {
    pub arity: usize,
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
    pub out: Vec<TermDesc>,
}

/// `true` for the augmentation dual to the unit, or an explicit functional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AugDesc {
    Standard(bool),
    Functional(Vec<TermDesc>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDesc>,
    pub basis: Vec<BasisDesc>,
    #[serde(default)]
    pub ops: Vec<OpDesc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aug: Option<AugDesc>,
    /// Highest arity carrying data; defaults to the highest arity present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_bound: Option<usize>,
}

/// An algebra given by builtin identifier or inline description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source {
    Builtin(String),
    Inline(AlgebraDesc),
}

impl Source {
    /// A short name for reports.
    pub fn name(&self) -> String {
        match self {
            Source::Builtin(id) => id.trim().to_string(),
            Source::Inline(_) => "inline".to_string(),
        }
    }

    /// The field an inline description pins, if any.
    pub fn pinned_field(&self) -> Option<FieldDesc> {
        match self {
            Source::Builtin(_) => None,
            Source::Inline(d) => d.field,
        }
    }
}

fn resolve_field(desc: Option<FieldDesc>, field: Option<Field>) -> Result<Field> {
    match (desc, field) {
        (Some(d), Some(f)) => {
            let g = d.to_field()?;
            if g != f {
                return Err(Error::MixedField(g, f));
            }
            Ok(g)
        }
        (Some(d), None) => d.to_field(),
        (None, Some(f)) => Ok(f),
        (None, None) => Err(Error::Parse("no field given".into())),
    }
}

/// Parses a coefficient list over `space`.
pub fn vector_from_terms(field: Field, space: &GradedSpace, terms: &[TermDesc]) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    for t in terms {
        v.add_term(space.try_index(&t.label)?, &field.parse(&t.coeff)?);
    }
    Ok(v)
}

pub fn terms_from_vector(space: &GradedSpace, v: &SparseVec) -> Vec<TermDesc> {
    v.iter()
        .map(|(i, c)| TermDesc {
            label: space.label(i).to_string(),
            coeff: c.to_decimal(),
        })
        .collect()
}

/// Parses `c*label + c*label + …`, the rendering used in reports.  A
/// term without a leading numeric coefficient has coefficient 1, and a
/// leading `-` negates it.
pub fn parse_vector(field: Field, space: &GradedSpace, s: &str) -> Result<SparseVec> {
    let mut v = SparseVec::new();
    let s = s.trim();
    if s == "0" || s.is_empty() {
        return Ok(v);
    }
    for raw in s.split(" + ") {
        let raw = raw.trim();
        let (coeff, label) = match raw.split_once('*') {
            Some((c, l)) if field.parse(c).is_ok() => (field.parse(c)?, l.trim()),
            _ => match raw.strip_prefix('-') {
                Some(l) => (field.from_i64(-1), l.trim()),
                None => (field.one(), raw),
            },
        };
        v.add_term(space.try_index(label)?, &coeff);
    }
    Ok(v)
}

pub fn algebra_from_desc(d: &AlgebraDesc, field: Option<Field>) -> Result<AInfAlgebra> {
    let field = resolve_field(d.field, field)?;
    let space = GradedSpace::new(d.basis.iter().map(|b| (b.label.clone(), b.degree)))?;
    let mut b = AlgebraBuilder::new(field, space.clone());
    for op in &d.ops {
        if op.inputs.len() != op.arity {
            return Err(Error::Parse(format!(
                "operation on ({}) declares arity {}",
                op.inputs.join(","),
                op.arity
            )));
        }
        let inputs = op
            .inputs
            .iter()
            .map(|l| space.try_index(l))
            .collect::<Result<Vec<_>>>()?;
        b.add_op(inputs, &vector_from_terms(field, &space, &op.out)?);
    }
    if let Some(u) = &d.unit {
        b = b.unit_with_laws(u)?;
    }
    match &d.aug {
        None | Some(AugDesc::Standard(false)) => {}
        Some(AugDesc::Standard(true)) => b = b.augmented(),
        Some(AugDesc::Functional(t)) => b = b.augmentation(vector_from_terms(field, &space, t)?),
    }
    if let Some(n) = d.arity_bound {
        b = b.arity_bound(n);
    }
    b.build()
}

/// The canonical description: basis in index order, operations in
/// lexicographic order of their inputs, zero outputs and unit laws
/// omitted.
pub fn desc_from_algebra(a: &AInfAlgebra) -> AlgebraDesc {
    let space = a.space();
    let unit = a.unit();
    let default_bound = a.ops().max_arity();
    let ops = a
        .ops()
        .all_entries()
        .filter(|(k, v)| !v.is_zero() && !(k.len() == 2 && unit.is_some_and(|u| k.contains(&u))))
        .map(|(k, v)| OpDesc {
            arity: k.len(),
            inputs: k.iter().map(|&i| space.label(i).to_string()).collect(),
            out: terms_from_vector(space, v),
        })
        .collect();
    AlgebraDesc {
        field: Some(FieldDesc::of(a.field())),
        basis: (0..a.dim())
            .map(|i| BasisDesc {
                label: space.label(i).to_string(),
                degree: space.degree(i),
            })
            .collect(),
        ops,
        unit: unit.map(|u| space.label(u).to_string()),
        aug: a.is_augmented().then_some(AugDesc::Standard(true)),
        arity_bound: (a.arity_bound() != default_bound).then_some(a.arity_bound()),
    }
}

pub fn load_algebra(src: &Source, field: Option<Field>) -> Result<AInfAlgebra> {
    match src {
        Source::Builtin(id) => builtin(field.ok_or_else(|| Error::Parse("no field given".into()))?, id),
        Source::Inline(d) => algebra_from_desc(d, field),
    }
}

pub fn load_base(src: &Source, field: Option<Field>) -> Result<ArtinianDGAlgebra> {
    match src {
        Source::Builtin(id) => builtin_base(field.ok_or_else(|| Error::Parse("no field given".into()))?, id),
        Source::Inline(d) => ArtinianDGAlgebra::new(algebra_from_desc(d, field)?),
    }
}

/// Canonical pretty-printed JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("descriptions serialize");
    s.push('\n');
    s
}

pub fn emit_algebra(field: Field, id: &str) -> Result<String> {
    Ok(to_canonical_json(&desc_from_algebra(&builtin(field, id)?)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::prime(2).unwrap()
    }

    #[test]
    fn field_descriptors_round_trip() {
        for (json, f) in [(r#"{"kind":"Q"}"#, Field::Rational), (r#"{"kind":"Fp","p":3}"#, Field::prime(3).unwrap())] {
            let d: FieldDesc = serde_json::from_str(json).unwrap();
            assert_eq!(d.to_field().unwrap(), f);
            assert_eq!(serde_json::to_string(&FieldDesc::of(f)).unwrap(), json);
        }
        assert!(serde_json::from_str::<FieldDesc>(r#"{"kind":"Fp","p":4}"#).unwrap().to_field().is_err());
        assert_eq!(parse_field("F5").unwrap(), Field::prime(5).unwrap());
        assert!(parse_field("R").is_err());
    }

    #[test]
    fn builtins_round_trip_through_descriptions() {
        for field in [Field::Rational, f2(), Field::prime(3).unwrap()] {
            for id in ["kpoints(2)", "njac(2)", "ngr(3,1)", "xy", "xy_acyclic", "massey"] {
                let a = builtin(field, id).unwrap();
                let d = desc_from_algebra(&a);
                let json = to_canonical_json(&d);
                let back: AlgebraDesc = serde_json::from_str(&json).unwrap();
                assert_eq!(back, d);
                assert_eq!(algebra_from_desc(&back, None).unwrap(), a, "{id} over {field}");
            }
        }
    }

    #[test]
    fn njac_description_has_only_unit_laws() {
        let d = desc_from_algebra(&builtin(f2(), "njac(2)").unwrap());
        assert!(d.ops.is_empty());
        assert_eq!(d.basis.iter().filter(|b| b.degree == 1).count(), 2);
        assert_eq!(d.unit.as_deref(), Some("1"));
    }

    #[test]
    fn emission_is_byte_stable() {
        assert_eq!(emit_algebra(f2(), "ngr(3,1)").unwrap(), emit_algebra(f2(), "ngr(3,1)").unwrap());
    }

    #[test]
    fn inline_descriptions_are_validated() {
        let bad_arity = r#"{"basis":[{"label":"1","degree":0},{"label":"x","degree":1}],
            "ops":[{"arity":3,"in":["x","x"],"out":[]}],"unit":"1","aug":true}"#;
        let d: AlgebraDesc = serde_json::from_str(bad_arity).unwrap();
        assert!(matches!(algebra_from_desc(&d, Some(f2())), Err(Error::Parse(_))));
        let bad_degree = r#"{"basis":[{"label":"1","degree":0},{"label":"x","degree":1}],
            "ops":[{"arity":2,"in":["x","x"],"out":[{"label":"x","coeff":"1"}]}],"unit":"1"}"#;
        let d: AlgebraDesc = serde_json::from_str(bad_degree).unwrap();
        assert!(matches!(algebra_from_desc(&d, Some(f2())), Err(Error::Structural(_))));
        let unknown = r#"{"basis":[],"extra":1}"#;
        assert!(serde_json::from_str::<AlgebraDesc>(unknown).is_err());
        let no_field = r#"{"basis":[{"label":"1","degree":0}],"unit":"1"}"#;
        let d: AlgebraDesc = serde_json::from_str(no_field).unwrap();
        assert!(algebra_from_desc(&d, None).is_err());
        let pinned: AlgebraDesc =
            serde_json::from_str(r#"{"field":{"kind":"Q"},"basis":[{"label":"1","degree":0}],"unit":"1"}"#).unwrap();
        assert!(matches!(algebra_from_desc(&pinned, Some(f2())), Err(Error::MixedField(..))));
    }

    #[test]
    fn vectors_parse_from_their_rendering() {
        let a = builtin(Field::Rational, "ngr(3,1)").unwrap();
        let space = a.space();
        let v = parse_vector(Field::Rational, space, "-2/3*y1*z1 + y1*z2").unwrap();
        assert_eq!(parse_vector(Field::Rational, space, &space.render(&v)).unwrap(), v);
        assert_eq!(parse_vector(Field::Rational, space, "-y1*z2").unwrap().iter().count(), 1);
        assert!(parse_vector(Field::Rational, space, "w").is_err());
        assert!(parse_vector(Field::Rational, space, "0").unwrap().is_zero());
    }
}
