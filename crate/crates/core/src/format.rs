//! The JSON input document. Every integer is a decimal string.
//!
//! Field names are listed in `docs/FORMAT.md`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::IntMatrix;
use crate::error::TorusError;
use crate::global::{GlobalField, GlobalTorusSpec, PlaceData};
use crate::group::{FiniteGroup, Subgroup};
use crate::lattice::GaloisLattice;
use crate::local::LocalTorusData;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("field `{field}`: {source}")]
    Invalid { field: String, source: TorusError },
}

impl InputError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        InputError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    fn invalid(field: impl Into<String>) -> impl FnOnce(TorusError) -> Self {
        let field = field.into();
        move |source| InputError::Invalid { field, source }
    }

    /// The wrapped computation error, for errors raised while validating.
    pub fn torus_error(&self) -> Option<&TorusError> {
        match self {
            InputError::Invalid { source, .. } => Some(source),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    pub order: String,
    pub mult_table: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub rank: String,
    /// One `rank × rank` matrix per group element, as a list of rows.
    pub action: Vec<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PlaceDoc {
    pub label: String,
    pub decomposition: Vec<String>,
    pub inertia: Vec<String>,
    pub frobenius: String,
    pub residue_q: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GlobalDoc {
    /// `"F"` (function field) or `"N"` (number field).
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub genus: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discriminant: Option<String>,
    #[serde(default)]
    pub places: Vec<PlaceDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub group: GroupDoc,
    pub lattice: LatticeDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inertia: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frobenius: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_q: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub global: Option<GlobalDoc>,
}

fn int(field: &str, s: &str) -> Result<BigInt, InputError> {
    let t = s.trim();
    let digits = t.strip_prefix('-').unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(InputError::field(field, format!("`{s}` is not a decimal integer")));
    }
    t.parse()
        .map_err(|_| InputError::field(field, format!("`{s}` is not a decimal integer")))
}

fn index(field: &str, s: &str) -> Result<usize, InputError> {
    int(field, s)?
        .to_usize()
        .ok_or_else(|| InputError::field(field, format!("`{s}` is not a non-negative index")))
}

fn ints(v: &[BigInt]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn indices(v: &[usize]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn subgroup(field: &str, group: &FiniteGroup, elems: &[String]) -> Result<Subgroup, InputError> {
    let elems = elems
        .iter()
        .enumerate()
        .map(|(i, s)| index(&format!("{field}[{i}]"), s))
        .collect::<Result<Vec<_>, _>>()?;
    Subgroup::new(group, elems).map_err(InputError::invalid(field))
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, InputError> {
        serde_json::from_str(text).map_err(|e| InputError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn read(path: &str) -> Result<Self, InputError> {
        let text = std::fs::read_to_string(path).map_err(|source| InputError::Io {
            path: path.into(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_lattice(lattice: &GaloisLattice) -> Self {
        let group = lattice.group();
        InputDocument {
            group: GroupDoc {
                order: group.order().to_string(),
                mult_table: group.table().iter().map(|row| indices(row)).collect(),
            },
            lattice: LatticeDoc {
                rank: lattice.rank().to_string(),
                action: lattice
                    .actions()
                    .iter()
                    .map(|m| m.row_vecs().iter().map(|r| ints(r)).collect())
                    .collect(),
            },
            inertia: None,
            frobenius: None,
            residue_q: None,
            global: None,
        }
    }

    pub fn from_local(data: &LocalTorusData) -> Self {
        let mut doc = Self::from_lattice(data.lattice());
        doc.inertia = Some(indices(data.inertia().elements()));
        doc.frobenius = Some(data.frobenius().to_string());
        doc.residue_q = Some(data.residue_q().to_string());
        doc
    }

    pub fn with_global(mut self, spec: &GlobalTorusSpec) -> Self {
        let (case, q, genus, discriminant) = match spec.field() {
            GlobalField::Function { q, genus } => ("F", Some(q.to_string()), Some(genus.to_string()), None),
            GlobalField::Number { discriminant } => ("N", None, None, Some(discriminant.to_string())),
        };
        self.global = Some(GlobalDoc {
            case: case.into(),
            q,
            genus,
            discriminant,
            places: spec
                .places()
                .iter()
                .map(|p| PlaceDoc {
                    label: p.label.clone(),
                    decomposition: indices(p.decomposition.elements()),
                    inertia: indices(p.inertia.elements()),
                    frobenius: p.frobenius.to_string(),
                    residue_q: p.residue_q.to_string(),
                })
                .collect(),
        });
        self
    }

    pub fn group(&self) -> Result<FiniteGroup, InputError> {
        let order = index("group.order", &self.group.order)?;
        let table = &self.group.mult_table;
        if table.len() != order {
            return Err(InputError::field(
                "group.mult_table",
                format!("has {} rows but the order is {order}", table.len()),
            ));
        }
        let table = table
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, s)| index(&format!("group.mult_table[{i}][{j}]"), s))
                    .collect()
            })
            .collect::<Result<Vec<Vec<usize>>, _>>()?;
        FiniteGroup::new(table).map_err(InputError::invalid("group.mult_table"))
    }

    pub fn lattice(&self) -> Result<GaloisLattice, InputError> {
        let group = self.group()?;
        let rank = index("lattice.rank", &self.lattice.rank)?;
        let mut action = Vec::with_capacity(self.lattice.action.len());
        for (g, m) in self.lattice.action.iter().enumerate() {
            let field = format!("lattice.action[{g}]");
            if m.len() != rank || m.iter().any(|row| row.len() != rank) {
                return Err(InputError::field(field, format!("is not a {rank}×{rank} matrix")));
            }
            let mut data = Vec::with_capacity(rank * rank);
            for (i, row) in m.iter().enumerate() {
                for (j, s) in row.iter().enumerate() {
                    data.push(int(&format!("{field}[{i}][{j}]"), s)?);
                }
            }
            action.push(IntMatrix::from_vec(rank, rank, data));
        }
        GaloisLattice::new(group, rank, action).map_err(InputError::invalid("lattice.action"))
    }

    pub fn has_local_data(&self) -> bool {
        self.inertia.is_some()
    }

    pub fn local_data(&self) -> Result<LocalTorusData, InputError> {
        let lattice = self.lattice()?;
        let missing = |f: &str| InputError::field(f, "missing (required in local mode)");
        let inertia = subgroup(
            "inertia",
            lattice.group(),
            self.inertia.as_ref().ok_or_else(|| missing("inertia"))?,
        )?;
        let frobenius = index("frobenius", self.frobenius.as_ref().ok_or_else(|| missing("frobenius"))?)?;
        let q = int("residue_q", self.residue_q.as_ref().ok_or_else(|| missing("residue_q"))?)?;
        LocalTorusData::new(lattice, inertia, frobenius, q).map_err(InputError::invalid("inertia/frobenius/residue_q"))
    }

    pub fn global_spec(&self) -> Result<GlobalTorusSpec, InputError> {
        let lattice = self.lattice()?;
        let doc = self
            .global
            .as_ref()
            .ok_or_else(|| InputError::field("global", "missing (required in global mode)"))?;
        let field = match doc.case.as_str() {
            "F" => {
                let q = doc.q.as_ref().ok_or_else(|| InputError::field("global.q", "missing in case F"))?;
                let genus = doc
                    .genus
                    .as_ref()
                    .ok_or_else(|| InputError::field("global.genus", "missing in case F"))?;
                let genus = int("global.genus", genus)?
                    .to_u64()
                    .ok_or_else(|| InputError::field("global.genus", "must be a non-negative integer"))?;
                GlobalField::Function {
                    q: int("global.q", q)?,
                    genus,
                }
            }
            "N" => {
                let d = doc
                    .discriminant
                    .as_ref()
                    .ok_or_else(|| InputError::field("global.discriminant", "missing in case N"))?;
                GlobalField::Number {
                    discriminant: int("global.discriminant", d)?,
                }
            }
            other => {
                return Err(InputError::field(
                    "global.case",
                    format!("`{other}` is neither \"F\" nor \"N\""),
                ))
            }
        };
        let mut places = Vec::with_capacity(doc.places.len());
        for (i, p) in doc.places.iter().enumerate() {
            let at = |f: &str| format!("global.places[{i}].{f}");
            places.push(PlaceData {
                label: p.label.clone(),
                decomposition: subgroup(&at("decomposition"), lattice.group(), &p.decomposition)?,
                inertia: subgroup(&at("inertia"), lattice.group(), &p.inertia)?,
                frobenius: index(&at("frobenius"), &p.frobenius)?,
                residue_q: int(&at("residue_q"), &p.residue_q)?,
            });
        }
        GlobalTorusSpec::new(field, lattice, places).map_err(InputError::invalid("global"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{cyclic_group, norm_one_torus};

    fn sample() -> LocalTorusData {
        let g = cyclic_group(4);
        let t = norm_one_torus(&g, 1).unwrap();
        LocalTorusData::new(t, g.whole(), 0, BigInt::from(3)).unwrap()
    }

    #[test]
    fn local_round_trip() {
        let data = sample();
        let text = InputDocument::from_local(&data).to_json();
        assert!(text.contains("\"mult_table\""));
        assert!(!text.contains(": 3"), "integers must be strings");
        let back = InputDocument::from_json(&text).unwrap().local_data().unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn global_round_trip() {
        let data = sample();
        let place = PlaceData {
            label: "p".into(),
            decomposition: data.lattice().group().whole(),
            inertia: data.inertia().clone(),
            frobenius: 1,
            residue_q: BigInt::from(3),
        };
        let field = GlobalField::Function { q: BigInt::from(3), genus: 0 };
        let spec = GlobalTorusSpec::new(field, data.lattice().clone(), vec![place]).unwrap();
        let doc = InputDocument::from_lattice(data.lattice()).with_global(&spec);
        let back = InputDocument::from_json(&doc.to_json()).unwrap().global_spec().unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn errors_name_fields() {
        let mut doc = InputDocument::from_local(&sample());
        doc.group.mult_table[1][2] = "x".into();
        let err = doc.local_data().unwrap_err().to_string();
        assert!(err.contains("group.mult_table[1][2]"), "{err}");

        let mut doc = InputDocument::from_local(&sample());
        doc.group.mult_table[1][2] = "1".into();
        assert!(doc.local_data().unwrap_err().to_string().contains("group.mult_table"));

        let mut doc = InputDocument::from_local(&sample());
        doc.frobenius = None;
        assert!(doc.local_data().unwrap_err().to_string().contains("frobenius"));

        let mut doc = InputDocument::from_local(&sample());
        doc.lattice.action[1][0][0] = "7".into();
        assert!(doc.local_data().unwrap_err().to_string().contains("lattice.action"));

        let doc = InputDocument::from_local(&sample());
        assert!(doc.global_spec().unwrap_err().to_string().contains("`global`"));
    }

    #[test]
    fn syntax_errors_are_positioned() {
        let err = InputDocument::from_json("{\n  \"group\": 3\n}").unwrap_err();
        assert!(matches!(err, InputError::Syntax { line: 2, .. }), "{err}");
        let err = InputDocument::from_json("{\"group\": {\"order\": 1}}").unwrap_err();
        assert!(matches!(err, InputError::Syntax { .. }));
        assert!(int("x", "12a").is_err());
        assert!(int("x", "+3").is_err());
        assert_eq!(int("x", "-12").unwrap(), BigInt::from(-12));
        assert!(index("x", "-1").is_err());
    }
}
