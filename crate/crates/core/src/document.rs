//! Text formats read and written by the command-line tool.
//!
//! All documents are JSON with integer point indices. Subsets are arrays of
//! point indices and collections are arrays of subsets. The canonical form
//! sorts each subset ascending, orders subsets by bit-pattern value and drops
//! duplicates; [`SpaceDocument::to_text`] and friends always write canonical
//! form, so `parse` followed by `to_text` is the identity on canonical text.
//!
//! ```text
//! {
//!   "points": 3,
//!   "nu": {
//!     "0": [[0, 1], [0, 1, 2]],
//!     "1": [[1]],
//!     "2": []
//!   }
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::categories::{Cone, Leg};
use crate::coincidence::FiniteFunction;
use crate::setalgebra::{SubsetCollection, SubsetMask, Universe};
use crate::spaces::{CenteredSpace, EventuallyPeriodicSequence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocumentError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
}

impl DocumentError {
    fn invalid(path: impl Into<String>, message: impl fmt::Display) -> Self {
        DocumentError::Invalid {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

impl From<serde_json::Error> for DocumentError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde_json appends " at line L column C"; keep only the message
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        DocumentError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

pub type DocResult<T> = std::result::Result<T, DocumentError>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    points: usize,
    nu: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCollection {
    points: usize,
    collection: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSequence {
    #[serde(default)]
    prefix: Vec<usize>,
    cycle: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLeg {
    space: RawSpace,
    map: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    points: usize,
    legs: Vec<RawLeg>,
}

fn universe_at(path: &str, points: usize) -> DocResult<Universe> {
    Universe::new(points).map_err(|e| DocumentError::invalid(format!("{path}points"), e))
}

fn canonical_sets(
    path: &str,
    universe: Universe,
    sets: &[Vec<usize>],
) -> DocResult<Vec<Vec<usize>>> {
    let mut masks = Vec::with_capacity(sets.len());
    for (i, set) in sets.iter().enumerate() {
        let mask = SubsetMask::from_points(universe, set)
            .map_err(|e| DocumentError::invalid(format!("{path}[{i}]"), e))?;
        masks.push(mask);
    }
    let collection = SubsetCollection::new(universe, masks).expect("masks validated");
    Ok(collection.to_point_sets())
}

fn space_from_raw(path: &str, raw: RawSpace) -> DocResult<SpaceDocument> {
    let universe = universe_at(path, raw.points)?;
    let mut nu = vec![Vec::new(); raw.points];
    for (key, sets) in &raw.nu {
        let point: usize = key
            .parse()
            .ok()
            .filter(|k: &usize| key == &k.to_string())
            .ok_or_else(|| {
                DocumentError::invalid(
                    format!("{path}nu"),
                    format!("key `{key}` is not a point index"),
                )
            })?;
        if point >= raw.points {
            return Err(DocumentError::invalid(
                format!("{path}nu"),
                format!("key `{key}` is outside a universe of {} points", raw.points),
            ));
        }
        nu[point] = canonical_sets(&format!("{path}nu.{key}"), universe, sets)?;
    }
    Ok(SpaceDocument {
        points: raw.points,
        nu,
    })
}

fn write_sets(out: &mut String, sets: &[Vec<usize>]) {
    out.push('[');
    for (i, set) in sets.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        write_points(out, set);
    }
    out.push(']');
}

fn write_points(out: &mut String, points: &[usize]) {
    out.push('[');
    for (i, p) in points.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{p}");
    }
    out.push(']');
}

/// A centered structure on `points` points; `nu[x]` lists the probe sets at `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDocument {
    pub points: usize,
    pub nu: Vec<Vec<Vec<usize>>>,
}

impl SpaceDocument {
    /// Parses and canonicalizes. Points missing from `nu` get no probes.
    pub fn parse(text: &str) -> DocResult<Self> {
        let raw: RawSpace = serde_json::from_str(text)?;
        space_from_raw("", raw)
    }

    pub fn from_space(space: &CenteredSpace) -> Self {
        SpaceDocument {
            points: space.universe().size(),
            nu: space
                .structure()
                .iter()
                .map(|p| p.to_point_sets())
                .collect(),
        }
    }

    /// The assignment without the centering check; see
    /// [`crate::spaces::validate_space`].
    pub fn to_space(&self) -> DocResult<CenteredSpace> {
        let universe = universe_at("", self.points)?;
        let nu = self
            .nu
            .iter()
            .enumerate()
            .map(|(x, sets)| {
                SubsetCollection::from_point_sets(universe, sets)
                    .map_err(|e| DocumentError::invalid(format!("nu.{x}"), e))
            })
            .collect::<DocResult<Vec<_>>>()?;
        CenteredSpace::from_raw(universe, nu).map_err(|e| DocumentError::invalid("nu", e))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_into(&mut out, "");
        out.push('\n');
        out
    }

    fn write_into(&self, out: &mut String, indent: &str) {
        let _ = write!(
            out,
            "{{\n{indent}  \"points\": {},\n{indent}  \"nu\": {{",
            self.points
        );
        for (x, sets) in self.nu.iter().enumerate() {
            let _ = write!(out, "\n{indent}    \"{x}\": ");
            write_sets(out, sets);
            if x + 1 < self.nu.len() {
                out.push(',');
            }
        }
        let _ = write!(out, "\n{indent}  }}\n{indent}}}");
    }
}

/// A single collection of subsets of `points` points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollectionDocument {
    pub points: usize,
    pub collection: Vec<Vec<usize>>,
}

impl CollectionDocument {
    pub fn parse(text: &str) -> DocResult<Self> {
        let raw: RawCollection = serde_json::from_str(text)?;
        let universe = universe_at("", raw.points)?;
        Ok(CollectionDocument {
            points: raw.points,
            collection: canonical_sets("collection", universe, &raw.collection)?,
        })
    }

    pub fn from_collection(p: &SubsetCollection) -> Self {
        CollectionDocument {
            points: p.universe().size(),
            collection: p.to_point_sets(),
        }
    }

    pub fn to_collection(&self) -> DocResult<SubsetCollection> {
        let universe = universe_at("", self.points)?;
        SubsetCollection::from_point_sets(universe, &self.collection)
            .map_err(|e| DocumentError::invalid("collection", e))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{{\n  \"points\": {},\n  \"collection\": ", self.points);
        write_sets(&mut out, &self.collection);
        out.push_str("\n}\n");
        out
    }
}

/// Either kind of input accepted by `classify` and `transform`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Space(SpaceDocument),
    Collection(CollectionDocument),
}

impl Document {
    /// Dispatches on the presence of a `nu` or `collection` field.
    pub fn parse(text: &str) -> DocResult<Self> {
        let value: Value = serde_json::from_str(text)?;
        let Value::Object(map) = &value else {
            return Err(DocumentError::invalid("$", "expected an object"));
        };
        match (map.contains_key("nu"), map.contains_key("collection")) {
            (true, false) => Ok(Document::Space(SpaceDocument::parse(text)?)),
            (false, true) => Ok(Document::Collection(CollectionDocument::parse(text)?)),
            _ => Err(DocumentError::invalid(
                "$",
                "expected exactly one of the fields `nu` or `collection`",
            )),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            Document::Space(d) => d.to_text(),
            Document::Collection(d) => d.to_text(),
        }
    }
}

/// `{"prefix": [...], "cycle": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDocument {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl SequenceDocument {
    pub fn parse(text: &str) -> DocResult<Self> {
        let raw: RawSequence = serde_json::from_str(text)?;
        Ok(SequenceDocument {
            prefix: raw.prefix,
            cycle: raw.cycle,
        })
    }

    pub fn to_sequence(&self, universe: Universe) -> DocResult<EventuallyPeriodicSequence> {
        EventuallyPeriodicSequence::new(universe, self.prefix.clone(), self.cycle.clone())
            .map_err(|e| DocumentError::invalid("sequence", e))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n  \"prefix\": ");
        write_points(&mut out, &self.prefix);
        out.push_str(",\n  \"cycle\": ");
        write_points(&mut out, &self.cycle);
        out.push_str("\n}\n");
        out
    }
}

/// A cone: an apex of `points` points and legs `{"space": ..., "map": [...]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeDocument {
    pub points: usize,
    pub legs: Vec<(SpaceDocument, Vec<usize>)>,
}

impl ConeDocument {
    pub fn parse(text: &str) -> DocResult<Self> {
        let raw: RawCone = serde_json::from_str(text)?;
        universe_at("", raw.points)?;
        let legs = raw
            .legs
            .into_iter()
            .enumerate()
            .map(|(i, leg)| {
                Ok((
                    space_from_raw(&format!("legs[{i}].space."), leg.space)?,
                    leg.map,
                ))
            })
            .collect::<DocResult<Vec<_>>>()?;
        Ok(ConeDocument {
            points: raw.points,
            legs,
        })
    }

    /// Leg spaces must satisfy the centering condition.
    pub fn to_cone(&self) -> DocResult<Cone> {
        let apex = universe_at("", self.points)?;
        let mut legs = Vec::with_capacity(self.legs.len());
        for (i, (space, map)) in self.legs.iter().enumerate() {
            let space = space.to_space()?;
            crate::spaces::validate_space(&space)
                .map_err(|e| DocumentError::invalid(format!("legs[{i}].space"), e))?;
            let map = FiniteFunction::new(apex, space.universe(), map.clone())
                .map_err(|e| DocumentError::invalid(format!("legs[{i}].map"), e))?;
            legs.push(Leg { space, map });
        }
        Cone::new(apex, legs).map_err(|e| DocumentError::invalid("legs", e))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{{\n  \"points\": {},\n  \"legs\": [", self.points);
        for (i, (space, map)) in self.legs.iter().enumerate() {
            out.push_str(if i == 0 {
                "\n    {\n      \"space\": "
            } else {
                ",\n    {\n      \"space\": "
            });
            space.write_into(&mut out, "      ");
            out.push_str(",\n      \"map\": ");
            write_points(&mut out, map);
            out.push_str("\n    }");
        }
        if !self.legs.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RASTER: &str = "{\n  \"points\": 3,\n  \"collection\": [[0, 1], [1, 2], [0, 1, 2]]\n}\n";

    #[test]
    fn collection_round_trip() {
        let doc = CollectionDocument::parse(RASTER).unwrap();
        assert_eq!(doc.to_text(), RASTER);
        let messy = r#"{"collection": [[2,1,0],[1,0],[2,1],[0,1]], "points": 3}"#;
        assert_eq!(CollectionDocument::parse(messy).unwrap().to_text(), RASTER);
    }

    #[test]
    fn space_round_trip() {
        let text =
            "{\n  \"points\": 2,\n  \"nu\": {\n    \"0\": [[0], [0, 1]],\n    \"1\": []\n  }\n}\n";
        let doc = SpaceDocument::parse(text).unwrap();
        assert_eq!(doc.to_text(), text);
        let sparse = r#"{"points": 2, "nu": {"0": [[1,0],[0]]}}"#;
        assert_eq!(SpaceDocument::parse(sparse).unwrap().to_text(), text);
        let space = doc.to_space().unwrap();
        assert_eq!(SpaceDocument::from_space(&space), doc);
    }

    #[test]
    fn errors_have_positions() {
        match CollectionDocument::parse("{\n  \"points\": 3,\n  \"collection\": [[0,]\n}") {
            Err(DocumentError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        let out_of_range = r#"{"points": 2, "collection": [[0, 2]]}"#;
        assert!(matches!(
            CollectionDocument::parse(out_of_range),
            Err(DocumentError::Invalid { path, .. }) if path == "collection[0]"
        ));
        let bad_key = r#"{"points": 2, "nu": {"01": [[1]]}}"#;
        assert!(SpaceDocument::parse(bad_key).is_err());
        assert!(SpaceDocument::parse(r#"{"points": 0, "nu": {}}"#).is_err());
        assert!(Document::parse(r#"{"points": 1}"#).is_err());
    }

    #[test]
    fn document_dispatch() {
        assert!(matches!(
            Document::parse(RASTER).unwrap(),
            Document::Collection(_)
        ));
        assert!(matches!(
            Document::parse(r#"{"points": 1, "nu": {"0": [[0]]}}"#).unwrap(),
            Document::Space(_)
        ));
    }

    #[test]
    fn cone_round_trip() {
        let text = r#"{"points": 2, "legs": [{"space": {"points": 1, "nu": {"0": [[0]]}}, "map": [0, 0]}]}"#;
        let doc = ConeDocument::parse(text).unwrap();
        let canonical = doc.to_text();
        assert_eq!(ConeDocument::parse(&canonical).unwrap(), doc);
        assert_eq!(
            ConeDocument::parse(&canonical).unwrap().to_text(),
            canonical
        );
        let cone = doc.to_cone().unwrap();
        assert_eq!(cone.legs().len(), 1);
        let empty = ConeDocument::parse(r#"{"points": 2, "legs": []}"#).unwrap();
        assert_eq!(ConeDocument::parse(&empty.to_text()).unwrap(), empty);
    }

    #[test]
    fn sequence_round_trip() {
        let text = "{\n  \"prefix\": [2],\n  \"cycle\": [0, 1]\n}\n";
        let doc = SequenceDocument::parse(text).unwrap();
        assert_eq!(doc.to_text(), text);
        assert!(doc.to_sequence(Universe::new(2).unwrap()).is_err());
        assert!(SequenceDocument::parse(r#"{"cycle": []}"#)
            .unwrap()
            .to_sequence(Universe::new(2).unwrap())
            .is_err());
    }
}
