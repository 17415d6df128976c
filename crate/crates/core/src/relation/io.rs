use serde::{Deserialize, Serialize};

use super::{FiniteRelation, Relation, Segment, SegmentRelation, DEFAULT_TOLERANCE};
use crate::error::Result;

/// On-disk form of a relation. Parsing only checks shape; [`RelationFile::build`]
/// checks the constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RelationFile {
    Finite {
        n: usize,
        edges: Vec<[usize; 2]>,
    },
    Segments {
        #[serde(default = "default_tolerance")]
        tolerance: f64,
        segments: Vec<[f64; 4]>,
    },
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl RelationFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn build(&self) -> Result<AnyRelation> {
        match self {
            RelationFile::Finite { n, edges } => Ok(AnyRelation::Finite(FiniteRelation::new(
                *n,
                edges.iter().map(|e| (e[0], e[1])),
            )?)),
            RelationFile::Segments {
                tolerance,
                segments,
            } => {
                let segs = segments
                    .iter()
                    .map(|s| Segment::new(s[0], s[1], s[2], s[3]))
                    .collect::<Result<Vec<_>>>()?;
                Ok(AnyRelation::Segments(SegmentRelation::new(
                    segs, *tolerance,
                )?))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("relation files always serialize")
    }
}

/// A relation on either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyRelation {
    Finite(FiniteRelation),
    Segments(SegmentRelation),
}

impl AnyRelation {
    pub fn from_json(text: &str) -> Result<Self> {
        RelationFile::parse(text)?.build()
    }

    pub fn to_file(&self) -> RelationFile {
        match self {
            AnyRelation::Finite(g) => g.into(),
            AnyRelation::Segments(g) => g.into(),
        }
    }

    pub fn to_json(&self) -> String {
        self.to_file().to_json()
    }

    pub fn inverse(&self) -> AnyRelation {
        match self {
            AnyRelation::Finite(g) => AnyRelation::Finite(g.inverse()),
            AnyRelation::Segments(g) => AnyRelation::Segments(g.inverse()),
        }
    }
}

impl Serialize for AnyRelation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

impl From<&FiniteRelation> for RelationFile {
    fn from(g: &FiniteRelation) -> Self {
        RelationFile::Finite {
            n: g.size(),
            edges: g.edges().map(|(x, y)| [x, y]).collect(),
        }
    }
}

impl From<&SegmentRelation> for RelationFile {
    fn from(g: &SegmentRelation) -> Self {
        RelationFile::Segments {
            tolerance: g.tolerance(),
            segments: g.segments().iter().map(Segment::as_array).collect(),
        }
    }
}

impl From<FiniteRelation> for AnyRelation {
    fn from(g: FiniteRelation) -> Self {
        AnyRelation::Finite(g)
    }
}

impl From<SegmentRelation> for AnyRelation {
    fn from(g: SegmentRelation) -> Self {
        AnyRelation::Segments(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn finite_round_trip_is_byte_exact() {
        let text = r#"{"type":"finite","n":3,"edges":[[0,1],[1,2],[2,0]]}"#;
        let g = AnyRelation::from_json(text).unwrap();
        assert_eq!(g.to_json(), text);
    }

    #[test]
    fn segment_round_trip_is_byte_exact() {
        let lam = (5f64.sqrt() - 1.0) / 2.0;
        let g = SegmentRelation::from_segments(vec![
            Segment::new(0.0, lam, 1.0 - lam, 1.0).unwrap(),
            Segment::new(1.0 - lam, 0.0, 1.0, lam).unwrap(),
        ])
        .unwrap();
        let text = AnyRelation::from(g.clone()).to_json();
        assert_eq!(
            AnyRelation::from_json(&text).unwrap(),
            AnyRelation::Segments(g)
        );
        assert!(text.starts_with(
            r#"{"type":"segments","tolerance":1e-9,"segments":[[0.0,0.6180339887498949"#
        ));
    }

    #[test]
    fn shape_and_constraint_errors_are_distinct() {
        assert!(AnyRelation::from_json(r#"{"type":"finite","n":3}"#)
            .unwrap_err()
            .is_parse());
        assert!(AnyRelation::from_json("[1,2").unwrap_err().is_parse());
        assert!(matches!(
            AnyRelation::from_json(r#"{"type":"finite","n":2,"edges":[[0,2]]}"#),
            Err(Error::PointOutOfRange { point: 2, n: 2 })
        ));
        assert!(matches!(
            AnyRelation::from_json(r#"{"type":"finite","n":2,"edges":[]}"#),
            Err(Error::EmptyRelation)
        ));
        assert!(matches!(
            AnyRelation::from_json(r#"{"type":"segments","segments":[[0,0,1.5,1]]}"#),
            Err(Error::CoordinateOutOfRange(_))
        ));
    }

    #[test]
    fn tolerance_defaults_when_omitted() {
        let g = AnyRelation::from_json(r#"{"type":"segments","segments":[[0,0,1,1]]}"#).unwrap();
        let AnyRelation::Segments(g) = g else {
            panic!()
        };
        assert_eq!(g.tolerance(), DEFAULT_TOLERANCE);
    }
}
