use serde::{Deserialize, Serialize};

use super::WeightedGraph;
use crate::error::{Error, Result};
use crate::matrix::{parse_rational, Rational};

/// One edge `[i, j, "p/q"]`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson(pub usize, pub usize, pub WeightText);

/// Edge weights are written as exact strings; bare integers are accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightText {
    Text(String),
    Int(i64),
}

impl WeightText {
    fn value(&self) -> Result<Rational> {
        match self {
            WeightText::Text(s) => parse_rational(s),
            WeightText::Int(i) => Ok(crate::matrix::rational(*i)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<EdgeJson>,
}

impl From<&WeightedGraph> for GraphJson {
    fn from(g: &WeightedGraph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g
                .edges()
                .into_iter()
                .map(|(i, j, w)| EdgeJson(i + 1, j + 1, WeightText::Text(w.to_string())))
                .collect(),
        }
    }
}

impl TryFrom<&GraphJson> for WeightedGraph {
    type Error = Error;

    fn try_from(j: &GraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for EdgeJson(a, b, w) in &j.edges {
            if *a == 0 || *b == 0 {
                return Err(Error::parse("graph JSON vertices are 1-based"));
            }
            edges.push((a - 1, b - 1, w.value()?));
        }
        WeightedGraph::from_edges(j.n, edges)
    }
}

impl WeightedGraph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph JSON serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: GraphJson = serde_json::from_str(s).map_err(|e| Error::parse(format!("graph JSON: {e}")))?;
        WeightedGraph::try_from(&j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ratio;

    #[test]
    fn round_trip_is_canonical() {
        let g = WeightedGraph::from_edges(3, [(2, 0, ratio(1, 3)), (0, 1, ratio(2, 1))]).unwrap();
        let s = g.to_json();
        assert_eq!(s, r#"{"n":3,"edges":[[1,2,"2"],[1,3,"1/3"]]}"#);
        assert_eq!(WeightedGraph::from_json(&s).unwrap(), g);
    }

    #[test]
    fn integer_weights_accepted() {
        let g = WeightedGraph::from_json(r#"{"n":2,"edges":[[1,2,1]]}"#).unwrap();
        assert_eq!(g, WeightedGraph::complete(2));
    }

    #[test]
    fn zero_based_rejected() {
        assert!(WeightedGraph::from_json(r#"{"n":2,"edges":[[0,1,"1"]]}"#).is_err());
        assert!(WeightedGraph::from_json(r#"{"n":2,"edges":[[1,2,"x"]]}"#).is_err());
    }
}
