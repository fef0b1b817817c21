//! File formats: `.hg` hypergraphs, `.w` weights, `.cfg` configurations and
//! `.cert` certificates, all as JSON documents with exact scalars as text.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{ConfigKind, JointsConfiguration};
use crate::error::{Error, Result};
use crate::extremal::SimpleHypergraph;
use crate::field::Field;
use crate::flat::Flat;
use crate::hypergraph::{members, Hypergraph, WeightFunction};
use crate::rational::{format_rational, parse_rational};
use crate::vanishing::KeyInequalityCertificate;

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

pub fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// `{d, edges, colors}`. Hosts use the same shape with `d` as the vertex count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypergraphFile {
    pub d: usize,
    pub edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<usize>>,
}

impl HypergraphFile {
    pub fn from_hypergraph(h: &Hypergraph) -> Self {
        Self {
            d: h.d(),
            edges: (0..h.num_edges()).map(|e| members(h.edge(e)).collect()).collect(),
            colors: Some(h.colors().to_vec()),
        }
    }

    pub fn from_host(g: &SimpleHypergraph) -> Self {
        Self { d: g.vertices(), edges: g.edges().iter().map(|&e| members(e).collect()).collect(), colors: None }
    }

    pub fn to_hypergraph(&self) -> Result<Hypergraph> {
        Hypergraph::new(self.d, &self.edges, self.colors.as_deref())
    }

    pub fn to_host(&self) -> Result<SimpleHypergraph> {
        SimpleHypergraph::from_lists(self.d, &self.edges)
    }
}

pub fn parse_hypergraph(text: &str) -> Result<Hypergraph> {
    serde_json::from_str::<HypergraphFile>(text).map_err(parse_err)?.to_hypergraph()
}

pub fn parse_host(text: &str) -> Result<SimpleHypergraph> {
    serde_json::from_str::<HypergraphFile>(text).map_err(parse_err)?.to_host()
}

pub fn hypergraph_to_text(h: &Hypergraph) -> String {
    serde_json::to_string_pretty(&HypergraphFile::from_hypergraph(h)).expect("serializes")
}

pub fn host_to_text(g: &SimpleHypergraph) -> String {
    serde_json::to_string_pretty(&HypergraphFile::from_host(g)).expect("serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightsFile {
    pub weights: Vec<String>,
}

pub fn parse_weights(text: &str) -> Result<WeightFunction> {
    let f: WeightsFile = serde_json::from_str(text).map_err(parse_err)?;
    WeightFunction::new(f.weights.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?)
}

pub fn weights_to_text(w: &WeightFunction) -> String {
    serde_json::to_string_pretty(&WeightsFile { weights: w.weights().iter().map(format_rational).collect() })
        .expect("serializes")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatFile {
    pub basepoint: Vec<String>,
    pub directions: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigFile {
    pub field: String,
    pub d: usize,
    pub kind: String,
    pub families: Vec<Vec<FlatFile>>,
    pub joints: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_labels: Option<Vec<Vec<u64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub joint_labels: Option<Vec<u64>>,
}

fn texts<S: Field>(v: &[S]) -> Vec<String> {
    v.iter().map(Field::to_text).collect()
}

fn scalars<S: Field>(v: &[String]) -> Result<Vec<S>> {
    v.iter().map(|s| S::from_text(s)).collect()
}

impl ConfigFile {
    pub fn from_config<S: Field>(c: &JointsConfiguration<S>) -> Self {
        Self {
            field: S::name().into(),
            d: c.d,
            kind: c.kind.as_str().into(),
            families: c
                .families
                .iter()
                .map(|fam| {
                    fam.iter()
                        .map(|f| FlatFile { basepoint: texts(f.basepoint()), directions: f.directions().iter().map(|r| texts(r)).collect() })
                        .collect()
                })
                .collect(),
            joints: c.joints.iter().map(|p| texts(p)).collect(),
            flat_labels: c.flat_labels.clone(),
            joint_labels: c.joint_labels.clone(),
        }
    }

    pub fn to_config<S: Field>(&self) -> Result<JointsConfiguration<S>> {
        if self.field != S::name() {
            return Err(Error::Parse(format!("configuration is over {}, expected {}", self.field, S::name())));
        }
        let mut families = Vec::with_capacity(self.families.len());
        for fam in &self.families {
            let mut out = Vec::with_capacity(fam.len());
            for f in fam {
                let b: Vec<S> = scalars(&f.basepoint)?;
                if b.len() != self.d || f.directions.iter().any(|r| r.len() != self.d) {
                    return Err(Error::Parse("flat coordinates do not match d".into()));
                }
                let dirs = f.directions.iter().map(|r| scalars(r)).collect::<Result<Vec<_>>>()?;
                out.push(Flat::new(b, dirs));
            }
            families.push(out);
        }
        let joints = self.joints.iter().map(|p| scalars(p)).collect::<Result<Vec<Vec<S>>>>()?;
        if joints.iter().any(|p| p.len() != self.d) {
            return Err(Error::Parse("joint coordinates do not match d".into()));
        }
        Ok(JointsConfiguration {
            d: self.d,
            kind: ConfigKind::parse(&self.kind)?,
            families,
            joints,
            flat_labels: self.flat_labels.clone(),
            joint_labels: self.joint_labels.clone(),
        })
    }
}

pub fn parse_config_file(text: &str) -> Result<ConfigFile> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn config_to_text<S: Field>(c: &JointsConfiguration<S>) -> String {
    serde_json::to_string_pretty(&ConfigFile::from_config(c)).expect("serializes")
}

pub fn parse_certificate(text: &str) -> Result<KeyInequalityCertificate> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn certificate_to_text(c: &KeyInequalityCertificate) -> String {
    serde_json::to_string_pretty(c).expect("serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{generic_hyperplanes, generically_induced};
    use crate::field::Gf61;
    use crate::rational::{ratio, Rational};

    #[test]
    fn hypergraph_and_weights_round_trip() {
        let h = Hypergraph::new(3, &[vec![1, 2], vec![1, 3], vec![2, 3]], Some(&[1, 2, 2])).unwrap();
        assert_eq!(parse_hypergraph(&hypergraph_to_text(&h)).unwrap(), h);
        let w = WeightFunction::new(vec![ratio(1, 2), ratio(3, 4), ratio(0, 1)]).unwrap();
        assert_eq!(parse_weights(&weights_to_text(&w)).unwrap().weights(), w.weights());
        assert!(parse_weights(r#"{"weights": ["-1/2"]}"#).is_err());
        let host = SimpleHypergraph::complete(4, 2);
        assert_eq!(parse_host(&host_to_text(&host)).unwrap(), host);
    }

    #[test]
    fn configuration_round_trip() {
        let h = Hypergraph::complete_codim1(3);
        let host = SimpleHypergraph::complete(4, 2);
        let fam = generic_hyperplanes::<Rational>(4, 3, 1).unwrap();
        let cfg = generically_induced(&host, &h, &fam).unwrap();
        let text = config_to_text(&cfg);
        let back: JointsConfiguration<Rational> = parse_config_file(&text).unwrap().to_config().unwrap();
        assert_eq!(back, cfg);
        assert!(parse_config_file(&text).unwrap().to_config::<Gf61>().is_err());
    }
}
