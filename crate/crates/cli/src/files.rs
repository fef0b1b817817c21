//! Reading inputs, plus the instance formats used only by the CLI.

use std::path::Path;

use anyhow::{Context, Result};
use hjoints::config::{AxisInstance, JointsConfiguration};
use hjoints::extremal::SimpleHypergraph;
use hjoints::field::{Field, Gf61};
use hjoints::hypergraph::{Hypergraph, WeightFunction};
use hjoints::io::{self, ConfigFile};
use hjoints::rational::{parse_rational, Rational};
use serde::{Deserialize, Serialize};

/// Raw bytes, kept for the inputs digest.
pub struct Input<T> {
    pub value: T,
    pub bytes: Vec<u8>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> hjoints::Result<T>) -> Result<Input<T>> {
    let text = read(path)?;
    let value = parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Input { value, bytes: text.into_bytes() })
}

pub fn pattern(path: &Path) -> Result<Input<Hypergraph>> {
    load(path, io::parse_hypergraph)
}

pub fn host(path: &Path) -> Result<Input<SimpleHypergraph>> {
    load(path, io::parse_host)
}

pub fn weights(path: &Path) -> Result<Input<WeightFunction>> {
    load(path, io::parse_weights)
}

pub fn certificate(path: &Path) -> Result<Input<hjoints::vanishing::KeyInequalityCertificate>> {
    load(path, io::parse_certificate)
}

pub fn json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Input<T>> {
    let text = read(path)?;
    let value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(Input { value, bytes: text.into_bytes() })
}

/// A configuration over whichever field its file names.
pub enum AnyConfig {
    Gf61(JointsConfiguration<Gf61>),
    Rational(JointsConfiguration<Rational>),
}

pub fn config(path: &Path) -> Result<Input<AnyConfig>> {
    let text = read(path)?;
    let file: ConfigFile = io::parse_config_file(&text).with_context(|| format!("parsing {}", path.display()))?;
    let value = if file.field == Gf61::name() {
        AnyConfig::Gf61(file.to_config()?)
    } else if file.field == Rational::name() {
        AnyConfig::Rational(file.to_config()?)
    } else {
        anyhow::bail!("{}: unknown field {:?}", path.display(), file.field);
    };
    Ok(Input { value, bytes: text.into_bytes() })
}

fn rationals(v: &[String]) -> Result<Vec<Rational>> {
    Ok(v.iter().map(|s| parse_rational(s)).collect::<hjoints::Result<_>>()?)
}

/// `{subsets, weights, atoms, probs}`: a law on `d`-tuples.
#[derive(Debug, Serialize, Deserialize)]
pub struct ShearerInstance {
    pub subsets: Vec<Vec<usize>>,
    pub weights: Vec<String>,
    pub atoms: Vec<Vec<usize>>,
    pub probs: Vec<f64>,
}

impl ShearerInstance {
    pub fn weights(&self) -> Result<Vec<Rational>> {
        rationals(&self.weights)
    }
}

/// `{d, s, subsets, tables, weights}`: nonnegative tables on `S^{I_i}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct HolderInstance {
    pub d: usize,
    pub s: usize,
    pub subsets: Vec<Vec<usize>>,
    pub tables: Vec<Vec<i64>>,
    #[serde(default)]
    pub weights: Vec<String>,
}

impl HolderInstance {
    pub fn axis(&self) -> Result<AxisInstance> {
        for (i, (sub, t)) in self.subsets.iter().zip(&self.tables).enumerate() {
            let want = self.s.pow(sub.len() as u32);
            if t.len() != want {
                anyhow::bail!("table {} has {} entries, expected {want}", i + 1, t.len());
            }
        }
        if self.subsets.len() != self.tables.len() {
            anyhow::bail!("one table per subset");
        }
        Ok(AxisInstance { d: self.d, s: self.s, subsets: self.subsets.clone(), tables: self.tables.clone() })
    }

    pub fn weights(&self) -> Result<Vec<Rational>> {
        rationals(&self.weights)
    }
}

/// `{points, subsets, weights}`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LwInstance {
    pub points: Vec<Vec<usize>>,
    pub subsets: Vec<Vec<usize>>,
    pub weights: Vec<String>,
}

impl LwInstance {
    pub fn weights(&self) -> Result<Vec<Rational>> {
        rationals(&self.weights)
    }
}
