//! CSV trajectories and JSON black-box documents.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::blackbox::{LinRelation, SteadyTuple, STEADY_TOL};
use crate::dynamics::{OpenDynam, Trajectory};
use crate::error::{Error, Result};
use crate::rational::parse_rational;

/// Header `t,<species…>`, then one row per step. Numbers use 17 significant
/// digits in scientific notation, so output does not depend on locale.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t");
    for s in traj.species.iter() {
        out.push(',');
        out.push_str(s);
    }
    out.push('\n');
    for (t, c) in &traj.rows {
        write!(out, "{t:.16e}").unwrap();
        for x in c {
            write!(out, ",{x:.16e}").unwrap();
        }
        out.push('\n');
    }
    out
}

/// Sampled points of a black-box relation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TupleDocument {
    pub system: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub tuples: Vec<SteadyTuple>,
    pub tolerance: f64,
}

impl TupleDocument {
    pub fn new(system: &str, sys: &OpenDynam, tuples: Vec<SteadyTuple>) -> Self {
        TupleDocument {
            system: system.to_string(),
            inputs: sys.left().labels().to_vec(),
            outputs: sys.right().labels().to_vec(),
            tuples,
            tolerance: STEADY_TOL,
        }
    }
}

/// An exact linear relation; basis entries are rationals written as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDocument {
    pub system: String,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub basis: Vec<Vec<String>>,
}

impl RelationDocument {
    pub fn new(system: &str, sys: &OpenDynam, rel: &LinRelation) -> Self {
        RelationDocument {
            system: system.to_string(),
            inputs: sys.left().labels().to_vec(),
            outputs: sys.right().labels().to_vec(),
            basis: rel.basis_strings(),
        }
    }

    pub fn to_relation(&self) -> Result<LinRelation> {
        let vectors = self
            .basis
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| {
                        parse_rational(x)
                            .ok_or_else(|| Error::InvalidArgument(format!("bad rational `{x}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        LinRelation::new(self.inputs.len(), self.outputs.len(), vectors)
    }
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("malformed JSON: {e}")))
}
