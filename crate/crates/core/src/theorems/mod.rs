//! One executable checker per statement: each consumes an instance, runs
//! the inequality with witnesses where asserted, and emits a `CheckReport`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::numerics::{ComplexMatrix, Tolerance};

mod checks;
mod examples;
mod falsify;
mod pmap;
mod runner;

pub use checks::{
    check_cor2_3, check_davis, check_lemma3_4, check_lemma3_7, check_prop2_5, check_prop3_10,
    check_prop3_11, check_prop3_2, check_prop3_8, check_prop4_1, check_question2_6,
    check_question3_12, check_remark3_1, check_star_section3, check_thm1_1, check_thm2_2_column,
    check_thm2_2_contraction, check_thm3_5, check_thm3_9, ConvexityVariant, Cor23Variant,
    Q312Part,
};
pub use examples::{
    example_2_4_pair, example_3_3_instance, example_3_6_instance, repro_example_2_4,
    repro_example_3_3, repro_example_3_6,
};
pub use falsify::{falsify, FalsifyOutcome};
pub use pmap::{pmap_report, scalar_pmap_oracle, study_pmap, PmapTrajectory};
pub use runner::{default_p_grid, run_generated};

/// Statements of the catalog, one per theorem, example and open question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[allow(non_camel_case_types)]
pub enum StatementId {
    Thm1_1,
    Davis1,
    Thm1_2,
    Thm2_2Contraction,
    Thm2_2Column,
    Cor2_3Bk,
    Cor2_3Hp,
    Prop2_5,
    Ex2_4,
    Remark3_1,
    Prop3_2,
    Ex3_3,
    Lemma3_4,
    Thm3_5,
    Ex3_6,
    Lemma3_7,
    Prop3_8,
    Thm3_9,
    Prop3_10,
    Prop3_11,
    Prop4_1,
    StarSection3,
    Question2_6,
    Question3_12,
}

const STATEMENT_NAMES: &[(StatementId, &str)] = &[
    (StatementId::Thm1_1, "thm1_1"),
    (StatementId::Davis1, "davis_1"),
    (StatementId::Thm1_2, "thm1_2"),
    (StatementId::Thm2_2Contraction, "thm2_2_contraction"),
    (StatementId::Thm2_2Column, "thm2_2_column"),
    (StatementId::Cor2_3Bk, "cor2_3_bk"),
    (StatementId::Cor2_3Hp, "cor2_3_hp"),
    (StatementId::Prop2_5, "prop2_5"),
    (StatementId::Ex2_4, "ex2_4"),
    (StatementId::Remark3_1, "remark3_1"),
    (StatementId::Prop3_2, "prop3_2"),
    (StatementId::Ex3_3, "ex3_3"),
    (StatementId::Lemma3_4, "lemma3_4"),
    (StatementId::Thm3_5, "thm3_5"),
    (StatementId::Ex3_6, "ex3_6"),
    (StatementId::Lemma3_7, "lemma3_7"),
    (StatementId::Prop3_8, "prop3_8"),
    (StatementId::Thm3_9, "thm3_9"),
    (StatementId::Prop3_10, "prop3_10"),
    (StatementId::Prop3_11, "prop3_11"),
    (StatementId::Prop4_1, "prop4_1"),
    (StatementId::StarSection3, "star_section3"),
    (StatementId::Question2_6, "question2_6"),
    (StatementId::Question3_12, "question3_12"),
];

impl StatementId {
    pub fn name(&self) -> &'static str {
        STATEMENT_NAMES.iter().find(|(id, _)| id == self).unwrap().1
    }

    pub fn all() -> impl Iterator<Item = StatementId> {
        STATEMENT_NAMES.iter().map(|(id, _)| *id)
    }

    /// What a verdict on a valid instance is expected to look like.
    pub fn expectation(&self) -> Expectation {
        use StatementId::*;
        match self {
            Ex2_4 | Ex3_3 | Ex3_6 | StarSection3 => Expectation::Counterexample,
            Question2_6 | Question3_12 => Expectation::Open,
            _ => Expectation::Theorem,
        }
    }
}

impl fmt::Display for StatementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatementId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        STATEMENT_NAMES
            .iter()
            .find(|(_, name)| *name == s)
            .map(|(id, _)| *id)
            .ok_or_else(|| Error::UnknownStatement(s.to_string()))
    }
}

impl Serialize for StatementId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for StatementId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        StatementId::from_str(&s).map_err(serde::de::Error::custom)
    }
}

/// Expected verdict class for a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    /// Proven inequality: valid instances must hold.
    Theorem,
    /// Named counterexample or falsified statement: must fail.
    Counterexample,
    /// Open question: either outcome is recorded, neither proves anything.
    Open,
}

/// Whether hypothesis profiles gate the run. `Falsify` skips the profile
/// gates so known-bad functions can be driven through a checker to exhibit
/// the failure; structural preconditions (shapes, operator classes) still
/// apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HypothesisMode {
    Enforce,
    Falsify,
}

/// Structured verdict of a theorem checker.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub statement_id: StatementId,
    pub holds: bool,
    pub margins: BTreeMap<String, f64>,
    pub witnesses: Vec<ComplexMatrix>,
    pub instance: serde_json::Value,
    pub tolerance: Tolerance,
    pub notes: String,
}

impl CheckReport {
    pub fn new(statement_id: StatementId, tolerance: Tolerance) -> Self {
        CheckReport {
            statement_id,
            holds: false,
            margins: BTreeMap::new(),
            witnesses: Vec::new(),
            instance: serde_json::Value::Null,
            tolerance,
            notes: String::new(),
        }
    }

    pub fn worst_margin(&self) -> f64 {
        self.margins.values().copied().fold(f64::INFINITY, f64::min)
    }
}
