//! Versioned JSON report types shared by the command-line harness.
//!
//! Reports are deterministic: with identical inputs and limits the emitted
//! bytes are identical. Wall-clock timings are therefore opt-in and carried
//! in a separate optional field.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::chartab::CharacterTable;
use crate::cyclo::Cyclotomic;
use crate::group::FiniteGroup;
use crate::monomial::{Classification, HypothesisReport, Survey};
use crate::wreath::{CensusSummary, CliffordCase, WreathAnalysis};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupSummary {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub order: usize,
    pub exponent: usize,
    pub class_sizes: Vec<usize>,
}

impl GroupSummary {
    pub fn of(g: &Arc<FiniteGroup>) -> GroupSummary {
        GroupSummary {
            name: g.name().map(str::to_string),
            order: g.order(),
            exponent: g.exponent(),
            class_sizes: g.class_sizes().to_vec(),
        }
    }
}

pub type Timings = BTreeMap<String, u64>;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableReport {
    pub schema: u32,
    pub group: GroupSummary,
    pub classes: Vec<usize>,
    pub degrees: Vec<usize>,
    pub irreducibles: Vec<Vec<Cyclotomic>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

impl TableReport {
    pub fn new(g: &Arc<FiniteGroup>, table: &CharacterTable) -> TableReport {
        TableReport {
            schema: SCHEMA_VERSION,
            group: GroupSummary::of(g),
            classes: g.class_sizes().to_vec(),
            degrees: table.degrees().to_vec(),
            irreducibles: table
                .irreducibles()
                .iter()
                .map(|chi| chi.values().to_vec())
                .collect(),
            timings_ms: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err("unsupported schema version".into());
        }
        let r = self.classes.len();
        if self.irreducibles.len() != r || self.degrees.len() != r {
            return Err("table is not square".into());
        }
        if self.irreducibles.iter().any(|row| row.len() != r) {
            return Err("row length disagrees with class count".into());
        }
        let n: usize = self.classes.iter().sum();
        if self.degrees.iter().map(|d| d * d).sum::<usize>() != n {
            return Err("degree squares do not sum to the group order".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyzeReport {
    pub schema: u32,
    pub group: GroupSummary,
    /// (subgroup order, number of conjugacy classes of that order), in
    /// descending order of subgroup order.
    pub subgroup_classes_by_order: Vec<(usize, usize)>,
    pub classification: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

impl AnalyzeReport {
    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err("unsupported schema version".into());
        }
        self.classification.validate()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CensusReport {
    pub fixed_labels: usize,
    pub full_orbits: usize,
    pub case_induced: usize,
    pub case_extension: usize,
    pub irr_count: usize,
    pub predicted_degree_square_sum: usize,
}

impl From<CensusSummary> for CensusReport {
    fn from(c: CensusSummary) -> CensusReport {
        CensusReport {
            fixed_labels: c.fixed_labels,
            full_orbits: c.full_orbits,
            case_induced: c.case_induced,
            case_extension: c.case_extension,
            irr_count: c.irr_count,
            predicted_degree_square_sum: c.predicted_degree_square_sum,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, tag = "kind", rename_all = "lowercase")]
pub enum CaseReport {
    Induced { orbit: Vec<Vec<usize>> },
    Extension { phi: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiberReport {
    pub label: Vec<usize>,
    pub members: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WreathReport {
    pub schema: u32,
    pub base: GroupSummary,
    pub copies: usize,
    pub group: GroupSummary,
    pub census: CensusReport,
    pub cases: Vec<CaseReport>,
    pub degrees: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber: Option<FiberReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hypotheses: Vec<HypothesisReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

impl WreathReport {
    pub fn new(analysis: &WreathAnalysis) -> WreathReport {
        WreathReport {
            schema: SCHEMA_VERSION,
            base: GroupSummary::of(analysis.wreath.factor()),
            copies: analysis.wreath.copies(),
            group: GroupSummary::of(analysis.wreath.group()),
            census: analysis.census().into(),
            cases: analysis
                .cases
                .iter()
                .map(|c| match c {
                    CliffordCase::Induced { orbit } => CaseReport::Induced {
                        orbit: orbit.iter().map(|l| l.0.clone()).collect(),
                    },
                    CliffordCase::Extension { phi } => CaseReport::Extension { phi: *phi },
                })
                .collect(),
            degrees: analysis.table.degrees().to_vec(),
            fiber: None,
            hypotheses: Vec::new(),
            timings_ms: None,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err("unsupported schema version".into());
        }
        if self.census.irr_count != self.cases.len() {
            return Err("per-character cases disagree with the census".into());
        }
        if self.census.irr_count != self.census.full_orbits + self.copies * self.census.fixed_labels
        {
            return Err("census identity violated".into());
        }
        if self.census.predicted_degree_square_sum != self.group.order {
            return Err("predicted degree squares do not sum to |W|".into());
        }
        for h in &self.hypotheses {
            h.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchReport {
    pub schema: u32,
    pub survey: Survey,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<Timings>,
}

impl SearchReport {
    pub fn validate(&self) -> Result<(), String> {
        if self.schema != SCHEMA_VERSION {
            return Err("unsupported schema version".into());
        }
        let found = self.survey.entries.iter().any(|e| e.counterexample);
        if found != self.survey.counterexample_found {
            return Err("counterexample flag disagrees with entries".into());
        }
        Ok(())
    }
}
