//! Deutsch-Jozsa on the topological qubit, built from braids only.

use serde::{Deserialize, Serialize};

use crate::braiding::{braid_ac, braid_cd, GateRecipe};
use crate::error::{Result, SimError};
use crate::ite::{run_schedule, Schedule};
use crate::logical::{decode_logical, encode_logical, LogicalState};

/// Overlap a final state needs with `|11_g⟩` or `|00_g⟩` for a verdict.
pub const VERDICT_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleKind {
    /// `U_f = I`
    Constant,
    /// `U_f = Z`, two C–D braids
    Balanced,
}

#[derive(Debug, Clone)]
pub struct DjStage {
    pub label: &'static str,
    pub state: LogicalState,
}

#[derive(Debug, Clone)]
pub struct DjRun {
    pub oracle: OracleKind,
    /// State after the first A–C braid, after the oracle, after the last A–C braid.
    pub trajectory: Vec<DjStage>,
    pub verdict: OracleKind,
    /// Overlaps of the final state with `|11_g⟩` and `|00_g⟩`.
    pub constant_overlap: f64,
    pub balanced_overlap: f64,
}

fn step(state: &LogicalState, recipe: &Schedule) -> Result<LogicalState> {
    Ok(decode_logical(&run_schedule(&encode_logical(state)?, recipe)?))
}

/// Runs the algorithm from `|00_g⟩` with the given oracle, optionally
/// rewriting every braid first (for perturbed runs).
pub fn run_dj_with(oracle: OracleKind, t: f64, rewrite: impl Fn(&GateRecipe) -> Result<GateRecipe>) -> Result<DjRun> {
    let ac = rewrite(&braid_ac(t)?)?;
    let oracle_stage = match oracle {
        OracleKind::Constant => None,
        OracleKind::Balanced => {
            let cd = rewrite(&braid_cd(t)?)?;
            Some(cd.schedule().then(cd.schedule()))
        }
    };

    let start = LogicalState::basis(0);
    let first = step(&start, ac.schedule())?;
    let middle = match &oracle_stage {
        Some(s) => step(&first, s)?,
        None => first.clone(),
    };
    let last = step(&middle, ac.schedule())?;

    let constant_overlap = last.overlap(&LogicalState::basis(3));
    let balanced_overlap = last.overlap(&LogicalState::basis(0));
    let verdict = if constant_overlap >= VERDICT_THRESHOLD {
        OracleKind::Constant
    } else if balanced_overlap >= VERDICT_THRESHOLD {
        OracleKind::Balanced
    } else {
        return Err(SimError::AmbiguousVerdict { constant: constant_overlap, balanced: balanced_overlap });
    };
    Ok(DjRun {
        oracle,
        trajectory: vec![
            DjStage { label: "after U_AC", state: first },
            DjStage { label: "after oracle", state: middle },
            DjStage { label: "after U_AC", state: last },
        ],
        verdict,
        constant_overlap,
        balanced_overlap,
    })
}

pub fn run_dj(oracle: OracleKind, t: f64) -> Result<DjRun> {
    run_dj_with(oracle, t, |r| Ok(r.clone()))
}
