//! Local phase and flip errors applied as post-selected events.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::braiding::GateRecipe;
use crate::error::{Result, SimError};
use crate::ite::propagate_block;
use crate::logical::{code_basis, gate_from_propagation, LogicalGate};
use crate::models::SITES;
use crate::spin::{Pauli, PauliString};
use crate::state::{DenseOperator, StateVector, ANNIHILATION_NORM};
use crate::tomography::process_fidelity;

/// Gate fidelity at or above which a corrupted run counts as unaffected.
pub const UNAFFECTED_FIDELITY: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    /// `(1 + Zⱼ)/2`
    Phase,
    /// `(XᵢXⱼ + YᵢYⱼ)/2`
    Flip,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NoiseSpec {
    kind: NoiseKind,
    sites: Vec<usize>,
    position: usize,
}

fn check_site(site: usize) -> Result<()> {
    if (1..=SITES).contains(&site) {
        Ok(())
    } else {
        Err(SimError::SiteOutOfRange { site, site_count: SITES })
    }
}

impl NoiseSpec {
    pub fn phase(site: usize, position: usize) -> Result<Self> {
        check_site(site)?;
        Ok(Self { kind: NoiseKind::Phase, sites: vec![site], position })
    }

    pub fn flip(i: usize, j: usize, position: usize) -> Result<Self> {
        check_site(i)?;
        check_site(j)?;
        if i.abs_diff(j) != 1 {
            return Err(SimError::NonAdjacentFlip(i, j));
        }
        Ok(Self { kind: NoiseKind::Flip, sites: vec![i.min(j), i.max(j)], position })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn sites(&self) -> &[usize] {
        &self.sites
    }

    pub fn position(&self) -> usize {
        self.position
    }

    pub fn at_position(&self, position: usize) -> Self {
        Self { position, ..self.clone() }
    }

    pub fn shifted(&self, offset: usize) -> Self {
        self.at_position(self.position + offset)
    }

    pub fn operator(&self) -> Result<DenseOperator> {
        let m = match self.kind {
            NoiseKind::Phase => phase_operator(self.sites[0])?,
            NoiseKind::Flip => flip_operator(self.sites[0], self.sites[1])?,
        };
        DenseOperator::new(m, SITES)
    }

    /// Applies the error, renormalizes, and returns the survival probability.
    pub fn apply(&self, psi: &StateVector) -> Result<(StateVector, f64)> {
        post_select(psi, &self.operator()?)
    }
}

impl fmt::Display for NoiseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            NoiseKind::Phase => write!(f, "phase:{}@{}", self.sites[0], self.position),
            NoiseKind::Flip => write!(f, "flip:{}-{}@{}", self.sites[0], self.sites[1], self.position),
        }
    }
}

/// Parses `phase:<site>@<position>` or `flip:<i>-<j>@<position>`.
impl FromStr for NoiseSpec {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || SimError::UnknownRecipe(format!("noise spec `{s}`"));
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let (sites, position) = rest.split_once('@').ok_or_else(bad)?;
        let position: usize = position.trim().parse().map_err(|_| bad())?;
        let site = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        match kind.trim().to_ascii_lowercase().as_str() {
            "phase" => NoiseSpec::phase(site(sites)?, position),
            "flip" => {
                let (i, j) = sites.split_once('-').ok_or_else(bad)?;
                NoiseSpec::flip(site(i)?, site(j)?, position)
            }
            _ => Err(bad()),
        }
    }
}

fn phase_operator(site: usize) -> Result<crate::linalg::CMatrix> {
    check_site(site)?;
    let z = PauliString::on_sites(1.0, SITES, &[(site, Pauli::Z)])?.matrix();
    let id = crate::linalg::identity(1 << SITES);
    Ok((id + z) * Complex64::new(0.5, 0.0))
}

fn flip_operator(i: usize, j: usize) -> Result<crate::linalg::CMatrix> {
    let xx = PauliString::on_sites(1.0, SITES, &[(i, Pauli::X), (j, Pauli::X)])?.matrix();
    let yy = PauliString::on_sites(1.0, SITES, &[(i, Pauli::Y), (j, Pauli::Y)])?.matrix();
    Ok((xx + yy) * Complex64::new(0.5, 0.0))
}

fn post_select(psi: &StateVector, op: &DenseOperator) -> Result<(StateVector, f64)> {
    let raw = op.apply_raw(psi);
    let survival = raw.norm_squared() / psi.amplitudes().norm_squared();
    if survival.sqrt() < ANNIHILATION_NORM {
        return Err(SimError::Annihilated { norm: survival.sqrt() });
    }
    Ok((StateVector::from_amplitudes(raw, psi.site_count())?, survival))
}

pub fn apply_phase_error(psi: &StateVector, site: usize) -> Result<(StateVector, f64)> {
    NoiseSpec::phase(site, 0)?.apply(psi)
}

pub fn apply_flip_error(psi: &StateVector, pair: (usize, usize)) -> Result<(StateVector, f64)> {
    NoiseSpec::flip(pair.0, pair.1, 0)?.apply(psi)
}

/// Outcome of running a recipe with one error inserted.
#[derive(Debug, Clone)]
pub struct CorruptedGate {
    pub noise: NoiseSpec,
    pub gate: LogicalGate,
    /// Process fidelity of the even block against the recipe's target.
    pub fidelity: f64,
    pub leakage: f64,
    /// Mean squared norm kept by the error over the four code inputs.
    pub survival: f64,
    pub unaffected: bool,
}

pub fn corrupted_gate(recipe: &GateRecipe, noise: &NoiseSpec) -> Result<CorruptedGate> {
    let schedule = recipe.schedule().clone().with_noise(noise.clone())?;
    let basis = code_basis();
    let propagation = propagate_block(basis, &schedule)?;
    let gate = gate_from_propagation(basis, &propagation)?;
    let fidelity = process_fidelity(&gate.even_block, recipe.expected_even_block())?;
    Ok(CorruptedGate {
        noise: noise.clone(),
        leakage: gate.leakage,
        survival: propagation.survival.first().copied().unwrap_or(1.0),
        unaffected: fidelity >= UNAFFECTED_FIDELITY,
        fidelity,
        gate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in ["phase:4@3", "flip:3-4@5"] {
            let spec: NoiseSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!(matches!("flip:1-4@0".parse::<NoiseSpec>(), Err(SimError::NonAdjacentFlip(1, 4))));
        assert!("phase:7@0".parse::<NoiseSpec>().is_err());
        assert!("bogus".parse::<NoiseSpec>().is_err());
    }

    #[test]
    fn flip_sites_are_sorted() {
        assert_eq!(NoiseSpec::flip(5, 4, 0).unwrap().sites(), &[4, 5]);
    }
}
