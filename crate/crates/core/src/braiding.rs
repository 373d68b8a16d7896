//! Gate recipes: braiding schedules, the dynamical phase gate, and zero-mode
//! tracking along a sequence of pairing Hamiltonians.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_8};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SimError};
use crate::fermion::{zero_modes, MajoranaHamiltonian, MajoranaIndex};
use crate::ite::{EvolutionKind, Schedule, Segment, DEFAULT_ITE_TIME};
use crate::linalg::{self, CMatrix, ONE, ZERO};
use crate::logical::{extract_gate, LogicalGate};
use crate::models::{encoding_frame, h_e, h_h1, h_h2, h_h3, h_m0, SITES};
use crate::spin::{Pauli, PauliString, SpinHamiltonian};
use crate::tomography::process_fidelity;

/// Frobenius tolerance for a recipe's even block against its target.
pub const GATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateName {
    H,
    HDagger,
    R,
    RDagger,
    Z,
    T,
    M(f64),
    Identity,
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateName::H => f.write_str("H"),
            GateName::HDagger => f.write_str("Hdg"),
            GateName::R => f.write_str("R"),
            GateName::RDagger => f.write_str("Rdg"),
            GateName::Z => f.write_str("Z"),
            GateName::T => f.write_str("T"),
            GateName::M(tau) => write!(f, "M:tau={tau}"),
            GateName::Identity => f.write_str("I"),
        }
    }
}

/// Accepts `H`, `Hdg`, `R`, `Rdg`, `Z`, `T`, `I`, and `M:tau=<float>`.
impl FromStr for GateName {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(rest) = t.strip_prefix("M:tau=").or_else(|| t.strip_prefix("m:tau=")) {
            let tau: f64 = rest.trim().parse().map_err(|_| SimError::UnknownRecipe(s.to_string()))?;
            if !tau.is_finite() {
                return Err(SimError::InvalidDuration(tau));
            }
            return Ok(GateName::M(tau));
        }
        Ok(match t {
            "H" => GateName::H,
            "Hdg" | "H†" | "H^dag" => GateName::HDagger,
            "R" => GateName::R,
            "Rdg" | "R†" | "R^dag" => GateName::RDagger,
            "Z" => GateName::Z,
            "T" => GateName::T,
            "I" | "identity" => GateName::Identity,
            _ => return Err(SimError::UnknownRecipe(s.to_string())),
        })
    }
}

impl GateName {
    /// Analytic even-parity block of the named gate, phase-fixed.
    pub fn target(&self) -> CMatrix {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let h = FRAC_1_SQRT_2;
        match *self {
            GateName::H => CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(-h, 0.0), c(h, 0.0), c(h, 0.0)]),
            GateName::HDagger => CMatrix::from_row_slice(2, 2, &[c(h, 0.0), c(h, 0.0), c(-h, 0.0), c(h, 0.0)]),
            GateName::R => diag(ONE, c(0.0, -1.0)),
            GateName::RDagger => diag(ONE, c(0.0, 1.0)),
            GateName::Z => diag(ONE, c(-1.0, 0.0)),
            GateName::T => diag(ONE, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)),
            GateName::M(tau) => m_block(tau),
            GateName::Identity => diag(ONE, ONE),
        }
    }
}

fn diag(a: Complex64, b: Complex64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, ZERO, ZERO, b])
}

/// `[[cos τ, -i sin τ], [-i sin τ, cos τ]]`, rotated to the phase convention.
pub fn m_block(tau: f64) -> CMatrix {
    let (s, c) = tau.sin_cos();
    let m = CMatrix::from_row_slice(2, 2, &[
        Complex64::new(c, 0.0),
        Complex64::new(0.0, -s),
        Complex64::new(0.0, -s),
        Complex64::new(c, 0.0),
    ]);
    linalg::fix_global_phase(&m, 1e-9).0
}

/// A named gate with its schedule and the pairing Hamiltonian behind every segment.
#[derive(Debug, Clone)]
pub struct GateRecipe {
    name: GateName,
    schedule: Schedule,
    pairings: Vec<MajoranaHamiltonian>,
    expected_even_block: CMatrix,
    colocation_point: Option<usize>,
}

impl GateRecipe {
    pub fn name(&self) -> GateName {
        self.name
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn pairings(&self) -> &[MajoranaHamiltonian] {
        &self.pairings
    }

    pub fn expected_even_block(&self) -> &CMatrix {
        &self.expected_even_block
    }

    /// Segment boundary at which two zero modes share the link site, if any.
    pub fn colocation_point(&self) -> Option<usize> {
        self.colocation_point
    }

    pub fn then(&self, next: &GateRecipe, name: GateName) -> GateRecipe {
        let offset = self.schedule.len();
        let mut pairings = self.pairings.clone();
        pairings.extend(next.pairings.iter().cloned());
        GateRecipe {
            name,
            schedule: self.schedule.then(&next.schedule),
            pairings,
            expected_even_block: name.target(),
            colocation_point: self.colocation_point.or(next.colocation_point.map(|p| p + offset)),
        }
    }

    /// Replaces the schedule, e.g. with a deformed or perturbed copy.
    pub fn with_schedule(&self, schedule: Schedule) -> GateRecipe {
        GateRecipe { schedule, ..self.clone() }
    }

    /// Extracts the gate and checks the even block against the target.
    pub fn validate(&self) -> Result<LogicalGate> {
        let gate = extract_gate(&self.schedule)?;
        let distance = linalg::frobenius(&(&gate.even_block - &self.expected_even_block));
        if distance > GATE_TOL {
            return Err(SimError::NoValidCandidate(format!("{} even block off by {distance:.3e}", self.name)));
        }
        Ok(gate)
    }

    /// Zero-mode positions at every segment boundary: entry `k` is the
    /// configuration just before segment `k`. Real-time segments leave the
    /// positions unchanged.
    pub fn mzm_trajectory(&self) -> Result<Vec<MzmMap>> {
        let mut maps = track_mzms(&[h_m0()])?;
        let mut previous = h_m0();
        for (segment, h) in self.schedule.segments().iter().zip(&self.pairings) {
            let last = maps.last().expect("nonempty").clone();
            if segment.kind() == EvolutionKind::Real {
                maps.push(last);
                continue;
            }
            check_zero_modes(h)?;
            let next = last
                .iter()
                .map(|(&label, &x)| Ok((label, follow_zero_mode(&previous, h, x)?)))
                .collect::<Result<MzmMap>>()?;
            maps.push(next);
            previous = h.clone();
        }
        Ok(maps)
    }
}

struct Builder {
    t: f64,
    segments: Vec<Segment>,
    pairings: Vec<MajoranaHamiltonian>,
}

impl Builder {
    fn new(t: f64) -> Self {
        Self { t, segments: Vec::new(), pairings: Vec::new() }
    }

    fn ite(mut self, label: &str, h: MajoranaHamiltonian) -> Result<Self> {
        self.segments.push(Segment::imaginary(label, encoding_frame(&h)?, self.t)?);
        self.pairings.push(h);
        Ok(self)
    }

    fn real(mut self, label: &str, h: MajoranaHamiltonian, tau: f64) -> Result<Self> {
        self.segments.push(Segment::real(label, encoding_frame(&h)?, tau)?);
        self.pairings.push(h);
        Ok(self)
    }

    fn finish(self, name: GateName, colocation_point: Option<usize>) -> Result<GateRecipe> {
        Ok(GateRecipe {
            name,
            schedule: Schedule::new(self.segments)?,
            pairings: self.pairings,
            expected_even_block: name.target(),
            colocation_point,
        })
    }
}

fn pairing(terms: &[(&str, &str)]) -> MajoranaHamiltonian {
    let terms: Vec<(f64, &str, &str)> = terms.iter().map(|&(a, b)| (1.0, a, b)).collect();
    MajoranaHamiltonian::parse(&terms).expect("static pairing is valid")
}

/// C–D exchange path: C leaves 4a through the link to 6b while D walks
/// back along chain 2 from 6b to 4a.
pub fn h_r1() -> MajoranaHamiltonian {
    pairing(&[("1b", "2a"), ("3a", "4b"), ("4a", "5a"), ("5b", "6a")])
}

pub fn h_r2() -> MajoranaHamiltonian {
    pairing(&[("1b", "2a"), ("3a", "4b"), ("4a", "6b"), ("5b", "6a")])
}

pub fn h_r3() -> MajoranaHamiltonian {
    pairing(&[("1b", "2a"), ("3a", "4a"), ("3b", "4b"), ("5b", "6a")])
}

/// Moves B from 2b onto the link site.
pub fn h_transport1() -> MajoranaHamiltonian {
    pairing(&[("1b", "2a"), ("2b", "3a"), ("4b", "5a"), ("5b", "6a")])
}

/// Moves C from 4a onto the link site, next to B.
pub fn h_transport2() -> MajoranaHamiltonian {
    pairing(&[("1b", "2a"), ("2b", "4a"), ("4b", "5a"), ("5b", "6a")])
}

pub fn braid_ac(t: f64) -> Result<GateRecipe> {
    Builder::new(t)
        .ite("H_M0", h_m0())?
        .ite("H_h1", h_h1())?
        .ite("H_h2", h_h2())?
        .ite("H_h3", h_h3())?
        .ite("H_M0", h_m0())?
        .finish(GateName::H, None)
}

pub fn braid_ac_reversed(t: f64) -> Result<GateRecipe> {
    Builder::new(t)
        .ite("H_M0", h_m0())?
        .ite("H_h3", h_h3())?
        .ite("H_h2", h_h2())?
        .ite("H_h1", h_h1())?
        .ite("H_M0", h_m0())?
        .finish(GateName::HDagger, None)
}

pub fn braid_cd(t: f64) -> Result<GateRecipe> {
    cd_recipe(&[h_r1(), h_r2(), h_r3()], t, GateName::R)
}

pub fn braid_cd_reversed(t: f64) -> Result<GateRecipe> {
    cd_recipe(&[h_r3(), h_r2(), h_r1()], t, GateName::RDagger)
}

fn cd_recipe(path: &[MajoranaHamiltonian; 3], t: f64, name: GateName) -> Result<GateRecipe> {
    Builder::new(t)
        .ite("H_M0", h_m0())?
        .ite("H_r1", path[0].clone())?
        .ite("H_r2", path[1].clone())?
        .ite("H_r3", path[2].clone())?
        .ite("H_M0", h_m0())?
        .finish(name, None)
}

pub fn z_gate(t: f64) -> Result<GateRecipe> {
    let cd = braid_cd(t)?;
    Ok(cd.then(&cd, GateName::Z))
}

pub fn identity(t: f64) -> Result<GateRecipe> {
    Builder::new(t).ite("H_M0", h_m0())?.finish(GateName::Identity, None)
}

/// Transport B and C onto the link site, couple them for real time `τ`
/// under `H_e`, and transport back. The noise insertion point with both
/// zero modes on site 3 is the boundary just before the real-time segment.
pub fn dynamic_phase(tau: f64, t: f64) -> Result<GateRecipe> {
    Builder::new(t)
        .ite("H_M0", h_m0())?
        .ite("H_t1", h_transport1())?
        .ite("H_t2", h_transport2())?
        .real("H_e", h_e(), tau)?
        .ite("H_t1", h_transport1())?
        .ite("H_M0", h_m0())?
        .finish(GateName::M(tau), Some(3))
}

/// `H† · M(π/8) · H`; equals `e^{-iπ/8} diag(1, e^{iπ/4})` on the even sector.
pub fn t_gate(t: f64) -> Result<GateRecipe> {
    let h = braid_ac(t)?;
    let m = dynamic_phase(FRAC_PI_8, t)?;
    let back = braid_ac_reversed(t)?;
    let mut out = h.then(&m, GateName::T);
    // the leading H_M0 of the reversed braid is already in place
    let tail = GateRecipe {
        schedule: Schedule::new(back.schedule.segments()[1..].to_vec())?,
        pairings: back.pairings[1..].to_vec(),
        ..back
    };
    out = out.then(&tail, GateName::T);
    Ok(out)
}

/// Every named recipe at imaginary time `t`.
pub fn recipe(name: GateName, t: f64) -> Result<GateRecipe> {
    match name {
        GateName::H => braid_ac(t),
        GateName::HDagger => braid_ac_reversed(t),
        GateName::R => braid_cd(t),
        GateName::RDagger => braid_cd_reversed(t),
        GateName::Z => z_gate(t),
        GateName::T => t_gate(t),
        GateName::M(tau) => dynamic_phase(tau, t),
        GateName::Identity => identity(t),
    }
}

pub fn recipe_by_name(name: &str) -> Result<GateRecipe> {
    recipe(name.parse()?, DEFAULT_ITE_TIME)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mzm {
    A,
    B,
    C,
    D,
}

impl Mzm {
    pub const ALL: [Mzm; 4] = [Mzm::A, Mzm::B, Mzm::C, Mzm::D];

    fn start(self) -> MajoranaIndex {
        let s = match self {
            Mzm::A => "1a",
            Mzm::B => "2b",
            Mzm::C => "4a",
            Mzm::D => "6b",
        };
        s.parse().expect("static index")
    }
}

pub type MzmMap = BTreeMap<Mzm, MajoranaIndex>;

fn check_zero_modes(h: &MajoranaHamiltonian) -> Result<Vec<MajoranaIndex>> {
    let modes = zero_modes(h, SITES);
    if modes.len() != 4 {
        return Err(SimError::ZeroModeCount { expected: 4, found: modes.len() });
    }
    Ok(modes)
}

/// Where a zero mode at `x` of `old` ends up in `new`: follow the
/// alternating path new-partner, old-partner, … until a mode left free by
/// `new` is reached.
pub fn follow_zero_mode(old: &MajoranaHamiltonian, new: &MajoranaHamiltonian, x: MajoranaIndex) -> Result<MajoranaIndex> {
    let mut current = x;
    for _ in 0..=2 * SITES {
        let Some(w) = new.term_with(current).and_then(|t| t.partner(current)) else {
            return Ok(current);
        };
        let Some(v) = old.term_with(w).and_then(|t| t.partner(w)) else {
            return Err(SimError::TrackingFailed(x.ordinal(), w.ordinal()));
        };
        current = v;
    }
    Err(SimError::TrackingFailed(x.ordinal(), current.ordinal()))
}

/// Labels A–D from their idle positions through each Hamiltonian of `path`,
/// which must start with the idle network.
pub fn track_mzms(path: &[MajoranaHamiltonian]) -> Result<Vec<MzmMap>> {
    let Some(first) = path.first() else {
        return Ok(Vec::new());
    };
    let start: BTreeSet<MajoranaIndex> = Mzm::ALL.iter().map(|m| m.start()).collect();
    let found: BTreeSet<MajoranaIndex> = check_zero_modes(first)?.into_iter().collect();
    if found != start {
        return Err(SimError::ZeroModeCount { expected: 4, found: found.intersection(&start).count() });
    }
    let mut maps = vec![Mzm::ALL.iter().map(|&m| (m, m.start())).collect::<MzmMap>()];
    for pair in path.windows(2) {
        check_zero_modes(&pair[1])?;
        let previous = maps.last().expect("nonempty");
        let next = previous
            .iter()
            .map(|(&label, &x)| Ok((label, follow_zero_mode(&pair[0], &pair[1], x)?)))
            .collect::<Result<MzmMap>>()?;
        maps.push(next);
    }
    Ok(maps)
}

/// Zero-mode labels of `h` reached adiabatically from the idle network.
pub fn mzm_positions(h: &MajoranaHamiltonian) -> Result<MzmMap> {
    let maps = track_mzms(&[h_m0(), h.clone()])?;
    Ok(maps.into_iter().last().expect("two entries"))
}

/// Sites hosting more than one zero mode.
pub fn colocated_sites(map: &MzmMap) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut twice = BTreeSet::new();
    for m in map.values() {
        if !seen.insert(m.site()) {
            twice.insert(m.site());
        }
    }
    twice
}

type Pair = (MajoranaIndex, MajoranaIndex);
type Pairing = BTreeSet<Pair>;

fn ordered(a: MajoranaIndex, b: MajoranaIndex) -> Pair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn to_pairing(h: &MajoranaHamiltonian) -> Pairing {
    h.terms().iter().map(|t| ordered(t.first(), t.second())).collect()
}

fn to_hamiltonian(p: &Pairing) -> MajoranaHamiltonian {
    MajoranaHamiltonian::new(p.iter().map(|&(a, b)| (1.0, a, b)).collect()).expect("pairing is valid")
}

/// Re-pair one mode of a chain-2/link pairing with a free chain-2/link mode.
fn single_moves(p: &Pairing, movable: &[MajoranaIndex], frozen: Pair) -> Vec<Pairing> {
    let used: BTreeSet<MajoranaIndex> = p.iter().flat_map(|&(a, b)| [a, b]).collect();
    let free: Vec<MajoranaIndex> = movable.iter().copied().filter(|m| !used.contains(m)).collect();
    let mut out = Vec::new();
    for &pair in p.iter().filter(|&&q| q != frozen) {
        for &z in &free {
            for u in [pair.0, pair.1] {
                let mut next = p.clone();
                next.remove(&pair);
                next.insert(ordered(z, u));
                out.push(next);
            }
        }
    }
    out
}

fn moves_up_to_two(p: &Pairing, movable: &[MajoranaIndex], frozen: Pair) -> BTreeSet<Pairing> {
    let mut out = BTreeSet::new();
    for a in single_moves(p, movable, frozen) {
        for b in single_moves(&a, movable, frozen) {
            out.insert(b);
        }
        out.insert(a);
    }
    out.remove(p);
    out
}

/// Zero modes on four distinct sites.
fn separated(p: &Pairing) -> bool {
    let used: BTreeSet<MajoranaIndex> = p.iter().flat_map(|&(a, b)| [a, b]).collect();
    let sites: BTreeSet<usize> = MajoranaIndex::all(SITES).filter(|m| !used.contains(m)).map(|m| m.site()).collect();
    sites.len() == 4 && used.len() == 2 * SITES - 4
}

fn max_span(p: &Pairing) -> usize {
    p.iter().map(|(a, b)| a.site().abs_diff(b.site())).max().unwrap_or(0)
}

fn pairing_partner(p: &Pairing, m: MajoranaIndex) -> Option<MajoranaIndex> {
    p.iter().find_map(|&(a, b)| if a == m { Some(b) } else if b == m { Some(a) } else { None })
}

fn follow_in_pairings(old: &Pairing, new: &Pairing, x: MajoranaIndex) -> Option<MajoranaIndex> {
    let mut current = x;
    for _ in 0..=2 * SITES {
        let Some(w) = pairing_partner(new, current) else {
            return Some(current);
        };
        current = pairing_partner(old, w)?;
    }
    None
}

/// Three-step pairing paths from the idle network back to itself that take
/// C from 4a through the link site to 6b and D monotonically from 6b back to
/// 4a, with A and B fixed, zero modes never sharing a site, and no pairing
/// longer than two sites. Each step re-pairs at most two modes.
pub fn cd_candidates() -> Vec<[MajoranaHamiltonian; 3]> {
    let idle = to_pairing(&h_m0());
    let frozen = ordered("1b".parse().expect("index"), "2a".parse().expect("index"));
    let movable: Vec<MajoranaIndex> = MajoranaIndex::all(SITES).filter(|m| m.site() >= 3).collect();
    let mut steps: HashMap<Pairing, Vec<Pairing>> = HashMap::new();
    let mut step = |p: &Pairing| -> Vec<Pairing> {
        steps
            .entry(p.clone())
            .or_insert_with(|| {
                moves_up_to_two(p, &movable, frozen).into_iter().filter(|q| separated(q) && max_span(q) <= 2).collect()
            })
            .clone()
    };
    let returns: BTreeSet<Pairing> = moves_up_to_two(&idle, &movable, frozen).into_iter().collect();
    let mut out = Vec::new();
    for r1 in step(&idle) {
        for r2 in step(&r1) {
            if r2 == idle {
                continue;
            }
            for r3 in step(&r2) {
                // moves are reversible, so r3 returns to idle iff idle reaches r3
                if r3 == idle || r3 == r1 || !returns.contains(&r3) {
                    continue;
                }
                if cd_path_shape(&[&idle, &r1, &r2, &r3, &idle]) {
                    out.push([to_hamiltonian(&r1), to_hamiltonian(&r2), to_hamiltonian(&r3)]);
                }
            }
        }
    }
    out
}

fn cd_path_shape(path: &[&Pairing; 5]) -> bool {
    let index = |s: &str| s.parse::<MajoranaIndex>().expect("index");
    let mut positions: Vec<[MajoranaIndex; 4]> = vec![Mzm::ALL.map(Mzm::start)];
    for pair in path.windows(2) {
        let last = positions.last().expect("nonempty");
        let mut next = *last;
        for (slot, &x) in next.iter_mut().zip(last) {
            match follow_in_pairings(pair[0], pair[1], x) {
                Some(y) => *slot = y,
                None => return false,
            }
        }
        positions.push(next);
    }
    let end = positions.last().expect("nonempty");
    if *end != [index("1a"), index("2b"), index("6b"), index("4a")] {
        return false;
    }
    let c_visits_link = positions.iter().any(|p| p[2].site() == 3);
    c_visits_link && positions.windows(2).all(|w| w[1][3].site() <= w[0][3].site())
}

/// Builds the C–D recipe for a candidate path, accepting it if it realizes
/// `R` or `R†`.
pub fn validate_cd_candidate(path: &[MajoranaHamiltonian; 3], t: f64) -> Result<GateRecipe> {
    for name in [GateName::R, GateName::RDagger] {
        let recipe = cd_recipe(path, t, name)?;
        if recipe.validate().is_ok() {
            return Ok(recipe);
        }
    }
    Err(SimError::NoValidCandidate("path realizes neither R nor R†".into()))
}

/// `ε·nⱼ` in the spin frame: `ε(1 + Zⱼ)/2`.
pub fn occupation_term(site: usize, eps: f64) -> Result<SpinHamiltonian> {
    SpinHamiltonian::new(SITES, vec![
        PauliString::new(eps / 2.0, vec![Pauli::I; SITES]),
        PauliString::on_sites(eps / 2.0, SITES, &[(site, Pauli::Z)])?,
    ])
}

/// Adds `ε·n_site` to every imaginary-time segment whose pairing differs
/// from the idle network.
pub fn perturbed(recipe: &GateRecipe, site: usize, eps: f64) -> Result<GateRecipe> {
    let idle = h_m0();
    let extra = occupation_term(site, eps)?;
    let schedule = recipe.schedule.map_segments(|k, s| {
        if recipe.pairings[k] == idle || s.kind() != EvolutionKind::Imaginary {
            Ok(s.clone())
        } else {
            Ok(s.with_hamiltonian(s.hamiltonian().plus(&extra)?))
        }
    })?;
    Ok(recipe.with_schedule(schedule))
}

/// Sites hosting two zero modes at once anywhere along the recipe.
pub fn recipe_colocated_sites(recipe: &GateRecipe) -> Result<BTreeSet<usize>> {
    Ok(recipe.mzm_trajectory()?.iter().flat_map(colocated_sites).collect())
}

/// `1 - F` between the ideal even block and the one obtained with `ε·n_site`
/// added to the intermediate Hamiltonians.
pub fn perturbation_degradation(recipe: &GateRecipe, site: usize, eps: f64) -> Result<f64> {
    let ideal = crate::logical::extract_gate_unchecked(recipe.schedule())?;
    let noisy = crate::logical::extract_gate_unchecked(perturbed(recipe, site, eps)?.schedule())?;
    Ok(1.0 - process_fidelity(&ideal.even_block, &noisy.even_block)?)
}
