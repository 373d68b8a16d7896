use mzm_core::braiding::{dynamic_phase, m_block, recipe, GateName, GateRecipe};
use mzm_core::dj::{run_dj, DjRun, OracleKind};
use mzm_core::linalg::{self, CMatrix};
use mzm_core::logical::{extract_gate, extract_gate_unchecked, LogicalGate, LogicalState};
use mzm_core::noise::{corrupted_gate, NoiseSpec, UNAFFECTED_FIDELITY};
use mzm_core::tomography::{process_fidelity, simulate_tomography, TomographyPlan};
use mzm_core::SimError;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ExperimentConfig, SweepParameter};
use crate::report::{amplitudes, csv_complex, matrix, num, pair};
use crate::CliError;

/// Ideal-simulation floor for the process fidelity of a named gate.
pub const GATE_FIDELITY_FLOOR: f64 = 1.0 - 1e-6;

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Gates(GateReport),
    Dj(Vec<DjReport>),
    Noise(NoiseReport),
    Sweep(SweepReport),
}

#[derive(Debug, Serialize)]
pub struct GateReport {
    pub gate: String,
    pub target: Vec<Vec<[f64; 2]>>,
    pub matrix4: Vec<Vec<[f64; 2]>>,
    pub even_block: Vec<Vec<[f64; 2]>>,
    pub global_phase: [f64; 2],
    pub scale: f64,
    pub leakage: f64,
    pub process_fidelity: f64,
    pub distance: f64,
    pub tomography: TomographyReport,
}

#[derive(Debug, Serialize)]
pub struct TomographyReport {
    pub measurements: usize,
    pub shots: Option<u64>,
    pub seed: u64,
    pub process_fidelity: f64,
    pub max_deviation: f64,
    pub impurity: f64,
    pub matrix4: Vec<Vec<[f64; 2]>>,
    pub input_labels: Vec<String>,
    pub setting_labels: Vec<String>,
    pub expectations: Vec<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct DjReport {
    pub oracle: OracleKind,
    pub verdict: OracleKind,
    pub constant_overlap: f64,
    pub balanced_overlap: f64,
    pub trajectory: Vec<DjPoint>,
}

#[derive(Debug, Serialize)]
pub struct DjPoint {
    pub stage: String,
    pub amplitudes: Vec<[f64; 2]>,
    pub residual: f64,
}

#[derive(Debug, Serialize)]
pub struct NoiseReport {
    pub gate: String,
    pub ideal_even_block: Vec<Vec<[f64; 2]>>,
    pub input: Vec<[f64; 2]>,
    pub ideal_output_density: Vec<Vec<[f64; 2]>>,
    pub threshold: f64,
    pub runs: Vec<NoiseRun>,
}

#[derive(Debug, Serialize)]
pub struct NoiseRun {
    pub noise: String,
    pub annihilated: bool,
    pub fidelity: Option<f64>,
    pub leakage: Option<f64>,
    pub survival: Option<f64>,
    pub unaffected: bool,
    pub even_block: Option<Vec<Vec<[f64; 2]>>>,
    /// `ρ` over the logical basis for the report input state.
    pub output_density: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub parameter: SweepParameter,
    pub gate: String,
    pub points: Vec<SweepPoint>,
}

#[derive(Debug, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub process_fidelity: f64,
    /// Frobenius distance of the even block to the target.
    pub distance: f64,
    pub leakage: f64,
    pub even_block: Vec<Vec<[f64; 2]>>,
}

fn sim(e: SimError) -> CliError {
    match e {
        SimError::UnknownRecipe(_)
        | SimError::InvalidDuration(_)
        | SimError::NonAdjacentFlip(..)
        | SimError::SiteOutOfRange { .. }
        | SimError::NoisePosition { .. } => CliError::Usage(e.to_string()),
        other => CliError::Validation(other.to_string()),
    }
}

fn gate_recipe(cfg: &ExperimentConfig) -> Result<(GateName, GateRecipe), CliError> {
    let name = cfg.gate_name()?;
    Ok((name, recipe(name, cfg.ite_time).map_err(sim)?))
}

pub fn run(cfg: &ExperimentConfig) -> Result<Results, CliError> {
    use crate::config::Experiment::*;
    match cfg.experiment {
        Gates => cmd_gates(cfg).map(Results::Gates),
        Dj => cmd_dj(cfg).map(Results::Dj),
        Noise => cmd_noise(cfg).map(Results::Noise),
        Sweep => cmd_sweep(cfg).map(Results::Sweep),
    }
}

pub fn cmd_gates(cfg: &ExperimentConfig) -> Result<GateReport, CliError> {
    let (name, recipe) = gate_recipe(cfg)?;
    let gate = extract_gate(recipe.schedule()).map_err(sim)?;
    let target = recipe.expected_even_block();
    let fidelity = process_fidelity(&gate.even_block, target).map_err(sim)?;
    let distance = linalg::frobenius(&(&gate.even_block - target));

    let mut plan = TomographyPlan::standard();
    if let Some(shots) = cfg.shots {
        plan = plan.with_shots(shots, cfg.seed);
    }
    let tomo = simulate_tomography(recipe.schedule(), &plan).map_err(sim)?;
    let tomography = TomographyReport {
        measurements: plan.measurement_count(),
        shots: cfg.shots,
        seed: cfg.seed,
        process_fidelity: process_fidelity(&tomo.gate.matrix4, &gate.matrix4).map_err(sim)?,
        max_deviation: linalg::max_abs(&(&tomo.gate.matrix4 - &gate.matrix4)),
        impurity: tomo.impurity,
        matrix4: matrix(&tomo.gate.matrix4),
        input_labels: tomo.input_labels,
        setting_labels: tomo.setting_labels,
        expectations: tomo.expectations,
    };
    let report = GateReport {
        gate: name.to_string(),
        target: matrix(target),
        matrix4: matrix(&gate.matrix4),
        even_block: matrix(&gate.even_block),
        global_phase: pair(gate.global_phase),
        scale: gate.scale,
        leakage: gate.leakage,
        process_fidelity: fidelity,
        distance,
        tomography,
    };
    if fidelity < GATE_FIDELITY_FLOOR {
        return Err(CliError::Failed(
            format!("{name}: process fidelity {fidelity:.9} below {GATE_FIDELITY_FLOOR}"),
            Box::new(Results::Gates(report)),
        ));
    }
    Ok(report)
}

fn dj_report(run: DjRun) -> DjReport {
    DjReport {
        oracle: run.oracle,
        verdict: run.verdict,
        constant_overlap: run.constant_overlap,
        balanced_overlap: run.balanced_overlap,
        trajectory: run
            .trajectory
            .into_iter()
            .map(|s| DjPoint { stage: s.label.to_string(), amplitudes: amplitudes(s.state.amplitudes()), residual: s.state.residual() })
            .collect(),
    }
}

pub fn cmd_dj(cfg: &ExperimentConfig) -> Result<Vec<DjReport>, CliError> {
    let runs: Vec<Result<DjRun, SimError>> =
        [OracleKind::Constant, OracleKind::Balanced].par_iter().map(|&o| run_dj(o, cfg.ite_time)).collect();
    let mut out = Vec::new();
    for run in runs {
        let run = run.map_err(sim)?;
        if run.verdict != run.oracle {
            return Err(CliError::Validation(format!("{:?} oracle classified as {:?}", run.oracle, run.verdict)));
        }
        out.push(dj_report(run));
    }
    Ok(out)
}

/// Resolves `kind:sites` without a position to the recipe's colocation point.
pub fn parse_noise(spec: &str, recipe: &GateRecipe) -> Result<NoiseSpec, CliError> {
    let full = if spec.contains('@') {
        spec.to_string()
    } else {
        let p = recipe.colocation_point().ok_or_else(|| {
            CliError::Usage(format!("noise spec `{spec}` needs an explicit @position for this gate"))
        })?;
        format!("{spec}@{p}")
    };
    full.parse().map_err(sim)
}

fn density(gate: &LogicalGate, input: &LogicalState) -> Result<CMatrix, CliError> {
    let out = gate.apply(input).map_err(sim)?.to_vector();
    Ok(&out * out.adjoint())
}

pub fn noise_input() -> LogicalState {
    LogicalState::even_superposition(Complex64::new(1.0, 0.0)).expect("nonzero state")
}

pub fn cmd_noise(cfg: &ExperimentConfig) -> Result<NoiseReport, CliError> {
    let (name, recipe) = gate_recipe(cfg)?;
    let specs = cfg.noise.iter().map(|s| parse_noise(s, &recipe)).collect::<Result<Vec<_>, _>>()?;
    for spec in &specs {
        if spec.position() > recipe.schedule().len() {
            return Err(sim(SimError::NoisePosition { position: spec.position(), segments: recipe.schedule().len() }));
        }
    }
    let ideal = extract_gate(recipe.schedule()).map_err(sim)?;
    let input = noise_input();
    let runs = specs
        .par_iter()
        .map(|spec| match corrupted_gate(&recipe, spec) {
            Ok(c) => Ok(NoiseRun {
                noise: spec.to_string(),
                annihilated: false,
                fidelity: Some(c.fidelity),
                leakage: Some(c.leakage),
                survival: Some(c.survival),
                unaffected: c.unaffected,
                even_block: Some(matrix(&c.gate.even_block)),
                output_density: Some(matrix(&density(&c.gate, &input)?)),
            }),
            Err(SimError::Annihilated { .. }) => Ok(NoiseRun {
                noise: spec.to_string(),
                annihilated: true,
                fidelity: None,
                leakage: None,
                survival: Some(0.0),
                unaffected: false,
                even_block: None,
                output_density: None,
            }),
            Err(e) => Err(sim(e)),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(NoiseReport {
        gate: name.to_string(),
        ideal_even_block: matrix(&ideal.even_block),
        input: amplitudes(input.amplitudes()),
        ideal_output_density: matrix(&density(&ideal, &input)?),
        threshold: UNAFFECTED_FIDELITY,
        runs,
    })
}

pub fn cmd_sweep(cfg: &ExperimentConfig) -> Result<SweepReport, CliError> {
    let parameter = cfg.sweep.unwrap_or(SweepParameter::Tau);
    let point = |value: f64| -> Result<SweepPoint, CliError> {
        let (recipe, target) = match parameter {
            SweepParameter::Tau => (dynamic_phase(value, cfg.ite_time).map_err(sim)?, m_block(value)),
            SweepParameter::IteTime => {
                let name = cfg.gate_name()?;
                (recipe(name, value).map_err(sim)?, name.target())
            }
        };
        let gate = extract_gate_unchecked(recipe.schedule()).map_err(sim)?;
        Ok(SweepPoint {
            value,
            process_fidelity: process_fidelity(&gate.even_block, &target).map_err(sim)?,
            distance: linalg::frobenius(&(&gate.even_block - &target)),
            leakage: gate.leakage,
            even_block: matrix(&gate.even_block),
        })
    };
    let points = cfg.values.par_iter().map(|&v| point(v)).collect::<Result<Vec<_>, _>>()?;
    let gate = match parameter {
        SweepParameter::Tau => "M".to_string(),
        SweepParameter::IteTime => cfg.gate_name()?.to_string(),
    };
    Ok(SweepReport { parameter, gate, points })
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn matrix_rows(label: &str, m: &[Vec<[f64; 2]>], rows: &mut Vec<Vec<String>>) {
    for (r, row) in m.iter().enumerate() {
        for (c, z) in row.iter().enumerate() {
            rows.push(vec![label.into(), r.to_string(), c.to_string(), csv_complex(Complex64::new(z[0], z[1]))]);
        }
    }
}

/// Flat tables: gates as `quantity,row,col,value`; one row per trajectory
/// point, noise run or sweep point otherwise.
pub fn csv(results: &Results) -> Result<String, csv::Error> {
    use crate::report::csv_table;
    match results {
        Results::Gates(g) => {
            let mut rows = Vec::new();
            for (label, value) in [
                ("process_fidelity", g.process_fidelity),
                ("distance", g.distance),
                ("leakage", g.leakage),
                ("scale", g.scale),
                ("tomography_process_fidelity", g.tomography.process_fidelity),
                ("tomography_max_deviation", g.tomography.max_deviation),
            ] {
                rows.push(vec![label.into(), String::new(), String::new(), num(value)]);
            }
            let phase = Complex64::new(g.global_phase[0], g.global_phase[1]);
            rows.push(vec!["global_phase".into(), String::new(), String::new(), csv_complex(phase)]);
            matrix_rows("target", &g.target, &mut rows);
            matrix_rows("even_block", &g.even_block, &mut rows);
            matrix_rows("matrix4", &g.matrix4, &mut rows);
            matrix_rows("tomography_matrix4", &g.tomography.matrix4, &mut rows);
            csv_table(&["quantity", "row", "col", "value"], &rows)
        }
        Results::Dj(runs) => {
            let mut rows = Vec::new();
            for run in runs {
                for (k, p) in run.trajectory.iter().enumerate() {
                    let mut row = vec![format!("{:?}", run.oracle).to_lowercase(), k.to_string(), p.stage.clone()];
                    row.extend(p.amplitudes.iter().map(|z| csv_complex(Complex64::new(z[0], z[1]))));
                    row.push(num(p.residual));
                    row.push(format!("{:?}", run.verdict).to_lowercase());
                    rows.push(row);
                }
            }
            csv_table(&["oracle", "step", "stage", "amp_00", "amp_01", "amp_10", "amp_11", "residual", "verdict"], &rows)
        }
        Results::Noise(n) => {
            let rows: Vec<Vec<String>> = n
                .runs
                .iter()
                .map(|r| {
                    let mut row = vec![
                        r.noise.clone(),
                        r.annihilated.to_string(),
                        opt(r.fidelity),
                        opt(r.leakage),
                        opt(r.survival),
                        r.unaffected.to_string(),
                    ];
                    // even-sector density entries ρ[00,00], ρ[00,11], ρ[11,00], ρ[11,11]
                    for (a, b) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
                        row.push(
                            r.output_density
                                .as_ref()
                                .map(|d| csv_complex(Complex64::new(d[a][b][0], d[a][b][1])))
                                .unwrap_or_default(),
                        );
                    }
                    row
                })
                .collect();
            csv_table(
                &["noise", "annihilated", "fidelity", "leakage", "survival", "unaffected", "rho_00_00", "rho_00_11", "rho_11_00", "rho_11_11"],
                &rows,
            )
        }
        Results::Sweep(s) => {
            let rows: Vec<Vec<String>> = s
                .points
                .iter()
                .map(|p| {
                    let mut row = vec![s.parameter.to_string(), num(p.value), num(p.process_fidelity), num(p.distance), num(p.leakage)];
                    row.extend(p.even_block.iter().flatten().map(|z| csv_complex(Complex64::new(z[0], z[1]))));
                    row
                })
                .collect();
            csv_table(&["parameter", "value", "process_fidelity", "distance", "leakage", "b00", "b01", "b10", "b11"], &rows)
        }
    }
}
