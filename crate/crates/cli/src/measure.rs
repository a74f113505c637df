use std::path::Path;

use entdist::ed_mixed::OptimizerReport;
use entdist::oracles::{concurrence, ppt_min_eigenvalue, PPT_TOL};
use entdist::qstate::{bloch_vector, purity};
use entdist::{ed, parse_state, pure_ed, qcd, LocalUnitaryAssignment, StateInput, UnitVector3};
use serde::Serialize;

use crate::config::{Measure, Settings};
use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct QubitQcdReport {
    pub qubit: usize,
    pub c: f64,
    pub lambda_max: f64,
    pub optimal_direction: UnitVector3,
}

#[derive(Debug, Serialize)]
pub struct QcdReport {
    pub total: f64,
    pub per_qubit: Vec<QubitQcdReport>,
}

#[derive(Debug, Serialize)]
pub struct EdReport {
    pub total: f64,
    pub per_qubit: Vec<f64>,
    pub decomposition_weights: Vec<f64>,
    pub assignments: Vec<LocalUnitaryAssignment>,
    pub optimizer_report: OptimizerReport,
}

#[derive(Debug, Serialize)]
pub struct PptReport {
    pub qubit: usize,
    pub min_eigenvalue: f64,
    pub ppt: bool,
}

#[derive(Debug, Serialize)]
pub struct MeasureReport {
    pub num_qubits: usize,
    pub pure: bool,
    pub paper_normalization: bool,
    pub purity: f64,
    pub bloch_vectors: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pure_ed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qcd: Option<QcdReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ed: Option<EdReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub concurrence: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ppt: Option<Vec<PptReport>>,
}

/// Default measure set: everything that applies to the state's size.
fn default_measures(num_qubits: usize) -> Vec<Measure> {
    if num_qubits == 2 {
        vec![Measure::Qcd, Measure::Ed, Measure::Concurrence, Measure::Ppt]
    } else {
        vec![Measure::Qcd, Measure::Ed, Measure::Ppt]
    }
}

pub fn load_state(path: &Path) -> CliResult<StateInput> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::file(path, e))?;
    parse_state(&text).map_err(|e| match e {
        entdist::Error::Parse(message) => CliError::file(path, format!("Parse: {message}")),
        other => CliError::Invariant(other),
    })
}

pub fn measure(state: StateInput, settings: &Settings) -> CliResult<MeasureReport> {
    let m = state.num_qubits();
    let measures = settings.measures.clone().unwrap_or_else(|| default_measures(m));
    let scale = settings.scale();
    let pure_value = match &state {
        StateInput::Pure(s) => Some(pure_ed(s)? * scale),
        StateInput::Mixed(_) => None,
    };
    let pure = pure_value.is_some();
    let rho = state.into_density();
    let bloch_vectors = (0..m).map(|q| bloch_vector(&rho, q).map(|b| b.components())).collect::<Result<_, _>>()?;

    let mut report = MeasureReport {
        num_qubits: m,
        pure,
        paper_normalization: settings.paper_normalization,
        purity: purity(&rho),
        bloch_vectors,
        pure_ed: pure_value,
        qcd: None,
        ed: None,
        concurrence: None,
        ppt: None,
    };
    for measure in measures {
        match measure {
            Measure::Qcd => {
                let r = qcd(&rho)?;
                report.qcd = Some(QcdReport {
                    total: r.total * scale,
                    per_qubit: r
                        .per_qubit
                        .iter()
                        .enumerate()
                        .map(|(qubit, x)| QubitQcdReport {
                            qubit,
                            c: x.c * scale,
                            lambda_max: x.lambda_max,
                            optimal_direction: x.optimal_direction,
                        })
                        .collect(),
                });
            }
            Measure::Ed => {
                let r = ed(&rho, &settings.optimizer)?;
                report.ed = Some(EdReport {
                    total: r.total * scale,
                    per_qubit: r.per_qubit.iter().map(|x| x * scale).collect(),
                    decomposition_weights: r.witness.decomposition.weights().to_vec(),
                    assignments: r.witness.assignments,
                    optimizer_report: r.report,
                });
            }
            Measure::Concurrence => report.concurrence = Some(concurrence(&rho)?),
            Measure::Ppt => {
                report.ppt = Some(
                    (0..m)
                        .map(|qubit| {
                            let min_eigenvalue = ppt_min_eigenvalue(&rho, qubit)?;
                            Ok(PptReport { qubit, min_eigenvalue, ppt: min_eigenvalue >= -PPT_TOL })
                        })
                        .collect::<Result<_, entdist::Error>>()?,
                );
            }
        }
    }
    Ok(report)
}

pub fn run(path: &Path, settings: &Settings) -> CliResult<String> {
    let report = measure(load_state(path)?, settings)?;
    Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
}
