//! Entanglement distance of mixed states.
//!
//! For an ensemble `ρ = Σ_j p_j ρ_j` and one SU(2) element `U_j` per member
//! acting on qubit `mu`, the partially rotated state is
//! `ρ_U = Σ_j p_j U_j ρ_j U_j†`. The entanglement distance is
//!
//! ```text
//! E(ρ) = inf_{p_j, ρ_j} Σ_mu inf_{U_j} C_mu(ρ_U)
//! ```
//!
//! The inner infimum is a smooth-almost-everywhere problem in `3 · members`
//! angles and is attacked with restarted Nelder–Mead. The outer infimum is
//! either pinned to the spectral decomposition (`EigenOnly`, exact for
//! Bell-diagonal states) or searched over isometric remixings of it (`Full`).

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, C64};
use crate::optim::{self, NelderMeadOptions};
use crate::oracles::{self, BdWeights, BellLabel};
use crate::qcd::{self, qubit_qcd_raw};
use crate::qstate::{purity, DensityMatrix};
use crate::random::{sample_su2, substream};
use crate::su2;

pub const WEIGHT_SUM_TOL: f64 = 1e-10;
pub const RECONSTRUCTION_TOL: f64 = 1e-10;
pub const EIGEN_DROP_TOL: f64 = 1e-12;
pub const PURE_MEMBER_TOL: f64 = 1e-10;
pub const ISOMETRY_TOL: f64 = 1e-10;
/// Off-diagonal Bell-basis magnitude below which a two-qubit state is treated
/// as Bell-diagonal when resolving degenerate eigenspaces.
pub const BELL_DIAGONAL_TOL: f64 = 1e-12;
const MIN_MIXED_WEIGHT: f64 = 1e-14;

/// Ensemble `{p_j, ρ_j}` with strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    weights: Vec<f64>,
    members: Vec<DensityMatrix>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, members: Vec<DensityMatrix>) -> Result<Self> {
        if weights.len() != members.len() || members.is_empty() {
            return Err(Error::CountMismatch { expected: weights.len(), got: members.len() });
        }
        if let Some(&w) = weights.iter().find(|&&w| !(w > 0.0)) {
            return Err(Error::BadWeights { reason: format!("non-positive weight {w}") });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadWeights { reason: format!("weights sum to {sum}") });
        }
        let dim = members[0].dim();
        if let Some(bad) = members.iter().find(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch { left: (dim, dim), right: (bad.dim(), bad.dim()) });
        }
        Ok(Self { weights, members })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[DensityMatrix] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.members[0].num_qubits()
    }

    /// `Σ_j p_j ρ_j`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let dim = self.members[0].dim();
        let mut acc = DMatrix::zeros(dim, dim);
        for (w, m) in self.weights.iter().zip(&self.members) {
            acc += m.entries() * C64::new(*w, 0.0);
        }
        acc
    }

    /// Max-norm distance between the reconstruction and `rho`.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        linalg::max_abs_diff(&self.reconstruct(), rho.entries())
    }

    /// Same member states in the same order, up to `1e-9` per entry. Weights
    /// are not compared.
    pub fn same_members(&self, other: &Decomposition) -> bool {
        self.len() == other.len()
            && self.members.iter().zip(&other.members).all(|(x, y)| {
                x.dim() == y.dim() && linalg::max_abs_diff(x.entries(), y.entries()) < 1e-9
            })
    }

    /// State vectors of the members when all of them are pure.
    pub fn pure_vectors(&self) -> Option<Vec<DVector<C64>>> {
        self.members.iter().map(pure_vector).collect()
    }
}

fn pure_vector(member: &DensityMatrix) -> Option<DVector<C64>> {
    if (purity(member) - 1.0).abs() > PURE_MEMBER_TOL {
        return None;
    }
    let e = member.entries();
    let pivot = (0..member.dim()).max_by(|&a, &b| e[(a, a)].re.total_cmp(&e[(b, b)].re))?;
    let scale = e[(pivot, pivot)].re.sqrt();
    Some(e.column(pivot).map(|z| z / scale).into_owned())
}

/// One ZYZ angle triple per ensemble member, all acting on `qubit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalUnitaryAssignment {
    pub qubit: usize,
    pub angles: Vec<[f64; 3]>,
}

impl LocalUnitaryAssignment {
    pub fn identity(qubit: usize, members: usize) -> Self {
        Self { qubit, angles: vec![[0.0; 3]; members] }
    }

    fn from_flat(qubit: usize, flat: &[f64]) -> Self {
        Self { qubit, angles: flat.chunks(3).map(|c| [c[0], c[1], c[2]]).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdMode {
    /// Decomposition fixed to the spectral one.
    #[default]
    EigenOnly,
    /// Additionally search isometric remixings of the spectral decomposition.
    Full,
}

impl FromStr for EdMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eigen-only" => Ok(EdMode::EigenOnly),
            "full" => Ok(EdMode::Full),
            other => Err(Error::InvalidOptions(format!("unknown mode {other:?}, expected eigen-only or full"))),
        }
    }
}

impl std::fmt::Display for EdMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EdMode::EigenOnly => "eigen-only",
            EdMode::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerOptions {
    /// Random restarts per inner minimization, on top of the identity start.
    pub restarts: usize,
    pub seed: u64,
    pub mode: EdMode,
    /// Largest ensemble size tried in `Full` mode; `None` means `rank²`.
    pub m_max: Option<usize>,
    /// Random isometries tried per ensemble size in `Full` mode.
    pub full_restarts: usize,
    pub ftol: f64,
    pub max_evals: usize,
    pub initial_step: f64,
    /// Totals below this are reported as exactly zero.
    pub zero_threshold: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            mode: EdMode::EigenOnly,
            m_max: None,
            full_restarts: 4,
            ftol: 1e-10,
            max_evals: 20_000,
            initial_step: 0.8,
            zero_threshold: 1e-3,
        }
    }
}

impl OptimizerOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.ftol > 0.0) || self.max_evals == 0 || !(self.zero_threshold >= 0.0) || !(self.initial_step > 0.0) {
            return Err(Error::InvalidOptions(
                "ftol and initial_step must be positive, max_evals nonzero, zero_threshold non-negative".into(),
            ));
        }
        Ok(())
    }

    fn nelder_mead(&self) -> NelderMeadOptions {
        NelderMeadOptions {
            ftol: self.ftol,
            max_evals: self.max_evals,
            initial_step: self.initial_step,
            ..Default::default()
        }
    }
}

/// Diagnostics of one inner minimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerReport {
    pub qubit: usize,
    /// Best objective of each start, identity start first, warm starts last.
    pub restart_values: Vec<f64>,
    pub converged: Vec<bool>,
    pub best_start: usize,
    pub evals: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InnerResult {
    pub value: f64,
    pub assignment: LocalUnitaryAssignment,
    pub report: InnerReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullSearchReport {
    pub ensemble_sizes: Vec<usize>,
    /// Best joint objective per ensemble size.
    pub best_per_size: Vec<f64>,
    pub improved_on_eigen: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerReport {
    pub mode: EdMode,
    pub restarts: usize,
    pub raw_total: f64,
    pub raw_per_qubit: Vec<f64>,
    pub clamped: bool,
    pub inner: Vec<InnerReport>,
    pub full_search: Option<FullSearchReport>,
}

/// Decomposition and per-qubit assignments achieving the reported value.
#[derive(Debug, Clone, PartialEq)]
pub struct EdWitness {
    pub decomposition: Decomposition,
    pub assignments: Vec<LocalUnitaryAssignment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdResult {
    pub total: f64,
    pub per_qubit: Vec<f64>,
    pub witness: EdWitness,
    pub report: OptimizerReport,
}

/// Bell-projector ensemble of a Bell-diagonal state; zero weights dropped,
/// the remaining members kept in [`BellLabel::ALL`] order.
pub fn bell_decomposition(w: &BdWeights) -> (Decomposition, Vec<BellLabel>) {
    let mut weights = Vec::new();
    let mut members = Vec::new();
    let mut labels = Vec::new();
    for (p, label) in w.weights().iter().zip(BellLabel::ALL) {
        if *p > EIGEN_DROP_TOL {
            weights.push(*p);
            members.push(oracles::bell_state(label).projector());
            labels.push(label);
        }
    }
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|x| *x /= sum);
    (Decomposition::new(weights, members).expect("Bell weights are a simplex point"), labels)
}

/// Spectral decomposition, weights descending, eigenvalues below `1e-12`
/// dropped. Degenerate eigenspaces of Bell-diagonal two-qubit states are
/// resolved in the Bell basis; otherwise the solver's basis is used.
pub fn eigen_decomposition(rho: &DensityMatrix) -> Decomposition {
    if let Some(p) = oracles::bell_diagonal_weights(rho, BELL_DIAGONAL_TOL) {
        let mut order: Vec<usize> = (0..4).filter(|&k| p[k] > EIGEN_DROP_TOL).collect();
        order.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
        let basis = oracles::bell_basis();
        let sum: f64 = order.iter().map(|&k| p[k]).sum();
        let weights = order.iter().map(|&k| p[k] / sum).collect();
        let members = order.iter().map(|&k| basis[k].projector()).collect();
        return Decomposition::new(weights, members).expect("Bell weights are a simplex point");
    }
    let (values, vectors) = linalg::hermitian_eigh(rho.entries());
    let kept: Vec<usize> = (0..values.len()).filter(|&k| values[k] > EIGEN_DROP_TOL).collect();
    let sum: f64 = kept.iter().map(|&k| values[k]).sum();
    let weights = kept.iter().map(|&k| values[k] / sum).collect();
    let members = kept
        .iter()
        .map(|&k| {
            let v = vectors.column(k).into_owned();
            DensityMatrix::from_trusted(rho.num_qubits(), &v * v.adjoint())
        })
        .collect();
    Decomposition::new(weights, members).expect("spectral weights are a simplex point")
}

fn isometry_violation(v: &DMatrix<C64>) -> f64 {
    let gram = v.adjoint() * v;
    linalg::max_abs_diff(&gram, &DMatrix::identity(v.ncols(), v.ncols()))
}

/// Unnormalized remixed vectors `Σ_j V_kj √p_j |ψ_j>`.
fn remix_vectors(weights: &[f64], vectors: &[DVector<C64>], v: &DMatrix<C64>) -> Vec<DVector<C64>> {
    let dim = vectors[0].len();
    (0..v.nrows())
        .map(|k| {
            let mut acc = DVector::zeros(dim);
            for (j, (p, psi)) in weights.iter().zip(vectors).enumerate() {
                acc += psi * (v[(k, j)] * p.sqrt());
            }
            acc
        })
        .collect()
}

fn decomposition_from_unnormalized(num_qubits: usize, raw: &[DVector<C64>]) -> Result<(Decomposition, Vec<usize>)> {
    let mut weights = Vec::new();
    let mut members = Vec::new();
    let mut kept = Vec::new();
    for (k, phi) in raw.iter().enumerate() {
        let q = phi.norm_squared();
        if q > MIN_MIXED_WEIGHT {
            let unit = phi / C64::new(q.sqrt(), 0.0);
            members.push(DensityMatrix::from_trusted(num_qubits, &unit * unit.adjoint()));
            weights.push(q);
            kept.push(k);
        }
    }
    let sum: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|x| *x /= sum);
    Ok((Decomposition::new(weights, members)?, kept))
}

/// Remixes a pure-member ensemble with an `m x r` isometry `V`:
/// `|φ_k> ∝ Σ_j V_kj √p_j |ψ_j>`, weights being the squared norms. Members
/// with vanishing weight are dropped.
pub fn mix_decomposition(base: &Decomposition, isometry: &DMatrix<C64>) -> Result<Decomposition> {
    let vectors = base
        .members
        .iter()
        .enumerate()
        .map(|(index, m)| pure_vector(m).ok_or(Error::NonPureBase { index, purity: purity(m) }))
        .collect::<Result<Vec<_>>>()?;
    let r = base.len();
    if isometry.ncols() != r || isometry.nrows() < r {
        return Err(Error::DimensionMismatch { left: isometry.shape(), right: (r.max(isometry.nrows()), r) });
    }
    let violation = isometry_violation(isometry);
    if violation > ISOMETRY_TOL {
        return Err(Error::NonIsometric { violation });
    }
    let raw = remix_vectors(&base.weights, &vectors, isometry);
    Ok(decomposition_from_unnormalized(base.num_qubits(), &raw)?.0)
}

fn check_assignment(decomp: &Decomposition, assignment: &LocalUnitaryAssignment) -> Result<()> {
    if assignment.angles.len() != decomp.len() {
        return Err(Error::CountMismatch { expected: decomp.len(), got: assignment.angles.len() });
    }
    if assignment.qubit >= decomp.num_qubits() {
        return Err(Error::QubitOutOfRange { qubit: assignment.qubit, num_qubits: decomp.num_qubits() });
    }
    Ok(())
}

/// `ρ_U = Σ_j p_j U_j ρ_j U_j†` with every `U_j` on the assignment's qubit.
pub fn apply_local_mix(decomp: &Decomposition, assignment: &LocalUnitaryAssignment) -> Result<DensityMatrix> {
    check_assignment(decomp, assignment)?;
    let m = decomp.num_qubits();
    let dim = decomp.members[0].dim();
    let mut acc = DMatrix::zeros(dim, dim);
    for ((w, member), angles) in decomp.weights.iter().zip(&decomp.members).zip(&assignment.angles) {
        acc += linalg::conjugate_1q(member.entries(), m, assignment.qubit, &su2::zyz(angles)) * C64::new(*w, 0.0);
    }
    let acc = (&acc + acc.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(acc)
}

/// Evaluation of `C_mu(ρ_U)` specialized to the ensemble representation.
enum Members {
    Pure(Vec<DVector<C64>>),
    Mixed(Vec<DMatrix<C64>>),
}

struct InnerObjective<'a> {
    weights: &'a [f64],
    members: Members,
    num_qubits: usize,
    qubit: usize,
}

impl<'a> InnerObjective<'a> {
    fn new(decomp: &'a Decomposition, qubit: usize) -> Self {
        let members = match decomp.pure_vectors() {
            Some(v) => Members::Pure(v),
            None => Members::Mixed(decomp.members.iter().map(|m| m.entries().clone()).collect()),
        };
        Self { weights: &decomp.weights, members, num_qubits: decomp.num_qubits(), qubit }
    }

    fn eval(&self, flat: &[f64]) -> f64 {
        let dim = 1usize << self.num_qubits;
        let mut rho = DMatrix::<C64>::zeros(dim, dim);
        match &self.members {
            Members::Pure(vectors) => {
                for (j, (w, psi)) in self.weights.iter().zip(vectors).enumerate() {
                    let u = su2::zyz(&[flat[3 * j], flat[3 * j + 1], flat[3 * j + 2]]);
                    let mut moved = psi.clone();
                    linalg::apply_1q_vec(&mut moved, self.num_qubits, self.qubit, &u);
                    rho.ger(C64::new(*w, 0.0), &moved, &moved.conjugate(), C64::new(1.0, 0.0));
                }
            }
            Members::Mixed(mats) => {
                for (j, (w, m)) in self.weights.iter().zip(mats).enumerate() {
                    let u = su2::zyz(&[flat[3 * j], flat[3 * j + 1], flat[3 * j + 2]]);
                    rho += linalg::conjugate_1q(m, self.num_qubits, self.qubit, &u) * C64::new(*w, 0.0);
                }
            }
        }
        qubit_qcd_raw(&rho, self.num_qubits, self.qubit).unwrap_or(f64::INFINITY)
    }
}

/// `C_mu` of the partially rotated ensemble.
pub fn local_mix_qcd(decomp: &Decomposition, assignment: &LocalUnitaryAssignment) -> Result<f64> {
    check_assignment(decomp, assignment)?;
    let rho = apply_local_mix(decomp, assignment)?;
    let a = qcd::correlation_matrix(&rho, assignment.qubit)?;
    Ok(purity(&rho) - a.eigen().0[0])
}

fn start_stream(qubit: usize, restart: usize) -> u64 {
    ((qubit as u64) << 32) | restart as u64
}

fn inner_minimize(
    decomp: &Decomposition,
    qubit: usize,
    opts: &OptimizerOptions,
    restarts: usize,
    extra_starts: &[Vec<[f64; 3]>],
) -> Result<InnerResult> {
    opts.validate()?;
    if qubit >= decomp.num_qubits() {
        return Err(Error::QubitOutOfRange { qubit, num_qubits: decomp.num_qubits() });
    }
    let r = decomp.len();
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(1 + restarts + extra_starts.len());
    starts.push(vec![0.0; 3 * r]);
    for k in 1..=restarts {
        let mut rng = substream(opts.seed, start_stream(qubit, k));
        starts.push((0..r).flat_map(|_| sample_su2(&mut rng)).collect());
    }
    for extra in extra_starts {
        if extra.len() != r {
            return Err(Error::CountMismatch { expected: r, got: extra.len() });
        }
        starts.push(extra.iter().flatten().copied().collect());
    }

    let objective = InnerObjective::new(decomp, qubit);
    let nm = opts.nelder_mead();
    let runs: Vec<optim::Minimum> = starts
        .par_iter()
        .map(|x0| optim::minimize(|x| objective.eval(x), x0, &nm))
        .collect();

    // min by value, ties to the lowest start index
    let best_start = (0..runs.len())
        .min_by(|&a, &b| runs[a].value.total_cmp(&runs[b].value).then(a.cmp(&b)))
        .expect("at least the identity start");
    let best = &runs[best_start];
    let assignment = LocalUnitaryAssignment::from_flat(qubit, &best.x);
    Ok(InnerResult {
        value: best.value,
        assignment,
        report: InnerReport {
            qubit,
            restart_values: runs.iter().map(|m| m.value).collect(),
            converged: runs.iter().map(|m| m.converged).collect(),
            best_start,
            evals: runs.iter().map(|m| m.evals).sum(),
        },
    })
}

/// Locally minimal `C_mu(ρ_U)` over the per-member rotations of qubit `mu`.
/// The identity assignment is always among the starts, so the value never
/// exceeds `C_mu` of the reconstructed state.
pub fn ed_inner(decomp: &Decomposition, qubit: usize, opts: &OptimizerOptions) -> Result<InnerResult> {
    inner_minimize(decomp, qubit, opts, opts.restarts, &[])
}

/// [`ed_inner`] with additional caller-provided starting assignments.
pub fn ed_inner_warm(
    decomp: &Decomposition,
    qubit: usize,
    opts: &OptimizerOptions,
    warm: &[Vec<[f64; 3]>],
) -> Result<InnerResult> {
    inner_minimize(decomp, qubit, opts, opts.restarts, warm)
}

/// Entanglement distance. See [`OptimizerOptions`] for the search controls.
pub fn ed(rho: &DensityMatrix, opts: &OptimizerOptions) -> Result<EdResult> {
    ed_with_warm_start(rho, opts, None)
}

/// [`ed`] with an optional witness from a nearby state used as an extra
/// start when its decomposition coincides with this state's.
pub fn ed_with_warm_start(rho: &DensityMatrix, opts: &OptimizerOptions, warm: Option<&EdWitness>) -> Result<EdResult> {
    opts.validate()?;
    let m = rho.num_qubits();
    let base = eigen_decomposition(rho);
    let warm_angles: Vec<Option<Vec<[f64; 3]>>> = (0..m)
        .map(|q| {
            warm.filter(|w| w.decomposition.same_members(&base))
                .and_then(|w| w.assignments.get(q))
                .map(|a| a.angles.clone())
        })
        .collect();

    let inner: Vec<InnerResult> = (0..m)
        .into_par_iter()
        .map(|q| {
            let extra: Vec<Vec<[f64; 3]>> = warm_angles[q].iter().cloned().collect();
            inner_minimize(&base, q, opts, opts.restarts, &extra)
        })
        .collect::<Result<_>>()?;

    let mut best_values: Vec<f64> = inner.iter().map(|r| r.value).collect();
    let mut witness = EdWitness {
        decomposition: base.clone(),
        assignments: inner.iter().map(|r| r.assignment.clone()).collect(),
    };
    let mut reports: Vec<InnerReport> = inner.into_iter().map(|r| r.report).collect();

    let full_search = if opts.mode == EdMode::Full {
        let found = full_search(&base, &witness, opts)?;
        let report = FullSearchReport {
            ensemble_sizes: found.sizes,
            best_per_size: found.best_per_size,
            improved_on_eigen: false,
        };
        match found.best {
            Some((values, w, inner_reports)) if values.iter().sum::<f64>() < best_values.iter().sum::<f64>() => {
                best_values = values;
                witness = w;
                reports = inner_reports;
                Some(FullSearchReport { improved_on_eigen: true, ..report })
            }
            _ => Some(report),
        }
    } else {
        None
    };

    let raw_total: f64 = best_values.iter().sum();
    let clamped = raw_total < opts.zero_threshold;
    let per_qubit = if clamped { vec![0.0; m] } else { best_values.clone() };
    let total = per_qubit.iter().sum();
    Ok(EdResult {
        total,
        per_qubit,
        witness,
        report: OptimizerReport {
            mode: opts.mode,
            restarts: opts.restarts,
            raw_total,
            raw_per_qubit: best_values,
            clamped,
            inner: reports,
            full_search,
        },
    })
}

struct FullSearchOutcome {
    sizes: Vec<usize>,
    best_per_size: Vec<f64>,
    best: Option<(Vec<f64>, EdWitness, Vec<InnerReport>)>,
}

fn thin_q(z: DMatrix<C64>) -> DMatrix<C64> {
    z.qr().q()
}

fn unpack_isometry(params: &[f64], m: usize, r: usize) -> DMatrix<C64> {
    thin_q(DMatrix::from_fn(m, r, |i, j| C64::new(params[i * r + j], params[m * r + i * r + j])))
}

/// Joint minimization over isometry entries and all qubits' rotations for
/// every ensemble size `r..=m_max`, polished by per-qubit inner searches.
fn full_search(base: &Decomposition, eigen_witness: &EdWitness, opts: &OptimizerOptions) -> Result<FullSearchOutcome> {
    let vectors = base.pure_vectors().ok_or(Error::NonPureBase { index: 0, purity: f64::NAN })?;
    let r = base.len();
    let nq = base.num_qubits();
    let m_max = opts.m_max.unwrap_or(r * r).max(r);
    let nm = opts.nelder_mead();

    let mut sizes = Vec::new();
    let mut best_per_size = Vec::new();
    let mut best: Option<(Vec<f64>, EdWitness, Vec<InnerReport>)> = None;

    for m in r..=m_max {
        let n_iso = 2 * m * r;
        let objective = |params: &[f64]| -> f64 {
            let v = unpack_isometry(&params[..n_iso], m, r);
            let raw = remix_vectors(&base.weights, &vectors, &v);
            let dim = raw[0].len();
            let mut total = 0.0;
            for q in 0..nq {
                let angles = &params[n_iso + 3 * m * q..n_iso + 3 * m * (q + 1)];
                let mut rho = DMatrix::<C64>::zeros(dim, dim);
                for (k, phi) in raw.iter().enumerate() {
                    let u = su2::zyz(&[angles[3 * k], angles[3 * k + 1], angles[3 * k + 2]]);
                    let mut moved = phi.clone();
                    linalg::apply_1q_vec(&mut moved, nq, q, &u);
                    rho.ger(C64::new(1.0, 0.0), &moved, &moved.conjugate(), C64::new(1.0, 0.0));
                }
                total += qubit_qcd_raw(&rho, nq, q).unwrap_or(f64::INFINITY);
            }
            total
        };

        let starts: Vec<Vec<f64>> = (0..opts.full_restarts.max(1))
            .map(|k| {
                let mut x = vec![0.0; n_iso + 3 * m * nq];
                if k == 0 {
                    for j in 0..r {
                        x[j * r + j] = 1.0;
                    }
                    for (q, a) in eigen_witness.assignments.iter().enumerate() {
                        for (j, angles) in a.angles.iter().enumerate() {
                            x[n_iso + 3 * m * q + 3 * j..n_iso + 3 * m * q + 3 * j + 3].copy_from_slice(angles);
                        }
                    }
                } else {
                    let mut rng = substream(opts.seed, (1u64 << 48) | ((m as u64) << 16) | k as u64);
                    use rand::Rng;
                    use rand_distr::StandardNormal;
                    for v in x[..n_iso].iter_mut() {
                        *v = rng.sample::<f64, _>(StandardNormal);
                    }
                    for chunk in x[n_iso..].chunks_mut(3) {
                        chunk.copy_from_slice(&sample_su2(&mut rng));
                    }
                }
                x
            })
            .collect();

        let runs: Vec<optim::Minimum> = starts.par_iter().map(|x0| optim::minimize(objective, x0, &nm)).collect();
        let winner = (0..runs.len())
            .min_by(|&a, &b| runs[a].value.total_cmp(&runs[b].value).then(a.cmp(&b)))
            .expect("at least one start");
        let params = &runs[winner].x;
        sizes.push(m);
        best_per_size.push(runs[winner].value);

        let v = unpack_isometry(&params[..n_iso], m, r);
        let raw = remix_vectors(&base.weights, &vectors, &v);
        let (decomp, kept) = decomposition_from_unnormalized(nq, &raw)?;
        let mut values = Vec::with_capacity(nq);
        let mut assignments = Vec::with_capacity(nq);
        let mut reports = Vec::with_capacity(nq);
        for q in 0..nq {
            let angles = &params[n_iso + 3 * m * q..n_iso + 3 * m * (q + 1)];
            let warm: Vec<[f64; 3]> = kept.iter().map(|&k| [angles[3 * k], angles[3 * k + 1], angles[3 * k + 2]]).collect();
            let polished = inner_minimize(&decomp, q, opts, 0, &[warm])?;
            values.push(polished.value);
            assignments.push(polished.assignment);
            reports.push(polished.report);
        }
        let total: f64 = values.iter().sum();
        if best.as_ref().is_none_or(|(v, _, _)| total < v.iter().sum::<f64>()) {
            best = Some((values, EdWitness { decomposition: decomp, assignments }, reports));
        }
    }
    Ok(FullSearchOutcome { sizes, best_per_size, best })
}

/// `arccos(3/(2p) − 2)` where it exists, i.e. for `p >= ½`.
pub fn werner_fixed_point_angle(p: f64) -> Option<f64> {
    if !(0.0..=1.0).contains(&p) || p == 0.0 {
        return None;
    }
    let arg = 3.0 / (2.0 * p) - 2.0;
    (-1.0..=1.0).contains(&arg).then(|| arg.acos())
}

/// Rotation schedule that cancels the Werner-state coherence at angle `θ`:
/// `ψ+ → R_z(θ) R_x(π)`, `ψ− → R_z(π − θ) R_x(π)`, `φ± → I`, written in ZYZ
/// angles using `R_x(π) ∝ R_z(π/2) R_y(π) R_z(−π/2)`.
pub fn werner_schedule(theta: f64, labels: &[BellLabel], qubit: usize) -> LocalUnitaryAssignment {
    use std::f64::consts::{FRAC_PI_2, PI};
    let angles = labels
        .iter()
        .map(|label| match label {
            BellLabel::PsiPlus => [theta + FRAC_PI_2, PI, -FRAC_PI_2],
            BellLabel::PsiMinus => [PI - theta + FRAC_PI_2, PI, -FRAC_PI_2],
            BellLabel::PhiPlus | BellLabel::PhiMinus => [0.0; 3],
        })
        .collect();
    LocalUnitaryAssignment { qubit, angles }
}
