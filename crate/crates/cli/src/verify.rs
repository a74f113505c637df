//! Cross-checks between closed forms, oracles and the optimizer, reported as
//! JSON. Every property draws from its own seeded stream, so the report is
//! byte-identical for a fixed seed.

use entdist::linalg::{Mat2, C64};
use entdist::oracles::{
    bd_correlations, bd_qcd, bd_state_in_basis, bell_basis, bell_state, concurrence, is_ppt, werner_ed,
    werner_qcd, werner_state, BellLabel,
};
use entdist::qcd::{metric_mixed, qcd_bruteforce};
use entdist::random::{sample_density, sample_local_unitaries, sample_pure_state, sample_simplex, substream, SeededRng};
use entdist::{ed, fs_metric, pure_ed, qcd, su2, BdWeights, DensityMatrix, OptimizerOptions, UnitVector3};
use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::config::Fault;

pub const DEFAULT_COUNT: usize = 20;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub pass: bool,
    pub checked: usize,
    pub worst: f64,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<&'static str>,
    pub passed: usize,
    pub failed: usize,
    pub properties: Vec<PropertyResult>,
}

struct Ctx {
    seed: u64,
    count: usize,
    fault: Option<Fault>,
    options: OptimizerOptions,
}

impl Ctx {
    fn rng(&self, stream: u64) -> SeededRng {
        substream(self.seed, stream)
    }

    fn bd_state(&self, w: &BdWeights) -> DensityMatrix {
        let mut basis = bell_basis();
        if self.fault == Some(Fault::BellSign) {
            basis[0] = bell_state(BellLabel::PsiMinus);
        }
        bd_state_in_basis(w, &basis).expect("Bell projector mixture is a state")
    }
}

fn check(name: &'static str, tolerance: f64, errors: impl IntoIterator<Item = f64>) -> PropertyResult {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for e in errors {
        // NaN counts as a failure
        worst = if e.is_nan() { f64::INFINITY } else { worst.max(e) };
        checked += 1;
    }
    PropertyResult { name, pass: worst <= tolerance, checked, worst, tolerance }
}

fn bd_weights(rng: &mut SeededRng) -> BdWeights {
    let p = sample_simplex(rng, 4);
    BdWeights::new([p[0], p[1], p[2], p[3]]).expect("simplex sample")
}

fn local(rng: &mut SeededRng, m: usize) -> Vec<Mat2> {
    sample_local_unitaries(rng, m).iter().map(su2::zyz).collect()
}

fn random_mixed(rng: &mut SeededRng) -> DensityMatrix {
    let m = rng.random_range(2..=3);
    let rank = rng.random_range(1..=(1usize << m));
    sample_density(rng, m, rank)
}

fn direction(rng: &mut SeededRng) -> UnitVector3 {
    UnitVector3::from_angles((1.0 - 2.0 * rng.random::<f64>()).acos(), rng.random::<f64>() * std::f64::consts::TAU)
}

fn grid() -> impl Iterator<Item = f64> {
    (0..=20).map(|i| i as f64 / 20.0)
}

fn werner_qcd_curve(_: &Ctx) -> PropertyResult {
    check(
        "werner_qcd_curve",
        1e-10,
        grid().map(|p| (qcd(&werner_state(p).unwrap()).unwrap().total - werner_qcd(p).unwrap()).abs()),
    )
}

fn werner_ed_curve(ctx: &Ctx) -> PropertyResult {
    check(
        "werner_ed_curve",
        1e-3,
        grid().map(|p| (ed(&werner_state(p).unwrap(), &ctx.options).unwrap().total - werner_ed(p).unwrap()).abs()),
    )
}

fn bd_closed_form(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(3);
    check(
        "bd_closed_form",
        1e-10,
        (0..ctx.count).map(|_| {
            let w = bd_weights(&mut rng);
            (qcd(&ctx.bd_state(&w)).unwrap().total - bd_qcd(&w)).abs()
        }),
    )
}

fn bd_correlation_vector(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(4);
    check(
        "bd_correlation_vector",
        1e-12,
        (0..ctx.count).map(|_| {
            let w = bd_weights(&mut rng);
            let got = bd_correlations(&ctx.bd_state(&w)).unwrap();
            let want = w.correlations().components();
            (0..3).map(|i| (got[i] - want[i]).abs()).fold(0.0, f64::max)
        }),
    )
}

fn ppt_vs_octahedron(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(5);
    let mismatches = (0..ctx.count).filter_map(|_| {
        let w = bd_weights(&mut rng);
        let margin = w.max_weight() - 0.5;
        (margin.abs() > 1e-9).then(|| {
            let agree = is_ppt(&ctx.bd_state(&w), 0).unwrap() == w.correlations().in_octahedron(0.0);
            if agree {
                0.0
            } else {
                1.0
            }
        })
    });
    check("ppt_vs_octahedron", 0.0, mismatches.collect::<Vec<_>>())
}

fn pure_reduction(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(6);
    check(
        "pure_reduction",
        1e-10,
        (0..ctx.count).map(|i| {
            let s = sample_pure_state(&mut rng, 2 + i % 3);
            (qcd(&s.projector()).unwrap().total - pure_ed(&s).unwrap()).abs()
        }),
    )
}

fn classical_nullity(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(7);
    check(
        "classical_nullity",
        1e-10,
        (0..ctx.count).map(|i| {
            let m = 2 + i % 2;
            let p = sample_simplex(&mut rng, 1 << m);
            let diag = DMatrix::from_fn(1 << m, 1 << m, |a, b| C64::new(if a == b { p[a] } else { 0.0 }, 0.0));
            let us = local(&mut rng, m);
            let rho = DensityMatrix::new(diag).unwrap().conjugate_local(&us).unwrap();
            qcd(&rho).unwrap().total.abs()
        }),
    )
}

fn lu_invariance(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(8);
    check(
        "lu_invariance",
        1e-9,
        (0..ctx.count).map(|_| {
            let rho = random_mixed(&mut rng);
            let moved = rho.conjugate_local(&local(&mut rng, rho.num_qubits())).unwrap();
            (qcd(&moved).unwrap().total - qcd(&rho).unwrap().total).abs()
        }),
    )
}

fn bruteforce_oracle(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(9);
    check(
        "bruteforce_oracle",
        1e-3,
        (0..ctx.count).map(|_| {
            let rank = rng.random_range(1..=4);
            let rho = sample_density(&mut rng, 2, rank);
            (qcd_bruteforce(&rho, 1.0).unwrap() - qcd(&rho).unwrap().total).abs()
        }),
    )
}

fn ed_vs_concurrence(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(10);
    check(
        "ed_vs_twice_squared_concurrence",
        2e-3,
        (0..ctx.count.min(10)).map(|_| {
            let rho = ctx.bd_state(&bd_weights(&mut rng));
            let c = concurrence(&rho).unwrap();
            (ed(&rho, &ctx.options).unwrap().total - 2.0 * c * c).abs()
        }),
    )
}

fn ed_bounded_by_qcd(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(11);
    check(
        "ed_bounded_by_qcd",
        1e-6,
        (0..ctx.count.min(10)).map(|_| {
            let rho = random_mixed(&mut rng);
            (ed(&rho, &ctx.options).unwrap().total - qcd(&rho).unwrap().total).max(0.0)
        }),
    )
}

fn metric_consistency(ctx: &Ctx) -> PropertyResult {
    let mut rng = ctx.rng(12);
    check(
        "metric_consistency",
        1e-10,
        (0..ctx.count).map(|_| {
            let m = rng.random_range(2..=3);
            let s = sample_pure_state(&mut rng, m);
            let dirs: Vec<UnitVector3> = (0..m).map(|_| direction(&mut rng)).collect();
            let g = metric_mixed(&s.projector(), &dirs).unwrap();
            (g.entries() - fs_metric(&s, &dirs).unwrap().entries()).abs().max()
        }),
    )
}

pub fn run(seed: u64, count: usize, fault: Option<Fault>, options: &OptimizerOptions) -> VerifyReport {
    let ctx = Ctx { seed, count, fault, options: options.clone() };
    let checks: [fn(&Ctx) -> PropertyResult; 12] = [
        werner_qcd_curve,
        werner_ed_curve,
        bd_closed_form,
        bd_correlation_vector,
        ppt_vs_octahedron,
        pure_reduction,
        classical_nullity,
        lu_invariance,
        bruteforce_oracle,
        ed_vs_concurrence,
        ed_bounded_by_qcd,
        metric_consistency,
    ];
    let properties: Vec<PropertyResult> = checks.iter().map(|f| f(&ctx)).collect();
    let passed = properties.iter().filter(|p| p.pass).count();
    VerifyReport {
        seed,
        count,
        fault: fault.map(|f| match f {
            Fault::BellSign => "bell-sign",
        }),
        passed,
        failed: properties.len() - passed,
        properties,
    }
}
