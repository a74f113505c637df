//! Parameter sweeps over the Werner line and the Bell-diagonal tetrahedron.
//!
//! Grid points are evaluated in parallel and written in grid order, so the
//! CSV is identical for any worker count.

use entdist::ed_mixed::ed_with_warm_start;
use entdist::oracles::{bd_from_c, concurrence, is_ppt, werner_ed, werner_qcd, werner_state};
use entdist::{ed, qcd, BdCorrelationVector, DensityMatrix, EdResult, Error, OptimizerOptions};
use rayon::prelude::*;

use crate::config::{Family, Measure, Settings};
use crate::error::{CliError, CliResult};

pub const MIN_POINTS_PER_AXIS: usize = 2;

/// `n` equally spaced points from `lo` to `hi` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl Axis {
    pub fn points(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        (0..self.n).map(|i| (self.lo * (last - i as f64) + self.hi * i as f64) / last).collect()
    }

    fn parse(spec: &str, name: &'static str, domain: (f64, f64)) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("grid spec {spec:?} is not N or lo:hi:N"));
        let parts: Vec<&str> = spec.trim().split(':').collect();
        let (lo, hi, n) = match parts.as_slice() {
            [n] => (domain.0, domain.1, n.trim().parse::<usize>().map_err(|_| bad())?),
            [lo, hi, n] => (
                lo.trim().parse::<f64>().map_err(|_| bad())?,
                hi.trim().parse::<f64>().map_err(|_| bad())?,
                n.trim().parse::<usize>().map_err(|_| bad())?,
            ),
            _ => return Err(bad()),
        };
        if n < MIN_POINTS_PER_AXIS {
            return Err(Error::ParameterOutOfRange {
                name: "grid points per axis",
                value: n as f64,
                min: MIN_POINTS_PER_AXIS as f64,
                max: f64::INFINITY,
            }
            .into());
        }
        for v in [lo, hi] {
            if !(domain.0..=domain.1).contains(&v) {
                return Err(Error::ParameterOutOfRange { name, value: v, min: domain.0, max: domain.1 }.into());
            }
        }
        Ok(Self { lo, hi, n })
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub axes: Vec<Axis>,
    pub measures: Vec<Measure>,
    pub options: OptimizerOptions,
    pub paper_normalization: bool,
}

impl SweepSpec {
    pub fn new(family: Family, grid: Option<&str>, settings: &Settings) -> CliResult<Self> {
        let (names, domain, default_n): (&[&'static str], _, usize) = match family {
            Family::Werner => (&["p"], (0.0, 1.0), 21),
            Family::BdFace => (&["c1", "c3"], (-1.0, 1.0), 21),
            Family::BdCustom => (&["c1", "c2", "c3"], (-1.0, 1.0), 11),
        };
        let specs: Vec<String> = match grid {
            None => vec![default_n.to_string()],
            Some(g) => g.split(',').map(str::to_owned).collect(),
        };
        let axes = match specs.len() {
            1 => {
                let axis = Axis::parse(&specs[0], names[0], domain)?;
                vec![axis; names.len()]
            }
            k if k == names.len() => specs
                .iter()
                .zip(names)
                .map(|(s, name)| Axis::parse(s, name, domain))
                .collect::<CliResult<_>>()?,
            k => {
                return Err(CliError::Usage(format!(
                    "{k} grid specs given, family takes 1 or {}",
                    names.len()
                )))
            }
        };
        let measures = settings.measures.clone().unwrap_or_else(|| match family {
            Family::Werner => vec![Measure::Qcd, Measure::Ed, Measure::Concurrence],
            Family::BdFace | Family::BdCustom => vec![Measure::Qcd, Measure::Ed, Measure::Ppt],
        });
        Ok(Self {
            family,
            axes,
            measures,
            options: settings.optimizer.clone(),
            paper_normalization: settings.paper_normalization,
        })
    }

    fn scale(&self) -> f64 {
        if self.paper_normalization {
            0.5
        } else {
            1.0
        }
    }

    fn has(&self, m: Measure) -> bool {
        self.measures.contains(&m)
    }
}

fn number(x: f64) -> String {
    // normalizes -0
    format!("{}", x + 0.0)
}

fn coordinate(x: f64) -> String {
    format!("{:.6}", (x * 1e6).round() / 1e6 + 0.0)
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// Werner ED with a second pass started from the neighbours' witnesses.
fn werner_eds(states: &[DensityMatrix], opts: &OptimizerOptions) -> CliResult<Vec<EdResult>> {
    let first: Vec<EdResult> = states.par_iter().map(|rho| ed(rho, opts)).collect::<Result<_, _>>()?;
    let second = (0..states.len())
        .into_par_iter()
        .map(|i| {
            let mut best = first[i].clone();
            let neighbours = [i.checked_sub(1), Some(i + 1).filter(|&j| j < states.len())];
            for j in neighbours.into_iter().flatten() {
                let warm = &first[j].witness;
                if !warm.decomposition.same_members(&first[i].witness.decomposition) {
                    continue;
                }
                let r = ed_with_warm_start(&states[i], opts, Some(warm))?;
                if r.report.raw_total < best.report.raw_total {
                    best = r;
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(second)
}

fn werner_table(spec: &SweepSpec) -> CliResult<Table> {
    let ps = spec.axes[0].points();
    let states: Vec<DensityMatrix> = ps.iter().map(|&p| werner_state(p)).collect::<Result<_, _>>()?;
    let s = spec.scale();
    let mut header = vec!["p".to_string()];
    let mut columns: Vec<Vec<String>> = Vec::new();
    if spec.has(Measure::Qcd) {
        let values: Vec<f64> = states.par_iter().map(|rho| qcd(rho).map(|r| r.total)).collect::<Result<_, _>>()?;
        header.push("qcd".into());
        columns.push(values.iter().map(|v| number(v * s)).collect());
    }
    if spec.has(Measure::Ed) {
        let eds = werner_eds(&states, &spec.options)?;
        header.push("ed".into());
        columns.push(eds.iter().map(|r| number(r.total * s)).collect());
    }
    if spec.has(Measure::Qcd) {
        header.push("qcd_closed".into());
        columns.push(ps.iter().map(|&p| werner_qcd(p).map(|v| number(v * s))).collect::<Result<_, _>>()?);
    }
    if spec.has(Measure::Ed) {
        header.push("ed_closed".into());
        columns.push(ps.iter().map(|&p| werner_ed(p).map(|v| number(v * s))).collect::<Result<_, _>>()?);
    }
    if spec.has(Measure::Concurrence) {
        header.push("concurrence".into());
        columns.push(states.iter().map(|rho| concurrence(rho).map(number)).collect::<Result<_, _>>()?);
    }
    if spec.has(Measure::Ppt) {
        header.push("ppt_separable".into());
        columns.push(states.iter().map(|rho| is_ppt(rho, 0).map(|b| b.to_string())).collect::<Result<_, _>>()?);
    }
    let rows = ps
        .iter()
        .enumerate()
        .map(|(i, &p)| std::iter::once(coordinate(p)).chain(columns.iter().map(|c| c[i].clone())).collect())
        .collect();
    Ok(Table { header, rows })
}

fn bd_points(spec: &SweepSpec) -> Vec<(Vec<f64>, BdCorrelationVector)> {
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::points).collect();
    let mut out = Vec::new();
    let mut push = |coords: Vec<f64>, c: [f64; 3]| {
        if let Ok(v) = BdCorrelationVector::new(c) {
            out.push((coords, v));
        }
    };
    match spec.family {
        Family::BdFace => {
            for &c1 in &grids[0] {
                for &c3 in &grids[1] {
                    push(vec![c1, c3], [c1, c1, c3]);
                }
            }
        }
        Family::BdCustom => {
            for &c1 in &grids[0] {
                for &c2 in &grids[1] {
                    for &c3 in &grids[2] {
                        push(vec![c1, c2, c3], [c1, c2, c3]);
                    }
                }
            }
        }
        Family::Werner => unreachable!("Werner sweeps have their own table"),
    }
    out
}

fn bd_table(spec: &SweepSpec) -> CliResult<Table> {
    let mut header: Vec<String> = match spec.family {
        Family::BdFace => vec!["c1".into(), "c3".into()],
        _ => vec!["c1".into(), "c2".into(), "c3".into()],
    };
    for m in &spec.measures {
        header.push(
            match m {
                Measure::Qcd => "qcd",
                Measure::Ed => "ed",
                Measure::Concurrence => "concurrence",
                Measure::Ppt => "ppt_separable",
            }
            .into(),
        );
    }
    let s = spec.scale();
    let rows = bd_points(spec)
        .par_iter()
        .map(|(coords, c)| -> Result<Vec<String>, Error> {
            let rho = bd_from_c(c)?;
            let mut row: Vec<String> = coords.iter().map(|&x| coordinate(x)).collect();
            for m in &spec.measures {
                row.push(match m {
                    Measure::Qcd => number(qcd(&rho)?.total * s),
                    Measure::Ed => number(ed(&rho, &spec.options)?.total * s),
                    Measure::Concurrence => number(concurrence(&rho)?),
                    Measure::Ppt => is_ppt(&rho, 0)?.to_string(),
                });
            }
            Ok(row)
        })
        .collect::<Result<_, _>>()?;
    Ok(Table { header, rows })
}

/// Runs the sweep and renders it as CSV with a header row.
pub fn run(spec: &SweepSpec) -> CliResult<String> {
    let table = match spec.family {
        Family::Werner => werner_table(spec)?,
        Family::BdFace | Family::BdCustom => bd_table(spec)?,
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Usage(format!("csv encoding failed: {e}"));
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CommonArgs, FileConfig};

    fn settings() -> Settings {
        Settings::resolve(CommonArgs { restarts: Some(4), ..Default::default() }, &FileConfig::default()).unwrap()
    }

    #[test]
    fn axis_parsing() {
        let a = Axis::parse("5", "p", (0.0, 1.0)).unwrap();
        assert_eq!(a.points(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let a = Axis::parse("-0.5:0.5:3", "c1", (-1.0, 1.0)).unwrap();
        assert_eq!(a.points(), vec![-0.5, 0.0, 0.5]);
        assert!(matches!(Axis::parse("1", "p", (0.0, 1.0)), Err(CliError::Invariant(_))));
        assert!(matches!(Axis::parse("0:2:3", "p", (0.0, 1.0)), Err(CliError::Invariant(_))));
        assert!(matches!(Axis::parse("a:b", "p", (0.0, 1.0)), Err(CliError::Usage(_))));
    }

    #[test]
    fn face_points_stay_inside_the_tetrahedron() {
        let spec = SweepSpec::new(Family::BdFace, Some("5"), &settings()).unwrap();
        let pts = bd_points(&spec);
        assert!(pts.iter().all(|(x, c)| c.components() == [x[0], x[0], x[1]]));
        // the corners (1, 1, -1) and (-1, -1, -1) are Bell states
        assert!(pts.iter().any(|(x, _)| x == &vec![1.0, -1.0]));
        assert!(pts.iter().any(|(x, _)| x == &vec![-1.0, -1.0]));
        assert!(!pts.iter().any(|(x, _)| x == &vec![1.0, 1.0]));
    }

    #[test]
    fn werner_rows() {
        let spec = SweepSpec::new(Family::Werner, Some("0:1:21"), &settings()).unwrap();
        let csv = run(&spec).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "p,qcd,ed,qcd_closed,ed_closed,concurrence");
        let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
        assert_eq!(rows.len(), 21);
        assert_eq!(rows[0][0], 0.0);
        assert!((rows[0][1] - 2.0).abs() < 1e-12 && (rows[0][2] - 2.0).abs() < 1e-3);
        assert_eq!(rows[12][0], 0.6);
        assert_eq!(rows[12][2], 0.0);
        assert!((rows[12][1] - 0.08).abs() < 1e-12);
    }
}
