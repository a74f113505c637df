//! Derivative-free Nelder–Mead minimization.
//!
//! Termination never relies on stationarity: the run stops when the simplex
//! values collapse to within `ftol`, or when the best value has plateaued
//! (improved by less than `ftol`) for `stall_iterations` iterations. A
//! converged run is re-seeded once around its best point with a smaller
//! simplex to shake it off spurious collapse on kinks.

/// Tuning knobs for [`minimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOptions {
    pub ftol: f64,
    pub max_evals: usize,
    pub initial_step: f64,
    /// Iterations without a `ftol` improvement of the best value before the
    /// run is declared plateaued. `0` picks `50 · dim`.
    pub stall_iterations: usize,
    /// Number of simplex rebuilds around the incumbent after convergence.
    pub rebuilds: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self { ftol: 1e-10, max_evals: 20_000, initial_step: 0.5, stall_iterations: 0, rebuilds: 2 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
    pub converged: bool,
}

struct Counter<F> {
    f: F,
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Counter<F> {
    fn call(&mut self, x: &[f64]) -> f64 {
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

/// Minimizes `f` starting from `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum {
    let mut counter = Counter { f, evals: 0 };
    let mut x = x0.to_vec();
    let mut value = counter.call(&x);
    if x.is_empty() {
        return Minimum { x, value, evals: counter.evals, converged: true };
    }
    let mut step = opts.initial_step;
    let mut converged = false;
    for round in 0..=opts.rebuilds {
        let (bx, bv, ok) = run(&mut counter, &x, value, step, opts);
        let improvement = value - bv;
        if bv <= value {
            x = bx;
            value = bv;
        }
        converged = ok;
        if !ok || counter.evals >= opts.max_evals {
            break;
        }
        if round > 0 && improvement <= opts.ftol {
            break;
        }
        step *= 0.1;
    }
    Minimum { x, value, evals: counter.evals, converged }
}

fn run<F: FnMut(&[f64]) -> f64>(
    counter: &mut Counter<F>,
    x0: &[f64],
    f0: f64,
    step: f64,
    opts: &NelderMeadOptions,
) -> (Vec<f64>, f64, bool) {
    let n = x0.len();
    let nf = n as f64;
    // adaptive coefficients (Gao & Han) behave better than the classic ones
    // once the dimension exceeds a handful
    let (alpha, gamma, rho, sigma) = if n > 2 {
        (1.0, 1.0 + 2.0 / nf, 0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };
    let stall_limit = if opts.stall_iterations == 0 { 50 * n.max(1) } else { opts.stall_iterations };

    let mut pts: Vec<Vec<f64>> = vec![x0.to_vec()];
    let mut vals = vec![f0];
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += step;
        vals.push(counter.call(&p));
        pts.push(p);
    }

    let mut best_seen = f0.min(vals.iter().copied().fold(f64::INFINITY, f64::min));
    let mut stalled = 0usize;
    loop {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        pts = order.iter().map(|&i| pts[i].clone()).collect();
        vals = order.iter().map(|&i| vals[i]).collect();

        if vals[n] - vals[0] <= opts.ftol {
            return (pts[0].clone(), vals[0], true);
        }
        if stalled >= stall_limit {
            return (pts[0].clone(), vals[0], true);
        }
        if counter.evals >= opts.max_evals {
            return (pts[0].clone(), vals[0], false);
        }

        let mut centroid = vec![0.0; n];
        for p in &pts[..n] {
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / nf;
            }
        }
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&pts[n]).map(|(c, w)| c + t * (c - w)).collect()
        };

        let xr = along(alpha);
        let fr = counter.call(&xr);
        if fr < vals[0] {
            let xe = along(alpha * gamma);
            let fe = counter.call(&xe);
            if fe < fr {
                pts[n] = xe;
                vals[n] = fe;
            } else {
                pts[n] = xr;
                vals[n] = fr;
            }
        } else if fr < vals[n - 1] {
            pts[n] = xr;
            vals[n] = fr;
        } else {
            let (xc, fc) = if fr < vals[n] {
                let xc = along(alpha * rho);
                let fc = counter.call(&xc);
                (xc, fc)
            } else {
                let xc = along(-rho);
                let fc = counter.call(&xc);
                (xc, fc)
            };
            if fc < vals[n].min(fr) {
                pts[n] = xc;
                vals[n] = fc;
            } else {
                for i in 1..=n {
                    let shrunk: Vec<f64> =
                        pts[0].iter().zip(&pts[i]).map(|(b, p)| b + sigma * (p - b)).collect();
                    vals[i] = counter.call(&shrunk);
                    pts[i] = shrunk;
                }
            }
        }

        let current_best = vals.iter().copied().fold(f64::INFINITY, f64::min);
        if current_best < best_seen - opts.ftol {
            best_seen = current_best;
            stalled = 0;
        } else {
            best_seen = best_seen.min(current_best);
            stalled += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let m = minimize(f, &[-1.2, 1.0], &NelderMeadOptions { initial_step: 0.1, ..Default::default() });
        assert!(m.converged);
        assert!(m.value < 1e-8, "{m:?}");
        assert!((m.x[0] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn nonsmooth_high_dimensional() {
        let f = |x: &[f64]| x.iter().enumerate().map(|(i, v)| (v - i as f64).abs()).sum::<f64>();
        let m = minimize(f, &[0.0; 8], &NelderMeadOptions::default());
        assert!(m.value < 1e-4, "{m:?}");
    }

    #[test]
    fn respects_eval_budget() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let m = minimize(f, &[5.0; 10], &NelderMeadOptions { max_evals: 30, ..Default::default() });
        assert!(!m.converged);
        assert!(m.evals <= 30 + 12);
        assert!(m.value <= 250.0);
    }

    #[test]
    fn never_worse_than_start() {
        let f = |x: &[f64]| (x[0] * 3.0).sin() + x[1].cos();
        let x0 = [0.2, -0.4];
        let m = minimize(f, &x0, &NelderMeadOptions::default());
        assert!(m.value <= f(&x0));
    }
}
