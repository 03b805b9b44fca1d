//! Equilibria inside a stoichiometric class and multistart probing.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::{self, dot, norm2, norm_inf};
use super::{DynamicsError, IntegratorOptions, MassAction};

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumOptions {
    /// Bound on `|f(x)|_inf`, scaled up by the largest flux when that exceeds 1.
    pub tol: f64,
    pub max_iter: usize,
    /// Smallest accepted component, relative to `|x0|_inf`.
    pub positivity_floor: f64,
    /// Cluster radius, relative to `|x0|_inf`.
    pub cluster_radius: f64,
    /// If Newton fails from a start, integrate this long and retry once.
    /// Zero disables the retry.
    pub relax_time: f64,
}

impl Default for EquilibriumOptions {
    fn default() -> Self {
        EquilibriumOptions {
            tol: 1e-10,
            max_iter: 100,
            positivity_floor: 1e-8,
            cluster_radius: 1e-6,
            relax_time: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub state: Vec<f64>,
    /// `|f(x)|_inf` at `state`.
    pub residual: f64,
    /// Largest `|w . (x - x0)|` over the normalized conservation laws.
    pub class_residual: f64,
    pub iterations: usize,
}

/// Why no equilibrium was returned.
#[derive(Debug, Clone, PartialEq)]
pub enum EquilibriumFailure {
    NotConverged { iterations: usize, residual: f64 },
    /// Newton converged to a point with a component below the positivity floor.
    Boundary { index: usize, value: f64 },
    Input(DynamicsError),
}

impl From<DynamicsError> for EquilibriumFailure {
    fn from(e: DynamicsError) -> Self {
        EquilibriumFailure::Input(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    pub state: Vec<f64>,
    pub residual: f64,
    /// Number of starts that converged into this cluster.
    pub basin_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub anchor: Vec<f64>,
    pub clusters: Vec<Cluster>,
    /// Starts from which no positive equilibrium was found.
    pub failures: usize,
}

const MAX_LOG_STEP: f64 = 2.0;
/// Newton step in `ln x` below which a small-residual point is accepted.
const LOG_STEP_TOL: f64 = 1e-6;
const RELAX_MAX_STEPS: usize = 20_000;

struct Newton<'a> {
    sys: &'a MassAction,
    kappa: &'a [f64],
    scale: f64,
    conservation: Vec<Vec<f64>>,
    targets: Vec<f64>,
}

impl<'a> Newton<'a> {
    fn new(sys: &'a MassAction, kappa: &'a [f64], x0: &'a [f64]) -> Self {
        let scale = norm_inf(x0).max(f64::MIN_POSITIVE);
        let conservation: Vec<Vec<f64>> = sys
            .conservation_laws()
            .iter()
            .map(|w| {
                let nw = norm2(w);
                w.iter().map(|v| v / nw).collect()
            })
            .collect();
        let targets = conservation.iter().map(|w| dot(w, x0)).collect();
        Newton { sys, kappa, scale, conservation, targets }
    }

    /// Scaled residual of the square reduced system.
    fn residual(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>), DynamicsError> {
        let f = self.sys.f_kappa(x, self.kappa)?;
        let mut r: Vec<f64> = self.sys.independent_rows().iter().map(|&i| f[i] / self.scale).collect();
        for (w, t) in self.conservation.iter().zip(&self.targets) {
            r.push((dot(w, x) - t) / self.scale);
        }
        Ok((r, f))
    }

    /// Derivative of the scaled residual with respect to `ln x`.
    fn jacobian(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let n = x.len();
        let j = self.sys.jacobian(x, self.kappa)?;
        let mut m = Vec::with_capacity(n * n);
        for &i in self.sys.independent_rows() {
            m.extend((0..n).map(|c| j[i * n + c] * x[c] / self.scale));
        }
        for w in &self.conservation {
            m.extend((0..n).map(|c| w[c] * x[c] / self.scale));
        }
        Ok(m)
    }

    fn flux_scale(&self, x: &[f64]) -> f64 {
        self.sys
            .rate_vector(x, self.kappa)
            .map(|v| norm_inf(&v))
            .unwrap_or(f64::INFINITY)
            .max(1.0)
    }

    fn class_residual(&self, x: &[f64]) -> f64 {
        self.conservation
            .iter()
            .zip(&self.targets)
            .map(|(w, t)| (dot(w, x) - t).abs())
            .fold(0.0, f64::max)
    }

    /// Largest `|f_i|` relative to the gross turnover `sum_k |A_ik| v_k` of
    /// species `i`; species that take part in no reaction count as balanced.
    fn imbalance(&self, f: &[f64], x: &[f64]) -> f64 {
        let Ok(v) = self.sys.rate_vector(x, self.kappa) else { return f64::INFINITY };
        let n = x.len();
        let r = v.len();
        (0..n)
            .map(|i| {
                let gross: f64 = (0..r).map(|k| self.sys.a[i * r + k].abs() * v[k]).sum();
                if gross > 0.0 {
                    f[i].abs() / gross
                } else if f[i] == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            })
            .fold(0.0, f64::max)
    }

    fn converged(&self, f: &[f64], x: &[f64], tol: f64) -> bool {
        norm_inf(f) <= tol * self.flux_scale(x)
            && self.class_residual(x) <= tol * self.scale
            // Near the boundary every flux can be tiny while a species is
            // produced and never consumed; require per-species balance.
            && self.imbalance(f, x) <= tol
    }

    /// Newton direction in log coordinates, falling back to a regularized
    /// least-squares step when the reduced Jacobian is singular.
    fn direction(&self, x: &[f64], r: &[f64]) -> Result<Option<Vec<f64>>, DynamicsError> {
        let n = x.len();
        let j = self.jacobian(x)?;
        let mut a = j.clone();
        let mut d: Vec<f64> = r.iter().map(|v| -v).collect();
        if dense::solve(&mut a, &mut d).is_some() && d.iter().all(|v| v.is_finite()) {
            return Ok(Some(d));
        }
        let mut jtj = vec![0.0; n * n];
        let mut g = vec![0.0; n];
        for p in 0..n {
            for q in 0..n {
                jtj[p * n + q] = (0..n).map(|k| j[k * n + p] * j[k * n + q]).sum();
            }
            g[p] = -(0..n).map(|k| j[k * n + p] * r[k]).sum::<f64>();
        }
        let trace: f64 = (0..n).map(|p| jtj[p * n + p]).sum();
        let lambda = 1e-8 * trace.max(1e-300);
        for p in 0..n {
            jtj[p * n + p] += lambda;
        }
        if dense::solve(&mut jtj, &mut g).is_some() && g.iter().all(|v| v.is_finite()) {
            Ok(Some(g))
        } else {
            Ok(None)
        }
    }

    fn run(&self, start: &[f64], opts: &EquilibriumOptions) -> Result<Equilibrium, EquilibriumFailure> {
        let n = start.len();
        let mut u: Vec<f64> = start.iter().map(|v| libm::log(*v)).collect();
        let mut x = start.to_vec();
        let (mut r, mut f) = self.residual(&x)?;
        let mut merit = norm2(&r);
        for it in 0..=opts.max_iter {
            let Some(mut d) = self.direction(&x, &r)? else { break };
            let small = self.converged(&f, &x, opts.tol);
            // A small residual alone is not enough: near the origin every
            // flux is small, while Newton still asks for a large move.
            if small && norm_inf(&d) <= LOG_STEP_TOL {
                return self.accept(x, &f, it, opts);
            }
            if it == opts.max_iter {
                break;
            }
            let big = norm_inf(&d);
            if big > MAX_LOG_STEP {
                d.iter_mut().for_each(|v| *v *= MAX_LOG_STEP / big);
            }
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..40 {
                let u_try: Vec<f64> = (0..n).map(|i| u[i] + step * d[i]).collect();
                let x_try: Vec<f64> = u_try.iter().map(|v| libm::exp(*v)).collect();
                if x_try.iter().all(|v| *v > 0.0 && v.is_finite()) {
                    let (r_try, f_try) = self.residual(&x_try)?;
                    let m_try = norm2(&r_try);
                    // Once within tolerance, roundoff dominates the merit;
                    // accept any non-increase.
                    let bound = if small { merit } else { (1.0 - 1e-4 * step) * merit };
                    if m_try <= bound || (m_try.is_finite() && m_try < merit && step < 1e-6) {
                        u = u_try;
                        x = x_try;
                        r = r_try;
                        f = f_try;
                        merit = m_try;
                        moved = true;
                        break;
                    }
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        Err(EquilibriumFailure::NotConverged { iterations: opts.max_iter, residual: norm_inf(&f) })
    }

    fn accept(
        &self,
        x: Vec<f64>,
        f: &[f64],
        iterations: usize,
        opts: &EquilibriumOptions,
    ) -> Result<Equilibrium, EquilibriumFailure> {
        let floor = opts.positivity_floor * self.scale;
        if let Some(index) = x.iter().position(|v| *v < floor) {
            return Err(EquilibriumFailure::Boundary { index, value: x[index] });
        }
        Ok(Equilibrium {
            residual: norm_inf(f),
            class_residual: self.class_residual(&x),
            state: x,
            iterations,
        })
    }
}

impl MassAction {
    /// Damped Newton on the reduced system: independent rows of `f` together
    /// with the conservation laws of `x0`, iterated in log coordinates so
    /// every iterate stays positive.
    pub fn find_equilibrium(
        &self,
        x0: &[f64],
        kappa: &[f64],
        opts: &EquilibriumOptions,
    ) -> Result<Equilibrium, EquilibriumFailure> {
        self.find_from(x0, x0, kappa, opts)
    }

    /// As [`MassAction::find_equilibrium`], starting from `start` but
    /// targeting the class of `anchor`.
    pub fn find_from(
        &self,
        anchor: &[f64],
        start: &[f64],
        kappa: &[f64],
        opts: &EquilibriumOptions,
    ) -> Result<Equilibrium, EquilibriumFailure> {
        self.check(anchor, kappa)?;
        self.check(start, kappa)?;
        let newton = Newton::new(self, kappa, anchor);
        match newton.run(start, opts) {
            Ok(eq) => Ok(eq),
            Err(EquilibriumFailure::Input(e)) => Err(EquilibriumFailure::Input(e)),
            Err(first) if opts.relax_time > 0.0 => {
                // Starts that run off to infinity exhaust this budget quickly.
                let iopts = IntegratorOptions { max_steps: RELAX_MAX_STEPS, ..IntegratorOptions::default() };
                match self.integrate(start, kappa, opts.relax_time, &iopts) {
                    Ok(traj) => newton.run(traj.last().1, opts),
                    Err(_) => Err(first),
                }
            }
            Err(e) => Err(e),
        }
    }

    /// A random positive point of the class of `x0`: `x0` plus a random
    /// combination of the `im A` basis, scaled to a log-uniform magnitude in
    /// `[1e-2, 1e2] * |x0|_inf`, redrawn until positive.
    pub fn sample_class_point<R: Rng>(&self, x0: &[f64], rng: &mut R) -> Vec<f64> {
        let basis = self.image_basis();
        if basis.is_empty() {
            return x0.to_vec();
        }
        let scale = norm_inf(x0);
        for attempt in 0..256 {
            let mut d = vec![0.0; x0.len()];
            for v in basis {
                let c: f64 = rng.random_range(-1.0..1.0);
                for (di, vi) in d.iter_mut().zip(v) {
                    *di += c * vi;
                }
            }
            let dn = norm_inf(&d);
            if dn == 0.0 {
                continue;
            }
            // Late attempts shrink the range so that tight classes still
            // yield a sample.
            let hi = if attempt < 128 { 2.0 } else { 0.0 };
            let lo = if attempt < 128 { -2.0 } else { -4.0 };
            let mag = scale * libm::pow(10.0, rng.random_range(lo..hi));
            let x: Vec<f64> = x0.iter().zip(&d).map(|(a, b)| a + mag * b / dn).collect();
            if x.iter().all(|v| *v > 0.0 && v.is_finite()) {
                return x;
            }
        }
        x0.to_vec()
    }

    /// Runs [`MassAction::find_from`] from `trials` random points of the class
    /// of `x0` and clusters the equilibria found. Trial `i` draws from its own
    /// stream of a generator seeded with `seed`, so the result depends only on
    /// `(seed, trials)`.
    pub fn multistart_uniqueness(
        &self,
        x0: &[f64],
        kappa: &[f64],
        trials: usize,
        seed: u64,
        opts: &EquilibriumOptions,
    ) -> Result<EquilibriumSet, DynamicsError> {
        if trials == 0 {
            return Err(DynamicsError::InvalidArgument("at least one trial is required"));
        }
        self.check(x0, kappa)?;
        let results: Vec<Option<Equilibrium>> = (0..trials)
            .map(|trial| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial as u64);
                let start = if trial == 0 { x0.to_vec() } else { self.sample_class_point(x0, &mut rng) };
                self.find_from(x0, &start, kappa, opts).ok()
            })
            .collect();
        Ok(cluster(x0, results, opts.cluster_radius))
    }
}

/// Greedy clustering in trial order under the relative sup-norm radius.
fn cluster(anchor: &[f64], results: Vec<Option<Equilibrium>>, radius: f64) -> EquilibriumSet {
    let scale = norm_inf(anchor).max(f64::MIN_POSITIVE);
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut failures = 0;
    for eq in results {
        let Some(eq) = eq else {
            failures += 1;
            continue;
        };
        let hit = clusters.iter_mut().find(|c| {
            c.state
                .iter()
                .zip(&eq.state)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max)
                <= radius * scale
        });
        match hit {
            Some(c) => {
                c.basin_count += 1;
                if eq.residual < c.residual {
                    c.residual = eq.residual;
                    c.state = eq.state;
                }
            }
            None => clusters.push(Cluster { state: eq.state, residual: eq.residual, basin_count: 1 }),
        }
    }
    EquilibriumSet { anchor: anchor.to_vec(), clusters, failures }
}
