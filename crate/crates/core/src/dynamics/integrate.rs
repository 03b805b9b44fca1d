//! Adaptive Dormand–Prince 5(4) integration that stays in the positive orthant.

use alloc::vec;
use alloc::vec::Vec;

use super::DynamicsError;

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub initial_step: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rtol: 1e-8,
            atol: 1e-10,
            initial_step: 1e-3,
            min_step: 1e-14,
            max_steps: 1_000_000,
        }
    }
}

/// Accepted steps; `states[i]` is the state at `times[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> (f64, &[f64]) {
        let i = self.times.len() - 1;
        (self.times[i], &self.states[i])
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order weights minus the embedded fourth-order ones.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates `dx/dt = f(x)` from `x0` on `[0, t_end]`. A step whose
/// result leaves the open positive orthant, or whose stages cannot be
/// evaluated there, is rejected and retried with a smaller step.
pub(crate) fn dormand_prince<F>(
    f: F,
    x0: &[f64],
    t_end: f64,
    opts: &IntegratorOptions,
) -> Result<Trajectory, DynamicsError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, DynamicsError>,
{
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidArgument("end time must be finite and nonnegative"));
    }
    if !(opts.rtol > 0.0 && opts.atol > 0.0 && opts.initial_step > 0.0 && opts.min_step > 0.0) {
        return Err(DynamicsError::InvalidArgument("integrator tolerances must be positive"));
    }
    let n = x0.len();
    let mut t = 0.0;
    let mut x = x0.to_vec();
    let mut traj = Trajectory { times: vec![0.0], states: vec![x.clone()] };
    if t_end == 0.0 {
        return Ok(traj);
    }
    let mut h = opts.initial_step.min(t_end);
    let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 7];
    k[0] = f(&x)?;
    let mut stage = vec![0.0; n];
    let mut steps = 0usize;

    while t < t_end {
        if steps >= opts.max_steps {
            return Err(DynamicsError::TooManySteps { t });
        }
        steps += 1;
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }

        let mut ok = true;
        for s in 1..7 {
            for i in 0..n {
                let mut acc = x[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += h * A[s][j] * kj[i];
                }
                stage[i] = acc;
            }
            match f(&stage) {
                Ok(v) => k[s] = v,
                Err(DynamicsError::NonPositiveState { .. }) => {
                    ok = false;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        // The last stage is evaluated at the fifth-order solution.
        let x_new = stage.clone();

        let mut err = f64::INFINITY;
        if ok && x_new.iter().all(|v| *v > 0.0 && v.is_finite()) {
            let mut sum = 0.0;
            for i in 0..n {
                let mut e = 0.0;
                for (j, kj) in k.iter().enumerate() {
                    e += E[j] * kj[i];
                }
                let sc = opts.atol + opts.rtol * x[i].abs().max(x_new[i].abs());
                let r = h * e / sc;
                sum += r * r;
            }
            err = if n == 0 { 0.0 } else { libm::sqrt(sum / n as f64) };
        }

        if err <= 1.0 {
            t = if last { t_end } else { t + h };
            x = x_new;
            k[0] = core::mem::take(&mut k[6]);
            traj.times.push(t);
            traj.states.push(x.clone());
            let factor = if err == 0.0 { 5.0 } else { (0.9 * libm::pow(err, -0.2)).clamp(0.2, 5.0) };
            h *= factor;
        } else {
            let factor = if err.is_finite() { (0.9 * libm::pow(err, -0.25)).clamp(0.1, 0.5) } else { 0.25 };
            h *= factor;
            if h < opts.min_step {
                return Err(DynamicsError::StepUnderflow { t, step: h });
            }
        }
    }
    Ok(traj)
}
