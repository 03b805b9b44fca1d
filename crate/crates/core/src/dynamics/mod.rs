//! Floating-point mass-action dynamics `dx/dt = A diag(k) x^B`.
//!
//! This layer cross-checks the exact verdicts numerically: it evaluates the
//! vector field and its Jacobian, integrates trajectories, locates equilibria
//! inside a stoichiometric class and probes for multiple equilibria. Exact
//! data (kernels, conservation laws) are computed once with rationals and
//! then converted.

mod dense;
mod equilibrium;
mod integrate;

pub use equilibrium::{Cluster, Equilibrium, EquilibriumFailure, EquilibriumOptions, EquilibriumSet};
pub use integrate::{IntegratorOptions, Trajectory};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::FromPrimitive;

use crate::feasibility::ThermoParams;
use crate::linalg::{self, RationalMatrix};
use crate::network::NetworkMatrices;
use crate::Rational;
use dense::{dot, norm2, to_f64_vec};

#[derive(Debug, Clone, PartialEq)]
pub enum DynamicsError {
    NonPositiveState { index: usize, value: f64 },
    NonPositiveRate { index: usize, value: f64 },
    NonPositiveFeed { index: usize, value: f64 },
    DimensionMismatch { expected: usize, found: usize },
    /// The adaptive step fell below the minimum at time `t`.
    StepUnderflow { t: f64, step: f64 },
    TooManySteps { t: f64 },
    /// The network has no inflow to run as a flow reactor.
    NoInflow,
    InvalidArgument(&'static str),
}

impl fmt::Display for DynamicsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynamicsError::NonPositiveState { index, value } => {
                write!(f, "state entry {index} is not strictly positive ({value})")
            }
            DynamicsError::NonPositiveRate { index, value } => {
                write!(f, "rate constant {index} is not strictly positive ({value})")
            }
            DynamicsError::NonPositiveFeed { index, value } => {
                write!(f, "feed entry {index} is not strictly positive ({value})")
            }
            DynamicsError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            DynamicsError::StepUnderflow { t, step } => {
                write!(f, "step size underflow at t = {t} (step {step:e})")
            }
            DynamicsError::TooManySteps { t } => write!(f, "step limit reached at t = {t}"),
            DynamicsError::NoInflow => f.write_str("network has no inflow"),
            DynamicsError::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for DynamicsError {}

fn check_len(expected: usize, found: usize) -> Result<(), DynamicsError> {
    if expected == found {
        Ok(())
    } else {
        Err(DynamicsError::DimensionMismatch { expected, found })
    }
}

fn check_positive<E>(v: &[f64], err: E) -> Result<(), DynamicsError>
where
    E: Fn(usize, f64) -> DynamicsError,
{
    match v.iter().position(|x| !(*x > 0.0 && x.is_finite())) {
        Some(i) => Err(err(i, v[i])),
        None => Ok(()),
    }
}

/// Strictly positive concentrations.
#[derive(Debug, Clone, PartialEq)]
pub struct State(Vec<f64>);

impl State {
    pub fn new(x: Vec<f64>) -> Result<Self, DynamicsError> {
        check_positive(&x, |index, value| DynamicsError::NonPositiveState { index, value })?;
        Ok(State(x))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Strictly positive rate constants in directed order.
#[derive(Debug, Clone, PartialEq)]
pub struct RateConstants(Vec<f64>);

impl RateConstants {
    pub fn new(k: Vec<f64>) -> Result<Self, DynamicsError> {
        check_positive(&k, |index, value| DynamicsError::NonPositiveRate { index, value })?;
        Ok(RateConstants(k))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Orthogonality of the reaction flux to `ker A` at one state.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalityReport {
    /// `max |v . diag(k) x^B| / (|v| |diag(k) x^B|)` over a basis of `ker A`.
    pub flux_violation: f64,
    /// `max |u . x^B| / (|u| |x^B|)` over a basis of `ker(A diag(k))`.
    pub monomial_violation: f64,
    /// Projection of the net flux (forward minus backward per reversible
    /// pair) onto the kernel of the one-column-per-reaction matrix.
    pub net_violation: f64,
    pub flux_orthogonal: bool,
    pub monomial_orthogonal: bool,
    pub net_orthogonal: bool,
}

impl OrthogonalityReport {
    /// Whether both sides of `ker A ⊥ diag(k) x^B <=> ker(A diag(k)) ⊥ x^B`
    /// came out the same at this state.
    pub fn sides_agree(&self) -> bool {
        self.flux_orthogonal == self.monomial_orthogonal
    }
}

/// The mass-action system of a directed network in floating point.
#[derive(Debug, Clone)]
pub struct MassAction {
    n: usize,
    r: usize,
    /// `n x r`, row-major.
    a: Vec<f64>,
    /// `r x n`, row-major.
    b: Vec<f64>,
    exact_a: RationalMatrix,
    paired: usize,
    origin: Vec<(usize, bool)>,
    feed: Option<Vec<f64>>,
    kernel: Vec<Vec<f64>>,
    conservation: Vec<Vec<f64>>,
    independent_rows: Vec<usize>,
    image_basis: Vec<Vec<f64>>,
}

impl MassAction {
    pub fn new(mats: &NetworkMatrices) -> Self {
        let n = mats.a.rows();
        let r = mats.a.cols();
        let a = (0..n)
            .flat_map(|i| to_f64_vec(mats.a.row(i)))
            .collect();
        let b = (0..r)
            .flat_map(|i| to_f64_vec(mats.b.row(i)))
            .collect();
        let at = mats.a.transpose();
        let kernel = linalg::kernel_basis(&mats.a).iter().map(|v| to_f64_vec(v)).collect();
        let conservation = linalg::kernel_basis(&at).iter().map(|v| to_f64_vec(v)).collect();
        // Pivot columns of A^T are a maximal independent set of rows of A.
        let independent_rows = at.rref().1;
        let cols = mats.a.column_vectors();
        let image_basis = linalg::independent_subset(&cols)
            .into_iter()
            .map(|j| to_f64_vec(&cols[j]))
            .collect();
        MassAction {
            n,
            r,
            a,
            b,
            exact_a: mats.a.clone(),
            paired: mats.paired,
            origin: mats.origin.clone(),
            feed: mats.feed.as_ref().map(|f| to_f64_vec(f)),
            kernel,
            conservation,
            independent_rows,
            image_basis,
        }
    }

    pub fn species_count(&self) -> usize {
        self.n
    }

    /// Directed reactions with a column in `A`.
    pub fn reaction_count(&self) -> usize {
        self.r
    }

    pub fn feed(&self) -> Option<&[f64]> {
        self.feed.as_deref()
    }

    /// Basis of the left kernel of `A`; `w . x` is conserved along trajectories.
    pub fn conservation_laws(&self) -> &[Vec<f64>] {
        &self.conservation
    }

    /// Basis of `im A`.
    pub fn image_basis(&self) -> &[Vec<f64>] {
        &self.image_basis
    }

    fn check(&self, x: &[f64], kappa: &[f64]) -> Result<(), DynamicsError> {
        check_len(self.n, x.len())?;
        check_len(self.r, kappa.len())?;
        check_positive(x, |index, value| DynamicsError::NonPositiveState { index, value })?;
        check_positive(kappa, |index, value| DynamicsError::NonPositiveRate { index, value })
    }

    /// `x^B`, one monomial per directed reaction.
    pub fn monomials(&self, x: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        check_len(self.n, x.len())?;
        check_positive(x, |index, value| DynamicsError::NonPositiveState { index, value })?;
        Ok(self.monomials_unchecked(x))
    }

    fn monomials_unchecked(&self, x: &[f64]) -> Vec<f64> {
        (0..self.r)
            .map(|i| {
                let row = &self.b[i * self.n..(i + 1) * self.n];
                row.iter()
                    .zip(x)
                    .filter(|(e, _)| **e != 0.0)
                    .map(|(e, xs)| if *e == 1.0 { *xs } else { libm::pow(*xs, *e) })
                    .product()
            })
            .collect()
    }

    /// Reaction fluxes `k_i x^{B_i}`.
    pub fn rate_vector(&self, x: &[f64], kappa: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        self.check(x, kappa)?;
        Ok(self
            .monomials_unchecked(x)
            .iter()
            .zip(kappa)
            .map(|(m, k)| m * k)
            .collect())
    }

    fn apply_a(&self, flux: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|s| dot(&self.a[s * self.r..(s + 1) * self.r], flux))
            .collect()
    }

    /// `f(x) = A diag(k) x^B`.
    pub fn f_kappa(&self, x: &[f64], kappa: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let flux = self.rate_vector(x, kappa)?;
        Ok(self.apply_a(&flux))
    }

    /// `A diag(k) diag(x^B) B diag(1/x)`, row-major `n x n`.
    pub fn jacobian(&self, x: &[f64], kappa: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        let flux = self.rate_vector(x, kappa)?;
        let n = self.n;
        let mut j = vec![0.0; n * n];
        for i in 0..self.r {
            if flux[i] == 0.0 {
                continue;
            }
            for c in 0..n {
                let e = self.b[i * n + c];
                if e == 0.0 {
                    continue;
                }
                let d = flux[i] * e / x[c];
                for s in 0..n {
                    j[s * n + c] += self.a[s * self.r + i] * d;
                }
            }
        }
        Ok(j)
    }

    /// Flow reactor vector field `f(x) + (c - x)`.
    pub fn cfstr_rhs(&self, x: &[f64], kappa: &[f64], feed: &[f64]) -> Result<Vec<f64>, DynamicsError> {
        check_len(self.n, feed.len())?;
        check_positive(feed, |index, value| DynamicsError::NonPositiveFeed { index, value })?;
        let mut f = self.f_kappa(x, kappa)?;
        for ((fi, c), xi) in f.iter_mut().zip(feed).zip(x) {
            *fi += c - xi;
        }
        Ok(f)
    }

    /// Per-reaction `Delta G(x) = sum_s A_si G0_s + RT sum_s A_si ln x_s`,
    /// plus the zero-point shift of the originating reaction (negated for
    /// backward directions).
    pub fn state_gibbs(&self, x: &[f64], params: &ThermoParams) -> Result<Vec<f64>, DynamicsError> {
        check_len(self.n, x.len())?;
        check_len(self.n, params.standard_potentials.len())?;
        check_positive(x, |index, value| DynamicsError::NonPositiveState { index, value })?;
        let rt = params.rt();
        let logs: Vec<f64> = x.iter().map(|v| libm::log(*v)).collect();
        Ok((0..self.r)
            .map(|i| {
                let mut g = 0.0;
                let mut entropy = 0.0;
                for s in 0..self.n {
                    let c = self.a[s * self.r + i];
                    g += c * params.standard_potentials[s];
                    entropy += c * logs[s];
                }
                let shift = params.zero_point_shift.as_ref().map_or(0.0, |z| {
                    let (src, backward) = self.origin[i];
                    if backward {
                        -z[src]
                    } else {
                        z[src]
                    }
                });
                g + shift + rt * entropy
            })
            .collect())
    }

    /// Net flux per original reaction: forward minus backward for reversible
    /// pairs, the flux itself for irreversible reactions.
    pub fn net_flux(&self, flux: &[f64]) -> Vec<f64> {
        let p = self.paired;
        (0..p)
            .map(|i| flux[i] - flux[i + p])
            .chain(flux[2 * p..].iter().copied())
            .collect()
    }

    /// Measures orthogonality of the flux to `ker A` at `x`, computing the
    /// two sides of the rate-scaling equivalence independently (the scaled
    /// kernel is recomputed exactly from the rate constants) together with
    /// the net-flux projection.
    pub fn orthogonality_check(
        &self,
        x: &[f64],
        kappa: &[f64],
        tol: f64,
    ) -> Result<OrthogonalityReport, DynamicsError> {
        let flux = self.rate_vector(x, kappa)?;
        let mono = self.monomials_unchecked(x);
        let flux_violation = max_projection(&self.kernel, &flux);

        let exact_k: Vec<Rational> = kappa
            .iter()
            .map(|k| Rational::from_f64(*k).ok_or(DynamicsError::InvalidArgument("rate constant is not finite")))
            .collect::<Result<_, _>>()?;
        let scaled = self.exact_a.scale_columns(&exact_k).expect("one rate per column");
        let scaled_kernel: Vec<Vec<f64>> =
            linalg::kernel_basis(&scaled).iter().map(|v| to_f64_vec(v)).collect();
        let monomial_violation = max_projection(&scaled_kernel, &mono);

        let p = self.paired;
        let net_cols: Vec<usize> = (0..p).chain(2 * p..self.r).collect();
        let mut net_a = RationalMatrix::zeros(self.n, net_cols.len());
        for (j, &c) in net_cols.iter().enumerate() {
            for s in 0..self.n {
                net_a.set(s, j, self.exact_a.get(s, c).clone());
            }
        }
        let net_kernel: Vec<Vec<f64>> =
            linalg::kernel_basis(&net_a).iter().map(|v| to_f64_vec(v)).collect();
        let net_violation = max_projection(&net_kernel, &self.net_flux(&flux));

        Ok(OrthogonalityReport {
            flux_violation,
            monomial_violation,
            net_violation,
            flux_orthogonal: flux_violation <= tol,
            monomial_orthogonal: monomial_violation <= tol,
            net_orthogonal: net_violation <= tol,
        })
    }

    /// Integrates the closed system from `x0` to `t_end`.
    pub fn integrate(
        &self,
        x0: &[f64],
        kappa: &[f64],
        t_end: f64,
        opts: &IntegratorOptions,
    ) -> Result<Trajectory, DynamicsError> {
        self.check(x0, kappa)?;
        integrate::dormand_prince(|x| self.f_kappa(x, kappa), x0, t_end, opts)
    }

    /// Integrates the flow reactor with inflow `feed`.
    pub fn integrate_cfstr(
        &self,
        x0: &[f64],
        kappa: &[f64],
        feed: &[f64],
        t_end: f64,
        opts: &IntegratorOptions,
    ) -> Result<Trajectory, DynamicsError> {
        self.check(x0, kappa)?;
        self.cfstr_rhs(x0, kappa, feed)?;
        integrate::dormand_prince(|x| self.cfstr_rhs(x, kappa, feed), x0, t_end, opts)
    }
}

fn max_projection(basis: &[Vec<f64>], w: &[f64]) -> f64 {
    let wn = norm2(w);
    if wn == 0.0 {
        return 0.0;
    }
    basis
        .iter()
        .map(|v| {
            let vn = norm2(v);
            if vn == 0.0 {
                0.0
            } else {
                dot(v, w).abs() / (vn * wn)
            }
        })
        .fold(0.0, f64::max)
}

/// Residual of projecting `v` onto `im A` in the least-squares sense,
/// relative to `|v|` (0 for the zero vector).
pub fn image_residual(basis: &[Vec<f64>], v: &[f64]) -> f64 {
    let vn = norm2(v);
    if vn == 0.0 {
        return 0.0;
    }
    let k = basis.len();
    if k == 0 {
        return 1.0;
    }
    // Normal equations G c = V^T v.
    let mut g = vec![0.0; k * k];
    let mut rhs: Vec<f64> = basis.iter().map(|b| dot(b, v)).collect();
    for i in 0..k {
        for j in 0..k {
            g[i * k + j] = dot(&basis[i], &basis[j]);
        }
    }
    if dense::solve(&mut g, &mut rhs).is_none() {
        return f64::NAN;
    }
    let mut res = v.to_vec();
    for (c, b) in rhs.iter().zip(basis) {
        for (r, bi) in res.iter_mut().zip(b) {
            *r -= c * bi;
        }
    }
    norm2(&res) / vn
}

impl MassAction {
    pub(crate) fn independent_rows(&self) -> &[usize] {
        &self.independent_rows
    }
}
