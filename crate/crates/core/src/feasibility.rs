//! Thermodynamic feasibility of flux sign patterns.
//!
//! For a flux pattern `nu` over the reactions of a network exactly one of two
//! certificates exists: a nonzero kernel flux conforming to `nu` (a loop), or
//! a species potential `gamma` whose reaction affinities `A^T gamma` strictly
//! oppose every nonzero entry of `nu`. Both forms are provided: the
//! bidirectional one over `A_hat` (one column per reaction) and the
//! unidirectional one over the doubled matrix `(A_hat, -A_hat)` with
//! nonnegative fluxes.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::linalg::{self, RationalMatrix};
use crate::network::ReactionNetwork;
use crate::signs::{sign_of, Sign, SignVector};
use crate::simplex::{strict_feasible, LinearSystem, SignTag};
use crate::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityError {
    DimensionMismatch { expected: usize, found: usize },
    /// Column `column + r` of a doubled matrix is not the negative of column
    /// `column`, or the column count is odd.
    PairingViolation { column: usize },
    /// An irreversible reaction was given a backward flux sign.
    AgainstReactionDirection { reaction: usize },
    /// Both or neither alternative produced a certificate.
    InternalInconsistency { loop_found: bool, potential_found: bool },
    NonPositiveTemperature(f64),
    IrreversibleReaction { label: alloc::string::String },
}

impl fmt::Display for FeasibilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibilityError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            FeasibilityError::PairingViolation { column } => {
                write!(f, "doubled matrix breaks the pairing at column {column}")
            }
            FeasibilityError::AgainstReactionDirection { reaction } => write!(
                f,
                "flux sign of irreversible reaction {reaction} opposes its direction"
            ),
            FeasibilityError::InternalInconsistency {
                loop_found,
                potential_found,
            } => write!(
                f,
                "alternative violated: loop found = {loop_found}, potential found = {potential_found}"
            ),
            FeasibilityError::NonPositiveTemperature(t) => {
                write!(f, "temperature must be positive, got {t}")
            }
            FeasibilityError::IrreversibleReaction { label } => write!(
                f,
                "detailed-balance rates need reversible reactions; `{label}` is irreversible"
            ),
        }
    }
}

impl core::error::Error for FeasibilityError {}

/// Sign pattern of the net flux, one entry per reaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FluxPattern(SignVector);

impl FluxPattern {
    pub fn new(signs: SignVector) -> Self {
        FluxPattern(signs)
    }

    /// Checks the pattern against a network: one sign per reaction in file
    /// order, and irreversible reactions may only carry `+` or `0`.
    pub fn for_network(net: &ReactionNetwork, signs: SignVector) -> Result<Self, FeasibilityError> {
        if signs.len() != net.reactions().len() {
            return Err(FeasibilityError::DimensionMismatch {
                expected: net.reactions().len(),
                found: signs.len(),
            });
        }
        for (i, r) in net.reactions().iter().enumerate() {
            if !r.reversible && signs.get(i) == Sign::Neg {
                return Err(FeasibilityError::AgainstReactionDirection { reaction: i });
            }
        }
        Ok(FluxPattern(signs))
    }

    pub fn signs(&self) -> &SignVector {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Nonnegative flux `z` of the doubled matrix with `A z = 0`, conforming to
/// the pattern, and with `z[pair] != z[pair + r]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopCertificate {
    pub z: Vec<Rational>,
    pub pair: usize,
}

impl LoopCertificate {
    /// Net flux `z_i - z_{i+r}`.
    pub fn net_flux(&self) -> Vec<Rational> {
        let r = self.z.len() / 2;
        (0..r).map(|i| &self.z[i] - &self.z[i + r]).collect()
    }

    /// Exact check against a doubled matrix.
    pub fn verify(&self, a: &RationalMatrix, nu: &FluxPattern) -> bool {
        let r = nu.len();
        if self.z.len() != 2 * r || a.cols() != 2 * r || self.pair >= r {
            return false;
        }
        if self.z.iter().any(Signed::is_negative) {
            return false;
        }
        let Ok(az) = a.mul_vec(&self.z) else {
            return false;
        };
        if !linalg::is_zero_vec(&az) {
            return false;
        }
        let net = sign_of(&self.net_flux());
        net.conforms_to(nu.signs()) && self.z[self.pair] != self.z[self.pair + r]
    }
}

/// Potential `gamma` whose affinities strictly oppose the pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PotentialCertificate {
    pub gamma: Vec<Rational>,
}

impl PotentialCertificate {
    /// Exact check against a doubled matrix: `sign(A^T gamma)_i = -nu_i` and
    /// `(A^T gamma)_i = -(A^T gamma)_{i+r}` wherever `nu_i != 0`.
    pub fn verify(&self, a: &RationalMatrix, nu: &FluxPattern) -> bool {
        let r = nu.len();
        if a.cols() != 2 * r {
            return false;
        }
        let Ok(dg) = a.transpose().mul_vec(&self.gamma) else {
            return false;
        };
        nu.signs().iter().enumerate().all(|(i, s)| {
            s == Sign::Zero || (Sign::of(&dg[i]) == s.negate() && dg[i] == -dg[i + r].clone())
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilityVerdict {
    /// The pattern carries a thermodynamically infeasible loop.
    Loop(LoopCertificate),
    /// The pattern is thermodynamically feasible.
    Potential(PotentialCertificate),
}

impl FeasibilityVerdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityVerdict::Potential(_))
    }

    pub fn verify(&self, doubled: &RationalMatrix, nu: &FluxPattern) -> bool {
        match self {
            FeasibilityVerdict::Loop(c) => c.verify(doubled, nu),
            FeasibilityVerdict::Potential(c) => c.verify(doubled, nu),
        }
    }
}

fn check_len(expected: usize, found: usize) -> Result<(), FeasibilityError> {
    if expected == found {
        Ok(())
    } else {
        Err(FeasibilityError::DimensionMismatch { expected, found })
    }
}

fn conforming_tag(s: Sign) -> SignTag {
    match s {
        Sign::Pos => SignTag::NonNeg,
        Sign::Neg => SignTag::NonPos,
        Sign::Zero => SignTag::Zero,
    }
}

fn opposing_tag(s: Sign) -> SignTag {
    match s {
        Sign::Pos => SignTag::StrictlyNeg,
        Sign::Neg => SignTag::StrictlyPos,
        Sign::Zero => SignTag::Free,
    }
}

/// Bidirectional loop search over `A_hat`: for each reaction with a nonzero
/// sign, look for `A_hat z = 0` with `z` conforming to `nu` and strictly
/// signed at that reaction. The certificate is returned in doubled form.
pub fn loop_search(
    ahat: &RationalMatrix,
    nu: &FluxPattern,
) -> Result<Option<LoopCertificate>, FeasibilityError> {
    check_len(ahat.cols(), nu.len())?;
    let base: Vec<SignTag> = nu.signs().iter().map(conforming_tag).collect();
    for (i, s) in nu.signs().iter().enumerate() {
        if s == Sign::Zero {
            continue;
        }
        let mut tags = base.clone();
        tags[i] = s.strict_tag();
        let sys = LinearSystem::new(ahat.clone(), tags).expect("one tag per column");
        if let Some(w) = strict_feasible(&sys) {
            let (_, z) = double_transform(ahat, w.as_slice());
            return Ok(Some(LoopCertificate { z, pair: i }));
        }
    }
    Ok(None)
}

/// Bidirectional potential search: `gamma` free with `(A_hat^T gamma)_i`
/// strictly opposite to `nu_i`; zero-flux reactions are unconstrained.
pub fn potential_search(
    ahat: &RationalMatrix,
    nu: &FluxPattern,
) -> Result<Option<PotentialCertificate>, FeasibilityError> {
    check_len(ahat.cols(), nu.len())?;
    let n = ahat.rows();
    let r = ahat.cols();
    let eq = ahat
        .transpose()
        .hconcat(&RationalMatrix::identity(r).neg())
        .expect("r rows on both sides");
    let mut tags = vec![SignTag::Free; n];
    tags.extend(nu.signs().iter().map(opposing_tag));
    let sys = LinearSystem::new(eq, tags).expect("one tag per column");
    Ok(strict_feasible(&sys).map(|w| {
        let mut gamma = w.into_inner();
        gamma.truncate(n);
        PotentialCertificate { gamma }
    }))
}

fn decide(
    looped: Option<LoopCertificate>,
    potential: Option<PotentialCertificate>,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    match (looped, potential) {
        (Some(l), None) => Ok(FeasibilityVerdict::Loop(l)),
        (None, Some(p)) => Ok(FeasibilityVerdict::Potential(p)),
        (l, p) => Err(FeasibilityError::InternalInconsistency {
            loop_found: l.is_some(),
            potential_found: p.is_some(),
        }),
    }
}

/// Decides the alternative over `A_hat` (`n x r`, one column per reaction).
/// Both branches are searched; anything other than exactly one certificate is
/// reported as [`FeasibilityError::InternalInconsistency`].
pub fn gordan_alternative(
    ahat: &RationalMatrix,
    nu: &FluxPattern,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    decide(loop_search(ahat, nu)?, potential_search(ahat, nu)?)
}

fn check_pairing(a: &RationalMatrix, r: usize) -> Result<(), FeasibilityError> {
    for i in 0..r {
        for k in 0..a.rows() {
            if *a.get(k, i) != -a.get(k, i + r).clone() {
                return Err(FeasibilityError::PairingViolation { column: i });
            }
        }
    }
    Ok(())
}

/// Unidirectional loop search over a doubled matrix with nonnegative fluxes.
pub fn unidirectional_loop_search(
    a: &RationalMatrix,
    nu: &FluxPattern,
) -> Result<Option<LoopCertificate>, FeasibilityError> {
    let r = nu.len();
    check_len(2 * r, a.cols())?;
    check_pairing(a, r)?;
    let n = a.rows();
    let m = 2 * r;
    // Unknowns (z_0..z_{m-1}, d_0..d_{r-1}) with d_i = z_i - z_{i+r}.
    let mut eq = RationalMatrix::zeros(n + r, m + r);
    for k in 0..n {
        for j in 0..m {
            eq.set(k, j, a.get(k, j).clone());
        }
    }
    for i in 0..r {
        eq.set(n + i, m + i, crate::rat(1));
        eq.set(n + i, i, crate::rat(-1));
        eq.set(n + i, i + r, crate::rat(1));
    }
    let mut base = vec![SignTag::NonNeg; m];
    base.extend(nu.signs().iter().map(conforming_tag));
    for (j, s) in nu.signs().iter().enumerate() {
        if s == Sign::Zero {
            continue;
        }
        let mut tags = base.clone();
        tags[m + j] = s.strict_tag();
        let sys = LinearSystem::new(eq.clone(), tags).expect("one tag per column");
        if let Some(w) = strict_feasible(&sys) {
            let mut z = w.into_inner();
            z.truncate(m);
            return Ok(Some(LoopCertificate { z, pair: j }));
        }
    }
    Ok(None)
}

/// Unidirectional potential search: `(A^T gamma)_i` strictly opposite to
/// `nu_i` and `(A^T gamma)_{i+r}` strictly along it.
pub fn unidirectional_potential_search(
    a: &RationalMatrix,
    nu: &FluxPattern,
) -> Result<Option<PotentialCertificate>, FeasibilityError> {
    let r = nu.len();
    check_len(2 * r, a.cols())?;
    check_pairing(a, r)?;
    let n = a.rows();
    let eq = a
        .transpose()
        .hconcat(&RationalMatrix::identity(2 * r).neg())
        .expect("m rows on both sides");
    let mut tags = vec![SignTag::Free; n];
    tags.extend(nu.signs().iter().map(opposing_tag));
    tags.extend(nu.signs().iter().map(|s| opposing_tag(s.negate())));
    let sys = LinearSystem::new(eq, tags).expect("one tag per column");
    Ok(strict_feasible(&sys).map(|w| {
        let mut gamma = w.into_inner();
        gamma.truncate(n);
        PotentialCertificate { gamma }
    }))
}

/// Decides the alternative in unidirectional form over a doubled `n x 2r`
/// matrix whose column `i + r` is the negative of column `i`.
pub fn gordan_unidirectional(
    a: &RationalMatrix,
    nu: &FluxPattern,
) -> Result<FeasibilityVerdict, FeasibilityError> {
    decide(
        unidirectional_loop_search(a, nu)?,
        unidirectional_potential_search(a, nu)?,
    )
}

/// `A = (A_hat, -A_hat)`.
pub fn double_matrix(ahat: &RationalMatrix) -> RationalMatrix {
    ahat.hconcat(&ahat.neg()).expect("same row count")
}

/// `A = (A_hat, -A_hat)`, `z_i = max(zhat_i, 0)`, `z_{i+r} = -min(zhat_i, 0)`.
pub fn double_transform(ahat: &RationalMatrix, zhat: &[Rational]) -> (RationalMatrix, Vec<Rational>) {
    let pos = zhat.iter().map(|v| if v.is_positive() { v.clone() } else { Rational::zero() });
    let neg = zhat.iter().map(|v| if v.is_negative() { -v.clone() } else { Rational::zero() });
    (double_matrix(ahat), pos.chain(neg).collect())
}

/// Inverse of [`double_transform`] on the net flux: first half of the
/// columns and `zhat_i = z_i - z_{i+r}`.
pub fn halve_transform(
    a: &RationalMatrix,
    z: &[Rational],
) -> Result<(RationalMatrix, Vec<Rational>), FeasibilityError> {
    if a.cols() % 2 != 0 {
        return Err(FeasibilityError::PairingViolation { column: a.cols() });
    }
    let r = a.cols() / 2;
    check_len(a.cols(), z.len())?;
    check_pairing(a, r)?;
    let mut ahat = RationalMatrix::zeros(a.rows(), r);
    for k in 0..a.rows() {
        for i in 0..r {
            ahat.set(k, i, a.get(k, i).clone());
        }
    }
    let zhat = (0..r).map(|i| &z[i] - &z[i + r]).collect();
    Ok((ahat, zhat))
}

/// `Delta G = gamma^T A`, one entry per column.
pub fn gibbs_differences(
    gamma: &[Rational],
    a: &RationalMatrix,
) -> Result<Vec<Rational>, FeasibilityError> {
    check_len(a.rows(), gamma.len())?;
    Ok(a.transpose().mul_vec(gamma).expect("checked"))
}

/// Flux directions running down the potential: `nu_i = -sign((A^T gamma)_i)`.
pub fn feasible_directions(
    gamma: &[Rational],
    a: &RationalMatrix,
) -> Result<FluxPattern, FeasibilityError> {
    let dg = gibbs_differences(gamma, a)?;
    Ok(FluxPattern(sign_of(&dg).negate()))
}

pub const GAS_CONSTANT: f64 = 8.314_462_618;

/// Thermodynamic data for rate generation.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermoParams {
    pub temperature: f64,
    pub gas_constant: f64,
    /// Standard potential per species.
    pub standard_potentials: Vec<f64>,
    /// Optional additive zero-point shift per reaction.
    pub zero_point_shift: Option<Vec<f64>>,
}

impl ThermoParams {
    pub fn new(temperature: f64, standard_potentials: Vec<f64>) -> Result<Self, FeasibilityError> {
        if !(temperature > 0.0) {
            return Err(FeasibilityError::NonPositiveTemperature(temperature));
        }
        Ok(ThermoParams {
            temperature,
            gas_constant: GAS_CONSTANT,
            standard_potentials,
            zero_point_shift: None,
        })
    }

    pub fn rt(&self) -> f64 {
        self.gas_constant * self.temperature
    }

    /// Standard-state `Delta G0` of each reaction of `net` (product minus
    /// reactant), including the zero-point shift.
    pub fn standard_differences(&self, net: &ReactionNetwork) -> Result<Vec<f64>, FeasibilityError> {
        check_len(net.species_count(), self.standard_potentials.len())?;
        if let Some(shift) = &self.zero_point_shift {
            check_len(net.reactions().len(), shift.len())?;
        }
        Ok((0..net.reactions().len())
            .map(|i| {
                let d = net.difference(i);
                let base: f64 = d
                    .iter()
                    .zip(&self.standard_potentials)
                    .map(|(c, g)| crate::to_f64(c) * g)
                    .sum();
                base + self.zero_point_shift.as_ref().map_or(0.0, |s| s[i])
            })
            .collect())
    }
}

/// Forward and backward rate constants of a fully reversible network.
#[derive(Debug, Clone, PartialEq)]
pub struct RateAssignment {
    pub forward: Vec<f64>,
    pub backward: Vec<f64>,
}

impl RateAssignment {
    /// Rates in directed order (all forwards, then all backwards).
    pub fn directed(&self) -> Vec<f64> {
        self.forward.iter().chain(&self.backward).copied().collect()
    }

    pub fn equilibrium_constants(&self) -> Vec<f64> {
        self.forward.iter().zip(&self.backward).map(|(f, b)| f / b).collect()
    }
}

/// Backward rates `kb_i = kf_i exp(Delta G0_i / RT)`, so that
/// `kf / kb = exp(-Delta G0 / RT)` for every reaction.
pub fn detailed_balance_rates(
    params: &ThermoParams,
    net: &ReactionNetwork,
    kf: &[f64],
) -> Result<RateAssignment, FeasibilityError> {
    if !(params.temperature > 0.0) {
        return Err(FeasibilityError::NonPositiveTemperature(params.temperature));
    }
    if let Some(r) = net.reactions().iter().find(|r| !r.reversible) {
        return Err(FeasibilityError::IrreversibleReaction {
            label: r.label.clone(),
        });
    }
    check_len(net.reactions().len(), kf.len())?;
    let dg0 = params.standard_differences(net)?;
    let rt = params.rt();
    let backward = kf
        .iter()
        .zip(&dg0)
        .map(|(k, g)| k * libm::exp(g / rt))
        .collect();
    Ok(RateAssignment {
        forward: kf.to_vec(),
        backward,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::parse_network;
    use crate::rat;

    fn nu(v: &[i8]) -> FluxPattern {
        FluxPattern::new(SignVector::from_i8(v))
    }

    fn abcd_hat() -> RationalMatrix {
        RationalMatrix::from_i64(4, 1, &[-1, -1, 1, 1])
    }

    #[test]
    fn single_reaction_is_feasible() {
        let v = gordan_alternative(&abcd_hat(), &nu(&[1])).unwrap();
        let FeasibilityVerdict::Potential(p) = &v else {
            panic!("expected a potential certificate");
        };
        let dg = gibbs_differences(&p.gamma, &abcd_hat()).unwrap();
        assert!(dg[0].is_negative());
        assert!(v.verify(&double_matrix(&abcd_hat()), &nu(&[1])));
    }

    #[test]
    fn cancelling_columns_form_a_loop() {
        let ahat = RationalMatrix::from_i64(2, 2, &[1, -1, -1, 1]);
        let v = gordan_alternative(&ahat, &nu(&[1, 1])).unwrap();
        let FeasibilityVerdict::Loop(l) = &v else {
            panic!("expected a loop");
        };
        assert_eq!(l.net_flux(), vec![rat(1), rat(1)]);
        assert!(v.verify(&double_matrix(&ahat), &nu(&[1, 1])));
    }

    #[test]
    fn zero_pattern_is_vacuously_feasible() {
        let v = gordan_alternative(&abcd_hat(), &nu(&[0])).unwrap();
        assert_eq!(
            v,
            FeasibilityVerdict::Potential(PotentialCertificate {
                gamma: vec![rat(0); 4]
            })
        );
        let a = double_matrix(&abcd_hat());
        let v = gordan_unidirectional(&a, &nu(&[0])).unwrap();
        assert!(v.is_feasible());
    }

    #[test]
    fn symmetric_kernel_flux_is_not_a_loop() {
        let a = double_matrix(&abcd_hat());
        let v = gordan_unidirectional(&a, &nu(&[1])).unwrap();
        assert!(v.is_feasible());
        assert!(v.verify(&a, &nu(&[1])));
    }

    #[test]
    fn triangle_cycle_is_a_loop() {
        // A <-> B, B <-> C, C <-> A.
        let ahat = RationalMatrix::from_i64(3, 3, &[-1, 0, 1, 1, -1, 0, 0, 1, -1]);
        let a = double_matrix(&ahat);
        let v = gordan_unidirectional(&a, &nu(&[1, 1, 1])).unwrap();
        assert!(matches!(v, FeasibilityVerdict::Loop(_)));
        assert!(v.verify(&a, &nu(&[1, 1, 1])));
        // Running one edge backwards breaks the cycle.
        let v = gordan_unidirectional(&a, &nu(&[1, 1, -1])).unwrap();
        assert!(v.is_feasible());
    }

    #[test]
    fn pairing_is_checked() {
        let a = RationalMatrix::from_i64(1, 2, &[1, 1]);
        assert_eq!(
            gordan_unidirectional(&a, &nu(&[1])),
            Err(FeasibilityError::PairingViolation { column: 0 })
        );
        assert!(matches!(
            gordan_alternative(&abcd_hat(), &nu(&[1, 1])),
            Err(FeasibilityError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn transforms() {
        let ahat = RationalMatrix::from_i64(1, 2, &[1, 2]);
        let (a, z) = double_transform(&ahat, &[rat(2), rat(-3)]);
        assert_eq!(z, vec![rat(2), rat(0), rat(0), rat(3)]);
        let (_, z) = double_transform(&ahat, &[rat(0), rat(0)]);
        assert_eq!(z, vec![rat(0); 4]);
        let (_, z1) = double_transform(&ahat, &[rat(1), rat(1)]);
        assert_eq!(z1, vec![rat(1), rat(1), rat(0), rat(0)]);

        let (h, zhat) = halve_transform(&a, &[rat(2), rat(0), rat(0), rat(3)]).unwrap();
        assert_eq!(h, ahat);
        assert_eq!(zhat, vec![rat(2), rat(-3)]);
        let (_, zhat) = halve_transform(&a, &z1).unwrap();
        assert_eq!(zhat, vec![rat(1), rat(1)]);
        let (_, zhat) = halve_transform(&a, &vec![rat(0); 4]).unwrap();
        assert_eq!(zhat, vec![rat(0); 2]);
        assert!(halve_transform(&ahat, &vec![rat(0); 2]).is_err());
    }

    #[test]
    fn gibbs_and_directions() {
        let gamma = [rat(1), rat(1), rat(0), rat(0)];
        assert_eq!(gibbs_differences(&gamma, &abcd_hat()).unwrap(), vec![rat(-2)]);
        assert_eq!(gibbs_differences(&vec![rat(0); 4], &abcd_hat()).unwrap(), vec![rat(0)]);
        let doubled = gibbs_differences(&gamma, &double_matrix(&abcd_hat())).unwrap();
        assert_eq!(doubled[0], -doubled[1].clone());

        assert_eq!(feasible_directions(&gamma, &abcd_hat()).unwrap(), nu(&[1]));
        assert_eq!(feasible_directions(&vec![rat(3); 4], &abcd_hat()).unwrap(), nu(&[0]));
        assert_eq!(feasible_directions(&vec![rat(0); 4], &abcd_hat()).unwrap(), nu(&[0]));
    }

    #[test]
    fn irreversible_direction_is_enforced() {
        let net = parse_network("R1: A -> B ; kf=1\nR2: B <-> A ; kf=1 kb=1").unwrap();
        assert!(FluxPattern::for_network(&net, SignVector::from_i8(&[1, -1])).is_ok());
        assert_eq!(
            FluxPattern::for_network(&net, SignVector::from_i8(&[-1, 1])),
            Err(FeasibilityError::AgainstReactionDirection { reaction: 0 })
        );
    }

    #[test]
    fn detailed_balance() {
        let net = parse_network("R1: A <-> B ; kf=1 kb=1\nR2: B <-> C ; kf=1 kb=1").unwrap();
        let p = ThermoParams::new(300.0, vec![5.0, 5.0, 5.0]).unwrap();
        let rates = detailed_balance_rates(&p, &net, &[2.0, 3.0]).unwrap();
        assert_eq!(rates.backward, vec![2.0, 3.0]);

        let mut p = ThermoParams::new(300.0, vec![0.0, 0.0, 0.0]).unwrap();
        let rt = p.rt();
        p.standard_potentials = vec![0.0, -rt * libm::log(2.0), 0.0];
        let rates = detailed_balance_rates(&p, &net, &[1.0, 1.0]).unwrap();
        assert!((rates.backward[0] - 0.5).abs() < 1e-12);
        assert!((rates.equilibrium_constants()[0] - 2.0).abs() < 1e-12);

        assert_eq!(
            ThermoParams::new(0.0, vec![]),
            Err(FeasibilityError::NonPositiveTemperature(0.0))
        );
        let irr = parse_network("R1: A -> B ; kf=1").unwrap();
        let p = ThermoParams::new(300.0, vec![0.0, 0.0]).unwrap();
        assert!(matches!(
            detailed_balance_rates(&p, &irr, &[1.0]),
            Err(FeasibilityError::IrreversibleReaction { .. })
        ));
    }
}
