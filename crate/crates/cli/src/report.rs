//! Machine-readable analysis report.
//!
//! Exact quantities are serialized as `"p/q"` strings (integers as `"p"`);
//! only dynamics results are floats. Field order is fixed, so identical input
//! yields byte-identical JSON.

use crnkit_core::dynamics::{Cluster, EquilibriumSet, OrthogonalityReport};
use crnkit_core::feasibility::FeasibilityVerdict;
use crnkit_core::injectivity::InjectivityReport;
use crnkit_core::linalg::RationalMatrix;
use crnkit_core::network::{NetworkMatrices, ReactionNetwork};
use crnkit_core::Rational;
use serde::Serialize;

pub const SCHEMA_ID: &str = "report.schema.json";

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    #[serde(rename = "$schema")]
    pub schema: &'static str,
    pub tool: Tool,
    pub input: Input,
    pub command: &'static str,
    pub network: NetworkSummary,
    pub matrices: Matrices,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feasibility: Option<FeasibilityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub injectivity: Option<InjectivityJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

impl Tool {
    pub fn current() -> Self {
        Tool { name: env!("CARGO_PKG_NAME"), version: env!("CARGO_PKG_VERSION") }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Input {
    pub sha256: String,
    pub bytes: usize,
}

pub fn rational(v: &Rational) -> String {
    v.to_string()
}

pub fn rationals(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational).collect()
}

pub fn matrix(m: &RationalMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| rationals(m.row(i))).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ComplexJson {
    pub label: String,
    pub stoichiometry: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReactionJson {
    pub label: String,
    pub reactant: usize,
    pub product: usize,
    pub reversible: bool,
    pub kf: String,
    pub kb: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NetworkSummary {
    /// Species.
    pub n: usize,
    /// Reactions as written.
    pub r: usize,
    /// Directed reactions, including the flow pseudo-reaction when present.
    pub r_directed: usize,
    /// Complexes.
    pub p: usize,
    /// Linkage classes.
    pub l: usize,
    pub species: Vec<String>,
    pub complexes: Vec<ComplexJson>,
    pub reactions: Vec<ReactionJson>,
    pub directed: Vec<String>,
    pub feed: Option<Vec<String>>,
}

impl NetworkSummary {
    pub fn new(net: &ReactionNetwork, mats: &NetworkMatrices) -> Self {
        let directed = net.expand_directed();
        NetworkSummary {
            n: net.species_count(),
            r: net.reactions().len(),
            r_directed: mats.r_directed(),
            p: net.complexes().len(),
            l: net.linkage_classes(),
            species: net.species().iter().map(|s| s.name.clone()).collect(),
            complexes: net
                .complexes()
                .iter()
                .map(|c| ComplexJson { label: c.label.clone(), stoichiometry: rationals(&c.stoichiometry) })
                .collect(),
            reactions: net
                .reactions()
                .iter()
                .map(|r| ReactionJson {
                    label: r.label.clone(),
                    reactant: r.reactant,
                    product: r.product,
                    reversible: r.reversible,
                    kf: rational(&r.kf),
                    kb: r.kb.as_ref().map(rational),
                })
                .collect(),
            directed: directed.reactions().iter().map(|d| d.label.clone()).collect(),
            feed: mats.feed.as_deref().map(rationals),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Matrices {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<String>>,
    #[serde(rename = "E")]
    pub e: Vec<Vec<String>>,
}

impl Matrices {
    pub fn new(mats: &NetworkMatrices) -> Self {
        Matrices { a: matrix(&mats.a), b: matrix(&mats.b), s: matrix(&mats.s), e: matrix(&mats.e) }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FeasibilityJson {
    Feasible {
        nu: String,
        gamma: Vec<String>,
        /// `A_hat^T gamma`, one entry per reaction.
        delta_g: Vec<String>,
    },
    Loop {
        nu: String,
        /// Nonnegative flux over the doubled matrix.
        z: Vec<String>,
        net_flux: Vec<String>,
        reaction: usize,
    },
}

impl FeasibilityJson {
    pub fn new(verdict: &FeasibilityVerdict, nu: String, delta_g: Option<Vec<Rational>>) -> Self {
        match verdict {
            FeasibilityVerdict::Potential(p) => FeasibilityJson::Feasible {
                nu,
                gamma: rationals(&p.gamma),
                delta_g: delta_g.as_deref().map(rationals).unwrap_or_default(),
            },
            FeasibilityVerdict::Loop(l) => FeasibilityJson::Loop {
                nu,
                z: rationals(&l.z),
                net_flux: rationals(&l.net_flux()),
                reaction: l.pair,
            },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SigViolationJson {
    pub kernel_sign: String,
    pub source_sign: String,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SigJson {
    pub holds: bool,
    pub probes: usize,
    pub violation: Option<SigViolationJson>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiJson {
    pub holds: bool,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InjectivityJson {
    pub sig_condition: SigJson,
    pub phi_b_injective: PhiJson,
    pub span_condition: bool,
    pub weakly_reversible: bool,
    pub deficiency: usize,
    pub kernel_dim: usize,
}

impl From<&InjectivityReport> for InjectivityJson {
    fn from(r: &InjectivityReport) -> Self {
        InjectivityJson {
            sig_condition: SigJson {
                holds: r.sig_condition.holds,
                probes: r.sig_condition.probes,
                violation: r.sig_condition.violation.as_ref().map(|v| SigViolationJson {
                    kernel_sign: v.kernel_sign.to_string(),
                    source_sign: v.source_sign.to_string(),
                    witness: rationals(&v.witness),
                }),
            },
            phi_b_injective: PhiJson {
                holds: r.phi_b_injective.holds,
                violation: r.phi_b_injective.violation.as_ref().map(ToString::to_string),
            },
            span_condition: r.span_condition,
            weakly_reversible: r.weakly_reversible,
            deficiency: r.deficiency,
            kernel_dim: r.kernel_dim,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DynamicsJson {
    Simulation(SimulationJson),
    Multistart(MultistartJson),
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulationJson {
    pub x0: Vec<f64>,
    pub kappa: Vec<f64>,
    pub feed: Option<Vec<f64>>,
    pub t_end: f64,
    pub steps: usize,
    pub final_state: Vec<f64>,
    /// `|dx/dt|_inf` at the final state.
    pub final_residual: f64,
    pub orthogonality: OrthogonalityJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrthogonalityJson {
    pub flux_violation: f64,
    pub monomial_violation: f64,
    pub net_violation: f64,
    pub sides_agree: bool,
}

impl From<&OrthogonalityReport> for OrthogonalityJson {
    fn from(r: &OrthogonalityReport) -> Self {
        OrthogonalityJson {
            flux_violation: r.flux_violation,
            monomial_violation: r.monomial_violation,
            net_violation: r.net_violation,
            sides_agree: r.sides_agree(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MultistartJson {
    pub x0: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub draws: Vec<DrawJson>,
    /// Largest cluster count over all draws.
    pub max_clusters: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DrawJson {
    pub kappa: Vec<f64>,
    pub clusters: Vec<ClusterJson>,
    pub failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterJson {
    pub state: Vec<f64>,
    pub residual: f64,
    pub basin_count: usize,
}

impl From<&Cluster> for ClusterJson {
    fn from(c: &Cluster) -> Self {
        ClusterJson { state: c.state.clone(), residual: c.residual, basin_count: c.basin_count }
    }
}

impl DrawJson {
    pub fn new(kappa: Vec<f64>, set: &EquilibriumSet) -> Self {
        DrawJson { kappa, clusters: set.clusters.iter().map(ClusterJson::from).collect(), failures: set.failures }
    }
}
