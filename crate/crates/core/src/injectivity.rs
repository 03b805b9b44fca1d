//! Injectivity of the generalized polynomial map `f(x) = A diag(k) x^B`.
//!
//! The map is injective on every class `x + K` for all positive rate vectors
//! iff `sigma(ker A)` and `sigma(B Sigma(K*))` are disjoint. The monomial map
//! `x -> x^B` alone is injective on `K` iff `sigma(ker B)` and `sigma(K*)` are
//! disjoint. Both are decided exactly, along with the structural flags that
//! accompany them: span containment of reaction differences in the reactant
//! complexes, weak reversibility and the deficiency.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::linalg::{self, RationalMatrix};
use crate::network::{NetworkMatrices, ReactionNetwork};
use crate::signs::{image_sign_reachable, subspace_signs, SignError, SignVector};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InjectivityError {
    Sign(SignError),
    /// Reactant and product complexes coincide.
    EqualComplexes,
}

impl fmt::Display for InjectivityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InjectivityError::Sign(e) => e.fmt(f),
            InjectivityError::EqualComplexes => f.write_str("complexes are equal"),
        }
    }
}

impl core::error::Error for InjectivityError {}

impl From<SignError> for InjectivityError {
    fn from(e: SignError) -> Self {
        InjectivityError::Sign(e)
    }
}

/// A pair showing the sign condition fails: `x` has sign `source` (an element
/// of `sigma(K*)`) and `B x` has sign `kernel_sign`, which lies in
/// `sigma(ker A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigViolation {
    pub kernel_sign: SignVector,
    pub source_sign: SignVector,
    pub witness: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigCondition {
    pub holds: bool,
    pub violation: Option<SigViolation>,
    /// Number of exact feasibility probes performed.
    pub probes: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiCondition {
    pub holds: bool,
    /// A common element of `sigma(ker B)` and `sigma(K*)`.
    pub violation: Option<SignVector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub sig_condition: SigCondition,
    pub phi_b_injective: PhiCondition,
    pub span_condition: bool,
    pub weakly_reversible: bool,
    pub deficiency: usize,
    /// `dim ker A`.
    pub kernel_dim: usize,
}

/// A basis of the stoichiometric subspace `im(A)`.
pub fn stoichiometric_basis(mats: &NetworkMatrices) -> Vec<Vec<Rational>> {
    let cols = mats.a.column_vectors();
    linalg::independent_subset(&cols)
        .into_iter()
        .map(|j| cols[j].clone())
        .collect()
}

/// Decides `sigma(ker A) ∩ sigma(B Sigma(K*)) = ∅` pairwise: one exact probe
/// per `(s, tau)` with `s` in `sigma(ker A)` (zero included) and `tau` a
/// nonzero element of `sigma(K)`. Rate constants do not enter, since a
/// positive diagonal scaling leaves kernel sign sets unchanged.
pub fn sig_condition(
    mats: &NetworkMatrices,
    k_basis: &[Vec<Rational>],
    cap: usize,
) -> Result<SigCondition, SignError> {
    let n = mats.a.rows();
    let r = mats.a.cols();
    let kernel = subspace_signs(&linalg::kernel_basis(&mats.a), r, cap)?;
    let k_signs = subspace_signs(k_basis, n, cap)?;
    let mut probes = 0;
    for tau in k_signs.nonzero() {
        for s in kernel.iter() {
            probes += 1;
            if let Some(w) = image_sign_reachable(&mats.b, tau, s)? {
                return Ok(SigCondition {
                    holds: false,
                    violation: Some(SigViolation {
                        kernel_sign: s.clone(),
                        source_sign: tau.clone(),
                        witness: w.into_inner(),
                    }),
                    probes,
                });
            }
        }
    }
    Ok(SigCondition {
        holds: true,
        violation: None,
        probes,
    })
}

/// Decides `sigma(ker B) ∩ sigma(K*) = ∅`.
pub fn phi_b_injective(
    b: &RationalMatrix,
    k_basis: &[Vec<Rational>],
    cap: usize,
) -> Result<PhiCondition, SignError> {
    let n = b.cols();
    let kernel = subspace_signs(&linalg::kernel_basis(b), n, cap)?;
    let k_signs = subspace_signs(k_basis, n, cap)?;
    let violation = k_signs.nonzero().find(|s| kernel.contains(s)).cloned();
    Ok(PhiCondition {
        holds: violation.is_none(),
        violation,
    })
}

/// Whether every reaction difference lies in the span of the reactant
/// complexes (columns of `A` against rows of `B`).
pub fn span_condition(mats: &NetworkMatrices) -> bool {
    linalg::span_contained(&mats.a.column_vectors(), &mats.b.row_vectors())
        .expect("A and B share the species dimension")
}

/// Every linkage class of the complex graph is strongly connected.
pub fn weakly_reversible(net: &ReactionNetwork) -> bool {
    let p = net.complexes().len();
    let mut adj = vec![Vec::new(); p];
    for r in net.reactions() {
        adj[r.reactant].push(r.product);
        if r.reversible {
            adj[r.product].push(r.reactant);
        }
    }
    let comp = strongly_connected_components(&adj);
    adj.iter()
        .enumerate()
        .all(|(u, out)| out.iter().all(|&v| comp[u] == comp[v]))
}

/// Tarjan's algorithm, iterative. Returns a component id per vertex.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<usize> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNVISITED; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // Frames of (vertex, next edge position).
        let mut frames = vec![(root, 0usize)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = frames.last_mut() {
            if let Some(&w) = adj[v].get(*pos) {
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Which of `y . (y - y')` and `y' . (y - y')` is nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionSide {
    Reactant,
    Product,
    Both,
}

pub fn complex_projection_nonzero(
    y: &[Rational],
    y_prime: &[Rational],
) -> Result<ProjectionSide, InjectivityError> {
    let d: Vec<Rational> = y.iter().zip(y_prime).map(|(a, b)| a - b).collect();
    if linalg::is_zero_vec(&d) {
        return Err(InjectivityError::EqualComplexes);
    }
    let on_reactant = !linalg::dot(y, &d).is_zero();
    let on_product = !linalg::dot(y_prime, &d).is_zero();
    match (on_reactant, on_product) {
        (true, true) => Ok(ProjectionSide::Both),
        (true, false) => Ok(ProjectionSide::Reactant),
        (false, true) => Ok(ProjectionSide::Product),
        // d.d = y.d - y'.d > 0 rules this out.
        (false, false) => unreachable!("both projections vanish for distinct complexes"),
    }
}

/// `p - l - rank(A)` with `p` complexes and `l` linkage classes.
pub fn deficiency(net: &ReactionNetwork, mats: &NetworkMatrices) -> usize {
    let p = net.complexes().len();
    let l = net.linkage_classes();
    let s = linalg::rank(&mats.a);
    p.checked_sub(l + s)
        .expect("deficiency is nonnegative for a well-formed network")
}

/// All injectivity verdicts with `K = im(A)`.
pub fn full_report(
    net: &ReactionNetwork,
    mats: &NetworkMatrices,
    cap: usize,
) -> Result<InjectivityReport, SignError> {
    let k = stoichiometric_basis(mats);
    Ok(InjectivityReport {
        sig_condition: sig_condition(mats, &k, cap)?,
        phi_b_injective: phi_b_injective(&mats.b, &k, cap)?,
        span_condition: span_condition(mats),
        weakly_reversible: weakly_reversible(net),
        deficiency: deficiency(net, mats),
        kernel_dim: linalg::kernel_basis(&mats.a).len(),
    })
}
