#![allow(dead_code)]

use crnkit_core::linalg::RationalMatrix;
use crnkit_core::network::{NetworkBuilder, NetworkMatrices, ReactionNetwork};
use crnkit_core::{rat, Rational};
use proptest::prelude::*;

pub const SPECIES: [&str; 6] = ["A", "B", "C", "D", "E", "F"];

/// Raw description of a random network: species count and, per reaction,
/// reactant and product coefficient vectors plus reversibility.
#[derive(Debug, Clone)]
pub struct NetSpec {
    pub n: usize,
    pub reactions: Vec<(Vec<i64>, Vec<i64>, bool)>,
}

impl NetSpec {
    pub fn build(&self) -> ReactionNetwork {
        let mut b = NetworkBuilder::with_species(&SPECIES[..self.n]).unwrap();
        for (i, (y, yp, rev)) in self.reactions.iter().enumerate() {
            let y: Vec<Rational> = y.iter().map(|v| rat(*v)).collect();
            let yp: Vec<Rational> = yp.iter().map(|v| rat(*v)).collect();
            let kb = rev.then(|| rat(1));
            b.reaction_vectors(&format!("R{}", i + 1), &y, &yp, *rev, rat(1), kb)
                .unwrap();
        }
        b.build()
    }

    pub fn matrices(&self) -> NetworkMatrices {
        self.build().expand_directed().build_matrices()
    }
}

fn complex(n: usize, max: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0..=max, n)
}

/// Networks with `1..=max_n` species and `1..=max_r` reactions, complexes
/// with coefficients in `0..=2`.
pub fn network(max_n: usize, max_r: usize) -> impl Strategy<Value = NetSpec> {
    (1..=max_n).prop_flat_map(move |n| {
        let reaction = (complex(n, 2), complex(n, 2), any::<bool>())
            .prop_filter("distinct complexes", |(y, yp, _)| y != yp);
        proptest::collection::vec(reaction, 1..=max_r).prop_map(move |reactions| NetSpec { n, reactions })
    })
}

/// Fully reversible networks.
pub fn reversible_network(max_n: usize, max_r: usize) -> impl Strategy<Value = NetSpec> {
    network(max_n, max_r).prop_map(|mut s| {
        for r in &mut s.reactions {
            r.2 = true;
        }
        s
    })
}

/// Weakly reversible networks: reversible edges plus directed cycles
/// through fresh complexes.
pub fn weakly_reversible_network(max_n: usize, max_r: usize) -> impl Strategy<Value = NetSpec> {
    (1..=max_n).prop_flat_map(move |n| {
        let cycle = proptest::collection::vec(complex(n, 2), 2..=3);
        proptest::collection::vec(cycle, 1..=max_r.div_ceil(2)).prop_map(move |cycles| {
            let mut reactions = Vec::new();
            for c in cycles {
                let mut c = c;
                c.dedup();
                if c.len() > 1 && c.first() == c.last() {
                    c.pop();
                }
                match c.len() {
                    0 | 1 => {}
                    2 => reactions.push((c[0].clone(), c[1].clone(), true)),
                    _ => {
                        for k in 0..c.len() {
                            reactions.push((c[k].clone(), c[(k + 1) % c.len()].clone(), false));
                        }
                    }
                }
            }
            let mut spec = NetSpec { n, reactions };
            dedupe_cycles(&mut spec);
            spec
        })
    })
    .prop_filter("at least one reaction", |s| !s.reactions.is_empty())
}

/// A 3-cycle whose complexes repeat collapses into an edge pair that may
/// not be distinct; drop degenerate reactions.
fn dedupe_cycles(spec: &mut NetSpec) {
    spec.reactions.retain(|(y, yp, _)| y != yp);
}

pub fn int_matrix(max_n: usize, max_r: usize) -> impl Strategy<Value = RationalMatrix> {
    (1..=max_n, 1..=max_r).prop_flat_map(|(n, r)| {
        proptest::collection::vec(-3i64..=3, n * r).prop_map(move |v| RationalMatrix::from_i64(n, r, &v))
    })
}

pub fn sign_pattern(len: usize) -> impl Strategy<Value = Vec<i8>> {
    proptest::collection::vec(-1i8..=1, len)
}
