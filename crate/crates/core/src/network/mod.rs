//! Reaction networks: the parsed model, its directed expansion and the exact
//! matrices `A = S E` and `B`.

mod parse;

pub use parse::{parse_network, parse_rational, ParseError, ParseErrorKind};

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::RationalMatrix;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NetworkError {
    DuplicateLabel(String),
    DuplicateSpecies(String),
    NonPositiveRate { label: String },
    ReactantEqualsProduct { label: String },
    /// A reversible reaction without `kb`.
    MissingBackwardRate { label: String },
    /// An irreversible reaction with `kb`.
    UnexpectedBackwardRate { label: String },
    NegativeCoefficient { label: String },
    UnknownSpecies(usize),
    DimensionMismatch { expected: usize, found: usize },
    NonPositiveFeed { index: usize },
}

impl fmt::Display for NetworkError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetworkError::DuplicateLabel(l) => write!(f, "duplicate reaction label `{l}`"),
            NetworkError::DuplicateSpecies(s) => write!(f, "duplicate species `{s}`"),
            NetworkError::NonPositiveRate { label } => {
                write!(f, "reaction `{label}` has a nonpositive rate constant")
            }
            NetworkError::ReactantEqualsProduct { label } => {
                write!(f, "reaction `{label}` has identical reactant and product")
            }
            NetworkError::MissingBackwardRate { label } => {
                write!(f, "reversible reaction `{label}` needs kb")
            }
            NetworkError::UnexpectedBackwardRate { label } => {
                write!(f, "irreversible reaction `{label}` must not carry kb")
            }
            NetworkError::NegativeCoefficient { label } => {
                write!(f, "reaction `{label}` has a negative stoichiometric coefficient")
            }
            NetworkError::UnknownSpecies(i) => write!(f, "unknown species index {i}"),
            NetworkError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            NetworkError::NonPositiveFeed { index } => {
                write!(f, "feed entry {index} is not strictly positive")
            }
        }
    }
}

impl core::error::Error for NetworkError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Species {
    pub name: String,
    pub index: usize,
}

/// A nonnegative combination of species.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complex {
    pub stoichiometry: Vec<Rational>,
    pub label: String,
}

impl Complex {
    pub fn is_zero(&self) -> bool {
        self.stoichiometry.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reaction {
    pub label: String,
    /// Index into [`ReactionNetwork::complexes`].
    pub reactant: usize,
    pub product: usize,
    pub reversible: bool,
    pub kf: Rational,
    pub kb: Option<Rational>,
}

/// The continuous-flow pseudo-reaction: inflow of `feed` at rate 1, outflow
/// equal to the current state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inflow {
    pub feed: Vec<Rational>,
    pub rate: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ReactionNetwork {
    species: Vec<Species>,
    complexes: Vec<Complex>,
    reactions: Vec<Reaction>,
    inflow: Option<Inflow>,
}

impl ReactionNetwork {
    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn inflow(&self) -> Option<&Inflow> {
        self.inflow.as_ref()
    }

    pub fn species_count(&self) -> usize {
        self.species.len()
    }

    pub fn species_index(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn is_fully_reversible(&self) -> bool {
        self.reactions.iter().all(|r| r.reversible)
    }

    /// Reaction difference vector `y' - y` of reaction `i`.
    pub fn difference(&self, i: usize) -> Vec<Rational> {
        let r = &self.reactions[i];
        let y = &self.complexes[r.reactant].stoichiometry;
        let yp = &self.complexes[r.product].stoichiometry;
        yp.iter().zip(y).map(|(a, b)| a - b).collect()
    }

    /// The `n x r` matrix with one column `y' - y` per reaction, in file order
    /// and ignoring reversibility.
    pub fn reaction_matrix(&self) -> RationalMatrix {
        let cols: Vec<Vec<Rational>> = (0..self.reactions.len()).map(|i| self.difference(i)).collect();
        RationalMatrix::from_columns(self.species.len(), &cols).expect("difference vectors have n entries")
    }

    /// Directed expansion; see [`DirectedNetwork`] for the index convention.
    pub fn expand_directed(&self) -> DirectedNetwork {
        let mut forward = Vec::new();
        let mut backward = Vec::new();
        let mut single = Vec::new();
        for (i, r) in self.reactions.iter().enumerate() {
            if r.reversible {
                forward.push(DirectedReaction {
                    label: format!("{}.fwd", r.label),
                    reactant: r.reactant,
                    product: r.product,
                    rate: r.kf.clone(),
                    source: i,
                    backward: false,
                });
                backward.push(DirectedReaction {
                    label: format!("{}.rev", r.label),
                    reactant: r.product,
                    product: r.reactant,
                    rate: r.kb.clone().expect("reversible reactions carry kb"),
                    source: i,
                    backward: true,
                });
            } else {
                single.push(DirectedReaction {
                    label: r.label.clone(),
                    reactant: r.reactant,
                    product: r.product,
                    rate: r.kf.clone(),
                    source: i,
                    backward: false,
                });
            }
        }
        let paired = forward.len();
        let mut reactions = forward;
        reactions.append(&mut backward);
        reactions.append(&mut single);
        DirectedNetwork {
            species: self.species.clone(),
            complexes: self.complexes.clone(),
            reactions,
            paired,
            inflow: self.inflow.clone(),
        }
    }

    /// Adds the continuous-flow pseudo-reaction with inflow `feed` and rate 1.
    pub fn augment_cfstr(&self, feed: &[Rational]) -> Result<ReactionNetwork, NetworkError> {
        if feed.len() != self.species.len() {
            return Err(NetworkError::DimensionMismatch {
                expected: self.species.len(),
                found: feed.len(),
            });
        }
        if let Some(index) = feed.iter().position(|c| !c.is_positive()) {
            return Err(NetworkError::NonPositiveFeed { index });
        }
        let mut out = self.clone();
        out.inflow = Some(Inflow {
            feed: feed.to_vec(),
            rate: Rational::one(),
        });
        Ok(out)
    }

    /// Number of connected components of the undirected complex graph.
    pub fn linkage_classes(&self) -> usize {
        let p = self.complexes.len();
        let mut parent: Vec<usize> = (0..p).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut classes = p;
        for r in &self.reactions {
            let (a, b) = (find(&mut parent, r.reactant), find(&mut parent, r.product));
            if a != b {
                parent[a] = b;
                classes -= 1;
            }
        }
        classes
    }
}

/// Canonical DSL rendering; reparsing it yields an identical network.
impl fmt::Display for ReactionNetwork {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.reactions {
            let arrow = if r.reversible { "<->" } else { "->" };
            write!(
                f,
                "{}: {} {} {} ; kf={}",
                r.label, self.complexes[r.reactant].label, arrow, self.complexes[r.product].label, r.kf
            )?;
            if let Some(kb) = &r.kb {
                write!(f, " kb={kb}")?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

/// Programmatic construction of validated networks.
///
/// Species are indexed in order of first appearance, complexes are
/// deduplicated by stoichiometry.
#[derive(Debug, Clone, Default)]
pub struct NetworkBuilder {
    species: Vec<String>,
    complexes: Vec<Vec<(usize, Rational)>>,
    reactions: Vec<Reaction>,
}

impl NetworkBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Starts from a fixed species list, e.g. to address complexes by vector.
    pub fn with_species<S: AsRef<str>>(names: &[S]) -> Result<Self, NetworkError> {
        let mut b = Self::new();
        for n in names {
            let n = n.as_ref();
            if b.species.iter().any(|s| s == n) {
                return Err(NetworkError::DuplicateSpecies(n.into()));
            }
            b.species.push(n.into());
        }
        Ok(b)
    }

    pub fn species_index(&mut self, name: &str) -> usize {
        match self.species.iter().position(|s| s == name) {
            Some(i) => i,
            None => {
                self.species.push(name.into());
                self.species.len() - 1
            }
        }
    }

    fn complex_index(&mut self, terms: Vec<(usize, Rational)>) -> usize {
        // Canonical form: sorted by species, merged, zero terms dropped.
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        let mut sorted = terms;
        sorted.sort_by_key(|(i, _)| *i);
        for (i, c) in sorted {
            match merged.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|(_, c)| !c.is_zero());
        match self.complexes.iter().position(|c| *c == merged) {
            Some(i) => i,
            None => {
                self.complexes.push(merged);
                self.complexes.len() - 1
            }
        }
    }

    /// Adds a reaction between complexes given as `(species name, coefficient)`
    /// terms. An empty side is the zero complex.
    pub fn reaction(
        &mut self,
        label: &str,
        reactant: &[(&str, Rational)],
        product: &[(&str, Rational)],
        reversible: bool,
        kf: Rational,
        kb: Option<Rational>,
    ) -> Result<&mut Self, NetworkError> {
        let lhs: Vec<(usize, Rational)> = reactant
            .iter()
            .map(|(s, c)| (self.species_index(s), c.clone()))
            .collect();
        let rhs: Vec<(usize, Rational)> = product
            .iter()
            .map(|(s, c)| (self.species_index(s), c.clone()))
            .collect();
        self.push_reaction(label, lhs, rhs, reversible, kf, kb)
    }

    /// Adds a reaction between complexes given as dense vectors over the
    /// species declared so far.
    pub fn reaction_vectors(
        &mut self,
        label: &str,
        reactant: &[Rational],
        product: &[Rational],
        reversible: bool,
        kf: Rational,
        kb: Option<Rational>,
    ) -> Result<&mut Self, NetworkError> {
        for v in [reactant, product] {
            if v.len() != self.species.len() {
                return Err(NetworkError::DimensionMismatch {
                    expected: self.species.len(),
                    found: v.len(),
                });
            }
        }
        let sparse = |v: &[Rational]| -> Vec<(usize, Rational)> {
            v.iter().cloned().enumerate().filter(|(_, c)| !c.is_zero()).collect()
        };
        let (lhs, rhs) = (sparse(reactant), sparse(product));
        self.push_reaction(label, lhs, rhs, reversible, kf, kb)
    }

    fn push_reaction(
        &mut self,
        label: &str,
        lhs: Vec<(usize, Rational)>,
        rhs: Vec<(usize, Rational)>,
        reversible: bool,
        kf: Rational,
        kb: Option<Rational>,
    ) -> Result<&mut Self, NetworkError> {
        let label_owned = label.to_string();
        if self.reactions.iter().any(|r| r.label == label) {
            return Err(NetworkError::DuplicateLabel(label_owned));
        }
        if lhs.iter().chain(&rhs).any(|(_, c)| c.is_negative()) {
            return Err(NetworkError::NegativeCoefficient { label: label_owned });
        }
        if let Some(&(i, _)) = lhs.iter().chain(&rhs).find(|(i, _)| *i >= self.species.len()) {
            return Err(NetworkError::UnknownSpecies(i));
        }
        if !kf.is_positive() || kb.as_ref().is_some_and(|k| !k.is_positive()) {
            return Err(NetworkError::NonPositiveRate { label: label_owned });
        }
        match (reversible, &kb) {
            (true, None) => return Err(NetworkError::MissingBackwardRate { label: label_owned }),
            (false, Some(_)) => {
                return Err(NetworkError::UnexpectedBackwardRate { label: label_owned })
            }
            _ => {}
        }
        let before = self.complexes.len();
        let reactant = self.complex_index(lhs);
        let product = self.complex_index(rhs);
        if reactant == product {
            self.complexes.truncate(before);
            return Err(NetworkError::ReactantEqualsProduct { label: label_owned });
        }
        self.reactions.push(Reaction {
            label: label_owned,
            reactant,
            product,
            reversible,
            kf,
            kb,
        });
        Ok(self)
    }

    pub fn build(&self) -> ReactionNetwork {
        let n = self.species.len();
        let species = self
            .species
            .iter()
            .enumerate()
            .map(|(index, name)| Species {
                name: name.clone(),
                index,
            })
            .collect();
        let complexes = self
            .complexes
            .iter()
            .map(|terms| {
                let mut stoichiometry = vec![Rational::zero(); n];
                for (i, c) in terms {
                    stoichiometry[*i] = c.clone();
                }
                Complex {
                    label: complex_label(terms, &self.species),
                    stoichiometry,
                }
            })
            .collect();
        ReactionNetwork {
            species,
            complexes,
            reactions: self.reactions.clone(),
            inflow: None,
        }
    }
}

fn complex_label(terms: &[(usize, Rational)], names: &[String]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in terms.iter().enumerate() {
        if k > 0 {
            out.push_str(" + ");
        }
        if !c.is_one() {
            out.push_str(&format!("{c} "));
        }
        out.push_str(&names[*i]);
    }
    out
}

/// One direction of a reaction after expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedReaction {
    pub label: String,
    pub reactant: usize,
    pub product: usize,
    pub rate: Rational,
    /// Index of the originating reaction in the parsed network.
    pub source: usize,
    pub backward: bool,
}

/// A network in which every reaction is one-directional.
///
/// With `p` reversible reactions, indices `0..p` hold their forward
/// directions and `p..2p` the matching backward directions, so direction `i`
/// pairs with `i + p`. Irreversible reactions follow in file order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedNetwork {
    species: Vec<Species>,
    complexes: Vec<Complex>,
    reactions: Vec<DirectedReaction>,
    paired: usize,
    inflow: Option<Inflow>,
}

impl DirectedNetwork {
    pub fn species(&self) -> &[Species] {
        &self.species
    }

    pub fn complexes(&self) -> &[Complex] {
        &self.complexes
    }

    pub fn reactions(&self) -> &[DirectedReaction] {
        &self.reactions
    }

    pub fn inflow(&self) -> Option<&Inflow> {
        self.inflow.as_ref()
    }

    /// Number of reversible pairs.
    pub fn paired(&self) -> usize {
        self.paired
    }

    /// Directed reactions, counting the flow pseudo-reaction when present.
    pub fn directed_count(&self) -> usize {
        self.reactions.len() + usize::from(self.inflow.is_some())
    }

    /// The partner direction of `i`, if `i` belongs to a reversible pair.
    pub fn partner(&self, i: usize) -> Option<usize> {
        if i < self.paired {
            Some(i + self.paired)
        } else if i < 2 * self.paired {
            Some(i - self.paired)
        } else {
            None
        }
    }

    /// Rate constants in directed order as exact rationals.
    pub fn rates(&self) -> Vec<Rational> {
        self.reactions.iter().map(|r| r.rate.clone()).collect()
    }

    pub fn build_matrices(&self) -> NetworkMatrices {
        let n = self.species.len();
        let p = self.complexes.len();
        let r = self.reactions.len();
        let mut a = RationalMatrix::zeros(n, r);
        let mut b = RationalMatrix::zeros(r, n);
        let mut s = RationalMatrix::zeros(n, p);
        let mut e = RationalMatrix::zeros(p, r);
        for (j, c) in self.complexes.iter().enumerate() {
            for (i, v) in c.stoichiometry.iter().enumerate() {
                s.set(i, j, v.clone());
            }
        }
        for (k, rx) in self.reactions.iter().enumerate() {
            let y = &self.complexes[rx.reactant].stoichiometry;
            let yp = &self.complexes[rx.product].stoichiometry;
            for i in 0..n {
                a.set(i, k, &yp[i] - &y[i]);
                b.set(k, i, y[i].clone());
            }
            e.set(rx.reactant, k, -Rational::one());
            e.set(rx.product, k, Rational::one());
        }
        assert_eq!(s.mul(&e).expect("S is n x p, E is p x r"), a, "A = S E");
        NetworkMatrices {
            a,
            b,
            s,
            e,
            paired: self.paired,
            origin: self.reactions.iter().map(|r| (r.source, r.backward)).collect(),
            feed: self.inflow.as_ref().map(|f| f.feed.clone()),
        }
    }
}

/// Exact matrices of a directed network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetworkMatrices {
    /// `n x r`: column `k` is `y' - y` of directed reaction `k`.
    pub a: RationalMatrix,
    /// `r x n`: row `k` is the reactant complex of directed reaction `k`.
    pub b: RationalMatrix,
    /// `n x p`: complex compositions.
    pub s: RationalMatrix,
    /// `p x r` incidence: `-1` at the reactant, `+1` at the product.
    pub e: RationalMatrix,
    pub paired: usize,
    /// Originating reaction of each directed column and whether it is the
    /// backward direction.
    pub origin: Vec<(usize, bool)>,
    /// CFSTR inflow, when the network was augmented.
    pub feed: Option<Vec<Rational>>,
}

impl NetworkMatrices {
    pub fn species_count(&self) -> usize {
        self.a.rows()
    }

    /// Directed reactions, counting the flow pseudo-reaction when present.
    pub fn r_directed(&self) -> usize {
        self.a.cols() + usize::from(self.feed.is_some())
    }

    /// Directed reactions with a column in `A`.
    pub fn internal_reactions(&self) -> usize {
        self.a.cols()
    }
}
