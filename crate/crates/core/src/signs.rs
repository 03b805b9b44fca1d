//! Sign vectors and the sign sets of rational subspaces.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{Signed, Zero};

use crate::linalg::{self, RationalMatrix};
use crate::simplex::{strict_feasible, LinearSystem, SignTag, Witness};
use crate::Rational;

/// Largest ambient dimension enumerated by default.
pub const DEFAULT_CAPACITY: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Neg,
    Zero,
    Pos,
}

impl Sign {
    pub fn of(v: &Rational) -> Sign {
        if v.is_positive() {
            Sign::Pos
        } else if v.is_negative() {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn of_f64(v: f64) -> Sign {
        if v > 0.0 {
            Sign::Pos
        } else if v < 0.0 {
            Sign::Neg
        } else {
            Sign::Zero
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Neg => -1,
            Sign::Zero => 0,
            Sign::Pos => 1,
        }
    }

    pub fn negate(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Zero => Sign::Zero,
            Sign::Pos => Sign::Neg,
        }
    }

    /// Equality constraint tag forcing this sign.
    pub fn strict_tag(self) -> SignTag {
        match self {
            Sign::Neg => SignTag::StrictlyNeg,
            Sign::Zero => SignTag::Zero,
            Sign::Pos => SignTag::StrictlyPos,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Neg => '-',
            Sign::Zero => '0',
            Sign::Pos => '+',
        }
    }
}

/// An element of `{-1, 0, +1}^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignVector(pub Vec<Sign>);

impl SignVector {
    pub fn zero(len: usize) -> Self {
        SignVector(vec![Sign::Zero; len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| *s == Sign::Zero)
    }

    pub fn negate(&self) -> Self {
        SignVector(self.0.iter().map(|s| s.negate()).collect())
    }

    pub fn get(&self, i: usize) -> Sign {
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = Sign> + '_ {
        self.0.iter().copied()
    }

    pub fn from_i8(values: &[i8]) -> Self {
        SignVector(
            values
                .iter()
                .map(|v| match v.signum() {
                    1 => Sign::Pos,
                    -1 => Sign::Neg,
                    _ => Sign::Zero,
                })
                .collect(),
        )
    }

    /// `self` conforms to `other`: every entry is either zero or equal to the
    /// matching entry of `other`.
    pub fn conforms_to(&self, other: &SignVector) -> bool {
        self.len() == other.len()
            && self
                .iter()
                .zip(other.iter())
                .all(|(a, b)| a == Sign::Zero || a == b)
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", s.symbol())?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseSignError(pub String);

impl fmt::Display for ParseSignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid sign `{}` (expected +, -, 0, 1 or -1)", self.0)
    }
}

impl core::error::Error for ParseSignError {}

impl FromStr for SignVector {
    type Err = ParseSignError;

    /// Comma-separated signs, e.g. `+,-,0`; parentheses are optional.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        if trimmed.trim().is_empty() {
            return Ok(SignVector(Vec::new()));
        }
        trimmed
            .split(',')
            .map(|t| match t.trim() {
                "+" | "1" | "+1" => Ok(Sign::Pos),
                "-" | "-1" => Ok(Sign::Neg),
                "0" => Ok(Sign::Zero),
                other => Err(ParseSignError(other.into())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(SignVector)
    }
}

/// Componentwise sign of an exact vector.
pub fn sign_of(v: &[Rational]) -> SignVector {
    SignVector(v.iter().map(Sign::of).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignError {
    /// Ambient dimension exceeds the enumeration capacity.
    Capacity { dim: usize, cap: usize },
    DimensionMismatch { expected: usize, found: usize },
}

impl fmt::Display for SignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignError::Capacity { dim, cap } => write!(
                f,
                "sign enumeration in dimension {dim} exceeds the capacity limit {cap}"
            ),
            SignError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
        }
    }
}

impl core::error::Error for SignError {}

/// A set of sign vectors of common length, each with a realizing vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignSet {
    len: usize,
    elements: BTreeMap<SignVector, Vec<Rational>>,
}

impl SignSet {
    pub fn new(len: usize) -> Self {
        SignSet {
            len,
            elements: BTreeMap::new(),
        }
    }

    pub fn vector_len(&self) -> usize {
        self.len
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn insert(&mut self, witness: Vec<Rational>) {
        self.elements.insert(sign_of(&witness), witness);
    }

    pub fn contains(&self, s: &SignVector) -> bool {
        self.elements.contains_key(s)
    }

    pub fn witness(&self, s: &SignVector) -> Option<&[Rational]> {
        self.elements.get(s).map(Vec::as_slice)
    }

    /// Sign vectors in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = &SignVector> {
        self.elements.keys()
    }

    pub fn iter_with_witnesses(&self) -> impl Iterator<Item = (&SignVector, &[Rational])> {
        self.elements.iter().map(|(s, w)| (s, w.as_slice()))
    }

    /// Elements other than the zero vector.
    pub fn nonzero(&self) -> impl Iterator<Item = &SignVector> {
        self.iter().filter(|s| !s.is_zero())
    }

    pub fn intersection<'a>(&'a self, other: &'a SignSet) -> impl Iterator<Item = &'a SignVector> {
        self.iter().filter(move |s| other.contains(s))
    }
}

/// `sigma(span(basis))`, the exact set of sign vectors realized by the span.
///
/// Candidates are grown one coordinate at a time; a partial assignment is
/// extended only while it stays realizable (one exact feasibility probe per
/// node, with the remaining coordinates free). Membership in the span is
/// imposed as orthogonality to a basis of the complement. Coordinates outside
/// the union of basis supports are fixed to zero and only candidates whose
/// first nonzero entry is `+` are explored; the rest follow by negation.
pub fn subspace_signs(
    basis: &[Vec<Rational>],
    ambient: usize,
    cap: usize,
) -> Result<SignSet, SignError> {
    if ambient > cap {
        return Err(SignError::Capacity { dim: ambient, cap });
    }
    for v in basis {
        if v.len() != ambient {
            return Err(SignError::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
    }
    let mut set = SignSet::new(ambient);
    set.insert(vec![Rational::zero(); ambient]);

    let support: Vec<usize> = (0..ambient)
        .filter(|&i| basis.iter().any(|v| !v[i].is_zero()))
        .collect();
    if support.is_empty() {
        return Ok(set);
    }

    let complement = linalg::orthogonal_complement(basis, ambient);
    let equalities = if complement.is_empty() {
        RationalMatrix::zeros(0, ambient)
    } else {
        RationalMatrix::from_rows(&complement).expect("complement vectors share a length")
    };

    let mut tags = vec![SignTag::Zero; ambient];
    for &i in &support {
        tags[i] = SignTag::Free;
    }
    let mut search = Enumeration {
        equalities,
        support,
        set,
    };
    search.descend(&mut tags, 0, false);
    Ok(search.set)
}

struct Enumeration {
    equalities: RationalMatrix,
    support: Vec<usize>,
    set: SignSet,
}

impl Enumeration {
    fn probe(&self, tags: &[SignTag]) -> Option<Witness> {
        let sys = LinearSystem::new(self.equalities.clone(), tags.to_vec())
            .expect("one tag per coordinate");
        strict_feasible(&sys)
    }

    fn descend(&mut self, tags: &mut [SignTag], depth: usize, seen_nonzero: bool) {
        if depth == self.support.len() {
            if !seen_nonzero {
                return;
            }
            if let Some(w) = self.probe(tags) {
                let neg: Vec<Rational> = w.0.iter().map(|v| -v).collect();
                self.set.insert(w.into_inner());
                self.set.insert(neg);
            }
            return;
        }
        let coord = self.support[depth];
        let choices: &[SignTag] = if seen_nonzero {
            &[SignTag::StrictlyPos, SignTag::StrictlyNeg, SignTag::Zero]
        } else {
            &[SignTag::StrictlyPos, SignTag::Zero]
        };
        for &tag in choices {
            tags[coord] = tag;
            let last = depth + 1 == self.support.len();
            // Leaves are probed in the recursive call.
            if last || self.probe(tags).is_some() {
                self.descend(tags, depth + 1, seen_nonzero || tag != SignTag::Zero);
            }
        }
        tags[coord] = SignTag::Free;
    }
}

/// Whether a sign pattern lies in `Sigma(K) = sigma^-1(sigma(K))`, given the
/// sign set of `K`. Membership reduces to sign membership.
pub fn sigma_inverse_member(x_sign: &SignVector, set: &SignSet) -> bool {
    x_sign.len() == set.vector_len() && set.contains(x_sign)
}

/// A vector `x` with `sigma(x) = source` and `sigma(B x) = target`, if any.
pub fn image_sign_reachable(
    b: &RationalMatrix,
    source: &SignVector,
    target: &SignVector,
) -> Result<Option<Witness>, SignError> {
    let (r, n) = (b.rows(), b.cols());
    if source.len() != n {
        return Err(SignError::DimensionMismatch {
            expected: n,
            found: source.len(),
        });
    }
    if target.len() != r {
        return Err(SignError::DimensionMismatch {
            expected: r,
            found: target.len(),
        });
    }
    let equalities = b
        .hconcat(&RationalMatrix::identity(r).neg())
        .expect("identity has matching rows");
    let tags = source
        .iter()
        .chain(target.iter())
        .map(Sign::strict_tag)
        .collect();
    let sys = LinearSystem::new(equalities, tags).expect("one tag per coordinate");
    Ok(strict_feasible(&sys).map(|w| {
        let mut x = w.into_inner();
        x.truncate(n);
        Witness(x)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{frac, rat};
    use alloc::string::ToString;

    fn sv(v: &[i8]) -> SignVector {
        SignVector::from_i8(v)
    }

    fn abcd_b() -> RationalMatrix {
        RationalMatrix::from_i64(2, 4, &[1, 1, 0, 0, 0, 0, 1, 1])
    }

    #[test]
    fn signs_of_vectors() {
        assert_eq!(
            sign_of(&[rat(-1), rat(-1), rat(1), rat(1)]),
            sv(&[-1, -1, 1, 1])
        );
        assert_eq!(sign_of(&[rat(0), rat(0)]), SignVector::zero(2));
        assert_eq!(sign_of(&[frac(3, 2), rat(0), rat(-7)]), sv(&[1, 0, -1]));
    }

    #[test]
    fn line_signs() {
        let s = subspace_signs(&[vec![rat(1), rat(1)]], 2, DEFAULT_CAPACITY).unwrap();
        let got: Vec<_> = s.iter().cloned().collect();
        assert_eq!(got, vec![sv(&[-1, -1]), sv(&[0, 0]), sv(&[1, 1])]);
    }

    #[test]
    fn empty_basis_gives_only_zero() {
        let s = subspace_signs(&[], 3, DEFAULT_CAPACITY).unwrap();
        assert_eq!(s.len(), 1);
        assert!(s.contains(&SignVector::zero(3)));
    }

    #[test]
    fn reaction_difference_line() {
        let s = subspace_signs(&[vec![rat(-1), rat(-1), rat(1), rat(1)]], 4, DEFAULT_CAPACITY)
            .unwrap();
        assert_eq!(s.len(), 3);
        assert!(sigma_inverse_member(&sv(&[-1, -1, 1, 1]), &s));
        assert!(sigma_inverse_member(&sv(&[1, 1, -1, -1]), &s));
        assert!(!sigma_inverse_member(&sv(&[1, 0, 0, 0]), &s));
        assert!(sigma_inverse_member(&SignVector::zero(4), &s));
    }

    #[test]
    fn plane_in_three_space() {
        // x + y + z = 0 realizes every sign vector with both signs present.
        let basis = vec![vec![rat(1), rat(-1), rat(0)], vec![rat(0), rat(1), rat(-1)]];
        let s = subspace_signs(&basis, 3, DEFAULT_CAPACITY).unwrap();
        assert_eq!(s.len(), 13);
        for (sig, w) in s.iter_with_witnesses() {
            assert_eq!(&sign_of(w), sig);
            assert!(linalg::dot(w, &[rat(1), rat(1), rat(1)]).is_zero());
        }
    }

    #[test]
    fn capacity_is_enforced() {
        assert_eq!(
            subspace_signs(&[], 15, DEFAULT_CAPACITY),
            Err(SignError::Capacity { dim: 15, cap: 14 })
        );
    }

    #[test]
    fn image_reachability() {
        let b = abcd_b();
        let w = image_sign_reachable(&b, &sv(&[-1, -1, 1, 1]), &sv(&[-1, 1]))
            .unwrap()
            .unwrap();
        assert_eq!(sign_of(&w.0), sv(&[-1, -1, 1, 1]));
        assert_eq!(sign_of(&b.mul_vec(&w.0).unwrap()), sv(&[-1, 1]));
        assert!(image_sign_reachable(&b, &sv(&[-1, -1, 1, 1]), &sv(&[1, 1]))
            .unwrap()
            .is_none());
        let w = image_sign_reachable(&b, &SignVector::zero(4), &SignVector::zero(2))
            .unwrap()
            .unwrap();
        assert!(linalg::is_zero_vec(&w.0));
    }

    #[test]
    fn parse_and_display() {
        let s: SignVector = "+,-,0".parse().unwrap();
        assert_eq!(s, sv(&[1, -1, 0]));
        assert_eq!(s.to_string(), "(+,-,0)");
        assert_eq!("(+,-,0)".parse::<SignVector>().unwrap(), s);
        assert!("+,x".parse::<SignVector>().is_err());
    }
}
