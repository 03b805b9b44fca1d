//! Homogeneous linear systems with sign constraints, decided by an exact
//! phase-1 simplex.
//!
//! Every sign decision in the crate reduces to one question: does
//! `M x = 0` have a solution whose coordinates carry prescribed signs? Strict
//! signs are normalized to `x_i >= 1` / `x_i <= -1`, which is exact because
//! the solution set of a homogeneous system is a cone.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::linalg::{self, RationalMatrix};
use crate::Rational;

/// Sign constraint attached to one coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignTag {
    Free,
    Zero,
    NonNeg,
    NonPos,
    StrictlyPos,
    StrictlyNeg,
}

impl SignTag {
    pub fn admits(self, v: &Rational) -> bool {
        match self {
            SignTag::Free => true,
            SignTag::Zero => v.is_zero(),
            SignTag::NonNeg => !v.is_negative(),
            SignTag::NonPos => !v.is_positive(),
            SignTag::StrictlyPos => v.is_positive(),
            SignTag::StrictlyNeg => v.is_negative(),
        }
    }
}

/// `M x = 0` together with one [`SignTag`] per coordinate.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    equalities: RationalMatrix,
    tags: Vec<SignTag>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagCountMismatch {
    pub columns: usize,
    pub tags: usize,
}

impl fmt::Display for TagCountMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "system has {} columns but {} sign tags", self.columns, self.tags)
    }
}

impl core::error::Error for TagCountMismatch {}

impl LinearSystem {
    pub fn new(equalities: RationalMatrix, tags: Vec<SignTag>) -> Result<Self, TagCountMismatch> {
        if equalities.cols() != tags.len() {
            return Err(TagCountMismatch {
                columns: equalities.cols(),
                tags: tags.len(),
            });
        }
        Ok(LinearSystem { equalities, tags })
    }

    /// A system with sign tags only and no equalities.
    pub fn unconstrained(tags: Vec<SignTag>) -> Self {
        LinearSystem {
            equalities: RationalMatrix::zeros(0, tags.len()),
            tags,
        }
    }

    pub fn dim(&self) -> usize {
        self.tags.len()
    }

    pub fn equalities(&self) -> &RationalMatrix {
        &self.equalities
    }

    pub fn tags(&self) -> &[SignTag] {
        &self.tags
    }

    /// Exact substitution check.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.dim()
            && self.tags.iter().zip(x).all(|(t, v)| t.admits(v))
            && self
                .equalities
                .mul_vec(x)
                .map(|r| linalg::is_zero_vec(&r))
                .unwrap_or(false)
    }
}

/// A solution of a [`LinearSystem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub Vec<Rational>);

impl Witness {
    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }
}

/// Returns a solution of `sys` if one exists.
pub fn strict_feasible(sys: &LinearSystem) -> Option<Witness> {
    let n = sys.dim();

    // x_j = offset_j + sum(coeff * y_col) with y >= 0.
    let mut offsets = vec![Rational::zero(); n];
    let mut columns: Vec<(usize, Rational)> = Vec::new();
    for (j, tag) in sys.tags.iter().enumerate() {
        match tag {
            SignTag::Zero => {}
            SignTag::Free => {
                columns.push((j, Rational::one()));
                columns.push((j, -Rational::one()));
            }
            SignTag::NonNeg => columns.push((j, Rational::one())),
            SignTag::NonPos => columns.push((j, -Rational::one())),
            SignTag::StrictlyPos => {
                offsets[j] = Rational::one();
                columns.push((j, Rational::one()));
            }
            SignTag::StrictlyNeg => {
                offsets[j] = -Rational::one();
                columns.push((j, -Rational::one()));
            }
        }
    }

    let m = &sys.equalities;
    let rows: Vec<usize> = (0..m.rows())
        .filter(|&i| m.row(i).iter().any(|v| !v.is_zero()))
        .collect();

    let mut tableau = Vec::with_capacity(rows.len());
    for &i in &rows {
        let row = m.row(i);
        let mut coeffs: Vec<Rational> = columns
            .iter()
            .map(|(j, c)| &row[*j] * c)
            .collect();
        let mut rhs = -linalg::dot(row, &offsets);
        if rhs.is_negative() {
            rhs = -rhs;
            for c in coeffs.iter_mut() {
                *c = -c.clone();
            }
        }
        tableau.push((coeffs, rhs));
    }

    let y = phase_one(columns.len(), tableau)?;
    let mut x = offsets;
    for ((j, c), value) in columns.iter().zip(&y) {
        if !value.is_zero() {
            x[*j] += c * value;
        }
    }
    assert!(
        sys.is_satisfied_by(&x),
        "simplex produced a point that does not satisfy the system"
    );
    Some(Witness(x))
}

/// Finds `y >= 0` with `T y = b` (all `b >= 0`) by minimizing the sum of
/// artificial variables, entering and leaving by Bland's rule.
fn phase_one(num_vars: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Option<Vec<Rational>> {
    let m = rows.len();
    if m == 0 {
        return Some(vec![Rational::zero(); num_vars]);
    }
    let width = num_vars + m;
    // Each tableau row holds `width` coefficients followed by the rhs.
    let mut t: Vec<Vec<Rational>> = rows
        .into_iter()
        .enumerate()
        .map(|(i, (coeffs, rhs))| {
            let mut row = coeffs;
            row.resize(width + 1, Rational::zero());
            row[num_vars + i] = Rational::one();
            row[width] = rhs;
            row
        })
        .collect();
    let mut basis: Vec<usize> = (num_vars..width).collect();

    // Reduced costs of the phase-1 objective: minus the column sums over the
    // original columns, zero on artificials; last entry is minus the objective.
    let mut cost = vec![Rational::zero(); width + 1];
    for row in &t {
        for j in 0..num_vars {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }

    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if !row[enter].is_positive() {
                continue;
            }
            let ratio = &row[width] / &row[enter];
            let better = match &leave {
                None => true,
                Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
            };
            if better {
                leave = Some((i, ratio));
            }
        }
        // Phase 1 is bounded below by zero, so a column with negative cost
        // always has a positive entry.
        let (pivot_row, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if !cost[width].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); num_vars];
    for (i, &b) in basis.iter().enumerate() {
        if b < num_vars {
            y[b] = t[i][width].clone();
        }
    }
    Some(y)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], r: usize, c: usize) {
    let inv = t[r][c].recip();
    for v in t[r].iter_mut() {
        if !v.is_zero() {
            *v *= &inv;
        }
    }
    let pivot_row = t[r].clone();
    let eliminate = |row: &mut [Rational]| {
        let factor = row[c].clone();
        if factor.is_zero() {
            return;
        }
        for (v, p) in row.iter_mut().zip(&pivot_row) {
            if !p.is_zero() {
                *v -= &factor * p;
            }
        }
    };
    for (i, row) in t.iter_mut().enumerate() {
        if i != r {
            eliminate(row);
        }
    }
    eliminate(cost);
}
