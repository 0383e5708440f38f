//! Polynomial linear relations among function vectors: degree-bounded
//! discovery from truncated series, saturation of a basis so that every
//! specialization keeps full rank, and the "is this value relation a
//! specialization?" predicate.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::matrix::{Matrix, PolyMatrix, RatMatrix};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::series::{expand_poly, TruncSeries};
use crate::smith::Smith;
use crate::Result;

/// Extra series coefficients demanded beyond the unknown count before a
/// relation is reported; guards against spurious truncation relations.
pub const ORDER_GUARD: usize = 10;

/// Rows C with sum_i C[i] * f_i == 0 (verified to truncation order). May
/// have zero rows (full rank case).
#[derive(Clone, Debug, PartialEq)]
pub struct RelationBasis {
    n: usize,
    rows: Vec<Vec<Poly>>,
}

impl RelationBasis {
    pub fn new(n: usize, rows: Vec<Vec<Poly>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == n), "relation row length mismatch");
        RelationBasis { n, rows }
    }

    pub fn empty(n: usize) -> Self {
        RelationBasis { n, rows: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of independent relations, n - m in the usual notation.
    pub fn rank_deficit(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> &[Vec<Poly>] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Option<PolyMatrix> {
        if self.rows.is_empty() {
            None
        } else {
            Some(Matrix::from_rows(self.rows.clone()))
        }
    }

    pub fn eval_at(&self, xi: &Rat) -> Option<RatMatrix> {
        self.to_matrix().map(|m| m.map(|p| p.eval(xi)))
    }

    /// Saturate: same row span over the function field, but the gcd of all
    /// maximal minors becomes a nonzero constant, so evaluation at any point
    /// keeps rank n - m. Implemented by dividing out the Smith invariant
    /// factors: the first rows of V^-1 span the saturation.
    pub fn normalize(&self) -> Result<RelationBasis> {
        let Some(c) = self.to_matrix() else {
            return Ok(self.clone());
        };
        let r = c.rows();
        let smith = Smith::compute(&c);
        if smith.rank() < r {
            return Err(Error::DependentRows);
        }
        let mut rows = Vec::with_capacity(r);
        for i in 0..r {
            let row: Vec<Poly> = smith.v_inv.row_vec(i);
            rows.push(primitive_row(row));
        }
        rows.sort_by_key(row_sort_key);
        Ok(RelationBasis { n: self.n, rows })
    }

    /// Rank of the evaluated coefficient matrix at xi.
    pub fn specialization_rank(&self, xi: &Rat) -> usize {
        match self.eval_at(xi) {
            None => 0,
            Some(m) => m.rank(),
        }
    }

    /// Does alpha lie in the Q-row space of C(xi)?
    pub fn explains_value_relation(&self, xi: &Rat, alpha: &[Rat]) -> Result<bool> {
        if alpha.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        let alpha_row: RatMatrix = Matrix::from_rows(vec![alpha.to_vec()]);
        match self.eval_at(xi) {
            None => Ok(alpha.iter().all(Rat::is_zero)),
            Some(m) => Ok(m.vstack(&alpha_row).rank() == m.rank()),
        }
    }

    /// All Smith invariant factors equal 1; the computable form of a
    /// saturated basis.
    pub fn is_saturated(&self) -> bool {
        let Some(c) = self.to_matrix() else {
            return true;
        };
        let smith = Smith::compute(&c);
        let factors = smith.invariant_factors();
        factors.len() == c.rows() && factors.iter().all(Poly::is_one)
    }

    /// sum_i C[row][i] * f_i as a series, for verification.
    pub fn apply_row_to_series(&self, row: usize, f: &[TruncSeries]) -> TruncSeries {
        assert_eq!(f.len(), self.n);
        let center = f[0].center().clone();
        let order = f.iter().map(TruncSeries::order).min().unwrap();
        let mut acc = TruncSeries::zero(center.clone(), order);
        for (i, fi) in f.iter().enumerate() {
            let c = expand_poly(&self.rows[row][i], &center, order);
            acc = acc.add(&c.mul(fi));
        }
        acc
    }
}

fn primitive_row(row: Vec<Poly>) -> Vec<Poly> {
    // joint content: divide by the gcd of entry contents; sign from the
    // first nonzero entry
    let mut joint: Option<Rat> = None;
    for p in &row {
        if p.is_zero() {
            continue;
        }
        let c = p.content().abs();
        joint = Some(match joint {
            None => c,
            Some(j) => gcd_rat(&j, &c),
        });
    }
    let Some(mut joint) = joint else {
        return row;
    };
    if let Some(first) = row.iter().find(|p| !p.is_zero()) {
        if first.leading().unwrap().is_negative() {
            joint = -joint;
        }
    }
    let inv = joint.recip();
    row.into_iter().map(|p| p.scale(&inv)).collect()
}

/// gcd on positive rationals: gcd of numerators over lcm of denominators.
fn gcd_rat(a: &Rat, b: &Rat) -> Rat {
    use num_integer::Integer;
    let num = a.numer().gcd(b.numer());
    let den = a.denom().lcm(b.denom());
    Rat::new(num, den)
}

fn row_sort_key(row: &Vec<Poly>) -> (usize, usize) {
    let deg = row.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let lead = row.iter().position(|p| !p.is_zero()).unwrap_or(usize::MAX);
    (lead, deg)
}

/// All coefficient vectors (C_1..C_n) with deg C_i <= d and
/// sum C_i(z) F_i(z) == 0 to the common truncation order. The truncation
/// order must exceed the unknown count by `ORDER_GUARD`.
pub fn find_polynomial_relations(f: &[TruncSeries], d: usize) -> Result<RelationBasis> {
    let n = f.len();
    assert!(n > 0, "relation search over an empty family");
    let center = f[0].center().clone();
    assert!(
        f.iter().all(|s| s.center() == &center),
        "relation search requires a common center"
    );
    let order = f.iter().map(TruncSeries::order).min().unwrap();
    let needed = n * (d + 1) + ORDER_GUARD;
    if order < needed {
        return Err(Error::OrderTooSmallForDegreeBound { needed, got: order });
    }

    // unknowns x_{i,e}: coefficient of z^e in C_i; one column per unknown,
    // one equation per series coefficient
    let cols = n * (d + 1);
    let mut columns: Vec<Vec<Rat>> = Vec::with_capacity(cols);
    for fi in f {
        let mut ze_series = TruncSeries::one(center.clone(), order); // z^0
        let z_series = expand_poly(&Poly::var(), &center, order);
        for e in 0..=d {
            if e > 0 {
                ze_series = ze_series.mul(&z_series);
            }
            let col = ze_series.mul(fi);
            columns.push(col.coeffs().to_vec());
        }
    }
    let system: RatMatrix = Matrix::from_fn(order + 1, cols, |r, c| columns[c][r].clone());
    let null = system.nullspace();

    let mut rows: Vec<Vec<Poly>> = null
        .into_iter()
        .map(|x| {
            let row: Vec<Poly> = (0..n)
                .map(|i| Poly::new(x[i * (d + 1)..(i + 1) * (d + 1)].to_vec()))
                .collect();
            primitive_row(row)
        })
        .collect();
    rows.sort_by_key(row_sort_key);
    Ok(RelationBasis { n, rows })
}
