//! Scalar operators L = sum p_i(z) d^i: the determinant construction of the
//! minimal operator annihilating a polynomial combination of system
//! solutions, witness-coefficient selection at a point, composition with a
//! linear factor, and Frobenius analysis of apparent singularities.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::Error;
use crate::matrix::{Matrix, PolyMatrix, RatMatrix};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::relations::RelationBasis;
use crate::series::{expand_poly, TruncSeries};
use crate::diffsys::DiffSystem;
use crate::Result;

/// L = p_0 + p_1 d + ... + p_order d^order with p_order != 0.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarOperator {
    coeffs: Vec<Poly>,
}

impl ScalarOperator {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        assert!(
            !coeffs.is_empty() && !coeffs.last().unwrap().is_zero(),
            "scalar operator must be nonzero"
        );
        ScalarOperator { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[&[i64]]) -> Self {
        Self::new(coeffs.iter().map(|c| Poly::from_ints(c)).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    /// Is xi an ordinary point (leading coefficient nonzero there)?
    pub fn is_ordinary_at(&self, xi: &Rat) -> bool {
        !self.leading().eval(xi).is_zero()
    }

    /// Divide out the polynomial gcd and the joint rational content of the
    /// coefficients; the sign is pinned by a positive leading coefficient of
    /// the top polynomial.
    pub fn content_normalized(&self) -> ScalarOperator {
        ScalarOperator {
            coeffs: normalize_delta_vector(self.coeffs.clone()),
        }
    }

    /// L applied to a series; the guaranteed order drops by the operator
    /// order.
    pub fn apply_series(&self, y: &TruncSeries) -> TruncSeries {
        let center = y.center().clone();
        let out_order = y.order().saturating_sub(self.order());
        let mut acc = TruncSeries::zero(center.clone(), out_order);
        let mut deriv = y.clone();
        for (i, p) in self.coeffs.iter().enumerate() {
            if i > 0 {
                deriv = deriv.derivative();
            }
            if p.is_zero() {
                continue;
            }
            let ps = expand_poly(p, &center, deriv.order());
            acc = acc.add(&ps.mul(&deriv).truncated(out_order));
        }
        acc
    }

    /// Operator R with R(y) = L((z - xi) * y); the order is preserved.
    pub fn compose_linear(&self, xi: &Rat) -> ScalarOperator {
        let lin = Poly::linear_root(xi);
        let r = self.order();
        let mut out: Vec<Poly> = Vec::with_capacity(r + 1);
        for j in 0..=r {
            let mut q = &lin * &self.coeffs[j];
            if j + 1 <= r {
                let carry = self.coeffs[j + 1].scale(&Rat::from_int(j as i64 + 1));
                q = &q + &carry;
            }
            out.push(q);
        }
        ScalarOperator::new(out)
    }
}

/// Joint normalization of a delta vector: polynomial gcd out, joint rational
/// content out, sign so the top nonzero polynomial has positive leading
/// coefficient.
fn normalize_delta_vector(mut deltas: Vec<Poly>) -> Vec<Poly> {
    let mut g = Poly::zero();
    for p in &deltas {
        g = g.gcd(p);
    }
    if !g.is_zero() && !g.is_one() {
        deltas = deltas.iter().map(|p| p.exact_div(&g)).collect();
    }
    let mut joint: Option<Rat> = None;
    for p in &deltas {
        if p.is_zero() {
            continue;
        }
        let c = p.content().abs();
        joint = Some(match joint {
            None => c,
            Some(j) => {
                let num = j.numer().gcd(c.numer());
                let den = j.denom().lcm(c.denom());
                Rat::new(num, den)
            }
        });
    }
    if let Some(mut joint) = joint {
        if let Some(top) = deltas.iter().rev().find(|p| !p.is_zero()) {
            if top.leading().unwrap().is_negative() {
                joint = -joint;
            }
        }
        let inv = joint.recip();
        deltas = deltas.iter().map(|p| p.scale(&inv)).collect();
    }
    deltas
}

/// Local solution structure of L y = 0 at a point: the rational indicial
/// exponents, whether a logarithmic solution is forced, how many independent
/// holomorphic power-series solutions exist, and the smallest vanishing
/// order among them.
#[derive(Clone, Debug, PartialEq)]
pub struct FrobeniusData {
    pub point: Rat,
    pub exponents: Vec<Rat>,
    pub log_involved: bool,
    pub holomorphic_basis_count: usize,
    pub min_valuation: Option<usize>,
}

/// ((n+1) x n) relation-plus-derivative matrix with the derivative rows
/// cleared by powers of T, so that all entries are polynomial. Row layout:
/// the relation rows first, then T^j * A^j for j = 0..=m.
fn cleared_m_matrix(
    system: &DiffSystem,
    relations: &RelationBasis,
    a: &[Poly],
    m: usize,
) -> Result<PolyMatrix> {
    let n = system.dim();
    let rows = system.combination_derivative_rows(a, m)?;
    let t = system.denominator();
    let mut data: Vec<Vec<Poly>> = Vec::with_capacity(n + 1);
    for r in relations.rows() {
        data.push(r.clone());
    }
    let mut t_pow = Poly::one();
    for (j, row) in rows.iter().enumerate() {
        if j > 0 {
            t_pow = &t_pow * t;
        }
        let cleared: Vec<Poly> = row
            .iter()
            .map(|e| {
                let cof = t_pow.exact_div(e.den());
                &cof * e.num()
            })
            .collect();
        data.push(cleared);
    }
    Ok(Matrix::from_rows(data))
}

/// The minimal annihilating operator of F = sum a_i f_i relative to the
/// given relation basis: delta_j = (-1)^j det(M_j) with denominators cleared
/// and the vector content-normalized. The order equals m = n - (number of
/// relations) exactly when the square submatrix keeping rows A^0..A^{m-1}
/// has full rank; a degenerate coefficient choice drops the order to the
/// first row dependency, and the same determinant construction on the
/// independent columns still yields the annihilator there. A choice with
/// F identically zero is an error.
pub fn minimal_combination_operator(
    system: &DiffSystem,
    relations: &RelationBasis,
    a: &[Poly],
) -> Result<(ScalarOperator, Vec<Poly>)> {
    let n = system.dim();
    if a.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: a.len() });
    }
    assert_eq!(relations.n(), n, "relation basis dimension mismatch");
    let rel_rows = relations.rank_deficit();
    let m_max = n - rel_rows;
    let big = cleared_m_matrix(system, relations, a, m_max)?;
    let t = system.denominator();

    // first order where the stacked rows become dependent over Q(z)
    let rank_of_leading = |rows: usize| -> usize {
        let sub: Matrix<crate::ratfun::RatFun> =
            Matrix::from_fn(rows, n, |r, c| crate::ratfun::RatFun::from_poly(big[(r, c)].clone()));
        sub.rank()
    };
    let mut order = m_max;
    for mp in 0..=m_max {
        if rank_of_leading(rel_rows + mp + 1) < rel_rows + mp + 1 {
            order = mp;
            break;
        }
    }
    if order == 0 && rank_of_leading(rel_rows + 1) < rel_rows + 1 {
        // A^0 already lies in the relation span: F is identically zero
        return Err(Error::DegenerateCoefficientChoice { achieved_order: None });
    }

    let q = rel_rows + order;
    let cols = independent_columns(&big, q, n);
    debug_assert_eq!(cols.len(), q);

    let mut deltas: Vec<Poly> = Vec::with_capacity(order + 1);
    let mut t_pow = Poly::one();
    for j in 0..=order {
        // delete the derivative row j (absolute index rel_rows + j)
        let skip = rel_rows + j;
        let sub: PolyMatrix = Matrix::from_fn(q, q, |r, c| {
            let rr = if r < skip { r } else { r + 1 };
            big[(rr, cols[c])].clone()
        });
        let mut d = sub.det();
        if j % 2 == 1 {
            d = -d;
        }
        // undo the T^j clearing of the deleted row
        if j > 0 {
            t_pow = &t_pow * t;
        }
        deltas.push(&d * &t_pow);
    }

    debug_assert!(!deltas[order].is_zero());
    let deltas = normalize_delta_vector(deltas);
    Ok((ScalarOperator::new(deltas.clone()), deltas))
}

/// Greedy leftmost column set such that the first `rows` rows restricted to
/// those columns have full rank over Q(z).
fn independent_columns(big: &PolyMatrix, rows: usize, n: usize) -> Vec<usize> {
    let mut cols: Vec<usize> = Vec::with_capacity(rows);
    for c in 0..n {
        if cols.len() == rows {
            break;
        }
        let mut trial = cols.clone();
        trial.push(c);
        let sub: Matrix<crate::ratfun::RatFun> = Matrix::from_fn(rows, trial.len(), |r, j| {
            crate::ratfun::RatFun::from_poly(big[(r, trial[j])].clone())
        });
        if sub.rank() == trial.len() {
            cols = trial;
        }
    }
    cols
}

/// Polynomials A_i with A_i(xi) = alpha_i whose relation-plus-derivative
/// matrix has full rank at xi, so the order-m minimal operator of
/// F = sum A_i f_i is regular at xi. Jets at xi are raised one derivative at
/// a time, lexicographically first coordinate, values tried from
/// 0, 1, -1, 2, -2, ...
pub fn construct_witness_coefficients(
    system: &DiffSystem,
    relations: &RelationBasis,
    xi: &Rat,
    alpha: &[Rat],
) -> Result<Vec<Poly>> {
    let n = system.dim();
    if alpha.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: alpha.len() });
    }
    assert!(
        !xi.is_zero() && !system.denominator().eval(xi).is_zero(),
        "witness point must satisfy xi * T(xi) != 0"
    );
    let rel_rows = relations.rank_deficit();
    let m = n - rel_rows;

    // precondition: alpha is not explained by specialization
    let stacked_rank = {
        let mut rows: Vec<Vec<Rat>> = relations
            .rows()
            .iter()
            .map(|r| r.iter().map(|p| p.eval(xi)).collect())
            .collect();
        rows.push(alpha.to_vec());
        let mat: RatMatrix = Matrix::from_rows(rows);
        mat.rank()
    };
    if stacked_rank != rel_rows + 1 {
        return Err(Error::RelationExplainedBySpecialization);
    }

    // jets[d][i] = d-th derivative of A_i at xi
    let mut jets: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]; m.max(1)];
    jets[0] = alpha.to_vec();

    let jet_values = [1i64, -1, 2, -2, 3, -3, 4, -4];
    for j in 1..m {
        let mut placed = false;
        'search: for trial in 0..=(n * jet_values.len()) {
            // trial 0 keeps the zero jet; after that sweep coordinates
            if trial > 0 {
                let coord = (trial - 1) / jet_values.len();
                let val = jet_values[(trial - 1) % jet_values.len()];
                jets[j] = vec![Rat::zero(); n];
                jets[j][coord] = Rat::from_int(val);
            }
            let rows = derivative_row_values(system, &jets, xi, j);
            let mut stacked: Vec<Vec<Rat>> = relations
                .rows()
                .iter()
                .map(|r| r.iter().map(|p| p.eval(xi)).collect())
                .collect();
            stacked.extend(rows);
            let mat: RatMatrix = Matrix::from_rows(stacked);
            if mat.rank() == rel_rows + j + 1 {
                placed = true;
                break 'search;
            }
        }
        assert!(placed, "jet search exhausted; rank cannot be completed");
    }

    // A_i(z) = sum_d jets[d][i] (z - xi)^d / d!
    let mut witnesses: Vec<Poly> = Vec::with_capacity(n);
    for i in 0..n {
        let mut coeffs_at_xi: Vec<Rat> = Vec::with_capacity(m.max(1));
        let mut fact = Rat::one();
        for (d, jet) in jets.iter().enumerate() {
            if d > 0 {
                fact = &fact * &Rat::from_int(d as i64);
            }
            coeffs_at_xi.push(&jet[i] / &fact);
        }
        // shift from powers of (z - xi) back to powers of z
        let local = Poly::new(coeffs_at_xi);
        witnesses.push(local.taylor_at(&(-xi)));
    }

    // self-verification: the order must be m and delta_m(xi) != 0
    let (_, deltas) = minimal_combination_operator(system, relations, &witnesses)?;
    assert_eq!(deltas.len(), m + 1);
    assert!(
        !deltas[m].eval(xi).is_zero(),
        "witness construction failed its own certificate"
    );
    Ok(witnesses)
}

/// Values of the rows A^0..A^j at xi, where the A_i are given by their jets
/// at xi. Computed with truncated series at xi, so the polynomial identities
/// between jets and row values hold exactly.
fn derivative_row_values(
    system: &DiffSystem,
    jets: &[Vec<Rat>],
    xi: &Rat,
    jmax: usize,
) -> Vec<Vec<Rat>> {
    let n = system.dim();
    let order = jmax;
    let a_series: Matrix<TruncSeries> = system
        .matrix()
        .map(|e| crate::series::expand_ratfun(e, xi, order).expect("ordinary point"));
    // current row as series vector
    let mut row: Vec<TruncSeries> = (0..n)
        .map(|i| {
            let mut coeffs: Vec<Rat> = Vec::with_capacity(order + 1);
            let mut fact = Rat::one();
            for d in 0..=order {
                if d > 0 {
                    fact = &fact * &Rat::from_int(d as i64);
                }
                let jet = jets.get(d).map(|v| v[i].clone()).unwrap_or_else(Rat::zero);
                coeffs.push(&jet / &fact);
            }
            TruncSeries::new(xi.clone(), coeffs)
        })
        .collect();
    let mut out = vec![row.iter().map(TruncSeries::value_at_center).collect::<Vec<_>>()];
    for _ in 0..jmax {
        let next: Vec<TruncSeries> = (0..n)
            .map(|i| {
                let mut acc = row[i].derivative();
                for t in 0..n {
                    let prod = a_series[(t, i)].mul(&row[t]).truncated(acc.order());
                    acc = acc.add(&prod);
                }
                acc
            })
            .collect();
        out.push(next.iter().map(TruncSeries::value_at_center).collect());
        row = next;
    }
    out
}

/// Indicial data and power-series solution attempts of L y = 0 at xi, to
/// series order k. Resonant integer exponent pairs are decided exactly; an
/// undecidable pair (difference beyond k) is an error.
pub fn frobenius_analyze(l: &ScalarOperator, xi: &Rat, k: usize) -> Result<FrobeniusData> {
    let r = l.order();
    if r == 0 {
        return Ok(FrobeniusData {
            point: xi.clone(),
            exponents: Vec::new(),
            log_involved: false,
            holomorphic_basis_count: 0,
            min_valuation: None,
        });
    }

    // local coefficients in t = z - xi
    let local: Vec<Poly> = l.coeffs().iter().map(|p| p.taylor_at(xi)).collect();
    let sigma: i64 = local
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            p.coeffs()
                .iter()
                .position(|c| !c.is_zero())
                .map(|v| v as i64 - i as i64)
        })
        .min()
        .expect("operator is nonzero");

    // phi_w(s): coefficient of t^{s + sigma + w} in L(t^s); phi_0 is the
    // indicial polynomial
    let mut phi: Vec<Poly> = Vec::new();
    for (i, p) in local.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let falling = falling_factorial_poly(i);
        for (u, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = u as i64 - i as i64 - sigma;
            debug_assert!(w >= 0);
            let w = w as usize;
            while phi.len() <= w {
                phi.push(Poly::zero());
            }
            phi[w] = &phi[w] + &falling.scale(c);
        }
    }
    let chi = phi[0].clone();
    debug_assert!(!chi.is_zero());

    let (roots, residual) = chi.rational_roots().unwrap_or((Vec::new(), chi.clone()));
    let mut log_involved = roots.iter().any(|(_, mult)| *mult > 1);
    if !residual.is_constant() {
        // repeated irrational exponents also force logarithms
        let g = residual.gcd(&residual.derivative());
        if !g.is_constant() {
            log_involved = true;
        }
    }

    let exponents: Vec<Rat> = roots.iter().map(|(e, _)| e.clone()).collect();
    let int_roots: Vec<i64> = roots
        .iter()
        .filter_map(|(e, _)| e.to_integer())
        .filter_map(|n| i64::try_from(n).ok())
        .filter(|&n| n >= 0)
        .collect();

    let mut holomorphic = 0usize;
    let mut min_valuation: Option<usize> = None;
    if let Some(&max_root) = int_roots.iter().max() {
        for &e in &int_roots {
            let span = (max_root - e) as usize;
            if span > k {
                return Err(Error::InsufficientOrder {
                    lower: Rat::from_int(e),
                    upper: Rat::from_int(max_root),
                });
            }
            match attempt_series_solution(&chi, &phi, e, span) {
                Some(_) => {
                    holomorphic += 1;
                    let val = e as usize;
                    min_valuation = Some(min_valuation.map_or(val, |v| v.min(val)));
                }
                None => {
                    log_involved = true;
                }
            }
        }
    }

    Ok(FrobeniusData {
        point: xi.clone(),
        exponents,
        log_involved,
        holomorphic_basis_count: holomorphic,
        min_valuation,
    })
}

/// Try to push a series solution with exponent e through all resonances
/// (indices where the indicial polynomial vanishes again). Returns the
/// resolved coefficients c_0..c_span on success, None when an obstruction
/// forces a logarithm.
fn attempt_series_solution(chi: &Poly, phi: &[Poly], e: i64, span: usize) -> Option<Vec<Rat>> {
    let mut c: Vec<Rat> = vec![Rat::one()];
    for w in 1..=span {
        let mut rhs = Rat::zero();
        for r in 1..=w.min(phi.len() - 1) {
            if phi[r].is_zero() || c[w - r].is_zero() {
                continue;
            }
            let t = &phi[r].eval(&Rat::from_int(e + (w - r) as i64)) * &c[w - r];
            rhs = &rhs + &t;
        }
        let pivot = chi.eval(&Rat::from_int(e + w as i64));
        if pivot.is_zero() {
            if !rhs.is_zero() {
                return None;
            }
            c.push(Rat::zero());
        } else {
            c.push(-(&rhs / &pivot));
        }
    }
    Some(c)
}

/// prod_{u < i} (e - u) as a polynomial in e.
fn falling_factorial_poly(i: usize) -> Poly {
    let mut p = Poly::one();
    for u in 0..i {
        p = &p * &Poly::linear_root(&Rat::from_int(u as i64));
    }
    p
}

/// apparent: every local solution at xi is a pure power series and they span
/// the full order. all_vanish: additionally every one of them vanishes at
/// xi. Order-0 operators have the zero solution space, so both hold
/// vacuously.
pub fn is_apparent(l: &ScalarOperator, xi: &Rat, k: usize) -> Result<(bool, bool)> {
    if l.order() == 0 {
        return Ok((true, true));
    }
    let data = frobenius_analyze(l, xi, k)?;
    let apparent = data.holomorphic_basis_count == l.order() && !data.log_involved;
    let all_vanish = apparent && data.min_valuation.is_some_and(|v| v >= 1);
    Ok((apparent, all_vanish))
}
