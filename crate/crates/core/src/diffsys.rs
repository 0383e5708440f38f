//! First-order systems y' = A y over the rational function field.


use alloc::vec::Vec;

use crate::error::Error;
use crate::matrix::{Matrix, RatFunMatrix, RatMatrix};
use crate::poly::Poly;
use crate::rat::Rat;
use crate::ratfun::RatFun;
use crate::series::{expand_poly, TruncSeries};
use crate::Result;

/// y' = A y with the monic common denominator T of the entries cached.
#[derive(Clone, PartialEq)]
pub struct DiffSystem {
    a: RatFunMatrix,
    t: Poly,
}

/// Factorization of z*T(z): the rational singular points with multiplicity
/// (z = 0 always present) and the rational-root-free residual, split into
/// squarefree factors (repeated by multiplicity).
#[derive(Clone, Debug, PartialEq)]
pub struct SingularLocus {
    pub rational_points: Vec<(Rat, usize)>,
    pub residual_factors: Vec<Poly>,
}

impl core::fmt::Debug for DiffSystem {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "DiffSystem(n={}, T={}) {:?}", self.dim(), self.t, self.a)
    }
}

impl DiffSystem {
    pub fn new(a: RatFunMatrix) -> Self {
        assert!(a.is_square(), "system matrix must be square");
        assert!(a.rows() >= 1, "system dimension must be positive");
        let mut t = Poly::one();
        for e in a.entries() {
            t = t.lcm(e.den());
        }
        DiffSystem { a, t: t.monic() }
    }

    pub fn from_rows(rows: Vec<Vec<RatFun>>) -> Self {
        Self::new(Matrix::from_rows(rows))
    }

    /// Diagonal system with constant rational entries.
    pub fn diagonal(cs: &[Rat]) -> Self {
        let n = cs.len();
        Self::new(Matrix::from_fn(n, n, |i, j| {
            if i == j {
                RatFun::constant(cs[i].clone())
            } else {
                RatFun::zero()
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &RatFunMatrix {
        &self.a
    }

    /// Monic least common multiple of the entry denominators.
    pub fn denominator(&self) -> &Poly {
        &self.t
    }

    /// T * A, which has polynomial entries.
    pub fn cleared_matrix(&self) -> Matrix<Poly> {
        self.a.map(|e| {
            let cof = self.t.exact_div(e.den());
            &cof * e.num()
        })
    }

    pub fn trace(&self) -> RatFun {
        self.a.trace()
    }

    pub fn singular_locus(&self) -> SingularLocus {
        let zt = &Poly::var() * &self.t;
        let (rational_points, residual) = zt.rational_roots().expect("z*T is nonzero");
        let mut residual_factors = Vec::new();
        for (g, m) in residual.squarefree_decomposition() {
            for _ in 0..m {
                residual_factors.push(g.clone());
            }
        }
        SingularLocus {
            rational_points,
            residual_factors,
        }
    }

    /// Largest pole order of the entries at alpha.
    pub fn pole_order_at(&self, alpha: &Rat) -> usize {
        self.a
            .entries()
            .iter()
            .map(|e| e.pole_order_at(alpha))
            .max()
            .unwrap_or(0)
    }

    /// Exact value of (z-alpha)^k * A at z = alpha, where k is the pole
    /// order from `pole_order_at`.
    pub fn polar_part_matrix(&self, alpha: &Rat, k: usize) -> RatMatrix {
        self.a.map(|e| {
            if e.is_zero() {
                return Rat::zero();
            }
            let v = e.den().valuation_at(alpha);
            if v < k {
                Rat::zero()
            } else {
                let lin_pow = Poly::linear_root(alpha).pow(v);
                let d1 = e.den().exact_div(&lin_pow);
                e.num().eval(alpha) / d1.eval(alpha)
            }
        })
    }

    /// Fundamental solution matrix as exact series: columns solve y' = A y
    /// to order k-1 and the value at the (ordinary) center c is the identity.
    pub fn fundamental_series(&self, c: &Rat, k: usize) -> Result<Matrix<TruncSeries>> {
        if self.t.eval(c).is_zero() {
            return Err(Error::ExpansionAtSingularPoint);
        }
        let n = self.dim();
        // A = sum A_m t^m with t = z - c, exact to order k-1
        let a_coeffs: Vec<RatMatrix> = {
            let series: Matrix<TruncSeries> = self.a.map(|e| {
                crate::series::expand_ratfun(e, c, k.saturating_sub(1)).expect("ordinary point")
            });
            (0..k.max(1))
                .map(|m| series.map(|s| s.coeff(m)))
                .collect()
        };
        // Y_0 = I, (m+1) Y_{m+1} = sum_{i<=m} A_i Y_{m-i}
        let mut y: Vec<RatMatrix> = Vec::with_capacity(k + 1);
        y.push(Matrix::identity(n));
        for m in 0..k {
            let mut acc: RatMatrix = Matrix::zero(n, n);
            for i in 0..=m.min(a_coeffs.len() - 1) {
                acc = acc.add_mat(&a_coeffs[i].mul_mat(&y[m - i]));
            }
            let inv = Rat::from_int(m as i64 + 1).recip();
            y.push(acc.scale_mat(&inv));
        }
        Ok(Matrix::from_fn(n, n, |i, j| {
            TruncSeries::new(c.clone(), (0..=k).map(|m| y[m][(i, j)].clone()).collect())
        }))
    }

    /// Change of unknown w = P^{-1} y: if y solves y' = A y then w solves
    /// w' = (P^{-1} A P - P^{-1} P') w.
    pub fn gauge_transform(&self, p: &RatFunMatrix) -> Result<DiffSystem> {
        assert_eq!(p.rows(), self.dim(), "gauge shape mismatch");
        assert!(p.is_square(), "gauge must be square");
        let Some(p_inv) = p.inverse() else {
            return Err(Error::NonInvertibleGauge);
        };
        let p_prime = p.map(RatFun::derivative);
        let new_a = p_inv
            .mul_mat(&self.a)
            .mul_mat(p)
            .sub_mat(&p_inv.mul_mat(&p_prime));
        Ok(DiffSystem::new(new_a))
    }

    /// System satisfied by all degree-N monomials in the solution entries,
    /// in graded lexicographic order with y_1 > ... > y_n. Returns the system
    /// and the monomial exponent vectors in row order.
    pub fn sym_power(&self, n_pow: usize) -> (DiffSystem, Vec<Vec<usize>>) {
        assert!(n_pow >= 1, "symmetric power degree must be >= 1");
        let n = self.dim();
        let monomials = degree_monomials(n, n_pow);
        let index_of = |target: &[usize]| -> usize {
            monomials
                .iter()
                .position(|m| m == target)
                .expect("monomial closed under derivative step")
        };
        let dim = monomials.len();
        let mut out: RatFunMatrix = Matrix::zero(dim, dim);
        for (row, mono) in monomials.iter().enumerate() {
            for t in 0..n {
                if mono[t] == 0 {
                    continue;
                }
                let factor = RatFun::constant(Rat::from_int(mono[t] as i64));
                for u in 0..n {
                    if self.a[(t, u)].is_zero() {
                        continue;
                    }
                    let mut target = mono.clone();
                    target[t] -= 1;
                    target[u] += 1;
                    let col = index_of(&target);
                    let add = &(&factor * &self.a[(t, u)]);
                    out[(row, col)] = &out[(row, col)] + add;
                }
            }
        }
        (DiffSystem::new(out), monomials)
    }

    /// Rows A^j with A^0 = a and A^{j+1} = (A^j)' + A^T A^j, so that the
    /// j-th derivative of F = sum_i a_i f_i is sum_i A_i^j f_i for every
    /// solution f. Entries lie in Q[z, 1/T].
    pub fn combination_derivative_rows(
        &self,
        a: &[Poly],
        jmax: usize,
    ) -> Result<Vec<Vec<RatFun>>> {
        let n = self.dim();
        if a.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: a.len(),
            });
        }
        let mut rows: Vec<Vec<RatFun>> = Vec::with_capacity(jmax + 1);
        rows.push(a.iter().map(|p| RatFun::from_poly(p.clone())).collect());
        for _ in 0..jmax {
            let prev = rows.last().unwrap();
            let next: Vec<RatFun> = (0..n)
                .map(|i| {
                    let mut acc = prev[i].derivative();
                    for t in 0..n {
                        if self.a[(t, i)].is_zero() || prev[t].is_zero() {
                            continue;
                        }
                        let add = &self.a[(t, i)] * &prev[t];
                        acc = &acc + &add;
                    }
                    acc
                })
                .collect();
            rows.push(next);
        }
        Ok(rows)
    }

    /// Residue of Trace(A) at alpha, which equals the vanishing order of the
    /// Wronskian at alpha whenever a fundamental matrix holomorphic there
    /// exists. Zero when the trace has no pole at alpha.
    pub fn wronskian_order(&self, alpha: &Rat) -> Result<usize> {
        assert!(!alpha.is_zero(), "wronskian order is for points != 0");
        let tr = self.trace();
        match tr.pole_order_at(alpha) {
            0 => Ok(0),
            1 => {
                let res = tr
                    .residue_at_simple_pole(alpha)
                    .expect("pole order checked");
                if let Some(n) = res.to_integer() {
                    if let Ok(v) = u64::try_from(n) {
                        return Ok(v as usize);
                    }
                }
                Err(Error::NonApparentSingularityStructure)
            }
            _ => Err(Error::NonApparentSingularityStructure),
        }
    }

    /// Exact check that a series vector solves the denominator-cleared
    /// system T y' = (T A) y to the given order. Valid at any center,
    /// including singular points of A.
    pub fn solves_cleared(&self, y: &[TruncSeries], order: usize) -> bool {
        assert_eq!(y.len(), self.dim(), "solution vector length mismatch");
        let c = y[0].center().clone();
        let t_series = expand_poly(&self.t, &c, order + 1);
        let cleared = self.cleared_matrix();
        for i in 0..self.dim() {
            let lhs = t_series.mul(&y[i].derivative());
            let mut rhs = TruncSeries::zero(c.clone(), order + 1);
            for j in 0..self.dim() {
                let pij = expand_poly(&cleared[(i, j)], &c, order + 1);
                rhs = rhs.add(&pij.mul(&y[j]));
            }
            let check_to = order.min(lhs.order()).min(rhs.order());
            if !lhs.truncated(check_to).sub(&rhs.truncated(check_to)).is_zero_to(check_to) {
                return false;
            }
        }
        true
    }
}

/// Exponent vectors of total degree `deg` over `n` variables, graded
/// lexicographic, first variable largest.
pub fn degree_monomials(n: usize, deg: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, deg: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            let mut m = prefix.clone();
            m.push(deg);
            out.push(m);
            return;
        }
        for i in (0..=deg).rev() {
            prefix.push(i);
            rec(n - 1, deg - i, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, deg, &mut Vec::new(), &mut out);
    out
}

/// Product of two matrices of series with a common center.
pub fn series_mat_mul(a: &Matrix<TruncSeries>, b: &Matrix<TruncSeries>) -> Matrix<TruncSeries> {
    assert_eq!(a.cols(), b.rows());
    Matrix::from_fn(a.rows(), b.cols(), |i, j| {
        let mut acc = a[(i, 0)].mul(&b[(0, j)]);
        for k in 1..a.cols() {
            acc = acc.add(&a[(i, k)].mul(&b[(k, j)]));
        }
        acc
    })
}

/// Determinant of a series matrix by cofactor expansion (test-scale sizes).
pub fn series_mat_det(m: &Matrix<TruncSeries>) -> TruncSeries {
    assert!(m.is_square());
    let n = m.rows();
    if n == 1 {
        return m[(0, 0)].clone();
    }
    let mut acc: Option<TruncSeries> = None;
    for j in 0..n {
        let minor: Matrix<TruncSeries> =
            Matrix::from_fn(n - 1, n - 1, |r, c| m[(r + 1, if c < j { c } else { c + 1 })].clone());
        let mut term = m[(0, j)].mul(&series_mat_det(&minor));
        if j % 2 == 1 {
            term = term.neg();
        }
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term),
        });
    }
    acc.unwrap()
}

/// Apply a rational-function matrix to a series vector by expanding the
/// entries at the vector's center (must be pole-free there).
pub fn apply_ratfun_matrix(
    m: &RatFunMatrix,
    y: &[TruncSeries],
    order: usize,
) -> Result<Vec<TruncSeries>> {
    assert_eq!(m.cols(), y.len());
    let c = y[0].center().clone();
    let mut out = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut acc = TruncSeries::zero(c.clone(), order);
        for (j, yj) in y.iter().enumerate() {
            let e = crate::series::expand_ratfun(&m[(i, j)], &c, order)?;
            acc = acc.add(&e.mul(&yj.truncated(order)));
        }
        out.push(acc);
    }
    Ok(out)
}
