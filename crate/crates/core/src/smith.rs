//! Smith normal form over the polynomial ring, with all four transform
//! matrices tracked. Pivoting is on minimal-degree entries to keep
//! coefficient growth in check; divisions are exact polynomial divisions.

use alloc::vec::Vec;

use crate::matrix::{Matrix, PolyMatrix};
use crate::poly::Poly;
use crate::rat::Rat;

/// U * M * V = S with U, V unimodular; S diagonal with monic invariant
/// factors d_1 | d_2 | ... The inverses come along for free from the
/// elementary-operation bookkeeping.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: PolyMatrix,
    pub u_inv: PolyMatrix,
    pub s: PolyMatrix,
    pub v: PolyMatrix,
    pub v_inv: PolyMatrix,
}

pub fn smith_normal_form(m: &PolyMatrix) -> (PolyMatrix, PolyMatrix, PolyMatrix) {
    let d = Smith::compute(m);
    (d.u, d.s, d.v)
}

impl Smith {
    pub fn compute(m: &PolyMatrix) -> Smith {
        let mut w = Work {
            s: m.clone(),
            u: Matrix::identity(m.rows()),
            u_inv: Matrix::identity(m.rows()),
            v: Matrix::identity(m.cols()),
            v_inv: Matrix::identity(m.cols()),
        };
        w.reduce();
        Smith {
            u: w.u,
            u_inv: w.u_inv,
            s: w.s,
            v: w.v,
            v_inv: w.v_inv,
        }
    }

    /// Nonzero diagonal entries, in divisibility order.
    pub fn invariant_factors(&self) -> Vec<Poly> {
        let n = self.s.rows().min(self.s.cols());
        (0..n)
            .map(|i| self.s[(i, i)].clone())
            .filter(|p| !p.is_zero())
            .collect()
    }

    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

struct Work {
    s: PolyMatrix,
    u: PolyMatrix,
    u_inv: PolyMatrix,
    v: PolyMatrix,
    v_inv: PolyMatrix,
}

impl Work {
    fn reduce(&mut self) {
        let n = self.s.rows().min(self.s.cols());
        for t in 0..n {
            loop {
                let Some((pi, pj)) = self.min_degree_pivot(t) else {
                    return; // trailing block all zero
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);

                let mut dirty = false;
                for i in t + 1..self.s.rows() {
                    if self.s[(i, t)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.s[(i, t)].divrem(&self.s[(t, t)]);
                    self.row_sub(i, t, &q);
                    if !r.is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.s.cols() {
                    if self.s[(t, j)].is_zero() {
                        continue;
                    }
                    let (q, r) = self.s[(t, j)].divrem(&self.s[(t, t)]);
                    self.col_sub(j, t, &q);
                    if !r.is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                // pivot clean; enforce that it divides the trailing block
                if let Some(i) = self.indivisible_row(t) {
                    self.row_add(t, i);
                    continue;
                }
                break;
            }
        }
        // monic pivots
        for t in 0..n {
            if let Some(lc) = self.s[(t, t)].leading() {
                let lc = lc.clone();
                if !lc.is_one() {
                    self.scale_row(t, &lc.recip());
                }
            }
        }
    }

    fn min_degree_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for i in t..self.s.rows() {
            for j in t..self.s.cols() {
                if let Some(d) = self.s[(i, j)].degree() {
                    if best.map_or(true, |(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn indivisible_row(&self, t: usize) -> Option<usize> {
        let p = &self.s[(t, t)];
        for i in t + 1..self.s.rows() {
            for j in t + 1..self.s.cols() {
                if self.s[(i, j)].is_zero() {
                    continue;
                }
                let (_, r) = self.s[(i, j)].divrem(p);
                if !r.is_zero() {
                    return Some(i);
                }
            }
        }
        None
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.s.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.s.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row_i -= q * row_t, on S and U; U^-1 gets the inverse column op.
    fn row_sub(&mut self, i: usize, t: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.s.cols() {
            let d = q * &self.s[(t, j)];
            self.s[(i, j)] = &self.s[(i, j)] - &d;
        }
        for j in 0..self.u.cols() {
            let d = q * &self.u[(t, j)];
            self.u[(i, j)] = &self.u[(i, j)] - &d;
        }
        for r in 0..self.u_inv.rows() {
            let d = q * &self.u_inv[(r, i)];
            self.u_inv[(r, t)] = &self.u_inv[(r, t)] + &d;
        }
    }

    /// col_j -= q * col_t, on S and V; V^-1 gets the inverse row op.
    fn col_sub(&mut self, j: usize, t: usize, q: &Poly) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.s.rows() {
            let d = q * &self.s[(i, t)];
            self.s[(i, j)] = &self.s[(i, j)] - &d;
        }
        for i in 0..self.v.rows() {
            let d = q * &self.v[(i, t)];
            self.v[(i, j)] = &self.v[(i, j)] - &d;
        }
        for c in 0..self.v_inv.cols() {
            let d = q * &self.v_inv[(j, c)];
            self.v_inv[(t, c)] = &self.v_inv[(t, c)] + &d;
        }
    }

    /// row_t += row_i (divisibility fix).
    fn row_add(&mut self, t: usize, i: usize) {
        for j in 0..self.s.cols() {
            self.s[(t, j)] = &self.s[(t, j)] + &self.s[(i, j)];
        }
        for j in 0..self.u.cols() {
            self.u[(t, j)] = &self.u[(t, j)] + &self.u[(i, j)];
        }
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, i)] = &self.u_inv[(r, i)] - &self.u_inv[(r, t)];
        }
    }

    fn scale_row(&mut self, t: usize, c: &Rat) {
        for j in 0..self.s.cols() {
            self.s[(t, j)] = self.s[(t, j)].scale(c);
        }
        for j in 0..self.u.cols() {
            self.u[(t, j)] = self.u[(t, j)].scale(c);
        }
        let inv = c.recip();
        for r in 0..self.u_inv.rows() {
            self.u_inv[(r, t)] = self.u_inv[(r, t)].scale(&inv);
        }
    }
}
