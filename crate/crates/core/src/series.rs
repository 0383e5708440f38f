//! Truncated exact power series at a rational expansion point. No floating
//! point anywhere; the guaranteed-correct order is explicit and shrinks under
//! valuation-shifted division.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::ratfun::RatFun;
use crate::Result;

/// Coefficients of (z-center)^0 .. (z-center)^order, all exact.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    center: Rat,
    coeffs: Vec<Rat>,
}

impl TruncSeries {
    pub fn new(center: Rat, mut coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "series needs at least the constant term");
        coeffs.shrink_to_fit();
        TruncSeries { center, coeffs }
    }

    pub fn zero(center: Rat, order: usize) -> Self {
        TruncSeries {
            center,
            coeffs: vec![Rat::zero(); order + 1],
        }
    }

    pub fn one(center: Rat, order: usize) -> Self {
        let mut s = Self::zero(center, order);
        s.coeffs[0] = Rat::one();
        s
    }

    pub fn constant(center: Rat, value: Rat, order: usize) -> Self {
        let mut s = Self::zero(center, order);
        s.coeffs[0] = value;
        s
    }

    pub fn center(&self) -> &Rat {
        &self.center
    }

    /// Guaranteed-correct truncation order K; coefficients 0..=K are exact.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }

    /// Smallest index with nonzero coefficient; None if zero to order.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn value_at_center(&self) -> Rat {
        self.coeffs[0].clone()
    }

    /// Truncate (or keep) to the given order.
    pub fn truncated(&self, order: usize) -> TruncSeries {
        let take = (order + 1).min(self.coeffs.len());
        TruncSeries {
            center: self.center.clone(),
            coeffs: self.coeffs[..take].to_vec(),
        }
    }

    fn check_center(&self, other: &TruncSeries) {
        assert_eq!(
            self.center, other.center,
            "series arithmetic across different centers"
        );
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        self.check_center(other);
        let n = self.coeffs.len().min(other.coeffs.len());
        TruncSeries {
            center: self.center.clone(),
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.check_center(other);
        let n = self.coeffs.len().min(other.coeffs.len());
        TruncSeries {
            center: self.center.clone(),
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries {
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> TruncSeries {
        TruncSeries {
            center: self.center.clone(),
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        self.check_center(other);
        let n = self.coeffs.len().min(other.coeffs.len());
        let mut out = vec![Rat::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                out[i + j] = &out[i + j] + &t;
            }
        }
        TruncSeries {
            center: self.center.clone(),
            coeffs: out,
        }
    }

    /// Valuation-aware division. Divisor with a unit constant term keeps the
    /// common order; otherwise both operands are shifted down by the divisor
    /// valuation v (requires val(self) >= v) and the result order shrinks
    /// by v.
    pub fn div(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_center(other);
        let Some(v) = other.valuation() else {
            return Err(Error::IndeterminateDivision);
        };
        if v == 0 {
            return Ok(self.div_unit(other));
        }
        match self.valuation() {
            None => {
                // zero numerator: quotient is zero to the shifted order
                let n = self.coeffs.len().min(other.coeffs.len());
                if v > n - 1 {
                    return Err(Error::IndeterminateDivision);
                }
                Ok(TruncSeries::zero(self.center.clone(), n - 1 - v))
            }
            Some(va) if va >= v => {
                let a = self.shift_down(v);
                let b = other.shift_down(v);
                Ok(a.div_unit(&b))
            }
            Some(_) => Err(Error::QuotientHasPole),
        }
    }

    fn shift_down(&self, v: usize) -> TruncSeries {
        TruncSeries {
            center: self.center.clone(),
            coeffs: self.coeffs[v..].to_vec(),
        }
    }

    /// Multiply by (z-center)^v, extending the order by v.
    pub fn shift_up(&self, v: usize) -> TruncSeries {
        let mut coeffs = vec![Rat::zero(); v];
        coeffs.extend_from_slice(&self.coeffs);
        TruncSeries {
            center: self.center.clone(),
            coeffs,
        }
    }

    fn div_unit(&self, other: &TruncSeries) -> TruncSeries {
        debug_assert!(!other.coeffs[0].is_zero());
        let n = self.coeffs.len().min(other.coeffs.len());
        let inv0 = other.coeffs[0].recip();
        let mut out: Vec<Rat> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = self.coeffs[i].clone();
            for j in 1..=i {
                if other.coeffs[j].is_zero() || out[i - j].is_zero() {
                    continue;
                }
                let t = &other.coeffs[j] * &out[i - j];
                acc = &acc - &t;
            }
            out.push(&acc * &inv0);
        }
        TruncSeries {
            center: self.center.clone(),
            coeffs: out,
        }
    }

    /// Term-by-term derivative; order drops by one.
    pub fn derivative(&self) -> TruncSeries {
        if self.coeffs.len() == 1 {
            return TruncSeries::zero(self.center.clone(), 0);
        }
        TruncSeries {
            center: self.center.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| &Rat::from_int(i as i64) * c)
                .collect(),
        }
    }

    /// Do the first `order+1` coefficients agree?
    pub fn agrees_to(&self, other: &TruncSeries, order: usize) -> bool {
        if self.center != other.center {
            return false;
        }
        assert!(
            self.order() >= order && other.order() >= order,
            "comparison beyond guaranteed order"
        );
        (0..=order).all(|i| self.coeffs[i] == other.coeffs[i])
    }

    pub fn is_zero_to(&self, order: usize) -> bool {
        assert!(self.order() >= order, "check beyond guaranteed order");
        self.coeffs[..=order].iter().all(Rat::is_zero)
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}; center {})[", self.order(), self.center)?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Taylor expansion of a polynomial, exact to order K (identically, in fact,
/// beyond its degree).
pub fn expand_poly(p: &Poly, center: &Rat, order: usize) -> TruncSeries {
    let shifted = p.taylor_at(center);
    let mut coeffs: Vec<Rat> = shifted.coeffs().to_vec();
    coeffs.resize(order + 1, Rat::zero());
    coeffs.truncate(order + 1);
    TruncSeries::new(center.clone(), coeffs)
}

/// Taylor expansion of a rational function at an ordinary point of its
/// denominator.
pub fn expand_ratfun(f: &RatFun, center: &Rat, order: usize) -> Result<TruncSeries> {
    if f.den().eval(center).is_zero() {
        return Err(Error::PoleAtExpansionPoint);
    }
    let num = expand_poly(f.num(), center, order);
    let den = expand_poly(f.den(), center, order);
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn s(center: i64, coeffs: &[(i64, i64)]) -> TruncSeries {
        TruncSeries::new(
            Rat::from_int(center),
            coeffs.iter().map(|&(n, d)| Rat::from_frac(n, d)).collect(),
        )
    }

    // (1 + z + z^2/2) * (1 - z + z^2/2) = 1 + 0z + 0z^2 to order 2
    // oracle: Cauchy product by hand: c0=1, c1=-1+1=0, c2=1/2-1+1/2=0
    #[test]
    fn cauchy_product_by_hand() {
        let a = s(0, &[(1, 1), (1, 1), (1, 2)]);
        let b = s(0, &[(1, 1), (-1, 1), (1, 2)]);
        let p = a.mul(&b);
        assert_eq!(p.coeffs(), &[Rat::one(), Rat::zero(), Rat::zero()]);
    }

    #[test]
    fn self_division_is_one() {
        let a = s(0, &[(2, 1), (3, 1), (5, 7), (-1, 2)]);
        let q = a.div(&a).unwrap();
        assert!(q.agrees_to(&TruncSeries::one(Rat::zero(), 3), 3));
    }

    // center 1: ((z-1) + (z-1)^2) / (z-1) = 1 + (z-1)
    #[test]
    fn valuation_shift_division() {
        let a = s(1, &[(0, 1), (1, 1), (1, 1)]);
        let b = s(1, &[(0, 1), (1, 1), (0, 1)]);
        let q = a.div(&b).unwrap();
        assert_eq!(q.order(), 1);
        assert_eq!(q.coeffs(), &[Rat::one(), Rat::one()]);
    }

    #[test]
    fn division_by_zero_series_rejected() {
        let a = s(0, &[(1, 1), (1, 1)]);
        let z = TruncSeries::zero(Rat::zero(), 1);
        assert_eq!(a.div(&z), Err(Error::IndeterminateDivision));
    }

    #[test]
    fn division_with_pole_rejected() {
        let a = s(0, &[(1, 1), (1, 1)]);
        let b = s(0, &[(0, 1), (1, 1)]);
        assert_eq!(a.div(&b), Err(Error::QuotientHasPole));
    }

    #[test]
    fn geometric_series() {
        // 1/(1-z) at 0, K=3 -> 1 + z + z^2 + z^3
        let f = RatFun::new(Poly::one(), Poly::from_ints(&[1, -1]));
        let e = expand_ratfun(&f, &Rat::zero(), 3).unwrap();
        assert_eq!(e.coeffs(), &[Rat::one(), Rat::one(), Rat::one(), Rat::one()]);
    }

    #[test]
    fn expand_identity_at_one() {
        // z at 1, K=2 -> 1 + (z-1)
        let f = RatFun::from_poly(Poly::var());
        let e = expand_ratfun(&f, &Rat::one(), 2).unwrap();
        assert_eq!(e.coeffs(), &[Rat::one(), Rat::one(), Rat::zero()]);
    }

    // z/(z-1) at 2, K=2 -> 2 - (z-2) + (z-2)^2, oracle by long division in t:
    // (2+t)/(1+t) = 2 - t + t^2 - ...
    #[test]
    fn expand_shifted_long_division() {
        let f = RatFun::new(Poly::var(), Poly::from_ints(&[-1, 1]));
        let e = expand_ratfun(&f, &Rat::from_int(2), 2).unwrap();
        assert_eq!(
            e.coeffs(),
            &[Rat::from_int(2), Rat::from_int(-1), Rat::one()]
        );
    }

    #[test]
    fn pole_at_center_rejected() {
        let f = RatFun::new(Poly::one(), Poly::from_ints(&[-1, 1]));
        assert_eq!(
            expand_ratfun(&f, &Rat::one(), 3),
            Err(Error::PoleAtExpansionPoint)
        );
    }

    #[test]
    fn division_postcondition() {
        let a = s(0, &[(3, 1), (1, 4), (0, 1), (2, 1), (5, 1)]);
        let b = s(0, &[(2, 1), (-1, 1), (1, 3), (0, 1), (1, 1)]);
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert!(back.sub(&a).is_zero_to(q.order()));
    }

    #[test]
    fn mul_truncates_to_min_order() {
        let a = s(0, &[(1, 1), (1, 1), (1, 1), (1, 1)]);
        let b = s(0, &[(1, 1), (1, 1)]);
        assert_eq!(a.mul(&b).order(), 1);
        assert_eq!(a.add(&b).order(), 1);
    }

    #[test]
    #[should_panic(expected = "different centers")]
    fn center_mismatch_panics() {
        let a = s(0, &[(1, 1)]);
        let b = s(1, &[(1, 1)]);
        let _ = a.add(&b);
    }
}
