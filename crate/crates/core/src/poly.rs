//! Dense univariate polynomials over the exact rationals, lowest degree
//! first. The zero polynomial is the empty coefficient sequence.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::fmt::Write as _;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rat::Rat;
use crate::Result;

mod intfactor;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    /// coeffs[i] multiplies z^i; empty means zero; the last entry is nonzero.
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    /// The variable itself.
    pub fn var() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// z - root.
    pub fn linear_root(root: &Rat) -> Self {
        Poly::new(vec![-root, Rat::one()])
    }

    /// c * z^k.
    pub fn monomial(c: Rat, k: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k + 1];
        coeffs[k] = c;
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| &Rat::from_int(i as i64) * c)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Quotient and remainder; panics on zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.leading().unwrap().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() < dd + 1 {
            return (Poly::zero(), self.clone());
        }
        let qn = rem.len() - dd;
        let mut q = vec![Rat::zero(); qn];
        for k in (0..qn).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k + i] = &rem[k + i] - &t;
            }
            q[k] = c;
        }
        (Poly::new(q), Poly::new(rem))
    }

    /// Exact quotient; panics if the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "exact_div with nonzero remainder");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(other);
        (self * other).exact_div(&g).monic()
    }

    /// Positive rational c with self = c * (primitive integer polynomial
    /// whose leading coefficient is positive). Zero polynomial yields zero.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in &self.coeffs {
            let cleared = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&cleared);
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        if self.leading().unwrap().is_negative() {
            content = -content;
        }
        content
    }

    /// self / content: integer coefficients with gcd 1, positive leading
    /// coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.content().recip())
    }

    /// Coefficients of p(c + t) as a polynomial in t.
    pub fn taylor_at(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return self.clone();
        }
        // synthetic division by (z - c), repeatedly
        let mut work = self.coeffs.clone();
        let n = work.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &work[j + 1] * c;
                work[j] = &work[j] + &t;
            }
        }
        Poly::new(work)
    }

    /// Multiplicity of `root`.
    pub fn valuation_at(&self, root: &Rat) -> usize {
        if self.is_zero() {
            return 0;
        }
        let lin = Poly::linear_root(root);
        let mut p = self.clone();
        let mut v = 0;
        loop {
            let (q, r) = p.divrem(&lin);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            p = q;
            if p.is_zero() {
                return v;
            }
        }
    }

    /// Yun squarefree decomposition: returns (g_i, i) with
    /// self = content * prod g_i^i, each g_i monic squarefree, pairwise
    /// coprime, possibly 1 (omitted).
    pub fn squarefree_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.exact_div(&a);
        let mut c = df.exact_div(&a);
        let mut i = 1;
        loop {
            let d = &c - &b.derivative();
            a = b.gcd(&d);
            if !a.is_one() {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a);
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a);
            i += 1;
        }
        out
    }

    /// All rational roots with multiplicities, plus the rational-root-free
    /// residual factor, so that self = lc * prod (z - r)^m * residual/lc(...)
    /// up to a nonzero constant. Roots are sorted ascending.
    pub fn rational_roots(&self) -> Result<(Vec<(Rat, usize)>, Poly)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut roots: Vec<(Rat, usize)> = Vec::new();
        let mut residual = self.monic();

        // valuation at zero first, cheap and keeps the divisor sets small
        let v0 = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if v0 > 0 {
            roots.push((Rat::zero(), v0));
            residual = Poly::new(residual.coeffs[v0..].to_vec());
        }
        if residual.is_constant() {
            return Ok((roots, residual));
        }

        let prim = residual.primitive();
        let c0 = prim.coeffs[0].to_integer().expect("primitive is integral");
        let cn = prim.leading().unwrap().to_integer().expect("primitive is integral");
        let num_divs = intfactor::divisors(&c0.abs());
        let den_divs = intfactor::divisors(&cn.abs());

        let mut candidates: Vec<Rat> = Vec::new();
        for p in &num_divs {
            for q in &den_divs {
                if p.gcd(q).is_one() {
                    candidates.push(Rat::new(p.clone(), q.clone()));
                    candidates.push(Rat::new(-p, q.clone()));
                }
            }
        }
        candidates.sort();
        candidates.dedup();

        for cand in candidates {
            if residual.is_constant() {
                break;
            }
            if !residual.eval(&cand).is_zero() {
                continue;
            }
            let mult = residual.valuation_at(&cand);
            residual = residual.exact_div(&Poly::linear_root(&cand).pow(mult));
            roots.push((cand, mult));
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        Ok((roots, residual))
    }

    /// Rendering with a caller-chosen variable letter; the output reparses
    /// under the CLI expression grammar.
    pub fn fmt_with_var(&self, var: char) -> String {
        let mut s = String::new();
        if self.is_zero() {
            return String::from("0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    s.push('-');
                }
                first = false;
            } else {
                s.push(if neg { '-' } else { '+' });
            }
            let a = c.abs();
            if d == 0 {
                let _ = write!(s, "{a}");
            } else {
                if !a.is_one() {
                    let _ = write!(s, "{a}*");
                }
                s.push(var);
                if d > 1 {
                    let _ = write!(s, "^{d}");
                }
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with_var('z'))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &rhs.coeff(i));
        }
        Poly::new(out)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                out[i + j] = &out[i + j] + &t;
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one()
    }
    fn is_one(&self) -> bool {
        Poly::is_one(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn z() -> Poly {
        Poly::var()
    }

    #[test]
    fn divrem_roundtrip() {
        let a = Poly::from_ints(&[1, 0, -3, 2, 5]);
        let b = Poly::from_ints(&[2, 1, 1]);
        let (q, r) = a.divrem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < b.degree().unwrap());
    }

    #[test]
    fn gcd_of_common_factor() {
        let f = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[2, 3, 1]);
        let g = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[5, 1]);
        assert_eq!(f.gcd(&g), Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn content_and_primitive() {
        let p = Poly::new(vec![Rat::from_frac(2, 3), Rat::from_frac(-4, 9)]);
        let c = p.content();
        assert_eq!(c, Rat::from_frac(-2, 9));
        let prim = p.primitive();
        assert_eq!(prim, Poly::from_ints(&[-3, 2]));
        assert_eq!(prim.scale(&c), p);
    }

    #[test]
    fn taylor_shift() {
        // p(z) = z^2 at c = 1: (1+t)^2 = 1 + 2t + t^2
        let p = Poly::monomial(Rat::one(), 2);
        assert_eq!(p.taylor_at(&Rat::one()), Poly::from_ints(&[1, 2, 1]));
    }

    // z^3 - z -> roots {0, 1, -1}, residual constant
    #[test]
    fn rational_roots_inspection_case() {
        let p = Poly::from_ints(&[0, -1, 0, 1]);
        let (roots, residual) = p.rational_roots().unwrap();
        assert_eq!(
            roots,
            vec![
                (Rat::from_int(-1), 1),
                (Rat::from_int(0), 1),
                (Rat::from_int(1), 1)
            ]
        );
        assert!(residual.is_constant());
    }

    // z^2 + 1 -> no rational roots
    #[test]
    fn rational_roots_none() {
        let p = Poly::from_ints(&[1, 0, 1]);
        let (roots, residual) = p.rational_roots().unwrap();
        assert!(roots.is_empty());
        assert_eq!(residual, p);
    }

    // independent oracle: brute-force root search over small fractions
    fn brute_force_roots(p: &Poly, bound: i64) -> Vec<Rat> {
        let mut out = Vec::new();
        for num in -bound..=bound {
            for den in 1..=bound {
                let cand = Rat::from_frac(num, den);
                if p.eval(&cand).is_zero() && !out.contains(&cand) {
                    out.push(cand);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn rational_roots_matches_brute_force_oracle() {
        // (z-3)^2 (z^2-2), expanded
        let p = &Poly::from_ints(&[9, -6, 1]) * &Poly::from_ints(&[-2, 0, 1]);
        let (roots, residual) = p.rational_roots().unwrap();
        let expected = brute_force_roots(&p, 12);
        let found: Vec<Rat> = roots.iter().map(|(r, _)| r.clone()).collect();
        assert_eq!(found, expected);
        assert_eq!(roots, vec![(Rat::from_int(3), 2)]);
        assert_eq!(residual.primitive(), Poly::from_ints(&[-2, 0, 1]));
    }

    #[test]
    fn rational_roots_zero_poly_rejected() {
        assert_eq!(Poly::zero().rational_roots(), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn squarefree_decomposition_recombines() {
        let p = &(&Poly::from_ints(&[-1, 1]).pow(3) * &Poly::from_ints(&[2, 1]).pow(2))
            * &Poly::from_ints(&[1, 1, 1]);
        let parts = p.squarefree_decomposition();
        let mut rebuilt = Poly::one();
        for (g, m) in &parts {
            rebuilt = &rebuilt * &g.pow(*m);
        }
        assert_eq!(rebuilt, p.monic());
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn display_reference_forms() {
        assert_eq!(Poly::from_ints(&[-1, 1]).to_string(), "z-1");
        assert_eq!(Poly::from_ints(&[1, 0, 2]).to_string(), "2*z^2+1");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(
            Poly::new(vec![Rat::from_frac(1, 2), Rat::from_int(-1)]).to_string(),
            "-z+1/2"
        );
    }

    #[test]
    fn valuation_counts_multiplicity() {
        let p = &Poly::from_ints(&[-1, 1]).pow(3) * &Poly::from_ints(&[1, 1]);
        assert_eq!(p.valuation_at(&Rat::one()), 3);
        assert_eq!(p.valuation_at(&Rat::from_int(-1)), 1);
        assert_eq!(p.valuation_at(&Rat::from_int(2)), 0);
    }

    #[test]
    fn eval_horner() {
        let p = &(&z() * &z()) + &Poly::one();
        assert_eq!(p.eval(&Rat::from_frac(1, 2)), Rat::from_frac(5, 4));
    }
}
