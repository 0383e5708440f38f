//! Rational functions num/den, kept normalized: gcd(num, den) = 1, den monic.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::poly::Poly;
use crate::rat::Rat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lc = den.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFun { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// The polynomial when the denominator is 1.
    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn recip(&self) -> RatFun {
        assert!(!self.is_zero(), "reciprocal of the zero function");
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> RatFun {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFun::new(n, &self.den * &self.den)
    }

    /// Exact value; None at a pole.
    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(x) / d)
    }

    /// Order of the pole at x (0 when regular there).
    pub fn pole_order_at(&self, x: &Rat) -> usize {
        self.den.valuation_at(x)
    }

    /// Residue at a simple pole x; None if the pole is not simple or absent.
    pub fn residue_at_simple_pole(&self, x: &Rat) -> Option<Rat> {
        if self.pole_order_at(x) != 1 {
            return None;
        }
        // res = num(x) / den'(x)
        let dprime = self.den.derivative().eval(x);
        Some(self.num.eval(x) / dprime)
    }

    pub fn pow(&self, e: i64) -> RatFun {
        if e < 0 {
            return self.recip().pow(-e);
        }
        let mut result = RatFun::one();
        let mut base = self.clone();
        let mut k = e as u64;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn fmt_with_var(&self, var: char) -> String {
        if self.den.is_one() {
            return self.num.fmt_with_var(var);
        }
        let mut s = String::new();
        s.push_str(&wrap_factor(&self.num, var));
        s.push('/');
        s.push_str(&wrap_factor(&self.den, var));
        s
    }
}

/// Parenthesize unless the polynomial prints as a bare grammar factor
/// (a nonnegative integer, `z`, or `z^k`).
fn wrap_factor(p: &Poly, var: char) -> String {
    let body = p.fmt_with_var(var);
    let bare = match p.degree() {
        None => true, // "0"
        Some(0) => {
            let c = &p.coeffs()[0];
            !c.is_negative() && c.is_integer()
        }
        Some(d) => p.coeff(d).is_one() && (0..d).all(|i| p.coeff(i).is_zero()),
    };
    if bare {
        body
    } else {
        let mut s = String::with_capacity(body.len() + 2);
        s.push('(');
        s.push_str(&body);
        s.push(')');
        s
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_with_var('z'))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        RatFun::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        RatFun::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        assert!(!rhs.is_zero(), "division by the zero function");
        RatFun::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl Zero for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
    }
}

impl One for RatFun {
    fn one() -> Self {
        RatFun::one()
    }
    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }
}
