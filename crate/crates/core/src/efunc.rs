//! Exact E-function coefficient streams: f(z) = sum a_k z^k / k! with the
//! a_k produced by builtin closed forms, P-finite recurrences, or the
//! closure operations (argument scaling, products, polynomial multiples,
//! linear combinations, division by a vanishing linear factor).
//!
//! Streams are pure values; coefficient prefixes are recomputed per call
//! rather than memoized, so sharing across threads needs no locks. The only
//! floating point lives in the growth diagnostics and the certified tail
//! bounds, both explicitly approximate with a conservative reading.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::Error;
use crate::poly::Poly;
use crate::rat::Rat;
use crate::ratfun::RatFun;
use crate::series::TruncSeries;
use crate::Result;

#[derive(Clone, Debug)]
pub struct EFunction {
    name: String,
    kind: Kind,
}

#[derive(Clone, Debug)]
enum Kind {
    /// p(z) * e^{cz}
    ExpPoly { poly: Poly, c: Rat },
    /// cos(cz)
    Cos { c: Rat },
    /// sin(cz)
    Sin { c: Rat },
    /// sum_k (-1)^k binom(2k,k) z^{2k}/(2k)!
    Bessel,
    /// a[k+r] = q_{r-1}(k) a[k+r-1] + ... + q_0(k) a[k]; coeffs[j] = q_j
    Recurrence { coeffs: Vec<RatFun>, init: Vec<Rat> },
    Scale { inner: Arc<EFunction>, factor: Rat },
    Product { left: Arc<EFunction>, right: Arc<EFunction> },
    LinComb { terms: Vec<(Rat, Arc<EFunction>)> },
    MulPoly { poly: Poly, inner: Arc<EFunction> },
    DivLinear { inner: Arc<EFunction>, xi: Rat },
}

/// Diagnostic growth fit: |a_k| <= B C^k and running denominator lcm
/// <= B1 C1^k over the sampled range, plus the height-slope surrogate hmax.
/// Never a proof; the flag reports a super-exponential trend (the fitted C
/// keeps growing with the sample length).
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub b: f64,
    pub c: f64,
    pub b1: f64,
    pub c1: f64,
    pub hmax: f64,
    pub super_exponential: bool,
}

impl EFunction {
    pub fn exp(c: Rat) -> Self {
        EFunction {
            name: format!("exp({c})"),
            kind: Kind::ExpPoly { poly: Poly::one(), c },
        }
    }

    /// p(z) e^{cz}
    pub fn exp_poly(poly: Poly, c: Rat) -> Self {
        EFunction {
            name: format!("({})*exp({c})", poly),
            kind: Kind::ExpPoly { poly, c },
        }
    }

    pub fn cos(c: Rat) -> Self {
        EFunction { name: format!("cos({c})"), kind: Kind::Cos { c } }
    }

    pub fn sin(c: Rat) -> Self {
        EFunction { name: format!("sin({c})"), kind: Kind::Sin { c } }
    }

    pub fn bessel() -> Self {
        EFunction { name: String::from("bessel"), kind: Kind::Bessel }
    }

    /// P-finite stream a[k+r] = sum_j q_j(k) a[k+j] with the q_j rational in
    /// k. Rejected when some q_j denominator vanishes at a nonnegative
    /// integer, since the stream must be total.
    pub fn recurrence(coeffs: Vec<RatFun>, init: Vec<Rat>) -> Result<Self> {
        assert!(!coeffs.is_empty(), "recurrence needs at least order one");
        assert_eq!(coeffs.len(), init.len(), "initial terms must match the order");
        for q in &coeffs {
            let (roots, _) = q.den().rational_roots().expect("denominator nonzero");
            for (root, _) in roots {
                if !root.is_negative() && root.is_integer() {
                    let index = u64::try_from(root.to_integer().unwrap()).unwrap();
                    return Err(Error::RecurrenceDenominatorVanishes { index });
                }
            }
        }
        Ok(EFunction {
            name: format!("rec(order {})", coeffs.len()),
            kind: Kind::Recurrence { coeffs, init },
        })
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = String::from(name);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Exact a_0..a_k.
    pub fn coefficients(&self, k_max: usize) -> Vec<Rat> {
        match &self.kind {
            Kind::ExpPoly { poly, c } => {
                let powers = rat_powers(c, k_max);
                (0..=k_max)
                    .map(|k| {
                        let mut acc = Rat::zero();
                        let mut falling = Rat::one();
                        for (j, pj) in poly.coeffs().iter().enumerate() {
                            if j > k {
                                break;
                            }
                            if j > 0 {
                                falling = &falling * &Rat::from_int((k - j + 1) as i64);
                            }
                            if pj.is_zero() {
                                continue;
                            }
                            let term = &(pj * &falling) * &powers[k - j];
                            acc = &acc + &term;
                        }
                        acc
                    })
                    .collect()
            }
            Kind::Cos { c } => {
                let powers = rat_powers(c, k_max);
                (0..=k_max)
                    .map(|k| {
                        if k % 2 != 0 {
                            return Rat::zero();
                        }
                        let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                        &Rat::from_int(sign) * &powers[k]
                    })
                    .collect()
            }
            Kind::Sin { c } => {
                let powers = rat_powers(c, k_max);
                (0..=k_max)
                    .map(|k| {
                        if k % 2 != 1 {
                            return Rat::zero();
                        }
                        let sign = if (k / 2) % 2 == 0 { 1 } else { -1 };
                        &Rat::from_int(sign) * &powers[k]
                    })
                    .collect()
            }
            Kind::Bessel => (0..=k_max)
                .map(|k| {
                    if k % 2 != 0 {
                        return Rat::zero();
                    }
                    let half = k / 2;
                    let sign = if half % 2 == 0 { 1 } else { -1 };
                    let b = binomial_bigint(k, half);
                    &Rat::from_int(sign) * &Rat::from_bigint(b)
                })
                .collect(),
            Kind::Recurrence { coeffs, init } => {
                let r = coeffs.len();
                let mut a: Vec<Rat> = init.iter().take(k_max + 1).cloned().collect();
                for k in 0..(k_max + 1).saturating_sub(r) {
                    let kk = Rat::from_int(k as i64);
                    let mut next = Rat::zero();
                    for (j, q) in coeffs.iter().enumerate() {
                        if a[k + j].is_zero() {
                            continue;
                        }
                        let qv = q.eval(&kk).expect("total by construction");
                        let term = &qv * &a[k + j];
                        next = &next + &term;
                    }
                    a.push(next);
                }
                a.truncate(k_max + 1);
                a
            }
            Kind::Scale { inner, factor } => {
                let a = inner.coefficients(k_max);
                let powers = rat_powers(factor, k_max);
                a.into_iter().zip(powers).map(|(ak, fk)| &ak * &fk).collect()
            }
            Kind::Product { left, right } => {
                let a = left.coefficients(k_max);
                let b = right.coefficients(k_max);
                let mut out = Vec::with_capacity(k_max + 1);
                // binomial row updated in place
                let mut binom: Vec<BigInt> = vec![BigInt::from(1)];
                for k in 0..=k_max {
                    if k > 0 {
                        binom.push(BigInt::from(1));
                        for j in (1..k).rev() {
                            let s = &binom[j] + &binom[j - 1];
                            binom[j] = s;
                        }
                    }
                    let mut ck = Rat::zero();
                    for j in 0..=k {
                        if a[j].is_zero() || b[k - j].is_zero() {
                            continue;
                        }
                        let t = &(&a[j] * &b[k - j]) * &Rat::from_bigint(binom[j].clone());
                        ck = &ck + &t;
                    }
                    out.push(ck);
                }
                out
            }
            Kind::LinComb { terms } => {
                let mut out = vec![Rat::zero(); k_max + 1];
                for (coef, f) in terms {
                    if coef.is_zero() {
                        continue;
                    }
                    for (k, ak) in f.coefficients(k_max).into_iter().enumerate() {
                        if ak.is_zero() {
                            continue;
                        }
                        let t = coef * &ak;
                        out[k] = &out[k] + &t;
                    }
                }
                out
            }
            Kind::MulPoly { poly, inner } => {
                let a = inner.coefficients(k_max);
                (0..=k_max)
                    .map(|k| {
                        let mut acc = Rat::zero();
                        let mut falling = Rat::one();
                        for (j, pj) in poly.coeffs().iter().enumerate() {
                            if j > k {
                                break;
                            }
                            if j > 0 {
                                falling = &falling * &Rat::from_int((k - j + 1) as i64);
                            }
                            if pj.is_zero() || a[k - j].is_zero() {
                                continue;
                            }
                            let term = &(pj * &falling) * &a[k - j];
                            acc = &acc + &term;
                        }
                        acc
                    })
                    .collect()
            }
            Kind::DivLinear { inner, xi } => {
                if xi.is_zero() {
                    let a = inner.coefficients(k_max + 1);
                    (0..=k_max)
                        .map(|k| &a[k + 1] / &Rat::from_int(k as i64 + 1))
                        .collect()
                } else {
                    // f = (z - xi) g: a_k = k b_{k-1} - xi b_k
                    let a = inner.coefficients(k_max);
                    let mut b: Vec<Rat> = Vec::with_capacity(k_max + 1);
                    b.push(-(&a[0] / xi));
                    for k in 1..=k_max {
                        let t = &(&Rat::from_int(k as i64) * &b[k - 1]) - &a[k];
                        b.push(&t / xi);
                    }
                    b
                }
            }
        }
    }

    /// Taylor coefficients a_k / k! at the origin, as a series.
    pub fn taylor(&self, order: usize) -> TruncSeries {
        let a = self.coefficients(order);
        let mut fact = Rat::one();
        let coeffs: Vec<Rat> = a
            .into_iter()
            .enumerate()
            .map(|(k, ak)| {
                if k > 0 {
                    fact = &fact * &Rat::from_int(k as i64);
                }
                &ak / &fact
            })
            .collect();
        TruncSeries::new(Rat::zero(), coeffs)
    }

    /// g(z) = f(xi z), so b_k = xi^k a_k.
    pub fn scale_argument(&self, xi: &Rat) -> Result<EFunction> {
        if xi.is_zero() {
            return Err(Error::ZeroScale);
        }
        if xi.is_one() {
            return Ok(self.clone());
        }
        Ok(EFunction {
            name: format!("{}@({}z)", self.name, xi),
            kind: Kind::Scale {
                inner: Arc::new(self.clone()),
                factor: xi.clone(),
            },
        })
    }

    /// Binomial convolution c_k = sum_j binom(k,j) a_j b_{k-j}.
    pub fn product(&self, other: &EFunction) -> EFunction {
        EFunction {
            name: format!("({})*({})", self.name, other.name),
            kind: Kind::Product {
                left: Arc::new(self.clone()),
                right: Arc::new(other.clone()),
            },
        }
    }

    /// p(z) * f(z).
    pub fn mul_poly(&self, p: &Poly) -> EFunction {
        EFunction {
            name: format!("({})*({})", p, self.name),
            kind: Kind::MulPoly {
                poly: p.clone(),
                inner: Arc::new(self.clone()),
            },
        }
    }

    /// sum coef_i * f_i.
    pub fn lin_comb(terms: &[(Rat, EFunction)]) -> EFunction {
        let kept: Vec<(Rat, Arc<EFunction>)> = terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, f)| (c.clone(), Arc::new(f.clone())))
            .collect();
        let name = if kept.is_empty() {
            String::from("0")
        } else {
            let mut s = String::new();
            for (i, (c, f)) in kept.iter().enumerate() {
                if i > 0 {
                    s.push('+');
                }
                let _ = core::fmt::write(&mut s, format_args!("({})*({})", c, f.name));
            }
            s
        };
        EFunction { name, kind: Kind::LinComb { terms: kept } }
    }

    /// Exact partial sum sum_{k<=K} a_k xi^k / k! together with the
    /// certified tail bound B (C|xi|)^{K+1}/(K+1)! e^{C|xi|} from the fitted
    /// growth parameters.
    pub fn eval_partial_with_tail(&self, xi: &Rat, k_check: usize) -> (Rat, f64) {
        let a = self.coefficients(k_check);
        let mut partial = Rat::zero();
        let mut fact = Rat::one();
        let mut pow = Rat::one();
        for (k, ak) in a.iter().enumerate() {
            if k > 0 {
                fact = &fact * &Rat::from_int(k as i64);
                pow = &pow * xi;
            }
            if ak.is_zero() {
                continue;
            }
            let term = &(ak * &pow) / &fact;
            partial = &partial + &term;
        }
        let (log_b, log_c) = fit_growth(&a);
        let cxi = libm::exp(log_c) * libm::exp(xi.abs().log_abs());
        let log_tail = log_b + (k_check as f64 + 1.0) * libm::log(cxi.max(1e-300))
            - libm::lgamma(k_check as f64 + 2.0)
            + cxi;
        (partial, libm::exp(log_tail))
    }

    /// Is the partial sum provably nonzero at xi, i.e. strictly above the
    /// certified tail bound?
    pub fn certified_nonzero_at(&self, xi: &Rat, k_check: usize) -> bool {
        let (partial, tail) = self.eval_partial_with_tail(xi, k_check);
        if partial.is_zero() {
            return false;
        }
        partial.log_abs() > libm::log(tail) + 1e-9
    }

    /// g = f / (z - xi), accepted only when the certified partial sum of
    /// f(xi) sits below the rigorous tail bound (exact zero test for
    /// xi = 0). The returned stream satisfies f = (z - xi) g identically.
    pub fn divide_by_linear(&self, xi: &Rat, k_check: usize) -> Result<EFunction> {
        if xi.is_zero() {
            let a0 = self.coefficients(0).pop().unwrap();
            if !a0.is_zero() {
                return Err(Error::NotNumericallyZero);
            }
        } else {
            let (partial, tail) = self.eval_partial_with_tail(xi, k_check);
            if !partial.is_zero() && partial.log_abs() > libm::log(tail) {
                return Err(Error::NotNumericallyZero);
            }
        }
        Ok(EFunction {
            name: format!("({})/(z-{})", self.name, xi),
            kind: Kind::DivLinear {
                inner: Arc::new(self.clone()),
                xi: xi.clone(),
            },
        })
    }

    /// Growth diagnostics over a_0..a_K; requires K >= 10.
    pub fn growth_report(&self, k_max: usize) -> GrowthReport {
        assert!(k_max >= 10, "growth fit needs at least 10 coefficients");
        let a = self.coefficients(k_max);
        let (log_b, log_c) = fit_growth(&a);
        let (_, log_c_half) = fit_growth(&a[..=k_max / 2]);

        // running denominator lcm and height slope
        let mut lcm = BigInt::from(1);
        let mut log_l: Vec<f64> = Vec::with_capacity(k_max + 1);
        let mut max_log_abs = f64::NEG_INFINITY;
        let mut hmax: f64 = 0.0;
        for (k, ak) in a.iter().enumerate() {
            lcm = lcm.lcm(ak.denom());
            let ll = crate::rat::log_abs_bigint(&lcm);
            log_l.push(ll);
            if !ak.is_zero() {
                max_log_abs = max_log_abs.max(ak.log_abs());
            }
            if k >= 1 {
                let height = ll + max_log_abs.max(0.0);
                hmax = hmax.max(height / k as f64);
            }
        }
        let (log_b1, log_c1) = fit_points(
            &log_l
                .iter()
                .enumerate()
                .map(|(k, &v)| (k as f64, v))
                .collect::<Vec<_>>(),
        );

        let c_full = libm::exp(log_c);
        let c_half = libm::exp(log_c_half);
        GrowthReport {
            b: libm::exp(log_b),
            c: c_full,
            b1: libm::exp(log_b1.max(0.0)),
            c1: libm::exp(log_c1.max(0.0)),
            hmax,
            super_exponential: c_full > 1.1 * c_half + 1e-9,
        }
    }
}

fn rat_powers(c: &Rat, k_max: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(Rat::one());
    for _ in 0..k_max {
        out.push(out.last().unwrap() * c);
    }
    out
}

fn binomial_bigint(n: usize, k: usize) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// (log B, log C) with |a_k| <= B C^k guaranteed on the sample: C from the
/// least-squares slope of log|a_k|, B lifted to cover every point.
fn fit_growth(a: &[Rat]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = a
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k as f64, v.log_abs()))
        .collect();
    if pts.is_empty() {
        return (f64::NEG_INFINITY, 0.0);
    }
    let (_, slope) = fit_points(&pts);
    let log_c = slope;
    let mut log_b = f64::NEG_INFINITY;
    for (k, y) in &pts {
        log_b = log_b.max(y - k * log_c);
    }
    // headroom for the floating-point reading of exact data
    (log_b.max(0.0) + 1e-9, log_c)
}

/// Least-squares (intercept, slope) through the points.
fn fit_points(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return (pts.first().map(|p| p.1).unwrap_or(0.0), 0.0);
    }
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in pts {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    (mean_y - slope * mean_x, slope)
}
