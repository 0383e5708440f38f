//! E-function spec syntax:
//!
//! ```text
//! exp(c)
//! poly(p)*exp(c)
//! cos(c) | sin(c)
//! bessel
//! rec: a[k+r] = q_{r-1}(k)*a[k+r-1] + ... + q_0(k)*a[k]; init: a0, a1, ...
//! ```
//!
//! with `c` a rational constant, `p` a polynomial in `z`, and the `q_j`
//! rational functions of `k`.

use efn_core::error::Error;
use efn_core::rat::Rat;
use efn_core::ratfun::RatFun;
use efn_core::EFunction;

use crate::parse::{parse_poly_at, parse_rat_at, parse_ratfun_at};

fn err(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        col: 1,
        message: message.to_string(),
    }
}

pub fn parse_efunction(text: &str, line: usize) -> Result<EFunction, Error> {
    let t = text.trim();
    if t == "bessel" {
        return Ok(EFunction::bessel());
    }
    if let Some(rest) = t.strip_prefix("rec:") {
        return parse_recurrence(rest, line);
    }
    if let Some(inner) = strip_call(t, "exp") {
        return Ok(EFunction::exp(parse_rat_at(inner, line)?));
    }
    if let Some(inner) = strip_call(t, "cos") {
        return Ok(EFunction::cos(parse_rat_at(inner, line)?));
    }
    if let Some(inner) = strip_call(t, "sin") {
        return Ok(EFunction::sin(parse_rat_at(inner, line)?));
    }
    if let Some(rest) = t.strip_prefix("poly(") {
        // poly(<expr>)*exp(<expr>): find the matching ')' of poly(
        let close = matching_paren(rest)
            .ok_or_else(|| err(line, "unterminated poly(...)"))?;
        let poly_text = &rest[..close];
        let tail = rest[close + 1..].trim();
        let exp_part = tail
            .strip_prefix('*')
            .map(str::trim)
            .ok_or_else(|| err(line, "expected '*exp(c)' after poly(...)"))?;
        let inner = strip_call(exp_part, "exp")
            .ok_or_else(|| err(line, "expected exp(c) after poly(...)*"))?;
        let p = parse_poly_at(poly_text, 'z', line)?;
        let c = parse_rat_at(inner, line)?;
        return Ok(EFunction::exp_poly(p, c));
    }
    Err(err(line, &format!("unrecognized function spec '{t}'")))
}

fn strip_call<'a>(t: &'a str, name: &str) -> Option<&'a str> {
    let rest = t.strip_prefix(name)?.trim_start();
    let inner = rest.strip_prefix('(')?;
    let close = matching_paren(inner)?;
    if !inner[close + 1..].trim().is_empty() {
        return None;
    }
    Some(&inner[..close])
}

/// Index of the ')' closing an already-open parenthesis.
fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 0usize;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                if depth == 0 {
                    return Some(i);
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

/// `a[k+r] = <terms>; init: <constants>`
fn parse_recurrence(rest: &str, line: usize) -> Result<EFunction, Error> {
    let (eq_part, init_part) = rest
        .split_once(';')
        .ok_or_else(|| err(line, "recurrence needs '; init: ...'"))?;
    let init_text = init_part
        .trim()
        .strip_prefix("init:")
        .ok_or_else(|| err(line, "expected 'init:' after ';'"))?;

    let (lhs, rhs) = eq_part
        .split_once('=')
        .ok_or_else(|| err(line, "recurrence needs '='"))?;
    let order = parse_shift(lhs.trim(), line)?;
    if order == 0 {
        return Err(err(line, "recurrence order must be at least 1"));
    }

    let mut coeffs: Vec<RatFun> = vec![RatFun::zero(); order];
    for (sign, addend) in split_addends(rhs) {
        let addend = addend.trim();
        // the coefficient is everything before the final a[...]
        let apos = addend
            .rfind("a[")
            .ok_or_else(|| err(line, &format!("term '{addend}' lacks a[...]")))?;
        let shift = parse_shift(&addend[apos..], line)?;
        if shift >= order {
            return Err(err(line, &format!("term shift a[k+{shift}] exceeds the order")));
        }
        let coef_text = addend[..apos].trim().trim_end_matches('*').trim();
        let mut q = if coef_text.is_empty() {
            RatFun::one()
        } else {
            parse_ratfun_at(coef_text, 'k', line)?
        };
        if sign < 0 {
            q = -&q;
        }
        coeffs[shift] = &coeffs[shift] + &q;
    }

    let init: Vec<Rat> = init_text
        .split(',')
        .map(|s| parse_rat_at(s.trim(), line))
        .collect::<Result<_, _>>()?;
    if init.len() != order {
        return Err(err(
            line,
            &format!("recurrence of order {order} needs {order} initial terms, got {}", init.len()),
        ));
    }
    EFunction::recurrence(coeffs, init)
}

/// "a[k]" -> 0, "a[k+j]" -> j.
fn parse_shift(t: &str, line: usize) -> Result<usize, Error> {
    let inner = t
        .strip_prefix("a[")
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| err(line, &format!("expected a[k+j], got '{t}'")))?;
    let inner = inner.trim();
    if inner == "k" {
        return Ok(0);
    }
    inner
        .strip_prefix("k+")
        .and_then(|s| s.trim().parse::<usize>().ok())
        .ok_or_else(|| err(line, &format!("expected a[k+j], got '{t}'")))
}

/// Split on top-level + and - (outside parentheses and brackets), keeping
/// signs. The leading sign may be omitted.
fn split_addends(s: &str) -> Vec<(i32, String)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    let mut sign = 1;
    for c in s.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                current.push(c);
            }
            ')' | ']' => {
                depth -= 1;
                current.push(c);
            }
            '+' | '-' if depth == 0 => {
                if !current.trim().is_empty() {
                    out.push((sign, current.clone()));
                }
                current.clear();
                sign = if c == '-' { -1 } else { 1 };
            }
            _ => current.push(c),
        }
    }
    if !current.trim().is_empty() {
        out.push((sign, current));
    }
    out
}
