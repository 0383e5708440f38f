//! Recursive-descent parser for the expression language:
//!
//! ```text
//! expr    := ['-'] term (('+'|'-') term)*
//! term    := factor (('*'|'/') factor)*
//! factor  := base ('^' uint)?
//! base    := rational-literal | var | '(' expr ')'
//! ```
//!
//! A rational literal is a single lexical token (digits, optionally
//! '/' digits with no space), so `3/2^2` is `(3/2)^2`. The variable letter
//! is configurable: `z` for function expressions, `k` for recurrence
//! coefficients.

use efn_core::error::Error;
use efn_core::poly::Poly;
use efn_core::rat::Rat;
use efn_core::ratfun::RatFun;
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Lit(Rat),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, message: &str) -> Error {
    Error::Parse {
        line,
        col,
        message: message.to_string(),
    }
}

fn lex(text: &str, var: char, line: usize) -> Result<Vec<Spanned>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let col = i + 1;
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ if c == var => Tok::Var,
            _ if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let num: BigInt = chars[start..i].iter().collect::<String>().parse().unwrap();
                // maximal-munch rational literal: '/' immediately followed
                // by digits
                if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                    i += 1;
                    let dstart = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let den: BigInt = chars[dstart..i].iter().collect::<String>().parse().unwrap();
                    if den == BigInt::from(0) {
                        return Err(err(line, col, "zero denominator in rational literal"));
                    }
                    out.push(Spanned { tok: Tok::Lit(Rat::new(num, den)), line, col });
                } else {
                    out.push(Spanned { tok: Tok::Lit(Rat::from_bigint(num)), line, col });
                }
                continue;
            }
            _ => return Err(err(line, col, &format!("unexpected character '{c}'"))),
        };
        out.push(Spanned { tok, line, col });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        match self.toks.get(self.pos) {
            Some(s) => (s.line, s.col),
            None => (self.line, self.end_col),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), Error> {
        let (l, c) = self.here();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(err(l, c, &format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<RatFun, Error> {
        let negate = matches!(self.peek(), Some(Tok::Minus));
        if negate {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc + &t;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = &acc - &t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun, Error> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Slash) => {
                    let (l, c) = self.here();
                    self.bump();
                    let f = self.factor()?;
                    if f.is_zero() {
                        return Err(err(l, c, "division by the zero polynomial"));
                    }
                    acc = &acc / &f;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun, Error> {
        let base = self.base()?;
        if matches!(self.peek(), Some(Tok::Caret)) {
            let (l, c) = self.here();
            self.bump();
            match self.bump() {
                Some(Tok::Lit(e)) if e.is_integer() && !e.is_negative() => {
                    let exp = e
                        .to_integer()
                        .and_then(|b| u32::try_from(b).ok())
                        .ok_or_else(|| err(l, c, "exponent too large"))?;
                    let mut acc = RatFun::one();
                    for _ in 0..exp {
                        acc = &acc * &base;
                    }
                    Ok(acc)
                }
                _ => Err(err(l, c, "expected a nonnegative integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<RatFun, Error> {
        let (l, c) = self.here();
        match self.bump() {
            Some(Tok::Lit(r)) => Ok(RatFun::constant(r)),
            Some(Tok::Var) => Ok(RatFun::from_poly(Poly::var())),
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(err(l, c, "expected a literal, the variable, or '('")),
        }
    }
}

/// Parse an expression over the given variable letter, reporting positions
/// with the given line number.
pub fn parse_ratfun_at(text: &str, var: char, line: usize) -> Result<RatFun, Error> {
    let toks = lex(text, var, line)?;
    let end_col = text.chars().count() + 1;
    let mut p = Parser { toks, pos: 0, line, end_col };
    let value = p.expr()?;
    if p.pos != p.toks.len() {
        let (l, c) = p.here();
        return Err(err(l, c, "trailing input after expression"));
    }
    Ok(value)
}

/// Expression over `z` (line numbers start at 1).
pub fn parse_ratfun(text: &str) -> Result<RatFun, Error> {
    parse_ratfun_at(text, 'z', 1)
}

/// Expression that must reduce to a polynomial.
pub fn parse_poly_at(text: &str, var: char, line: usize) -> Result<Poly, Error> {
    let f = parse_ratfun_at(text, var, line)?;
    match f.as_poly() {
        Some(p) => Ok(p.clone()),
        None => Err(err(line, 1, "expected a polynomial (denominator must be 1)")),
    }
}

/// Expression that must reduce to a rational constant.
pub fn parse_rat_at(text: &str, line: usize) -> Result<Rat, Error> {
    let f = parse_ratfun_at(text, 'z', line)?;
    match f.as_poly().filter(|p| p.is_constant()) {
        Some(p) => Ok(p.coeff(0)),
        None => Err(err(line, 1, "expected a rational constant")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_reference_expressions() {
        // "(z^2-1)/(z*(z+2))" -> num z^2 - 1, den z^2 + 2z
        let f = parse_ratfun("(z^2-1)/(z*(z+2))").unwrap();
        assert_eq!(f.num(), &Poly::from_ints(&[-1, 0, 1]));
        assert_eq!(f.den(), &Poly::from_ints(&[0, 2, 1]));

        // "1/2 + 1/2" -> 1
        let g = parse_ratfun("1/2 + 1/2").unwrap();
        assert!(g.is_one());

        // "z/(z-1) - 1" -> 1/(z-1)
        let h = parse_ratfun("z/(z-1) - 1").unwrap();
        assert_eq!(h, RatFun::new(Poly::one(), Poly::from_ints(&[-1, 1])));
    }

    #[test]
    fn literal_binds_caret_tightest() {
        let f = parse_ratfun("3/2^2").unwrap();
        assert_eq!(f, RatFun::constant(Rat::from_frac(9, 4)));
        let g = parse_ratfun("3/(2^2)").unwrap();
        assert_eq!(g, RatFun::constant(Rat::from_frac(3, 4)));
    }

    #[test]
    fn left_associative_operators() {
        let f = parse_ratfun("8/2/2").unwrap();
        // lexer munches "2/2"? no: '/' between two literal tokens is
        // division; "8/2" munches to a literal, then "/2"
        assert_eq!(f, RatFun::constant(Rat::from_int(2)));
        let g = parse_ratfun("1-2-3").unwrap();
        assert_eq!(g, RatFun::constant(Rat::from_int(-4)));
    }

    #[test]
    fn unary_minus_at_expression_head() {
        let f = parse_ratfun("-z+3").unwrap();
        assert_eq!(f.num(), &Poly::from_ints(&[3, -1]));
        let g = parse_ratfun("(-3)").unwrap();
        assert_eq!(g, RatFun::constant(Rat::from_int(-3)));
    }

    #[test]
    fn error_positions() {
        let e = parse_ratfun("z + + 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 5, .. }), "{e:?}");
        let e = parse_ratfun("z @ 1").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, col: 3, .. }), "{e:?}");
        let e = parse_ratfun("(z").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }), "{e:?}");
    }

    #[test]
    fn division_by_zero_polynomial() {
        let e = parse_ratfun("1/(z-z)").unwrap_err();
        match e {
            Error::Parse { message, .. } => {
                assert!(message.contains("division by the zero polynomial"))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for text in [
            "z^3-2*z+1/2",
            "(z^2-1)/(z^2+2*z)",
            "1/(z-1)",
            "-z+3",
            "(3/2*z+1)/(z^2+1)",
        ] {
            let f = parse_ratfun(text).unwrap();
            let printed = f.fmt_with_var('z');
            let reparsed = parse_ratfun(&printed).unwrap();
            assert_eq!(f, reparsed, "round trip failed for {text} -> {printed}");
        }
    }

    #[test]
    fn variable_letter_is_configurable() {
        let f = parse_ratfun_at("(k+1)/(k+2)", 'k', 3).unwrap();
        assert_eq!(f.num(), &Poly::from_ints(&[1, 1]));
        let e = parse_ratfun_at("z", 'k', 3).unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }
}
