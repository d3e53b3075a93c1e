//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | factor
//! factor := base ("^" (["-"] int | "x"))?
//! base   := rat | "x" | "(" expr ")" | fn "(" expr ")"
//! rat    := int ("/" posint)?        (no whitespace inside)
//! ```
//!
//! A minus sign directly in front of a bare rational literal that is not
//! raised to a power folds into a negative constant.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::{Expr, Func};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub hint: Option<&'static str>,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: expected ", self.offset)?;
        for (i, e) in self.expected.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", e)?;
        }
        if let Some(h) = self.hint {
            write!(f, " ({})", h)?;
        }
        Ok(())
    }
}

impl core::error::Error for SyntaxError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Num(Rat),
    Ident(String),
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    toks: Vec<(Tok, usize)>,
}

const DECIMAL_HINT: &str = "decimal literals are not accepted; write rationals as p/q";

fn digits_end(src: &[u8], mut i: usize) -> usize {
    while i < src.len() && src[i].is_ascii_digit() {
        i += 1;
    }
    i
}

fn big(src: &[u8]) -> BigInt {
    BigInt::parse_bytes(src, 10).unwrap_or_else(BigInt::zero)
}

impl<'a> Lexer<'a> {
    fn run(src: &'a str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
        let mut lx = Lexer {
            src: src.as_bytes(),
            toks: Vec::new(),
        };
        lx.lex()?;
        Ok(lx.toks)
    }

    fn lex(&mut self) -> Result<(), SyntaxError> {
        let s = self.src;
        let mut i = 0;
        while i < s.len() {
            let c = s[i];
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            let tok = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'^' => Tok::Caret,
                b'0'..=b'9' => {
                    let end = digits_end(s, i);
                    if end < s.len() && s[end] == b'.' {
                        return Err(SyntaxError {
                            offset: end,
                            expected: alloc::vec!["rational literal p/q"],
                            hint: Some(DECIMAL_HINT),
                        });
                    }
                    let num = big(&s[i..end]);
                    if end + 1 < s.len() && s[end] == b'/' && s[end + 1].is_ascii_digit() {
                        let dend = digits_end(s, end + 1);
                        let den = big(&s[end + 1..dend]);
                        if den.is_zero() {
                            return Err(SyntaxError {
                                offset: end + 1,
                                expected: alloc::vec!["positive denominator"],
                                hint: None,
                            });
                        }
                        i = dend;
                        self.toks.push((Tok::Num(Rat::new(num, den)), start));
                    } else {
                        i = end;
                        self.toks.push((Tok::Num(Rat::from_integer(num)), start));
                    }
                    continue;
                }
                b'a'..=b'z' | b'A'..=b'Z' => {
                    let mut end = i;
                    while end < s.len() && s[end].is_ascii_alphabetic() {
                        end += 1;
                    }
                    let word = String::from_utf8_lossy(&s[i..end]).into_owned();
                    i = end;
                    self.toks.push((Tok::Ident(word), start));
                    continue;
                }
                b'.' => {
                    return Err(SyntaxError {
                        offset: i,
                        expected: alloc::vec!["rational literal p/q"],
                        hint: Some(DECIMAL_HINT),
                    })
                }
                _ => {
                    return Err(SyntaxError {
                        offset: i,
                        expected: alloc::vec!["number", "x", "function", "(", "operator"],
                        hint: None,
                    })
                }
            };
            self.toks.push((tok, start));
            i += 1;
        }
        self.toks.push((Tok::End, s.len()));
        Ok(())
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: Vec<&'static str>) -> Result<T, SyntaxError> {
        Err(SyntaxError {
            offset: self.offset(),
            expected,
            hint: None,
        })
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            if let Tok::Num(r) = self.peek().clone() {
                if *self.peek_at(1) != Tok::Caret {
                    self.bump();
                    return Ok(Expr::Const(-r));
                }
            }
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        match self.peek().clone() {
            Tok::Num(r) if r.denom() == &BigInt::from(1) => {
                let n = match r.numer().to_i64() {
                    Some(n) => n,
                    None => return self.fail(alloc::vec!["machine-range integer"]),
                };
                self.bump();
                Ok(Expr::PowInt(Box::new(base), if negative { -n } else { n }))
            }
            Tok::Ident(w) if w == "x" && !negative => {
                let b = match base {
                    Expr::Const(b) => b,
                    _ => return self.fail(alloc::vec!["integer"]),
                };
                self.bump();
                Ok(Expr::PowVar(b))
            }
            _ if negative => self.fail(alloc::vec!["integer"]),
            _ => self.fail(alloc::vec!["integer", "x"]),
        }
    }

    fn base(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek().clone() {
            Tok::Num(r) => {
                self.bump();
                Ok(Expr::Const(r))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.close()?;
                Ok(e)
            }
            Tok::Ident(w) => {
                if w == "x" {
                    self.bump();
                    return Ok(Expr::Var);
                }
                let f = match Func::from_name(&w) {
                    Some(f) => f,
                    None => return self.fail(alloc::vec!["x", "sin", "cos", "exp", "ln", "sqrt", "abs"]),
                };
                self.bump();
                if *self.peek() != Tok::LParen {
                    return self.fail(alloc::vec!["("]);
                }
                self.bump();
                let e = self.expr()?;
                self.close()?;
                Ok(Expr::Unary(f, Box::new(e)))
            }
            _ => self.fail(alloc::vec!["number", "x", "function", "("]),
        }
    }

    fn close(&mut self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::RParen {
            self.bump();
            Ok(())
        } else {
            self.fail(alloc::vec![")", "operator"])
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, SyntaxError> {
    let toks = Lexer::run(src)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.fail(alloc::vec!["operator", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};
    use alloc::string::ToString;

    #[test]
    fn grammar_examples() {
        let e = parse("x^2 * sin(1/x)").unwrap();
        // "1/x" is not a literal: the denominator is not a digit
        assert_eq!(e, Expr::x().powi(2).mul(Expr::int(1).div(Expr::x()).sin()));
        assert_eq!(parse("3/2").unwrap(), Expr::c(ratio(3, 2)));
        let err = parse("x^^2").unwrap_err();
        assert_eq!(err.offset, 2);
        assert!(err.expected.contains(&"integer"));
    }

    #[test]
    fn precedence() {
        assert_eq!(parse("-x^2").unwrap(), Expr::x().powi(2).neg());
        assert_eq!(parse("-2^2").unwrap(), Expr::int(2).powi(2).neg());
        assert_eq!(parse("-2").unwrap(), Expr::int(-2));
        assert_eq!(parse("1 - 2 - 3").unwrap(), Expr::int(1).sub(Expr::int(2)).sub(Expr::int(3)));
        assert_eq!(parse("1 + 2 * x").unwrap(), Expr::int(1).add(Expr::int(2).mul(Expr::x())));
        assert_eq!(parse("3 / 2").unwrap(), Expr::int(3).div(Expr::int(2)));
        assert_eq!(parse("x^-2").unwrap(), Expr::x().powi(-2));
        assert_eq!(parse("(1/2)^x").unwrap(), Expr::PowVar(ratio(1, 2)));
        assert_eq!(parse(" abs( x ) / x ").unwrap(), Expr::x().abs().div(Expr::x()));
    }

    #[test]
    fn rejects_malformed_input() {
        let d = parse("0.5 * x").unwrap_err();
        assert_eq!(d.offset, 1);
        assert!(d.hint.is_some());
        assert!(parse("").is_err());
        assert!(parse("sin x").is_err());
        assert!(parse("(x + 1").is_err());
        assert!(parse("x y").is_err());
        assert!(parse("foo(x)").is_err());
        assert!(parse("1/0").is_err());
        assert!(parse("x^x").is_err());
    }

    #[test]
    fn round_trip_fixed_cases() {
        for src in [
            "x^2 * sin(1/x)",
            "-(3) + -3 - (-x)",
            "(1/2)^3 + (1/2)^x - 7/3 / 2",
            "sqrt(abs(x - 1/3)) * exp(-x^-1) / ln(2)",
            "cos(x)^-3 - --x",
        ] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{}", src);
        }
        assert_eq!(parse("2").unwrap().to_string(), int(2).to_string());
    }
}
