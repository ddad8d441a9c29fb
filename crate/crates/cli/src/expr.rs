//! A small expression grammar for algebra elements: sums of
//! coefficient·monomial terms over base variables `x1..xp` and declared
//! generators, with derivative decorations written `d1^2(v)`.

use dgda::algebra::OGen;
use dgda::multiindex::MultiIndex;
use dgda::poly::Poly;
use dgda::{AlgElem, GenId, Scalar};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "expression error: {}", self.0)
    }
}

/// Resolution context: the base dimension and the declared generators.
pub struct Symbols {
    pub dim: usize,
    pub gens: BTreeMap<String, GenId>,
}

impl Symbols {
    pub fn new(dim: usize) -> Self {
        Symbols {
            dim,
            gens: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(i64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = input.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' => {
                chars.next();
            }
            '+' => {
                chars.next();
                out.push(Token::Plus);
            }
            '-' => {
                chars.next();
                out.push(Token::Minus);
            }
            '*' => {
                chars.next();
                out.push(Token::Star);
            }
            '/' => {
                chars.next();
                out.push(Token::Slash);
            }
            '^' => {
                chars.next();
                out.push(Token::Caret);
            }
            '(' => {
                chars.next();
                out.push(Token::LParen);
            }
            ')' => {
                chars.next();
                out.push(Token::RParen);
            }
            '0'..='9' => {
                let mut n = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        n.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let v: i64 = n
                    .parse()
                    .map_err(|_| ParseError(format!("integer literal {} too large", n)))?;
                out.push(Token::Int(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(s));
            }
            other => return Err(ParseError(format!("unexpected character {:?}", other))),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    symbols: &'a Symbols,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<(), ParseError> {
        match self.next() {
            Some(found) if found == t => Ok(()),
            found => Err(ParseError(format!("expected {:?}, found {:?}", t, found))),
        }
    }

    fn expr(&mut self) -> Result<AlgElem, ParseError> {
        let mut negate = false;
        if let Some(Token::Minus) = self.peek() {
            self.next();
            negate = true;
        } else if let Some(Token::Plus) = self.peek() {
            self.next();
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.neg();
        }
        while let Some(tok) = self.peek() {
            match tok {
                Token::Plus => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.add(&t);
                }
                Token::Minus => {
                    self.next();
                    let t = self.term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<AlgElem, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.next();
                    let f = self.factor()?;
                    acc = acc.free_mul(&f);
                }
                // juxtaposition: `2 x1 v`
                Some(Token::Int(_)) | Some(Token::Ident(_)) | Some(Token::LParen) => {
                    let f = self.factor()?;
                    acc = acc.free_mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power_suffix(&mut self, base: AlgElem) -> Result<AlgElem, ParseError> {
        if let Some(Token::Caret) = self.peek() {
            self.next();
            let k = match self.next() {
                Some(Token::Int(k)) if k >= 0 => k,
                other => {
                    return Err(ParseError(format!(
                        "expected non-negative exponent, found {:?}",
                        other
                    )))
                }
            };
            let mut acc = AlgElem::one(self.symbols.dim);
            for _ in 0..k {
                acc = acc.free_mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    /// A decorated generator inside `dN(...)`: either a bare generator name
    /// or another derivative application.
    fn decorated(&mut self) -> Result<OGen, ParseError> {
        match self.next() {
            Some(Token::Ident(name)) => {
                if let Some(rest) = deriv_direction(&name) {
                    let k = self.deriv_power()?;
                    self.expect(Token::LParen)?;
                    let mut inner = self.decorated()?;
                    self.expect(Token::RParen)?;
                    let dir = self.check_direction(rest)?;
                    for _ in 0..k {
                        inner.deco = inner.deco.bump(dir);
                    }
                    Ok(inner)
                } else if let Some(g) = self.symbols.gens.get(&name) {
                    Ok(OGen::plain(g.clone(), self.symbols.dim))
                } else {
                    Err(ParseError(format!("unknown generator {}", name)))
                }
            }
            other => Err(ParseError(format!(
                "expected generator inside derivative, found {:?}",
                other
            ))),
        }
    }

    fn deriv_power(&mut self) -> Result<u32, ParseError> {
        if let Some(Token::Caret) = self.peek() {
            self.next();
            match self.next() {
                Some(Token::Int(k)) if k >= 0 => Ok(k as u32),
                other => Err(ParseError(format!(
                    "expected non-negative exponent, found {:?}",
                    other
                ))),
            }
        } else {
            Ok(1)
        }
    }

    fn check_direction(&self, i: usize) -> Result<usize, ParseError> {
        if i == 0 || i > self.symbols.dim {
            return Err(ParseError(format!(
                "derivative direction d{} out of range for base dimension {}",
                i, self.symbols.dim
            )));
        }
        Ok(i - 1)
    }

    fn factor(&mut self) -> Result<AlgElem, ParseError> {
        let dim = self.symbols.dim;
        let base = match self.next() {
            Some(Token::Int(n)) => {
                // possible rational n/m
                if let Some(Token::Slash) = self.peek() {
                    self.next();
                    match self.next() {
                        Some(Token::Int(m)) if m != 0 => {
                            AlgElem::from_poly(Poly::constant(dim, Scalar::ratio(n, m)))
                        }
                        other => {
                            return Err(ParseError(format!(
                                "expected nonzero denominator, found {:?}",
                                other
                            )))
                        }
                    }
                } else {
                    AlgElem::from_poly(Poly::constant(dim, Scalar::from_int(n)))
                }
            }
            Some(Token::Ident(name)) => {
                if let Some(i) = var_index(&name) {
                    if i == 0 || i > dim {
                        return Err(ParseError(format!(
                            "variable {} out of range for base dimension {}",
                            name, dim
                        )));
                    }
                    AlgElem::from_poly(Poly::var(dim, i - 1))
                } else if deriv_direction(&name).is_some() {
                    let dir_raw = deriv_direction(&name).unwrap();
                    let k = self.deriv_power()?;
                    self.expect(Token::LParen)?;
                    let mut inner = self.decorated()?;
                    self.expect(Token::RParen)?;
                    let dir = self.check_direction(dir_raw)?;
                    for _ in 0..k {
                        inner.deco = inner.deco.bump(dir);
                    }
                    AlgElem::letter(dim, inner)
                } else if let Some(g) = self.symbols.gens.get(&name) {
                    AlgElem::gen(dim, g.clone())
                } else {
                    return Err(ParseError(format!("unknown symbol {}", name)));
                }
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                inner
            }
            other => return Err(ParseError(format!("unexpected token {:?}", other))),
        };
        self.power_suffix(base)
    }
}

/// `x7` → `Some(7)`.
fn var_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// `d2` → `Some(2)`.
fn deriv_direction(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('d')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

/// Parses an element expression against the symbol table.
pub fn parse_elem(input: &str, symbols: &Symbols) -> Result<AlgElem, ParseError> {
    let tokens = tokenize(input)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        symbols,
    };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(ParseError(format!(
            "trailing tokens after expression: {:?}",
            &p.tokens[p.pos..]
        )));
    }
    Ok(e)
}

/// Parses a full monomial (single term, coefficient 1) for rule heads.
pub fn parse_monomial_head(
    input: &str,
    symbols: &Symbols,
) -> Result<(dgda::Monomial, MultiIndex), ParseError> {
    let e = parse_elem(input, symbols)?;
    let mut terms: Vec<_> = e.terms().collect();
    if terms.len() != 1 {
        return Err(ParseError(format!(
            "rule head must be a single monomial, found {} terms",
            terms.len()
        )));
    }
    let (mono, poly) = terms.pop().unwrap();
    let mut ptys: Vec<_> = poly.terms().collect();
    if ptys.len() != 1 {
        return Err(ParseError(
            "rule head must be a single monomial with coefficient 1".into(),
        ));
    }
    let (alpha, c) = ptys.pop().unwrap();
    if !c.is_one() {
        return Err(ParseError(format!(
            "rule head coefficient must be 1, found {}",
            c
        )));
    }
    Ok((mono.clone(), alpha.clone()))
}
