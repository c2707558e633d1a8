//! Text front end for coefficients, words and elements.
//!
//! ```text
//! element := ['+'|'-'] product (('+'|'-') product)*
//! product := factor (['*'] factor)*
//! factor  := primary ['^' int]
//! primary := int | 'q' | atom | '(' element ')'
//! atom    := ('g' | 'T' | 't') digits
//! ```
//! Juxtaposition multiplies, so `T1^-1 * g1 * t2` and `T1^-1 g1 t2` agree.

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::braid::{Kind, Letter, MixedWord};
use crate::laurent::LaurentPoly;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index out of range for n = {n}: {atom}")]
    IndexOutOfRange { atom: String, n: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Q,
    Atom(Kind, u16, String),
    Caret,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { pos, msg: msg.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '^' => out.push((start, Tok::Caret)),
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            'q' => out.push((start, Tok::Q)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let v: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(v)));
                continue;
            }
            'g' | 'T' | 't' => {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(syntax(start, format!("expected index after '{c}'")));
                }
                let idx: u16 = text[ds..i].parse().map_err(|_| syntax(ds, "index too large"))?;
                let kind = match c {
                    'g' => Kind::Braiding,
                    'T' => Kind::LoopT,
                    _ => Kind::LoopTau,
                };
                out.push((start, Tok::Atom(kind, idx, text[start..i].to_string())));
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    n: usize,
    _src: &'a str,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn element(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut sign = 1;
        match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
            }
            Some(Tok::Minus) => {
                self.bump();
                sign = -1;
            }
            _ => {}
        }
        let mut acc = self.product()?.scale(&LaurentPoly::constant(sign));
        loop {
            let s = match self.peek() {
                Some(Tok::Plus) => 1,
                Some(Tok::Minus) => -1,
                _ => break,
            };
            self.bump();
            let p = self.product()?;
            acc.add_scaled(&LaurentPoly::constant(s), &p);
        }
        Ok(acc)
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Some(Tok::Int(_) | Tok::Q | Tok::Atom(..) | Tok::LParen))
    }

    fn product(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if matches!(self.peek(), Some(Tok::Star)) {
                self.bump();
            } else if !self.starts_factor() {
                break;
            }
            let f = self.factor()?;
            acc = acc.mul(&f).expect("same n");
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<Option<i64>, ParseError> {
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(None);
        }
        self.bump();
        let mut sign = 1;
        if matches!(self.peek(), Some(Tok::Minus)) {
            self.bump();
            sign = -1;
        }
        let at = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => {
                let v: i64 = v.try_into().map_err(|_| syntax(at, "exponent too large"))?;
                Ok(Some(sign * v))
            }
            _ => Err(syntax(at, "expected integer exponent")),
        }
    }

    fn factor(&mut self) -> Result<AlgebraElement, ParseError> {
        let at = self.here();
        let n = self.n;
        match self.bump() {
            Some(Tok::Int(v)) => {
                let base = LaurentPoly::monomial(v, 0);
                let e = self.exponent()?.unwrap_or(1);
                if e < 0 {
                    return Err(syntax(at, "negative power of an integer"));
                }
                let mut acc = LaurentPoly::one();
                for _ in 0..e {
                    acc = &acc * &base;
                }
                Ok(AlgebraElement::constant(n, acc))
            }
            Some(Tok::Q) => {
                let e = self.exponent()?.unwrap_or(1);
                Ok(AlgebraElement::constant(n, LaurentPoly::q_pow(e)))
            }
            Some(Tok::Atom(kind, idx, text)) => {
                let letter = Letter::new(kind, idx, 1);
                if !letter.in_range(n) {
                    return Err(ParseError::IndexOutOfRange { atom: text, n });
                }
                let e = self.exponent()?.unwrap_or(1);
                if e == 0 {
                    return Err(syntax(at, "zero exponent on a generator"));
                }
                let l = if e < 0 { letter.inverse() } else { letter };
                let w = MixedWord::from_letters(std::iter::repeat_n(l, e.unsigned_abs() as usize));
                Ok(AlgebraElement::word(n, w))
            }
            Some(Tok::LParen) => {
                let inner = self.element()?;
                let close = self.here();
                if self.bump() != Some(Tok::RParen) {
                    return Err(syntax(close, "expected ')'"));
                }
                let e = self.exponent()?.unwrap_or(1);
                if e < 0 {
                    return Err(syntax(at, "negative power of a parenthesized expression"));
                }
                let mut acc = AlgebraElement::one(n);
                for _ in 0..e {
                    acc = acc.mul(&inner).expect("same n");
                }
                Ok(acc)
            }
            Some(_) => Err(syntax(at, "expected a number, q, a generator or '('")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

pub fn parse_element(text: &str, n: usize) -> Result<AlgebraElement, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    let mut p = Parser { toks, pos: 0, end: text.len(), n, _src: text };
    let e = p.element()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.here(), "trailing input"));
    }
    Ok(e)
}

/// Parses a single word (no coefficients, no sums).
pub fn parse_word(text: &str, n: usize) -> Result<MixedWord, ParseError> {
    let toks = tokenize(text)?;
    let mut letters = Vec::new();
    let mut i = 0;
    if toks.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    if toks.len() == 1 && toks[0].1 == Tok::Int(BigInt::from(1)) {
        return Ok(MixedWord::empty());
    }
    while i < toks.len() {
        let (at, t) = &toks[i];
        match t {
            Tok::Star => {
                i += 1;
                continue;
            }
            Tok::Atom(kind, idx, text) => {
                let mut l = Letter::new(*kind, *idx, 1);
                if !l.in_range(n) {
                    return Err(ParseError::IndexOutOfRange { atom: text.clone(), n });
                }
                if matches!(toks.get(i + 1), Some((_, Tok::Caret))) {
                    match (toks.get(i + 2), toks.get(i + 3)) {
                        (Some((_, Tok::Minus)), Some((_, Tok::Int(v)))) if *v == BigInt::from(1) => {
                            l = l.inverse();
                            i += 3;
                        }
                        (Some((_, Tok::Int(v))), _) if *v == BigInt::from(1) => {
                            i += 2;
                        }
                        _ => return Err(syntax(*at, "word exponents must be 1 or -1")),
                    }
                }
                letters.push(l);
            }
            _ => return Err(syntax(*at, "expected a generator")),
        }
        i += 1;
    }
    Ok(MixedWord(letters))
}

/// Parses a coefficient expression in `q`.
pub fn parse_poly(text: &str) -> Result<LaurentPoly, ParseError> {
    let e = parse_element(text, 0)?;
    if e.terms().any(|(w, _)| !w.is_empty()) {
        return Err(syntax(0, "coefficient contains a generator"));
    }
    Ok(e.coeff(&MixedWord::empty()))
}
