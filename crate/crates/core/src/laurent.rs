//! Exact arithmetic in the Laurent polynomial ring `Z[q, q^-1]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::modp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("not a unit of Z[q^±1]: {0}")]
    NotAUnit(String),
    #[error("evaluation point q = {0} is zero modulo {1}")]
    ZeroEvaluationPoint(u64, u64),
}

/// Sparse Laurent polynomial with arbitrary-precision integer coefficients.
///
/// Zero coefficients are never stored, so structural equality is ring equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^exp`
    pub fn monomial(c: impl Into<BigInt>, exp: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        LaurentPoly { terms }
    }

    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn q_pow(exp: i64) -> Self {
        Self::monomial(1, exp)
    }

    /// `A = q^-1 - 1`
    pub fn a() -> Self {
        Self::q_pow(-1) - Self::one()
    }

    /// `B = q - 1`
    pub fn b() -> Self {
        Self::q() - Self::one()
    }

    /// Builds from `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in pairs {
            p.add_term(e, c.into());
        }
        p
    }

    fn add_term(&mut self, exp: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Single term `±q^k`.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.values().all(|c| c.abs().is_one())
    }

    /// Multiplicative inverse of a unit `±q^k`.
    pub fn invert_unit(&self) -> Result<LaurentPoly, LaurentError> {
        if !self.is_unit() {
            return Err(LaurentError::NotAUnit(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        Ok(Self::monomial(c.clone(), -e))
    }

    /// Substitutes `q -> 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Value at `q = q_value` in `Z/pZ`.
    pub fn eval_mod(&self, q_value: u64, p: u64) -> Result<u64, LaurentError> {
        let qv = q_value % p;
        if qv == 0 {
            return Err(LaurentError::ZeroEvaluationPoint(q_value, p));
        }
        let q_inv = modp::inv(qv, p);
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let base = if *e >= 0 { qv } else { q_inv };
            let pw = modp::pow(base, e.unsigned_abs(), p);
            acc = modp::add(acc, modp::mul(reduce_bigint(c, p), pw, p), p);
        }
        Ok(acc)
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + shift, c.clone())).collect(),
        }
    }

    /// Largest absolute coefficient, if it fits in an `i64`; used for reporting growth.
    pub fn max_abs_coeff(&self) -> Option<i64> {
        self.terms.values().map(|c| c.abs()).max().and_then(|c| c.to_i64())
    }
}

fn reduce_bigint(c: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let mut r = c % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_u64().expect("residue fits u64")
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Rendering order: constant first, then by growing `|exp|`, negative before positive.
fn render_order(e: i64) -> (u64, i64) {
    (e.unsigned_abs(), e)
}

impl fmt::Display for LaurentPoly {
    /// Canonical text, e.g. `-1 + q^-1` for `A`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(i64, &BigInt)> = self.terms().collect();
        items.sort_by_key(|(e, _)| render_order(*e));
        for (idx, (e, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (e, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write_qpow(f, e)?,
                (_, false) => {
                    write!(f, "{mag}*")?;
                    write_qpow(f, e)?;
                }
            }
        }
        Ok(())
    }
}

fn write_qpow(f: &mut fmt::Formatter<'_>, e: i64) -> fmt::Result {
    if e == 1 {
        write!(f, "q")
    } else {
        write!(f, "q^{e}")
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}
