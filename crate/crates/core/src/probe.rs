//! Numeric representation of `H_{2,n}(q)` over `Z/p`.
//!
//! The ambient braid group acts on `V^{⊗(n+2)}`, `dim V = N`, through the
//! Hecke R-matrix
//!
//! ```text
//! R(e_a ⊗ e_a) = q e_a ⊗ e_a
//! R(e_a ⊗ e_b) = e_b ⊗ e_a                          (a < b)
//! R(e_a ⊗ e_b) = q e_b ⊗ e_a + (q - 1) e_a ⊗ e_b    (a > b)
//! ```
//!
//! whose eigenvalues are `q` and `-1`, so every braiding image satisfies the
//! quadratic relation and the action factors through the algebra. It also
//! imposes the quadratic on the fixed-strand crossings, so equal images prove
//! nothing; differing images refute an identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::AlgebraElement;
use crate::braid::{embed, MixedWord};
use crate::modp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("bad specialization q = {q} mod {p}: need q != 0, -1")]
    BadSpecialization { q: u64, p: u64 },
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("local dimension {0} unsupported (use 2, 3 or 4)")]
    LocalDimension(usize),
    #[error("strand mismatch: context n = {0}, element n = {1}")]
    StrandMismatch(usize, usize),
    #[error("representation failed validation: {0}")]
    Invalid(String),
}

/// A validated specialization of the representation.
#[derive(Clone, Debug)]
pub struct RepContext {
    n: usize,
    p: u64,
    q: u64,
    q_inv: u64,
    local_dim: usize,
    dim: usize,
}

pub type Vector = Vec<u64>;
/// Dense matrix, `m[row][col]`.
pub type Matrix = Vec<Vec<u64>>;

impl RepContext {
    pub fn new(n: usize, p: u64, q: u64) -> Result<Self, ProbeError> {
        Self::with_local_dim(n, p, q, 2)
    }

    pub fn with_local_dim(n: usize, p: u64, q: u64, local_dim: usize) -> Result<Self, ProbeError> {
        if !modp::is_prime(p) {
            return Err(ProbeError::NotPrime(p));
        }
        if !(2..=4).contains(&local_dim) {
            return Err(ProbeError::LocalDimension(local_dim));
        }
        let q = q % p;
        if q == 0 || q == p - 1 {
            return Err(ProbeError::BadSpecialization { q, p });
        }
        let dim = local_dim.pow(n as u32 + 2);
        let ctx = RepContext { n, p, q, q_inv: modp::inv(q, p), local_dim, dim };
        ctx.validate()?;
        Ok(ctx)
    }

    /// Fresh random 61-bit prime and random admissible `q`.
    pub fn random<R: Rng + ?Sized>(n: usize, local_dim: usize, rng: &mut R) -> Result<Self, ProbeError> {
        let p = modp::random_prime_61(rng);
        let q = rng.gen_range(1..p - 1);
        Self::with_local_dim(n, p, q, local_dim)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn q_value(&self) -> u64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn random_vector<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        (0..self.dim).map(|_| rng.gen_range(0..self.p)).collect()
    }

    /// `v <- R_k^{exp} v` where `R_k` acts on tensor slots `k-1, k`.
    fn apply_generator(&self, k: u16, exp: i8, v: &mut [u64]) {
        let d = self.local_dim;
        let (p, q) = (self.p, self.q);
        let slots = self.n + 2;
        // Slot 0 is the most significant digit.
        let stride_b = d.pow((slots - 1 - k as usize) as u32);
        let stride_a = stride_b * d;
        let qm1 = modp::sub(q, 1, p);
        for base in 0..self.dim {
            let a = (base / stride_a) % d;
            let b = (base / stride_b) % d;
            // Visit each unordered pair {a, b} once, from its a < b member.
            if a > b {
                continue;
            }
            if a == b {
                let f = if exp > 0 { q } else { self.q_inv };
                v[base] = modp::mul(v[base], f, p);
                continue;
            }
            let lo = base; // e_a ⊗ e_b, a < b
            let hi = base + (b - a) * stride_a - (b - a) * stride_b; // e_b ⊗ e_a
            let (x, y) = (v[lo], v[hi]);
            // Columns: R e_lo = e_hi, R e_hi = q e_lo + (q-1) e_hi.
            let (nx, ny) = if exp > 0 {
                (modp::mul(q, y, p), modp::add(x, modp::mul(qm1, y, p), p))
            } else {
                // R^-1 = q^-1 R + (q^-1 - 1).
                let a_coef = modp::sub(self.q_inv, 1, p);
                let rx = modp::mul(q, y, p);
                let ry = modp::add(x, modp::mul(qm1, y, p), p);
                (
                    modp::add(modp::mul(self.q_inv, rx, p), modp::mul(a_coef, x, p), p),
                    modp::add(modp::mul(self.q_inv, ry, p), modp::mul(a_coef, y, p), p),
                )
            };
            v[lo] = nx;
            v[hi] = ny;
        }
    }

    fn apply_artin(&self, letters: &[(u16, i8)], v: &mut [u64]) {
        // The rightmost letter acts first.
        for &(k, e) in letters.iter().rev() {
            self.apply_generator(k, e, v);
        }
    }

    pub fn apply_word(&self, w: &MixedWord, v: &[u64]) -> Vector {
        let mut out = v.to_vec();
        self.apply_artin(&embed(w, self.n).letters, &mut out);
        out
    }

    pub fn apply_element(&self, e: &AlgebraElement, v: &[u64]) -> Result<Vector, ProbeError> {
        if e.n() != self.n {
            return Err(ProbeError::StrandMismatch(self.n, e.n()));
        }
        let mut acc = vec![0u64; self.dim];
        for (w, c) in e.terms() {
            let cv = c.eval_mod(self.q, self.p).expect("q is nonzero");
            let img = self.apply_word(w, v);
            for (a, x) in acc.iter_mut().zip(img) {
                *a = modp::add(*a, modp::mul(cv, x, self.p), self.p);
            }
        }
        Ok(acc)
    }

    /// Full matrix of an element, column `j` being the image of `e_j`.
    pub fn matrix(&self, e: &AlgebraElement) -> Result<Matrix, ProbeError> {
        let mut m = vec![vec![0u64; self.dim]; self.dim];
        for j in 0..self.dim {
            let mut basis = vec![0u64; self.dim];
            basis[j] = 1;
            let col = self.apply_element(e, &basis)?;
            for (i, x) in col.into_iter().enumerate() {
                m[i][j] = x;
            }
        }
        Ok(m)
    }

    /// Checks the quadratic and the braid relations of the ambient generators
    /// on a random vector.
    fn validate(&self) -> Result<(), ProbeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.p ^ self.q.rotate_left(17));
        let v = self.random_vector(&mut rng);
        let strands = self.n + 2;
        let p = self.p;
        let run = |ls: &[(u16, i8)]| {
            let mut x = v.clone();
            self.apply_artin(ls, &mut x);
            x
        };
        for k in 1..strands as u16 {
            // R^2 = (q-1) R + q
            let rr = run(&[(k, 1), (k, 1)]);
            let r = run(&[(k, 1)]);
            let qm1 = modp::sub(self.q, 1, p);
            let rhs: Vector =
                r.iter().zip(&v).map(|(&a, &b)| modp::add(modp::mul(qm1, a, p), modp::mul(self.q, b, p), p)).collect();
            if rr != rhs {
                return Err(ProbeError::Invalid(format!("quadratic fails for s{k}")));
            }
            if run(&[(k, 1), (k, -1)]) != v {
                return Err(ProbeError::Invalid(format!("inverse fails for s{k}")));
            }
            if (k as usize) + 1 < strands && run(&[(k, 1), (k + 1, 1), (k, 1)]) != run(&[(k + 1, 1), (k, 1), (k + 1, 1)]) {
                return Err(ProbeError::Invalid(format!("braid relation fails for s{k}, s{}", k + 1)));
            }
        }
        Ok(())
    }
}

pub fn rep_build(n: usize, p: u64, q: u64) -> Result<RepContext, ProbeError> {
    RepContext::new(n, p, q)
}

pub fn rep_apply(ctx: &RepContext, e: &AlgebraElement) -> Result<Matrix, ProbeError> {
    ctx.matrix(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialPoint {
    pub p: u64,
    pub q: u64,
    pub differs: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Conclusive: the elements differ in the algebra.
    Distinct { witness: TrialPoint, transcript: Vec<TrialPoint> },
    /// No trial separated them; says nothing about equality.
    Inconclusive { transcript: Vec<TrialPoint> },
}

impl Verdict {
    pub fn is_distinct(&self) -> bool {
        matches!(self, Verdict::Distinct { .. })
    }

    pub fn transcript(&self) -> &[TrialPoint] {
        match self {
            Verdict::Distinct { transcript, .. } | Verdict::Inconclusive { transcript } => transcript,
        }
    }
}

/// Probe configuration: number of trials, local dimension and the seed from
/// which every prime, `q` and test vector is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProbeConfig {
    pub trials: usize,
    pub local_dim: usize,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { trials: 3, local_dim: 2, seed: 0 }
    }
}

/// Compares images of `x` and `y` on random vectors at fresh random
/// specializations; stops at the first separating trial.
pub fn distinct(x: &AlgebraElement, y: &AlgebraElement, cfg: ProbeConfig) -> Result<Verdict, ProbeError> {
    if x.n() != y.n() {
        return Err(ProbeError::StrandMismatch(x.n(), y.n()));
    }
    let diff = x.sub(y).expect("same n");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut transcript = Vec::new();
    for _ in 0..cfg.trials.max(1) {
        let ctx = RepContext::random(x.n(), cfg.local_dim, &mut rng)?;
        let v = ctx.random_vector(&mut rng);
        let img = ctx.apply_element(&diff, &v)?;
        let point = TrialPoint { p: ctx.p, q: ctx.q, differs: img.iter().any(|&c| c != 0) };
        transcript.push(point.clone());
        if point.differs {
            return Ok(Verdict::Distinct { witness: point, transcript });
        }
    }
    Ok(Verdict::Inconclusive { transcript })
}

/// Whether `e` has zero image at one given specialization (random vector).
pub fn vanishes_at(ctx: &RepContext, e: &AlgebraElement, seed: u64) -> Result<bool, ProbeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let v = ctx.random_vector(&mut rng);
    Ok(ctx.apply_element(e, &v)?.iter().all(|&c| c == 0))
}
