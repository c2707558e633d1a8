//! Prime-field helpers for 64-bit moduli.

use rand::Rng;

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    add(a, p - b % p, p)
}

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime; `a` must be nonzero mod `p`.
pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

/// Deterministic Miller-Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &s in &SMALL {
        if n.is_multiple_of(s) {
            return n == s;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform random prime with exactly 61 bits.
pub fn random_prime_61<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 60)..(1u64 << 61)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

/// Maps a residue to the symmetric range `(-p/2, p/2]`.
pub fn symmetric(a: u64, p: u64) -> i128 {
    if a > p / 2 {
        a as i128 - p as i128
    } else {
        a as i128
    }
}

/// Outcome of solving a linear system over `F_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<u64>),
    /// The system has a free variable.
    Underdetermined,
    Inconsistent,
}

/// Solves `rows * x = rhs` by Gaussian elimination; `rows` may have more
/// equations than unknowns.
pub fn solve(mut rows: Vec<Vec<u64>>, mut rhs: Vec<u64>, unknowns: usize, p: u64) -> Solution {
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..unknowns {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(pivot_row, r);
        rhs.swap(pivot_row, r);
        let inv_p = inv(rows[pivot_row][col], p);
        for c in 0..unknowns {
            rows[pivot_row][c] = mul(rows[pivot_row][c], inv_p, p);
        }
        rhs[pivot_row] = mul(rhs[pivot_row], inv_p, p);
        for r in 0..rows.len() {
            let f = rows[r][col];
            if r == pivot_row || f == 0 {
                continue;
            }
            for c in 0..unknowns {
                rows[r][c] = sub(rows[r][c], mul(f, rows[pivot_row][c], p), p);
            }
            rhs[r] = sub(rhs[r], mul(f, rhs[pivot_row], p), p);
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rhs[pivot_row..].iter().any(|&v| v != 0) {
        return Solution::Inconsistent;
    }
    if pivots.len() < unknowns {
        return Solution::Underdetermined;
    }
    Solution::Unique(rhs[..unknowns].to_vec())
}

/// Coefficients (constant term first) of the polynomial of degree below
/// `xs.len()` through the points `(xs[k], ys[k])`.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let m = xs.len();
    let mut out = vec![0u64; m];
    for k in 0..m {
        // Basis polynomial prod_{j != k} (x - x_j) / (x_k - x_j).
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for j in 0..m {
            if j == k {
                continue;
            }
            let mut next = vec![0u64; basis.len() + 1];
            for (d, &b) in basis.iter().enumerate() {
                next[d + 1] = add(next[d + 1], b, p);
                next[d] = sub(next[d], mul(b, xs[j], p), p);
            }
            basis = next;
            denom = mul(denom, sub(xs[k], xs[j], p), p);
        }
        let scale = mul(ys[k], inv(denom, p), p);
        for (d, &b) in basis.iter().enumerate() {
            out[d] = add(out[d], mul(b, scale, p), p);
        }
    }
    out
}
