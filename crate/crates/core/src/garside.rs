//! Left-greedy Garside normal form in the Artin braid group `B_N`; decides the
//! word problem and provides hashable keys for group elements.
//!
//! A simple element is stored as the permutation it induces, written as the
//! array of strand labels by position. Right multiplication by `s_i` swaps the
//! entries at positions `i-1, i`; left multiplication swaps the values `i-1, i`.

use std::fmt;

use thiserror::Error;

use crate::braid::ArtinWord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GarsideError {
    #[error("strand mismatch: {0} vs {1}")]
    StrandMismatch(usize, usize),
}

/// Positive square-free braid, identified with its permutation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermutationBraid(Vec<u8>);

impl PermutationBraid {
    pub fn identity(strands: usize) -> Self {
        PermutationBraid((0..strands as u8).collect())
    }

    pub fn delta(strands: usize) -> Self {
        PermutationBraid((0..strands as u8).rev().collect())
    }

    pub fn generator(strands: usize, i: u16) -> Self {
        let mut p = Self::identity(strands);
        p.0.swap(i as usize - 1, i as usize);
        p
    }

    pub fn from_images(images: Vec<u8>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &v in &images {
            let v = v as usize;
            if v >= images.len() || seen[v] {
                return None;
            }
            seen[v] = true;
        }
        Some(PermutationBraid(images))
    }

    pub fn strands(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn length(&self) -> usize {
        let p = &self.0;
        let mut inv = 0;
        for a in 0..p.len() {
            for b in a + 1..p.len() {
                if p[a] > p[b] {
                    inv += 1;
                }
            }
        }
        inv
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    pub fn is_delta(&self) -> bool {
        let n = self.0.len();
        self.0.iter().enumerate().all(|(i, &v)| v as usize == n - 1 - i)
    }

    /// Right descents: `i` with `self = x s_i`, `x` shorter.
    fn finishing_contains(&self, i: usize) -> bool {
        self.0[i - 1] > self.0[i]
    }

    /// Left descents: `i` with `self = s_i x`, `x` shorter.
    fn starting_contains(&self, i: usize) -> bool {
        let pos_lo = self.0.iter().position(|&v| v as usize == i - 1).unwrap();
        let pos_hi = self.0.iter().position(|&v| v as usize == i).unwrap();
        pos_hi < pos_lo
    }

    fn mul_right_gen(&mut self, i: usize) {
        self.0.swap(i - 1, i);
    }

    fn strip_left_gen(&mut self, i: usize) {
        for v in self.0.iter_mut() {
            if *v as usize == i - 1 {
                *v = i as u8;
            } else if *v as usize == i {
                *v = (i - 1) as u8;
            }
        }
    }

    /// Conjugation by the half twist, `s_i -> s_{N-i}`.
    pub fn flip(&self) -> Self {
        let n = self.0.len();
        PermutationBraid((0..n).map(|pos| (n - 1) as u8 - self.0[n - 1 - pos]).collect())
    }

    /// Complement `Δ s_i^-1`, simple for every generator.
    fn delta_without_right(strands: usize, i: u16) -> Self {
        let mut d = Self::delta(strands);
        d.mul_right_gen(i as usize);
        d
    }

    /// A reduced positive word for this permutation (bubble-sort order).
    pub fn word(&self) -> Vec<u16> {
        let mut p = self.0.clone();
        let mut out = Vec::new();
        // Sorting p by adjacent swaps spells the inverse; reverse it at the end.
        while let Some(i) = (1..p.len()).find(|&i| p[i - 1] > p[i]) {
            p.swap(i - 1, i);
            out.push(i as u16);
        }
        out.reverse();
        out
    }

    /// One-line cycle notation on strands `1..N`, fixed points omitted.
    pub fn cycle_notation(&self) -> String {
        let n = self.0.len();
        // Strand at position `pos` before moves to... we report the map label -> position.
        let mut dest = vec![0usize; n];
        for (pos, &label) in self.0.iter().enumerate() {
            dest[label as usize] = pos;
        }
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || dest[start] == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push((x + 1).to_string());
                x = dest[x];
            }
            out.push('(');
            out.push_str(&cyc.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "()".to_string()
        } else {
            out
        }
    }
}

impl fmt::Debug for PermutationBraid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_notation())
    }
}

/// `Δ^infimum · f_1 ⋯ f_k` with every pair `(f_j, f_{j+1})` left-weighted and
/// no `f_j` equal to the identity or `Δ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GarsideNF {
    pub strands: usize,
    pub infimum: i64,
    pub factors: Vec<PermutationBraid>,
}

impl GarsideNF {
    /// The word spelled by this normal form.
    pub fn to_word(&self) -> ArtinWord {
        let n = self.strands;
        let delta = PermutationBraid::delta(n).word();
        let mut letters = Vec::new();
        for _ in 0..self.infimum.max(0) {
            letters.extend(delta.iter().map(|&i| (i, 1i8)));
        }
        for _ in 0..(-self.infimum).max(0) {
            letters.extend(delta.iter().rev().map(|&i| (i, -1i8)));
        }
        for f in &self.factors {
            letters.extend(f.word().into_iter().map(|i| (i, 1i8)));
        }
        ArtinWord::new(n, letters)
    }

    pub fn is_identity(&self) -> bool {
        self.infimum == 0 && self.factors.is_empty()
    }

    /// Whether consecutive factors satisfy the left-weighted condition.
    pub fn is_left_weighted(&self) -> bool {
        self.factors.windows(2).all(|w| {
            (1..self.strands).all(|i| !w[1].starting_contains(i) || w[0].finishing_contains(i))
        })
    }
}

/// Makes `(a, b)` left-weighted in place; returns whether anything moved.
fn left_weight(a: &mut PermutationBraid, b: &mut PermutationBraid) -> bool {
    let n = a.strands();
    let mut moved = false;
    loop {
        let Some(i) = (1..n).find(|&i| b.starting_contains(i) && !a.finishing_contains(i)) else {
            return moved;
        };
        a.mul_right_gen(i);
        b.strip_left_gen(i);
        moved = true;
    }
}

fn push_simple(factors: &mut Vec<PermutationBraid>, s: PermutationBraid) {
    factors.push(s);
    let mut j = factors.len() - 1;
    while j > 0 {
        let (left, right) = factors.split_at_mut(j);
        if !left_weight(&mut left[j - 1], &mut right[0]) {
            break;
        }
        j -= 1;
    }
}

/// Left-greedy normal form of the braid spelled by `w`.
pub fn normal_form(w: &ArtinWord) -> GarsideNF {
    let n = w.strands;
    let mut inf: i64 = 0;
    let mut factors: Vec<PermutationBraid> = Vec::new();
    for &(i, e) in &w.letters {
        if e > 0 {
            push_simple(&mut factors, PermutationBraid::generator(n, i));
        } else {
            inf -= 1;
            for f in factors.iter_mut() {
                *f = f.flip();
            }
            push_simple(&mut factors, PermutationBraid::delta_without_right(n, i));
        }
        // Absorb leading half twists; drop trailing identities.
        while factors.first().is_some_and(|f| f.is_delta()) {
            factors.remove(0);
            inf += 1;
        }
        while factors.last().is_some_and(|f| f.is_identity()) {
            factors.pop();
        }
    }
    let nf = GarsideNF { strands: n, infimum: inf, factors };
    debug_assert!(nf.is_left_weighted());
    nf
}

pub fn group_equal(u: &ArtinWord, v: &ArtinWord) -> Result<bool, GarsideError> {
    if u.strands != v.strands {
        return Err(GarsideError::StrandMismatch(u.strands, v.strands));
    }
    Ok(normal_form(u) == normal_form(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(n: usize, ls: &[(u16, i8)]) -> ArtinWord {
        ArtinWord::new(n, ls.to_vec())
    }

    /// All simple elements of `B_3`, as positive reduced words, by brute force.
    fn simple_elements_b3() -> Vec<Vec<u16>> {
        vec![vec![], vec![1], vec![2], vec![1, 2], vec![2, 1], vec![1, 2, 1]]
    }

    #[test]
    fn half_twist_in_b3() {
        let nf = normal_form(&word(3, &[(1, 1), (2, 1), (1, 1)]));
        assert_eq!(nf.infimum, 1);
        assert!(nf.factors.is_empty());
        // The brute-force list has exactly one element of maximal length, and it is Δ.
        let maxlen = simple_elements_b3().iter().map(|w| w.len()).max().unwrap();
        assert_eq!(maxlen, PermutationBraid::delta(3).length());
    }

    #[test]
    fn square_splits_greedily() {
        let nf = normal_form(&word(3, &[(1, 1), (1, 1)]));
        assert_eq!(nf.infimum, 0);
        assert_eq!(nf.factors, vec![PermutationBraid::generator(3, 1); 2]);
    }

    #[test]
    fn identity_word() {
        assert!(normal_form(&word(3, &[(1, 1), (1, -1)])).is_identity());
        assert!(normal_form(&word(4, &[(2, -1), (3, -1), (3, 1), (2, 1)])).is_identity());
    }

    #[test]
    fn equality_basics() {
        let a = word(3, &[(1, 1), (2, 1), (1, 1)]);
        let b = word(3, &[(2, 1), (1, 1), (2, 1)]);
        assert!(group_equal(&a, &b).unwrap());
        assert!(!group_equal(&word(3, &[(1, 1)]), &word(3, &[(2, 1)])).unwrap());
        assert!(group_equal(&word(3, &[]), &word(4, &[])).is_err());
    }

    #[test]
    fn simple_words_roundtrip() {
        for w in simple_elements_b3() {
            let letters: Vec<_> = w.iter().map(|&i| (i, 1i8)).collect();
            let nf = normal_form(&word(3, &letters));
            assert_eq!(normal_form(&nf.to_word()), nf);
        }
    }

    #[test]
    fn cycle_notation() {
        assert_eq!(PermutationBraid::generator(4, 2).cycle_notation(), "(2 3)");
        assert_eq!(PermutationBraid::identity(3).cycle_notation(), "()");
    }
}
