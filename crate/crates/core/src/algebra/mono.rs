//! Exponent vectors.

use std::cmp::Ordering;
use std::fmt;

/// Exponent vector with trailing zeros trimmed.
///
/// Trimming makes the representation independent of how many variables the
/// surrounding ring declares, so the derived lexicographic `Ord` agrees with
/// the zero-padded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Mono(Vec<u16>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Self::var_pow(i, 1)
    }

    pub fn var_pow(i: usize, e: u16) -> Self {
        if e == 0 {
            return Self::one();
        }
        let mut v = vec![0; i + 1];
        v[i] = e;
        Mono(v)
    }

    pub fn from_exps(mut v: Vec<u16>) -> Self {
        while v.last() == Some(&0) {
            v.pop();
        }
        Mono(v)
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Weighted degree with `weight(i)` giving each variable's weight.
    pub fn weighted_degree(&self, weight: impl Fn(usize) -> i64) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e as i64 * weight(i))
            .sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut v = long.0.clone();
        for (i, &e) in short.0.iter().enumerate() {
            v[i] += e;
        }
        Mono(v)
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.0.len() <= other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Mono) -> Option<Mono> {
        if !self.divides(other) {
            return None;
        }
        let mut v = other.0.clone();
        for (i, &e) in self.0.iter().enumerate() {
            v[i] -= e;
        }
        Some(Mono::from_exps(v))
    }

    pub fn lcm(&self, other: &Mono) -> Mono {
        let n = self.0.len().max(other.0.len());
        Mono((0..n).map(|i| self.exp(i).max(other.exp(i))).collect())
    }

    pub fn gcd(&self, other: &Mono) -> Mono {
        let n = self.0.len().min(other.0.len());
        Mono::from_exps((0..n).map(|i| self.exp(i).min(other.exp(i))).collect())
    }

    pub fn is_coprime(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Copy with the exponent of variable `i` replaced.
    pub fn with_exp(&self, i: usize, e: u16) -> Mono {
        let mut v = self.0.clone();
        if v.len() <= i {
            v.resize(i + 1, 0);
        }
        v[i] = e;
        Mono::from_exps(v)
    }

    /// Renames variables through `map` (old index to new index).
    pub fn permuted(&self, map: impl Fn(usize) -> usize) -> Mono {
        let mut v: Vec<u16> = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let j = map(i);
            if v.len() <= j {
                v.resize(j + 1, 0);
            }
            v[j] += e;
        }
        Mono::from_exps(v)
    }

    /// Degree-reverse-lexicographic comparison on the exponent vectors after
    /// a grading comparison has tied.
    pub fn revlex_tiebreak(&self, other: &Mono) -> Ordering {
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exp(i).cmp(&other.exp(i)) {
                Ordering::Equal => continue,
                // the smaller exponent in the last differing variable wins
                ord => return ord.reverse(),
            }
        }
        Ordering::Equal
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
