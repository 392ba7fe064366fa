//! Variable layout for CR polynomials.
//!
//! Exponent vectors are laid out as `z_1..z_n, bz_1..bz_n, w_1..w_k,
//! bw_1..bw_k`, so index arithmetic is enough to find a variable's
//! conjugate partner or weight.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Z,
    BarZ,
    W,
    BarW,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarTable {
    n: usize,
    w_weights: Vec<u32>,
    params: Vec<String>,
}

impl VarTable {
    pub fn new(n: usize, w_weights: Vec<u32>, params: Vec<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("CR dimension must be at least 1".into()));
        }
        if w_weights.is_empty() {
            return Err(Error::Usage("codimension must be at least 1".into()));
        }
        if w_weights.contains(&0) {
            return Err(Error::Usage("w weights must be positive".into()));
        }
        if w_weights.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::Usage("w weights must be nondecreasing".into()));
        }
        let reserved = |s: &str| {
            s == "I" || Self::parse_indexed(s, "z").is_some()
                || Self::parse_indexed(s, "bz").is_some()
                || Self::parse_indexed(s, "w").is_some()
                || Self::parse_indexed(s, "bw").is_some()
        };
        for (i, p) in params.iter().enumerate() {
            if p.is_empty() || !p.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Usage(format!("invalid parameter name {p:?}")));
            }
            if p.chars().next().unwrap().is_ascii_digit() || reserved(p) {
                return Err(Error::Usage(format!("parameter name {p:?} clashes with a reserved token")));
            }
            if params[..i].contains(p) {
                return Err(Error::Usage(format!("duplicate parameter {p:?}")));
            }
        }
        Ok(Self { n, w_weights, params })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.w_weights.len()
    }

    pub fn nvars(&self) -> usize {
        2 * self.n + 2 * self.k()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn w_weights(&self) -> &[u32] {
        &self.w_weights
    }

    /// Largest w weight; the depth of the negative part.
    pub fn rho(&self) -> i64 {
        *self.w_weights.last().unwrap() as i64
    }

    pub fn z(&self, i: usize) -> usize {
        i
    }

    pub fn bz(&self, i: usize) -> usize {
        self.n + i
    }

    pub fn w(&self, l: usize) -> usize {
        2 * self.n + l
    }

    pub fn bw(&self, l: usize) -> usize {
        2 * self.n + self.k() + l
    }

    pub fn kind(&self, v: usize) -> VarKind {
        let (n, k) = (self.n, self.k());
        if v < n {
            VarKind::Z
        } else if v < 2 * n {
            VarKind::BarZ
        } else if v < 2 * n + k {
            VarKind::W
        } else {
            VarKind::BarW
        }
    }

    /// Position of `v` within its own block.
    pub fn offset(&self, v: usize) -> usize {
        let (n, k) = (self.n, self.k());
        match self.kind(v) {
            VarKind::Z => v,
            VarKind::BarZ => v - n,
            VarKind::W => v - 2 * n,
            VarKind::BarW => v - 2 * n - k,
        }
    }

    pub fn conj_var(&self, v: usize) -> usize {
        let i = self.offset(v);
        match self.kind(v) {
            VarKind::Z => self.bz(i),
            VarKind::BarZ => self.z(i),
            VarKind::W => self.bw(i),
            VarKind::BarW => self.w(i),
        }
    }

    pub fn is_barred(&self, v: usize) -> bool {
        matches!(self.kind(v), VarKind::BarZ | VarKind::BarW)
    }

    pub fn weight(&self, v: usize) -> i64 {
        match self.kind(v) {
            VarKind::Z | VarKind::BarZ => 1,
            VarKind::W | VarKind::BarW => self.w_weights[self.offset(v)] as i64,
        }
    }

    pub fn name(&self, v: usize) -> String {
        let i = self.offset(v) + 1;
        match self.kind(v) {
            VarKind::Z => format!("z{i}"),
            VarKind::BarZ => format!("bz{i}"),
            VarKind::W => format!("w{i}"),
            VarKind::BarW => format!("bw{i}"),
        }
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.nvars()).map(|v| self.name(v)).collect()
    }

    /// Resolves a variable token such as `bz1` or `w3`.
    pub fn lookup(&self, token: &str) -> Option<usize> {
        let check = |i: usize, bound: usize| (1..=bound).contains(&i).then_some(i - 1);
        if let Some(i) = Self::parse_indexed(token, "bz") {
            return check(i, self.n).map(|i| self.bz(i));
        }
        if let Some(i) = Self::parse_indexed(token, "bw") {
            return check(i, self.k()).map(|i| self.bw(i));
        }
        if let Some(i) = Self::parse_indexed(token, "z") {
            return check(i, self.n).map(|i| self.z(i));
        }
        if let Some(i) = Self::parse_indexed(token, "w") {
            return check(i, self.k()).map(|i| self.w(i));
        }
        None
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    /// Holomorphic variables `z_1..z_n, w_1..w_k` in slot order.
    pub fn holomorphic_vars(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.z(i)).chain((0..self.k()).map(|l| self.w(l))).collect()
    }

    fn parse_indexed(token: &str, prefix: &str) -> Option<usize> {
        let rest = token.strip_prefix(prefix)?;
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
            return None;
        }
        rest.parse().ok()
    }
}
