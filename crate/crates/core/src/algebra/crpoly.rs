//! Polynomials in `z, z̄, w, w̄` over [`CoeffScalar`].

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::mono::Mono;
use super::scalar::{mono_expr, CoeffScalar};
use super::sparse::SparsePoly;
use super::vartable::VarTable;
use crate::error::{Error, Result};

/// Bare CR polynomial without its table; hot loops work on this.
pub type RawPoly = SparsePoly<CoeffScalar>;

/// Outcome of a weighted-degree query on a nonzero polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    Homogeneous(i64),
    Inhomogeneous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CRPoly {
    table: Arc<VarTable>,
    raw: RawPoly,
}

impl CRPoly {
    pub fn new(table: Arc<VarTable>, raw: RawPoly) -> Self {
        Self { table, raw }
    }

    pub fn zero(table: &Arc<VarTable>) -> Self {
        Self::new(table.clone(), RawPoly::zero())
    }

    pub fn var(table: &Arc<VarTable>, v: usize) -> Self {
        Self::new(table.clone(), RawPoly::var(v))
    }

    pub fn constant(table: &Arc<VarTable>, c: CoeffScalar) -> Self {
        Self::new(table.clone(), RawPoly::constant(c))
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn raw(&self) -> &RawPoly {
        &self.raw
    }

    pub fn into_raw(self) -> RawPoly {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    fn same_table(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            Ok(())
        } else {
            Err(Error::Usage("polynomials belong to different variable tables".into()))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        Ok(Self::new(self.table.clone(), &self.raw + &other.raw))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        Ok(Self::new(self.table.clone(), &self.raw - &other.raw))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_table(other)?;
        Ok(Self::new(self.table.clone(), &self.raw * &other.raw))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.table.clone(), -&self.raw)
    }

    pub fn scale(&self, c: &CoeffScalar) -> Self {
        Self::new(self.table.clone(), self.raw.scale(c))
    }

    pub fn conj(&self) -> Self {
        Self::new(self.table.clone(), conj_raw(&self.table, &self.raw))
    }

    pub fn substitute(&self, var: usize, value: &Self) -> Result<Self> {
        self.same_table(value)?;
        Ok(Self::new(self.table.clone(), self.raw.substitute(var, &value.raw)))
    }

    pub fn derivative(&self, var: usize) -> Self {
        Self::new(self.table.clone(), self.raw.derivative(var))
    }

    pub fn weighted_degree(&self) -> Result<Homogeneity> {
        weighted_degree_raw(&self.table, &self.raw)
    }

    /// Terms in display order: weighted degree descending, then graded
    /// reverse lexicographic on the full exponent vector.
    pub fn sorted_terms(&self) -> Vec<(&Mono, &CoeffScalar)> {
        sorted_terms(&self.table, &self.raw)
    }
}

impl fmt::Display for CRPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_raw(&self.table, &self.raw))
    }
}

pub fn conj_raw(table: &VarTable, p: &RawPoly) -> RawPoly {
    let mut out = RawPoly::zero();
    for (m, c) in p.terms() {
        out.add_term(m.permuted(|v| table.conj_var(v)), &c.conj());
    }
    out
}

pub fn mono_weight(table: &VarTable, m: &Mono) -> i64 {
    m.weighted_degree(|v| table.weight(v))
}

pub fn weighted_degree_raw(table: &VarTable, p: &RawPoly) -> Result<Homogeneity> {
    let mut degrees = p.monomials().map(|m| mono_weight(table, m));
    let first = degrees.next().ok_or(Error::ZeroDegree)?;
    if degrees.all(|d| d == first) {
        Ok(Homogeneity::Homogeneous(first))
    } else {
        Ok(Homogeneity::Inhomogeneous)
    }
}

pub fn display_cmp(table: &VarTable, a: &Mono, b: &Mono) -> Ordering {
    mono_weight(table, a)
        .cmp(&mono_weight(table, b))
        .then_with(|| a.total_degree().cmp(&b.total_degree()))
        .then_with(|| a.revlex_tiebreak(b))
}

pub fn sorted_terms<'a>(table: &VarTable, p: &'a RawPoly) -> Vec<(&'a Mono, &'a CoeffScalar)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|x, y| display_cmp(table, y.0, x.0));
    terms
}

/// Expression text in the model-file syntax, e.g. `2*I*z1*bz1+(1+I)*a*w1`.
pub fn format_raw(table: &VarTable, p: &RawPoly) -> String {
    let mut out = String::new();
    for (m, c) in sorted_terms(table, p) {
        let mono = mono_expr(m, |v| table.name(v));
        let coeff = format_scalar_factor(c, table.params());
        let piece = if mono.is_empty() {
            coeff
        } else if coeff == "1" {
            mono
        } else if coeff == "-1" {
            format!("-{mono}")
        } else {
            format!("{coeff}*{mono}")
        };
        if !out.is_empty() && !piece.starts_with('-') {
            out.push('+');
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A scalar as a product factor: parenthesized when it is a sum.
pub fn format_scalar_factor(c: &CoeffScalar, params: &[String]) -> String {
    let s = c.to_expr(params);
    if c.len() <= 1 {
        s
    } else {
        format!("({s})")
    }
}

/// All monomials in `allowed` of weighted degree exactly `weight`, in
/// lexicographically descending order over `allowed` as listed.
pub fn enumerate_weighted_monomials(table: &VarTable, weight: i64, allowed: &[usize]) -> Result<Vec<Mono>> {
    if let Some(&v) = allowed.iter().find(|&&v| table.is_barred(v)) {
        return Err(Error::Usage(format!("barred variable {} is not allowed in an ansatz", table.name(v))));
    }
    let mut out = Vec::new();
    if weight < 0 {
        return Ok(out);
    }
    let mut exps = vec![0u16; table.nvars()];
    enumerate_rec(table, allowed, 0, weight, &mut exps, &mut out);
    Ok(out)
}

fn enumerate_rec(table: &VarTable, allowed: &[usize], pos: usize, remaining: i64, exps: &mut Vec<u16>, out: &mut Vec<Mono>) {
    if pos == allowed.len() {
        if remaining == 0 {
            out.push(Mono::from_exps(exps.clone()));
        }
        return;
    }
    let v = allowed[pos];
    let w = table.weight(v);
    let max = remaining / w;
    for e in (0..=max).rev() {
        exps[v] = e as u16;
        enumerate_rec(table, allowed, pos + 1, remaining - e * w, exps, out);
    }
    exps[v] = 0;
}
