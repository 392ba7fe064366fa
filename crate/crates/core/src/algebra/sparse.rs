//! Generic sparse multivariate polynomials over a [`Coeff`] ring.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::Coeff;
use super::mono::Mono;

/// Sparse polynomial: monomial to nonzero coefficient.
///
/// Canonical by construction: zero coefficients are never stored and the
/// map keeps monomials in a fixed order, so equal polynomials are equal
/// structurally regardless of how they were built.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparsePoly<C> {
    terms: BTreeMap<Mono, C>,
}

impl<C: Coeff> Default for SparsePoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> SparsePoly<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::c_one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Mono::one(), c)
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.c_is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn var(i: usize) -> Self {
        Self::monomial(Mono::var(i), C::c_one())
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Mono, C)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Mono::is_one)
    }

    /// Constant coefficient (zero if absent).
    pub fn constant_term(&self) -> C {
        self.terms.get(&Mono::one()).cloned().unwrap_or_else(C::c_zero)
    }

    pub fn coeff(&self, m: &Mono) -> Option<&C> {
        self.terms.get(m)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &C)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Mono, C)> {
        self.terms.into_iter()
    }

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &Mono> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, m: Mono, c: &C) {
        if c.c_is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_in_place(c);
                if e.get().c_is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn sub_term(&mut self, m: Mono, c: &C) {
        self.add_term(m, &c.negated());
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c);
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        for (m, c) in &other.terms {
            self.sub_term(m.clone(), c);
        }
    }

    /// `self += c · m · other`.
    pub fn add_scaled_shifted(&mut self, other: &Self, c: &C, m: &Mono) {
        if c.c_is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), &oc.times(c));
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.c_is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v.times(c))).collect() }
    }

    pub fn mul_mono(&self, m: &Mono) -> Self {
        Self { terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Self::zero();
        for (m, c) in &small.terms {
            out.add_scaled_shifted(big, c, m);
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Formal partial derivative in variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            out.add_term(m.with_exp(i, e - 1), &c.times(&C::from_int(e as i64)));
        }
        out
    }

    /// Highest exponent of variable `i` over all terms.
    pub fn degree_in(&self, i: usize) -> u16 {
        self.terms.keys().map(|m| m.exp(i)).max().unwrap_or(0)
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exp(i) > 0)
    }

    /// Replaces variable `i` by `value`.
    pub fn substitute(&self, i: usize, value: &Self) -> Self {
        if !self.involves(i) {
            return self.clone();
        }
        let mut powers: Vec<Self> = vec![Self::one()];
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let e = m.exp(i) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap().mul_ref(value);
                powers.push(next);
            }
            out.add_scaled_shifted(&powers[e], c, &m.with_exp(i, 0));
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> SparsePoly<D> {
        let mut out = SparsePoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c));
        }
        out
    }

    pub fn map_monos(&self, f: impl Fn(&Mono) -> Mono) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(f(m), c);
        }
        out
    }

    pub fn retain(&mut self, f: impl FnMut(&Mono, &mut C) -> bool) {
        self.terms.retain(f);
    }
}

impl<C: Coeff> Coeff for SparsePoly<C> {
    fn c_zero() -> Self {
        SparsePoly::zero()
    }
    fn c_one() -> Self {
        SparsePoly::one()
    }
    fn c_is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn from_int(n: i64) -> Self {
        Self::constant(C::from_int(n))
    }
    fn add_in_place(&mut self, other: &Self) {
        self.add_assign_ref(other);
    }
    fn sub_in_place(&mut self, other: &Self) {
        self.sub_assign_ref(other);
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn negated(&self) -> Self {
        Self { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.negated())).collect() }
    }
}

impl<C: Coeff> Add for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn add(self, rhs: Self) -> SparsePoly<C> {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<C: Coeff> Sub for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn sub(self, rhs: Self) -> SparsePoly<C> {
        let mut out = self.clone();
        out.sub_assign_ref(rhs);
        out
    }
}

impl<C: Coeff> Mul for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn mul(self, rhs: Self) -> SparsePoly<C> {
        self.mul_ref(rhs)
    }
}

impl<C: Coeff> Neg for &SparsePoly<C> {
    type Output = SparsePoly<C>;
    fn neg(self) -> SparsePoly<C> {
        Coeff::negated(self)
    }
}
