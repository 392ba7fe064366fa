//! Parameter polynomials: `QPoly` over ℚ and `CoeffScalar` over ℚ(i).
//!
//! Parameters are real, so conjugating a `CoeffScalar` only conjugates the
//! Gaussian-rational coefficients.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::coeff::{fmt_q, q_gcd, Coeff, GaussRat, Q};
use super::mono::Mono;
use super::sparse::SparsePoly;

/// Polynomial with rational coefficients (parameter conditions, linear
/// system entries, Gröbner basis elements).
pub type QPoly = SparsePoly<Q>;

/// Element of ℚ(i)[params]; the coefficient ring of every `CRPoly`.
pub type CoeffScalar = SparsePoly<GaussRat>;

impl SparsePoly<GaussRat> {
    pub fn from_gauss(c: GaussRat) -> Self {
        Self::constant(c)
    }

    pub fn imag_unit() -> Self {
        Self::constant(GaussRat::i())
    }

    pub fn from_real_poly(p: &QPoly) -> Self {
        p.map_coeffs(|c| GaussRat::real(c.clone()))
    }

    /// `re + i·im` for real parameter polynomials.
    pub fn from_parts(re: &QPoly, im: &QPoly) -> Self {
        let mut out = Self::from_real_poly(re);
        for (m, c) in im.terms() {
            out.add_term(m.clone(), &GaussRat::new(Q::zero(), c.clone()));
        }
        out
    }

    /// Complex conjugate; parameter exponents are untouched.
    pub fn conj(&self) -> Self {
        self.map_coeffs(GaussRat::conj)
    }

    pub fn re(&self) -> QPoly {
        self.map_coeffs(|c| c.re.clone())
    }

    pub fn im(&self) -> QPoly {
        self.map_coeffs(|c| c.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.terms().all(|(_, c)| c.is_real())
    }

    pub fn to_expr(&self, params: &[String]) -> String {
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().rev().enumerate() {
            let mono = mono_expr(m, |i| params[i].clone());
            let coeff = c.to_string();
            if idx > 0 {
                out.push('+');
            }
            push_term(&mut out, &coeff, &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out.replace("+-", "-")
    }
}

impl SparsePoly<Q> {
    /// Positive gcd of the coefficients.
    pub fn content(&self) -> Q {
        q_gcd(self.terms().map(|(_, c)| c))
    }

    /// Divides out the content; the leading coefficient under the given
    /// comparator is made positive.
    pub fn primitive_by(&self, leading: impl Fn(&QPoly) -> Option<Mono>) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let content = self.content();
        let mut p = self.scale(&(Q::one() / content));
        if let Some(lm) = leading(&p) {
            if p.coeff(&lm).map(|c| c.is_negative()).unwrap_or(false) {
                p = p.negated();
            }
        }
        p
    }

    pub fn as_constant(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn eval(&self, point: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (m, c) in self.terms() {
            let mut v = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    v *= &point[i];
                }
            }
            acc += v;
        }
        acc
    }

    /// Exact division; `None` when `divisor` does not divide `self` with
    /// zero remainder under the supplied leading-monomial function.
    pub fn exact_div(&self, divisor: &QPoly, leading: impl Fn(&QPoly) -> Option<Mono>) -> Option<QPoly> {
        let lm_d = leading(divisor)?;
        let lc_d = divisor.coeff(&lm_d)?.clone();
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(lm) = leading(&rem) {
            let q_mono = lm_d.quotient_of(&lm)?;
            let q_coeff = rem.coeff(&lm).unwrap() / &lc_d;
            rem.sub_assign_ref(&divisor.mul_mono(&q_mono).scale(&q_coeff));
            quot.add_term(q_mono, &q_coeff);
        }
        Some(quot)
    }

    pub fn to_expr(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (idx, (m, c)) in self.terms().rev().enumerate() {
            let mono = mono_expr(m, |i| names[i].clone());
            if idx > 0 {
                out.push('+');
            }
            push_term(&mut out, &fmt_q(c), &mono);
        }
        if out.is_empty() {
            out.push('0');
        }
        out.replace("+-", "-")
    }
}

pub(crate) fn mono_expr(m: &Mono, name: impl Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exps().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(name(i)),
            _ => parts.push(format!("{}^{}", name(i), e)),
        }
    }
    parts.join("*")
}

pub(crate) fn push_term(out: &mut String, coeff: &str, mono: &str) {
    if mono.is_empty() {
        out.push_str(coeff);
    } else if coeff == "1" {
        out.push_str(mono);
    } else if coeff == "-1" {
        let _ = write!(out, "-{}", mono);
    } else {
        let _ = write!(out, "{}*{}", coeff, mono);
    }
}
