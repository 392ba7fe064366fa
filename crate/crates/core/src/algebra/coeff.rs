//! Exact coefficient domains: rationals and Gaussian rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational number.
pub type Q = BigRational;

/// Minimal ring interface shared by every coefficient type in the crate.
///
/// Method names avoid the `std::ops` names so that types implementing both
/// never hit ambiguous method resolution.
pub trait Coeff: Clone + PartialEq + Eq + std::hash::Hash + fmt::Debug + Send + Sync + 'static {
    fn c_zero() -> Self;
    fn c_one() -> Self;
    fn c_is_zero(&self) -> bool;
    fn from_int(n: i64) -> Self;
    fn add_in_place(&mut self, other: &Self);
    fn sub_in_place(&mut self, other: &Self);
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Coeff for Q {
    fn c_zero() -> Self {
        Zero::zero()
    }
    fn c_one() -> Self {
        One::one()
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn from_int(n: i64) -> Self {
        Q::from_integer(BigInt::from(n))
    }
    fn add_in_place(&mut self, other: &Self) {
        *self += other;
    }
    fn sub_in_place(&mut self, other: &Self) {
        *self -= other;
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Writes a rational as `p` or `p/q`.
pub fn fmt_q(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Greatest common divisor of a list of rationals, as a positive rational
/// `gcd(numerators) / lcm(denominators)`. Zero for an empty list.
pub fn q_gcd<'a>(values: impl IntoIterator<Item = &'a Q>) -> Q {
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for v in values {
        num = num.gcd(v.numer());
        den = den.lcm(v.denom());
    }
    if num.is_zero() {
        Q::zero()
    } else {
        Q::new(num.abs(), den)
    }
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GaussRat {
    pub re: Q,
    pub im: Q,
}

impl GaussRat {
    pub fn new(re: Q, im: Q) -> Self {
        Self { re, im }
    }

    pub fn real(re: Q) -> Self {
        Self { re, im: Q::zero() }
    }

    pub fn i() -> Self {
        Self { re: Q::zero(), im: Q::one() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_real(&self) -> bool {
        Zero::is_zero(&self.im)
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if Zero::is_zero(&norm) {
            return None;
        }
        Some(Self { re: &self.re / &norm, im: -&self.im / &norm })
    }
}

impl Coeff for GaussRat {
    fn c_zero() -> Self {
        Self { re: Q::zero(), im: Q::zero() }
    }
    fn c_one() -> Self {
        Self { re: Q::one(), im: Q::zero() }
    }
    fn c_is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn from_int(n: i64) -> Self {
        Self::real(q_int(n))
    }
    fn add_in_place(&mut self, other: &Self) {
        self.re += &other.re;
        self.im += &other.im;
    }
    fn sub_in_place(&mut self, other: &Self) {
        self.re -= &other.re;
        self.im -= &other.im;
    }
    fn times(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
    fn negated(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }
}

fn imag_text(im: &Q) -> String {
    if im.is_one() {
        "I".into()
    } else if (-im).is_one() {
        "-I".into()
    } else {
        format!("{}*I", fmt_q(im))
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let re_zero = Zero::is_zero(&self.re);
        let im_zero = Zero::is_zero(&self.im);
        match (re_zero, im_zero) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", fmt_q(&self.re)),
            (true, false) => write!(f, "{}", imag_text(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({}-{})", fmt_q(&self.re), imag_text(&-&self.im))
                } else {
                    write!(f, "({}+{})", fmt_q(&self.re), imag_text(&self.im))
                }
            }
        }
    }
}
