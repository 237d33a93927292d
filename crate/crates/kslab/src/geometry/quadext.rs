use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Exact rational scalar used everywhere exactness matters.
pub type Rational = BigRational;

/// An element `a + b·√2` of the real quadratic field Q(√2).
///
/// Equality is structural: two elements are equal iff their rational parts
/// and √2 coefficients agree, which coincides with equality as real numbers
/// because √2 is irrational.
///
/// ```
/// use kslab::QuadExt;
/// use num_traits::One;
///
/// let u = QuadExt::from_parts(1, 1); // 1 + √2
/// assert_eq!(&u * &QuadExt::from_parts(1, -1), QuadExt::from_int(-1));
/// assert!((&u * &u.inv().unwrap()).is_one());
/// ```
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
}

impl QuadExt {
    pub fn new(a: Rational, b: Rational) -> Self {
        QuadExt { a, b }
    }

    pub fn from_int(n: i64) -> Self {
        QuadExt::new(Rational::from_integer(n.into()), Rational::zero())
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadExt::new(a, Rational::zero())
    }

    /// The element √2 itself.
    pub fn sqrt2() -> Self {
        QuadExt::new(Rational::zero(), Rational::one())
    }

    /// `a + b·√2` with small integer parts, convenient for fixtures.
    pub fn from_parts(a: i64, b: i64) -> Self {
        QuadExt::new(
            Rational::from_integer(a.into()),
            Rational::from_integer(b.into()),
        )
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn sqrt2_coeff(&self) -> &Rational {
        &self.b
    }

    /// Field norm `a² − 2b²`; zero iff the element is zero, because
    /// `a² = 2b²` has no nonzero rational solutions.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from_integer(2.into()) * &self.b * &self.b
    }

    /// Galois conjugate `a − b·√2`.
    pub fn conjugate(&self) -> Self {
        QuadExt::new(self.a.clone(), -self.b.clone())
    }

    /// Multiplicative inverse `(a − b√2) / (a² − 2b²)`.
    pub fn inv(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let n = self.norm();
        let conj = self.conjugate();
        Ok(QuadExt::new(conj.a / &n, conj.b / &n))
    }

    /// Numeric value, for the floating-point oracle side of the crate.
    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 2.0_f64.sqrt()
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::new(Rational::zero(), Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::new(Rational::one(), Rational::zero())
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        // (a + b√2)(c + d√2) = (ac + 2bd) + (ad + bc)√2
        let two = Rational::from_integer(2.into());
        QuadExt::new(
            &self.a * &rhs.a + two * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let root = if self.b.is_one() {
            "√2".to_string()
        } else if self.b == -Rational::one() {
            "-√2".to_string()
        } else {
            format!("{}√2", self.b)
        };
        if self.a.is_zero() {
            write!(f, "{root}")
        } else if self.b.is_negative() {
            write!(f, "{}{root}", self.a)
        } else {
            write!(f, "{}+{root}", self.a)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses `p` or `p/q` with an optional leading minus sign; `q` must be a
/// positive integer. Returns a message-only error so callers can attach
/// file positions.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".to_string());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let numer = BigInt::from_str(num_str).map_err(|_| format!("invalid integer `{num_str}`"))?;
    let denom = match den_str {
        None => BigInt::one(),
        Some(d) => {
            let d = BigInt::from_str(d).map_err(|_| format!("invalid integer `{d}`"))?;
            if d <= BigInt::zero() {
                return Err(format!("denominator must be positive in `{s}`"));
            }
            d
        }
    };
    Ok(Rational::new(numer, denom))
}

/// Parses one `a,b` field component meaning `a + b·√2`.
impl FromStr for QuadExt {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `a,b` component, got `{s}`"))?;
        Ok(QuadExt::new(parse_rational(a)?, parse_rational(b)?))
    }
}
