use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::quadext::{QuadExt, Rational};
use crate::error::Error;

/// A projective direction in R³ with components in Q(√2).
///
/// Construction canonicalizes, so `v`, `−v` and `λv` (nonzero rational `λ`)
/// all map to the same value and ray equality is plain structural equality.
/// The canonical representative has integer coefficients with content 1 and
/// a positive leading coefficient in the first nonzero component (the
/// rational part if nonzero, otherwise the √2 coefficient).
///
/// ```
/// use kslab::Ray;
///
/// let a = Ray::from_parts([-2, 0, 2], [0, 0, 0]).unwrap();
/// let b = Ray::from_parts([1, 0, -1], [0, 0, 0]).unwrap();
/// assert_eq!(a, b);
/// ```
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    components: [QuadExt; 3],
}

impl Ray {
    /// Canonicalizes `v`; the zero vector is rejected.
    pub fn new(v: [QuadExt; 3]) -> Result<Self, Error> {
        Ok(Ray {
            components: canonical_form(v)?,
        })
    }

    /// Ray with small integer rational parts `a` and √2 coefficients `b`.
    pub fn from_parts(a: [i64; 3], b: [i64; 3]) -> Result<Self, Error> {
        Ray::new([
            QuadExt::from_parts(a[0], b[0]),
            QuadExt::from_parts(a[1], b[1]),
            QuadExt::from_parts(a[2], b[2]),
        ])
    }

    /// Standard basis ray `e_axis`, axis in 0..3.
    pub fn basis(axis: usize) -> Ray {
        let mut a = [0i64; 3];
        a[axis] = 1;
        Ray::from_parts(a, [0; 3]).expect("basis vector is nonzero")
    }

    pub fn components(&self) -> &[QuadExt; 3] {
        &self.components
    }

    /// Exact Euclidean inner product of the stored representatives. The
    /// zero test is representative-independent, so orthogonality is well
    /// defined on rays.
    pub fn dot(&self, other: &Ray) -> QuadExt {
        let mut acc = QuadExt::zero();
        for (u, v) in self.components.iter().zip(other.components.iter()) {
            acc = acc + u * v;
        }
        acc
    }

    pub fn is_orthogonal_to(&self, other: &Ray) -> bool {
        self.dot(other).is_zero()
    }

    /// Cross product as a ray; fails exactly when the rays are
    /// projectively equal, since canonical representatives are parallel
    /// only in that case.
    pub fn cross(&self, other: &Ray) -> Result<Ray, Error> {
        let [a, b, c] = &self.components;
        let [d, e, f] = &other.components;
        Ray::new([b * f - c * e, c * d - a * f, a * e - b * d])
    }

    /// A deterministic ray perpendicular to `self`: `(−y, x, 0)` when the
    /// first two components are not both zero, else `e_x`.
    pub fn perpendicular(&self) -> Ray {
        let [x, y, _] = &self.components;
        if x.is_zero() && y.is_zero() {
            Ray::basis(0)
        } else {
            Ray::new([-y, x.clone(), QuadExt::zero()]).expect("(x, y) is nonzero")
        }
    }

    /// Numeric unit vector for the floating-point oracle side.
    pub fn unit_f64(&self) -> [f64; 3] {
        let v = [
            self.components[0].to_f64(),
            self.components[1].to_f64(),
            self.components[2].to_f64(),
        ];
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / norm, v[1] / norm, v[2] / norm]
    }
}

fn canonical_form(v: [QuadExt; 3]) -> Result<[QuadExt; 3], Error> {
    if v.iter().all(|q| q.is_zero()) {
        return Err(Error::ZeroVector);
    }

    // Six coefficients in component order: (a0, b0, a1, b1, a2, b2).
    let coeffs: Vec<Rational> = v
        .iter()
        .flat_map(|q| [q.rational_part().clone(), q.sqrt2_coeff().clone()])
        .collect();

    // Clear denominators.
    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();

    // Divide by the content.
    let mut content = BigInt::zero();
    for i in &ints {
        content = content.gcd(i);
    }
    for i in &mut ints {
        *i = &*i / &content;
    }

    // Sign: the first nonzero component leads with a positive coefficient.
    let lead = ints
        .chunks(2)
        .flat_map(|pair| pair.iter())
        .find(|i| !i.is_zero())
        .expect("vector is nonzero");
    if lead.is_negative() {
        for i in &mut ints {
            *i = -&*i;
        }
    }

    Ok([
        quad_from_ints(&ints[0], &ints[1]),
        quad_from_ints(&ints[2], &ints[3]),
        quad_from_ints(&ints[4], &ints[5]),
    ])
}

fn quad_from_ints(a: &BigInt, b: &BigInt) -> QuadExt {
    QuadExt::new(
        Rational::from_integer(a.clone()),
        Rational::from_integer(b.clone()),
    )
}

/// Exact rank of the span of `rays` over Q(√2), via fraction-free Gaussian
/// elimination. A common perpendicular axis exists iff the rank is ≤ 2.
pub fn rank(rays: &[Ray]) -> usize {
    let mut m: Vec<[QuadExt; 3]> = rays.iter().map(|r| r.components.clone()).collect();
    let mut rank = 0;
    for col in 0..3 {
        let pivot_row = (rank..m.len()).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot_row else { continue };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (entry, pivot_entry) in row.iter_mut().zip(pivot_row.iter()) {
                *entry = &*entry * &pivot_row[col] - pivot_entry * &factor;
            }
        }
        rank += 1;
        if rank == 3 {
            break;
        }
    }
    rank
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.components[0], self.components[1], self.components[2]
        )
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses three whitespace-separated `a,b` components.
impl FromStr for Ray {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(format!("expected 3 components, got {}", parts.len()));
        }
        let v = [
            parts[0].parse::<QuadExt>()?,
            parts[1].parse::<QuadExt>()?,
            parts[2].parse::<QuadExt>()?,
        ];
        Ray::new(v).map_err(|e| e.to_string())
    }
}
