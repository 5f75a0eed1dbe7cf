//! Real, complex and quaternion scalars sharing one four-slot representation.
//!
//! A [`Scalar`] stores coefficients on the basis `1, i, j, k` together with the
//! [`Field`] it belongs to. Arithmetic operators follow the inclusions
//! `R ⊂ C ⊂ H` (the complex unit is identified with `i`), so a real constant
//! times a quaternion is a quaternion. The `try_*` methods refuse mixed
//! fields and are the ones to use at API boundaries.

use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::float;

/// One of the three associative normed division algebras.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Real,
    Complex,
    Quaternion,
}

impl Field {
    /// Real dimension of the algebra.
    pub const fn dim(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }

    /// Short tag used in serialized forms: `R`, `C` or `H`.
    pub const fn tag(self) -> &'static str {
        match self {
            Field::Real => "R",
            Field::Complex => "C",
            Field::Quaternion => "H",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Field> {
        match tag {
            "R" => Some(Field::Real),
            "C" => Some(Field::Complex),
            "H" => Some(Field::Quaternion),
            _ => None,
        }
    }

    /// The `k`-th real basis element (`1, i, j, k`).
    pub fn basis(self, k: usize) -> Scalar {
        let mut c = [0.0; 4];
        c[k] = 1.0;
        Scalar { field: self, c }
    }

    /// Description of the central unit group: `{±1}` for R and H, the unit
    /// circle for C.
    pub fn central_units(self) -> CentralUnits {
        match self {
            Field::Complex => CentralUnits::Circle,
            _ => CentralUnits::Sign,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Unit elements commuting with everything in the field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CentralUnits {
    Sign,
    Circle,
}

/// Element of R, C or H.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar {
    field: Field,
    c: [f64; 4],
}

impl Scalar {
    pub const fn zero(field: Field) -> Scalar {
        Scalar { field, c: [0.0; 4] }
    }

    pub const fn one(field: Field) -> Scalar {
        Scalar { field, c: [1.0, 0.0, 0.0, 0.0] }
    }

    /// A real number tagged as real. Mixes freely with the other fields.
    pub const fn real(x: f64) -> Scalar {
        Scalar { field: Field::Real, c: [x, 0.0, 0.0, 0.0] }
    }

    pub const fn complex(re: f64, im: f64) -> Scalar {
        Scalar { field: Field::Complex, c: [re, im, 0.0, 0.0] }
    }

    pub const fn quaternion(a: f64, b: f64, c: f64, d: f64) -> Scalar {
        Scalar { field: Field::Quaternion, c: [a, b, c, d] }
    }

    /// Builds a scalar from its real coordinates. The slice length must match
    /// the field dimension.
    pub fn from_coords(field: Field, coords: &[f64]) -> Result<Scalar> {
        if coords.len() != field.dim() {
            return Err(Error::DimensionMismatch { expected: field.dim(), found: coords.len() });
        }
        let mut c = [0.0; 4];
        c[..coords.len()].copy_from_slice(coords);
        Ok(Scalar { field, c })
    }

    /// The same value viewed in a larger field. Fails if `field` is smaller
    /// than the current one and the value would lose components.
    pub fn embed(self, field: Field) -> Result<Scalar> {
        if field >= self.field || self.c[field.dim()..].iter().all(|&x| x == 0.0) {
            Ok(Scalar { field, c: self.c })
        } else {
            Err(Error::FieldMismatch { left: self.field, right: field })
        }
    }

    pub const fn field(&self) -> Field {
        self.field
    }

    /// Coordinates on `1, i, j, k`, truncated to the field dimension.
    pub fn coords(&self) -> &[f64] {
        &self.c[..self.field.dim()]
    }

    pub const fn components(&self) -> [f64; 4] {
        self.c
    }

    /// Real part.
    pub const fn re(&self) -> f64 {
        self.c[0]
    }

    /// Imaginary part, as a scalar with zero real part.
    pub const fn im(&self) -> Scalar {
        Scalar { field: self.field, c: [0.0, self.c[1], self.c[2], self.c[3]] }
    }

    pub const fn conj(&self) -> Scalar {
        Scalar { field: self.field, c: [self.c[0], -self.c[1], -self.c[2], -self.c[3]] }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|x| x * x).sum()
    }

    pub fn norm(&self) -> f64 {
        float::sqrt(self.norm_sqr())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }

    /// Multiplicative inverse `|x|⁻² conj(x)`.
    pub fn inv(&self) -> Result<Scalar> {
        let n = self.norm_sqr();
        if n == 0.0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.conj().scale(1.0 / n))
    }

    pub fn scale(&self, s: f64) -> Scalar {
        Scalar { field: self.field, c: [self.c[0] * s, self.c[1] * s, self.c[2] * s, self.c[3] * s] }
    }

    /// Euclidean inner product `Re(x conj(y))` of the underlying real vectors.
    pub fn dot(&self, other: &Scalar) -> f64 {
        (0..4).map(|k| self.c[k] * other.c[k]).sum()
    }

    /// Product that refuses scalars from different fields.
    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(*self * *other)
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(*self + *other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(*self - *other)
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch { left: self.field, right: other.field })
        }
    }

    /// Whether `self` commutes with every element of its field.
    pub fn is_central(&self, tol: f64) -> bool {
        match self.field {
            Field::Quaternion => self.im().norm() <= tol,
            _ => true,
        }
    }

    /// Whether `self` is a unit that commutes with the whole field.
    pub fn is_central_unit(&self, tol: f64) -> bool {
        (self.norm() - 1.0).abs() <= tol && self.is_central(tol)
    }

    /// Largest coordinate difference, used for approximate comparisons.
    pub fn max_abs_diff(&self, other: &Scalar) -> f64 {
        (0..4).map(|k| (self.c[k] - other.c[k]).abs()).fold(0.0, f64::max)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        Scalar {
            field: self.field.max(o.field),
            c: [self.c[0] + o.c[0], self.c[1] + o.c[1], self.c[2] + o.c[2], self.c[3] + o.c[3]],
        }
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self + (-o)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(-1.0)
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = *self + o;
    }
}

impl SubAssign for Scalar {
    fn sub_assign(&mut self, o: Scalar) {
        *self = *self - o;
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        let [a1, b1, c1, d1] = self.c;
        let [a2, b2, c2, d2] = o.c;
        Scalar {
            field: self.field.max(o.field),
            c: [
                a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
            ],
        }
    }
}

impl Mul<f64> for Scalar {
    type Output = Scalar;
    fn mul(self, s: f64) -> Scalar {
        self.scale(s)
    }
}

impl Div<f64> for Scalar {
    type Output = Scalar;
    fn div(self, s: f64) -> Scalar {
        self.scale(1.0 / s)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "i", "j", "k"];
        write!(f, "{}", self.c[0])?;
        for k in 1..self.field.dim() {
            let x = self.c[k];
            if x < 0.0 {
                write!(f, " - {}{}", -x, names[k])?;
            } else {
                write!(f, " + {}{}", x, names[k])?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Scalar = Scalar::quaternion(0.0, 1.0, 0.0, 0.0);
    const J: Scalar = Scalar::quaternion(0.0, 0.0, 1.0, 0.0);
    const K: Scalar = Scalar::quaternion(0.0, 0.0, 0.0, 1.0);

    #[test]
    fn quaternion_units() {
        assert_eq!(I * J, K);
        assert_eq!(J * K, I);
        assert_eq!(K * I, J);
        assert_eq!(J * I, -K);
        assert_eq!(I * I, -Scalar::one(Field::Quaternion));
        assert_eq!((I * J).conj(), -K);
    }

    #[test]
    fn complex_examples() {
        let a = Scalar::complex(1.0, 1.0);
        let b = Scalar::complex(1.0, -1.0);
        assert_eq!(a * b, Scalar::complex(2.0, 0.0));
        assert_eq!(a.inv().unwrap(), Scalar::complex(0.5, -0.5));
    }

    #[test]
    fn zero_has_no_inverse() {
        assert_eq!(Scalar::zero(Field::Complex).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn strict_ops_reject_mixed_fields() {
        let r = Scalar::real(2.0);
        let c = Scalar::complex(0.0, 1.0);
        assert!(matches!(r.try_mul(&c), Err(Error::FieldMismatch { .. })));
        assert_eq!((r * c).field(), Field::Complex);
    }

    #[test]
    fn centrality() {
        assert!(Scalar::complex(0.6, 0.8).is_central_unit(1e-12));
        assert!(!K.is_central_unit(1e-12));
        assert!((-Scalar::one(Field::Quaternion)).is_central_unit(1e-12));
        assert_eq!(Field::Complex.central_units(), CentralUnits::Circle);
    }

    #[test]
    fn embedding() {
        assert!(Scalar::complex(1.0, 2.0).embed(Field::Real).is_err());
        assert_eq!(Scalar::complex(1.0, 0.0).embed(Field::Real).unwrap(), Scalar::real(1.0));
    }
}
