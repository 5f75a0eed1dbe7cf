//! Point types for the Siegel domain `H`, the domain `D`, and the unit ball,
//! with the maps between them.
//!
//! `H = {(ζ, v) : Re ζ > ½|v|²}` is the working model. `D` uses the
//! normalization `Re ζ > ¼|v|²` and is reached through `(ζ, v) ↦ (ζ, √2 v)`.

use crate::error::{Error, Result};
use crate::float;
use crate::jmodule::{beta3, bracket_unchecked, CvPair, ModuleVector};
use crate::scalar::{Field, Scalar};

/// Absolute height tolerance used to recognise boundary points.
pub const BOUNDARY_HEIGHT_TOL: f64 = 1e-9;

const SQRT2: f64 = core::f64::consts::SQRT_2;

/// `Re ζ − ½|v|²`.
pub fn siegel_height(p: &CvPair) -> f64 {
    p.zeta.re() - 0.5 * p.v.norm_sqr()
}

/// Point of the closure of `H` in the one-point compactification.
///
/// Boundary points are tagged explicitly; the tag is set at construction and
/// preserved by isometries.
#[derive(Clone, Debug, PartialEq)]
pub enum HPoint {
    Interior(CvPair),
    Boundary(CvPair),
    Infinity,
}

impl HPoint {
    /// Interior point; fails unless the height is positive.
    pub fn interior(zeta: Scalar, v: ModuleVector) -> Result<HPoint> {
        let p = CvPair::new(zeta, v);
        let height = siegel_height(&p);
        if height > 0.0 {
            Ok(HPoint::Interior(p))
        } else {
            Err(Error::OutsideDomain { height })
        }
    }

    /// Boundary point; the height must vanish within [`BOUNDARY_HEIGHT_TOL`].
    pub fn boundary(zeta: Scalar, v: ModuleVector) -> Result<HPoint> {
        let p = CvPair::new(zeta, v);
        let height = siegel_height(&p);
        if height.abs() <= BOUNDARY_HEIGHT_TOL {
            Ok(HPoint::Boundary(p))
        } else {
            Err(Error::NotOnBoundary { height })
        }
    }

    /// The boundary point with Heisenberg coordinates `(Z, u)`:
    /// `(½|u|² + Z, u)` for imaginary `Z`.
    pub fn boundary_from_heisenberg(z: Scalar, u: ModuleVector) -> HPoint {
        let zeta = Scalar::real(0.5 * u.norm_sqr()) + z.im();
        HPoint::Boundary(CvPair::new(zeta, u))
    }

    /// Tags raw coordinates as interior or boundary using `tol` on the height.
    pub fn classify(p: CvPair, tol: f64) -> Result<HPoint> {
        let height = siegel_height(&p);
        if height > tol {
            Ok(HPoint::Interior(p))
        } else if height >= -tol {
            Ok(HPoint::Boundary(p))
        } else {
            Err(Error::OutsideDomain { height })
        }
    }

    /// The base point `(1, 0)`.
    pub fn base_point(field: Field, v_len: usize) -> HPoint {
        HPoint::Interior(CvPair { zeta: Scalar::one(field), v: ModuleVector::zeros(field, v_len) })
    }

    /// The boundary point `0`.
    pub fn origin(field: Field, v_len: usize) -> HPoint {
        HPoint::Boundary(CvPair::zero(field, v_len))
    }

    pub fn coords(&self) -> Option<&CvPair> {
        match self {
            HPoint::Interior(p) | HPoint::Boundary(p) => Some(p),
            HPoint::Infinity => None,
        }
    }

    pub fn finite(&self) -> Result<&CvPair> {
        self.coords().ok_or(Error::AtInfinity)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, HPoint::Infinity)
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, HPoint::Boundary(_))
    }

    pub fn is_interior(&self) -> bool {
        matches!(self, HPoint::Interior(_))
    }

    /// Same tag, new coordinates.
    pub(crate) fn with_coords(&self, p: CvPair) -> HPoint {
        match self {
            HPoint::Boundary(_) => HPoint::Boundary(p),
            _ => HPoint::Interior(p),
        }
    }

    /// Largest coordinate difference; `∞` only matches `∞`.
    pub fn max_abs_diff(&self, other: &HPoint) -> f64 {
        match (self.coords(), other.coords()) {
            (Some(a), Some(b)) => a.max_abs_diff(b),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

/// `height^H(z) = Re ζ − ½|v|²`.
pub fn height_h(z: &HPoint) -> Result<f64> {
    Ok(siegel_height(z.finite()?))
}

/// Point of `D` (or of its finite boundary).
#[derive(Clone, Debug, PartialEq)]
pub struct DPoint {
    pub zeta: Scalar,
    pub v: ModuleVector,
}

impl DPoint {
    pub fn new(zeta: Scalar, v: ModuleVector) -> DPoint {
        let p = CvPair::new(zeta, v);
        DPoint { zeta: p.zeta, v: p.v }
    }

    /// `Re ζ − ¼|v|²`.
    pub fn height(&self) -> f64 {
        self.zeta.re() - 0.25 * self.v.norm_sqr()
    }

    pub fn pair(&self) -> CvPair {
        CvPair { zeta: self.zeta, v: self.v.clone() }
    }

    pub fn max_abs_diff(&self, o: &DPoint) -> f64 {
        self.zeta.max_abs_diff(&o.zeta).max(self.v.max_abs_diff(&o.v))
    }
}

/// `(ζ, v) ↦ (ζ, √2 v)`.
pub fn h_to_d(z: &HPoint) -> Result<DPoint> {
    let p = z.finite()?;
    Ok(DPoint { zeta: p.zeta, v: p.v.scale(SQRT2) })
}

/// Inverse of [`h_to_d`]; the tag is chosen from the height with
/// [`BOUNDARY_HEIGHT_TOL`].
pub fn d_to_h(d: &DPoint) -> Result<HPoint> {
    HPoint::classify(CvPair { zeta: d.zeta, v: d.v.scale(1.0 / SQRT2) }, BOUNDARY_HEIGHT_TOL)
}

/// Horospherical coordinates `(t, Z, X)`: height, imaginary part of `ζ`, and
/// the module part. With `t > 0` they are also elements of the solvable group
/// `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct HCoords {
    pub height: f64,
    pub z: Scalar,
    pub x: ModuleVector,
}

impl HCoords {
    pub fn identity(field: Field, v_len: usize) -> HCoords {
        HCoords { height: 1.0, z: Scalar::zero(field), x: ModuleVector::zeros(field, v_len) }
    }

    /// Back to `D`: `(t + ¼|X|² + Z, X)`.
    pub fn to_d(&self) -> DPoint {
        DPoint { zeta: Scalar::real(self.height + 0.25 * self.x.norm_sqr()) + self.z.im(), v: self.x.clone() }
    }

    pub fn max_abs_diff(&self, o: &HCoords) -> f64 {
        (self.height - o.height).abs().max(self.z.max_abs_diff(&o.z)).max(self.x.max_abs_diff(&o.x))
    }
}

/// `(ζ, X) ↦ (Re ζ − ¼|X|², Im ζ, X)`.
pub fn h_coordinates(d: &DPoint) -> HCoords {
    HCoords { height: d.height(), z: d.zeta.im(), x: d.v.clone() }
}

/// Group law of `S`:
/// `(t₁t₂, Z₁ + t₁Z₂ + ½t₁^{1/2}[X₁, X₂], X₁ + t₁^{1/2}X₂)`.
pub fn s_group_mul(a: &HCoords, b: &HCoords) -> Result<HCoords> {
    if a.height <= 0.0 || b.height <= 0.0 {
        return Err(Error::NonPositiveDilation(a.height.min(b.height)));
    }
    let r = float::sqrt(a.height);
    let bracket = bracket_unchecked(&a.x, &b.x);
    Ok(HCoords {
        height: a.height * b.height,
        z: a.z + b.z.scale(a.height) + bracket.scale(0.5 * r),
        x: &a.x + &b.x.scale(r),
    })
}

/// `(t, Z, X)⁻¹ = (t⁻¹, −t⁻¹Z, −t^{−1/2}X)`.
pub fn s_group_inv(a: &HCoords) -> Result<HCoords> {
    if a.height <= 0.0 {
        return Err(Error::NonPositiveDilation(a.height));
    }
    Ok(HCoords { height: 1.0 / a.height, z: a.z.scale(-1.0 / a.height), x: a.x.scale(-1.0 / float::sqrt(a.height)) })
}

/// Action of `s = (t, Z, X) ∈ S` on a point of `D`, in closed form.
pub fn s_act(s: &HCoords, p: &DPoint) -> DPoint {
    let r = float::sqrt(s.height);
    let zeta = Scalar::real(s.height * p.zeta.re() + 0.25 * s.x.norm_sqr() + 0.5 * r * s.x.dot(&p.v))
        + s.z
        + p.zeta.im().scale(s.height)
        + bracket_unchecked(&s.x, &p.v).scale(0.5 * r);
    DPoint { zeta, v: &s.x + &p.v.scale(r) }
}

/// Point of the open unit ball in `C ⊕ V`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint {
    pub w: CvPair,
}

impl BallPoint {
    pub fn new(w: CvPair) -> Result<BallPoint> {
        let norm = w.norm();
        if norm < 1.0 {
            Ok(BallPoint { w })
        } else {
            Err(Error::OutsideBall { norm })
        }
    }
}

/// Cayley transform from the ball to `D`:
/// `(ζ, v) ↦ (1 − ζ)⁻¹(1 + ζ, 2v)`.
pub fn cayley(b: &BallPoint) -> DPoint {
    cayley_pair(&b.w).expect("interior ball points avoid the pole")
}

/// Cayley transform on the closed ball; `None` at the pole `(1, 0)`, which
/// goes to `∞`.
pub fn cayley_pair(w: &CvPair) -> Option<DPoint> {
    let one = Scalar::one(w.field());
    let denom = one - w.zeta;
    let d = denom.norm_sqr();
    if d == 0.0 {
        return None;
    }
    let zeta = (one + w.zeta.im().scale(2.0) - Scalar::real(w.zeta.norm_sqr())).scale(1.0 / d);
    let v = w.v.left_mul(&denom.conj()).scale(2.0 / d);
    Some(DPoint { zeta, v })
}

/// Inverse Cayley transform:
/// `(η, u) ↦ |1 + η|⁻²(−1 + 2 Im η + |η|², (1 + conj η)u)`.
pub fn cayley_inv(d: &DPoint) -> Result<BallPoint> {
    let one = Scalar::one(d.zeta.field());
    let plus = one + d.zeta;
    let n = plus.norm_sqr();
    if n == 0.0 {
        return Err(Error::DivisionByZero);
    }
    let zeta = (Scalar::real(d.zeta.norm_sqr() - 1.0) + d.zeta.im().scale(2.0)).scale(1.0 / n);
    let v = d.v.left_mul(&plus.conj()).scale(1.0 / n);
    Ok(BallPoint { w: CvPair { zeta, v } })
}

/// Geodesic inversion `(ζ, v) ↦ ζ⁻¹(1, −v)` on the compactified domain, with
/// `0 ↔ ∞`. `∞` goes to the origin of the given shape.
pub fn geodesic_inversion(z: &HPoint, field: Field, v_len: usize) -> HPoint {
    invert_with(z, 0.0).unwrap_or_else(|| HPoint::origin(field, v_len))
}

/// Finite-point part of the inversion. Boundary points with
/// `|ζ| ≤ zero_tol` count as the origin and go to `∞`; `None` for `∞`.
pub(crate) fn invert_with(z: &HPoint, zero_tol: f64) -> Option<HPoint> {
    match z {
        HPoint::Infinity => None,
        HPoint::Boundary(p) if p.zeta.norm() <= zero_tol || p.zeta.is_zero() => Some(HPoint::Infinity),
        HPoint::Interior(p) | HPoint::Boundary(p) => {
            let inv = p.zeta.inv().expect("non-zero first coordinate");
            Some(z.with_coords(CvPair { zeta: inv, v: -&p.v.left_mul(&inv) }))
        }
    }
}

/// The same formula on interior points of `D`.
pub fn geodesic_inversion_d(d: &DPoint) -> Result<DPoint> {
    let inv = d.zeta.inv()?;
    Ok(DPoint { zeta: inv, v: -&d.v.left_mul(&inv) })
}

/// Orthogonal projection of `x` onto the real span `C·w`.
fn project_on_line(x: &CvPair, w: &CvPair) -> CvPair {
    let n = w.norm_sqr();
    let field = w.field();
    let mut out = CvPair::zero(field, w.v.len());
    if n == 0.0 {
        return out;
    }
    for k in 0..field.dim() {
        let basis = w.left_mul(&field.basis(k));
        out = out.add(&basis.scale(x.dot(&basis) / n));
    }
    out
}

/// Riemannian metric of the ball at `w`: `4⟨X, Y⟩/(1 − |w|²)²` on `C·w` and
/// `4⟨X, Y⟩/(1 − |w|²)` on its orthogonal complement.
pub fn ball_metric(w: &BallPoint, x: &CvPair, y: &CvPair) -> f64 {
    let s = 1.0 - w.w.norm_sqr();
    let (x1, y1) = (project_on_line(x, &w.w), project_on_line(y, &w.w));
    let (x2, y2) = (x.sub(&x1), y.sub(&y1));
    4.0 * x1.dot(&y1) / (s * s) + 4.0 * x2.dot(&y2) / s
}

/// `⟨X, Y⟩/(1 − |p|²) + ⟨β₃(X, p), β₃(Y, p)⟩/(1 − |p|²)²`.
pub fn tilde_rho(p: &BallPoint, x: &CvPair, y: &CvPair) -> Result<f64> {
    let s = 1.0 - p.w.norm_sqr();
    let bx = beta3(x, &p.w)?;
    let by = beta3(y, &p.w)?;
    Ok(x.dot(y) / s + bx.dot(&by) / (s * s))
}

/// `ν(t, Z) = (t² + |Z|², 2Z)`, defined for the real field only.
pub fn nu(t: f64, z: &ModuleVector) -> Result<DPoint> {
    if z.field() != Field::Real {
        return Err(Error::RealFieldOnly);
    }
    if t <= 0.0 {
        return Err(Error::NonPositiveDilation(t));
    }
    Ok(DPoint { zeta: Scalar::real(t * t + z.norm_sqr()), v: z.scale(2.0) })
}

/// Inverse of [`nu`]: `Z = X/2`, `t = (u − |Z|²)^{1/2}`.
pub fn nu_inv(d: &DPoint) -> Result<(f64, ModuleVector)> {
    if d.zeta.field() != Field::Real {
        return Err(Error::RealFieldOnly);
    }
    let z = d.v.scale(0.5);
    let t2 = d.zeta.re() - z.norm_sqr();
    if t2 <= 0.0 {
        return Err(Error::OutsideDomain { height: t2 });
    }
    Ok((float::sqrt(t2), z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn real_point(zeta: f64, v: &[f64]) -> HPoint {
        HPoint::interior(Scalar::real(zeta), ModuleVector::from_reals(Field::Real, v)).unwrap()
    }

    #[test]
    fn height_examples() {
        assert_eq!(height_h(&real_point(1.0, &[0.0])).unwrap(), 1.0);
        let b = HPoint::boundary(Scalar::real(1.0), ModuleVector::from_reals(Field::Real, &[1.0, 1.0])).unwrap();
        assert_eq!(height_h(&b).unwrap(), 0.0);
        let c = HPoint::interior(Scalar::complex(2.0, 1.0), ModuleVector::zeros(Field::Complex, 1)).unwrap();
        assert_eq!(height_h(&c).unwrap(), 2.0);
        assert_eq!(height_h(&HPoint::Infinity), Err(Error::AtInfinity));
        assert!(HPoint::interior(Scalar::real(0.4), ModuleVector::from_reals(Field::Real, &[1.0])).is_err());
    }

    #[test]
    fn beta_map_examples() {
        let d = h_to_d(&real_point(1.0, &[1.0])).unwrap();
        assert_eq!(d.zeta, Scalar::real(1.0));
        assert!((d.v.get(0).re() - SQRT2).abs() < 1e-15);
        let back = d_to_h(&d).unwrap();
        assert!(back.max_abs_diff(&real_point(1.0, &[1.0])) < 1e-15);
    }

    #[test]
    fn horospherical_examples() {
        let o = DPoint::new(Scalar::real(1.0), ModuleVector::zeros(Field::Real, 1));
        assert_eq!(h_coordinates(&o).height, 1.0);
        let x = ModuleVector::from_reals(Field::Complex, &[2.0, 0.0]);
        let p = DPoint::new(Scalar::complex(2.0, 0.5), x.clone());
        let h = h_coordinates(&p);
        assert_eq!(h.height, 1.0);
        assert_eq!(h.z, Scalar::complex(0.0, 0.5));
        let boundary = HCoords { height: 0.0, z: Scalar::zero(Field::Complex), x: x.clone() }.to_d();
        assert_eq!(boundary.zeta, Scalar::complex(1.0, 0.0));
        assert_eq!(h_coordinates(&h.to_d()), h);
    }

    #[test]
    fn cayley_examples() {
        let zero = BallPoint::new(CvPair::zero(Field::Complex, 1)).unwrap();
        let o = cayley(&zero);
        assert_eq!(o.zeta, Scalar::complex(1.0, 0.0));
        assert!(o.v.norm() == 0.0);
        let back = cayley_inv(&o).unwrap();
        assert!(back.w.norm() < 1e-16);
        let p = BallPoint::new(CvPair::new(Scalar::complex(0.0, 0.5), ModuleVector::zeros(Field::Complex, 1))).unwrap();
        let d = cayley(&p);
        assert!(d.zeta.max_abs_diff(&Scalar::complex(0.6, 0.8)) < 1e-15);
        let pole = CvPair::new(Scalar::one(Field::Complex), ModuleVector::zeros(Field::Complex, 1));
        assert!(cayley_pair(&pole).is_none());
    }

    #[test]
    fn inversion_examples() {
        let z = real_point(2.0, &[0.0]);
        let s = geodesic_inversion(&z, Field::Real, 1);
        assert!(s.max_abs_diff(&real_point(0.5, &[0.0])) < 1e-16);
        assert_eq!(geodesic_inversion(&HPoint::Infinity, Field::Real, 1), HPoint::origin(Field::Real, 1));
        assert_eq!(geodesic_inversion(&HPoint::origin(Field::Real, 1), Field::Real, 1), HPoint::Infinity);
    }

    #[test]
    fn s_group_examples() {
        let x = ModuleVector::from_reals(Field::Complex, &[1.0]);
        let a = HCoords { height: 4.0, z: Scalar::zero(Field::Complex), x: x.clone() };
        let b = HCoords { height: 1.0, z: Scalar::zero(Field::Complex), x: x.clone() };
        let ab = s_group_mul(&a, &b).unwrap();
        assert_eq!(ab.height, 4.0);
        assert!(ab.z.is_zero());
        assert!(ab.x.max_abs_diff(&x.scale(3.0)) < 1e-15);
        let id = HCoords::identity(Field::Complex, 1);
        assert_eq!(s_group_mul(&a, &id).unwrap(), a);
        let inv = s_group_inv(&a).unwrap();
        assert!(s_group_mul(&a, &inv).unwrap().max_abs_diff(&id) < 1e-15);
        assert!(s_group_mul(&a, &HCoords { height: 0.0, ..id }).is_err());
    }

    #[test]
    fn ball_metric_examples() {
        let zero = BallPoint::new(CvPair::zero(Field::Complex, 1)).unwrap();
        let x = CvPair::new(Scalar::complex(0.3, -0.2), ModuleVector::from_reals(Field::Complex, &[0.5]));
        assert!((ball_metric(&zero, &x, &x) - 4.0 * x.norm_sqr()).abs() < 1e-15);
        let w = BallPoint::new(CvPair::new(Scalar::complex(0.2, 0.1), ModuleVector::from_reals(Field::Complex, &[0.3]))).unwrap();
        let along = w.w.left_mul(&Scalar::complex(0.4, 0.7));
        // β₃(perp, w) = 0, so perp is orthogonal to every multiple of w.
        let perp = CvPair::new(Scalar::complex(-0.18, -0.24), ModuleVector::new(Field::Complex, vec![Scalar::complex(0.2, 0.1)]).unwrap());
        assert!(beta3(&perp, &w.w).unwrap().norm() < 1e-15);
        assert!(ball_metric(&w, &along, &perp).abs() < 1e-14);
    }

    #[test]
    fn nu_examples() {
        let zero = ModuleVector::zeros(Field::Real, 1);
        assert_eq!(nu(1.0, &zero).unwrap().zeta, Scalar::real(1.0));
        assert_eq!(nu(2.0, &zero).unwrap().zeta, Scalar::real(4.0));
        let z = ModuleVector::from_reals(Field::Real, &[1.0]);
        let d = nu(1.0, &z).unwrap();
        assert_eq!(d.zeta, Scalar::real(2.0));
        assert_eq!(d.v, z.scale(2.0));
        let (t, back) = nu_inv(&d).unwrap();
        assert!((t - 1.0).abs() < 1e-15 && back == z);
        assert_eq!(nu(1.0, &ModuleVector::zeros(Field::Complex, 1)), Err(Error::RealFieldOnly));
    }
}
