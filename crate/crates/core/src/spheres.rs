//! Isometric spheres: for `g` not fixing `∞`, the Cygan sphere about `g⁻¹∞`
//! of radius `t^{−1/4}`, where `t` is the dilation in the Bruhat form of `g`.

use alloc::string::String;

use crate::cygan::cygan_h;
use crate::error::{Error, Result};
use crate::float;
use crate::isometries::{cocycle_j, BruhatIsometry, Isometry, MatrixLift};
use crate::models::{height_h, HPoint};

/// Band on `ρ/R − 1` inside which a point counts as lying on a sphere.
pub const SPHERE_BAND: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct IsometricSphere {
    /// Boundary point `g⁻¹∞`.
    pub center: HPoint,
    pub radius: f64,
    pub word: Option<String>,
}

/// Position of a point relative to a sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SphereSide {
    Interior,
    On,
    Exterior,
}

impl SphereSide {
    /// Side of a distance ratio `ρ/R`, with `band` around 1.
    pub fn of_ratio(ratio: f64, band: f64) -> SphereSide {
        if (ratio - 1.0).abs() < band {
            SphereSide::On
        } else if ratio < 1.0 {
            SphereSide::Interior
        } else {
            SphereSide::Exterior
        }
    }
}

impl IsometricSphere {
    pub fn with_word(mut self, word: impl Into<String>) -> IsometricSphere {
        self.word = Some(word.into());
        self
    }

    /// `ρ(z, center)/R`; infinite at `∞`.
    pub fn ratio(&self, z: &HPoint) -> Result<f64> {
        if z.is_infinity() {
            return Ok(f64::INFINITY);
        }
        Ok(cygan_h(z, &self.center)? / self.radius)
    }

    pub fn classify(&self, z: &HPoint) -> Result<SphereSide> {
        self.classify_with(z, SPHERE_BAND)
    }

    pub fn classify_with(&self, z: &HPoint, band: f64) -> Result<SphereSide> {
        Ok(SphereSide::of_ratio(self.ratio(z)?, band))
    }

    /// Sphere of `h∘g∘h⁻¹` for `h` fixing `∞`: the center moves by `h` and
    /// the radius scales by `s^{1/2}` when `h` dilates by `s`.
    pub fn conjugated_by(&self, h: &BruhatIsometry) -> Result<IsometricSphere> {
        if !h.fixes_infinity() {
            return Err(Error::NonStabilizer);
        }
        Ok(IsometricSphere { center: h.act(&self.center), radius: self.radius * float::sqrt(h.t), word: None })
    }
}

/// Sphere from Bruhat data; the center is `n₂⁻¹(0)`.
pub fn isometric_sphere_bruhat(g: &BruhatIsometry) -> Result<IsometricSphere> {
    let radius = g.radius().ok_or(Error::StabilizerElement)?;
    let center = HPoint::Boundary(g.n2.inverse().apply(&crate::jmodule::CvPair::zero(g.field(), g.v_len())));
    Ok(IsometricSphere { center, radius, word: None })
}

/// Sphere of a matrix lift: radius from the cocycle at `∞`, center as the
/// image of `∞` under the inverse. Works for any isometry, including
/// quaternionic products that leave the Bruhat-representable class.
pub fn isometric_sphere(g: &MatrixLift) -> Result<IsometricSphere> {
    if g.fixes_infinity() {
        return Err(Error::StabilizerElement);
    }
    let radius = radius_via_cocycle(g)?;
    Ok(IsometricSphere { center: g.preimage_of_infinity(), radius, word: None })
}

/// `R(g) = |j(g⁻¹, ∞)|^{−1/2}`, read off the matrix alone.
pub fn radius_via_cocycle(g: &MatrixLift) -> Result<f64> {
    match cocycle_j(&g.inverse(), &HPoint::Infinity) {
        Ok(j) => Ok(1.0 / float::sqrt(j.modulus)),
        Err(Error::CocycleUndefined) => Err(Error::StabilizerElement),
        Err(e) => Err(e),
    }
}

/// Side of `z` relative to `I(g)` from the cocycle alone:
/// `|j(g, z)|^{1/2} = ρ(z, g⁻¹∞)/R(g)`.
pub fn classify_by_cocycle(g: &MatrixLift, z: &HPoint, band: f64) -> Result<SphereSide> {
    if g.fixes_infinity() {
        return Err(Error::StabilizerElement);
    }
    if z.is_infinity() {
        return Ok(SphereSide::Exterior);
    }
    let j = match cocycle_j(g, z) {
        Ok(j) => j.modulus,
        // gz = ∞ only for z = g⁻¹∞, the center itself.
        Err(Error::CocycleUndefined) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(SphereSide::of_ratio(float::sqrt(j), band))
}

/// `ρ(z, g⁻¹∞) = |first coordinate of n₂(z)|^{1/2}`.
pub fn dist_to_center(g: &BruhatIsometry, z: &HPoint) -> Result<f64> {
    if g.fixes_infinity() {
        return Err(Error::StabilizerElement);
    }
    let p = g.n2.apply(z.finite()?);
    Ok(float::sqrt(p.zeta.norm()))
}

/// Predicted `height(gz) = height(z)·(R(g)/ρ(z, g⁻¹∞))⁴`.
pub fn height_transform(g: &BruhatIsometry, z: &HPoint) -> Result<f64> {
    let radius = g.radius().ok_or(Error::StabilizerElement)?;
    let rho = dist_to_center(g, z)?;
    let q = radius / rho;
    Ok(height_h(z)? * q * q * q * q)
}

/// Sphere of `h∘g∘h⁻¹` from the sphere of `g`, for `h` fixing `∞`.
pub fn conjugate_sphere(h: &BruhatIsometry, g: &MatrixLift) -> Result<IsometricSphere> {
    if !h.fixes_infinity() {
        return Err(Error::NonStabilizer);
    }
    isometric_sphere(g)?.conjugated_by(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isometries::Translation;
    use crate::jmodule::ModuleVector;
    use crate::scalar::{Field, Scalar};

    fn pt(zeta: f64) -> HPoint {
        HPoint::interior(Scalar::real(zeta), ModuleVector::zeros(Field::Real, 1)).unwrap()
    }

    #[test]
    fn sphere_examples() {
        let s = BruhatIsometry::sigma(Field::Real, 1);
        let sphere = isometric_sphere(&s.lift()).unwrap();
        assert_eq!(sphere.center, HPoint::origin(Field::Real, 1));
        assert_eq!(sphere.radius, 1.0);

        let a4 = BruhatIsometry::dilation(Field::Real, 1, 4.0).unwrap();
        let g = s.lift().compose(&a4.lift());
        let sphere = isometric_sphere(&g).unwrap();
        assert!(sphere.center.max_abs_diff(&HPoint::origin(Field::Real, 1)) < 1e-15);
        assert!((sphere.radius - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((radius_via_cocycle(&g).unwrap() - sphere.radius).abs() < 1e-15);

        let c = Translation::from_heisenberg(Scalar::zero(Field::Real), ModuleVector::from_reals(Field::Real, &[1.0]));
        let tc = BruhatIsometry::translation(c.clone()).lift();
        let g = tc.compose(&s.lift());
        assert!(isometric_sphere(&g).unwrap().center.max_abs_diff(&HPoint::origin(Field::Real, 1)) < 1e-15);
        let back = isometric_sphere(&g.inverse()).unwrap();
        assert!(back.center.max_abs_diff(&HPoint::Boundary(crate::jmodule::CvPair::new(c.tau0, c.u0))) < 1e-15);

        assert_eq!(isometric_sphere(&a4.lift()), Err(Error::StabilizerElement));
    }

    #[test]
    fn classification_examples() {
        let s = BruhatIsometry::sigma(Field::Real, 1);
        let sphere = isometric_sphere(&s.lift()).unwrap();
        assert_eq!(sphere.classify(&pt(0.25)).unwrap(), SphereSide::Interior);
        assert_eq!(sphere.classify(&pt(4.0)).unwrap(), SphereSide::Exterior);
        assert_eq!(sphere.classify(&pt(1.0)).unwrap(), SphereSide::On);
        for z in [0.25, 4.0, 1.0] {
            assert_eq!(classify_by_cocycle(&s.lift(), &pt(z), SPHERE_BAND).unwrap(), sphere.classify(&pt(z)).unwrap());
        }
    }

    #[test]
    fn distance_and_height_examples() {
        let s = BruhatIsometry::sigma(Field::Real, 1);
        assert!((dist_to_center(&s, &pt(9.0)).unwrap() - 3.0).abs() < 1e-15);
        assert!((height_transform(&s, &pt(0.25)).unwrap() - 4.0).abs() < 1e-14);
        assert!((height_transform(&s, &pt(1.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conjugation_examples() {
        let s = BruhatIsometry::sigma(Field::Real, 1).lift();
        let a4 = BruhatIsometry::dilation(Field::Real, 1, 4.0).unwrap();
        let c = conjugate_sphere(&a4, &s).unwrap();
        assert!((c.radius - 2.0).abs() < 1e-15);
        assert!(c.center.max_abs_diff(&HPoint::origin(Field::Real, 1)) < 1e-15);
        let direct = isometric_sphere(&a4.lift().compose(&s).compose(&a4.inverse().lift())).unwrap();
        assert!((direct.radius - 2.0).abs() < 1e-14);
        assert_eq!(conjugate_sphere(&BruhatIsometry::sigma(Field::Real, 1), &s), Err(Error::NonStabilizer));
    }
}
