//! Random points and group elements for property checks and region
//! verification. Every generator takes the RNG explicitly, so results are
//! reproducible from a seed.

use alloc::vec::Vec;

use rand::Rng;

use crate::float;
use crate::isometries::{BruhatIsometry, Rotation, Translation};
use crate::jmodule::{beta2_unchecked, CvPair, ModuleVector};
use crate::matrix::ScalarMatrix;
use crate::models::{BallPoint, HPoint};
use crate::scalar::{Field, Scalar};

/// Scalar with coordinates uniform in `[-r, r]`.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: Field, r: f64) -> Scalar {
    let c: Vec<f64> = (0..field.dim()).map(|_| rng.random_range(-r..=r)).collect();
    Scalar::from_coords(field, &c).unwrap()
}

/// Purely imaginary scalar with coordinates uniform in `[-r, r]`.
pub fn imaginary<R: Rng + ?Sized>(rng: &mut R, field: Field, r: f64) -> Scalar {
    scalar(rng, field, r).im()
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, r: f64) -> ModuleVector {
    ModuleVector::new(field, (0..len).map(|_| scalar(rng, field, r)).collect()).unwrap()
}

/// `exp` of a uniform sample in `[ln lo, ln hi]`.
pub fn log_uniform<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    float::exp(rng.random_range(float::ln(lo)..=float::ln(hi)))
}

/// Interior point with Heisenberg coordinates in `[-r, r]` and height
/// log-uniform in `[h_lo, h_hi]`.
pub fn interior_point<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, r: f64, h_lo: f64, h_hi: f64) -> HPoint {
    let v = vector(rng, field, len, r);
    let z = imaginary(rng, field, r);
    let h = log_uniform(rng, h_lo, h_hi);
    let zeta = Scalar::real(h + 0.5 * v.norm_sqr()) + z;
    HPoint::Interior(CvPair::new(zeta, v))
}

/// Boundary point with Heisenberg coordinates in `[-r, r]`.
pub fn boundary_point<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, r: f64) -> HPoint {
    HPoint::boundary_from_heisenberg(imaginary(rng, field, r), vector(rng, field, len, r))
}

/// Point of the open ball with norm below `max_norm`.
pub fn ball_point<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, max_norm: f64) -> BallPoint {
    loop {
        let w = CvPair::new(scalar(rng, field, 1.0), vector(rng, field, len, 1.0));
        let n = w.norm();
        if n > 1e-6 {
            let target = max_norm * rng.random_range(0.0..1.0f64);
            return BallPoint::new(w.scale(target / n)).unwrap();
        }
    }
}

pub fn translation<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, r: f64) -> Translation {
    Translation::from_heisenberg(imaginary(rng, field, r), vector(rng, field, len, r))
}

/// Unitary matrix from Gram–Schmidt on random rows, orthonormal for
/// `β₂(a, b) = a b*`.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize) -> Rotation {
    loop {
        let mut rows: Vec<ModuleVector> = Vec::with_capacity(len);
        let mut ok = true;
        for _ in 0..len {
            let mut r = vector(rng, field, len, 1.0);
            for prev in &rows {
                let c = beta2_unchecked(&r, prev);
                r = &r - &prev.left_mul(&c);
            }
            let n = r.norm();
            if n < 1e-3 {
                ok = false;
                break;
            }
            rows.push(r.scale(1.0 / n));
        }
        if ok {
            let m = ScalarMatrix::from_rows(field, rows.iter().map(|r| r.entries().to_vec()).collect()).unwrap();
            if let Ok(rot) = Rotation::new(m) {
                return rot;
            }
        }
    }
}

/// Random element in Bruhat form with translations of size `r` and `t`
/// log-uniform in `[1/4, 4]`.
pub fn bruhat<R: Rng + ?Sized>(rng: &mut R, field: Field, len: usize, inversion: bool, r: f64) -> BruhatIsometry {
    let n1 = if inversion { translation(rng, field, len, r) } else { Translation::identity(field, len) };
    let rot = rotation(rng, field, len);
    let t = log_uniform(rng, 0.25, 4.0);
    let n2 = translation(rng, field, len, r);
    BruhatIsometry::new(n1, inversion, rot, t, n2).unwrap()
}

/// Unit scalar commuting with the whole field.
pub fn central_unit<R: Rng + ?Sized>(rng: &mut R, field: Field) -> Scalar {
    match field {
        Field::Complex => {
            let a = rng.random_range(0.0..core::f64::consts::TAU);
            Scalar::complex(float::cos(a), float::sin(a))
        }
        _ => {
            if rng.random_bool(0.5) {
                Scalar::one(field)
            } else {
                -Scalar::one(field)
            }
        }
    }
}
