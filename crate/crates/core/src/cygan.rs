//! Heisenberg group norm, its extension to `ℝ × N`, and the Cygan metrics on
//! the closures of `D` and `H` (minus `∞`).

use crate::error::Result;
use crate::float;
use crate::isometries::{i_h, psi2_form};
use crate::jmodule::{beta2_unchecked, bracket_unchecked, CvPair, ModuleVector};
use crate::models::{siegel_height, DPoint, HPoint};
use crate::scalar::Scalar;

/// `q(Z, X) = (|X|⁴/16 + |Z|²)^{1/4}` for imaginary `Z`.
pub fn heisenberg_norm(z: &Scalar, x: &ModuleVector) -> f64 {
    let x2 = x.norm_sqr();
    float::root4(x2 * x2 / 16.0 + z.im().norm_sqr())
}

/// `p(k, Z, X) = |¼|X|² + |k| + Z|^{1/2}`.
pub fn group_norm_p(k: f64, z: &Scalar, x: &ModuleVector) -> f64 {
    let re = 0.25 * x.norm_sqr() + k.abs();
    float::root4(re * re + z.im().norm_sqr())
}

/// Element `(k, Z, X)` of `ℝ × N`: an additive real factor times the
/// Heisenberg-type group.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtHeisenberg {
    pub k: f64,
    pub z: Scalar,
    pub x: ModuleVector,
}

impl ExtHeisenberg {
    /// `(k₁ + k₂, Z₁ + Z₂ + ½[X₁, X₂], X₁ + X₂)`.
    pub fn mul(&self, o: &ExtHeisenberg) -> ExtHeisenberg {
        ExtHeisenberg {
            k: self.k + o.k,
            z: self.z + o.z + bracket_unchecked(&self.x, &o.x).scale(0.5),
            x: &self.x + &o.x,
        }
    }

    pub fn inv(&self) -> ExtHeisenberg {
        ExtHeisenberg { k: -self.k, z: -self.z, x: -&self.x }
    }

    pub fn norm(&self) -> f64 {
        group_norm_p(self.k, &self.z, &self.x)
    }

    /// Height, imaginary part and module part of a point of `D`.
    pub fn of_d_point(d: &DPoint) -> ExtHeisenberg {
        ExtHeisenberg { k: d.height(), z: d.zeta.im(), x: d.v.clone() }
    }
}

/// Cygan metric on the closure of `D`:
/// `|¼|v₁ − v₂|² + |ht₁ − ht₂| + Im ζ₁ − Im ζ₂ − ½ Im β₂(v₁, v₂)|^{1/2}`.
pub fn cygan_d(z1: &DPoint, z2: &DPoint) -> f64 {
    let dv = &z1.v - &z2.v;
    let re = 0.25 * dv.norm_sqr() + (z1.height() - z2.height()).abs();
    let im = z1.zeta.im() - z2.zeta.im() - beta2_unchecked(&z1.v, &z2.v).im().scale(0.5);
    float::root4(re * re + im.norm_sqr())
}

fn tagged_height(z: &HPoint, p: &CvPair) -> f64 {
    if z.is_boundary() {
        0.0
    } else {
        siegel_height(p)
    }
}

/// Cygan metric on the closure of `H` minus `∞`:
/// `|½|v₁ − v₂|² + |ht₁ − ht₂| + Im ζ₁ − Im ζ₂ − Im β₂(v₁, v₂)|^{1/2}`.
/// Boundary-tagged points use height exactly zero.
pub fn cygan_h(z1: &HPoint, z2: &HPoint) -> Result<f64> {
    let (p1, p2) = (z1.finite()?, z2.finite()?);
    Ok(cygan_h_coords(p1, tagged_height(z1, p1), p2, tagged_height(z2, p2)))
}

pub(crate) fn cygan_h_coords(p1: &CvPair, h1: f64, p2: &CvPair, h2: f64) -> f64 {
    let dv2: f64 = p1.v.entries().iter().zip(p2.v.entries()).map(|(a, b)| (*a - *b).norm_sqr()).sum();
    let re = 0.5 * dv2 + (h1 - h2).abs();
    let im = p1.zeta.im() - p2.zeta.im() - beta2_unchecked(&p1.v, &p2.v).im();
    float::root4(re * re + im.norm_sqr())
}

/// `|Ψ₂(i_H z₁, i_H z₂) + 2 min(ht₁, ht₂)|^{1/2}`.
pub fn cygan_via_psi2(z1: &HPoint, z2: &HPoint) -> Result<f64> {
    let (p1, p2) = (z1.finite()?, z2.finite()?);
    let form = psi2_form(&i_h(z1)?, &i_h(z2)?)?;
    let m = tagged_height(z1, p1).min(tagged_height(z2, p2));
    Ok(float::sqrt((form + Scalar::real(2.0 * m)).norm()))
}
