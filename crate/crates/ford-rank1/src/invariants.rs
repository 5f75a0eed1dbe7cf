//! Sampled checks of the geometric identities for one field and dimension.

use ford_rank1_core::cygan::cygan_h;
use ford_rank1_core::isometries::{bruhat_decompose, cocycle_j, Isometry};
use ford_rank1_core::jmodule::{check_h_type, HTypeData};
use ford_rank1_core::models::{ball_metric, cayley, cayley_inv, height_h, tilde_rho};
use ford_rank1_core::sampling;
use ford_rank1_core::spheres::{height_transform, isometric_sphere_bruhat};
use ford_rank1_core::{CvPair, Field};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
}

impl InvariantCheck {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }

    pub fn to_json(&self) -> Value {
        json!({"name": self.name, "max_error": self.max_error, "tolerance": self.tolerance, "passed": self.passed()})
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Runs every check on `samples` random inputs drawn from `seed`.
pub fn run(field: Field, n: usize, samples: usize, seed: u64) -> Vec<InvariantCheck> {
    let len = n - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 7];
    for i in 0..samples {
        let g = sampling::bruhat(&mut rng, field, len, true, 1.5);
        let z = sampling::interior_point(&mut rng, field, len, 2.0, 0.01, 20.0);
        let w = sampling::interior_point(&mut rng, field, len, 2.0, 0.01, 20.0);
        let y = sampling::interior_point(&mut rng, field, len, 2.0, 0.01, 20.0);

        let (zw, wy, zy) = (cygan_h(&z, &w).unwrap(), cygan_h(&w, &y).unwrap(), cygan_h(&z, &y).unwrap());
        worst[0] = worst[0].max((zy - zw - wy) / (zw + wy + zy));

        let pre = isometric_sphere_bruhat(&g).unwrap().center;
        let img = isometric_sphere_bruhat(&g.inverse()).unwrap().center;
        let gz = g.act(&z);
        worst[1] = worst[1].max(rel(cygan_h(&z, &pre).unwrap() * cygan_h(&gz, &img).unwrap(), 1.0 / g.t.sqrt()));
        worst[2] = worst[2].max(rel(height_transform(&g, &z).unwrap(), height_h(&gz).unwrap()));

        let j = cocycle_j(&g.lift(), &z).unwrap().modulus;
        worst[3] = worst[3].max(rel(j.sqrt(), cygan_h(&z, &pre).unwrap() / g.radius().unwrap()));

        let inv = i % 2 == 0;
        let h = sampling::bruhat(&mut rng, field, len, inv, 1.5);
        let back = bruhat_decompose(&h.lift()).unwrap();
        worst[4] = worst[4].max(rel(back.t, h.t)).max(back.n2.max_abs_diff(&h.n2));

        worst[5] = worst[5].max(g.act(&z).max_abs_diff(&g.lift().act(&z)) / gz.coords().unwrap().norm().max(1.0));

        let p = sampling::ball_point(&mut rng, field, len, 0.9);
        let x = CvPair::new(sampling::scalar(&mut rng, field, 1.0), sampling::vector(&mut rng, field, len, 1.0));
        let v = CvPair::new(sampling::scalar(&mut rng, field, 1.0), sampling::vector(&mut rng, field, len, 1.0));
        let round = cayley_inv(&cayley(&p)).unwrap().w.max_abs_diff(&p.w);
        worst[6] = worst[6].max(rel(tilde_rho(&p, &x, &v).unwrap(), 0.25 * ball_metric(&p, &x, &v))).max(round);
    }
    let h_type = check_h_type(&HTypeData::classical(field, len.max(1))).unwrap();
    let h_type_error = h_type.h1.max_residual.max(h_type.h2.max_residual);
    vec![
        InvariantCheck { name: "cygan triangle inequality", max_error: worst[0], tolerance: 1e-12 },
        InvariantCheck { name: "sphere duality", max_error: worst[1], tolerance: 1e-9 },
        InvariantCheck { name: "height transformation", max_error: worst[2], tolerance: 1e-9 },
        InvariantCheck { name: "cocycle and metric", max_error: worst[3], tolerance: 1e-9 },
        InvariantCheck { name: "lift and decompose round trip", max_error: worst[4], tolerance: 1e-10 },
        InvariantCheck { name: "matrix and Bruhat actions agree", max_error: worst[5], tolerance: 1e-9 },
        InvariantCheck { name: "Cayley transform and metric", max_error: worst[6], tolerance: 1e-9 },
        InvariantCheck { name: "H-type norm axioms", max_error: h_type_error, tolerance: 1e-10 },
    ]
}
