//! Module vectors over R, C, H, the hermitian forms built from them, and the
//! axiom checkers for H-type algebras and C-module structures.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::float;
use crate::linalg::{self, RealMatrix};
use crate::scalar::{Field, Scalar};

/// Coordinate module structure: `V = C^(n−1)` with componentwise left
/// multiplication, sitting inside `E = C^(n+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModuleStructure {
    pub field: Field,
    pub n: usize,
}

impl ModuleStructure {
    pub fn new(field: Field, n: usize) -> Result<ModuleStructure> {
        if n < 2 {
            return Err(Error::InvalidStructure(format!("n must be at least 2, got {n}")));
        }
        Ok(ModuleStructure { field, n })
    }

    /// Number of scalar entries of a module vector.
    pub fn v_len(&self) -> usize {
        self.n - 1
    }

    pub fn zero_vector(&self) -> ModuleVector {
        ModuleVector::zeros(self.field, self.v_len())
    }

    /// The structure as abstract real data: one real matrix per basis vector
    /// of `C`, each describing left multiplication on `V`.
    pub fn c_module_data(&self) -> CModuleData {
        let dim_c = self.field.dim();
        let len = self.v_len();
        let dim_v = dim_c * len;
        let maps = (0..dim_c)
            .map(|k| left_mult_matrix(self.field.basis(k), len))
            .collect();
        CModuleData { dim_c, dim_v, maps }
    }
}

/// Real matrix of `v ↦ s·v` on `C^len`, in the coordinates of
/// [`ModuleVector::to_real`].
pub fn left_mult_matrix(s: Scalar, len: usize) -> RealMatrix {
    let d = s.field().dim();
    let dim = d * len;
    let mut m = RealMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut e = vec![0.0; dim];
        e[col] = 1.0;
        let v = ModuleVector::from_real(s.field(), &e);
        let image = v.left_mul(&s).to_real();
        for (row, x) in image.iter().enumerate() {
            m.set(row, col, *x);
        }
    }
    m
}

/// Row vector in `V = C^(n−1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleVector {
    field: Field,
    entries: Vec<Scalar>,
}

impl ModuleVector {
    pub fn zeros(field: Field, len: usize) -> ModuleVector {
        ModuleVector { field, entries: vec![Scalar::zero(field); len] }
    }

    /// Builds a vector, embedding every entry into `field`.
    pub fn new(field: Field, entries: Vec<Scalar>) -> Result<ModuleVector> {
        let entries = entries.into_iter().map(|s| s.embed(field)).collect::<Result<Vec<_>>>()?;
        Ok(ModuleVector { field, entries })
    }

    /// Vector with real entries.
    pub fn from_reals(field: Field, xs: &[f64]) -> ModuleVector {
        ModuleVector { field, entries: xs.iter().map(|&x| Scalar::real(x).embed(field).unwrap()).collect() }
    }

    /// The `i`-th standard basis vector.
    pub fn unit(field: Field, len: usize, i: usize) -> ModuleVector {
        let mut v = ModuleVector::zeros(field, len);
        v.entries[i] = Scalar::one(field);
        v
    }

    /// Inverse of [`ModuleVector::to_real`]; `xs.len()` must be a multiple of
    /// the field dimension.
    pub fn from_real(field: Field, xs: &[f64]) -> ModuleVector {
        let d = field.dim();
        let entries = xs.chunks(d).map(|c| Scalar::from_coords(field, c).unwrap()).collect();
        ModuleVector { field, entries }
    }

    /// Real coordinates, entry by entry, each entry on `1, i, j, k`.
    pub fn to_real(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|s| s.coords().iter().copied()).collect()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.entries[i]
    }

    pub fn set(&mut self, i: usize, s: Scalar) {
        self.entries[i] = Scalar::zero(self.field) + s;
    }

    /// `s·v`, scalar acting from the left on every entry.
    pub fn left_mul(&self, s: &Scalar) -> ModuleVector {
        ModuleVector {
            field: self.field.max(s.field()),
            entries: self.entries.iter().map(|x| *s * *x).collect(),
        }
    }

    pub fn scale(&self, s: f64) -> ModuleVector {
        ModuleVector { field: self.field, entries: self.entries.iter().map(|x| x.scale(s)).collect() }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(Scalar::norm_sqr).sum()
    }

    pub fn norm(&self) -> f64 {
        float::sqrt(self.norm_sqr())
    }

    /// Euclidean inner product of the underlying real vectors.
    pub fn dot(&self, other: &ModuleVector) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.dot(b)).sum()
    }

    pub fn max_abs_diff(&self, other: &ModuleVector) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.max_abs_diff(b)).fold(0.0, f64::max)
    }

    fn check_compatible(&self, other: &ModuleVector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch { left: self.field, right: other.field });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: other.len() });
        }
        Ok(())
    }
}

impl Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, o: &ModuleVector) -> ModuleVector {
        assert_eq!(self.len(), o.len(), "module vector lengths");
        ModuleVector {
            field: self.field.max(o.field),
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl Sub for &ModuleVector {
    type Output = ModuleVector;
    fn sub(self, o: &ModuleVector) -> ModuleVector {
        assert_eq!(self.len(), o.len(), "module vector lengths");
        ModuleVector {
            field: self.field.max(o.field),
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl Neg for &ModuleVector {
    type Output = ModuleVector;
    fn neg(self) -> ModuleVector {
        self.scale(-1.0)
    }
}

/// Element of `C ⊕ V`: a scalar coordinate and a module vector. Used for
/// points of every model and for tangent vectors of the ball.
#[derive(Clone, Debug, PartialEq)]
pub struct CvPair {
    pub zeta: Scalar,
    pub v: ModuleVector,
}

impl CvPair {
    pub fn new(zeta: Scalar, v: ModuleVector) -> CvPair {
        let field = zeta.field().max(v.field());
        let zeta = Scalar::zero(field) + zeta;
        let v = if v.field() == field { v } else { ModuleVector::new(field, v.entries().to_vec()).unwrap() };
        CvPair { zeta, v }
    }

    pub fn zero(field: Field, len: usize) -> CvPair {
        CvPair { zeta: Scalar::zero(field), v: ModuleVector::zeros(field, len) }
    }

    pub fn field(&self) -> Field {
        self.zeta.field()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.zeta.norm_sqr() + self.v.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        float::sqrt(self.norm_sqr())
    }

    pub fn dot(&self, other: &CvPair) -> f64 {
        self.zeta.dot(&other.zeta) + self.v.dot(&other.v)
    }

    /// `s·(ζ, v) = (sζ, sv)`.
    pub fn left_mul(&self, s: &Scalar) -> CvPair {
        CvPair { zeta: *s * self.zeta, v: self.v.left_mul(s) }
    }

    pub fn scale(&self, s: f64) -> CvPair {
        CvPair { zeta: self.zeta.scale(s), v: self.v.scale(s) }
    }

    pub fn add(&self, o: &CvPair) -> CvPair {
        CvPair { zeta: self.zeta + o.zeta, v: &self.v + &o.v }
    }

    pub fn sub(&self, o: &CvPair) -> CvPair {
        CvPair { zeta: self.zeta - o.zeta, v: &self.v - &o.v }
    }

    pub fn max_abs_diff(&self, o: &CvPair) -> f64 {
        self.zeta.max_abs_diff(&o.zeta).max(self.v.max_abs_diff(&o.v))
    }
}

/// `β₁(x, y) = x·conj(y)`.
pub fn beta1(x: &Scalar, y: &Scalar) -> Result<Scalar> {
    x.try_mul(&y.conj())
}

/// `β₂(v, u) = Σ vᵢ conj(uᵢ)`, left-linear in `v`.
pub fn beta2(v: &ModuleVector, u: &ModuleVector) -> Result<Scalar> {
    v.check_compatible(u)?;
    Ok(beta2_unchecked(v, u))
}

pub(crate) fn beta2_unchecked(v: &ModuleVector, u: &ModuleVector) -> Scalar {
    v.entries
        .iter()
        .zip(&u.entries)
        .fold(Scalar::zero(v.field), |acc, (a, b)| acc + *a * b.conj())
}

/// `β₃ = β₁ + β₂` on `C ⊕ V`.
pub fn beta3(w1: &CvPair, w2: &CvPair) -> Result<Scalar> {
    Ok(beta1(&w1.zeta, &w2.zeta)? + beta2(&w1.v, &w2.v)?)
}

/// Lie bracket `[x, y] = Im β₂(y, x)` of the Heisenberg-type algebra on `V`.
pub fn lie_bracket(x: &ModuleVector, y: &ModuleVector) -> Result<Scalar> {
    Ok(beta2(y, x)?.im())
}

pub(crate) fn bracket_unchecked(x: &ModuleVector, y: &ModuleVector) -> Scalar {
    beta2_unchecked(y, x).im()
}

/// Real structure data of an H-type algebra `𝔷 ⊕ 𝔳`: one matrix `J_k` per
/// orthonormal basis vector of `𝔷`, acting on column vectors of `𝔳`.
#[derive(Clone, Debug, PartialEq)]
pub struct HTypeData {
    pub dim_z: usize,
    pub dim_v: usize,
    pub maps: Vec<RealMatrix>,
}

/// Real structure data of a C-module structure: `maps[k]` is `J(c_k, ·)` for
/// an orthonormal basis `c_0 = e, c_1, …` of `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct CModuleData {
    pub dim_c: usize,
    pub dim_v: usize,
    pub maps: Vec<RealMatrix>,
}

/// Result of one axiom check. `witness` holds the worst offending sample.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub passed: bool,
    pub max_residual: f64,
    pub witness: Option<AxiomWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomWitness {
    pub z1: Vec<f64>,
    pub z2: Vec<f64>,
    pub x: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HTypeReport {
    pub h1: AxiomCheck,
    pub h2: AxiomCheck,
    pub h3: AxiomCheck,
}

impl HTypeReport {
    pub fn passed(&self) -> bool {
        self.h1.passed && self.h2.passed && self.h3.passed
    }
}

/// Tolerance for the norm identity and skew-symmetry.
pub const NORM_AXIOM_TOL: f64 = 1e-10;
/// Tolerance on the least-squares residual in the closure condition.
pub const CLOSURE_TOL: f64 = 1e-8;

const RANDOM_SAMPLES: usize = 64;
const CHECK_SEED: u64 = 0x4a32_7e1f;

struct Tracker {
    tol: f64,
    worst: f64,
    witness: Option<AxiomWitness>,
}

impl Tracker {
    fn new(tol: f64) -> Tracker {
        Tracker { tol, worst: 0.0, witness: None }
    }

    fn record(&mut self, residual: f64, z1: &[f64], z2: &[f64], x: &[f64]) {
        if residual > self.worst || residual.is_nan() {
            self.worst = if residual.is_nan() { f64::INFINITY } else { residual };
            self.witness = Some(AxiomWitness { z1: z1.to_vec(), z2: z2.to_vec(), x: x.to_vec(), residual });
        }
    }

    fn finish(self) -> AxiomCheck {
        let passed = self.worst <= self.tol;
        AxiomCheck { passed, max_residual: self.worst, witness: if passed { None } else { self.witness } }
    }
}

fn unit_vectors(dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let r = 1.0 / float::sqrt(2.0);
    for a in 0..dim {
        let mut e = vec![0.0; dim];
        e[a] = 1.0;
        out.push(e);
    }
    for a in 0..dim {
        for b in a + 1..dim {
            for sign in [1.0, -1.0] {
                let mut e = vec![0.0; dim];
                e[a] = r;
                e[b] = sign * r;
                out.push(e);
            }
        }
    }
    out
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = linalg::norm(&x);
        if n > 1e-3 {
            return x.iter().map(|c| c / n).collect();
        }
    }
}

impl HTypeData {
    pub fn new(dim_z: usize, dim_v: usize, maps: Vec<RealMatrix>) -> Result<HTypeData> {
        let data = HTypeData { dim_z, dim_v, maps };
        data.check_dimensions()?;
        Ok(data)
    }

    fn check_dimensions(&self) -> Result<()> {
        if self.maps.len() != self.dim_z {
            return Err(Error::InvalidStructure(format!(
                "expected {} J maps, found {}",
                self.dim_z,
                self.maps.len()
            )));
        }
        for (k, m) in self.maps.iter().enumerate() {
            if m.rows != self.dim_v || m.cols != self.dim_v {
                return Err(Error::InvalidStructure(format!(
                    "J map {k} is {}x{}, expected {}x{}",
                    m.rows, m.cols, self.dim_v, self.dim_v
                )));
            }
        }
        Ok(())
    }

    /// The classical family attached to a field: `𝔷 = Im C`, `𝔳 = C^m`,
    /// `J_Z X = Z·X`. For the reals this is the abelian algebra `ℝ^m`.
    pub fn classical(field: Field, m: usize) -> HTypeData {
        let dim_z = field.dim() - 1;
        let maps = (1..field.dim()).map(|k| left_mult_matrix(field.basis(k), m)).collect();
        HTypeData { dim_z, dim_v: field.dim() * m, maps }
    }

    /// `J_Z` for `Z` given in the orthonormal basis of `𝔷`.
    pub fn j(&self, z: &[f64]) -> RealMatrix {
        let mut m = RealMatrix::zeros(self.dim_v, self.dim_v);
        for (k, zk) in z.iter().enumerate() {
            if *zk != 0.0 {
                m = m.add(&self.maps[k].scaled(*zk));
            }
        }
        m
    }
}

/// Checks the H-type axioms on a deterministic grid plus seeded random
/// samples.
///
/// The structural axiom is checked as skew-symmetry of every `J_k`, which is
/// what makes `⟨J_Z X, Y⟩ = ⟨Z, [X, Y]⟩` define an antisymmetric bracket with
/// values in `𝔷`. The closure axiom solves for `Z₃` by least squares for
/// each orthogonal pair and sampled `X`.
pub fn check_h_type(data: &HTypeData) -> Result<HTypeReport> {
    data.check_dimensions()?;
    let mut rng = ChaCha8Rng::seed_from_u64(CHECK_SEED);
    let (dz, dv) = (data.dim_z, data.dim_v);

    let mut h1 = Tracker::new(NORM_AXIOM_TOL);
    for (k, m) in data.maps.iter().enumerate() {
        let skew = m.add(&m.transpose()).data.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let mut e = vec![0.0; dz];
        e[k] = 1.0;
        h1.record(skew, &e, &[], &[]);
    }

    let mut h2 = Tracker::new(NORM_AXIOM_TOL);
    let mut h3 = Tracker::new(CLOSURE_TOL);
    if dz > 0 && dv > 0 {
        let mut zs = unit_vectors(dz);
        let mut xs = unit_vectors(dv);
        for _ in 0..RANDOM_SAMPLES {
            zs.push(random_unit(&mut rng, dz));
            xs.push(random_unit(&mut rng, dv));
        }
        for z in &zs {
            let jz = data.j(z);
            for x in &xs {
                let lhs = linalg::norm(&jz.apply(x));
                h2.record((lhs - 1.0).abs(), z, &[], x);
            }
        }

        let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = Vec::new();
        for a in 0..dz {
            for b in 0..dz {
                if a != b {
                    let mut e1 = vec![0.0; dz];
                    let mut e2 = vec![0.0; dz];
                    e1[a] = 1.0;
                    e2[b] = 1.0;
                    pairs.push((e1, e2));
                }
            }
        }
        if dz >= 2 {
            for _ in 0..RANDOM_SAMPLES / 4 {
                let z1 = random_unit(&mut rng, dz);
                let raw = random_unit(&mut rng, dz);
                let proj = linalg::dot(&raw, &z1);
                let z2: Vec<f64> = raw.iter().zip(&z1).map(|(r, a)| r - proj * a).collect();
                let n = linalg::norm(&z2);
                if n > 1e-3 {
                    pairs.push((z1, z2.iter().map(|c| c / n).collect()));
                }
            }
        }
        let x_samples: Vec<Vec<f64>> = xs.iter().take(dv).cloned().chain((0..8).map(|_| random_unit(&mut rng, dv))).collect();
        for (z1, z2) in &pairs {
            let (j1, j2) = (data.j(z1), data.j(z2));
            for x in &x_samples {
                let target = j1.apply(&j2.apply(x));
                let mut a = RealMatrix::zeros(dv, dz);
                for (k, m) in data.maps.iter().enumerate() {
                    for (r, val) in m.apply(x).iter().enumerate() {
                        a.set(r, k, *val);
                    }
                }
                let (_, residual) = linalg::least_squares(&a, &target);
                h3.record(residual, z1, z2, x);
            }
        }
    }

    Ok(HTypeReport { h1: h1.finish(), h2: h2.finish(), h3: h3.finish() })
}

/// Checks (M1) with `e` the first basis vector, (M2) and (M3) for C-module
/// data, in the same style as [`check_h_type`].
pub fn check_c_module(data: &CModuleData) -> Result<HTypeReport> {
    if data.maps.len() != data.dim_c || data.dim_c == 0 {
        return Err(Error::InvalidStructure(format!(
            "expected {} maps, found {}",
            data.dim_c,
            data.maps.len()
        )));
    }
    let mut m1 = Tracker::new(NORM_AXIOM_TOL);
    let e0 = {
        let mut e = vec![0.0; data.dim_c];
        e[0] = 1.0;
        e
    };
    m1.record(data.maps[0].max_abs_diff(&RealMatrix::identity(data.dim_v)), &e0, &[], &[]);
    let h = h_type_from_module_unchecked(data);
    let report = check_h_type(&h)?;
    // (M2) for ζ = a e + Z reduces to the H-type norm identity because J_Z is
    // skew and J_e = id: |aX + J_Z X|² = a²|X|² + |J_Z X|².
    Ok(HTypeReport { h1: m1.finish(), h2: report.h2, h3: report.h3 })
}

/// The C-module structure `C = ℝ ⊕ 𝔷`, `V = 𝔳`,
/// `J(t + Z, X) = tX + J_Z X`.
pub fn module_from_h_type(data: &HTypeData) -> Result<CModuleData> {
    data.check_dimensions()?;
    let mut maps = Vec::with_capacity(data.dim_z + 1);
    maps.push(RealMatrix::identity(data.dim_v));
    maps.extend(data.maps.iter().cloned());
    Ok(CModuleData { dim_c: data.dim_z + 1, dim_v: data.dim_v, maps })
}

/// Inverse of [`module_from_h_type`]: `𝔷 = e^⊥`, `𝔳 = V`, `J_Z = J(Z, ·)`.
/// Fails unless the first map is the identity.
pub fn h_type_from_module(data: &CModuleData) -> Result<HTypeData> {
    if data.maps.len() != data.dim_c || data.dim_c == 0 {
        return Err(Error::InvalidStructure(format!("expected {} maps", data.dim_c)));
    }
    let defect = data.maps[0].max_abs_diff(&RealMatrix::identity(data.dim_v));
    if defect > NORM_AXIOM_TOL {
        return Err(Error::InvalidStructure(format!("first basis vector does not act as identity (defect {defect:e})")));
    }
    Ok(h_type_from_module_unchecked(data))
}

fn h_type_from_module_unchecked(data: &CModuleData) -> HTypeData {
    HTypeData { dim_z: data.dim_c - 1, dim_v: data.dim_v, maps: data.maps[1..].to_vec() }
}

/// Candidate isomorphism `(φ, ψ)` of the coordinate module structure onto
/// itself, given by real matrices on `C` and on `V`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleAutomorphism {
    pub phi: RealMatrix,
    pub psi: RealMatrix,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismReport {
    /// `|φ(1) − 1|`.
    pub unit_defect: f64,
    /// Orthogonality defects of `φ` and `ψ`.
    pub phi_orthogonality: f64,
    pub psi_orthogonality: f64,
    /// Largest `|φ(ζ)ψ(v) − ψ(ζv)|` over the samples.
    pub compatibility: f64,
    pub samples: usize,
}

impl ModuleAutomorphism {
    pub fn apply_phi(&self, s: &Scalar) -> Scalar {
        Scalar::from_coords(s.field(), &self.phi.apply(s.coords())).unwrap()
    }

    pub fn apply_psi(&self, v: &ModuleVector) -> ModuleVector {
        ModuleVector::from_real(v.field(), &self.psi.apply(&v.to_real()))
    }

    /// Whether `φ` is the identity of `C`, within `tol`.
    pub fn phi_is_identity(&self, tol: f64) -> bool {
        self.phi.max_abs_diff(&RealMatrix::identity(self.phi.rows)) <= tol
    }

    /// Samples the commuting square `J∘(φ×ψ) = ψ∘J` on random `(ζ, v)`.
    pub fn check(&self, module: &ModuleStructure, samples: usize, seed: u64) -> Result<AutomorphismReport> {
        let d = module.field.dim();
        let dim_v = d * module.v_len();
        if self.phi.rows != d || self.phi.cols != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.phi.rows });
        }
        if self.psi.rows != dim_v || self.psi.cols != dim_v {
            return Err(Error::DimensionMismatch { expected: dim_v, found: self.psi.rows });
        }
        let one = Scalar::one(module.field);
        let unit_defect = self.apply_phi(&one).max_abs_diff(&one);
        let phi_orthogonality = self.phi.transpose().mul(&self.phi).max_abs_diff(&RealMatrix::identity(d));
        let psi_orthogonality = self.psi.transpose().mul(&self.psi).max_abs_diff(&RealMatrix::identity(dim_v));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut compatibility = 0.0f64;
        for _ in 0..samples {
            let zc: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
            let vc: Vec<f64> = (0..dim_v).map(|_| rng.random_range(-1.0..1.0)).collect();
            let zeta = Scalar::from_coords(module.field, &zc)?;
            let v = ModuleVector::from_real(module.field, &vc);
            let lhs = self.apply_psi(&v).left_mul(&self.apply_phi(&zeta));
            let rhs = self.apply_psi(&v.left_mul(&zeta));
            compatibility = compatibility.max(lhs.max_abs_diff(&rhs));
        }
        Ok(AutomorphismReport { unit_defect, phi_orthogonality, psi_orthogonality, compatibility, samples })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::complex(re, im)
    }

    #[test]
    fn beta1_examples() {
        let one = Scalar::one(Field::Quaternion);
        assert_eq!(beta1(&one, &one).unwrap(), one);
        let i = Field::Quaternion.basis(1);
        let j = Field::Quaternion.basis(2);
        let k = Field::Quaternion.basis(3);
        assert_eq!(beta1(&i, &j).unwrap(), -k);
        assert_eq!(beta1(&c(1.0, 1.0), &c(1.0, -1.0)).unwrap().re(), 0.0);
    }

    #[test]
    fn beta2_examples() {
        let v = ModuleVector::new(Field::Complex, vec![c(1.0, 1.0)]).unwrap();
        let u = ModuleVector::from_reals(Field::Complex, &[1.0]);
        assert_eq!(beta2(&v, &u).unwrap(), c(1.0, 1.0));
        let i = ModuleVector::new(Field::Quaternion, vec![Field::Quaternion.basis(1)]).unwrap();
        let j = ModuleVector::new(Field::Quaternion, vec![Field::Quaternion.basis(2)]).unwrap();
        assert_eq!(beta2(&i, &j).unwrap(), -Field::Quaternion.basis(3));
        let w = ModuleVector::new(Field::Complex, vec![c(1.0, 2.0), c(-0.5, 0.25)]).unwrap();
        let b = beta2(&w, &w).unwrap();
        assert!(b.im().is_zero() && (b.re() - w.norm_sqr()).abs() < 1e-15);
    }

    #[test]
    fn beta2_rejects_mismatch() {
        let a = ModuleVector::zeros(Field::Complex, 2);
        let b = ModuleVector::zeros(Field::Complex, 3);
        assert!(matches!(beta2(&a, &b), Err(Error::DimensionMismatch { .. })));
        let q = ModuleVector::zeros(Field::Quaternion, 2);
        assert!(matches!(beta2(&a, &q), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn beta3_examples() {
        let e1 = ModuleVector::unit(Field::Complex, 1, 0);
        let a = CvPair::new(c(0.0, 1.0), e1.clone());
        let b = CvPair::new(c(1.0, 0.0), e1);
        assert_eq!(beta3(&a, &b).unwrap(), c(1.0, 1.0));
    }

    #[test]
    fn bracket_examples() {
        let one = ModuleVector::from_reals(Field::Complex, &[1.0]);
        let i = ModuleVector::new(Field::Complex, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(lie_bracket(&one, &i).unwrap(), c(0.0, 1.0));
        assert!(lie_bracket(&i, &i).unwrap().is_zero());
        let r1 = ModuleVector::from_reals(Field::Real, &[1.0, 2.0]);
        let r2 = ModuleVector::from_reals(Field::Real, &[-3.0, 0.5]);
        assert!(lie_bracket(&r1, &r2).unwrap().is_zero());
    }

    #[test]
    fn classical_families_pass() {
        for field in [Field::Real, Field::Complex, Field::Quaternion] {
            for m in 1..=3 {
                let report = check_h_type(&HTypeData::classical(field, m)).unwrap();
                assert!(report.passed(), "{field} m={m}: {report:?}");
            }
        }
    }

    #[test]
    fn perturbed_map_fails_norm_axiom() {
        let mut data = HTypeData::classical(Field::Complex, 1);
        let x = data.maps[0].get(0, 1);
        data.maps[0].set(0, 1, x + 0.1);
        let report = check_h_type(&data).unwrap();
        assert!(!report.h2.passed);
        assert!(report.h2.witness.is_some());
    }

    #[test]
    fn wrong_map_count_is_rejected() {
        let data = HTypeData { dim_z: 2, dim_v: 2, maps: vec![RealMatrix::identity(2)] };
        assert!(check_h_type(&data).is_err());
    }

    #[test]
    fn bijection_round_trip() {
        let data = HTypeData::classical(Field::Quaternion, 2);
        let module = module_from_h_type(&data).unwrap();
        assert_eq!(h_type_from_module(&module).unwrap(), data);
        assert!(check_c_module(&module).unwrap().passed());
    }

    #[test]
    fn trivial_v_gives_degenerate_module() {
        let data = HTypeData::new(3, 0, vec![RealMatrix::zeros(0, 0); 3]).unwrap();
        let module = module_from_h_type(&data).unwrap();
        assert_eq!((module.dim_c, module.dim_v), (4, 0));
        assert!(check_h_type(&data).unwrap().passed());
    }

    #[test]
    fn complex_coordinates_recover_imaginary_center() {
        let module = ModuleStructure::new(Field::Complex, 3).unwrap().c_module_data();
        let h = h_type_from_module(&module).unwrap();
        assert_eq!(h.dim_z, 1);
        assert_eq!(h, HTypeData::classical(Field::Complex, 2));
    }
}
