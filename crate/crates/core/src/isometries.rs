//! Isometries of the Siegel domain: Bruhat data and matrix lifts.
//!
//! Points of `H` are sent to rows of `E = C^(n+1)` by `i_H(ζ, v) = (1, ζ, v)`
//! and `i_H(∞) = (0, 1, 0)`. A matrix lift `M` acts on rows from the right,
//! `z ↦ z·M`, so the lift of `g∘h` is `M(h)·M(g)`. It preserves the form
//! `Ψ₂(z, w) = −ζ₁ conj(η₂) − η₁ conj(ζ₂) + v₁ u₂*`, whose Gram matrix `Q`
//! has `Q₁₂ = Q₂₁ = −1` and the identity on the `V` block.
//!
//! With this row convention the entry `a₁₂` of the usual column convention
//! is `M[1][0]` (row 2, column 1).

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::float;
use crate::jmodule::{beta2_unchecked, CvPair, ModuleAutomorphism, ModuleStructure, ModuleVector};
use crate::matrix::ScalarMatrix;
use crate::models::{invert_with, HPoint};
use crate::scalar::{Field, Scalar};

/// Largest accepted `|M Q M* − Q|` entry for a matrix lift.
pub const FORM_TOL: f64 = 1e-10;
/// Largest accepted `|Re τ₀ − ½|u₀|²|` for translation data.
pub const TRANSLATION_TOL: f64 = 1e-10;
/// Largest accepted `|A A* − I|` entry for a rotation.
pub const UNITARY_TOL: f64 = 1e-10;
/// Tolerance used by the decomposition before declaring an element to lie
/// outside the restricted group.
pub const DECOMPOSE_TOL: f64 = 1e-8;
/// Relative size below which a leading projective coordinate counts as zero.
pub const INFINITY_TOL: f64 = 1e-12;

const SQRT_HALF: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Anything that acts on the compactified domain.
pub trait Isometry {
    fn act(&self, z: &HPoint) -> HPoint;
}

/// Heisenberg translation, written through the boundary point `(τ₀, u₀)` it
/// sends `0` to: `(ζ, v) ↦ (ζ + τ₀ + β₂(v, u₀), v + u₀)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Translation {
    pub tau0: Scalar,
    pub u0: ModuleVector,
}

impl Translation {
    /// Checks `Re τ₀ = ½|u₀|²` within [`TRANSLATION_TOL`] (relative to
    /// `max(1, |τ₀|)`).
    pub fn new(tau0: Scalar, u0: ModuleVector) -> Result<Translation> {
        let p = CvPair::new(tau0, u0);
        let defect = p.zeta.re() - 0.5 * p.v.norm_sqr();
        if defect.abs() > TRANSLATION_TOL * p.zeta.norm().max(1.0) {
            return Err(Error::InvalidTranslation { defect });
        }
        Ok(Translation { tau0: p.zeta, u0: p.v })
    }

    /// The translation by Heisenberg coordinates `(Z, u₀)`; the real part of
    /// `τ₀` is filled in as `½|u₀|²`.
    pub fn from_heisenberg(z: Scalar, u0: ModuleVector) -> Translation {
        let field = z.field().max(u0.field());
        let tau0 = Scalar::zero(field) + Scalar::real(0.5 * u0.norm_sqr()) + z.im();
        Translation { tau0, u0: CvPair::new(tau0, u0).v }
    }

    /// The translation sending `0` to the given finite boundary point.
    pub fn to_point(p: &CvPair) -> Translation {
        Translation::from_heisenberg(p.zeta.im(), p.v.clone())
    }

    pub fn identity(field: Field, v_len: usize) -> Translation {
        Translation { tau0: Scalar::zero(field), u0: ModuleVector::zeros(field, v_len) }
    }

    pub fn field(&self) -> Field {
        self.tau0.field()
    }

    /// `(conj τ₀, −u₀)`.
    pub fn inverse(&self) -> Translation {
        Translation { tau0: self.tau0.conj(), u0: -&self.u0 }
    }

    /// `self ∘ inner = (τ₀ + τ₁ + β₂(u₁, u₀), u₀ + u₁)`.
    pub fn compose(&self, inner: &Translation) -> Translation {
        Translation {
            tau0: self.tau0 + inner.tau0 + beta2_unchecked(&inner.u0, &self.u0),
            u0: &self.u0 + &inner.u0,
        }
    }

    pub fn apply(&self, p: &CvPair) -> CvPair {
        CvPair { zeta: p.zeta + self.tau0 + beta2_unchecked(&p.v, &self.u0), v: &p.v + &self.u0 }
    }

    /// Row 1 `(1, τ₀, u₀)`, row 2 `(0, 1, 0)`, row `2+i` `(0, conj u₀ᵢ, eᵢ)`.
    pub fn matrix(&self) -> ScalarMatrix {
        let field = self.field();
        let len = self.u0.len();
        let mut m = ScalarMatrix::identity(field, len + 2);
        m.set(0, 1, self.tau0);
        for i in 0..len {
            m.set(0, 2 + i, self.u0.get(i));
            m.set(2 + i, 1, self.u0.get(i).conj());
        }
        m
    }

    pub fn max_abs_diff(&self, o: &Translation) -> f64 {
        self.tau0.max_abs_diff(&o.tau0).max(self.u0.max_abs_diff(&o.u0))
    }
}

/// Unitary map `v ↦ vA` of `V`, extended by the identity on the first
/// coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Rotation {
    a: ScalarMatrix,
}

impl Rotation {
    pub fn new(a: ScalarMatrix) -> Result<Rotation> {
        if a.rows() != a.cols() {
            return Err(Error::DimensionMismatch { expected: a.rows(), found: a.cols() });
        }
        let residual = a.unitarity_residual();
        if residual > UNITARY_TOL {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Rotation { a })
    }

    pub fn identity(field: Field, v_len: usize) -> Rotation {
        Rotation { a: ScalarMatrix::identity(field, v_len) }
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.a
    }

    pub fn inverse(&self) -> Rotation {
        Rotation { a: self.a.conj_transpose() }
    }

    pub fn apply(&self, v: &ModuleVector) -> ModuleVector {
        ModuleVector::new(self.a.field(), self.a.apply_row(v.entries())).unwrap()
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.a.max_abs_diff(&ScalarMatrix::identity(self.a.field(), self.a.rows())) <= tol
    }
}

fn dilation_matrix(field: Field, v_len: usize, t: f64) -> ScalarMatrix {
    let mut m = ScalarMatrix::identity(field, v_len + 2);
    let r = float::sqrt(t);
    m.set(0, 0, Scalar::real(1.0 / r));
    m.set(1, 1, Scalar::real(r));
    m
}

fn sigma_matrix(field: Field, v_len: usize) -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(field, v_len + 2, v_len + 2);
    m.set(0, 1, Scalar::one(field));
    m.set(1, 0, Scalar::one(field));
    for i in 0..v_len {
        m.set(2 + i, 2 + i, -Scalar::one(field));
    }
    m
}

fn rotation_matrix(r: &Rotation) -> ScalarMatrix {
    let len = r.a.rows();
    let mut m = ScalarMatrix::identity(r.a.field(), len + 2);
    for i in 0..len {
        for j in 0..len {
            m.set(2 + i, 2 + j, r.a.get(i, j));
        }
    }
    m
}

/// Element of the restricted group in Bruhat form: `n₁∘σ∘m∘a_t∘n₂` when
/// `inversion` is set, `m∘a_t∘n₂` otherwise (then `n1` is the identity and
/// ignored). `n₂` acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct BruhatIsometry {
    pub n1: Translation,
    pub inversion: bool,
    pub rot: Rotation,
    pub t: f64,
    pub n2: Translation,
}

impl BruhatIsometry {
    pub fn new(n1: Translation, inversion: bool, rot: Rotation, t: f64, n2: Translation) -> Result<BruhatIsometry> {
        if !(t > 0.0) {
            return Err(Error::NonPositiveDilation(t));
        }
        let len = rot.a.rows();
        for u in [&n1.u0, &n2.u0] {
            if u.len() != len {
                return Err(Error::DimensionMismatch { expected: len, found: u.len() });
            }
        }
        Ok(BruhatIsometry { n1, inversion, rot, t, n2 })
    }

    /// `m∘a_t∘n`.
    pub fn stabilizer(rot: Rotation, t: f64, n: Translation) -> Result<BruhatIsometry> {
        let len = rot.a.rows();
        let field = rot.a.field();
        BruhatIsometry::new(Translation::identity(field, len), false, rot, t, n)
    }

    pub fn identity(field: Field, v_len: usize) -> BruhatIsometry {
        BruhatIsometry {
            n1: Translation::identity(field, v_len),
            inversion: false,
            rot: Rotation::identity(field, v_len),
            t: 1.0,
            n2: Translation::identity(field, v_len),
        }
    }

    /// The geodesic inversion `σ`.
    pub fn sigma(field: Field, v_len: usize) -> BruhatIsometry {
        BruhatIsometry { inversion: true, ..BruhatIsometry::identity(field, v_len) }
    }

    /// `a_t(ζ, v) = (tζ, t^{1/2}v)`.
    pub fn dilation(field: Field, v_len: usize, t: f64) -> Result<BruhatIsometry> {
        BruhatIsometry::new(
            Translation::identity(field, v_len),
            false,
            Rotation::identity(field, v_len),
            t,
            Translation::identity(field, v_len),
        )
    }

    pub fn translation(n: Translation) -> BruhatIsometry {
        let (field, len) = (n.field(), n.u0.len());
        BruhatIsometry { n2: n, ..BruhatIsometry::identity(field, len) }
    }

    pub fn rotation(rot: Rotation) -> BruhatIsometry {
        let (field, len) = (rot.a.field(), rot.a.rows());
        BruhatIsometry { rot, ..BruhatIsometry::identity(field, len) }
    }

    pub fn field(&self) -> Field {
        self.rot.a.field()
    }

    pub fn v_len(&self) -> usize {
        self.rot.a.rows()
    }

    pub fn fixes_infinity(&self) -> bool {
        !self.inversion
    }

    /// Radius `t^{−1/4}` of the isometric sphere, when there is one.
    pub fn radius(&self) -> Option<f64> {
        self.inversion.then(|| 1.0 / float::root4(self.t))
    }

    /// Inverse in Bruhat form:
    /// `(n₁σ m a_t n₂)⁻¹ = n₂⁻¹ σ m⁻¹ a_t n₁⁻¹` and
    /// `(m a_t n)⁻¹ = m⁻¹ a_{1/t} n'` with `n' = (t·conj τ, −t^{1/2}uA)`.
    pub fn inverse(&self) -> BruhatIsometry {
        if self.inversion {
            BruhatIsometry {
                n1: self.n2.inverse(),
                inversion: true,
                rot: self.rot.inverse(),
                t: self.t,
                n2: self.n1.inverse(),
            }
        } else {
            let inv = self.n2.inverse();
            let moved = Translation {
                tau0: inv.tau0.scale(self.t),
                u0: self.rot.apply(&inv.u0).scale(float::sqrt(self.t)),
            };
            BruhatIsometry {
                n1: Translation::identity(self.field(), self.v_len()),
                inversion: false,
                rot: self.rot.inverse(),
                t: 1.0 / self.t,
                n2: moved,
            }
        }
    }

    /// `M(n₂)·M(a_t)·M(m)·M(σ)·M(n₁)`, or without the last two factors.
    pub fn lift(&self) -> MatrixLift {
        let (field, len) = (self.field(), self.v_len());
        let mut m = self.n2.matrix().mul(&dilation_matrix(field, len, self.t)).mul(&rotation_matrix(&self.rot));
        if self.inversion {
            m = m.mul(&sigma_matrix(field, len)).mul(&self.n1.matrix());
        }
        MatrixLift { m }
    }

    fn act_finite(&self, p: &CvPair) -> CvPair {
        let q = self.n2.apply(p);
        CvPair { zeta: q.zeta.scale(self.t), v: self.rot.apply(&q.v.scale(float::sqrt(self.t))) }
    }
}

impl Isometry for BruhatIsometry {
    fn act(&self, z: &HPoint) -> HPoint {
        let (field, len) = (self.field(), self.v_len());
        let inner = match z {
            HPoint::Infinity if self.inversion => HPoint::origin(field, len),
            HPoint::Infinity => return HPoint::Infinity,
            _ => {
                let moved = z.with_coords(self.act_finite(z.coords().unwrap()));
                if !self.inversion {
                    return moved;
                }
                let scale = 1.0 + self.n2.tau0.norm() * self.t;
                match invert_with(&moved, INFINITY_TOL * scale) {
                    Some(HPoint::Infinity) => return HPoint::Infinity,
                    Some(p) => p,
                    None => unreachable!("finite input"),
                }
            }
        };
        inner.with_coords(self.n1.apply(inner.coords().unwrap()))
    }
}

/// `i_H(ζ, v) = (1, ζ, v)`. `∞` carries no shape, so it goes through
/// [`i_h_infinity`].
pub fn i_h(z: &HPoint) -> Result<Vec<Scalar>> {
    let p = z.finite()?;
    let mut out = Vec::with_capacity(p.v.len() + 2);
    out.push(Scalar::one(p.field()));
    out.push(p.zeta);
    out.extend_from_slice(p.v.entries());
    Ok(out)
}

/// `i_H(∞) = (0, 1, 0)` for the given shape.
pub fn i_h_infinity(field: Field, v_len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(field); v_len + 2];
    out[1] = Scalar::one(field);
    out
}

/// `π_H(a, b, c) = (a⁻¹b, a⁻¹c)`, or `∞` when `a` vanishes relative to the
/// other coordinates. `boundary` selects the tag of finite results.
pub fn pi_h(x: &[Scalar], boundary: bool) -> HPoint {
    let big = x.iter().map(Scalar::norm).fold(0.0, f64::max);
    let a = x[0];
    if a.norm() <= INFINITY_TOL * big || a.is_zero() {
        return HPoint::Infinity;
    }
    let inv = a.inv().unwrap();
    let field = x.iter().fold(Field::Real, |f, s| f.max(s.field()));
    let p = CvPair {
        zeta: Scalar::zero(field) + inv * x[1],
        v: ModuleVector::new(field, x[2..].iter().map(|s| inv * *s).collect()).unwrap(),
    };
    if boundary {
        HPoint::Boundary(p)
    } else {
        HPoint::Interior(p)
    }
}

fn check_e_vectors(z1: &[Scalar], z2: &[Scalar]) -> Result<()> {
    if z1.len() != z2.len() {
        return Err(Error::DimensionMismatch { expected: z1.len(), found: z2.len() });
    }
    if z1.len() < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: z1.len() });
    }
    Ok(())
}

fn tail_form(z1: &[Scalar], z2: &[Scalar]) -> Scalar {
    z1[2..].iter().zip(&z2[2..]).fold(Scalar::zero(z1[0].field()), |acc, (a, b)| acc + *a * b.conj())
}

/// `Ψ₁(z₁, z₂) = −ζ₁ conj ζ₂ + η₁ conj η₂ + v₁ v₂*`.
pub fn psi1_form(z1: &[Scalar], z2: &[Scalar]) -> Result<Scalar> {
    check_e_vectors(z1, z2)?;
    Ok(-(z1[0] * z2[0].conj()) + z1[1] * z2[1].conj() + tail_form(z1, z2))
}

/// `Ψ₂(z₁, z₂) = −ζ₁ conj η₂ − η₁ conj ζ₂ + v₁ v₂*`.
pub fn psi2_form(z1: &[Scalar], z2: &[Scalar]) -> Result<Scalar> {
    check_e_vectors(z1, z2)?;
    Ok(-(z1[0] * z2[1].conj()) - z1[1] * z2[0].conj() + tail_form(z1, z2))
}

/// `T(ζ, η, v) = (2^{−1/2}(ζ − η), 2^{−1/2}(ζ + η), v)`; it carries `Ψ₁` to
/// `Ψ₂`.
pub fn transform_t(z: &[Scalar]) -> Vec<Scalar> {
    let mut out = z.to_vec();
    out[0] = (z[0] - z[1]).scale(SQRT_HALF);
    out[1] = (z[0] + z[1]).scale(SQRT_HALF);
    out
}

pub fn transform_t_inv(z: &[Scalar]) -> Vec<Scalar> {
    let mut out = z.to_vec();
    out[0] = (z[0] + z[1]).scale(SQRT_HALF);
    out[1] = (z[1] - z[0]).scale(SQRT_HALF);
    out
}

/// Gram matrix of `Ψ₂` on `C^size`.
pub fn q_matrix(field: Field, size: usize) -> ScalarMatrix {
    let mut q = ScalarMatrix::identity(field, size);
    q.set(0, 0, Scalar::zero(field));
    q.set(1, 1, Scalar::zero(field));
    q.set(0, 1, -Scalar::one(field));
    q.set(1, 0, -Scalar::one(field));
    q
}

/// `max |M Q M* − Q|` entry.
pub fn q_residual(m: &ScalarMatrix) -> f64 {
    let q = q_matrix(m.field(), m.rows());
    m.mul(&q).mul(&m.conj_transpose()).max_abs_diff(&q)
}

/// Matrix in `U(Ψ₂, C)` acting on rows from the right.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixLift {
    m: ScalarMatrix,
}

impl MatrixLift {
    /// Validates shape (`n + 1 ≥ 3`, square) and form invariance within
    /// [`FORM_TOL`].
    pub fn new(m: ScalarMatrix) -> Result<MatrixLift> {
        if m.rows() != m.cols() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        if m.rows() < 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: m.rows() });
        }
        let residual = q_residual(&m);
        if !(residual <= FORM_TOL) {
            return Err(Error::NotInvariant { residual });
        }
        Ok(MatrixLift { m })
    }

    /// Wraps a matrix without checking invariance. Products of validated
    /// lifts stay invariant up to rounding, so callers composing lifts use
    /// [`MatrixLift::compose`] instead.
    pub fn from_matrix_unchecked(m: ScalarMatrix) -> MatrixLift {
        MatrixLift { m }
    }

    pub fn identity(field: Field, v_len: usize) -> MatrixLift {
        MatrixLift { m: ScalarMatrix::identity(field, v_len + 2) }
    }

    pub fn matrix(&self) -> &ScalarMatrix {
        &self.m
    }

    pub fn field(&self) -> Field {
        self.m.field()
    }

    pub fn v_len(&self) -> usize {
        self.m.rows() - 2
    }

    /// Zero-based entry access.
    pub fn entry(&self, r: usize, c: usize) -> Scalar {
        self.m.get(r, c)
    }

    pub fn q_residual(&self) -> f64 {
        q_residual(&self.m)
    }

    /// Lift of `self ∘ inner`, which is `M(inner)·M(self)`.
    pub fn compose(&self, inner: &MatrixLift) -> MatrixLift {
        MatrixLift { m: inner.m.mul(&self.m) }
    }

    /// `Q M* Q`.
    pub fn inverse(&self) -> MatrixLift {
        let q = q_matrix(self.field(), self.m.rows());
        MatrixLift { m: q.mul(&self.m.conj_transpose()).mul(&q) }
    }

    pub fn fixes_infinity(&self) -> bool {
        let row = self.m.row(1);
        let big = row.iter().map(Scalar::norm).fold(0.0, f64::max);
        row[0].norm() <= INFINITY_TOL * big
    }

    /// Center of the isometric sphere: `g⁻¹∞`.
    pub fn preimage_of_infinity(&self) -> HPoint {
        self.inverse().act(&HPoint::Infinity)
    }
}

impl Isometry for MatrixLift {
    fn act(&self, z: &HPoint) -> HPoint {
        match z {
            HPoint::Infinity => pi_h(&self.m.row(1), true),
            HPoint::Interior(_) => pi_h(&self.m.apply_row(&i_h(z).unwrap()), false),
            HPoint::Boundary(_) => pi_h(&self.m.apply_row(&i_h(z).unwrap()), true),
        }
    }
}

fn not_in_gres(reason: alloc::string::String) -> Error {
    Error::NotInGres { reason }
}

/// Bruhat data of a matrix lift together with the central factor `λ` such
/// that `M = λ·lift(data)`.
pub fn bruhat_decompose_with_phase(lift: &MatrixLift) -> Result<(BruhatIsometry, Scalar)> {
    let m = &lift.m;
    let field = m.field();
    let len = lift.v_len();
    let scale = m.max_norm().max(1.0);

    let (iso, lambda) = if lift.fixes_infinity() {
        let m22 = m.get(1, 1);
        let r = m22.norm();
        if r == 0.0 {
            return Err(not_in_gres("degenerate matrix: zero (2,2) entry".into()));
        }
        let lambda = m22.scale(1.0 / r);
        if !lambda.is_central(DECOMPOSE_TOL) {
            return Err(not_in_gres(format!("scalar factor {lambda} is not central")));
        }
        let lambda_inv = lambda.inv()?;
        let reduced = m.left_scale(&lambda_inv);
        let a = reduced.block(2, len);
        let residual = a.unitarity_residual();
        if residual > DECOMPOSE_TOL {
            return Err(not_in_gres(format!("rotation block fails unitarity by {residual:e}")));
        }
        let tau = reduced.get(0, 1).scale(1.0 / r);
        let row0: Vec<Scalar> = (0..len).map(|i| reduced.get(0, 2 + i)).collect();
        let u = ModuleVector::new(field, a.conj_transpose().apply_row(&row0))?;
        let n = Translation::from_heisenberg(tau.im(), u);
        (BruhatIsometry::stabilizer(Rotation { a }, r * r, n)?, lambda)
    } else {
        let image = pi_h(&m.row(1), true);
        let pre = pi_h(&lift.inverse().m.row(1), true);
        let (Some(image), Some(pre)) = (image.coords(), pre.coords()) else {
            return Err(not_in_gres("inconsistent action at infinity".into()));
        };
        let n1 = Translation::to_point(image);
        let n2_inv = Translation::to_point(pre);
        let residual_matrix = n2_inv.matrix().mul(m).mul(&n1.inverse().matrix());
        let r21 = residual_matrix.get(1, 0);
        let root_t = r21.norm();
        let lambda = r21.scale(1.0 / root_t);
        if !lambda.is_central(DECOMPOSE_TOL) {
            return Err(not_in_gres(format!("scalar factor {lambda} is not central")));
        }
        let a = residual_matrix.block(2, len).left_scale(&(-lambda.inv()?));
        let residual = a.unitarity_residual();
        if residual > DECOMPOSE_TOL {
            return Err(not_in_gres(format!("rotation block fails unitarity by {residual:e}")));
        }
        (BruhatIsometry::new(n1, true, Rotation { a }, root_t * root_t, n2_inv.inverse())?, lambda)
    };

    let rebuilt = iso.lift().m.left_scale(&lambda);
    let defect = rebuilt.max_abs_diff(m);
    if defect > DECOMPOSE_TOL * scale {
        return Err(not_in_gres(format!("Bruhat factors reproduce the matrix only to {defect:e}")));
    }
    Ok((iso, lambda))
}

/// Bruhat data of a matrix lift. Fails with `NotInGres` when the element is
/// not in the restricted group, e.g. when the scalar factor is not central or
/// the rotation block is not unitary.
pub fn bruhat_decompose(lift: &MatrixLift) -> Result<BruhatIsometry> {
    bruhat_decompose_with_phase(lift).map(|(iso, _)| iso)
}

/// Representative and modulus of the cocycle `j(g, z)`, defined by
/// `i_H(z)·M = j(g, z)·i_H(gz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cocycle {
    pub value: Scalar,
    pub modulus: f64,
}

pub fn cocycle_j(lift: &MatrixLift, z: &HPoint) -> Result<Cocycle> {
    let row = match z {
        HPoint::Infinity => lift.m.row(1),
        _ => lift.m.apply_row(&i_h(z)?),
    };
    let big = row.iter().map(Scalar::norm).fold(0.0, f64::max);
    let value = row[0];
    if value.norm() <= INFINITY_TOL * big || value.is_zero() {
        return Err(Error::CocycleUndefined);
    }
    Ok(Cocycle { value, modulus: value.norm() })
}

/// Lift of a module automorphism `(φ, ψ)`. Only `φ = id` lifts to an
/// element of the restricted group; anything else is rejected.
pub fn lift_module_automorphism(module: &ModuleStructure, aut: &ModuleAutomorphism) -> Result<MatrixLift> {
    let report = aut.check(module, 64, 0x5eed)?;
    let worst = report.compatibility.max(report.phi_orthogonality).max(report.psi_orthogonality).max(report.unit_defect);
    if worst > UNITARY_TOL {
        return Err(Error::InvalidStructure(format!("not a module automorphism (defect {worst:e})")));
    }
    if !aut.phi_is_identity(UNITARY_TOL) {
        return Err(not_in_gres("the automorphism acts non-trivially on the scalars".into()));
    }
    let field = module.field;
    let len = module.v_len();
    let rows = (0..len).map(|i| aut.apply_psi(&ModuleVector::unit(field, len, i)).entries().to_vec()).collect();
    let rot = Rotation::new(ScalarMatrix::from_rows(field, rows)?)?;
    Ok(BruhatIsometry::rotation(rot).lift())
}
