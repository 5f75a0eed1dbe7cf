//! Finitely generated subgroups and their Ford regions: word-ball
//! enumeration, the region `F_∞ ∩ ⋂ Ext I(g)`, membership, reduction by
//! height maximisation and sample-based verification.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::isometries::{bruhat_decompose, MatrixLift};
use crate::jmodule::ModuleStructure;
use crate::matrix::ScalarMatrix;
use crate::scalar::Field;

mod enumerate;
mod region;
mod verify;
mod word;

pub use enumerate::{enumerate, ElementKind, Enumeration, WordElement};
pub use region::{
    compute_region, compute_region_from, reduce, Containment, FordRegion, Membership, RadiusStats, ReduceError,
    Reduction, RegionElement, RegionWarning, Slab, SlabKind, StabilizerDomain, Truncation,
};
pub use verify::{
    verify_region, CoveringFailure, CoveringWitness, DisjointnessWitness, SampleOutcome, VerificationReport,
    Verifier, VerifyOptions,
};
pub use word::{Token, Word};

/// Default number of sphere moves allowed in a reduction.
pub const DEFAULT_BUDGET: usize = 1000;

/// Numerical tolerances used by region construction, membership and
/// reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Band on `ρ/R − 1` counted as lying on a sphere.
    pub sphere_band: f64,
    /// Band on slab coordinates around `±½`.
    pub slab_band: f64,
    /// Quantum for identifying group elements by probe images and spheres
    /// by center and radius.
    pub dedup: f64,
    /// Relative slack in the height-monotonicity check of reductions.
    pub height_slack: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { sphere_band: 1e-9, slab_band: 1e-9, dedup: 1e-8, height_slack: 1e-12 }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("sphere_band", self.sphere_band),
            ("slab_band", self.slab_band),
            ("dedup", self.dedup),
            ("height_slack", self.height_slack),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidSpec(format!("tolerance {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generator {
    pub label: String,
    pub lift: MatrixLift,
}

/// A finitely generated subgroup together with its truncation options.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub field: Field,
    pub n: usize,
    pub generators: Vec<Generator>,
    pub stabilizer_labels: Vec<String>,
    pub word_length: usize,
    pub min_radius: f64,
    pub seed: u64,
}

fn valid_label(label: &str) -> bool {
    !label.is_empty()
        && label != "id"
        && label.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
        && !label.chars().all(|c| c.is_ascii_digit())
}

impl GroupSpec {
    /// Checks shapes, labels, membership in the restricted group and the
    /// declared stabilizer labels against the action at `∞`.
    pub fn new(
        field: Field,
        n: usize,
        generators: Vec<Generator>,
        stabilizer_labels: Vec<String>,
        word_length: usize,
        min_radius: f64,
        seed: u64,
    ) -> Result<GroupSpec> {
        let module = ModuleStructure::new(field, n)?;
        if !(min_radius >= 0.0 && min_radius.is_finite()) {
            return Err(Error::InvalidSpec(format!("min_radius must be non-negative, got {min_radius}")));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for (i, g) in generators.into_iter().enumerate() {
            if !valid_label(&g.label) {
                return Err(Error::InvalidSpec(format!("invalid generator label '{}'", g.label)));
            }
            if gens.iter().any(|h: &Generator| h.label == g.label) {
                return Err(Error::InvalidSpec(format!("duplicate generator label '{}'", g.label)));
            }
            if g.lift.v_len() != module.v_len() {
                return Err(Error::DimensionMismatch { expected: n + 1, found: g.lift.v_len() + 2 });
            }
            if g.lift.field() > field {
                return Err(Error::FieldMismatch { left: field, right: g.lift.field() });
            }
            let m = g.lift.matrix();
            let rows = (0..m.rows()).map(|r| m.row(r)).collect();
            let lift = MatrixLift::new(ScalarMatrix::from_rows(field, rows)?)?;
            bruhat_decompose(&lift)
                .map_err(|e| Error::InvalidSpec(format!("generator '{}' (#{i}): {e}", g.label)))?;
            gens.push(Generator { label: g.label, lift });
        }
        for s in &stabilizer_labels {
            if !gens.iter().any(|g| &g.label == s) {
                return Err(Error::InvalidSpec(format!("stabilizer label '{s}' names no generator")));
            }
        }
        for g in &gens {
            let declared = stabilizer_labels.contains(&g.label);
            let actual = g.lift.fixes_infinity();
            if declared != actual {
                let name = |b: bool| if b { "a stabilizer of infinity" } else { "not a stabilizer of infinity" };
                return Err(Error::StabilizerMismatch {
                    label: g.label.clone(),
                    declared: name(declared),
                    actual: name(actual),
                });
            }
        }
        Ok(GroupSpec { field, n, generators: gens, stabilizer_labels, word_length, min_radius, seed })
    }

    pub fn v_len(&self) -> usize {
        self.n - 1
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn generator_index(&self, label: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn format_word(&self, w: &Word) -> String {
        w.format(&self.labels())
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        Word::parse(s, &self.labels())
    }

    /// Matrix lift of a word.
    pub fn word_lift(&self, w: &Word) -> MatrixLift {
        let mut out = MatrixLift::identity(self.field, self.v_len());
        for t in w.tokens() {
            let g = &self.generators[t.generator].lift;
            let step = if t.power < 0 { g.inverse() } else { g.clone() };
            for _ in 0..t.power.unsigned_abs() {
                out = out.compose(&step);
            }
        }
        out
    }

    pub fn evaluate(&self, word: &str) -> Result<MatrixLift> {
        Ok(self.word_lift(&self.parse_word(word)?))
    }
}

/// Ready-made groups used by the examples and tests.
pub mod presets {
    use alloc::string::ToString;
    use alloc::vec;

    use super::{Generator, GroupSpec};
    use crate::error::Result;
    use crate::isometries::{BruhatIsometry, Translation};
    use crate::jmodule::ModuleVector;
    use crate::scalar::{Field, Scalar};

    /// `⟨σ⟩` with `σ` labelled `S`.
    pub fn sigma(field: Field, n: usize, word_length: usize) -> Result<GroupSpec> {
        let s = Generator { label: "S".to_string(), lift: BruhatIsometry::sigma(field, n - 1).lift() };
        GroupSpec::new(field, n, vec![s], vec![], word_length, 0.0, 0)
    }

    /// The modular group over the reals with `n = 2`: `T` is the Heisenberg
    /// translation by `u₀ = √2`, which becomes `w ↦ w + 1` in the upper
    /// half-plane picture, and `S` is `σ`, which becomes `w ↦ −1/w`.
    pub fn modular(word_length: usize) -> Result<GroupSpec> {
        let t = Translation::from_heisenberg(
            Scalar::zero(Field::Real),
            ModuleVector::from_reals(Field::Real, &[core::f64::consts::SQRT_2]),
        );
        let gens = vec![
            Generator { label: "T".to_string(), lift: BruhatIsometry::translation(t).lift() },
            Generator { label: "S".to_string(), lift: BruhatIsometry::sigma(Field::Real, 1).lift() },
        ];
        GroupSpec::new(Field::Real, 2, gens, vec!["T".to_string()], word_length, 0.0, 0)
    }
}
