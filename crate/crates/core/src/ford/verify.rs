use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::enumerate::{enumerate, Enumeration};
use super::region::{reduce, FordRegion, Membership, RadiusStats, ReduceError};
use super::{GroupSpec, Tolerances, DEFAULT_BUDGET};
use crate::cygan::cygan_h;
use crate::error::{Error, Result};
use crate::isometries::{Isometry, MatrixLift};
use crate::models::HPoint;
use crate::sampling;
use crate::spheres::{isometric_sphere, IsometricSphere};

/// What the sampled checks cannot establish.
pub const ASSUMPTIONS: [&str; 2] = [
    "infinity is assumed to be an ordinary point of the group; this is not certified",
    "discreteness and the fundamental-region hypotheses are checked on samples of a truncated word ball, not decided",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    /// Heisenberg coordinates of samples are uniform in `[-window, window]`.
    pub window: f64,
    /// Sample heights are log-uniform in `[min_height, max_height]`.
    pub min_height: f64,
    pub max_height: f64,
    pub budget: usize,
    /// Witnesses kept per failure kind.
    pub max_witnesses: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 10_000,
            seed: 0,
            window: 2.0,
            min_height: 0.01,
            max_height: 100.0,
            budget: DEFAULT_BUDGET,
            max_witnesses: 16,
        }
    }
}

/// A strictly interior sample moved strictly inside by a group element.
#[derive(Clone, Debug, PartialEq)]
pub struct DisjointnessWitness {
    pub sample: u64,
    pub point: HPoint,
    pub word: String,
    pub image: HPoint,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoveringFailure {
    BudgetExhausted { steps: usize },
    /// The reduced point is outside the region.
    OutsideRegion { word: Option<String> },
    /// The reduced point lies inside an enumerated sphere, so its height is
    /// not maximal in the orbit.
    InsideSphere { word: String },
    Error(Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoveringWitness {
    pub sample: u64,
    pub point: HPoint,
    pub reached: Option<HPoint>,
    pub word: Option<String>,
    pub failure: CoveringFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampleOutcome {
    pub index: u64,
    pub point: HPoint,
    pub membership: Membership,
    pub disjointness: Option<DisjointnessWitness>,
    pub covering: core::result::Result<(), CoveringWitness>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub samples: usize,
    pub seed: u64,
    pub inside: usize,
    pub boundary: usize,
    pub outside: usize,
    pub elements_checked: usize,
    pub disjointness_violations: usize,
    pub covered: usize,
    pub covering_failures: usize,
    pub disjointness_witnesses: Vec<DisjointnessWitness>,
    pub covering_witnesses: Vec<CoveringWitness>,
    pub radius_stats: RadiusStats,
    pub assumptions: Vec<&'static str>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.disjointness_violations == 0 && self.covering_failures == 0
    }
}

/// Per-sample checks of the fundamental-region axioms. Each sample draws from
/// its own ChaCha stream, so samples can be checked in any order or in
/// parallel and merged by index.
pub struct Verifier<'a> {
    spec: &'a GroupSpec,
    region: &'a FordRegion,
    tol: Tolerances,
    opts: VerifyOptions,
    elements: Vec<(String, MatrixLift)>,
    /// Every enumerated sphere, without truncation, by decreasing radius.
    spheres: Vec<IsometricSphere>,
}

impl<'a> Verifier<'a> {
    pub fn new(spec: &'a GroupSpec, region: &'a FordRegion, tol: &Tolerances, opts: &VerifyOptions) -> Result<Self> {
        Self::with_enumeration(spec, region, &enumerate(spec, tol), tol, opts)
    }

    pub fn with_enumeration(
        spec: &'a GroupSpec,
        region: &'a FordRegion,
        en: &Enumeration,
        tol: &Tolerances,
        opts: &VerifyOptions,
    ) -> Result<Self> {
        if !(opts.window > 0.0 && opts.min_height > 0.0 && opts.max_height >= opts.min_height) {
            return Err(Error::InvalidSpec("sampling window and height range must be positive".into()));
        }
        let elements = en.elements.iter().map(|e| (e.label.clone(), e.lift.clone())).collect();
        let mut spheres = Vec::new();
        for e in en.general() {
            spheres.push(isometric_sphere(&e.lift)?.with_word(e.label.clone()));
        }
        spheres.sort_by(|a, b| b.radius.total_cmp(&a.radius));
        Ok(Verifier { spec, region, tol: *tol, opts: *opts, elements, spheres })
    }

    pub fn options(&self) -> &VerifyOptions {
        &self.opts
    }

    pub fn sample_point(&self, index: u64) -> HPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(self.opts.seed);
        rng.set_stream(index);
        let o = &self.opts;
        sampling::interior_point(&mut rng, self.spec.field, self.spec.v_len(), o.window, o.min_height, o.max_height)
    }

    fn inside_enumerated_sphere(&self, z: &HPoint) -> Result<Option<String>> {
        let h = crate::models::height_h(z)?;
        let floor = crate::float::sqrt(h);
        for s in &self.spheres {
            if s.radius * (1.0 + self.tol.sphere_band) < floor {
                break;
            }
            if cygan_h(z, &s.center)? / s.radius < 1.0 - self.tol.sphere_band {
                return Ok(Some(s.word.clone().unwrap_or_default()));
            }
        }
        Ok(None)
    }

    fn check_covering(&self, index: u64, z: &HPoint) -> core::result::Result<(), CoveringWitness> {
        let fail = |reached: Option<HPoint>, word: Option<String>, failure| CoveringWitness {
            sample: index,
            point: z.clone(),
            reached,
            word,
            failure,
        };
        let r = match reduce(self.spec, self.region, z, self.opts.budget, &self.tol) {
            Ok(r) => r,
            Err(ReduceError::BudgetExhausted(r)) => {
                let word = self.spec.format_word(&r.word);
                return Err(fail(Some(r.image), Some(word), CoveringFailure::BudgetExhausted { steps: r.steps }));
            }
            Err(ReduceError::Failed(e)) => return Err(fail(None, None, CoveringFailure::Error(e))),
        };
        let word = Some(self.spec.format_word(&r.word));
        match self.region.contains(&r.image, &self.tol) {
            Ok(c) if c.membership == Membership::Outside => {
                return Err(fail(Some(r.image), word, CoveringFailure::OutsideRegion { word: c.word }));
            }
            Ok(_) => {}
            Err(e) => return Err(fail(Some(r.image), word, CoveringFailure::Error(e))),
        }
        match self.inside_enumerated_sphere(&r.image) {
            Ok(None) => Ok(()),
            Ok(Some(w)) => Err(fail(Some(r.image), word, CoveringFailure::InsideSphere { word: w })),
            Err(e) => Err(fail(Some(r.image), word, CoveringFailure::Error(e))),
        }
    }

    pub fn check(&self, index: u64) -> Result<SampleOutcome> {
        let z = self.sample_point(index);
        let membership = self.region.contains(&z, &self.tol)?.membership;
        let mut disjointness = None;
        if membership == Membership::Inside {
            for (word, g) in &self.elements {
                let image = g.act(&z);
                if image.is_interior() && self.region.contains(&image, &self.tol)?.membership == Membership::Inside {
                    disjointness = Some(DisjointnessWitness { sample: index, point: z.clone(), word: word.clone(), image });
                    break;
                }
            }
        }
        let covering = self.check_covering(index, &z);
        Ok(SampleOutcome { index, point: z, membership, disjointness, covering })
    }

    /// Merges outcomes, which must be sorted by index.
    pub fn report(&self, outcomes: Vec<SampleOutcome>) -> VerificationReport {
        let mut r = VerificationReport {
            samples: outcomes.len(),
            seed: self.opts.seed,
            inside: 0,
            boundary: 0,
            outside: 0,
            elements_checked: self.elements.len(),
            disjointness_violations: 0,
            covered: 0,
            covering_failures: 0,
            disjointness_witnesses: Vec::new(),
            covering_witnesses: Vec::new(),
            radius_stats: self.region.radius_stats(),
            assumptions: ASSUMPTIONS.to_vec(),
        };
        for o in outcomes {
            match o.membership {
                Membership::Inside => r.inside += 1,
                Membership::Boundary => r.boundary += 1,
                Membership::Outside => r.outside += 1,
            }
            if let Some(w) = o.disjointness {
                r.disjointness_violations += 1;
                if r.disjointness_witnesses.len() < self.opts.max_witnesses {
                    r.disjointness_witnesses.push(w);
                }
            }
            match o.covering {
                Ok(()) => r.covered += 1,
                Err(w) => {
                    r.covering_failures += 1;
                    if r.covering_witnesses.len() < self.opts.max_witnesses {
                        r.covering_witnesses.push(w);
                    }
                }
            }
        }
        r
    }
}

/// Sequential verification; see [`Verifier`] for the parallel building
/// blocks.
pub fn verify_region(
    spec: &GroupSpec,
    region: &FordRegion,
    tol: &Tolerances,
    opts: &VerifyOptions,
) -> Result<VerificationReport> {
    let v = Verifier::new(spec, region, tol, opts)?;
    let outcomes = (0..opts.samples as u64).map(|i| v.check(i)).collect::<Result<Vec<_>>>()?;
    Ok(v.report(outcomes))
}
