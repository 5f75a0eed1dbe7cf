use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use super::enumerate::{enumerate, flatten, Enumeration, NearIndex};
use super::{GroupSpec, Tolerances, Word};
use crate::cygan::cygan_h_coords;
use crate::error::{Error, Result};
use crate::float;
use crate::isometries::{bruhat_decompose, Isometry, MatrixLift, Translation};
use crate::jmodule::{bracket_unchecked, CvPair};
use crate::models::{siegel_height, HPoint};
use crate::spheres::{isometric_sphere, IsometricSphere};

/// Direction a slab is cut across.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlabKind {
    /// Translation with a non-zero module part; the coordinate is
    /// `⟨v, u₀⟩/|u₀|²`.
    Module,
    /// Translation along the center only; the coordinate is
    /// `⟨Im ζ, Im τ₀⟩/|Im τ₀|²`.
    Center,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Slab {
    pub label: String,
    pub kind: SlabKind,
    pub translation: Translation,
}

impl Slab {
    /// Coordinate that the slab's translation raises by exactly one.
    pub fn coordinate(&self, p: &CvPair) -> f64 {
        match self.kind {
            SlabKind::Module => p.v.dot(&self.translation.u0) / self.translation.u0.norm_sqr(),
            SlabKind::Center => {
                let w = self.translation.tau0.im();
                p.zeta.im().dot(&w) / w.norm_sqr()
            }
        }
    }

    /// The translation raised to an integer power.
    pub fn power(&self, k: i64) -> Translation {
        let k = k as f64;
        Translation::from_heisenberg(self.translation.tau0.im().scale(k), self.translation.u0.scale(k))
    }
}

/// Open fundamental region for the declared stabilizer of `∞`.
#[derive(Clone, Debug, PartialEq)]
pub enum StabilizerDomain {
    /// Trivial stabilizer.
    WholeSpace,
    /// `|coordinate| < ½` for every slab; module slabs come first.
    TranslationSlabs(Vec<Slab>),
}

impl StabilizerDomain {
    /// Slab domain for commuting Heisenberg translations whose module parts
    /// are pairwise orthogonal and whose pure center parts are pairwise
    /// orthogonal. Anything else is rejected.
    pub fn from_generators(gens: &[(String, MatrixLift)]) -> Result<StabilizerDomain> {
        if gens.is_empty() {
            return Ok(StabilizerDomain::WholeSpace);
        }
        let unsupported = |label: &str, reason: String| Error::UnsupportedStabilizer { label: label.to_string(), reason };
        let mut module = Vec::new();
        let mut center = Vec::new();
        for (label, lift) in gens {
            let b = bruhat_decompose(lift)?;
            if b.inversion {
                return Err(Error::NonStabilizer);
            }
            if (b.t - 1.0).abs() > 1e-9 {
                return Err(unsupported(label, format!("dilation factor {}", b.t)));
            }
            if !b.rot.is_identity(1e-9) {
                return Err(unsupported(label, "non-trivial rotation part".into()));
            }
            let n = b.n2;
            let u2 = n.u0.norm_sqr();
            let w2 = n.tau0.im().norm_sqr();
            let slab = |kind| Slab { label: label.clone(), kind, translation: n.clone() };
            if u2 > 1e-18 {
                module.push(slab(SlabKind::Module));
            } else if w2 > 1e-18 {
                center.push(slab(SlabKind::Center));
            } else {
                return Err(unsupported(label, "acts as the identity".into()));
            }
        }
        for (i, a) in module.iter().enumerate() {
            for b in &module[..i] {
                let (ua, ub) = (&a.translation.u0, &b.translation.u0);
                let scale = ua.norm() * ub.norm();
                if ua.dot(ub).abs() > 1e-9 * scale {
                    return Err(unsupported(&a.label, format!("module part not orthogonal to '{}'", b.label)));
                }
                if bracket_unchecked(ua, ub).norm() > 1e-9 * scale {
                    return Err(unsupported(&a.label, format!("does not commute with '{}'", b.label)));
                }
            }
        }
        for (i, a) in center.iter().enumerate() {
            for b in &center[..i] {
                let (wa, wb) = (a.translation.tau0.im(), b.translation.tau0.im());
                if wa.dot(&wb).abs() > 1e-9 * wa.norm() * wb.norm() {
                    return Err(unsupported(&a.label, format!("center part not orthogonal to '{}'", b.label)));
                }
            }
        }
        module.extend(center);
        Ok(StabilizerDomain::TranslationSlabs(module))
    }

    pub fn slabs(&self) -> &[Slab] {
        match self {
            StabilizerDomain::WholeSpace => &[],
            StabilizerDomain::TranslationSlabs(s) => s,
        }
    }

    /// Membership in the slab domain and the label of a violated slab.
    pub fn membership(&self, p: &CvPair, band: f64) -> (Membership, Option<&str>) {
        let mut result: (Membership, Option<&str>) = (Membership::Inside, None);
        for s in self.slabs() {
            let f = s.coordinate(p).abs();
            if f > 0.5 + band {
                return (Membership::Outside, Some(s.label.as_str()));
            }
            if f >= 0.5 - band {
                result = (Membership::Boundary, Some(s.label.as_str()));
            }
        }
        result
    }

    /// Moves `p` into the closed slab domain. Returns the point and the
    /// applied powers `(slab index, k)` in order of application.
    pub fn normalize(&self, p: &CvPair) -> (CvPair, Vec<(usize, i64)>) {
        let mut q = p.clone();
        let mut moves = Vec::new();
        for (i, s) in self.slabs().iter().enumerate() {
            let k = -float::round(s.coordinate(&q));
            if k != 0.0 {
                let k = k as i64;
                q = s.power(k).apply(&q);
                moves.push((i, k));
            }
        }
        (q, moves)
    }

    /// Whether the translation `n` lies in the lattice spanned by the slabs.
    fn contains_translation(&self, n: &Translation) -> bool {
        let (q, _) = self.normalize(&CvPair::new(n.tau0, n.u0.clone()));
        let scale = n.tau0.norm().max(n.u0.norm()).max(1.0);
        q.norm() <= 1e-6 * scale
    }
}

/// Three-way membership answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

impl fmt::Display for Membership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Membership::Inside => "Inside",
            Membership::Boundary => "Boundary",
            Membership::Outside => "Outside",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Containment {
    pub membership: Membership,
    /// Word of the deepest violated sphere, or the label of a violated slab.
    pub word: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Truncation {
    pub word_length: usize,
    pub min_radius: f64,
    pub dedup: f64,
    /// Distinct non-identity elements found.
    pub elements: usize,
    pub stabilizer_elements: usize,
    /// Spheres below `min_radius`.
    pub discarded_small: usize,
    /// Spheres equal to an earlier one.
    pub duplicates: usize,
    /// Spheres inside a larger concentric one.
    pub dominated: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionWarning {
    /// No sphere survived; the region is the stabilizer domain.
    EmptyRegion,
    /// Enumerated elements fixing `∞` outside the declared translation
    /// lattice; the stabilizer domain is then too large.
    UndeclaredStabilizers { count: usize, examples: Vec<String> },
}

impl fmt::Display for RegionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionWarning::EmptyRegion => f.write_str("no isometric sphere retained; region is the stabilizer domain"),
            RegionWarning::UndeclaredStabilizers { count, examples } => {
                write!(f, "{count} enumerated stabilizer elements outside the declared lattice (e.g. {})", examples.join(", "))
            }
        }
    }
}

/// Group element behind a retained sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionElement {
    pub word: Word,
    pub lift: MatrixLift,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusStats {
    pub count: usize,
    pub max: f64,
    pub min: f64,
    /// `(threshold, number of spheres with radius ≥ threshold)`.
    pub above: Vec<(f64, usize)>,
    pub discarded_small: usize,
}

/// `F_∞ ∩ ⋂ Ext I(g)` truncated to a word ball.
#[derive(Clone, Debug, PartialEq)]
pub struct FordRegion {
    /// Sorted by decreasing radius.
    pub spheres: Vec<IsometricSphere>,
    /// Parallel to `spheres`, or empty for regions read back from disk.
    pub elements: Vec<RegionElement>,
    pub stabilizer: StabilizerDomain,
    pub truncation: Truncation,
    pub warnings: Vec<RegionWarning>,
}

struct Scan {
    deepest: Option<(usize, f64)>,
    on_sphere: Option<usize>,
}

impl FordRegion {
    /// Region from stored parts; spheres are re-sorted by radius.
    pub fn from_parts(
        mut spheres: Vec<IsometricSphere>,
        stabilizer: StabilizerDomain,
        truncation: Truncation,
    ) -> Result<FordRegion> {
        for s in &spheres {
            if !(s.radius > 0.0 && s.radius.is_finite()) {
                return Err(Error::InvalidSpec(format!("sphere radius must be positive, got {}", s.radius)));
            }
            if !s.center.is_boundary() {
                return Err(Error::InvalidSpec("sphere center must be a finite boundary point".into()));
            }
        }
        spheres.sort_by(|a, b| b.radius.total_cmp(&a.radius));
        let warnings = if spheres.is_empty() { alloc::vec![RegionWarning::EmptyRegion] } else { Vec::new() };
        Ok(FordRegion { spheres, elements: Vec::new(), stabilizer, truncation, warnings })
    }

    pub fn radius_stats(&self) -> RadiusStats {
        let radii = self.spheres.iter().map(|s| s.radius);
        RadiusStats {
            count: self.spheres.len(),
            max: radii.clone().fold(0.0, f64::max),
            min: radii.clone().fold(f64::INFINITY, f64::min),
            above: [1.0, 0.5, 0.25, 0.125, 0.0625]
                .iter()
                .map(|&t| (t, self.spheres.iter().filter(|s| s.radius >= t).count()))
                .collect(),
            discarded_small: self.truncation.discarded_small,
        }
    }

    /// Spheres are sorted by radius and `ρ ≥ height^{1/2}`, so the scan
    /// stops once the radius drops below that bound.
    fn scan(&self, p: &CvPair, height: f64, band: f64) -> Scan {
        let floor = float::sqrt(height.max(0.0));
        let mut out = Scan { deepest: None, on_sphere: None };
        for (i, s) in self.spheres.iter().enumerate() {
            if s.radius * (1.0 + band) < floor {
                break;
            }
            let c = s.center.coords().expect("finite sphere center");
            let ratio = cygan_h_coords(p, height, c, 0.0) / s.radius;
            if ratio < 1.0 - band {
                if out.deepest.is_none_or(|(_, r)| ratio < r) {
                    out.deepest = Some((i, ratio));
                }
            } else if ratio <= 1.0 + band && out.on_sphere.is_none() {
                out.on_sphere = Some(i);
            }
        }
        out
    }

    fn interior_coords(z: &HPoint) -> Result<(&CvPair, f64)> {
        let p = z.finite()?;
        let h = siegel_height(p);
        if !z.is_interior() || h <= 0.0 {
            return Err(Error::OutsideDomain { height: h });
        }
        Ok((p, h))
    }

    /// Inside iff `z` is in the open stabilizer domain and strictly outside
    /// every retained sphere; `Boundary` within the tolerance bands.
    pub fn contains(&self, z: &HPoint, tol: &Tolerances) -> Result<Containment> {
        let (p, h) = Self::interior_coords(z)?;
        let scan = self.scan(p, h, tol.sphere_band);
        let word = |i: usize| self.spheres[i].word.clone();
        if let Some((i, _)) = scan.deepest {
            return Ok(Containment { membership: Membership::Outside, word: word(i) });
        }
        let (slab, label) = self.stabilizer.membership(p, tol.slab_band);
        let label = label.map(str::to_string);
        Ok(match (slab, scan.on_sphere) {
            (Membership::Outside, _) => Containment { membership: Membership::Outside, word: label },
            (_, Some(i)) => Containment { membership: Membership::Boundary, word: word(i) },
            (Membership::Boundary, None) => Containment { membership: Membership::Boundary, word: label },
            (Membership::Inside, None) => Containment { membership: Membership::Inside, word: None },
        })
    }

    /// Index and distance ratio of the retained sphere whose interior
    /// contains `z` most deeply.
    pub fn deepest_sphere(&self, z: &HPoint, tol: &Tolerances) -> Result<Option<(usize, f64)>> {
        let (p, h) = Self::interior_coords(z)?;
        Ok(self.scan(p, h, tol.sphere_band).deepest)
    }
}

/// Region from a precomputed enumeration.
pub fn compute_region_from(spec: &GroupSpec, en: &Enumeration, tol: &Tolerances) -> Result<FordRegion> {
    let declared: Vec<(String, MatrixLift)> = spec
        .generators
        .iter()
        .filter(|g| spec.stabilizer_labels.contains(&g.label))
        .map(|g| (g.label.clone(), g.lift.clone()))
        .collect();
    let stabilizer = StabilizerDomain::from_generators(&declared)?;

    let mut truncation = Truncation {
        word_length: spec.word_length,
        min_radius: spec.min_radius,
        dedup: tol.dedup,
        elements: en.elements.len(),
        stabilizer_elements: en.stabilizers().count(),
        discarded_small: 0,
        duplicates: 0,
        dominated: 0,
    };

    let mut spheres: Vec<(IsometricSphere, RegionElement)> = Vec::new();
    let mut centers = NearIndex::new(tol.dedup);
    for e in en.general() {
        let sphere = isometric_sphere(&e.lift)?.with_word(e.label.clone());
        if sphere.radius < spec.min_radius {
            truncation.discarded_small += 1;
            continue;
        }
        let mut key = Vec::new();
        flatten(sphere.center.coords().expect("finite center"), &mut key);
        let element = RegionElement { word: e.word.clone(), lift: e.lift.clone() };
        match centers.find(&key) {
            Some(j) => {
                let old = spheres[j].0.radius;
                if (sphere.radius - old).abs() <= tol.dedup * old.max(1.0) {
                    truncation.duplicates += 1;
                } else {
                    truncation.dominated += 1;
                    if sphere.radius > old {
                        centers.replace(j, key);
                        spheres[j] = (sphere, element);
                    }
                }
            }
            None => {
                centers.insert(key);
                spheres.push((sphere, element));
            }
        }
    }
    spheres.sort_by(|a, b| b.0.radius.total_cmp(&a.0.radius));

    let mut warnings = Vec::new();
    if spheres.is_empty() {
        warnings.push(RegionWarning::EmptyRegion);
    }
    let mut undeclared = Vec::new();
    for e in en.stabilizers() {
        let inside = match bruhat_decompose(&e.lift) {
            Ok(b) => (b.t - 1.0).abs() <= 1e-9 && b.rot.is_identity(1e-9) && {
                !stabilizer.slabs().is_empty() && stabilizer.contains_translation(&b.n2)
            },
            Err(_) => false,
        };
        if !inside {
            undeclared.push(e.label.clone());
        }
    }
    if !undeclared.is_empty() {
        let count = undeclared.len();
        undeclared.truncate(5);
        warnings.push(RegionWarning::UndeclaredStabilizers { count, examples: undeclared });
    }

    let (spheres, elements) = spheres.into_iter().unzip();
    Ok(FordRegion { spheres, elements, stabilizer, truncation, warnings })
}

/// Enumerates the word ball and builds the truncated Ford region.
pub fn compute_region(spec: &GroupSpec, tol: &Tolerances) -> Result<FordRegion> {
    compute_region_from(spec, &enumerate(spec, tol), tol)
}

/// Result of a reduction: `image = word(start)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction {
    pub word: Word,
    pub image: HPoint,
    /// Sphere moves made.
    pub steps: usize,
    /// Height before the first and after every sphere move.
    pub heights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReduceError {
    /// The budget ran out; carries the state reached so far.
    BudgetExhausted(Reduction),
    Failed(Error),
}

impl From<Error> for ReduceError {
    fn from(e: Error) -> Self {
        ReduceError::Failed(e)
    }
}

impl fmt::Display for ReduceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReduceError::BudgetExhausted(r) => write!(f, "{}", Error::BudgetExhausted { steps: r.steps }),
            ReduceError::Failed(e) => write!(f, "{e}"),
        }
    }
}

/// Height maximisation: alternately move into the stabilizer domain and
/// apply the element of the deepest retained sphere containing the point,
/// until no retained sphere contains it.
pub fn reduce(
    spec: &GroupSpec,
    region: &FordRegion,
    z: &HPoint,
    budget: usize,
    tol: &Tolerances,
) -> core::result::Result<Reduction, ReduceError> {
    if region.elements.len() != region.spheres.len() {
        return Err(Error::InvalidSpec("region carries no group elements; rebuild it from the spec".into()).into());
    }
    let slab_gens: Vec<usize> = region
        .stabilizer
        .slabs()
        .iter()
        .map(|s| spec.generator_index(&s.label).ok_or_else(|| Error::UnknownLetter(s.label.clone())))
        .collect::<Result<_>>()?;

    let (p, h) = FordRegion::interior_coords(z)?;
    let mut state = Reduction { word: Word::identity(), image: HPoint::Interior(p.clone()), steps: 0, heights: alloc::vec![h] };
    loop {
        let (q, moves) = region.stabilizer.normalize(state.image.finite()?);
        for (slab, k) in moves {
            state.word = Word::power(slab_gens[slab], k).compose(&state.word);
        }
        state.image = HPoint::Interior(q);
        let Some((i, _)) = region.deepest_sphere(&state.image, tol)? else {
            return Ok(state);
        };
        if state.steps >= budget {
            return Err(ReduceError::BudgetExhausted(state));
        }
        let before = *state.heights.last().unwrap();
        let next = region.elements[i].lift.act(&state.image);
        let after = siegel_height(next.finite()?);
        if after < before * (1.0 - tol.height_slack) {
            return Err(Error::HeightDecreased { before, after }.into());
        }
        state.image = next;
        state.word = region.elements[i].word.compose(&state.word);
        state.steps += 1;
        state.heights.push(after);
    }
}
