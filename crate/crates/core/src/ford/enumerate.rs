use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{GroupSpec, Tolerances, Word};
use crate::float;
use crate::isometries::{Isometry, MatrixLift};
use crate::jmodule::{CvPair, ModuleVector};
use crate::models::HPoint;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    /// Fixes `∞`.
    Stabilizer,
    /// Has an isometric sphere.
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WordElement {
    pub word: Word,
    pub label: String,
    pub lift: MatrixLift,
    pub kind: ElementKind,
}

/// Distinct non-identity elements of the word ball, in breadth-first order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Enumeration {
    pub elements: Vec<WordElement>,
    /// Reduced words that evaluated to an element already found.
    pub duplicates: usize,
    /// Non-empty reduced words that evaluated to the identity.
    pub identity_words: usize,
}

impl Enumeration {
    pub fn general(&self) -> impl Iterator<Item = &WordElement> {
        self.elements.iter().filter(|e| e.kind == ElementKind::General)
    }

    pub fn stabilizers(&self) -> impl Iterator<Item = &WordElement> {
        self.elements.iter().filter(|e| e.kind == ElementKind::Stabilizer)
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Key(pub f64);

impl PartialEq for Key {
    fn eq(&self, o: &Self) -> bool {
        self.0.total_cmp(&o.0) == Ordering::Equal
    }
}
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.total_cmp(&o.0)
    }
}

/// Finds stored vectors within a relative tolerance; buckets on the first
/// coordinate.
pub(crate) struct NearIndex {
    map: BTreeMap<Key, Vec<usize>>,
    keys: Vec<Vec<f64>>,
    tol: f64,
}

impl NearIndex {
    pub(crate) fn new(tol: f64) -> NearIndex {
        NearIndex { map: BTreeMap::new(), keys: Vec::new(), tol }
    }

    fn close(&self, a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= self.tol * x.abs().max(1.0))
    }

    pub(crate) fn find(&self, x: &[f64]) -> Option<usize> {
        let r = 2.0 * self.tol * x[0].abs().max(1.0);
        self.map
            .range(Key(x[0] - r)..=Key(x[0] + r))
            .flat_map(|(_, ids)| ids.iter().copied())
            .find(|&i| self.close(&self.keys[i], x))
    }

    pub(crate) fn insert(&mut self, x: Vec<f64>) -> usize {
        let id = self.keys.len();
        self.map.entry(Key(x[0])).or_default().push(id);
        self.keys.push(x);
        id
    }

    pub(crate) fn replace(&mut self, id: usize, x: Vec<f64>) {
        let old = Key(self.keys[id][0]);
        if let Some(ids) = self.map.get_mut(&old) {
            ids.retain(|&i| i != id);
            if ids.is_empty() {
                self.map.remove(&old);
            }
        }
        self.map.entry(Key(x[0])).or_default().push(id);
        self.keys[id] = x;
    }
}

pub(crate) fn flatten(p: &CvPair, out: &mut Vec<f64>) {
    out.extend_from_slice(p.zeta.coords());
    for s in p.v.entries() {
        out.extend_from_slice(s.coords());
    }
}

/// Deterministic value in `[-½, ½]` that avoids simple rational patterns.
fn wobble(a: f64) -> f64 {
    let x = a * 0.618_033_988_749_895;
    x - float::round(x)
}

/// Three fixed interior points in general position.
pub(crate) fn probe_points(field: Field, v_len: usize) -> [HPoint; 3] {
    core::array::from_fn(|k| {
        let kf = k as f64 + 1.0;
        let coord = |salt: f64, j: usize| wobble(salt + 3.7 * kf + 1.3 * j as f64);
        let v: Vec<Scalar> = (0..v_len)
            .map(|i| {
                let c: Vec<f64> = (0..field.dim()).map(|j| 0.8 * coord(11.0 * (i as f64 + 1.0), j)).collect();
                Scalar::from_coords(field, &c).unwrap()
            })
            .collect();
        let v = ModuleVector::new(field, v).unwrap();
        let zc: Vec<f64> = (0..field.dim()).map(|j| 0.6 * coord(5.0, j)).collect();
        let z = Scalar::from_coords(field, &zc).unwrap().im();
        let height = 0.55 + 0.35 * kf;
        HPoint::Interior(CvPair::new(Scalar::real(height + 0.5 * v.norm_sqr()) + z, v))
    })
}

fn probe_image(g: &MatrixLift, probes: &[HPoint; 3]) -> Vec<f64> {
    let mut out = Vec::new();
    for p in probes {
        match g.act(p) {
            HPoint::Interior(q) | HPoint::Boundary(q) => flatten(&q, &mut out),
            HPoint::Infinity => out.push(f64::INFINITY),
        }
    }
    out
}

/// Breadth-first enumeration of the ball of reduced words of length at most
/// `spec.word_length`. Elements are identified by their action on three probe
/// points, so central scalar factors never split an element.
pub fn enumerate(spec: &GroupSpec, tol: &Tolerances) -> Enumeration {
    let (field, len) = (spec.field, spec.v_len());
    let probes = probe_points(field, len);
    let identity = MatrixLift::identity(field, len);
    let mut seen = NearIndex::new(tol.dedup);
    seen.insert(probe_image(&identity, &probes));

    let letters: Vec<(Word, MatrixLift)> = spec
        .generators
        .iter()
        .enumerate()
        .flat_map(|(i, g)| [(Word::letter(i, false), g.lift.clone()), (Word::letter(i, true), g.lift.inverse())])
        .collect();

    let mut out = Enumeration::default();
    let mut frontier: Vec<(Word, MatrixLift)> = alloc::vec![(Word::identity(), identity)];
    for _ in 0..spec.word_length {
        let mut next = Vec::new();
        for (word, lift) in &frontier {
            for (letter, step) in &letters {
                let (gen, inv) = letter.last_letter().unwrap();
                if word.last_letter() == Some((gen, !inv)) {
                    continue;
                }
                let g = lift.compose(step);
                let image = probe_image(&g, &probes);
                match seen.find(&image) {
                    Some(0) => {
                        out.identity_words += 1;
                        continue;
                    }
                    Some(_) => {
                        out.duplicates += 1;
                        continue;
                    }
                    None => {}
                }
                seen.insert(image);
                let w = word.compose(letter);
                let kind = if g.fixes_infinity() { ElementKind::Stabilizer } else { ElementKind::General };
                out.elements.push(WordElement { label: spec.format_word(&w), word: w.clone(), lift: g.clone(), kind });
                next.push((w, g));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    out
}
