//! Point-cloud molecule and fragment representations.
//!
//! A molecule is an ordered list of atoms, each an element label plus a
//! Cartesian position in angstroms. Bonds are not stored; they are perceived
//! from interatomic distances when needed (see [`perceive_bonds`]).

mod bonds;
mod library;
mod xyz;

pub use bonds::{heavy_anchor_of, perceive_bonds, perceive_bonds_with, BondGraph};
pub use library::{
    load_fragment_library, Fragment, FragmentLibrary, FragmentMultiset, LibraryError,
};
pub use xyz::{parse_xyz, write_xyz};

use crate::geometry::{RigidTransform, Vec3};
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

/// Distance factor for bond perception: atoms closer than
/// `factor * (r_cov_i + r_cov_j)` are bonded.
pub const BOND_PERCEPTION_FACTOR: f64 = 1.3;

/// The supported element set.
///
/// The discriminant order fixes the one-hot feature layout used by the
/// policy networks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    C,
    H,
    N,
    O,
    F,
    S,
}

impl Element {
    pub const ALL: [Element; 6] = [Element::C, Element::H, Element::N, Element::O, Element::F, Element::S];
    pub const COUNT: usize = 6;

    pub fn from_symbol(sym: &str) -> Option<Element> {
        match sym {
            "C" => Some(Element::C),
            "H" => Some(Element::H),
            "N" => Some(Element::N),
            "O" => Some(Element::O),
            "F" => Some(Element::F),
            "S" => Some(Element::S),
            _ => None,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Element::C => "C",
            Element::H => "H",
            Element::N => "N",
            Element::O => "O",
            Element::F => "F",
            Element::S => "S",
        }
    }

    pub fn atomic_number(self) -> u8 {
        match self {
            Element::C => 6,
            Element::H => 1,
            Element::N => 7,
            Element::O => 8,
            Element::F => 9,
            Element::S => 16,
        }
    }

    /// Cordero 2008 single-bond covalent radius, angstroms.
    pub fn covalent_radius(self) -> f64 {
        match self {
            Element::C => 0.76,
            Element::H => 0.31,
            Element::N => 0.71,
            Element::O => 0.66,
            Element::F => 0.57,
            Element::S => 1.05,
        }
    }

    pub fn max_valence(self) -> u8 {
        match self {
            Element::C => 4,
            Element::H => 1,
            Element::N => 3,
            Element::O => 2,
            Element::F => 1,
            Element::S => 6,
        }
    }

    /// One-hot slot in atom feature vectors.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_hydrogen(self) -> bool {
        matches!(self, Element::H)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Atom {
    pub element: Element,
    pub position: Vec3,
    /// Index of the placement that introduced this atom, when known.
    pub provenance: Option<u32>,
}

impl Atom {
    pub fn new(element: Element, position: Vec3) -> Atom {
        Atom { element, position, provenance: None }
    }
}

/// An ordered list of atoms in 3D space.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct AtomCloud {
    pub atoms: Vec<Atom>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ChemError {
    #[error("xyz text is missing the atom-count header")]
    MissingHeader,
    #[error("bad atom count '{token}' on line 1")]
    BadCount { token: String },
    #[error("expected {expected} atom lines, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("line {line}: unknown element symbol '{symbol}'")]
    UnknownElement { line: usize, symbol: String },
    #[error("line {line}: unparsable coordinate '{token}'")]
    BadCoordinate { line: usize, token: String },
    #[error("line {line}: expected 'Symbol x y z'")]
    MalformedAtomLine { line: usize },
    #[error("operation requires a non-empty cloud")]
    EmptyCloud,
    #[error("atom {index} has a non-finite position")]
    NonFinitePosition { index: usize },
    #[error("atoms {a} and {b} share identical coordinates")]
    DuplicatePosition { a: usize, b: usize },
    #[error("atom {index} is not a hydrogen")]
    NotHydrogen { index: usize },
    #[error("hydrogen {index} has no heavy neighbor")]
    NoHeavyNeighbor { index: usize },
}

impl AtomCloud {
    pub fn new(atoms: Vec<Atom>) -> AtomCloud {
        AtomCloud { atoms }
    }

    pub fn from_parts(parts: &[(Element, Vec3)]) -> AtomCloud {
        AtomCloud { atoms: parts.iter().map(|&(e, p)| Atom::new(e, p)).collect() }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn element(&self, i: usize) -> Element {
        self.atoms[i].element
    }

    pub fn position(&self, i: usize) -> Vec3 {
        self.atoms[i].position
    }

    /// Check the structural invariants: finite positions, no two atoms at
    /// identical coordinates.
    pub fn validate(&self) -> Result<(), ChemError> {
        for (i, a) in self.atoms.iter().enumerate() {
            if !a.position.is_finite() {
                return Err(ChemError::NonFinitePosition { index: i });
            }
        }
        for i in 0..self.atoms.len() {
            for j in (i + 1)..self.atoms.len() {
                if self.atoms[i].position == self.atoms[j].position {
                    return Err(ChemError::DuplicatePosition { a: i, b: j });
                }
            }
        }
        Ok(())
    }

    pub fn heavy_count(&self) -> usize {
        self.atoms.iter().filter(|a| !a.element.is_hydrogen()).count()
    }

    pub fn hydrogen_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.element.is_hydrogen()).count()
    }

    /// Hill-order molecular formula (C, H, then remaining elements
    /// alphabetically).
    pub fn formula(&self) -> String {
        let mut counts: HashMap<&'static str, usize> = HashMap::new();
        for a in &self.atoms {
            *counts.entry(a.element.symbol()).or_insert(0) += 1;
        }
        format_formula(&counts)
    }

    pub fn heavy_centroid(&self) -> Vec3 {
        let mut sum = Vec3::ZERO;
        let mut n = 0usize;
        for a in &self.atoms {
            if !a.element.is_hydrogen() {
                sum += a.position;
                n += 1;
            }
        }
        if n == 0 {
            // all-hydrogen cloud: fall back to the plain centroid
            for a in &self.atoms {
                sum += a.position;
            }
            n = self.atoms.len();
        }
        sum / n.max(1) as f64
    }

    pub fn transformed(&self, t: &RigidTransform) -> AtomCloud {
        AtomCloud {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom { position: t.apply(a.position), ..*a })
                .collect(),
        }
    }

    pub fn translated(&self, shift: Vec3) -> AtomCloud {
        self.transformed(&RigidTransform::translation(shift))
    }

    /// Copy with atom `idx` removed; the relative order of the rest is kept.
    pub fn without_atom(&self, idx: usize) -> AtomCloud {
        let mut atoms = self.atoms.clone();
        atoms.remove(idx);
        AtomCloud { atoms }
    }

    /// Content hash with positions quantized at 1e-6 angstrom. Two clouds
    /// with the same elements and positions (to that precision) collide on
    /// purpose; used to key energy caches.
    pub fn content_key(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for a in &self.atoms {
            a.element.symbol().hash(&mut h);
            for c in [a.position.x, a.position.y, a.position.z] {
                ((c * 1e6).round() as i64).hash(&mut h);
            }
        }
        h.finish()
    }

    /// Max per-coordinate deviation against `other`, or `None` when the
    /// element sequences differ.
    pub fn max_deviation(&self, other: &AtomCloud) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.atoms.iter().zip(&other.atoms) {
            if a.element != b.element {
                return None;
            }
            worst = worst
                .max((a.position.x - b.position.x).abs())
                .max((a.position.y - b.position.y).abs())
                .max((a.position.z - b.position.z).abs());
        }
        Some(worst)
    }
}

pub(crate) fn format_formula(counts: &HashMap<&'static str, usize>) -> String {
    let mut out = String::new();
    let mut push = |sym: &str, n: usize| {
        if n == 0 {
            return;
        }
        out.push_str(sym);
        if n > 1 {
            out.push_str(&n.to_string());
        }
    };
    push("C", counts.get("C").copied().unwrap_or(0));
    push("H", counts.get("H").copied().unwrap_or(0));
    let mut rest: Vec<&&str> = counts.keys().filter(|s| **s != "C" && **s != "H").collect();
    rest.sort();
    for sym in rest {
        push(sym, counts[*sym]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_table() {
        assert_eq!(Element::ALL.len(), 6);
        for e in Element::ALL {
            assert!(e.covalent_radius() > 0.0);
            assert!(e.max_valence() >= 1);
            assert_eq!(Element::from_symbol(e.symbol()), Some(e));
        }
        assert_eq!(Element::from_symbol("Xx"), None);
    }

    #[test]
    fn hill_formula_order() {
        let cloud = AtomCloud::from_parts(&[
            (Element::S, Vec3::new(0.0, 0.0, 0.0)),
            (Element::O, Vec3::new(1.0, 0.0, 0.0)),
            (Element::N, Vec3::new(2.0, 0.0, 0.0)),
            (Element::C, Vec3::new(3.0, 0.0, 0.0)),
            (Element::H, Vec3::new(4.0, 0.0, 0.0)),
            (Element::H, Vec3::new(5.0, 0.0, 0.0)),
        ]);
        assert_eq!(cloud.formula(), "CH2NOS");
    }

    #[test]
    fn validate_rejects_duplicates_and_nan() {
        let dup = AtomCloud::from_parts(&[
            (Element::C, Vec3::ZERO),
            (Element::H, Vec3::ZERO),
        ]);
        assert_eq!(dup.validate(), Err(ChemError::DuplicatePosition { a: 0, b: 1 }));
        let nan = AtomCloud::from_parts(&[(Element::C, Vec3::new(f64::NAN, 0.0, 0.0))]);
        assert!(matches!(nan.validate(), Err(ChemError::NonFinitePosition { index: 0 })));
    }

    #[test]
    fn heavy_centroid_ignores_hydrogens() {
        let cloud = AtomCloud::from_parts(&[
            (Element::C, Vec3::new(1.0, 0.0, 0.0)),
            (Element::C, Vec3::new(-1.0, 0.0, 0.0)),
            (Element::H, Vec3::new(50.0, 50.0, 50.0)),
        ]);
        assert!((cloud.heavy_centroid() - Vec3::ZERO).norm() < 1e-12);
    }
}
