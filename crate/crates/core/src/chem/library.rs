//! Fragment libraries: manifest parsing, validation, remaining-count
//! bookkeeping, and the multisets bundled with the crate.
//!
//! A manifest is a plain-text file with one `id  relative-xyz-path  count`
//! entry per line (`#` starts a comment). The entry order fixes the fragment
//! index order used by masks, count vectors and one-hot encodings.

use super::{format_formula, heavy_anchor_in, perceive_bonds, parse_xyz, AtomCloud, ChemError};
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum LibraryError {
    #[error("manifest line {line}: expected 'id path count'")]
    ManifestSyntax { line: usize },
    #[error("manifest line {line}: bad count '{token}' (must be an integer >= 1)")]
    BadCount { line: usize, token: String },
    #[error("duplicate fragment id '{id}'")]
    DuplicateId { id: String },
    #[error("cannot read '{path}': {source}")]
    MissingFile {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("no bundled fragment set named '{name}'")]
    UnknownBundledSet { name: String },
    #[error("unknown bundled fragment file '{path}'")]
    UnknownBundledFragment { path: String },
    #[error("fragment '{id}': {source}")]
    BadFragment {
        id: String,
        #[source]
        source: ChemError,
    },
    #[error("fragment '{id}' has fewer than 2 atoms")]
    TooFewAtoms { id: String },
    #[error("fragment '{id}' has no hydrogen with a heavy neighbor")]
    NoAnchorHydrogen { id: String },
    #[error("manifest has no fragment entries")]
    EmptyManifest,
    #[error("unknown fragment id '{id}'")]
    UnknownFragmentId { id: String },
    #[error("fragment {index} is exhausted")]
    Exhausted { index: usize },
}

/// One catalog entry: a rigid prior geometry plus its multiset multiplicity.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub id: String,
    pub cloud: AtomCloud,
    pub initial_count: u32,
    /// Hydrogen indices that have a heavy neighbor (legal fragment anchors).
    pub anchor_hydrogens: Vec<usize>,
}

/// An immutable fragment catalog in manifest order.
#[derive(Debug)]
pub struct FragmentLibrary {
    fragments: Vec<Fragment>,
}

impl FragmentLibrary {
    /// Load a manifest from disk; XYZ paths resolve relative to the manifest
    /// file's directory.
    pub fn load(manifest_path: &Path) -> Result<FragmentLibrary, LibraryError> {
        let text = std::fs::read_to_string(manifest_path).map_err(|source| {
            LibraryError::MissingFile { path: manifest_path.display().to_string(), source }
        })?;
        let dir = manifest_path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_manifest_text(&text, |rel| {
            let full: PathBuf = dir.join(rel);
            std::fs::read_to_string(&full)
                .map_err(|source| LibraryError::MissingFile { path: full.display().to_string(), source })
        })
    }

    /// Load one of the multisets compiled into the crate (see
    /// [`bundled_names`](Self::bundled_names)).
    pub fn bundled(name: &str) -> Result<FragmentLibrary, LibraryError> {
        let manifest = bundled::MANIFESTS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| LibraryError::UnknownBundledSet { name: name.to_string() })?;
        Self::from_manifest_text(manifest, |rel| {
            let stem = Path::new(rel)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or(rel);
            bundled::FRAGMENTS
                .iter()
                .find(|(n, _)| *n == stem)
                .map(|(_, t)| t.to_string())
                .ok_or_else(|| LibraryError::UnknownBundledFragment { path: rel.to_string() })
        })
    }

    pub fn bundled_names() -> &'static [&'static str] {
        bundled::NAMES
    }

    /// Parse manifest text, fetching each referenced XYZ via `resolve`.
    pub fn from_manifest_text(
        text: &str,
        resolve: impl Fn(&str) -> Result<String, LibraryError>,
    ) -> Result<FragmentLibrary, LibraryError> {
        let mut fragments = Vec::new();
        let mut seen: HashMap<String, ()> = HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(LibraryError::ManifestSyntax { line: line_no });
            }
            let (id, path, count_tok) = (fields[0], fields[1], fields[2]);
            let count: u32 = count_tok
                .parse()
                .ok()
                .filter(|&c| c >= 1)
                .ok_or_else(|| LibraryError::BadCount { line: line_no, token: count_tok.to_string() })?;
            if seen.insert(id.to_string(), ()).is_some() {
                return Err(LibraryError::DuplicateId { id: id.to_string() });
            }
            let xyz = resolve(path)?;
            let cloud = parse_xyz(&xyz)
                .map_err(|source| LibraryError::BadFragment { id: id.to_string(), source })?;
            fragments.push(Self::make_fragment(id.to_string(), cloud, count)?);
        }
        if fragments.is_empty() {
            return Err(LibraryError::EmptyManifest);
        }
        Ok(FragmentLibrary { fragments })
    }

    /// Build a single-entry catalog directly from a cloud (mostly for tests
    /// and ad-hoc runs).
    pub fn from_clouds(
        entries: Vec<(String, AtomCloud, u32)>,
    ) -> Result<FragmentLibrary, LibraryError> {
        let mut fragments = Vec::new();
        for (id, cloud, count) in entries {
            if count < 1 {
                return Err(LibraryError::BadCount { line: 0, token: count.to_string() });
            }
            fragments.push(Self::make_fragment(id, cloud, count)?);
        }
        if fragments.is_empty() {
            return Err(LibraryError::EmptyManifest);
        }
        Ok(FragmentLibrary { fragments })
    }

    fn make_fragment(id: String, cloud: AtomCloud, count: u32) -> Result<Fragment, LibraryError> {
        if cloud.len() < 2 {
            return Err(LibraryError::TooFewAtoms { id });
        }
        cloud
            .validate()
            .map_err(|source| LibraryError::BadFragment { id: id.clone(), source })?;
        let bonds = perceive_bonds(&cloud);
        let anchor_hydrogens: Vec<usize> = (0..cloud.len())
            .filter(|&i| {
                cloud.element(i).is_hydrogen() && heavy_anchor_in(&cloud, &bonds, i).is_ok()
            })
            .collect();
        if anchor_hydrogens.is_empty() {
            return Err(LibraryError::NoAnchorHydrogen { id });
        }
        Ok(Fragment { id, cloud, initial_count: count, anchor_hydrogens })
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    pub fn get(&self, index: usize) -> &Fragment {
        &self.fragments[index]
    }

    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.fragments.iter().position(|f| f.id == id)
    }

    /// Total placements in a full episode: the sum of initial counts.
    pub fn total_count(&self) -> u32 {
        self.fragments.iter().map(|f| f.initial_count).sum()
    }

    /// Count of atoms over the whole multiset (counts x fragment atoms).
    pub fn total_atoms(&self) -> usize {
        self.fragments.iter().map(|f| f.initial_count as usize * f.cloud.len()).sum()
    }

    pub fn total_heavy_atoms(&self) -> usize {
        self.fragments
            .iter()
            .map(|f| f.initial_count as usize * f.cloud.heavy_count())
            .sum()
    }

    /// Hill formula of the whole multiset (counts x fragment formulas).
    pub fn total_formula(&self) -> String {
        let mut counts: HashMap<&'static str, usize> = HashMap::new();
        for f in &self.fragments {
            for a in &f.cloud.atoms {
                *counts.entry(a.element.symbol()).or_insert(0) += f.initial_count as usize;
            }
        }
        format_formula(&counts)
    }

    pub fn initial_counts(&self) -> Vec<u32> {
        self.fragments.iter().map(|f| f.initial_count).collect()
    }
}

/// A fragment catalog plus the remaining-count vector of one episode.
#[derive(Clone, Debug)]
pub struct FragmentMultiset {
    library: Arc<FragmentLibrary>,
    remaining: Vec<u32>,
}

impl FragmentMultiset {
    pub fn new(library: Arc<FragmentLibrary>) -> FragmentMultiset {
        let remaining = library.initial_counts();
        FragmentMultiset { library, remaining }
    }

    pub fn library(&self) -> &FragmentLibrary {
        &self.library
    }

    pub fn library_arc(&self) -> Arc<FragmentLibrary> {
        Arc::clone(&self.library)
    }

    /// Remaining counts in manifest order (the x_F input of the policy).
    pub fn count_vector(&self) -> &[u32] {
        &self.remaining
    }

    pub fn remaining(&self, index: usize) -> u32 {
        self.remaining[index]
    }

    pub fn total_remaining(&self) -> u32 {
        self.remaining.iter().sum()
    }

    pub fn is_exhausted(&self) -> bool {
        self.remaining.iter().all(|&c| c == 0)
    }

    pub fn consume(&mut self, index: usize) -> Result<(), LibraryError> {
        if self.remaining[index] == 0 {
            return Err(LibraryError::Exhausted { index });
        }
        self.remaining[index] -= 1;
        Ok(())
    }
}

/// Load a manifest and wrap it in a fresh multiset.
pub fn load_fragment_library(manifest_path: &Path) -> Result<FragmentMultiset, LibraryError> {
    Ok(FragmentMultiset::new(Arc::new(FragmentLibrary::load(manifest_path)?)))
}

mod bundled {
    pub const NAMES: &[&str] = &[
        "toy", "druglike1", "druglike2", "druglike3", "oled1", "oled2", "oled3", "bio1", "bio2",
        "bio3",
    ];

    pub const MANIFESTS: &[(&str, &str)] = &[
        ("toy", include_str!("../../data/manifests/toy.manifest")),
        ("druglike1", include_str!("../../data/manifests/druglike1.manifest")),
        ("druglike2", include_str!("../../data/manifests/druglike2.manifest")),
        ("druglike3", include_str!("../../data/manifests/druglike3.manifest")),
        ("oled1", include_str!("../../data/manifests/oled1.manifest")),
        ("oled2", include_str!("../../data/manifests/oled2.manifest")),
        ("oled3", include_str!("../../data/manifests/oled3.manifest")),
        ("bio1", include_str!("../../data/manifests/bio1.manifest")),
        ("bio2", include_str!("../../data/manifests/bio2.manifest")),
        ("bio3", include_str!("../../data/manifests/bio3.manifest")),
    ];

    pub const FRAGMENTS: &[(&str, &str)] = &[
        ("methane", include_str!("../../data/fragments/methane.xyz")),
        ("ammonia", include_str!("../../data/fragments/ammonia.xyz")),
        ("water", include_str!("../../data/fragments/water.xyz")),
        ("ethylene", include_str!("../../data/fragments/ethylene.xyz")),
        ("acetylene", include_str!("../../data/fragments/acetylene.xyz")),
        ("acetonitrile", include_str!("../../data/fragments/acetonitrile.xyz")),
        ("cyclopropane", include_str!("../../data/fragments/cyclopropane.xyz")),
        ("acrylamide", include_str!("../../data/fragments/acrylamide.xyz")),
        ("acetamide", include_str!("../../data/fragments/acetamide.xyz")),
        ("2-methylimidazole", include_str!("../../data/fragments/2-methylimidazole.xyz")),
        ("4-methylthiazole", include_str!("../../data/fragments/4-methylthiazole.xyz")),
        ("pyrrole", include_str!("../../data/fragments/pyrrole.xyz")),
        ("pyridine", include_str!("../../data/fragments/pyridine.xyz")),
        ("pyrimidine", include_str!("../../data/fragments/pyrimidine.xyz")),
        ("pyridazine", include_str!("../../data/fragments/pyridazine.xyz")),
        ("pyrazine", include_str!("../../data/fragments/pyrazine.xyz")),
        ("morpholine", include_str!("../../data/fragments/morpholine.xyz")),
        ("hexadiene", include_str!("../../data/fragments/hexadiene.xyz")),
        ("nicotinamide", include_str!("../../data/fragments/nicotinamide.xyz")),
        ("quinoxaline", include_str!("../../data/fragments/quinoxaline.xyz")),
        ("acridine", include_str!("../../data/fragments/acridine.xyz")),
        ("coronene", include_str!("../../data/fragments/coronene.xyz")),
        ("tcnq", include_str!("../../data/fragments/tcnq.xyz")),
        ("phenoxytoluene", include_str!("../../data/fragments/phenoxytoluene.xyz")),
        ("carbazole", include_str!("../../data/fragments/carbazole.xyz")),
        ("phenylcarbazole", include_str!("../../data/fragments/phenylcarbazole.xyz")),
        ("serine", include_str!("../../data/fragments/serine.xyz")),
        ("valine", include_str!("../../data/fragments/valine.xyz")),
        ("leucine", include_str!("../../data/fragments/leucine.xyz")),
        ("aspartic-acid", include_str!("../../data/fragments/aspartic-acid.xyz")),
        ("asparagine", include_str!("../../data/fragments/asparagine.xyz")),
        ("glutamic-acid", include_str!("../../data/fragments/glutamic-acid.xyz")),
        ("arginine", include_str!("../../data/fragments/arginine.xyz")),
        ("histidine", include_str!("../../data/fragments/histidine.xyz")),
        ("tryptophan", include_str!("../../data/fragments/tryptophan.xyz")),
        ("pyrrolysine", include_str!("../../data/fragments/pyrrolysine.xyz")),
    ];
}

#[cfg(test)]
pub(crate) mod test_fixtures {
    /// Small ethanol geometry used by bond/anchor tests (generated offline,
    /// cross-checked with an independent perception script).
    pub const ETHANOL_XYZ: &str = "9\nethanol C2H6O\nC -1.164547 0.015175 0.479489\nC 0.364589 -0.012308 0.436044\nO 0.799959 -0.002866 -0.915534\nH -1.497868 0.057346 1.516417\nH -1.557673 -0.885424 0.007817\nH -1.527486 0.893181 -0.054815\nH 0.725867 -0.915479 0.927837\nH 0.758502 0.864036 0.950780\nH 1.750727 -0.132060 -0.946354\n";
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::Element;
    use crate::geometry::Vec3;

    #[test]
    fn druglike1_totals_match_reference() {
        let lib = FragmentLibrary::bundled("druglike1").unwrap();
        assert_eq!(lib.len(), 4);
        assert_eq!(lib.total_atoms(), 42);
        assert_eq!(lib.total_heavy_atoms(), 20);
        assert_eq!(lib.total_formula(), "C14H22N4OS");
        assert_eq!(lib.get(0).cloud.formula(), "C4H6N2");
    }

    #[test]
    fn oled1_total_formula() {
        let lib = FragmentLibrary::bundled("oled1").unwrap();
        assert_eq!(lib.total_formula(), "C34H23N5");
        assert_eq!(lib.total_atoms(), 62);
        assert_eq!(lib.total_heavy_atoms(), 39);
    }

    #[test]
    fn count_vector_follows_manifest_order() {
        let lib = Arc::new(FragmentLibrary::bundled("druglike1").unwrap());
        let mut ms = FragmentMultiset::new(Arc::clone(&lib));
        assert_eq!(ms.count_vector(), &[1, 1, 1, 1]);
        let cyclopropane = lib.index_of("cyclopropane").unwrap();
        ms.consume(cyclopropane).unwrap();
        assert_eq!(ms.count_vector(), &[1, 1, 0, 1]);
        assert!(ms.consume(cyclopropane).is_err());
    }

    #[test]
    fn exhausted_multiset_is_all_zero() {
        let lib = Arc::new(FragmentLibrary::bundled("toy").unwrap());
        let mut ms = FragmentMultiset::new(lib);
        for i in 0..3 {
            ms.consume(i).unwrap();
        }
        assert!(ms.is_exhausted());
        assert_eq!(ms.count_vector(), &[0, 0, 0]);
    }

    #[test]
    fn fragment_without_anchorable_hydrogen_is_rejected() {
        // two carbons, no hydrogens
        let cloud = AtomCloud::from_parts(&[
            (Element::C, Vec3::ZERO),
            (Element::C, Vec3::new(1.52, 0.0, 0.0)),
        ]);
        let err = FragmentLibrary::from_clouds(vec![("c2".into(), cloud, 1)]).unwrap_err();
        assert!(matches!(err, LibraryError::NoAnchorHydrogen { .. }));
    }

    #[test]
    fn bad_counts_and_missing_files() {
        let err = FragmentLibrary::from_manifest_text("a x.xyz 0\n", |_| Ok(String::new()))
            .unwrap_err();
        assert!(matches!(err, LibraryError::BadCount { .. }));
        let err = load_fragment_library(Path::new("/nonexistent/path.manifest")).unwrap_err();
        assert!(matches!(err, LibraryError::MissingFile { .. }));
    }

    #[test]
    fn all_bundled_sets_load_and_anchor() {
        for name in FragmentLibrary::bundled_names() {
            let lib = FragmentLibrary::bundled(name).unwrap();
            for f in lib.fragments() {
                assert!(f.cloud.len() >= 2, "{name}/{}", f.id);
                assert!(!f.anchor_hydrogens.is_empty(), "{name}/{}", f.id);
            }
        }
    }
}
