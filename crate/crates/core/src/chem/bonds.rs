//! Distance-based bond perception and anchor lookup.

use super::{AtomCloud, ChemError, BOND_PERCEPTION_FACTOR};

/// Symmetric adjacency over atom indices, no self-edges.
#[derive(Clone, Debug, PartialEq)]
pub struct BondGraph {
    adjacency: Vec<Vec<usize>>,
}

impl BondGraph {
    pub fn n_atoms(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(&j)
    }

    /// Edges with i < j.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nb)| nb.iter().filter(move |&&j| i < j).map(move |&j| (i, j)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// True when every atom is reachable from atom 0 (single atoms count as
    /// connected).
    pub fn is_connected(&self) -> bool {
        let n = self.n_atoms();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &self.adjacency[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == n
    }

    /// Connected components as lists of atom indices.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n_atoms();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for &j in &self.adjacency[i] {
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(j);
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Bond perception with the default 1.3 distance factor.
pub fn perceive_bonds(cloud: &AtomCloud) -> BondGraph {
    perceive_bonds_with(cloud, BOND_PERCEPTION_FACTOR)
}

/// Edge (i, j) iff `|r_i - r_j| <= factor * (r_cov_i + r_cov_j)`.
pub fn perceive_bonds_with(cloud: &AtomCloud, factor: f64) -> BondGraph {
    let n = cloud.len();
    let mut adjacency = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let threshold = factor
                * (cloud.element(i).covalent_radius() + cloud.element(j).covalent_radius());
            if cloud.position(i).distance(cloud.position(j)) <= threshold {
                adjacency[i].push(j);
                adjacency[j].push(i);
            }
        }
    }
    BondGraph { adjacency }
}

/// The heavy atom bonded to hydrogen `h_index`; when several, the nearest by
/// distance with ties broken toward the lowest atom index.
pub fn heavy_anchor_of(cloud: &AtomCloud, h_index: usize) -> Result<usize, ChemError> {
    heavy_anchor_in(cloud, &perceive_bonds(cloud), h_index)
}

/// Like [`heavy_anchor_of`] but reusing an already-perceived graph.
pub fn heavy_anchor_in(
    cloud: &AtomCloud,
    bonds: &BondGraph,
    h_index: usize,
) -> Result<usize, ChemError> {
    if !cloud.element(h_index).is_hydrogen() {
        return Err(ChemError::NotHydrogen { index: h_index });
    }
    let hpos = cloud.position(h_index);
    let mut best: Option<(f64, usize)> = None;
    for &j in bonds.neighbors(h_index) {
        if cloud.element(j).is_hydrogen() {
            continue;
        }
        let d = hpos.distance(cloud.position(j));
        let better = match best {
            None => true,
            Some((bd, bj)) => d < bd - 1e-12 || ((d - bd).abs() <= 1e-12 && j < bj),
        };
        if better {
            best = Some((d, j));
        }
    }
    best.map(|(_, j)| j).ok_or(ChemError::NoHeavyNeighbor { index: h_index })
}
