//! Automorphism-group generators by individualization–refinement.
//!
//! The search walks a first path of the search tree (always individualizing
//! the smallest vertex of the first smallest non-singleton cell) down to a
//! discrete leaf. Then, from the deepest level upwards, every other vertex of
//! that level's target cell that is not yet known to share an orbit with the
//! first-path choice is individualized and its subtree explored for a leaf
//! that induces an automorphism. Generators found at level `k` fix the first
//! `k` individualized vertices, so the collected set generates the whole
//! group through the stabilizer chain.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::unionfind::DisjointSets;

use super::perm::{GeneratorSet, Permutation};
use super::refine::{refine_partition, OrderedPartition};

/// Default vertex-count limit for the generator search.
pub const DEFAULT_SEARCH_CAP: usize = 256;

pub fn find_automorphism_generators(g: &Graph) -> Result<GeneratorSet> {
    find_automorphism_generators_with_cap(g, DEFAULT_SEARCH_CAP)
}

pub fn find_automorphism_generators_with_cap(g: &Graph, cap: usize) -> Result<GeneratorSet> {
    if g.n() > cap {
        return Err(Error::Resource(format!(
            "automorphism search is capped at {cap} vertices, graph has {}",
            g.n()
        )));
    }
    let n = g.n();
    if n <= 1 {
        return Ok(GeneratorSet::trivial(n));
    }

    // first path
    let mut path: Vec<(OrderedPartition, usize, usize)> = Vec::new();
    let mut invariants = Vec::new();
    let mut node = refine_partition(g, &OrderedPartition::unit(n));
    invariants.push(node_invariant(g, &node));
    while let Some(t) = node.target_cell() {
        let v = node.cells()[t][0];
        let child = refine_partition(g, &node.individualize(v));
        path.push((node, t, v));
        invariants.push(node_invariant(g, &child));
        node = child;
    }
    let search = TreeSearch {
        g,
        first_leaf: node.leaf_order(),
        invariants,
    };

    let mut generators: Vec<Permutation> = Vec::new();
    let mut orbits = DisjointSets::new(n);
    for (level, (partition, t, v)) in path.iter().enumerate().rev() {
        for &w in &partition.cells()[*t] {
            if w == *v || orbits.find(w) == orbits.find(*v) {
                continue;
            }
            let child = refine_partition(g, &partition.individualize(w));
            if let Some(perm) = search.find_leaf(&child, level + 1) {
                for x in 0..n {
                    orbits.union(x, perm.apply(x));
                }
                generators.push(perm);
            }
        }
    }
    GeneratorSet::new(n, generators)
}

struct TreeSearch<'a> {
    g: &'a Graph,
    first_leaf: Vec<usize>,
    invariants: Vec<Vec<usize>>,
}

impl TreeSearch<'_> {
    /// Depth-first search below `node` (at `level`) for a leaf equivalent to
    /// the first leaf.
    fn find_leaf(&self, node: &OrderedPartition, level: usize) -> Option<Permutation> {
        if self.invariants.get(level) != Some(&node_invariant(self.g, node)) {
            return None;
        }
        let Some(t) = node.target_cell() else {
            let leaf = node.leaf_order();
            let mut map = vec![0; self.g.n()];
            for (&a, &b) in self.first_leaf.iter().zip(&leaf) {
                map[a] = b;
            }
            let perm = Permutation::from_images(map).expect("leaf orders are bijections");
            return perm.is_automorphism_of(self.g).then_some(perm);
        };
        node.cells()[t].iter().find_map(|&u| {
            let child = refine_partition(self.g, &node.individualize(u));
            self.find_leaf(&child, level + 1)
        })
    }
}

/// Label-independent summary of an equitable partition: the cell sizes and
/// the quotient matrix of neighbour counts between cells.
fn node_invariant(g: &Graph, p: &OrderedPartition) -> Vec<usize> {
    let k = p.len();
    let mut cell_of = vec![0; g.n()];
    for (i, cell) in p.cells().iter().enumerate() {
        for &v in cell {
            cell_of[v] = i;
        }
    }
    let mut inv = p.shape();
    for cell in p.cells() {
        let mut row = vec![0usize; k];
        for &w in g.neighbors(cell[0]) {
            row[cell_of[w]] += 1;
        }
        inv.extend(row);
    }
    inv
}
