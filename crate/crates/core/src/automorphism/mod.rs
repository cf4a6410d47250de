//! Automorphism generators, edge orbits and a brute-force oracle.

mod brute;
mod orbits;
mod perm;
mod refine;
mod search;

pub use brute::{brute_force_automorphisms, BRUTE_FORCE_MAX_VERTICES};
pub use orbits::{edge_equivalence_classes, vertex_orbits, EdgeClass, EdgeClassPartition};
pub use perm::{GeneratorSet, Permutation};
pub use refine::{refine_partition, OrderedPartition};
pub use search::{
    find_automorphism_generators, find_automorphism_generators_with_cap, DEFAULT_SEARCH_CAP,
};

use crate::error::Result;
use crate::graph::Graph;

/// Generator search followed by edge-orbit computation.
pub fn edge_classes(g: &Graph) -> Result<EdgeClassPartition> {
    let gens = find_automorphism_generators(g)?;
    edge_equivalence_classes(g, &gens)
}
