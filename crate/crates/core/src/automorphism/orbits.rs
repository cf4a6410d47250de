use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};
use crate::unionfind::DisjointSets;

use super::perm::GeneratorSet;
use super::refine::OrderedPartition;

/// One edge orbit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub id: usize,
    pub size: usize,
    /// Lexicographically smallest member.
    pub representative: Edge,
    pub edges: Vec<Edge>,
}

/// Partition of a graph's edges into orbits of its automorphism group.
///
/// Classes are numbered in ascending order of their representatives, which
/// makes the output independent of the generator order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassPartition {
    n: usize,
    class_of: Vec<usize>,
    classes: Vec<EdgeClass>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    classes: Vec<EdgeClass>,
}

impl EdgeClassPartition {
    fn from_groups(g: &Graph, groups: Vec<Vec<usize>>) -> Self {
        let mut class_of = vec![0; g.m()];
        let classes = groups
            .into_iter()
            .enumerate()
            .map(|(id, members)| {
                let edges: Vec<Edge> = members
                    .iter()
                    .map(|&i| {
                        class_of[i] = id;
                        g.edges()[i]
                    })
                    .collect();
                EdgeClass {
                    id,
                    size: edges.len(),
                    representative: edges[0],
                    edges,
                }
            })
            .collect();
        Self {
            n: g.n(),
            class_of,
            classes,
        }
    }

    /// Every edge in its own class (the trivial group).
    pub fn singletons(g: &Graph) -> Self {
        Self::from_groups(g, (0..g.m()).map(|i| vec![i]).collect())
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn classes(&self) -> &[EdgeClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.size).collect()
    }

    pub fn representatives(&self) -> Vec<Edge> {
        self.classes.iter().map(|c| c.representative).collect()
    }

    /// Class id of the edge at position `edge_index` of [`Graph::edges`].
    pub fn class_of_index(&self, edge_index: usize) -> usize {
        self.class_of[edge_index]
    }

    pub fn class_of(&self, g: &Graph, e: Edge) -> Option<usize> {
        g.edge_index(e).map(|i| self.class_of[i])
    }

    /// True when these classes partition exactly the edge set of `g`.
    pub fn matches_graph(&self, g: &Graph) -> bool {
        if self.n != g.n() || self.class_of.len() != g.m() {
            return false;
        }
        let mut seen = vec![false; g.m()];
        for class in &self.classes {
            for &e in &class.edges {
                match g.edge_index(e) {
                    Some(i) if !seen[i] && self.class_of[i] == class.id => seen[i] = true,
                    _ => return false,
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire {
            classes: self.classes.clone(),
        })
        .expect("edge classes serialize")
    }

    /// Reads the JSON form back, checking it against `g`.
    pub fn from_json(g: &Graph, text: &str) -> Result<Self> {
        let wire: Wire = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad edge-class JSON: {e}")))?;
        let mut groups = Vec::with_capacity(wire.classes.len());
        for class in &wire.classes {
            let mut members = Vec::new();
            for &e in &class.edges {
                members.push(g.edge_index(e).ok_or_else(|| {
                    Error::Contract(format!("class {} lists {e:?}, not an edge", class.id))
                })?);
            }
            members.sort_unstable();
            if members.is_empty() {
                return Err(Error::Contract(format!("class {} is empty", class.id)));
            }
            groups.push(members);
        }
        groups.sort();
        let parsed = Self::from_groups(g, groups);
        if !parsed.matches_graph(g) {
            return Err(Error::Contract(
                "classes do not partition the edge set".into(),
            ));
        }
        Ok(parsed)
    }
}

/// Orbits of the edge set under the group generated by `gens`.
///
/// Each generator is applied to each edge and the two are merged; the
/// connected components of this Schreier graph are exactly the orbits of the
/// generated group, so no second pass is needed.
pub fn edge_equivalence_classes(g: &Graph, gens: &GeneratorSet) -> Result<EdgeClassPartition> {
    gens.validate_for(g)?;
    let mut ds = DisjointSets::new(g.m());
    for perm in gens.generators() {
        for (i, &e) in g.edges().iter().enumerate() {
            let j = g
                .edge_index(perm.apply_edge(e))
                .expect("validated generators preserve the edge set");
            ds.union(i, j);
        }
    }
    Ok(EdgeClassPartition::from_groups(g, ds.groups()))
}

/// Vertex orbits of the generated group, cells ordered by smallest member.
pub fn vertex_orbits(g: &Graph, gens: &GeneratorSet) -> Result<OrderedPartition> {
    gens.validate_for(g)?;
    let mut ds = DisjointSets::new(g.n());
    for perm in gens.generators() {
        for v in 0..g.n() {
            ds.union(v, perm.apply(v));
        }
    }
    OrderedPartition::new(g.n(), ds.groups())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::{find_automorphism_generators, Permutation};
    use crate::graph::{full_rary_tree, path_graph, star_graph};

    #[test]
    fn rejects_non_automorphism_generator() {
        let g = path_graph(4).unwrap();
        let gens = GeneratorSet::new(
            4,
            vec![
                Permutation::from_images(vec![3, 2, 1, 0]).unwrap(),
                Permutation::swap(4, 0, 1),
            ],
        )
        .unwrap();
        match edge_equivalence_classes(&g, &gens) {
            Err(Error::Contract(msg)) => assert!(msg.contains("generator 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn star_has_one_class() {
        let g = star_graph(29).unwrap();
        let gens = find_automorphism_generators(&g).unwrap();
        let classes = edge_equivalence_classes(&g, &gens).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes.sizes(), vec![28]);
        assert_eq!(classes.representatives(), vec![(0, 1)]);
        let orbits = vertex_orbits(&g, &gens).unwrap();
        assert_eq!(orbits.len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let g = full_rary_tree(2, 10).unwrap();
        let gens = find_automorphism_generators(&g).unwrap();
        let classes = edge_equivalence_classes(&g, &gens).unwrap();
        let text = classes.to_json();
        assert!(text.starts_with("{\"classes\":[{\"id\":0,\"size\":"));
        assert_eq!(EdgeClassPartition::from_json(&g, &text).unwrap(), classes);
        assert!(EdgeClassPartition::from_json(&path_graph(10).unwrap(), &text).is_err());
    }

    #[test]
    fn trivial_group_gives_singletons() {
        let g = path_graph(4).unwrap();
        let classes = edge_equivalence_classes(&g, &GeneratorSet::trivial(4)).unwrap();
        assert_eq!(classes, EdgeClassPartition::singletons(&g));
    }
}
