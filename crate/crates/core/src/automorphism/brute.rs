use crate::error::{Error, Result};
use crate::graph::Graph;

use super::perm::Permutation;

/// Largest vertex count accepted by [`brute_force_automorphisms`].
pub const BRUTE_FORCE_MAX_VERTICES: usize = 10;

/// Every adjacency-preserving bijection of `g`, identity included, in
/// lexicographic order of their image arrays.
///
/// Images are assigned vertex by vertex and a partial map is abandoned as soon
/// as it disagrees with adjacency on the vertices assigned so far. No
/// refinement or orbit information is used.
pub fn brute_force_automorphisms(g: &Graph) -> Result<Vec<Permutation>> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::Resource(format!(
            "brute-force enumeration is limited to {BRUTE_FORCE_MAX_VERTICES} vertices, graph has {n}"
        )));
    }
    let mut out = Vec::new();
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    extend(g, &mut map, &mut used, &mut out);
    Ok(out)
}

fn extend(g: &Graph, map: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
    let v = map.len();
    if v == g.n() {
        out.push(
            Permutation::from_images(map.clone()).expect("complete assignment is a bijection"),
        );
        return;
    }
    for image in 0..g.n() {
        if used[image] {
            continue;
        }
        let consistent = (0..v).all(|u| g.has_edge(u, v) == g.has_edge(map[u], image));
        if !consistent {
            continue;
        }
        used[image] = true;
        map.push(image);
        extend(g, map, used, out);
        map.pop();
        used[image] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{balanced_tree, path_graph};

    #[test]
    fn small_groups() {
        assert_eq!(
            brute_force_automorphisms(&path_graph(2).unwrap())
                .unwrap()
                .len(),
            2
        );
        let p3 = brute_force_automorphisms(&path_graph(3).unwrap()).unwrap();
        assert_eq!(p3.len(), 2);
        assert!(p3[0].is_identity());
        assert_eq!(p3[1].images(), &[2, 1, 0]);
        assert_eq!(
            brute_force_automorphisms(&balanced_tree(2, 2).unwrap())
                .unwrap()
                .len(),
            8
        );
    }

    #[test]
    fn guard() {
        assert!(matches!(
            brute_force_automorphisms(&path_graph(11).unwrap()),
            Err(Error::Resource(_))
        ));
    }
}
