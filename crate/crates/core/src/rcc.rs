//! Reverse-causal-cone coverage: which vertices lie within `p` hops of the
//! representative edges, and how many layers it takes to reach them all.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::automorphism::EdgeClassPartition;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RccReport {
    pub p: usize,
    pub covered: Vec<usize>,
    pub uncovered: Vec<usize>,
    #[serde(skip)]
    pub per_edge: BTreeMap<Edge, Vec<usize>>,
}

impl RccReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn is_complete(&self) -> bool {
        self.uncovered.is_empty()
    }

    /// Plain-text table: one row per representative edge, then the totals.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p = {}", self.p).unwrap();
        writeln!(out, "{:<12} {:>5}  vertices", "edge", "size").unwrap();
        for (&(u, v), ball) in &self.per_edge {
            writeln!(
                out,
                "{:<12} {:>5}  {}",
                format!("({u},{v})"),
                ball.len(),
                join(ball)
            )
            .unwrap();
        }
        writeln!(
            out,
            "covered   ({}): {}",
            self.covered.len(),
            join(&self.covered)
        )
        .unwrap();
        writeln!(
            out,
            "uncovered ({}): {}",
            self.uncovered.len(),
            join(&self.uncovered)
        )
        .unwrap();
        out
    }
}

fn join(vs: &[usize]) -> String {
    vs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Vertices within graph distance `p` of either endpoint of `e`, ascending.
pub fn rcc_ball(g: &Graph, e: Edge, p: usize) -> Result<Vec<usize>> {
    if p == 0 {
        return Err(Error::InvalidArgument("depth p must be >= 1".into()));
    }
    if !g.has_edge(e.0, e.1) {
        return Err(Error::InvalidArgument(format!(
            "{e:?} is not an edge of the graph"
        )));
    }
    Ok(g.distances_from(&[e.0, e.1])
        .into_iter()
        .enumerate()
        .filter(|(_, d)| d.is_some_and(|d| d <= p))
        .map(|(v, _)| v)
        .collect())
}

pub fn combined_coverage(g: &Graph, reps: &[Edge], p: usize) -> Result<RccReport> {
    if reps.is_empty() {
        return Err(Error::Contract("no representative edges given".into()));
    }
    let mut inside = vec![false; g.n()];
    let mut per_edge = BTreeMap::new();
    for &e in reps {
        let e = (e.0.min(e.1), e.0.max(e.1));
        let ball = rcc_ball(g, e, p)?;
        for &v in &ball {
            inside[v] = true;
        }
        per_edge.insert(e, ball);
    }
    let (covered, uncovered) = (0..g.n()).partition(|&v| inside[v]);
    Ok(RccReport {
        p,
        covered,
        uncovered,
        per_edge,
    })
}

/// Smallest `p >= 1` at which the representatives' cones cover every vertex.
pub fn minimal_depth(g: &Graph, reps: &[Edge]) -> Result<usize> {
    if reps.is_empty() {
        return Err(Error::Contract("no representative edges given".into()));
    }
    if !g.is_connected() {
        return Err(Error::InvalidArgument(
            "graph is disconnected; coverage is unreachable".into(),
        ));
    }
    let mut sources = Vec::with_capacity(2 * reps.len());
    for &(u, v) in reps {
        if !g.has_edge(u, v) {
            return Err(Error::InvalidArgument(format!(
                "({u},{v}) is not an edge of the graph"
            )));
        }
        sources.extend([u, v]);
    }
    let farthest = g
        .distances_from(&sources)
        .into_iter()
        .map(|d| d.expect("connected"))
        .max()
        .unwrap_or(0);
    Ok(farthest.max(1))
}

/// Searches every choice of one representative per class for the smallest
/// [`minimal_depth`]. Returns the first optimal choice in lexicographic order
/// of per-class picks, with its depth.
pub fn best_representatives(
    g: &Graph,
    classes: &EdgeClassPartition,
    max_choices: u64,
) -> Result<(Vec<Edge>, usize)> {
    if !classes.matches_graph(g) {
        return Err(Error::Contract(
            "edge classes do not belong to this graph".into(),
        ));
    }
    let members: Vec<&[Edge]> = classes
        .classes()
        .iter()
        .map(|c| c.edges.as_slice())
        .collect();
    let total = members
        .iter()
        .try_fold(1u64, |acc, m| acc.checked_mul(m.len() as u64))
        .filter(|&t| t <= max_choices);
    if total.is_none() {
        return Err(Error::Resource(format!(
            "more than {max_choices} representative choices to search"
        )));
    }
    let mut pick = vec![0usize; members.len()];
    let mut best: Option<(Vec<Edge>, usize)> = None;
    loop {
        let reps: Vec<Edge> = pick.iter().zip(&members).map(|(&i, m)| m[i]).collect();
        let depth = minimal_depth(g, &reps)?;
        if best.as_ref().is_none_or(|(_, d)| depth < *d) {
            best = Some((reps, depth));
        }
        let Some(k) = (0..pick.len())
            .rev()
            .find(|&k| pick[k] + 1 < members[k].len())
        else {
            break;
        };
        pick[k] += 1;
        pick[k + 1..].iter_mut().for_each(|i| *i = 0);
    }
    best.ok_or_else(|| Error::Contract("no edge classes".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::edge_classes;
    use crate::graph::{full_rary_tree, path_graph, star_graph};

    #[test]
    fn balls() {
        let k2 = path_graph(2).unwrap();
        assert_eq!(rcc_ball(&k2, (0, 1), 1).unwrap(), vec![0, 1]);
        let star = star_graph(6).unwrap();
        assert_eq!(
            rcc_ball(&star, (0, 1), 1).unwrap(),
            (0..6).collect::<Vec<_>>()
        );
        let p5 = path_graph(5).unwrap();
        assert_eq!(rcc_ball(&p5, (1, 2), 1).unwrap(), vec![0, 1, 2, 3]);
        assert!(rcc_ball(&p5, (0, 2), 1).is_err());
        assert!(rcc_ball(&p5, (0, 1), 0).is_err());
    }

    #[test]
    fn coverage_examples() {
        let star = star_graph(29).unwrap();
        assert!(combined_coverage(&star, &[(0, 1)], 1)
            .unwrap()
            .is_complete());
        let g = full_rary_tree(2, 12).unwrap();
        let all = combined_coverage(&g, g.edges(), 1).unwrap();
        assert!(all.is_complete());
        assert!(combined_coverage(&g, &[], 1).is_err());
    }

    #[test]
    fn twenty_nine_vertex_tree() {
        let g = full_rary_tree(2, 29).unwrap();
        let reps = edge_classes(&g).unwrap().representatives();
        assert_eq!(reps.len(), 12);
        let r1 = combined_coverage(&g, &reps, 1).unwrap();
        assert!(!r1.uncovered.is_empty());
        // 19..=22 hang below vertex 4, three hops from every lexicographic
        // representative endpoint.
        assert_eq!(minimal_depth(&g, &reps).unwrap(), 3);
        assert_eq!(
            combined_coverage(&g, &reps, 2).unwrap().uncovered,
            vec![19, 20, 21, 22]
        );
        let json = r1.to_json();
        assert!(json.starts_with("{\"p\":1,\"covered\":[0,"));
        assert!(r1.render_table().contains("uncovered"));
    }

    #[test]
    fn representative_choice_matters() {
        let g = full_rary_tree(2, 29).unwrap();
        let classes = edge_classes(&g).unwrap();
        let (reps, depth) = best_representatives(&g, &classes, 1 << 12).unwrap();
        assert_eq!(depth, 2);
        assert!(reps.contains(&(4, 9)));
        assert!(best_representatives(&g, &classes, 10).is_err());
    }

    #[test]
    fn minimal_depth_errors() {
        let g = Graph::new(4, [(0, 1), (2, 3)]).unwrap();
        assert!(minimal_depth(&g, &[(0, 1)]).is_err());
        assert_eq!(
            minimal_depth(&star_graph(7).unwrap(), &[(0, 3)]).unwrap(),
            1
        );
    }
}
