//! Undirected simple graphs, the tree/star/path families used in the
//! experiments, and the plain-text edge-list format.
//!
//! Edges are stored normalized (`u < v`), deduplicated and sorted
//! lexicographically. A [`Graph`] is immutable once built.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unionfind::DisjointSets;

/// An undirected edge `(u, v)` with `u < v`.
pub type Edge = (usize, usize);

/// Default upper bound on the vertex count produced by the generators.
pub const DEFAULT_VERTEX_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    #[serde(skip)]
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from arbitrary-orientation pairs. Duplicates are
    /// dropped; self-loops and out-of-range labels are rejected.
    pub fn new(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "edge ({a},{b}) has a label outside 0..{n}"
                )));
            }
            if a == b {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {a}")));
            }
            edges.push((a.min(b), a.max(b)));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_normalized(n, edges))
    }

    fn from_normalized(n: usize, edges: Vec<Edge>) -> Self {
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Self {
            n,
            edges,
            adjacency,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a >= self.n || b >= self.n {
            return false;
        }
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Position of a normalized edge in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        let e = (e.0.min(e.1), e.0.max(e.1));
        self.edges.binary_search(&e).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut ds = DisjointSets::new(self.n);
        let mut components = self.n;
        for &(u, v) in &self.edges {
            if ds.union(u, v) {
                components -= 1;
            }
        }
        components == 1
    }

    pub fn is_tree(&self) -> bool {
        self.n >= 1 && self.m() == self.n - 1 && self.is_connected()
    }

    /// BFS distances from a set of sources; unreachable vertices get `None`.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].expect("queued vertices have a distance");
            for &w in &self.adjacency[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Largest finite shortest-path distance; `None` if disconnected.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for v in 0..self.n {
            for d in self.distances_from(&[v]) {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// Proper 2-colouring (`false`/`true` per vertex) if the graph is bipartite.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        for start in 0..self.n {
            if colour[start].is_some() {
                continue;
            }
            colour[start] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                let cu = colour[u].unwrap();
                for &w in &self.adjacency[u] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!cu);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == cu => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(colour.into_iter().map(Option::unwrap).collect())
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in ascending label
    /// order. Returns the subgraph and the map from new label to old label.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut keep: Vec<usize> = vertices.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            new_label[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(u, v)| new_label[u] != usize::MAX && new_label[v] != usize::MAX)
            .map(|&(u, v)| (new_label[u], new_label[v]))
            .collect();
        (Graph::from_normalized(keep.len(), edges), keep)
    }
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::Resource(format!(
            "graph with {n} vertices exceeds the generator cap of {cap}"
        )))
    } else {
        Ok(())
    }
}

/// Full r-ary tree on `n` vertices: vertex `i` has children `r*i+1 ..= r*i+r`
/// (those below `n`).
pub fn full_rary_tree(r: usize, n: usize) -> Result<Graph> {
    full_rary_tree_with_cap(r, n, DEFAULT_VERTEX_CAP)
}

pub fn full_rary_tree_with_cap(r: usize, n: usize, cap: usize) -> Result<Graph> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("branching factor {r} < 2")));
    }
    if n < 1 {
        return Err(Error::InvalidArgument(
            "tree needs at least one vertex".into(),
        ));
    }
    check_cap(n, cap)?;
    let mut edges = Vec::with_capacity(n - 1);
    for i in 0..n {
        for k in 1..=r {
            let child = r * i + k;
            if child < n {
                edges.push((i, child));
            }
        }
    }
    edges.sort_unstable();
    Ok(Graph::from_normalized(n, edges))
}

/// Perfect r-ary tree of height `h` in breadth-first labelling.
pub fn balanced_tree(r: usize, h: usize) -> Result<Graph> {
    balanced_tree_with_cap(r, h, DEFAULT_VERTEX_CAP)
}

pub fn balanced_tree_with_cap(r: usize, h: usize, cap: usize) -> Result<Graph> {
    if r < 2 {
        return Err(Error::InvalidArgument(format!("branching factor {r} < 2")));
    }
    if h < 1 {
        return Err(Error::InvalidArgument(format!("height {h} < 1")));
    }
    // (r^(h+1) - 1) / (r - 1) without overflowing on silly inputs
    let mut n: usize = 0;
    let mut level: usize = 1;
    for _ in 0..=h {
        n = n.checked_add(level).filter(|&n| n <= cap).ok_or_else(|| {
            Error::Resource(format!(
                "balanced tree ({r},{h}) exceeds the generator cap of {cap}"
            ))
        })?;
        level = level.saturating_mul(r);
    }
    full_rary_tree_with_cap(r, n, cap)
}

/// Star `K_{1,n-1}` with hub 0.
pub fn star_graph(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "star needs n >= 2, got {n}"
        )));
    }
    check_cap(n, DEFAULT_VERTEX_CAP)?;
    Ok(Graph::from_normalized(n, (1..n).map(|v| (0, v)).collect()))
}

pub fn path_graph(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "path needs at least one vertex".into(),
        ));
    }
    check_cap(n, DEFAULT_VERTEX_CAP)?;
    Ok(Graph::from_normalized(
        n,
        (1..n).map(|v| (v - 1, v)).collect(),
    ))
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle needs n >= 3, got {n}"
        )));
    }
    check_cap(n, DEFAULT_VERTEX_CAP)?;
    Graph::new(n, (0..n).map(|v| (v, (v + 1) % n)))
}

/// Parses the edge-list format: a header `n m`, then `m` lines `u v`.
/// Lines starting with `#` and blank lines are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut pairs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse_err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if fields.len() != 2 {
            return Err(parse_err(format!(
                "expected two integers, found {:?}",
                line.trim()
            )));
        }
        let a: usize = fields[0]
            .parse()
            .map_err(|_| parse_err(format!("not a vertex label: {:?}", fields[0])))?;
        let b: usize = fields[1]
            .parse()
            .map_err(|_| parse_err(format!("not a vertex label: {:?}", fields[1])))?;
        match header {
            None => header = Some((a, b)),
            Some((n, _)) => {
                if a >= n || b >= n {
                    return Err(parse_err(format!(
                        "label out of range: ({a},{b}) with n = {n}"
                    )));
                }
                if a == b {
                    return Err(parse_err(format!("self-loop at vertex {a}")));
                }
                pairs.push((a, b));
            }
        }
    }
    let (n, m) = header.ok_or(Error::Parse {
        line: 0,
        message: "missing \"n m\" header".into(),
    })?;
    if pairs.len() != m {
        return Err(Error::Parse {
            line: text.lines().count(),
            message: format!("header announces {m} edges, found {}", pairs.len()),
        });
    }
    Graph::new(n, pairs)
}

pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
