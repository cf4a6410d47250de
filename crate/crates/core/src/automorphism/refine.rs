//! Ordered vertex partitions and equitable refinement (1-WL colour
//! refinement with cell order determined by neighbour counts only).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Ordered list of disjoint, non-empty vertex cells covering `0..n`.
/// Vertices inside a cell are kept in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedPartition {
    cells: Vec<Vec<usize>>,
}

impl OrderedPartition {
    /// The single-cell partition of `0..n`.
    pub fn unit(n: usize) -> Self {
        Self {
            cells: if n == 0 {
                vec![]
            } else {
                vec![(0..n).collect()]
            },
        }
    }

    pub fn new(n: usize, mut cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &mut cells {
            if cell.is_empty() {
                return Err(Error::InvalidArgument("partition has an empty cell".into()));
            }
            cell.sort_unstable();
            for &v in cell.iter() {
                if v >= n || std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {v} is out of range or repeated"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument(
                "partition does not cover all vertices".into(),
            ));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    /// Cell sizes in order; equal for partitions related by an automorphism.
    pub fn shape(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Index of the first smallest cell with more than one vertex.
    pub fn target_cell(&self) -> Option<usize> {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.len() > 1)
            .min_by_key(|(i, c)| (c.len(), *i))
            .map(|(i, _)| i)
    }

    /// Splits `v` out of its cell, placing `{v}` immediately before the rest.
    pub fn individualize(&self, v: usize) -> OrderedPartition {
        let mut cells = Vec::with_capacity(self.cells.len() + 1);
        for cell in &self.cells {
            if cell.len() > 1 && cell.contains(&v) {
                cells.push(vec![v]);
                cells.push(cell.iter().copied().filter(|&x| x != v).collect());
            } else {
                cells.push(cell.clone());
            }
        }
        OrderedPartition { cells }
    }

    /// Vertex order of a discrete partition.
    pub(crate) fn leaf_order(&self) -> Vec<usize> {
        debug_assert!(self.is_discrete());
        self.cells.iter().map(|c| c[0]).collect()
    }

    /// True when every vertex of a cell has the same number of neighbours in
    /// every cell.
    pub fn is_equitable(&self, g: &Graph) -> bool {
        let cell_of = self.cell_index(g.n());
        self.cells.iter().all(|cell| {
            let profile = |v: usize| {
                let mut counts = vec![0usize; self.cells.len()];
                for &w in g.neighbors(v) {
                    counts[cell_of[w]] += 1;
                }
                counts
            };
            let first = profile(cell[0]);
            cell[1..].iter().all(|&v| profile(v) == first)
        })
    }

    fn cell_index(&self, n: usize) -> Vec<usize> {
        let mut idx = vec![0; n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                idx[v] = i;
            }
        }
        idx
    }
}

/// Refines `p` to the coarsest equitable partition finer than it.
///
/// Each cell in turn serves as splitter; every cell is split by the number of
/// neighbours its vertices have in the splitter, with fragments ordered by
/// ascending count and placed where the original cell stood. Passes repeat
/// until nothing splits. The resulting order depends only on the graph
/// structure and the input cell order, never on vertex labels.
pub fn refine_partition(g: &Graph, p: &OrderedPartition) -> OrderedPartition {
    let n = g.n();
    let mut cells = p.cells.clone();
    let mut count = vec![0usize; n];
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            for &v in &cells[s] {
                for &w in g.neighbors(v) {
                    count[w] += 1;
                }
            }
            let mut next = Vec::with_capacity(cells.len());
            for cell in &cells {
                if cell.len() == 1 {
                    next.push(cell.clone());
                    continue;
                }
                let mut keyed: Vec<(usize, usize)> = cell.iter().map(|&v| (count[v], v)).collect();
                keyed.sort_unstable();
                let before = next.len();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|&(_, v)| v).collect());
                        start = i;
                    }
                }
                if next.len() - before > 1 {
                    changed = true;
                }
            }
            for &v in &cells[s] {
                for &w in g.neighbors(v) {
                    count[w] = 0;
                }
            }
            cells = next;
            s += 1;
        }
        if !changed {
            break;
        }
    }
    OrderedPartition { cells }
}
