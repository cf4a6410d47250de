//! MaxCut QUBO matrices (full and orbit-reduced) and their Ising forms.
//!
//! Spin convention: `z_i = +1` for bit 0 and `z_i = -1` for bit 1.
//!
//! Two conversions are supported:
//!
//! * [`Convention::MaxCut`] maps a QUBO entry `w` on `(u, v)` to
//!   `w/2 · (1 - Z_u Z_v)`, so the energy of a basis state is its cut value.
//! * [`Convention::Adjacency`] maps it to the bare product `w · x_u x_v` with
//!   `x = (1 - z)/2`, i.e. `w/4 · (1 - Z_u - Z_v + Z_u Z_v)`. This keeps a
//!   single-Z term on every touched vertex, which is what produces `V + E`
//!   terms for a connected graph.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::automorphism::EdgeClassPartition;
use crate::bits::Bitstring;
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// Symmetric, zero-diagonal QUBO matrix stored as its upper triangle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuboMatrix {
    n: usize,
    entries: BTreeMap<Edge, u64>,
}

impl QuboMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &BTreeMap<Edge, u64> {
        &self.entries
    }

    /// Entry `(a, b)`; symmetric, zero on the diagonal.
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.entries
            .get(&(a.min(b), a.max(b)))
            .copied()
            .unwrap_or(0)
    }

    pub fn total_weight(&self) -> u64 {
        self.entries.values().sum()
    }
}

/// Adjacency QUBO: entry 1 on every edge.
pub fn build_full_qubo(g: &Graph) -> QuboMatrix {
    QuboMatrix {
        n: g.n(),
        entries: g.edges().iter().map(|&e| (e, 1)).collect(),
    }
}

/// Reduced QUBO: one entry per edge class, at its representative, valued at
/// the class size.
pub fn build_reduced_qubo(g: &Graph, classes: &EdgeClassPartition) -> Result<QuboMatrix> {
    if !classes.matches_graph(g) {
        return Err(Error::Contract(
            "edge classes were not computed from this graph".into(),
        ));
    }
    Ok(QuboMatrix {
        n: g.n(),
        entries: classes
            .classes()
            .iter()
            .map(|c| (c.representative, c.size as u64))
            .collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    MaxCut,
    Adjacency,
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::MaxCut => "maxcut",
            Convention::Adjacency => "adjacency",
        })
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "maxcut" => Ok(Convention::MaxCut),
            "adjacency" => Ok(Convention::Adjacency),
            other => Err(Error::InvalidArgument(format!(
                "unknown convention {other:?} (expected maxcut or adjacency)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TermCount {
    pub linear: usize,
    pub quadratic: usize,
    pub total: usize,
}

/// Diagonal Hamiltonian `offset + Σ h_i Z_i + Σ J_uv Z_u Z_v`. Only nonzero
/// coefficients are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingHamiltonian {
    n: usize,
    convention: Convention,
    offset: f64,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<Edge, f64>,
}

pub fn qubo_to_ising(q: &QuboMatrix, convention: Convention) -> IsingHamiltonian {
    let mut offset = 0.0;
    let mut linear: BTreeMap<usize, f64> = BTreeMap::new();
    let mut quadratic: BTreeMap<Edge, f64> = BTreeMap::new();
    for (&(u, v), &w) in &q.entries {
        let w = w as f64;
        match convention {
            Convention::MaxCut => {
                offset += w / 2.0;
                *quadratic.entry((u, v)).or_default() -= w / 2.0;
            }
            Convention::Adjacency => {
                offset += w / 4.0;
                *linear.entry(u).or_default() -= w / 4.0;
                *linear.entry(v).or_default() -= w / 4.0;
                *quadratic.entry((u, v)).or_default() += w / 4.0;
            }
        }
    }
    linear.retain(|_, c| *c != 0.0);
    quadratic.retain(|_, c| *c != 0.0);
    IsingHamiltonian {
        n: q.n,
        convention,
        offset,
        linear,
        quadratic,
    }
}

/// Ising form of the full MaxCut QUBO of `g`.
pub fn full_hamiltonian(g: &Graph, convention: Convention) -> IsingHamiltonian {
    qubo_to_ising(&build_full_qubo(g), convention)
}

/// Ising form of the orbit-reduced QUBO of `g`.
pub fn reduced_hamiltonian(
    g: &Graph,
    classes: &EdgeClassPartition,
    convention: Convention,
) -> Result<IsingHamiltonian> {
    Ok(qubo_to_ising(&build_reduced_qubo(g, classes)?, convention))
}

impl IsingHamiltonian {
    /// Builds a Hamiltonian from raw coefficients; zero coefficients are dropped.
    pub fn from_terms(
        n: usize,
        convention: Convention,
        offset: f64,
        linear: impl IntoIterator<Item = (usize, f64)>,
        quadratic: impl IntoIterator<Item = (Edge, f64)>,
    ) -> Result<Self> {
        let mut lin: BTreeMap<usize, f64> = BTreeMap::new();
        for (q, c) in linear {
            if q >= n {
                return Err(Error::InvalidArgument(format!("qubit {q} out of range")));
            }
            *lin.entry(q).or_default() += c;
        }
        let mut quad: BTreeMap<Edge, f64> = BTreeMap::new();
        for ((a, b), c) in quadratic {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidArgument(format!("bad coupling ({a},{b})")));
            }
            *quad.entry((a.min(b), a.max(b))).or_default() += c;
        }
        lin.retain(|_, c| *c != 0.0);
        quad.retain(|_, c| *c != 0.0);
        Ok(Self {
            n,
            convention,
            offset,
            linear: lin,
            quadratic: quad,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<Edge, f64> {
        &self.quadratic
    }

    pub fn term_count(&self) -> TermCount {
        TermCount {
            linear: self.linear.len(),
            quadratic: self.quadratic.len(),
            total: self.linear.len() + self.quadratic.len(),
        }
    }

    /// Energy of basis state `index` (bit `q` of the index is qubit `q`).
    #[inline]
    pub fn energy_of_index(&self, index: usize) -> f64 {
        let z = |q: usize| if (index >> q) & 1 == 0 { 1.0 } else { -1.0 };
        let mut e = self.offset;
        for (&q, &c) in &self.linear {
            e += c * z(q);
        }
        for (&(u, v), &c) in &self.quadratic {
            e += c * z(u) * z(v);
        }
        e
    }

    pub fn energy(&self, x: &Bitstring) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::InvalidArgument(format!(
                "bitstring has {} bits, Hamiltonian acts on {} qubits",
                x.len(),
                self.n
            )));
        }
        let mut e = self.offset;
        let z = |q: usize| if x.bit(q) { -1.0 } else { 1.0 };
        for (&q, &c) in &self.linear {
            e += c * z(q);
        }
        for (&(u, v), &c) in &self.quadratic {
            e += c * z(u) * z(v);
        }
        Ok(e)
    }

    /// Energies of all `2^n` basis states.
    pub fn diagonal(&self) -> Vec<f64> {
        let dim = 1usize << self.n;
        let mut diag = vec![self.offset; dim];
        for (&q, &c) in &self.linear {
            for (x, d) in diag.iter_mut().enumerate() {
                *d += if (x >> q) & 1 == 0 { c } else { -c };
            }
        }
        for (&(u, v), &c) in &self.quadratic {
            for (x, d) in diag.iter_mut().enumerate() {
                *d += if ((x >> u) ^ (x >> v)) & 1 == 0 {
                    c
                } else {
                    -c
                };
            }
        }
        diag
    }

    /// Terms supported inside `qubits`, relabelled to `0..k` in ascending
    /// label order. The offset is kept. Returns the map new label → old label.
    pub fn restricted_to(&self, qubits: &[usize]) -> (IsingHamiltonian, Vec<usize>) {
        let mut keep = qubits.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_label = vec![usize::MAX; self.n];
        for (i, &q) in keep.iter().enumerate() {
            new_label[q] = i;
        }
        let linear = self
            .linear
            .iter()
            .filter(|(&q, _)| new_label[q] != usize::MAX)
            .map(|(&q, &c)| (new_label[q], c))
            .collect();
        let quadratic = self
            .quadratic
            .iter()
            .filter(|(&(u, v), _)| new_label[u] != usize::MAX && new_label[v] != usize::MAX)
            .map(|(&(u, v), &c)| ((new_label[u], new_label[v]), c))
            .collect();
        (
            IsingHamiltonian {
                n: keep.len(),
                convention: self.convention,
                offset: self.offset,
                linear,
                quadratic,
            },
            keep,
        )
    }

    /// Qubit sets of the stored terms, linear terms first.
    pub fn supports(&self) -> Vec<Vec<usize>> {
        self.linear
            .keys()
            .map(|&q| vec![q])
            .chain(self.quadratic.keys().map(|&(u, v)| vec![u, v]))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HamiltonianWire::from(self)).expect("Hamiltonian serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: HamiltonianWire = serde_json::from_str(text)
            .map_err(|e| Error::InvalidArgument(format!("bad Hamiltonian JSON: {e}")))?;
        for t in &w.quadratic {
            if t.u >= t.v {
                return Err(Error::InvalidArgument(format!(
                    "quadratic term ({},{}) is not ordered u < v",
                    t.u, t.v
                )));
            }
        }
        Self::from_terms(
            w.n,
            w.convention,
            w.offset,
            w.linear.iter().map(|t| (t.q, t.c)),
            w.quadratic.iter().map(|t| ((t.u, t.v), t.c)),
        )
    }
}

#[derive(Serialize, Deserialize)]
struct LinearTerm {
    q: usize,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct QuadraticTerm {
    u: usize,
    v: usize,
    c: f64,
}

#[derive(Serialize, Deserialize)]
struct HamiltonianWire {
    n: usize,
    convention: Convention,
    offset: f64,
    linear: Vec<LinearTerm>,
    quadratic: Vec<QuadraticTerm>,
}

impl From<&IsingHamiltonian> for HamiltonianWire {
    fn from(h: &IsingHamiltonian) -> Self {
        Self {
            n: h.n,
            convention: h.convention,
            offset: h.offset,
            linear: h
                .linear
                .iter()
                .map(|(&q, &c)| LinearTerm { q, c })
                .collect(),
            quadratic: h
                .quadratic
                .iter()
                .map(|(&(u, v), &c)| QuadraticTerm { u, v, c })
                .collect(),
        }
    }
}

/// `100 · (1 − red/full)` on total term counts, unrounded.
pub fn reduction_percentage(full: &IsingHamiltonian, red: &IsingHamiltonian) -> Result<f64> {
    if full.convention != red.convention {
        return Err(Error::Contract(format!(
            "cannot compare a {} Hamiltonian with a {} one",
            full.convention, red.convention
        )));
    }
    if full.n != red.n {
        return Err(Error::Contract(
            "Hamiltonians act on different qubit counts".into(),
        ));
    }
    let (f, r) = (full.term_count().total, red.term_count().total);
    if f == 0 {
        return Ok(0.0);
    }
    Ok(100.0 * (1.0 - r as f64 / f as f64))
}

/// Reduction percentage from term counts, rounded half-up to two decimals
/// using integer arithmetic.
pub fn rounded_reduction_percentage(red_terms: usize, full_terms: usize) -> f64 {
    if full_terms == 0 {
        return 0.0;
    }
    let saved = full_terms as i128 - red_terms as i128;
    let num = 20_000 * saved + full_terms as i128;
    let hundredths = num.div_euclid(2 * full_terms as i128);
    hundredths as f64 / 100.0
}

/// Number of edges of `g` whose endpoints get different bits.
pub fn cut_value(g: &Graph, x: &Bitstring) -> Result<usize> {
    if x.len() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "bitstring has {} bits, graph has {} vertices",
            x.len(),
            g.n()
        )));
    }
    Ok(g.edges()
        .iter()
        .filter(|&&(u, v)| x.bit(u) != x.bit(v))
        .count())
}

/// Cut value of basis state `index`.
#[inline]
pub fn cut_value_of_index(g: &Graph, index: usize) -> usize {
    g.edges()
        .iter()
        .filter(|&&(u, v)| ((index >> u) ^ (index >> v)) & 1 == 1)
        .count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::edge_classes;
    use crate::graph::{balanced_tree, cycle_graph, full_rary_tree, path_graph, star_graph};

    fn k2() -> Graph {
        path_graph(2).unwrap()
    }

    #[test]
    fn full_qubo_examples() {
        let q = build_full_qubo(&k2());
        assert_eq!(q.get(0, 1), 1);
        assert_eq!(q.get(1, 0), 1);
        assert_eq!(q.get(0, 0), 0);
        assert_eq!(
            build_full_qubo(&full_rary_tree(2, 15).unwrap())
                .entries()
                .len(),
            14
        );
        assert!(build_full_qubo(&Graph::new(3, []).unwrap())
            .entries()
            .is_empty());
    }

    #[test]
    fn reduced_qubo_examples() {
        let g = star_graph(29).unwrap();
        let q = build_reduced_qubo(&g, &edge_classes(&g).unwrap()).unwrap();
        assert_eq!(q.entries().len(), 1);
        assert_eq!(q.get(0, 1), 28);

        let g = k2();
        let q = build_reduced_qubo(&g, &edge_classes(&g).unwrap()).unwrap();
        assert_eq!(q, build_full_qubo(&g));

        let g = full_rary_tree(2, 15).unwrap();
        let q = build_reduced_qubo(&g, &edge_classes(&g).unwrap()).unwrap();
        let sizes: Vec<u64> = q.entries().values().copied().collect();
        assert_eq!(sizes, vec![2, 4, 8]);
        assert_eq!(q.total_weight(), 14);
    }

    #[test]
    fn reduced_qubo_rejects_foreign_classes() {
        let g = full_rary_tree(2, 15).unwrap();
        let other = edge_classes(&path_graph(15).unwrap()).unwrap();
        assert!(matches!(
            build_reduced_qubo(&g, &other),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn k2_maxcut_form() {
        let h = full_hamiltonian(&k2(), Convention::MaxCut);
        assert_eq!(h.offset(), 0.5);
        assert!(h.linear().is_empty());
        assert_eq!(h.quadratic().get(&(0, 1)), Some(&-0.5));
        assert_eq!(h.term_count().total, 1);
    }

    #[test]
    fn adjacency_term_counts() {
        let g = full_rary_tree(2, 15).unwrap();
        let h = full_hamiltonian(&g, Convention::Adjacency);
        assert_eq!(
            h.term_count(),
            TermCount {
                linear: 15,
                quadratic: 14,
                total: 29
            }
        );
        let g = balanced_tree(2, 4).unwrap();
        assert_eq!(
            full_hamiltonian(&g, Convention::Adjacency)
                .term_count()
                .total,
            61
        );
        let g = full_rary_tree(2, 10).unwrap();
        assert_eq!(
            full_hamiltonian(&g, Convention::Adjacency)
                .term_count()
                .total,
            19
        );
        let g = full_rary_tree(2, 34).unwrap();
        assert_eq!(
            full_hamiltonian(&g, Convention::Adjacency)
                .term_count()
                .total,
            67
        );
    }

    #[test]
    fn reduced_balanced_tree_adjacency() {
        let g = balanced_tree(2, 3).unwrap();
        let classes = edge_classes(&g).unwrap();
        let h = reduced_hamiltonian(&g, &classes, Convention::Adjacency).unwrap();
        assert_eq!(
            h.term_count(),
            TermCount {
                linear: 4,
                quadratic: 3,
                total: 7
            }
        );
    }

    #[test]
    fn reduction_percentages() {
        assert_eq!(rounded_reduction_percentage(11, 61), 81.97);
        assert_eq!(rounded_reduction_percentage(9, 29), 68.97);
        assert_eq!(rounded_reduction_percentage(7, 9), 22.22);
        assert_eq!(rounded_reduction_percentage(6, 25), 76.0);
        assert_eq!(rounded_reduction_percentage(13, 13), 0.0);
        let g = full_rary_tree(2, 7).unwrap();
        let h = full_hamiltonian(&g, Convention::MaxCut);
        assert_eq!(reduction_percentage(&h, &h).unwrap(), 0.0);
        let a = full_hamiltonian(&g, Convention::Adjacency);
        assert!(matches!(
            reduction_percentage(&h, &a),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn energies() {
        let h = full_hamiltonian(&k2(), Convention::MaxCut);
        assert_eq!(h.energy(&"01".parse().unwrap()).unwrap(), 1.0);
        assert_eq!(h.energy(&"00".parse().unwrap()).unwrap(), 0.0);
        assert!(h.energy(&"011".parse().unwrap()).is_err());
        let h = full_hamiltonian(&path_graph(3).unwrap(), Convention::MaxCut);
        assert_eq!(h.energy(&"010".parse().unwrap()).unwrap(), 2.0);
    }

    #[test]
    fn cut_values() {
        let g = full_rary_tree(2, 12).unwrap();
        let depth = g.distances_from(&[0]);
        let parity = Bitstring::new(depth.iter().map(|d| d.unwrap() % 2 == 1).collect());
        assert_eq!(cut_value(&g, &parity).unwrap(), g.m());
        assert_eq!(cut_value(&g, &Bitstring::zeros(12)).unwrap(), 0);
        assert!(cut_value(&g, &Bitstring::zeros(3)).is_err());

        // exhaustive scan of the 5-cycle
        let c5 = cycle_graph(5).unwrap();
        let best = (0..32).map(|x| cut_value_of_index(&c5, x)).max().unwrap();
        assert_eq!(best, 4);
    }

    #[test]
    fn json_round_trip_and_layout() {
        let h = full_hamiltonian(&path_graph(3).unwrap(), Convention::Adjacency);
        let text = h.to_json();
        assert!(text.starts_with(
            "{\"n\":3,\"convention\":\"adjacency\",\"offset\":0.5,\"linear\":[{\"q\":0,"
        ));
        assert_eq!(IsingHamiltonian::from_json(&text).unwrap(), h);
        assert!(IsingHamiltonian::from_json(
            "{\"n\":2,\"convention\":\"maxcut\",\"offset\":0,\"linear\":[],\"quadratic\":[{\"u\":1,\"v\":0,\"c\":1}]}"
        )
        .is_err());
    }

    #[test]
    fn restriction_keeps_inner_terms() {
        let g = path_graph(4).unwrap();
        let h = full_hamiltonian(&g, Convention::Adjacency);
        let (r, map) = h.restricted_to(&[2, 1]);
        assert_eq!(map, vec![1, 2]);
        assert_eq!(r.n(), 2);
        assert_eq!(r.quadratic().len(), 1);
        assert_eq!(r.linear().get(&0), Some(&-0.5));
    }
}
