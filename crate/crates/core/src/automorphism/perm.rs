use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

/// A bijection on `0..n`; `map[v]` is the image of `v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
        }
    }

    pub fn from_images(map: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; map.len()];
        for &x in &map {
            if x >= map.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidArgument(format!(
                    "{map:?} is not a permutation"
                )));
            }
        }
        Ok(Self { map })
    }

    /// Transposition of `a` and `b` on `0..n`.
    pub fn swap(n: usize, a: usize, b: usize) -> Self {
        let mut p = Self::identity(n);
        p.map.swap(a, b);
        p
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    /// Image of an edge, renormalized so that `u < v`.
    pub fn apply_edge(&self, (u, v): Edge) -> Edge {
        let (a, b) = (self.map[u], self.map[v]);
        (a.min(b), a.max(b))
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation {
            map: other.map.iter().map(|&x| self.map[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &x) in self.map.iter().enumerate() {
            inv[x] = i;
        }
        Permutation { map: inv }
    }

    /// True when the permutation maps the edge set of `g` onto itself.
    pub fn is_automorphism_of(&self, g: &Graph) -> bool {
        self.n() == g.n()
            && g.edges()
                .iter()
                .all(|&(u, v)| g.has_edge(self.map[u], self.map[v]))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // cycle notation, fixed points omitted
        let mut seen = vec![false; self.map.len()];
        let mut wrote = false;
        for start in 0..self.map.len() {
            if seen[start] || self.map[start] == start {
                continue;
            }
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.map[x];
            }
            write!(f, ")")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// Generators of a permutation group acting on `0..n`. An empty list stands
/// for the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSet {
    n: usize,
    generators: Vec<Permutation>,
}

impl GeneratorSet {
    pub fn new(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some((i, p)) = generators.iter().enumerate().find(|(_, p)| p.n() != n) {
            return Err(Error::Contract(format!(
                "generator {i} acts on {} points, expected {n}",
                p.n()
            )));
        }
        Ok(Self { n, generators })
    }

    pub fn trivial(n: usize) -> Self {
        Self {
            n,
            generators: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Checks that every generator is an automorphism of `g`; the error names
    /// the first offending generator.
    pub fn validate_for(&self, g: &Graph) -> Result<()> {
        if self.n != g.n() {
            return Err(Error::Contract(format!(
                "generators act on {} points but the graph has {} vertices",
                self.n,
                g.n()
            )));
        }
        for (i, p) in self.generators.iter().enumerate() {
            if !p.is_automorphism_of(g) {
                return Err(Error::Contract(format!(
                    "generator {i} {p:?} does not preserve the edge set"
                )));
            }
        }
        Ok(())
    }

    /// Enumerates every element of the generated group by breadth-first
    /// closure. Fails once more than `limit` elements have been produced.
    pub fn enumerate_group(&self, limit: usize) -> Result<Vec<Permutation>> {
        let id = Permutation::identity(self.n);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut order = vec![id.clone()];
        let mut queue = VecDeque::from([id]);
        while let Some(p) = queue.pop_front() {
            for g in &self.generators {
                let q = g.compose(&p);
                if seen.insert(q.clone()) {
                    if seen.len() > limit {
                        return Err(Error::Resource(format!(
                            "group has more than {limit} elements"
                        )));
                    }
                    order.push(q.clone());
                    queue.push_back(q);
                }
            }
        }
        Ok(order)
    }

    /// Finds a group element mapping edge `from` to edge `to` by searching the
    /// Schreier graph of the edge action. Returns `None` when the edges lie in
    /// different orbits.
    pub fn edge_transporter(&self, from: Edge, to: Edge) -> Option<Permutation> {
        let norm = |(a, b): Edge| (a.min(b), a.max(b));
        let (from, to) = (norm(from), norm(to));
        let mut word: HashMap<Edge, Permutation> =
            HashMap::from([(from, Permutation::identity(self.n))]);
        let mut queue = VecDeque::from([from]);
        while let Some(e) = queue.pop_front() {
            if e == to {
                return word.remove(&e);
            }
            let w = word[&e].clone();
            for g in &self.generators {
                let f = g.apply_edge(e);
                word.entry(f).or_insert_with(|| {
                    queue.push_back(f);
                    g.compose(&w)
                });
            }
        }
        None
    }
}
