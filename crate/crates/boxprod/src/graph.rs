//! Finite undirected graphs with loops.
//!
//! 2-edges (edges with distinct endpoints) live in sorted adjacency lists;
//! loops (1-edges) are a per-vertex flag. Keeping the two separate keeps
//! degrees and edge counts loop-free, which is what the factorization
//! algorithms account against.

use crate::{Error, Result};

/// A finite undirected graph on vertices `0..n` with optional loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    looped: Vec<bool>,
}

impl Graph {
    /// Builds a graph from a vertex count, a list of 2-edges and a set of
    /// looped vertices.
    ///
    /// A pair `(v, v)` in `two_edges` is rejected; loops are supplied through
    /// `loops` only. Duplicate pairs are rejected as well.
    pub fn new(n: usize, two_edges: &[(usize, usize)], loops: &[usize]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        let mut looped = vec![false; n];
        for &(u, v) in two_edges {
            if u >= n {
                return Err(Error::IdOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(Error::IdOutOfRange { id: v, n });
            }
            if u == v {
                return Err(Error::SelfPairInTwoEdges { v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        for (u, list) in adj.iter().enumerate() {
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                let v = w[0];
                return Err(Error::DuplicateEdge { u: u.min(v), v: u.max(v) });
            }
        }
        for &v in loops {
            if v >= n {
                return Err(Error::IdOutOfRange { id: v, n });
            }
            looped[v] = true;
        }
        Ok(Graph { n, adj, looped })
    }

    /// Number of vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Number of 2-edges.
    pub fn two_edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Number of looped vertices.
    pub fn loop_count(&self) -> usize {
        self.looped.iter().filter(|&&b| b).count()
    }

    /// Number of unlooped vertices.
    pub fn unlooped_count(&self) -> usize {
        self.n - self.loop_count()
    }

    /// Neighbors of `v` along 2-edges, in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Degree of `v`, counting 2-edges only.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Minimum degree over all vertices, counting 2-edges only.
    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Whether `v` carries a loop.
    pub fn has_loop(&self, v: usize) -> bool {
        self.looped[v]
    }

    /// Per-vertex loop flags.
    pub fn loop_flags(&self) -> &[bool] {
        &self.looped
    }

    /// Whether the 2-edge `(u, v)` exists.
    pub fn has_two_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].binary_search(&v).is_ok()
    }

    /// All 2-edges, each once as `(u, v)` with `u < v`, sorted.
    pub fn two_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::with_capacity(self.two_edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    edges.push((u, v));
                }
            }
        }
        edges
    }

    /// Ids of looped vertices, ascending.
    pub fn loop_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&v| self.looped[v]).collect()
    }

    /// The graph with all loops removed; the 2-edge structure is untouched.
    pub fn strip_loops(&self) -> Graph {
        Graph {
            n: self.n,
            adj: self.adj.clone(),
            looped: vec![false; self.n],
        }
    }

    /// True iff every vertex carries a loop.
    pub fn is_entirely_looped(&self) -> bool {
        self.n > 0 && self.looped.iter().all(|&b| b)
    }

    /// True iff the 2-edges span all vertices from any one of them. Loops do
    /// not affect connectivity; the one-vertex graph is connected.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    /// Disjoint union; the second operand's ids are offset by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|list| list.iter().map(|&v| v + off).collect::<Vec<_>>()),
        );
        let mut looped = self.looped.clone();
        looped.extend_from_slice(&other.looped);
        Graph {
            n: self.n + other.n,
            adj,
            looped,
        }
    }

    /// Lowest-id vertex without a loop, if any.
    pub fn first_unlooped(&self) -> Option<usize> {
        (0..self.n).find(|&v| !self.looped[v])
    }

    /// Relabels vertices by `perm`, where `perm[old] = new`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        debug_assert_eq!(perm.len(), self.n);
        let mut adj = vec![Vec::new(); self.n];
        let mut looped = vec![false; self.n];
        for u in 0..self.n {
            let image = perm[u];
            adj[image] = self.adj[u].iter().map(|&v| perm[v]).collect();
            adj[image].sort_unstable();
            looped[image] = self.looped[u];
        }
        Graph {
            n: self.n,
            adj,
            looped,
        }
    }

    // --- small builders used by tests, benchmarks and the CLI ---

    /// The trivial graph: one vertex, no edges.
    pub fn trivial() -> Graph {
        Graph::new(1, &[], &[]).unwrap()
    }

    /// One vertex carrying a loop.
    pub fn looped_vertex() -> Graph {
        Graph::new(1, &[], &[0]).unwrap()
    }

    /// Complete graph on `n` vertices, no loops.
    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges, &[]).unwrap()
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Graph::new(n, &edges, &[]).unwrap()
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, &edges, &[]).unwrap()
    }

    /// Hypercube of dimension `d`: vertices are bit patterns, edges flip one bit.
    pub fn hypercube(d: u32) -> Graph {
        let n = 1usize << d;
        let mut edges = Vec::with_capacity(n * d as usize / 2);
        for v in 0..n {
            for b in 0..d {
                let w = v ^ (1 << b);
                if v < w {
                    edges.push((v, w));
                }
            }
        }
        Graph::new(n, &edges, &[]).unwrap()
    }
}
