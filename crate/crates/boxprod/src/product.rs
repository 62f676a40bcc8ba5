//! The Cartesian product of graphs with loops, and coordinatizations.
//!
//! In the product, two tuples are adjacent when they differ in exactly one
//! position along an edge of that factor; a tuple carries a loop as soon as
//! one of its entries does. Product vertices are numbered row-major over the
//! factor order, with the last factor varying fastest; this is the numbering
//! under which the adjacency matrix of the product equals the Kronecker sum
//! of the factor matrices.

use crate::{Error, Graph, Result};

/// A map from each vertex of a graph to a tuple of factor-vertex indices
/// realizing a product structure, with the inverse lookup table.
///
/// Tuples are stored flat, `k` entries per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinatization {
    sizes: Vec<usize>,
    n: usize,
    flat: Vec<usize>,
    /// Inverse map: row-major code of a tuple -> vertex id.
    code_to_vertex: Vec<usize>,
}

impl Coordinatization {
    /// Builds a coordinatization from factor sizes and per-vertex tuples,
    /// checking that the tuples form a bijection onto the coordinate box.
    pub fn try_new(sizes: Vec<usize>, coords: Vec<Vec<usize>>) -> Result<Self> {
        let box_size: usize = sizes.iter().product();
        if coords.len() != box_size {
            return Err(Error::NotABijection);
        }
        let k = sizes.len();
        let mut flat = Vec::with_capacity(box_size * k);
        let mut code_to_vertex = vec![usize::MAX; box_size];
        for (v, tuple) in coords.iter().enumerate() {
            if tuple.len() != k || tuple.iter().zip(&sizes).any(|(&c, &s)| c >= s) {
                return Err(Error::NotABijection);
            }
            let code = Self::code_of(&sizes, tuple);
            if code_to_vertex[code] != usize::MAX {
                return Err(Error::NotABijection);
            }
            code_to_vertex[code] = v;
            flat.extend_from_slice(tuple);
        }
        Ok(Coordinatization {
            sizes,
            n: box_size,
            flat,
            code_to_vertex,
        })
    }

    /// Like [`Coordinatization::try_new`], for internal callers that have
    /// already established the bijection.
    pub(crate) fn new(sizes: Vec<usize>, coords: Vec<Vec<usize>>) -> Self {
        Self::try_new(sizes, coords).expect("coordinates must form a bijection onto the box")
    }

    fn code_of(sizes: &[usize], tuple: &[usize]) -> usize {
        debug_assert_eq!(sizes.len(), tuple.len());
        let mut code = 0;
        for (i, &c) in tuple.iter().enumerate() {
            debug_assert!(c < sizes[i]);
            code = code * sizes[i] + c;
        }
        code
    }

    /// Number of factors.
    pub fn factor_count(&self) -> usize {
        self.sizes.len()
    }

    /// Vertex count of each factor.
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Number of coordinatized vertices.
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// The coordinate tuple of `v`.
    pub fn coords(&self, v: usize) -> &[usize] {
        let k = self.sizes.len();
        &self.flat[v * k..(v + 1) * k]
    }

    /// The `i`th projection of `v`: its `i`th coordinate.
    pub fn projection(&self, v: usize, i: usize) -> Result<usize> {
        if i >= self.sizes.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.sizes.len(),
            });
        }
        Ok(self.coords(v)[i])
    }

    /// The vertex sitting at a coordinate tuple. Total: the vertex set is the
    /// full coordinate box.
    pub fn lookup(&self, tuple: &[usize]) -> usize {
        self.code_to_vertex[Self::code_of(&self.sizes, tuple)]
    }

    /// Reorders the factors by `perm`, where `perm[new] = old`.
    pub(crate) fn permute_factors(&self, perm: &[usize]) -> Coordinatization {
        let sizes: Vec<usize> = perm.iter().map(|&o| self.sizes[o]).collect();
        let coords: Vec<Vec<usize>> = (0..self.n)
            .map(|v| perm.iter().map(|&o| self.coords(v)[o]).collect())
            .collect();
        Coordinatization::new(sizes, coords)
    }
}

/// An ordered list of factors together with the coordinatization that maps a
/// graph onto their product.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// The factor graphs; prime when produced by a factorization routine.
    pub primes: Vec<Graph>,
    /// Coordinates of the factored graph relative to `primes`.
    pub coord: Coordinatization,
}

impl Factorization {
    /// The empty factorization of the trivial graph.
    pub fn empty() -> Factorization {
        Factorization {
            primes: Vec::new(),
            coord: Coordinatization::new(Vec::new(), vec![Vec::new()]),
        }
    }
}

/// Computes the Cartesian product of the given factors.
///
/// Returns the product graph and the coordinatization of its row-major vertex
/// numbering: vertex ids enumerate tuples with the last coordinate fastest.
pub fn cartesian_product(factors: &[Graph]) -> Result<(Graph, Coordinatization)> {
    if factors.is_empty() {
        return Err(Error::EmptyFactorList);
    }
    for (index, f) in factors.iter().enumerate() {
        if f.vertex_count() == 0 {
            return Err(Error::EmptyFactor { index });
        }
    }
    let k = factors.len();
    let sizes: Vec<usize> = factors.iter().map(Graph::vertex_count).collect();
    let n: usize = sizes.iter().product();

    let mut coords = Vec::with_capacity(n);
    let mut tuple = vec![0usize; k];
    for _ in 0..n {
        coords.push(tuple.clone());
        // advance row-major: last coordinate fastest
        for i in (0..k).rev() {
            tuple[i] += 1;
            if tuple[i] < sizes[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
    let coord = Coordinatization::new(sizes, coords);

    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for v in 0..n {
        let tv = coord.coords(v).to_vec();
        if (0..k).any(|i| factors[i].has_loop(tv[i])) {
            loops.push(v);
        }
        for i in 0..k {
            let mut tw = tv.clone();
            for &nb in factors[i].neighbors(tv[i]) {
                if nb > tv[i] {
                    tw[i] = nb;
                    edges.push((v, coord.lookup(&tw)));
                }
            }
            tw[i] = tv[i];
        }
    }
    let graph = Graph::new(n, &edges, &loops)?;
    Ok((graph, coord))
}

/// Extracts the layer through `anchor` varying only factor `i`: the induced
/// subgraph (2-edges and loops) on the vertices agreeing with `anchor` in all
/// other coordinates.
///
/// Returns the layer graph, numbered by the `i`th coordinate, and the map
/// from that numbering back to vertex ids of `g`.
pub fn layer_subgraph(
    g: &Graph,
    c: &Coordinatization,
    anchor: usize,
    i: usize,
) -> Result<(Graph, Vec<usize>)> {
    if i >= c.factor_count() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: c.factor_count(),
        });
    }
    box_layer_subgraph(g, c, anchor, &[i])
}

/// Extracts the layer through `anchor` varying the coordinates in `indices`
/// (ascending), numbered row-major over those coordinates.
pub(crate) fn box_layer_subgraph(
    g: &Graph,
    c: &Coordinatization,
    anchor: usize,
    indices: &[usize],
) -> Result<(Graph, Vec<usize>)> {
    debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
    let sub_sizes: Vec<usize> = indices.iter().map(|&j| c.sizes()[j]).collect();
    let count: usize = sub_sizes.iter().product();

    let mut vertex_map = Vec::with_capacity(count);
    let mut tuple = c.coords(anchor).to_vec();
    let mut sub = vec![0usize; indices.len()];
    for _ in 0..count {
        for (pos, &j) in indices.iter().enumerate() {
            tuple[j] = sub[pos];
        }
        vertex_map.push(c.lookup(&tuple));
        for pos in (0..indices.len()).rev() {
            sub[pos] += 1;
            if sub[pos] < sub_sizes[pos] {
                break;
            }
            sub[pos] = 0;
        }
    }

    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for (a, &va) in vertex_map.iter().enumerate() {
        if g.has_loop(va) {
            loops.push(a);
        }
        for (b, &vb) in vertex_map.iter().enumerate().skip(a + 1) {
            if g.has_two_edge(va, vb) {
                edges.push((a, b));
            }
        }
    }
    let layer = Graph::new(count, &edges, &loops)?;
    Ok((layer, vertex_map))
}
