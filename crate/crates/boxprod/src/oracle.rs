//! Brute-force ground truth and random instance generation.
//!
//! The two-split search decides reducibility directly from the product
//! definition: it looks for a bijection onto an `n1 x n2` grid under which
//! edges move along exactly one axis and loops decompose into full rows and
//! columns. Everything here is deliberately independent of the factorization
//! algorithms it is used to check, and capped at small sizes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::product::{Coordinatization, Factorization};
use crate::{cartesian_product, Error, Graph, Result};

/// Default vertex-count cap for the brute-force search.
pub const DEFAULT_SPLIT_CAP: usize = 10;

/// Probability of each non-tree edge in generated factors.
const EXTRA_EDGE_PROB: f64 = 0.3;

/// Searches for a factorization of `g` into two nontrivial parts by
/// exhaustive bijection search, with the default size cap.
///
/// Returns the two parts and the grid coordinatization, or `None` when `g`
/// admits no such split.
pub fn brute_force_two_split(g: &Graph) -> Result<Option<(Graph, Graph, Coordinatization)>> {
    brute_force_two_split_capped(g, DEFAULT_SPLIT_CAP)
}

/// Like [`brute_force_two_split`] with an explicit cap.
pub fn brute_force_two_split_capped(
    g: &Graph,
    cap: usize,
) -> Result<Option<(Graph, Graph, Coordinatization)>> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::SizeLimitExceeded { n, cap });
    }
    for n1 in 2..=n / 2 {
        if n % n1 != 0 {
            continue;
        }
        if let Some(found) = brute_force_split_sized(g, n1, cap)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}

/// Searches for a split with a first factor of exactly `n1` vertices. Lets
/// tests pick the split order when probing uniqueness of the factorization.
pub fn brute_force_split_sized(
    g: &Graph,
    n1: usize,
    cap: usize,
) -> Result<Option<(Graph, Graph, Coordinatization)>> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::SizeLimitExceeded { n, cap });
    }
    if n1 < 2 || n % n1 != 0 || n / n1 < 2 {
        return Ok(None);
    }
    let n2 = n / n1;
    if !unlooped_count_splits(g.unlooped_count(), n1, n2) {
        return Ok(None);
    }
    Ok(search_grid(g, n1, n2))
}

/// Quick prune: the unlooped counts of the factors multiply, so a positive
/// count must factor within the grid dimensions.
fn unlooped_count_splits(u: usize, n1: usize, n2: usize) -> bool {
    if u == 0 {
        return true;
    }
    (1..=u).any(|d| u % d == 0 && d <= n1 && u / d <= n2)
}

struct GridSearch<'a> {
    g: &'a Graph,
    n1: usize,
    n2: usize,
    order: Vec<usize>,
    cell_of: Vec<Option<(usize, usize)>>,
    vertex_at: Vec<Vec<Option<usize>>>,
    // -1 unknown, 0 non-edge, 1 edge
    row_edges: Vec<Vec<i8>>,
    col_edges: Vec<Vec<i8>>,
}

fn search_grid(g: &Graph, n1: usize, n2: usize) -> Option<(Graph, Graph, Coordinatization)> {
    let n = g.vertex_count();
    // visit vertices so that each one touches an earlier one when possible
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
    }

    let mut search = GridSearch {
        g,
        n1,
        n2,
        order,
        cell_of: vec![None; n],
        vertex_at: vec![vec![None; n2]; n1],
        row_edges: vec![vec![-1; n1]; n1],
        col_edges: vec![vec![-1; n2]; n2],
    };
    // pin the first vertex to the origin; factor labels are arbitrary
    search.place(0, (0, 0))
}

impl GridSearch<'_> {
    /// Tries cells for `order[pos..]`, the first call having pinned (0,0).
    fn place(&mut self, pos: usize, cell: (usize, usize)) -> Option<(Graph, Graph, Coordinatization)> {
        let v = self.order[pos];
        let mut touched_rows = Vec::new();
        let mut touched_cols = Vec::new();
        if !self.assign(v, cell, &mut touched_rows, &mut touched_cols) {
            self.unassign(v, cell, &touched_rows, &touched_cols);
            return None;
        }
        let result = if pos + 1 == self.order.len() {
            self.finish()
        } else {
            let mut found = None;
            'cells: for h in 0..self.n1 {
                for l in 0..self.n2 {
                    if self.vertex_at[h][l].is_none() {
                        if let Some(hit) = self.place(pos + 1, (h, l)) {
                            found = Some(hit);
                            break 'cells;
                        }
                    }
                }
            }
            found
        };
        if result.is_none() {
            self.unassign(v, cell, &touched_rows, &touched_cols);
        }
        result
    }

    /// Records `v` at `cell` and checks consistency against every assigned
    /// vertex; edge statuses newly fixed are logged for rollback.
    fn assign(
        &mut self,
        v: usize,
        (h, l): (usize, usize),
        touched_rows: &mut Vec<(usize, usize)>,
        touched_cols: &mut Vec<(usize, usize)>,
    ) -> bool {
        self.cell_of[v] = Some((h, l));
        self.vertex_at[h][l] = Some(v);
        for w in 0..self.g.vertex_count() {
            if w == v {
                continue;
            }
            let Some((h2, l2)) = self.cell_of[w] else {
                continue;
            };
            let edge = self.g.has_two_edge(v, w);
            if h == h2 {
                // same row: the step is a second-factor move
                match self.col_edges[l][l2] {
                    -1 => {
                        self.col_edges[l][l2] = edge as i8;
                        self.col_edges[l2][l] = edge as i8;
                        touched_cols.push((l, l2));
                    }
                    known => {
                        if (known == 1) != edge {
                            return false;
                        }
                    }
                }
            } else if l == l2 {
                match self.row_edges[h][h2] {
                    -1 => {
                        self.row_edges[h][h2] = edge as i8;
                        self.row_edges[h2][h] = edge as i8;
                        touched_rows.push((h, h2));
                    }
                    known => {
                        if (known == 1) != edge {
                            return false;
                        }
                    }
                }
            } else if edge {
                // differs in both coordinates: never adjacent in a product
                return false;
            }
        }
        true
    }

    fn unassign(
        &mut self,
        v: usize,
        (h, l): (usize, usize),
        touched_rows: &[(usize, usize)],
        touched_cols: &[(usize, usize)],
    ) {
        self.cell_of[v] = None;
        self.vertex_at[h][l] = None;
        for &(a, b) in touched_rows {
            self.row_edges[a][b] = -1;
            self.row_edges[b][a] = -1;
        }
        for &(a, b) in touched_cols {
            self.col_edges[a][b] = -1;
            self.col_edges[b][a] = -1;
        }
    }

    /// All vertices are placed; edges are consistent by construction. Loops
    /// must decompose into full rows and columns.
    fn finish(&self) -> Option<(Graph, Graph, Coordinatization)> {
        let looped_at = |h: usize, l: usize| {
            self.g
                .has_loop(self.vertex_at[h][l].expect("grid is complete"))
        };
        let full_rows: Vec<usize> =
            (0..self.n1).filter(|&h| (0..self.n2).all(|l| looped_at(h, l))).collect();
        let full_cols: Vec<usize> =
            (0..self.n2).filter(|&l| (0..self.n1).all(|h| looped_at(h, l))).collect();
        for h in 0..self.n1 {
            for l in 0..self.n2 {
                let explained = full_rows.contains(&h) || full_cols.contains(&l);
                if looped_at(h, l) != explained {
                    return None;
                }
            }
        }

        let mut h_edges = Vec::new();
        for a in 0..self.n1 {
            for b in a + 1..self.n1 {
                debug_assert_ne!(self.row_edges[a][b], -1);
                if self.row_edges[a][b] == 1 {
                    h_edges.push((a, b));
                }
            }
        }
        let mut l_edges = Vec::new();
        for a in 0..self.n2 {
            for b in a + 1..self.n2 {
                debug_assert_ne!(self.col_edges[a][b], -1);
                if self.col_edges[a][b] == 1 {
                    l_edges.push((a, b));
                }
            }
        }
        let h = Graph::new(self.n1, &h_edges, &full_rows).expect("factor is a valid graph");
        let l = Graph::new(self.n2, &l_edges, &full_cols).expect("factor is a valid graph");
        let coords: Vec<Vec<usize>> = (0..self.g.vertex_count())
            .map(|v| {
                let (a, b) = self.cell_of[v].expect("grid is complete");
                vec![a, b]
            })
            .collect();
        let coord = Coordinatization::new(vec![self.n1, self.n2], coords);
        Some((h, l, coord))
    }
}

/// Prime factorization by recursive two-splitting, with the default cap.
///
/// Requires a connected graph with at least one unlooped vertex. The trivial
/// graph factors into the empty product.
pub fn brute_force_factor(g: &Graph) -> Result<Factorization> {
    brute_force_factor_capped(g, DEFAULT_SPLIT_CAP)
}

/// Like [`brute_force_factor`] with an explicit cap.
pub fn brute_force_factor_capped(g: &Graph, cap: usize) -> Result<Factorization> {
    let n = g.vertex_count();
    if n > cap {
        return Err(Error::SizeLimitExceeded { n, cap });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.is_entirely_looped() {
        return Err(Error::NoUnloopedVertex);
    }
    if n == 1 {
        return Ok(Factorization::empty());
    }
    match brute_force_two_split_capped(g, cap)? {
        None => {
            let coords = (0..n).map(|v| vec![v]).collect();
            Ok(Factorization {
                primes: vec![g.clone()],
                coord: Coordinatization::new(vec![n], coords),
            })
        }
        Some((h, l, split_coord)) => {
            let fh = brute_force_factor_capped(&h, cap)?;
            let fl = brute_force_factor_capped(&l, cap)?;
            let mut primes = fh.primes;
            primes.extend(fl.primes);
            let sizes: Vec<usize> = primes.iter().map(Graph::vertex_count).collect();
            let coords: Vec<Vec<usize>> = (0..n)
                .map(|v| {
                    let pair = split_coord.coords(v);
                    let mut tuple = fh.coord.coords(pair[0]).to_vec();
                    tuple.extend_from_slice(fl.coord.coords(pair[1]));
                    tuple
                })
                .collect();
            Ok(Factorization {
                primes,
                coord: Coordinatization::new(sizes, coords),
            })
        }
    }
}

/// Parameters for random product instances.
#[derive(Debug, Clone, Copy)]
pub struct InstanceSpec {
    /// Number of generator factors.
    pub factor_count: usize,
    /// Smallest factor size (>= 1).
    pub min_size: usize,
    /// Largest factor size.
    pub max_size: usize,
    /// Per-vertex loop probability in [0, 1].
    pub loop_probability: f64,
    /// RNG seed; output is a pure function of the spec.
    pub seed: u64,
}

/// Generates random connected generator factors and their product.
///
/// Loops are sampled per vertex; an entirely looped factor gets the loop on
/// its lowest vertex cleared, which guarantees an unlooped vertex in the
/// product. Returns the product, the generators and the coordinatization.
pub fn random_instance(spec: &InstanceSpec) -> (Graph, Vec<Graph>, Coordinatization) {
    assert!(spec.factor_count >= 1, "need at least one factor");
    assert!(
        spec.min_size >= 1 && spec.min_size <= spec.max_size,
        "sizes must satisfy 1 <= min <= max"
    );
    assert!(
        (0.0..=1.0).contains(&spec.loop_probability),
        "loop probability must lie in [0, 1]"
    );
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let factors: Vec<Graph> = (0..spec.factor_count)
        .map(|_| {
            let size = rng.random_range(spec.min_size..=spec.max_size);
            random_connected(size, spec.loop_probability, &mut rng)
        })
        .collect();
    let (product, coord) = cartesian_product(&factors).expect("generators are nonempty");
    (product, factors, coord)
}

/// A random connected graph: a random attachment tree plus extra edges, with
/// sampled loops and a guaranteed unlooped vertex.
fn random_connected(n: usize, loop_probability: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.random_range(0..v), v));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !edges.contains(&(u, v)) && rng.random_bool(EXTRA_EDGE_PROB) {
                edges.push((u, v));
            }
        }
    }
    let mut loops: Vec<usize> = (0..n)
        .filter(|_| rng.random_bool(loop_probability))
        .collect();
    if loops.len() == n {
        loops.remove(0);
    }
    Graph::new(n, &edges, &loops).expect("generated edges are valid")
}

/// Copies `base` with loops sampled at `probability`; clears the lowest loop
/// if that would leave no unlooped vertex.
pub fn with_random_loops(base: &Graph, probability: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = base.vertex_count();
    let mut loops: Vec<usize> = (0..n).filter(|_| rng.random_bool(probability)).collect();
    if loops.len() == n {
        loops.remove(0);
    }
    Graph::new(n, &base.two_edges(), &loops).expect("base edges are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{find_isomorphism, verify_factorization};

    #[test]
    fn c4_splits_into_two_edges() {
        let (h, l, coord) = brute_force_two_split(&Graph::cycle(4)).unwrap().unwrap();
        assert_eq!(h, Graph::complete(2));
        assert_eq!(l, Graph::complete(2));
        assert_eq!(coord.sizes(), &[2, 2]);
    }

    #[test]
    fn c5_is_prime() {
        assert!(brute_force_two_split(&Graph::cycle(5)).unwrap().is_none());
    }

    #[test]
    fn c4_with_one_loop_is_prime() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[1]).unwrap();
        assert!(brute_force_two_split(&g).unwrap().is_none());
    }

    #[test]
    fn split_cap_is_enforced() {
        let g = Graph::path(11);
        assert!(matches!(
            brute_force_two_split(&g),
            Err(Error::SizeLimitExceeded { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn cube_factors_into_three_edges() {
        let f = brute_force_factor(&Graph::hypercube(3)).unwrap();
        assert_eq!(f.primes.len(), 3);
        assert!(f.primes.iter().all(|p| p == &Graph::complete(2)));
        assert!(verify_factorization(&Graph::hypercube(3), &f));
    }

    #[test]
    fn primes_factor_into_themselves() {
        for g in [Graph::cycle(5), Graph::complete(3), Graph::path(4)] {
            let f = brute_force_factor(&g).unwrap();
            assert_eq!(f.primes.len(), 1);
            assert_eq!(f.primes[0], g);
            assert!(verify_factorization(&g, &f));
        }
    }

    #[test]
    fn looped_k2_square_recovers_generators() {
        let k2l = Graph::new(2, &[(0, 1)], &[0]).unwrap();
        let k2 = Graph::complete(2);
        let (g, _) = cartesian_product(&[k2l.clone(), k2.clone()]).unwrap();
        let f = brute_force_factor(&g).unwrap();
        assert_eq!(f.primes.len(), 2);
        assert!(verify_factorization(&g, &f));
        let mut loop_counts: Vec<usize> = f.primes.iter().map(Graph::loop_count).collect();
        loop_counts.sort_unstable();
        assert_eq!(loop_counts, vec![0, 1]);
        let looped = f.primes.iter().find(|p| p.loop_count() == 1).unwrap();
        assert!(find_isomorphism(looped, &k2l).unwrap().is_some());
    }

    #[test]
    fn random_instance_is_deterministic_and_consistent() {
        let spec = InstanceSpec {
            factor_count: 3,
            min_size: 2,
            max_size: 4,
            loop_probability: 0.4,
            seed: 7,
        };
        let (g1, factors1, coord1) = random_instance(&spec);
        let (g2, factors2, _) = random_instance(&spec);
        assert_eq!(g1, g2);
        assert_eq!(factors1, factors2);

        // the product verifies against its generators
        let f = Factorization {
            primes: factors1.clone(),
            coord: coord1,
        };
        assert!(verify_factorization(&g1, &f));
        // at least one unlooped vertex was forced
        assert!(!g1.is_entirely_looped());
        // the loop rule holds at every product vertex
        for v in 0..g1.vertex_count() {
            let t = f.coord.coords(v);
            let expected = (0..factors1.len()).any(|i| factors1[i].has_loop(t[i]));
            assert_eq!(g1.has_loop(v), expected);
        }
    }
}
