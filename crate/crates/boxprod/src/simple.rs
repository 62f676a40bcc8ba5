//! Prime factorization of connected loop-free graphs with respect to the
//! Cartesian product.
//!
//! The pipeline: color the edges by the transitive closure of the square
//! relation (any product coloring is a coarsening of it), then try to
//! coordinatize the graph over the current color classes. A failed
//! coordinatization names two colors that have to live in the same factor;
//! they are merged and the attempt repeats. The class count strictly
//! decreases and the one-class coloring always coordinatizes, so the loop
//! terminates; a successful coordinatization is verified structurally, so the
//! result is always a genuine factorization.

use std::collections::HashMap;

use crate::bfs::bfs_order;
use crate::product::{box_layer_subgraph, Coordinatization, Factorization};
use crate::{Error, Graph, Result};

/// An edge coloring: one class index per 2-edge.
#[derive(Debug, Clone)]
pub struct EdgeColoring {
    edges: Vec<(usize, usize)>,
    color: Vec<usize>,
    k: usize,
}

impl EdgeColoring {
    /// Builds a coloring over the 2-edges of `g`. `color[i]` is the class of
    /// `edges[i]`; classes must be numbered `0..k` with none empty.
    pub fn new(g: &Graph, color: Vec<usize>) -> EdgeColoring {
        let edges = g.two_edges();
        assert_eq!(edges.len(), color.len());
        let k = color.iter().copied().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; k];
        for &c in &color {
            seen[c] = true;
        }
        assert!(seen.iter().all(|&b| b), "color classes must be contiguous");
        EdgeColoring { edges, color, k }
    }

    /// The colored edges, each once as `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Class of the `i`th edge.
    pub fn color(&self, edge: usize) -> usize {
        self.color[edge]
    }

    /// Number of classes.
    pub fn class_count(&self) -> usize {
        self.k
    }

    /// The coloring with classes `a` and `b` merged and class ids compacted
    /// in order of first appearance along the edge list.
    pub fn merged(&self, a: usize, b: usize) -> EdgeColoring {
        assert!(a != b && a < self.k && b < self.k);
        let mut remap = vec![usize::MAX; self.k];
        let mut next = 0;
        let mut color = Vec::with_capacity(self.color.len());
        for &c in &self.color {
            let joined = if c == b { a } else { c };
            if remap[joined] == usize::MAX {
                remap[joined] = next;
                next += 1;
            }
            color.push(remap[joined]);
        }
        EdgeColoring {
            edges: self.edges.clone(),
            color,
            k: next,
        }
    }
}

/// Two color classes that a failed coordinatization forces into one factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeWitness {
    pub first: usize,
    pub second: usize,
}

impl MergeWitness {
    fn new(a: usize, b: usize) -> MergeWitness {
        debug_assert_ne!(a, b);
        MergeWitness {
            first: a.min(b),
            second: a.max(b),
        }
    }
}

/// Colors the 2-edges of a connected loop-free graph by the transitive
/// closure of the square relation:
///
/// - opposite edges of a chordless 4-cycle are related;
/// - edges sharing an endpoint that lie in no common chordless 4-cycle are
///   related;
/// - edges sharing an endpoint that lie in two or more common 4-cycles are
///   related.
///
/// Each clause holds inside a single factor of any product structure, so the
/// resulting classes refine every product edge coloring and their count
/// upper-bounds the number of prime factors.
pub fn square_relation_closure(g: &Graph) -> Result<EdgeColoring> {
    if g.loop_count() > 0 {
        return Err(Error::HasLoops);
    }
    if g.vertex_count() < 2 {
        return Err(Error::Trivial);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }

    let edges = g.two_edges();
    let mut index = HashMap::with_capacity(edges.len());
    for (i, &e) in edges.iter().enumerate() {
        index.insert(e, i);
    }
    let eid = |u: usize, v: usize| index[&(u.min(v), u.max(v))];

    let mut dsu = Dsu::new(edges.len());
    let mut common = Vec::new();
    for x in 0..g.vertex_count() {
        let nb = g.neighbors(x);
        for (iy, &y) in nb.iter().enumerate() {
            for &z in &nb[iy + 1..] {
                common_neighbors(g, y, z, x, &mut common);
                let total = common.len();
                let yz_chord = g.has_two_edge(y, z);
                let mut chordless = 0;
                for &w in &common {
                    if !yz_chord && !g.has_two_edge(x, w) {
                        chordless += 1;
                        // opposite edges of the chordless square x,y,w,z
                        dsu.union(eid(x, y), eid(z, w));
                        dsu.union(eid(x, z), eid(y, w));
                    }
                }
                if chordless == 0 || total >= 2 {
                    dsu.union(eid(x, y), eid(x, z));
                }
            }
        }
    }

    let mut remap = vec![usize::MAX; edges.len()];
    let mut next = 0;
    let mut color = Vec::with_capacity(edges.len());
    for i in 0..edges.len() {
        let root = dsu.find(i);
        if remap[root] == usize::MAX {
            remap[root] = next;
            next += 1;
        }
        color.push(remap[root]);
    }
    Ok(EdgeColoring {
        edges,
        color,
        k: next,
    })
}

/// Tries to realize `g` as the product over the color classes of `coloring`,
/// anchored at `root`.
///
/// On success the returned coordinatization maps `root` to the origin, each
/// color-`c` edge changes exactly coordinate `c`, and the map is a verified
/// isomorphism onto the product of the color layers through the root. On any
/// inconsistency a [`MergeWitness`] names two classes the failure ties
/// together.
pub fn coordinatize_by_coloring(
    g: &Graph,
    coloring: &EdgeColoring,
    root: usize,
) -> std::result::Result<Coordinatization, MergeWitness> {
    let n = g.vertex_count();
    let k = coloring.class_count();
    assert!(root < n);
    debug_assert_eq!(coloring.edges(), g.two_edges());

    if n == 1 {
        return Ok(Coordinatization::new(Vec::new(), vec![Vec::new()]));
    }

    let adj = ColoredAdjacency::new(n, coloring);
    let bfs = bfs_order(g, root).expect("coordinatization requires a connected graph");

    // Unit layers: the color-c component through the root enumerates the
    // values of coordinate c.
    let mut value_of = vec![vec![usize::MAX; n]; k];
    let mut members = vec![Vec::new(); k];
    for c in 0..k {
        let vals = &mut value_of[c];
        let mems = &mut members[c];
        vals[root] = 0;
        mems.push(root);
        let mut head = 0;
        while head < mems.len() {
            let u = mems[head];
            head += 1;
            for &(w, col) in adj.list(u) {
                if col == c && vals[w] == usize::MAX {
                    vals[w] = mems.len();
                    mems.push(w);
                }
            }
        }
        // a unit layer must be induced: any differently colored edge inside
        // it ties the two classes together
        for &u in mems.iter() {
            for &(w, col) in adj.list(u) {
                if col != c && vals[w] != usize::MAX {
                    return Err(MergeWitness::new(c, col));
                }
            }
        }
        if mems.len() == 1 {
            // the class never reaches the root; a product coloring touches
            // every vertex with every class
            let (_, col) = adj.list(root)[0];
            return Err(MergeWitness::new(c, col));
        }
    }

    // Local square scan. For incident edges of different colors in a product,
    // the two far endpoints have exactly one further common neighbor, the
    // square is chordless, its distance from the root is additive, and its
    // opposite edges repeat the two colors. Any deviation forces a merge.
    let mut common = Vec::new();
    for &v in &bfs.order {
        let nb = adj.list(v);
        for (i1, &(u1, c1)) in nb.iter().enumerate() {
            for &(u2, c2) in &nb[i1 + 1..] {
                if c1 == c2 {
                    continue;
                }
                if g.has_two_edge(u1, u2) {
                    return Err(MergeWitness::new(c1, c2));
                }
                common_neighbors(g, u1, u2, v, &mut common);
                if common.len() != 1 {
                    return Err(MergeWitness::new(c1, c2));
                }
                let w = common[0];
                let expected = bfs.dist[u1] as isize + bfs.dist[u2] as isize - bfs.dist[v] as isize;
                if bfs.dist[w] as isize != expected {
                    return Err(MergeWitness::new(c1, c2));
                }
                if g.has_two_edge(v, w) {
                    return Err(MergeWitness::new(c1, c2));
                }
                let cw1 = adj.color(u1, w);
                if cw1 != c2 {
                    return Err(MergeWitness::new(c2.min(cw1), c2.max(cw1)));
                }
                let cw2 = adj.color(u2, w);
                if cw2 != c1 {
                    return Err(MergeWitness::new(c1.min(cw2), c1.max(cw2)));
                }
            }
        }
    }

    // Coordinate values via complement components: dropping the color-c edges
    // separates the graph into one component per value of coordinate c, and
    // each component must contain exactly one unit-layer vertex.
    let mut coords = vec![vec![usize::MAX; k]; n];
    for c in 0..k {
        let (comp, parent) = adj.components_without(c);
        let comp_count = comp.iter().copied().max().unwrap_or(0) + 1;
        let mut rep = vec![usize::MAX; comp_count];
        for &u in &members[c] {
            if rep[comp[u]] != usize::MAX {
                // two unit-layer vertices connected while avoiding color c
                let other = lowest_color_on_paths(&adj, &parent, rep[comp[u]], u);
                return Err(MergeWitness::new(c, other));
            }
            rep[comp[u]] = u;
        }
        if let Some(empty) = (0..comp_count).find(|&id| rep[id] == usize::MAX) {
            let other = lowest_internal_color(&adj, &comp, empty, c, k);
            return Err(MergeWitness::new(c, other));
        }
        for v in 0..n {
            coords[v][c] = value_of[c][rep[comp[v]]];
        }
    }

    // The coordinate map must be injective onto the full box.
    let sizes: Vec<usize> = members.iter().map(Vec::len).collect();
    let mut seen: HashMap<&[usize], usize> = HashMap::with_capacity(n);
    for v in 0..n {
        if let Some(&u) = seen.get(coords[v].as_slice()) {
            let other = lowest_color_pair_on_root_paths(&adj, &bfs, u, v);
            return Err(other);
        }
        seen.insert(coords[v].as_slice(), v);
    }
    let box_size = sizes.iter().try_fold(1usize, |acc, &s| {
        acc.checked_mul(s).filter(|&p| p <= n)
    });
    if box_size != Some(n) {
        // injective but not onto the box; no local witness to point at
        return Err(MergeWitness::new(0, 1));
    }

    // Unit layers as candidate factors, numbered by coordinate value.
    let factors: Vec<Graph> = (0..k)
        .map(|c| {
            let mut edges = Vec::new();
            for (val_u, &u) in members[c].iter().enumerate() {
                for &(w, col) in adj.list(u) {
                    if col == c && value_of[c][w] != usize::MAX && value_of[c][w] > val_u {
                        edges.push((val_u, value_of[c][w]));
                    }
                }
            }
            Graph::new(members[c].len(), &edges, &[]).expect("unit layer is a valid graph")
        })
        .collect();

    // Every edge must change exactly its own coordinate, along a factor edge.
    for (i, &(x, y)) in coloring.edges().iter().enumerate() {
        let c = coloring.color(i);
        if coords[x][c] == coords[y][c] {
            let (comp, parent) = adj.components_without(c);
            debug_assert_eq!(comp[x], comp[y]);
            let other = lowest_color_on_paths(&adj, &parent, x, y);
            return Err(MergeWitness::new(c, other));
        }
        if !factors[c].has_two_edge(coords[x][c], coords[y][c]) {
            let other = lowest_other_color_at(&adj, x, c, k);
            return Err(MergeWitness::new(c, other));
        }
    }

    // Edge counts must match the product exactly; together with the checks
    // above this makes the coordinate map a verified isomorphism.
    let expected_m: usize = (0..k)
        .map(|c| factors[c].two_edge_count() * (n / sizes[c]))
        .sum();
    if g.two_edge_count() != expected_m {
        let coord = Coordinatization::new(sizes, coords);
        let witness = locate_missing_product_edge(g, &adj, &coord, &factors, k);
        return Err(witness);
    }

    Ok(Coordinatization::new(sizes, coords))
}

/// Prime factorization of a connected loop-free graph, anchored at vertex 0.
///
/// The trivial graph factors into the empty product. Factors are emitted as
/// layer subgraphs through the root, ordered by vertex count, then 2-edge
/// count, then discovery index.
pub fn factor_simple(g: &Graph) -> Result<Factorization> {
    factor_simple_rooted(g, 0)
}

/// [`factor_simple`] with an explicit root; the prime multiset does not
/// depend on the choice.
pub fn factor_simple_rooted(g: &Graph, root: usize) -> Result<Factorization> {
    if g.loop_count() > 0 {
        return Err(Error::HasLoops);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.vertex_count() == 1 {
        return Ok(Factorization::empty());
    }

    let mut coloring = square_relation_closure(g)?;
    let coord = loop {
        match coordinatize_by_coloring(g, &coloring, root) {
            Ok(coord) => break coord,
            Err(witness) => {
                coloring = coloring.merged(witness.first, witness.second);
            }
        }
    };

    Ok(assemble_from_coordinatization(g, root, coord))
}

/// Extracts the factor layers through `root` and orders them canonically.
pub(crate) fn assemble_from_coordinatization(
    g: &Graph,
    root: usize,
    coord: Coordinatization,
) -> Factorization {
    let k = coord.factor_count();
    let mut primes: Vec<(Graph, usize)> = (0..k)
        .map(|i| {
            let (layer, _) = box_layer_subgraph(g, &coord, root, &[i])
                .expect("factor index is in range");
            (layer, i)
        })
        .collect();
    primes.sort_by_key(|(layer, i)| (layer.vertex_count(), layer.two_edge_count(), *i));
    let perm: Vec<usize> = primes.iter().map(|&(_, i)| i).collect();
    let coord = coord.permute_factors(&perm);
    Factorization {
        primes: primes.into_iter().map(|(layer, _)| layer).collect(),
        coord,
    }
}

// --- helpers ---

/// Adjacency lists annotated with edge colors, sorted by neighbor id.
struct ColoredAdjacency {
    lists: Vec<Vec<(usize, usize)>>,
}

impl ColoredAdjacency {
    fn new(n: usize, coloring: &EdgeColoring) -> ColoredAdjacency {
        let mut lists = vec![Vec::new(); n];
        for (i, &(u, v)) in coloring.edges().iter().enumerate() {
            let c = coloring.color(i);
            lists[u].push((v, c));
            lists[v].push((u, c));
        }
        for list in &mut lists {
            list.sort_unstable();
        }
        ColoredAdjacency { lists }
    }

    fn list(&self, v: usize) -> &[(usize, usize)] {
        &self.lists[v]
    }

    fn color(&self, u: usize, v: usize) -> usize {
        let list = &self.lists[u];
        let pos = list.partition_point(|&(w, _)| w < v);
        debug_assert!(pos < list.len() && list[pos].0 == v, "edge must exist");
        list[pos].1
    }

    /// Components after dropping all edges of color `c`, with BFS forest
    /// parents. Components are numbered by their lowest vertex, ascending.
    fn components_without(&self, c: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.lists.len();
        let mut comp = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = Vec::new();
        let mut next = 0;
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = next;
            parent[start] = start;
            queue.clear();
            queue.push(start);
            let mut head = 0;
            while head < queue.len() {
                let u = queue[head];
                head += 1;
                for &(w, col) in self.list(u) {
                    if col != c && comp[w] == usize::MAX {
                        comp[w] = next;
                        parent[w] = u;
                        queue.push(w);
                    }
                }
            }
            next += 1;
        }
        (comp, parent)
    }
}

/// Neighbors common to `y` and `z`, excluding `exclude`, into `out`.
fn common_neighbors(g: &Graph, y: usize, z: usize, exclude: usize, out: &mut Vec<usize>) {
    out.clear();
    let (a, b) = (g.neighbors(y), g.neighbors(z));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                if a[i] != exclude {
                    out.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

/// Lowest edge color seen climbing from `x` and `y` to their forest root.
fn lowest_color_on_paths(
    adj: &ColoredAdjacency,
    parent: &[usize],
    x: usize,
    y: usize,
) -> usize {
    let mut best = usize::MAX;
    for mut v in [x, y] {
        while parent[v] != v {
            let p = parent[v];
            best = best.min(adj.color(v, p));
            v = p;
        }
    }
    best
}

/// Lowest color != `c` on an edge inside component `id`, else lowest != `c`.
fn lowest_internal_color(
    adj: &ColoredAdjacency,
    comp: &[usize],
    id: usize,
    c: usize,
    k: usize,
) -> usize {
    let mut best = usize::MAX;
    for v in 0..comp.len() {
        if comp[v] != id {
            continue;
        }
        for &(w, col) in adj.list(v) {
            if comp[w] == id && col != c {
                best = best.min(col);
            }
        }
    }
    if best != usize::MAX {
        return best;
    }
    (0..k).find(|&col| col != c).expect("at least two classes")
}

/// Two lowest distinct colors on the root paths of `u` and `v`.
fn lowest_color_pair_on_root_paths(
    adj: &ColoredAdjacency,
    bfs: &crate::BfsOrder,
    u: usize,
    v: usize,
) -> MergeWitness {
    let mut seen = Vec::new();
    for mut x in [u, v] {
        while bfs.parent[x] != x {
            let p = bfs.parent[x];
            let col = adj.color(x, p);
            if !seen.contains(&col) {
                seen.push(col);
            }
            x = p;
        }
    }
    seen.sort_unstable();
    if seen.len() >= 2 {
        MergeWitness::new(seen[0], seen[1])
    } else {
        let c = seen[0];
        MergeWitness::new(c, if c == 0 { 1 } else { 0 })
    }
}

/// Finds a product edge missing from `g` and blames its color.
fn locate_missing_product_edge(
    g: &Graph,
    adj: &ColoredAdjacency,
    coord: &Coordinatization,
    factors: &[Graph],
    k: usize,
) -> MergeWitness {
    let mut tuple = Vec::new();
    for v in 0..g.vertex_count() {
        for (c, factor) in factors.iter().enumerate() {
            let val = coord.coords(v)[c];
            for &q in factor.neighbors(val) {
                tuple.clear();
                tuple.extend_from_slice(coord.coords(v));
                tuple[c] = q;
                let w = coord.lookup(&tuple);
                if !g.has_two_edge(v, w) {
                    let other = lowest_other_color_at(adj, v, c, k);
                    return MergeWitness::new(c, other);
                }
            }
        }
    }
    unreachable!("edge count mismatch implies a missing product edge");
}

/// Lowest color != `c` incident to `v`, else lowest != `c` overall.
fn lowest_other_color_at(adj: &ColoredAdjacency, v: usize, c: usize, k: usize) -> usize {
    adj.list(v)
        .iter()
        .map(|&(_, col)| col)
        .filter(|&col| col != c)
        .min()
        .unwrap_or_else(|| (0..k).find(|&col| col != c).expect("at least two classes"))
}

/// Plain union-find over `0..n`.
struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl Dsu {
    fn new(n: usize) -> Dsu {
        Dsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.rank[a] < self.rank[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        if self.rank[a] == self.rank[b] {
            self.rank[a] += 1;
        }
        true
    }
}
