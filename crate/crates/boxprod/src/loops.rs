//! Prime factorization of connected graphs with loops.
//!
//! The loop-free skeleton is factored first; its prime factors are indexed by
//! a base set which is then coarsened into a partition whose parts become the
//! loopy prime factors. A partition is valid when, at every vertex, the loop
//! flag is explained by the projections onto the parts: an unlooped vertex
//! must project to unlooped vertices only, a looped vertex must have at least
//! one looped projection. Two algorithms find the coarsest-necessary
//! partition: a subset scan over the base set, and a single BFS sweep that
//! merges parts on the first violation at each vertex.

use crate::bfs::bfs_order;
use crate::product::{Coordinatization, Factorization};
use crate::simple::factor_simple;
use crate::{cartesian_product, Error, Graph, Result};

/// Maximum number of base factors representable; `r <= log2(n)` keeps real
/// inputs far below this.
const MAX_BASE_FACTORS: usize = 63;

/// A coarsenable partition (union-find) of the base-factor index set.
#[derive(Debug, Clone)]
pub struct FactorPartition {
    parent: Vec<usize>,
    rank: Vec<u8>,
    part_count: usize,
}

impl FactorPartition {
    /// The discrete partition: every base index alone.
    pub fn discrete(base_count: usize) -> FactorPartition {
        FactorPartition {
            parent: (0..base_count).collect(),
            rank: vec![0; base_count],
            part_count: base_count,
        }
    }

    /// Number of base indices.
    pub fn base_count(&self) -> usize {
        self.parent.len()
    }

    /// Current number of parts.
    pub fn part_count(&self) -> usize {
        self.part_count
    }

    /// Canonical part id containing base index `j`.
    pub fn find(&mut self, j: usize) -> usize {
        if self.parent[j] != j {
            let root = self.find(self.parent[j]);
            self.parent[j] = root;
        }
        self.parent[j]
    }

    /// Merges the parts containing `a` and `b`; true if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
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
        self.part_count -= 1;
        true
    }

    /// The parts, each sorted ascending, ordered by smallest member.
    pub fn parts(&mut self) -> Vec<Vec<usize>> {
        let r = self.base_count();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); r];
        let mut order = Vec::new();
        for j in 0..r {
            let root = self.find(j);
            if by_root[root].is_empty() {
                order.push(root);
            }
            by_root[root].push(j);
        }
        order.into_iter().map(|root| std::mem::take(&mut by_root[root])).collect()
    }
}

/// Coordinates of a graph over the prime factors of its skeleton, translated
/// so that the chosen unlooped root sits at the origin.
///
/// Supports are stored flat: `support(v)` slices into one shared array.
#[derive(Debug, Clone)]
pub struct RelativeCoordinates {
    root: usize,
    base: Vec<Graph>,
    coord: Coordinatization,
    support_flat: Vec<usize>,
    support_start: Vec<usize>,
    support_mask: Vec<u64>,
}

impl RelativeCoordinates {
    /// The root vertex; unlooped, mapped to the all-origin tuple.
    pub fn root(&self) -> usize {
        self.root
    }

    /// The prime factors of the skeleton, relabeled so the root's coordinate
    /// is 0 in every position.
    pub fn base_factors(&self) -> &[Graph] {
        &self.base
    }

    /// Number of base factors.
    pub fn base_count(&self) -> usize {
        self.base.len()
    }

    /// The translated coordinatization of the skeleton.
    pub fn coord(&self) -> &Coordinatization {
        &self.coord
    }

    /// Base indices where `v` differs from the root, ascending.
    pub fn support(&self, v: usize) -> &[usize] {
        &self.support_flat[self.support_start[v]..self.support_start[v + 1]]
    }

    /// `support(v)` as a bitmask over base indices.
    pub fn support_mask(&self, v: usize) -> u64 {
        self.support_mask[v]
    }
}

/// Computes [`RelativeCoordinates`] for `g` rooted at `root`, factoring the
/// skeleton internally.
pub fn relative_coordinates(g: &Graph, root: usize) -> Result<RelativeCoordinates> {
    let base = factor_simple(&g.strip_loops())?;
    relative_coordinates_from(g, root, &base)
}

/// Builds [`RelativeCoordinates`] from an existing factorization of the
/// skeleton, relabeling each factor so `root` maps to the origin.
pub fn relative_coordinates_from(
    g: &Graph,
    root: usize,
    base: &Factorization,
) -> Result<RelativeCoordinates> {
    let n = g.vertex_count();
    if root >= n {
        return Err(Error::IdOutOfRange { id: root, n });
    }
    if n == 1 {
        return Err(Error::Trivial);
    }
    if g.has_loop(root) {
        return Err(Error::RootLooped { root });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = base.primes.len();
    assert!(r <= MAX_BASE_FACTORS, "base factor count exceeds bitmask width");

    // swap value 0 with the root's value in every factor
    let root_tuple = base.coord.coords(root).to_vec();
    let mut primes = Vec::with_capacity(r);
    let mut perms = Vec::with_capacity(r);
    for (j, prime) in base.primes.iter().enumerate() {
        let mut perm: Vec<usize> = (0..prime.vertex_count()).collect();
        perm.swap(0, root_tuple[j]);
        primes.push(prime.relabel(&perm));
        perms.push(perm);
    }
    let coords: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            base.coord
                .coords(v)
                .iter()
                .enumerate()
                .map(|(j, &c)| perms[j][c])
                .collect()
        })
        .collect();
    let sizes: Vec<usize> = primes.iter().map(Graph::vertex_count).collect();
    let coord = Coordinatization::new(sizes, coords);

    let mut support_flat = Vec::new();
    let mut support_start = Vec::with_capacity(n + 1);
    let mut support_mask = Vec::with_capacity(n);
    support_start.push(0);
    for v in 0..n {
        let mut mask = 0u64;
        for (j, &c) in coord.coords(v).iter().enumerate() {
            if c != 0 {
                support_flat.push(j);
                mask |= 1 << j;
            }
        }
        support_start.push(support_flat.len());
        support_mask.push(mask);
    }
    debug_assert_eq!(support_start[root], support_start[root + 1]);

    Ok(RelativeCoordinates {
        root,
        base: primes,
        coord,
        support_flat,
        support_start,
        support_mask,
    })
}

/// Projects `v` onto `part`: the vertex agreeing with `v` on the part's base
/// indices and with the root everywhere else.
pub fn project_to_part(
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
    v: usize,
    part: usize,
) -> usize {
    let part = partition.find(part);
    let mut inside_only = true;
    let mut outside_all = true;
    for &j in rc.support(v) {
        if partition.find(j) == part {
            outside_all = false;
        } else {
            inside_only = false;
        }
    }
    if inside_only {
        return v; // the part covers the whole support
    }
    if outside_all {
        return rc.root;
    }
    let mut tuple = vec![0usize; rc.base_count()];
    for &j in rc.support(v) {
        if partition.find(j) == part {
            tuple[j] = rc.coord().coords(v)[j];
        }
    }
    rc.coord().lookup(&tuple)
}

/// Outcome of the per-vertex loop-consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionCheck {
    /// Both conditions hold at the vertex.
    Ok,
    /// A condition is violated; the partition must coarsen.
    Violation(ViolationKind),
}

/// Which loop condition failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// The vertex is unlooped but some projection carries a loop.
    UnloopedButProjectionLooped,
    /// The vertex is looped but no projection carries one.
    LoopedButNoProjectionLooped,
}

/// Checks the two loop conditions at `v`: an unlooped vertex must project to
/// unlooped vertices on every part, a looped vertex must have some looped
/// projection. Only parts meeting the support are inspected; the others
/// project to the unlooped root.
pub fn check_conditions(
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
    v: usize,
    looped: &[bool],
) -> ConditionCheck {
    check_conditions_counted(rc, partition, v, looped).0
}

fn check_conditions_counted(
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
    v: usize,
    looped: &[bool],
) -> (ConditionCheck, usize) {
    let parts = touching_parts(rc, partition, v);
    let mut inspected = 0;
    if !looped[v] {
        for &p in &parts {
            inspected += 1;
            if looped[project_to_part(rc, partition, v, p)] {
                return (
                    ConditionCheck::Violation(ViolationKind::UnloopedButProjectionLooped),
                    inspected,
                );
            }
        }
        (ConditionCheck::Ok, inspected)
    } else {
        for &p in &parts {
            inspected += 1;
            if looped[project_to_part(rc, partition, v, p)] {
                return (ConditionCheck::Ok, inspected);
            }
        }
        (
            ConditionCheck::Violation(ViolationKind::LoopedButNoProjectionLooped),
            inspected,
        )
    }
}

/// The distinct parts meeting the support of `v`, in support order.
fn touching_parts(
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
    v: usize,
) -> Vec<usize> {
    let mut parts = Vec::new();
    for &j in rc.support(v) {
        let p = partition.find(j);
        if !parts.contains(&p) {
            parts.push(p);
        }
    }
    parts
}

/// Merges every part meeting the support of `v` into one, making `v` a unit
/// layer vertex. Fails if fewer than two parts meet the support.
pub fn merge_nonroot_parts(
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
    v: usize,
) -> Result<()> {
    let parts = touching_parts(rc, partition, v);
    if parts.len() <= 1 {
        return Err(Error::NothingToMerge { v });
    }
    for pair in parts.windows(2) {
        partition.union(pair[0], pair[1]);
    }
    Ok(())
}

/// Counters from the BFS merge scan, used to audit the cost accounting.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ScanStats {
    /// Number of (part, vertex) condition inspections performed.
    pub inspections: usize,
    /// Number of violation-triggered merges.
    pub merges: usize,
}

/// Prime factorization via one BFS sweep: scan vertices in BFS order from the
/// lowest unlooped vertex, merge the support-touching parts on each
/// violation, and never revisit earlier vertices.
pub fn factor_loops_linear(g: &Graph) -> Result<Factorization> {
    factor_loops_linear_with_stats(g).map(|(f, _)| f)
}

/// [`factor_loops_linear`] with scan counters.
pub fn factor_loops_linear_with_stats(g: &Graph) -> Result<(Factorization, ScanStats)> {
    validate_loopy_input(g)?;
    if g.vertex_count() == 1 {
        return Ok((Factorization::empty(), ScanStats::default()));
    }
    let base = factor_simple(&g.strip_loops())?;
    factor_loops_from_base(g, &base)
}

/// The loop-merging stage alone: consumes a prime factorization of the
/// skeleton and produces the loopy prime factorization. This is the part of
/// the pipeline whose cost is linear in the edge count; factoring the
/// skeleton is the caller's business.
pub fn factor_loops_from_base(g: &Graph, base: &Factorization) -> Result<(Factorization, ScanStats)> {
    let root = validate_loopy_input(g)?;
    if g.vertex_count() == 1 {
        return Ok((Factorization::empty(), ScanStats::default()));
    }
    let rc = relative_coordinates_from(g, root, base)?;
    let (mut partition, stats) = merge_scan(g, &rc)?;
    let factorization = assemble_factorization(g, &rc, &mut partition);
    Ok((factorization, stats))
}

/// The scan stage: from the discrete partition, sweep vertices in BFS order
/// and coarsen on violations.
pub(crate) fn merge_scan(g: &Graph, rc: &RelativeCoordinates) -> Result<(FactorPartition, ScanStats)> {
    let mut partition = FactorPartition::discrete(rc.base_count());
    let mut stats = ScanStats::default();
    let bfs = bfs_order(g, rc.root())?;
    let looped = g.loop_flags();
    for &v in &bfs.order {
        if v == rc.root() {
            continue;
        }
        let (check, inspected) = check_conditions_counted(rc, &mut partition, v, looped);
        stats.inspections += inspected;
        if let ConditionCheck::Violation(_) = check {
            merge_nonroot_parts(rc, &mut partition, v)?;
            stats.merges += 1;
        }
    }
    Ok((partition, stats))
}

/// Prime factorization via the subset scan: enumerate subsets of the base
/// index set by size, accept each subset whose split passes the loop
/// conditions at every vertex, and skip subsets meeting an accepted one.
pub fn factor_loops_subset_scan(g: &Graph) -> Result<Factorization> {
    let root = validate_loopy_input(g)?;
    if g.vertex_count() == 1 {
        return Ok(Factorization::empty());
    }
    let base = factor_simple(&g.strip_loops())?;
    let rc = relative_coordinates_from(g, root, &base)?;
    let r = rc.base_count();
    let full: u64 = (1u64 << r) - 1;

    let mut subsets: Vec<u64> = (1..=full).collect();
    subsets.sort_by_key(|&s| (s.count_ones(), s));

    let looped = g.loop_flags();
    let mut accepted: Vec<u64> = Vec::new();
    let mut covered: u64 = 0;
    for &subset in &subsets {
        if subset & covered != 0 {
            continue;
        }
        if split_passes(g, &rc, subset, looped) {
            accepted.push(subset);
            covered |= subset;
            if covered == full {
                break;
            }
        }
    }
    debug_assert_eq!(covered, full, "the full remainder always passes");

    let mut partition = FactorPartition::discrete(r);
    for mask in accepted {
        let mut prev = None;
        for j in 0..r {
            if mask & (1 << j) != 0 {
                if let Some(p) = prev {
                    partition.union(p, j);
                }
                prev = Some(j);
            }
        }
    }
    Ok(assemble_factorization(g, &rc, &mut partition))
}

/// Tests whether the split (subset, complement) satisfies, at every vertex:
/// unlooped vertices project unlooped on both sides, looped vertices have a
/// looped projection on some side.
fn split_passes(g: &Graph, rc: &RelativeCoordinates, subset: u64, looped: &[bool]) -> bool {
    for v in 0..g.vertex_count() {
        let p_in = project_to_mask(rc, v, subset);
        let p_out = project_to_mask(rc, v, !subset);
        if looped[v] {
            if !looped[p_in] && !looped[p_out] {
                return false;
            }
        } else if looped[p_in] || looped[p_out] {
            return false;
        }
    }
    true
}

/// The vertex agreeing with `v` on the base indices in `mask` and with the
/// root elsewhere.
fn project_to_mask(rc: &RelativeCoordinates, v: usize, mask: u64) -> usize {
    let sup = rc.support_mask(v);
    if sup & mask == sup {
        return v;
    }
    if sup & mask == 0 {
        return rc.root();
    }
    let mut tuple = vec![0usize; rc.base_count()];
    for &j in rc.support(v) {
        if mask & (1 << j) != 0 {
            tuple[j] = rc.coord().coords(v)[j];
        }
    }
    rc.coord().lookup(&tuple)
}

/// Builds the factor list for a finished partition: for each part, the
/// induced layer subgraph (2-edges and loops) through the unlooped root.
/// Output ordered by vertex count, 2-edge count, loop count, discovery index.
pub fn assemble_factors(
    g: &Graph,
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
) -> Vec<Graph> {
    assemble_factorization(g, rc, partition).primes
}

pub(crate) fn assemble_factorization(
    g: &Graph,
    rc: &RelativeCoordinates,
    partition: &mut FactorPartition,
) -> Factorization {
    let n = g.vertex_count();
    let parts = partition.parts();
    let mut factors: Vec<(Graph, usize)> = parts
        .iter()
        .enumerate()
        .map(|(idx, part)| (extract_part_layer(g, rc, part), idx))
        .collect();
    factors.sort_by_key(|(f, idx)| {
        (f.vertex_count(), f.two_edge_count(), f.loop_count(), *idx)
    });

    let ordered_parts: Vec<&Vec<usize>> = factors.iter().map(|&(_, idx)| &parts[idx]).collect();
    let sizes: Vec<usize> = factors.iter().map(|(f, _)| f.vertex_count()).collect();
    let coords: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            let tuple = rc.coord().coords(v);
            ordered_parts
                .iter()
                .map(|part| part_local_code(rc, part, tuple))
                .collect()
        })
        .collect();
    Factorization {
        primes: factors.into_iter().map(|(f, _)| f).collect(),
        coord: Coordinatization::new(sizes, coords),
    }
}

/// Row-major code of a tuple restricted to the (ascending) part indices.
fn part_local_code(rc: &RelativeCoordinates, part: &[usize], tuple: &[usize]) -> usize {
    let mut code = 0;
    for &j in part {
        code = code * rc.base_factors()[j].vertex_count() + tuple[j];
    }
    code
}

/// The layer through the root varying exactly the part's coordinates, with
/// induced loops, numbered row-major over the part.
fn extract_part_layer(g: &Graph, rc: &RelativeCoordinates, part: &[usize]) -> Graph {
    let part_mask: u64 = part.iter().fold(0, |m, &j| m | (1 << j));
    let sizes: Vec<usize> = part.iter().map(|&j| rc.base_factors()[j].vertex_count()).collect();
    let count: usize = sizes.iter().product();

    // enumerate layer vertices by local code, remembering the codes so edge
    // scanning stays proportional to the layer's edge count
    let mut vertex_at = Vec::with_capacity(count);
    let mut code_of = vec![usize::MAX; g.vertex_count()];
    let mut tuple = vec![0usize; rc.base_count()];
    let mut sub = vec![0usize; part.len()];
    for code in 0..count {
        for (pos, &j) in part.iter().enumerate() {
            tuple[j] = sub[pos];
        }
        let v = rc.coord().lookup(&tuple);
        vertex_at.push(v);
        code_of[v] = code;
        for pos in (0..part.len()).rev() {
            sub[pos] += 1;
            if sub[pos] < sizes[pos] {
                break;
            }
            sub[pos] = 0;
        }
    }

    let mut edges = Vec::new();
    let mut loops = Vec::new();
    for (code, &v) in vertex_at.iter().enumerate() {
        if g.has_loop(v) {
            loops.push(code);
        }
        for &w in g.neighbors(v) {
            // membership: w is in the layer iff its support lies in the part
            if rc.support_mask(w) & !part_mask == 0 {
                let wcode = code_of[w];
                if wcode > code {
                    edges.push((code, wcode));
                }
            }
        }
    }
    Graph::new(count, &edges, &loops).expect("layer is a valid graph")
}

/// True iff the product of `f.primes` under `f.coord` reproduces exactly the
/// 2-edges and loop flags of `g`.
pub fn verify_factorization(g: &Graph, f: &Factorization) -> bool {
    if f.primes.is_empty() {
        return g.vertex_count() == 1 && g.two_edge_count() == 0 && g.loop_count() == 0;
    }
    if f.coord.factor_count() != f.primes.len() || f.coord.vertex_count() != g.vertex_count() {
        return false;
    }
    let prime_sizes: Vec<usize> = f.primes.iter().map(Graph::vertex_count).collect();
    if f.coord.sizes() != prime_sizes.as_slice() {
        return false;
    }
    let Ok((product, pc)) = cartesian_product(&f.primes) else {
        return false;
    };
    let n = g.vertex_count();
    let image: Vec<usize> = (0..n).map(|v| pc.lookup(f.coord.coords(v))).collect();
    for v in 0..n {
        if g.has_loop(v) != product.has_loop(image[v]) {
            return false;
        }
    }
    if g.two_edge_count() != product.two_edge_count() {
        return false;
    }
    for u in 0..n {
        for &v in g.neighbors(u) {
            if u < v && !product.has_two_edge(image[u], image[v]) {
                return false;
            }
        }
    }
    true
}

fn validate_loopy_input(g: &Graph) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    match g.first_unlooped() {
        Some(root) => Ok(root),
        None => Err(Error::NoUnloopedVertex),
    }
}
