//! Isomorphism testing for small graphs with loops.
//!
//! Backtracking over candidate bijections, pruned by iterated degree/loop
//! partition refinement. Intended for desk-scale inputs; callers hit a
//! configurable size cap rather than an open-ended search.

use std::collections::HashMap;

use crate::{Error, Graph, Result};

/// Default vertex-count cap for [`find_isomorphism`].
pub const DEFAULT_ISO_CAP: usize = 12;

/// Searches for a bijection preserving 2-edges and loop flags in both
/// directions, with the default size cap.
///
/// Returns `Ok(Some(map))` with `map[v of g] = vertex of h`, `Ok(None)` if the
/// graphs are not isomorphic.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>> {
    find_isomorphism_capped(g, h, DEFAULT_ISO_CAP)
}

/// Like [`find_isomorphism`] with an explicit vertex-count cap.
pub fn find_isomorphism_capped(g: &Graph, h: &Graph, cap: usize) -> Result<Option<Vec<usize>>> {
    if g.vertex_count() > cap || h.vertex_count() > cap {
        return Err(Error::SizeLimitExceeded {
            n: g.vertex_count().max(h.vertex_count()),
            cap,
        });
    }
    if g.vertex_count() != h.vertex_count()
        || g.two_edge_count() != h.two_edge_count()
        || g.loop_count() != h.loop_count()
    {
        return Ok(None);
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(Some(Vec::new()));
    }

    let gc = refine_colors(g);
    let hc = refine_colors(h);
    if color_histogram(&gc) != color_histogram(&hc) {
        return Ok(None);
    }

    // Candidate targets per g-vertex: h-vertices of the same refined color.
    let mut by_color: HashMap<u64, Vec<usize>> = HashMap::new();
    for v in 0..n {
        by_color.entry(hc[v]).or_default().push(v);
    }

    // Assign the most constrained vertices first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (by_color[&gc[v]].len(), std::cmp::Reverse(g.degree(v)), v));

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if assign(g, h, &gc, &hc, &by_color, &order, 0, &mut mapping, &mut used) {
        Ok(Some(mapping))
    } else {
        Ok(None)
    }
}

#[allow(clippy::too_many_arguments)]
fn assign(
    g: &Graph,
    h: &Graph,
    gc: &[u64],
    hc: &[u64],
    by_color: &HashMap<u64, Vec<usize>>,
    order: &[usize],
    pos: usize,
    mapping: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if pos == order.len() {
        return true;
    }
    let v = order[pos];
    for &w in &by_color[&gc[v]] {
        if used[w] || hc[w] != gc[v] {
            continue;
        }
        if g.has_loop(v) != h.has_loop(w) {
            continue;
        }
        // consistency with everything already mapped, in both directions
        let consistent = order[..pos].iter().all(|&u| {
            let t = mapping[u];
            g.has_two_edge(v, u) == h.has_two_edge(w, t)
        });
        if !consistent {
            continue;
        }
        mapping[v] = w;
        used[w] = true;
        if assign(g, h, gc, hc, by_color, order, pos + 1, mapping, used) {
            return true;
        }
        mapping[v] = usize::MAX;
        used[w] = false;
    }
    false
}

/// Iterated neighborhood color refinement. Initial color is (degree, loop
/// flag); each round hashes the sorted multiset of neighbor colors in.
fn refine_colors(g: &Graph) -> Vec<u64> {
    let n = g.vertex_count();
    let mut colors: Vec<u64> = (0..n)
        .map(|v| hash_pair(g.degree(v) as u64, g.has_loop(v) as u64))
        .collect();
    for _ in 0..n {
        let mut next = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u64> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
            nb.sort_unstable();
            let mut acc = colors[v];
            for c in nb {
                acc = hash_pair(acc, c);
            }
            next.push(acc);
        }
        if next == colors {
            break;
        }
        colors = next;
    }
    colors
}

fn color_histogram(colors: &[u64]) -> Vec<(u64, usize)> {
    let mut hist: HashMap<u64, usize> = HashMap::new();
    for &c in colors {
        *hist.entry(c).or_insert(0) += 1;
    }
    let mut out: Vec<_> = hist.into_iter().collect();
    out.sort_unstable();
    out
}

fn hash_pair(a: u64, b: u64) -> u64 {
    // splitmix64-style mix of the pair
    let mut x = a
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(b)
        .wrapping_add(0x2545_f491_4f6c_dd1d);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
