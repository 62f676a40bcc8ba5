//! Breadth-first search with deterministic tie-breaking.

use std::collections::VecDeque;

use crate::{Error, Graph, Result};

/// A BFS numbering of a connected graph from a chosen root.
#[derive(Debug, Clone)]
pub struct BfsOrder {
    /// The root vertex.
    pub root: usize,
    /// Visit sequence; a permutation of the vertex ids.
    pub order: Vec<usize>,
    /// Distance from the root, per vertex.
    pub dist: Vec<usize>,
    /// `levels[i]` holds exactly the vertices at distance `i`.
    pub levels: Vec<Vec<usize>>,
    /// BFS tree parent per vertex; the root is its own parent.
    pub parent: Vec<usize>,
}

/// Runs BFS from `root`, exploring neighbors in ascending vertex id.
///
/// Loops are ignored. Fails with `Disconnected` if some vertex is not
/// reachable along 2-edges.
pub fn bfs_order(g: &Graph, root: usize) -> Result<BfsOrder> {
    let n = g.vertex_count();
    if root >= n {
        return Err(Error::IdOutOfRange { id: root, n });
    }
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    dist[root] = 0;
    parent[root] = root;
    queue.push_back(root);
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &v in g.neighbors(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    if order.len() != n {
        return Err(Error::Disconnected);
    }
    let depth = dist.iter().copied().max().unwrap_or(0);
    let mut levels = vec![Vec::new(); depth + 1];
    for &v in &order {
        levels[dist[v]].push(v);
    }
    Ok(BfsOrder {
        root,
        order,
        dist,
        levels,
        parent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_levels() {
        let g = Graph::path(3);
        let b = bfs_order(&g, 0).unwrap();
        assert_eq!(b.levels, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(b.order, vec![0, 1, 2]);
        assert_eq!(b.dist, vec![0, 1, 2]);
    }

    #[test]
    fn cycle_level_sizes() {
        let g = Graph::cycle(4);
        for root in 0..4 {
            let b = bfs_order(&g, root).unwrap();
            let sizes: Vec<_> = b.levels.iter().map(Vec::len).collect();
            assert_eq!(sizes, vec![1, 2, 1]);
            assert_eq!(b.levels[0], vec![root]);
        }
    }

    #[test]
    fn order_is_nondecreasing_in_distance() {
        let g = Graph::hypercube(4);
        let b = bfs_order(&g, 5).unwrap();
        for w in b.order.windows(2) {
            assert!(b.dist[w[0]] <= b.dist[w[1]]);
        }
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::new(2, &[], &[]).unwrap();
        assert!(matches!(bfs_order(&g, 0), Err(Error::Disconnected)));
    }

    #[test]
    fn deterministic_neighbor_order() {
        let g = Graph::new(4, &[(0, 3), (0, 1), (1, 2), (3, 2)], &[]).unwrap();
        let b = bfs_order(&g, 0).unwrap();
        assert_eq!(b.order, vec![0, 1, 3, 2]);
        assert_eq!(b.parent[2], 1);
    }
}
