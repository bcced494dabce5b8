//! Maximum bipartite matching (Hopcroft–Karp) with a Hall-violator
//! certificate when the left side cannot be saturated.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

const FREE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    /// Partner of each left vertex.
    pub left: Vec<Option<usize>>,
    /// Partner of each right vertex.
    pub right: Vec<Option<usize>>,
    pub size: usize,
}

impl Matching {
    pub fn is_left_perfect(&self) -> bool {
        self.size == self.left.len()
    }
}

/// `adj[u]` lists the right neighbours of left vertex `u`.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> Matching {
    let n_left = adj.len();
    let mut mate_l = vec![FREE; n_left];
    let mut mate_r = vec![FREE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        // BFS layers from free left vertices
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if mate_l[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = mate_r[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        // vertex-disjoint shortest augmenting paths, iterative DFS
        let mut it = vec![0usize; n_left];
        for root in 0..n_left {
            if mate_l[root] != FREE {
                continue;
            }
            let mut path: Vec<usize> = vec![root];
            while let Some(&u) = path.last() {
                if it[u] == adj[u].len() {
                    dist[u] = usize::MAX;
                    path.pop();
                    continue;
                }
                let v = adj[u][it[u]];
                it[u] += 1;
                let w = mate_r[v];
                if w == FREE {
                    // augment along the path; each left vertex takes the
                    // right vertex it last tried
                    let mut right = v;
                    while let Some(x) = path.pop() {
                        let prev = mate_l[x];
                        mate_l[x] = right;
                        mate_r[right] = x;
                        right = prev;
                    }
                    size += 1;
                    break;
                }
                if dist[w] == dist[u].wrapping_add(1) {
                    path.push(w);
                }
            }
        }
    }
    Matching {
        left: mate_l.iter().map(|&v| (v != FREE).then_some(v)).collect(),
        right: mate_r.iter().map(|&u| (u != FREE).then_some(u)).collect(),
        size,
    }
}

/// For a maximum matching that misses some left vertex: the left vertices
/// reachable from unmatched ones along alternating paths, and their
/// neighbourhood. The neighbourhood is fully matched into the set, so it is
/// smaller than the set by the number of unmatched vertices (König).
pub fn hall_violator(adj: &[Vec<usize>], m: &Matching) -> Option<(Vec<usize>, Vec<usize>)> {
    if m.is_left_perfect() {
        return None;
    }
    let n_right = m.right.len();
    let mut seen_l = vec![false; adj.len()];
    let mut seen_r = vec![false; n_right];
    let mut stack: Vec<usize> = (0..adj.len()).filter(|&u| m.left[u].is_none()).collect();
    for &u in &stack {
        seen_l[u] = true;
    }
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if seen_r[v] {
                continue;
            }
            seen_r[v] = true;
            let w = m.right[v].expect("maximum matching has no augmenting path");
            if !seen_l[w] {
                seen_l[w] = true;
                stack.push(w);
            }
        }
    }
    let set = (0..adj.len()).filter(|&u| seen_l[u]).collect();
    let nbhd = (0..n_right).filter(|&v| seen_r[v]).collect();
    Some((set, nbhd))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn valid(adj: &[Vec<usize>], m: &Matching) -> bool {
        let mut count = 0;
        for (u, v) in m.left.iter().enumerate() {
            if let Some(v) = *v {
                if !adj[u].contains(&v) || m.right[v] != Some(u) {
                    return false;
                }
                count += 1;
            }
        }
        count == m.size
    }

    #[test]
    fn perfect_matching() {
        let adj = vec![vec![0, 1], vec![0], vec![1, 2]];
        let m = hopcroft_karp(&adj, 3);
        assert!(valid(&adj, &m));
        assert!(m.is_left_perfect());
        assert!(hall_violator(&adj, &m).is_none());
    }

    #[test]
    fn needs_augmentation() {
        // greedy would match 0-0 and block 1
        let adj = vec![vec![0, 1], vec![0], vec![1, 2], vec![2]];
        let m = hopcroft_karp(&adj, 3);
        assert!(valid(&adj, &m));
        assert_eq!(m.size, 3);
        let (set, nbhd) = hall_violator(&adj, &m).unwrap();
        assert!(nbhd.len() < set.len());
        for &u in &set {
            assert!(adj[u].iter().all(|v| nbhd.contains(v)));
        }
    }

    #[test]
    fn exhaustive_small_graphs() {
        // every bipartite graph with 3 left and 3 right vertices
        for mask in 0u32..(1 << 9) {
            let adj: Vec<Vec<usize>> = (0..3)
                .map(|u| (0..3).filter(|v| mask >> (3 * u + v) & 1 == 1).collect())
                .collect();
            let m = hopcroft_karp(&adj, 3);
            assert!(valid(&adj, &m));
            let best = brute_force(&adj);
            assert_eq!(m.size, best, "mask {mask:b}");
            match hall_violator(&adj, &m) {
                None => assert_eq!(m.size, 3),
                Some((set, nbhd)) => {
                    assert!(nbhd.len() < set.len());
                    for &u in &set {
                        assert!(adj[u].iter().all(|v| nbhd.contains(v)));
                    }
                }
            }
        }
    }

    fn brute_force(adj: &[Vec<usize>]) -> usize {
        fn go(adj: &[Vec<usize>], u: usize, used: &mut [bool]) -> usize {
            if u == adj.len() {
                return 0;
            }
            let mut best = go(adj, u + 1, used);
            for &v in &adj[u] {
                if !used[v] {
                    used[v] = true;
                    best = best.max(1 + go(adj, u + 1, used));
                    used[v] = false;
                }
            }
            best
        }
        go(adj, 0, &mut [false; 8])
    }
}
