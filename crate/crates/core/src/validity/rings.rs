use std::collections::BTreeSet;

/// Simple cycles of length 3..=`max_len` in an undirected graph, each returned
/// once as its vertex sequence starting from the smallest vertex.
pub fn simple_cycles(adj: &[Vec<usize>], max_len: usize) -> Vec<Vec<usize>> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    let mut path = Vec::new();
    for start in 0..adj.len() {
        path.clear();
        path.push(start);
        extend(adj, start, max_len, &mut path, &mut seen, &mut out);
    }
    out
}

fn extend(
    adj: &[Vec<usize>],
    start: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    seen: &mut BTreeSet<Vec<usize>>,
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("non-empty path");
    for &next in &adj[last] {
        if next == start && path.len() >= 3 {
            let mut key = path.clone();
            key.sort_unstable();
            if seen.insert(key) {
                out.push(path.clone());
            }
        } else if next > start && !path.contains(&next) && path.len() < max_len {
            path.push(next);
            extend(adj, start, max_len, path, seen, out);
            path.pop();
        }
    }
}

/// True if the edge `a–b` lies on some cycle of length ≤ `max_len`.
pub fn edge_in_ring(cycles: &[Vec<usize>], a: usize, b: usize) -> bool {
    cycles.iter().any(|c| {
        (0..c.len()).any(|k| {
            let (x, y) = (c[k], c[(k + 1) % c.len()]);
            (x == a && y == b) || (x == b && y == a)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn adj_from(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    #[test]
    fn naphthalene_has_two_six_rings_and_one_ten_ring() {
        let edges = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0),
            (4, 6), (6, 7), (7, 8), (8, 9), (9, 5),
        ];
        let adj = adj_from(10, &edges);
        let small = simple_cycles(&adj, 6);
        assert_eq!(small.len(), 2);
        assert!(small.iter().all(|c| c.len() == 6));
        assert_eq!(simple_cycles(&adj, 10).len(), 3);
        assert!(edge_in_ring(&small, 4, 5));
    }

    #[test]
    fn chain_has_no_rings() {
        let adj = adj_from(4, &[(0, 1), (1, 2), (2, 3)]);
        assert!(simple_cycles(&adj, 8).is_empty());
    }
}
