//! Brute-force reference implementations, independent of the library's
//! canonical forms and matchers.

#![allow(dead_code)]

use std::collections::BTreeSet;

use motifcover::{EdgeKey, Graph};

/// All permutations of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn norm(u: usize, v: usize, directed: bool) -> (usize, usize) {
    if directed || u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Isomorphism test by trying every bijection.
pub fn isomorphic(n: usize, a: &[(usize, usize)], b: &[(usize, usize)], directed: bool) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let target: BTreeSet<_> = b.iter().map(|&(u, v)| norm(u, v, directed)).collect();
    permutations(n).iter().any(|p| {
        let img: BTreeSet<_> = a.iter().map(|&(u, v)| norm(p[u], p[v], directed)).collect();
        img == target
    })
}

/// Number of edge-preserving permutations.
pub fn automorphisms(n: usize, edges: &[(usize, usize)], directed: bool) -> usize {
    let set: BTreeSet<_> = edges.iter().map(|&(u, v)| norm(u, v, directed)).collect();
    permutations(n)
        .iter()
        .filter(|p| {
            let img: BTreeSet<_> = edges.iter().map(|&(u, v)| norm(p[u], p[v], directed)).collect();
            img == set
        })
        .count()
}

/// Weak connectivity of a graph on `0..n`.
pub fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(u, v) in edges {
            for (a, b) in [(u, v), (v, u)] {
                if a == x && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Vertex pairs of a `k`-vertex graph: ordered when directed.
pub fn slots(k: usize, directed: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i != j && (directed || i < j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Number of connected isomorphism classes on exactly `k` vertices, by
/// pairwise isomorphism testing against collected representatives.
pub fn connected_classes(k: usize, directed: bool) -> usize {
    let s = slots(k, directed);
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::new();
    for mask in 0u64..(1 << s.len()) {
        let edges: Vec<_> = (0..s.len()).filter(|&b| mask >> b & 1 == 1).map(|b| s[b]).collect();
        if !connected(k, &edges) {
            continue;
        }
        if !reps.iter().any(|r| isomorphic(k, r, &edges, directed)) {
            reps.push(edges);
        }
    }
    reps.len()
}

/// Every non-induced subgraph of `g` on `pattern.0` vertices isomorphic to
/// the pattern edges, as sorted edge lists. Tries every vertex subset and
/// every edge subset inside it.
pub fn brute_force_instances(g: &Graph, k: usize, pattern: &[(usize, usize)]) -> BTreeSet<Vec<EdgeKey>> {
    let n = g.vertex_count();
    let directed = g.is_directed();
    let mut out = BTreeSet::new();
    for vset in 0u32..(1 << n) {
        if vset.count_ones() as usize != k {
            continue;
        }
        let verts: Vec<u32> = (0..n as u32).filter(|&v| vset >> v & 1 == 1).collect();
        let inside: Vec<EdgeKey> = g
            .edges()
            .iter()
            .copied()
            .filter(|e| vset >> e.0 & 1 == 1 && vset >> e.1 & 1 == 1)
            .collect();
        for sub in 0u64..(1 << inside.len()) {
            let chosen: Vec<EdgeKey> = (0..inside.len()).filter(|&b| sub >> b & 1 == 1).map(|b| inside[b]).collect();
            if chosen.len() != pattern.len() {
                continue;
            }
            let local = |x: u32| verts.iter().position(|&v| v == x).unwrap();
            let le: Vec<(usize, usize)> = chosen.iter().map(|e| (local(e.0), local(e.1))).collect();
            let touched: BTreeSet<usize> = le.iter().flat_map(|&(a, b)| [a, b]).collect();
            if touched.len() == k && isomorphic(k, pattern, &le, directed) {
                out.insert(chosen);
            }
        }
    }
    out
}

/// `log2 C(n, k)` by summing logs of the multiplicative formula in u128
/// chunks; slow but obviously correct.
pub fn log2_binomial_naive(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    let mut total = 0.0f64;
    let mut acc_num: u128 = 1;
    let mut acc_den: u128 = 1;
    for i in 0..k {
        acc_num *= (n - i) as u128;
        acc_den *= (i + 1) as u128;
        if acc_num > 1 << 64 || acc_den > 1 << 64 {
            total += (acc_num as f64).log2() - (acc_den as f64).log2();
            acc_num = 1;
            acc_den = 1;
        }
    }
    total + (acc_num as f64).log2() - (acc_den as f64).log2()
}

/// Deterministic small random graph from a seed (xorshift).
pub fn random_graph(seed: u64, n: usize, p: f64, directed: bool) -> Graph {
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        (x >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in 0..n as u32 {
            if u != v && (directed || u < v) && next() < p {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, directed, edges).unwrap()
}
