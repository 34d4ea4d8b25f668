//! Exact graph parameters on vertex subsets.
//!
//! Every function takes neighbourhood masks `adj` and a vertex set `verts`;
//! it works on the subgraph induced by `verts` in the graph described by
//! `adj`, which may itself be a spanning subgraph of something larger.

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

pub(crate) fn order(verts: u64) -> usize {
    verts.count_ones() as usize
}

pub(crate) fn size(adj: &[u64], verts: u64) -> usize {
    bits(verts)
        .map(|v| (adj[v] & verts).count_ones() as usize)
        .sum::<usize>()
        / 2
}

pub(crate) fn max_degree(adj: &[u64], verts: u64) -> usize {
    bits(verts)
        .map(|v| (adj[v] & verts).count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub(crate) fn component_count(adj: &[u64], verts: u64) -> usize {
    let mut rest = verts;
    let mut count = 0;
    while rest != 0 {
        let mut reached = rest & rest.wrapping_neg();
        loop {
            let grown = bits(reached).fold(reached, |acc, v| acc | (adj[v] & verts));
            if grown == reached {
                break;
            }
            reached = grown;
        }
        rest &= !reached;
        count += 1;
    }
    count
}

fn grow_clique(adj: &[u64], candidates: u64, size: usize, best: &mut usize) {
    if candidates == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + candidates.count_ones() as usize <= *best {
        return;
    }
    let v = candidates.trailing_zeros() as usize;
    grow_clique(adj, candidates & adj[v], size + 1, best);
    grow_clique(adj, candidates & !(1 << v), size, best);
}

pub(crate) fn clique_number(adj: &[u64], verts: u64) -> usize {
    let mut best = 0;
    grow_clique(adj, verts, 0, &mut best);
    best
}

pub(crate) fn independence_number(adj: &[u64], verts: u64) -> usize {
    let complement: Vec<u64> = (0..adj.len())
        .map(|v| !adj[v] & verts & !(1u64 << v))
        .collect();
    clique_number(&complement, verts)
}

/// Backtracking over vertices in descending-degree order; a vertex may open
/// at most one new colour class, which removes colour permutations.
fn colourable(adj: &[u64], order: &[usize], classes: &mut Vec<u64>, k: usize, next: usize) -> bool {
    let Some(&v) = order.get(next) else {
        return true;
    };
    for c in 0..classes.len() {
        if classes[c] & adj[v] == 0 {
            classes[c] |= 1 << v;
            if colourable(adj, order, classes, k, next + 1) {
                return true;
            }
            classes[c] &= !(1 << v);
        }
    }
    if classes.len() < k {
        classes.push(1 << v);
        if colourable(adj, order, classes, k, next + 1) {
            return true;
        }
        classes.pop();
    }
    false
}

pub(crate) fn chromatic_number(adj: &[u64], verts: u64) -> usize {
    if verts == 0 {
        return 0;
    }
    let induced: Vec<u64> = adj.iter().map(|a| a & verts).collect();
    let mut order: Vec<usize> = bits(verts).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(induced[v].count_ones()));
    let lower = clique_number(&induced, verts).max(1);
    (lower..=order.len())
        .find(|&k| colourable(&induced, &order, &mut Vec::with_capacity(k), k, 0))
        .expect("n colours always suffice")
}
