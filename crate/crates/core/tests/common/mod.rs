#![allow(dead_code)]

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use weightlat::lattice::ExplicitPoset;
use weightlat::{Family, Graph, Guards, WeightFn};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn below(rng: &mut ChaCha8Rng, n: u64) -> u64 {
    rng.next_u64() % n
}

pub fn coin(rng: &mut ChaCha8Rng, p: f64) -> bool {
    ((rng.next_u64() >> 11) as f64) < p * (1u64 << 53) as f64
}

/// Erdős–Rényi graph G(n, p).
pub fn er_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if coin(rng, p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Vertex-induced family of a G(n, 1/2) graph with `n` drawn from `1..=max_n`.
pub fn random_family(rng: &mut ChaCha8Rng, max_n: usize) -> (Graph, Family) {
    let n = 1 + below(rng, max_n as u64) as usize;
    let g = er_graph(rng, n, 0.5);
    let f = Family::vertex_induced(&g).unwrap();
    (g, f)
}

pub fn int_weights(rng: &mut ChaCha8Rng, f: &Family, hi: u64) -> WeightFn {
    WeightFn::from_fn(f, |_| below(rng, hi + 1) as f64).unwrap()
}

/// Random order on `m` labelled elements: `i ≤ j` is generated only for
/// `i < j`, so the closure is always antisymmetric. With `top`, one more
/// element sits above everything.
pub fn random_poset(rng: &mut ChaCha8Rng, m: usize, p: f64, top: bool) -> Family {
    let mut leq = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if coin(rng, p) {
                leq.push((i, j));
            }
        }
    }
    let mut labels: Vec<String> = (0..m).map(|i| format!("e{i}")).collect();
    if top {
        labels.push("top".into());
        leq.extend((0..m).map(|i| (i, m)));
    }
    Family::explicit(
        ExplicitPoset {
            top: top.then_some(m),
            labels,
            leq,
        },
        Guards::default(),
    )
    .unwrap()
}

pub fn squares(f: &Family) -> WeightFn {
    WeightFn::from_fn(f, |id| (f.mask(id).unwrap().count_ones() as f64).powi(2)).unwrap()
}

pub fn by_keys(f: &Family, w: &WeightFn, keys: &[&str]) -> Vec<f64> {
    keys.iter().map(|k| w[f.find_key(k).unwrap()]).collect()
}

pub mod strategy {
    use proptest::collection::vec;
    use proptest::prelude::*;
    use weightlat::{Family, Graph, WeightFn};

    pub fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1..=max_n).prop_flat_map(|n| {
            vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
                let edges: Vec<_> = pairs
                    .zip(bits)
                    .filter(|(_, b)| *b)
                    .map(|(e, _)| e)
                    .collect();
                Graph::new(n, edges).unwrap()
            })
        })
    }

    /// Vertex-induced family with integer weights in `0..=hi`.
    pub fn int_instance(max_n: usize, hi: u32) -> impl Strategy<Value = (Graph, Family, WeightFn)> {
        graph(max_n)
            .prop_flat_map(move |g| {
                let f = Family::vertex_induced(&g).unwrap();
                let m = f.len();
                (Just(g), Just(f), vec(0..=hi, m))
            })
            .prop_map(|(g, f, vals)| {
                let w = WeightFn::new(&f, vals.into_iter().map(f64::from).collect()).unwrap();
                (g, f, w)
            })
    }

    /// Vertex-induced family with real weights in `[0, hi]`.
    pub fn real_instance(
        max_n: usize,
        hi: f64,
    ) -> impl Strategy<Value = (Graph, Family, WeightFn)> {
        graph(max_n)
            .prop_flat_map(move |g| {
                let f = Family::vertex_induced(&g).unwrap();
                let m = f.len();
                (Just(g), Just(f), vec(0.0..=hi, m))
            })
            .prop_map(|(g, f, vals)| {
                let w = WeightFn::new(&f, vals).unwrap();
                (g, f, w)
            })
    }
}
