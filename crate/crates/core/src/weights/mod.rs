//! Weight functions on a family and their generators.

mod params;

use std::ops::Index;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::guard::Guards;
use crate::lattice::{ElementId, Family, Graph, KindTag};

/// Non-negative finite weights indexed by element id, bound to the family
/// they were built for.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFn {
    values: Vec<f64>,
    family: u64,
}

impl WeightFn {
    pub fn new(family: &Family, values: Vec<f64>) -> Result<Self> {
        if values.len() != family.len() {
            return Err(Error::InvalidWeight(format!(
                "{} values for a family of {} elements",
                values.len(),
                family.len()
            )));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidWeight(format!(
                "element {} has weight {v}, weights must be finite and non-negative",
                family.element_key(i)
            )));
        }
        Ok(WeightFn {
            values,
            family: family.fingerprint(),
        })
    }

    pub fn from_fn(family: &Family, f: impl FnMut(ElementId) -> f64) -> Result<Self> {
        Self::new(family, family.ids().map(f).collect())
    }

    pub fn constant(family: &Family, c: f64) -> Result<Self> {
        Self::new(family, vec![c; family.len()])
    }

    /// Values computed internally from an already validated function.
    pub(crate) fn derived(&self, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), self.values.len());
        debug_assert!(values.iter().all(|v| v.is_finite() && *v >= 0.0));
        WeightFn {
            values,
            family: self.family,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_bound_to(&self, family: &Family) -> bool {
        self.family == family.fingerprint() && self.values.len() == family.len()
    }

    pub(crate) fn ensure_bound(&self, family: &Family) -> Result<()> {
        if self.is_bound_to(family) {
            Ok(())
        } else {
            Err(Error::FamilyMismatch)
        }
    }

    /// `max(0, w + delta)` pointwise.
    pub fn shifted(&self, delta: f64) -> Self {
        self.derived(self.values.iter().map(|v| (v + delta).max(0.0)).collect())
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }
}

impl Index<ElementId> for WeightFn {
    type Output = f64;

    fn index(&self, id: ElementId) -> &f64 {
        &self.values[id]
    }
}

/// `max_H |w1(H) − w2(H)|`.
pub fn sup_norm_distance(w1: &WeightFn, w2: &WeightFn) -> Result<f64> {
    if w1.family != w2.family || w1.len() != w2.len() {
        return Err(Error::FamilyMismatch);
    }
    Ok(w1
        .values
        .iter()
        .zip(&w2.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamKind {
    MaxDegree,
    CliqueNumber,
    IndependenceNumber,
    ChromaticNumber,
    ComponentCount,
    Order,
    Size,
}

impl ParamKind {
    pub const ALL: [ParamKind; 7] = [
        ParamKind::MaxDegree,
        ParamKind::CliqueNumber,
        ParamKind::IndependenceNumber,
        ParamKind::ChromaticNumber,
        ParamKind::ComponentCount,
        ParamKind::Order,
        ParamKind::Size,
    ];

    /// Needs exponential-time search.
    pub fn is_hard(self) -> bool {
        matches!(
            self,
            ParamKind::CliqueNumber | ParamKind::IndependenceNumber | ParamKind::ChromaticNumber
        )
    }

    fn eval(self, adj: &[u64], verts: u64) -> usize {
        match self {
            ParamKind::MaxDegree => params::max_degree(adj, verts),
            ParamKind::CliqueNumber => params::clique_number(adj, verts),
            ParamKind::IndependenceNumber => params::independence_number(adj, verts),
            ParamKind::ChromaticNumber => params::chromatic_number(adj, verts),
            ParamKind::ComponentCount => params::component_count(adj, verts),
            ParamKind::Order => params::order(verts),
            ParamKind::Size => params::size(adj, verts),
        }
    }
}

fn check_param_guard(n: usize, param: ParamKind, guards: &Guards) -> Result<()> {
    if param.is_hard() {
        Guards::check("exact graph parameter", n, guards.params)
    } else {
        Ok(())
    }
}

/// Exact value of `param` on the whole graph, under default guards.
pub fn graph_parameter(graph: &Graph, param: ParamKind) -> Result<usize> {
    check_param_guard(graph.vertex_count(), param, &Guards::default())?;
    let all = if graph.vertex_count() == 64 {
        u64::MAX
    } else {
        (1u64 << graph.vertex_count()) - 1
    };
    Ok(param.eval(&graph.adjacency(), all))
}

/// `w(H) = param(H) + offset`, where `H` is the induced subgraph on a vertex
/// subset or the subgraph formed by an edge subset and its endpoints.
pub fn gen_param_weights(
    graph: &Graph,
    family: &Family,
    param: ParamKind,
    offset: f64,
) -> Result<WeightFn> {
    if !offset.is_finite() || offset < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "offset {offset} must be finite and ≥ 0"
        )));
    }
    let adj = graph.adjacency();
    let mismatch = || Error::InvalidArgument("family was not built from this graph".into());
    match family.kind() {
        KindTag::Explicit => Err(Error::NeedsSubgraphFamily),
        KindTag::VertexInduced => {
            if family.boolean_ground() != Some(graph.vertex_count()) {
                return Err(mismatch());
            }
            check_param_guard(graph.vertex_count(), param, family.guards())?;
            WeightFn::from_fn(family, |id| {
                param.eval(&adj, family.mask(id).expect("boolean family")) as f64 + offset
            })
        }
        KindTag::EdgeSubsets => {
            if family.boolean_ground() != Some(graph.edge_count()) {
                return Err(mismatch());
            }
            let incident = graph
                .edges()
                .iter()
                .fold(0u64, |m, &(u, v)| m | 1 << u | 1 << v);
            check_param_guard(incident.count_ones() as usize, param, family.guards())?;
            let mut sub = vec![0u64; graph.vertex_count()];
            WeightFn::from_fn(family, |id| {
                let edges = family.mask(id).expect("boolean family");
                sub.iter_mut().for_each(|a| *a = 0);
                let mut verts = 0u64;
                for (i, &(u, v)) in graph.edges().iter().enumerate() {
                    if edges >> i & 1 == 1 {
                        sub[u] |= 1 << v;
                        sub[v] |= 1 << u;
                        verts |= 1 << u | 1 << v;
                    }
                }
                param.eval(&sub, verts) as f64 + offset
            })
        }
    }
}

/// Uniform draw on `[0, 1)` from the top 53 bits of a ChaCha8 output word.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Independent uniform values on `[lo, hi]`, one per element in id order.
///
/// The generator is ChaCha8 seeded with `seed` through `seed_from_u64`; each
/// value is `lo + (hi − lo)·u` with `u` built from the top 53 bits of one
/// 64-bit output, clamped to `hi`.
pub fn random_weights(family: &Family, seed: u64, lo: f64, hi: f64) -> Result<WeightFn> {
    if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || lo > hi {
        return Err(Error::InvalidArgument(format!(
            "need finite 0 ≤ lo ≤ hi, got lo = {lo}, hi = {hi}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    WeightFn::from_fn(family, |_| (lo + (hi - lo) * unit(&mut rng)).min(hi))
}

/// Adds independent uniform noise on `[−delta, delta]` and clamps at 0. The
/// result is within `delta` of `w` in sup norm, exactly in floating point.
pub fn perturb(w: &WeightFn, delta: f64, seed: u64) -> Result<WeightFn> {
    if !delta.is_finite() || delta < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "delta {delta} must be finite and ≥ 0"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = w
        .values
        .iter()
        .map(|&x| {
            let mut y = (x + delta * (2.0 * unit(&mut rng) - 1.0)).max(0.0);
            // rounding in x + t can overshoot delta by an ulp
            while (y - x).abs() > delta {
                y = 0.5 * (x + y);
            }
            y
        })
        .collect();
    Ok(w.derived(values))
}
