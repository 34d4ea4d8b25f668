//! Approximate convexity along containment: `2w(H) ≤ w(H̲) + w(H̄) + ε` for
//! admissible triples `H̲ ⊆ H ⊆ H̄`.
//!
//! Two readings of "admissible" are supported. [`ConvexMode::PaperLiteral`]
//! takes the non-strict `⊆` at face value; [`ConvexMode::StrictChain`]
//! requires `H̲ ⊂ H ⊂ H̄`, which is the second-difference condition along
//! chains.
//!
//! The minorant iteration replaces each value by the best average of a
//! lower and an upper neighbour,
//!
//! ```text
//! wₖ(H) = min over admissible (H̲, H̄) of (wₖ₋₁(H̲) + wₖ₋₁(H̄)) / 2
//! ```
//!
//! The minimum splits into `(min below + min above) / 2`, so one step costs
//! two subset/superset min-transforms.
//!
//! In literal mode the pair `(H, H)` is admissible, so the step never
//! increases a value. With a top element `T`, the pair `(H*, H*)` at a
//! minimizer keeps `min wₖ` fixed, and `wₖ(T) = (min wₖ₋₁ + wₖ₋₁(T)) / 2`
//! pulls the top down to that minimum geometrically. Every other element
//! is bounded by the average of itself and the top, so the iteration
//! converges to the constant `min_H w₀(H)` ([`literal_limit`]).
//!
//! In strict mode the current value stays a candidate, making the step
//! `min(wₖ₋₁(H), average)`. That keeps the sequence non-increasing. An
//! element with no strict lower or no strict upper neighbour belongs to no
//! strict triple and keeps its value.

use crate::error::{Error, Result};
use crate::lattice::{ElementId, Family};
use crate::report::{
    check_epsilon, check_tolerance, BoundCheck, DefectReport, IterationTrace, RepairResult, Witness,
};
use crate::weights::{sup_norm_distance, WeightFn};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ConvexMode {
    /// Triples `H̲ ⊆ H ⊆ H̄`.
    PaperLiteral,
    /// Triples `H̲ ⊂ H ⊂ H̄`.
    #[default]
    StrictChain,
}

impl ConvexMode {
    pub fn name(self) -> &'static str {
        match self {
            ConvexMode::PaperLiteral => "literal",
            ConvexMode::StrictChain => "strict",
        }
    }

    fn strict(self) -> bool {
        self == ConvexMode::StrictChain
    }
}

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;

/// `ε* = max(0, max 2w(H) − w(H̲) − w(H̄))` over admissible triples.
pub fn convex_defect(family: &Family, w: &WeightFn, mode: ConvexMode) -> Result<DefectReport> {
    w.ensure_bound(family)?;
    family.guard("convex defect", |g| g.triples)?;
    let below = family.down_min(w.values(), mode.strict());
    let above = family.up_min(w.values(), mode.strict());
    let mut worst: Option<(f64, Witness)> = None;
    for h in family.ids() {
        if let (Some(lo), Some(hi)) = (below[h], above[h]) {
            let gap = 2.0 * w[h] - lo.value - hi.value;
            if worst.as_ref().is_none_or(|(g, _)| gap > *g) {
                worst = Some((
                    gap,
                    Witness::Triple {
                        low: lo.at,
                        mid: h,
                        high: hi.at,
                    },
                ));
            }
        }
    }
    Ok(match worst {
        Some((gap, witness)) if gap >= 0.0 => DefectReport {
            epsilon_star: gap,
            witness: Some(witness),
        },
        _ => DefectReport {
            epsilon_star: 0.0,
            witness: None,
        },
    })
}

pub fn is_approx_convex(
    family: &Family,
    w: &WeightFn,
    epsilon: f64,
    mode: ConvexMode,
) -> Result<bool> {
    check_epsilon(epsilon)?;
    Ok(convex_defect(family, w, mode)?.holds_with(epsilon))
}

/// Number of elements that belong to no admissible triple and are carried
/// over unchanged by the iteration (always 0 in literal mode).
pub fn unconstrained_elements(family: &Family, mode: ConvexMode) -> usize {
    if !mode.strict() {
        return 0;
    }
    let zeros = vec![0.0; family.len()];
    let below = family.down_min(&zeros, true);
    let above = family.up_min(&zeros, true);
    below
        .iter()
        .zip(&above)
        .filter(|(b, a)| b.is_none() || a.is_none())
        .count()
}

fn step(family: &Family, values: &[f64], mode: ConvexMode) -> Vec<f64> {
    let below = family.down_min(values, mode.strict());
    let above = family.up_min(values, mode.strict());
    values
        .iter()
        .zip(below.iter().zip(&above))
        .map(|(&v, pair)| match pair {
            (Some(lo), Some(hi)) => {
                let avg = 0.5 * (lo.value + hi.value);
                if mode.strict() {
                    v.min(avg)
                } else {
                    avg
                }
            }
            _ => v,
        })
        .collect()
}

/// One step of the minorant iteration.
pub fn convex_step(family: &Family, w: &WeightFn, mode: ConvexMode) -> Result<WeightFn> {
    w.ensure_bound(family)?;
    family.guard("convex iteration", |g| g.triples)?;
    Ok(w.derived(step(family, w.values(), mode)))
}

fn check_iteration_args(tol: f64, max_iter: usize) -> Result<()> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tol {tol} must be finite and > 0"
        )));
    }
    if max_iter == 0 {
        return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
    }
    Ok(())
}

/// Iterates [`convex_step`] from `w` until the sup-norm change of a step is at
/// most `tol` or `max_iter` steps have run. The first step (producing `w₀`)
/// counts as iteration 1.
pub fn convex_iterate(
    family: &Family,
    w: &WeightFn,
    mode: ConvexMode,
    tol: f64,
    max_iter: usize,
) -> Result<(WeightFn, IterationTrace)> {
    w.ensure_bound(family)?;
    family.guard("convex iteration", |g| g.triples)?;
    check_iteration_args(tol, max_iter)?;
    let mut current = w.values().to_vec();
    let mut sup_changes = Vec::new();
    let mut converged = false;
    while sup_changes.len() < max_iter {
        let next = step(family, &current, mode);
        let change = next
            .iter()
            .zip(&current)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = next;
        sup_changes.push(change);
        if change <= tol {
            converged = true;
            break;
        }
    }
    Ok((
        w.derived(current),
        IterationTrace {
            iterations: sup_changes.len(),
            sup_changes,
            converged,
        },
    ))
}

/// Limit of the literal-mode iteration: the constant `min_H w₀(H)`.
pub fn literal_limit(family: &Family, w: &WeightFn) -> Result<f64> {
    w.ensure_bound(family)?;
    family.top().ok_or(Error::NoTop)?;
    let first = convex_step(family, w, ConvexMode::PaperLiteral)?;
    Ok(first.min_value())
}

/// Repairs `w` by iterating from `w″₀`, the first step applied to `w + ε/2`,
/// and checks
///
/// - `ŵ ≤ w + ε/2` and `inf w − ε/2 ≤ ŵ`,
/// - `ŵ ≤ w″₀` and `inf w″₀ ≤ ŵ`,
/// - `inf w′ ≤ ŵ` with `w′ = max(w − ε/2, 0)`,
/// - `ŵ` convex in `mode` up to `10·tol`.
pub fn convex_repair(
    family: &Family,
    w: &WeightFn,
    epsilon: f64,
    mode: ConvexMode,
    tol: f64,
    max_iter: usize,
) -> Result<RepairResult> {
    check_epsilon(epsilon)?;
    check_iteration_args(tol, max_iter)?;
    let half = epsilon / 2.0;
    let defect = convex_defect(family, w, mode)?;
    let lifted = w.shifted(half);
    let first = convex_step(family, &lifted, mode)?;
    let (repaired, trace) = convex_iterate(family, &lifted, mode, tol, max_iter)?;

    let n = family.len();
    let inf_w = w.min_value();
    let w_prime = w.shifted(-half);
    let slack = check_tolerance(w.max_value() + half);
    // per-element convexity slack: (min below + min above) − 2ŵ(H)
    let below = family.down_min(repaired.values(), mode.strict());
    let above = family.up_min(repaired.values(), mode.strict());
    let doubled: Vec<f64> = repaired.values().iter().map(|v| 2.0 * v).collect();
    let neighbour_sum: Vec<f64> = below
        .iter()
        .zip(&above)
        .map(|p| match p {
            (Some(lo), Some(hi)) => lo.value + hi.value,
            _ => f64::INFINITY,
        })
        .collect();
    let checks = vec![
        BoundCheck::entrywise(
            "upper: w_hat <= w + eps/2",
            repaired.values(),
            lifted.values(),
            slack,
        ),
        BoundCheck::entrywise(
            "lower: inf w - eps/2 <= w_hat",
            &vec![inf_w - half; n],
            repaired.values(),
            slack,
        ),
        BoundCheck::entrywise(
            "minorant: w_hat <= w''_0",
            repaired.values(),
            first.values(),
            slack,
        ),
        BoundCheck::entrywise(
            "infimum: inf w''_0 <= w_hat",
            &vec![first.min_value(); n],
            repaired.values(),
            slack,
        ),
        BoundCheck::entrywise(
            "floor: inf w' <= w_hat",
            &vec![w_prime.min_value(); n],
            repaired.values(),
            slack,
        ),
        BoundCheck::entrywise(
            "convex: 2 w_hat(H) <= w_hat(low) + w_hat(high)",
            &doubled,
            &neighbour_sum,
            (10.0 * tol).max(slack),
        ),
    ];
    let distance = sup_norm_distance(w, &repaired)?;
    let hypothesis_holds = defect.holds_with(epsilon);
    Ok(RepairResult {
        guarantee_met: hypothesis_holds && trace.converged && checks.iter().all(|c| c.holds),
        repaired,
        distance,
        bound: w.max_value() - inf_w + half,
        hypothesis_holds,
        checks,
        auxiliary: vec![("w_prime", w_prime), ("w_second_0", first)],
        trace: Some(trace),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValleyWitness {
    pub chain: Vec<ElementId>,
    /// Index into `chain` of a value exceeding something on each side.
    pub position: usize,
}

/// Checks that along every maximal chain the weights are valley-shaped
/// (non-increasing, then non-decreasing). Reports the first chain with an
/// interior entry larger than some earlier and some later entry by more than
/// `tol`.
pub fn chain_valley_check(
    family: &Family,
    w: &WeightFn,
    tol: f64,
) -> Result<Option<ValleyWitness>> {
    w.ensure_bound(family)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::InvalidArgument(format!("tol {tol} must be ≥ 0")));
    }
    for chain in family.maximal_chains()? {
        let vals: Vec<f64> = chain.iter().map(|&h| w[h]).collect();
        let mut suffix_min = vec![f64::INFINITY; vals.len() + 1];
        for i in (0..vals.len()).rev() {
            suffix_min[i] = suffix_min[i + 1].min(vals[i]);
        }
        let mut prefix_min = f64::INFINITY;
        for j in 0..vals.len() {
            if vals[j] > prefix_min + tol && vals[j] > suffix_min[j + 1] + tol {
                return Ok(Some(ValleyWitness { chain, position: j }));
            }
            prefix_min = prefix_min.min(vals[j]);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{ExplicitPoset, Graph};
    use crate::weights::{gen_param_weights, ParamKind};
    use crate::Guards;

    const POPCOUNT_ORDER: [&str; 7] = ["0", "1", "2", "0,1", "1,2", "0,2", "0,1,2"];

    fn p3_components() -> (Family, WeightFn) {
        let g = Graph::path(3);
        let f = Family::vertex_induced(&g).unwrap();
        let w = gen_param_weights(&g, &f, ParamKind::ComponentCount, 0.0).unwrap();
        (f, w)
    }

    fn e3(values: [f64; 3]) -> (Family, WeightFn) {
        let f = Family::explicit(
            ExplicitPoset {
                labels: vec!["a".into(), "b".into(), "ab".into()],
                leq: vec![(0, 2), (1, 2)],
                top: Some(2),
            },
            Guards::default(),
        )
        .unwrap();
        let w = WeightFn::new(&f, values.to_vec()).unwrap();
        (f, w)
    }

    fn by_key(f: &Family, w: &WeightFn) -> Vec<f64> {
        POPCOUNT_ORDER
            .iter()
            .map(|k| w[f.find_key(k).unwrap()])
            .collect()
    }

    #[test]
    fn strict_defect_of_component_count() {
        let (f, w) = p3_components();
        let d = convex_defect(&f, &w, ConvexMode::StrictChain).unwrap();
        assert_eq!(d.epsilon_star, 2.0);
        assert_eq!(
            d.witness,
            Some(Witness::Triple {
                low: f.find_key("0").unwrap(),
                mid: f.find_key("0,2").unwrap(),
                high: f.find_key("0,1,2").unwrap(),
            })
        );
        let lit = convex_defect(&f, &w, ConvexMode::PaperLiteral).unwrap();
        assert!(lit.epsilon_star >= 2.0);
    }

    #[test]
    fn squares_are_strictly_convex() {
        let f = Family::vertex_induced(&Graph::path(3)).unwrap();
        let sq =
            WeightFn::from_fn(&f, |id| (f.mask(id).unwrap().count_ones() as f64).powi(2)).unwrap();
        assert_eq!(
            convex_defect(&f, &sq, ConvexMode::StrictChain)
                .unwrap()
                .epsilon_star,
            0.0
        );
        assert_eq!(chain_valley_check(&f, &sq, 0.0).unwrap(), None);
    }

    #[test]
    fn constants_are_convex_in_both_modes() {
        let (f, _) = p3_components();
        let c = WeightFn::constant(&f, 2.0).unwrap();
        for mode in [ConvexMode::PaperLiteral, ConvexMode::StrictChain] {
            assert_eq!(convex_defect(&f, &c, mode).unwrap().epsilon_star, 0.0);
            let (out, trace) = convex_iterate(&f, &c, mode, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            assert_eq!(out, c);
            assert!(trace.converged);
            assert_eq!(trace.sup_changes, [0.0]);
            let r = convex_repair(&f, &c, 1.0, mode, DEFAULT_TOL, DEFAULT_MAX_ITER).unwrap();
            assert!(r.repaired.values().iter().all(|&v| v == 2.5));
            assert!(r.guarantee_met);
        }
        assert_eq!(chain_valley_check(&f, &c, 0.0).unwrap(), None);
    }

    #[test]
    fn literal_iteration_on_e3() {
        let (f, w) = e3([1.0, 3.0, 2.0]);
        let first = convex_step(&f, &w, ConvexMode::PaperLiteral).unwrap();
        assert_eq!(first.values(), [1.0, 2.5, 1.5]);
        assert_eq!(literal_limit(&f, &w).unwrap(), 1.0);
        let (out, trace) = convex_iterate(&f, &w, ConvexMode::PaperLiteral, 1e-12, 1000).unwrap();
        assert!(trace.converged);
        assert!(out.values().iter().all(|v| (v - 1.0).abs() <= 1e-11));

        let r = convex_repair(&f, &w, 0.0, ConvexMode::PaperLiteral, 1e-12, 1000).unwrap();
        assert!(r.repaired.values().iter().all(|v| (v - 1.0).abs() <= 1e-11));
        assert!(r.checks.iter().all(|c| c.holds), "{:?}", r.checks);
    }

    #[test]
    fn strict_iteration_on_components() {
        let (f, w) = p3_components();
        let (out, trace) = convex_iterate(
            &f,
            &w,
            ConvexMode::StrictChain,
            DEFAULT_TOL,
            DEFAULT_MAX_ITER,
        )
        .unwrap();
        assert!(out.values().iter().all(|&v| v == 1.0));
        assert_eq!(trace.sup_changes, [1.0, 0.0]);
        assert_eq!(unconstrained_elements(&f, ConvexMode::StrictChain), 4);
        assert_eq!(unconstrained_elements(&f, ConvexMode::PaperLiteral), 0);
    }

    #[test]
    fn strict_repair_on_components() {
        let (f, w) = p3_components();
        let r = convex_repair(
            &f,
            &w,
            2.0,
            ConvexMode::StrictChain,
            DEFAULT_TOL,
            DEFAULT_MAX_ITER,
        )
        .unwrap();
        assert_eq!(by_key(&f, &r.repaired), [2.0; 7]);
        assert!(r.checks.iter().all(|c| c.holds), "{:?}", r.checks);
        assert!(r.guarantee_met);
        let (_, w2) = &r.auxiliary[1];
        assert_eq!(by_key(&f, w2), [2.0; 7]);
    }

    #[test]
    fn literal_limit_of_components_and_constants() {
        let (f, w) = p3_components();
        assert_eq!(literal_limit(&f, &w).unwrap(), 1.0);
        let c = WeightFn::constant(&f, 3.25).unwrap();
        assert_eq!(literal_limit(&f, &c).unwrap(), 3.25);
    }

    #[test]
    fn literal_limit_needs_top() {
        let f = Family::explicit(
            ExplicitPoset {
                labels: vec!["a".into(), "b".into()],
                leq: vec![],
                top: None,
            },
            Guards::default(),
        )
        .unwrap();
        let w = WeightFn::constant(&f, 1.0).unwrap();
        assert!(matches!(literal_limit(&f, &w), Err(Error::NoTop)));
    }

    #[test]
    fn valley_witness_on_components() {
        let (f, w) = p3_components();
        let v = chain_valley_check(&f, &w, 0.0).unwrap().unwrap();
        let keys: Vec<String> = v.chain.iter().map(|&h| f.element_key(h)).collect();
        assert_eq!(keys, ["0", "0,2", "0,1,2"]);
        assert_eq!(v.position, 1);
    }

    #[test]
    fn iteration_arguments_validated() {
        let (f, w) = p3_components();
        assert!(convex_iterate(&f, &w, ConvexMode::StrictChain, 0.0, 10).is_err());
        assert!(convex_iterate(&f, &w, ConvexMode::StrictChain, 1e-3, 0).is_err());
        let (_, trace) = convex_iterate(&f, &w, ConvexMode::StrictChain, 1e-3, 1).unwrap();
        assert!(!trace.converged);
    }
}
