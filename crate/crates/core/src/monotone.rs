//! Approximate monotonicity: `w(H) ≤ w(H′) + ε` whenever `H ⊂ H′`.
//!
//! The repair takes the minimum over supersets and lifts it by `ε/2`:
//! `w̃(H) = min{ w(H′) : H ⊆ H′ } + ε/2`. It is monotone for every input, and
//! lies within `ε/2` of `w` whenever `w` is `ε`-approximately monotone.
//! Conversely, anything within `ε/2` of a monotone function is
//! `ε`-approximately monotone.

use crate::error::Result;
use crate::lattice::{ElementId, Family};
use crate::report::{
    check_epsilon, check_tolerance, BoundCheck, DefectReport, RepairResult, Witness,
};
use crate::weights::{sup_norm_distance, WeightFn};

/// `ε* = max(0, max_{H ⊂ H′} w(H) − w(H′))`, with a pair attaining it.
pub fn monotone_defect(family: &Family, w: &WeightFn) -> Result<DefectReport> {
    w.ensure_bound(family)?;
    family.guard("monotone defect", |g| g.pairs)?;
    let above = family.up_min(w.values(), true);
    let mut worst: Option<(f64, ElementId, ElementId)> = None;
    for (h, e) in above.iter().enumerate() {
        if let Some(e) = e {
            let gap = w[h] - e.value;
            if worst.is_none_or(|(g, _, _)| gap > g) {
                worst = Some((gap, h, e.at));
            }
        }
    }
    Ok(match worst {
        Some((gap, lower, upper)) if gap >= 0.0 => DefectReport {
            epsilon_star: gap,
            witness: Some(Witness::Pair { lower, upper }),
        },
        _ => DefectReport {
            epsilon_star: 0.0,
            witness: None,
        },
    })
}

pub fn is_approx_monotone(family: &Family, w: &WeightFn, epsilon: f64) -> Result<bool> {
    check_epsilon(epsilon)?;
    Ok(monotone_defect(family, w)?.holds_with(epsilon))
}

/// First violating pair `(H, H′)` with `H ⊂ H′` and `w(H) > w(H′)`, scanning
/// `H` in id order.
pub fn verify_monotone(family: &Family, w: &WeightFn) -> Result<Option<(ElementId, ElementId)>> {
    w.ensure_bound(family)?;
    family.guard("monotone verification", |g| g.pairs)?;
    let above = family.up_min(w.values(), true);
    Ok(above
        .iter()
        .enumerate()
        .find_map(|(h, e)| e.filter(|e| w[h] > e.value).map(|e| (h, e.at))))
}

pub fn monotone_repair(family: &Family, w: &WeightFn, epsilon: f64) -> Result<RepairResult> {
    check_epsilon(epsilon)?;
    let defect = monotone_defect(family, w)?;
    let half = epsilon / 2.0;
    let repaired = w.derived(
        family
            .up_min(w.values(), false)
            .into_iter()
            .map(|e| e.expect("every element is its own superset").value + half)
            .collect(),
    );
    let distance = sup_norm_distance(w, &repaired)?;
    let tol = check_tolerance(w.max_value() + half);

    let gaps: Vec<f64> = w
        .values()
        .iter()
        .zip(repaired.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    let strict_above: Vec<f64> = family
        .up_min(repaired.values(), true)
        .into_iter()
        .map(|e| e.map_or(f64::INFINITY, |e| e.value))
        .collect();
    let checks = vec![
        BoundCheck::entrywise(
            "norm: |w - w~| <= eps/2",
            &gaps,
            &vec![half; gaps.len()],
            tol,
        ),
        BoundCheck::entrywise(
            "monotone: w~(H) <= w~(H') for H < H'",
            repaired.values(),
            &strict_above,
            0.0,
        ),
    ];
    let hypothesis_holds = defect.holds_with(epsilon);
    Ok(RepairResult {
        guarantee_met: hypothesis_holds && checks.iter().all(|c| c.holds),
        repaired,
        distance,
        bound: half,
        hypothesis_holds,
        checks,
        auxiliary: Vec::new(),
        trace: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::lattice::Graph;
    use crate::weights::{gen_param_weights, ParamKind};

    fn p3() -> (Graph, Family) {
        let g = Graph::path(3);
        let f = Family::vertex_induced(&g).unwrap();
        (g, f)
    }

    fn components(g: &Graph, f: &Family) -> WeightFn {
        gen_param_weights(g, f, ParamKind::ComponentCount, 0.0).unwrap()
    }

    #[test]
    fn component_count_defect() {
        let (g, f) = p3();
        let d = monotone_defect(&f, &components(&g, &f)).unwrap();
        assert_eq!(d.epsilon_star, 1.0);
        assert_eq!(
            d.witness,
            Some(Witness::Pair {
                lower: f.find_key("0,2").unwrap(),
                upper: f.find_key("0,1,2").unwrap(),
            })
        );
    }

    #[test]
    fn monotone_and_constant_inputs() {
        let (g, f) = p3();
        let order = gen_param_weights(&g, &f, ParamKind::Order, 0.0).unwrap();
        let d = monotone_defect(&f, &order).unwrap();
        assert_eq!(d.epsilon_star, 0.0);
        assert_eq!(d.witness, None);
        let c = WeightFn::constant(&f, 4.0).unwrap();
        let d = monotone_defect(&f, &c).unwrap();
        assert_eq!(d.epsilon_star, 0.0);
        assert!(matches!(d.witness, Some(Witness::Pair { .. })));
    }

    #[test]
    fn approx_monotone_threshold() {
        let (g, f) = p3();
        let w = components(&g, &f);
        assert!(is_approx_monotone(&f, &w, 1.0).unwrap());
        assert!(!is_approx_monotone(&f, &w, 0.999).unwrap());
        assert!(is_approx_monotone(&f, &w, w.max_value()).unwrap());
        assert!(is_approx_monotone(&f, &w, -1.0).is_err());
    }

    #[test]
    fn repair_of_component_count() {
        let (g, f) = p3();
        let w = components(&g, &f);
        let r = monotone_repair(&f, &w, 1.0).unwrap();
        assert!(r.repaired.values().iter().all(|&v| v == 1.5));
        assert_eq!(r.distance, 0.5);
        assert!(r.guarantee_met);
        assert_eq!(verify_monotone(&f, &r.repaired).unwrap(), None);

        let short = monotone_repair(&f, &w, 0.5).unwrap();
        assert!(!short.hypothesis_holds && !short.guarantee_met);
    }

    #[test]
    fn repair_identity_and_shift() {
        let (g, f) = p3();
        let order = gen_param_weights(&g, &f, ParamKind::Order, 0.0).unwrap();
        assert_eq!(monotone_repair(&f, &order, 0.0).unwrap().repaired, order);
        let c = WeightFn::constant(&f, 2.0).unwrap();
        let r = monotone_repair(&f, &c, 3.0).unwrap();
        assert!(r.repaired.values().iter().all(|&v| v == 3.5));

        let w = components(&g, &f);
        let base = monotone_repair(&f, &w, 0.0).unwrap().repaired;
        let lifted = monotone_repair(&f, &w, 0.8).unwrap().repaired;
        for id in f.ids() {
            assert_eq!(lifted[id], base[id] + 0.4);
        }
    }

    #[test]
    fn verify_examples() {
        let (g, f) = p3();
        assert_eq!(
            verify_monotone(&f, &components(&g, &f)).unwrap(),
            Some((f.find_key("0,2").unwrap(), f.find_key("0,1,2").unwrap()))
        );
        let k1 = Family::vertex_induced(&Graph::empty(1)).unwrap();
        let w = WeightFn::constant(&k1, 5.0).unwrap();
        assert_eq!(verify_monotone(&k1, &w).unwrap(), None);
        assert_eq!(monotone_defect(&k1, &w).unwrap().witness, None);
    }

    #[test]
    fn rejects_foreign_weights() {
        let (_, f) = p3();
        let other = Family::vertex_induced(&Graph::path(2)).unwrap();
        let w = WeightFn::constant(&other, 1.0).unwrap();
        assert!(matches!(
            monotone_defect(&f, &w),
            Err(Error::FamilyMismatch)
        ));
    }
}
