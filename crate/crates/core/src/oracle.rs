//! Brute-force reference implementations for tiny families.
//!
//! Everything here goes through `Family::leq`, `Family::join` and plain loops,
//! so it shares nothing with the transforms and dynamic programs used by the
//! property modules. Loops run in ascending id order and only replace the
//! current best on a strict improvement, which reproduces the witnesses
//! chosen by the fast paths.

use crate::convex::ConvexMode;
use crate::error::{Error, Result};
use crate::lattice::{ElementId, Family};
use crate::report::{CoverWitness, DefectReport, Property, Witness};
use crate::weights::WeightFn;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    /// Largest number of candidate parts whose subsets are enumerated.
    pub cover_parts: usize,
    /// Largest family scanned by the pair and triple loops.
    pub scan_elements: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            cover_parts: 15,
            scan_elements: 127,
        }
    }
}

fn check_budget(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::BudgetExceeded { what, size, limit })
    } else {
        Ok(())
    }
}

fn scan_budget(family: &Family, budget: OracleBudget) -> Result<()> {
    check_budget("family", family.len(), budget.scan_elements)
}

/// Minimal weight sum over all sets of parts below `h` whose join is `h`.
pub fn brute_min_cover(
    family: &Family,
    w: &WeightFn,
    h: ElementId,
    budget: OracleBudget,
) -> Result<(f64, CoverWitness)> {
    family.check_id(h)?;
    if !w.is_bound_to(family) {
        return Err(Error::FamilyMismatch);
    }
    let parts: Vec<ElementId> = family.ids().filter(|&p| family.leq(p, h)).collect();
    check_budget("cover candidates", parts.len(), budget.cover_parts)?;

    // join and sum of every subset of parts, built from the subset minus its lowest member
    let count = 1usize << parts.len();
    let mut join: Vec<Option<ElementId>> = vec![None; count];
    let mut sum = vec![0.0; count];
    let mut best: Option<(f64, usize)> = None;
    for s in 1..count {
        let low = s.trailing_zeros() as usize;
        let rest = s & (s - 1);
        let p = parts[low];
        if rest == 0 {
            join[s] = Some(p);
            sum[s] = w[p];
        } else {
            join[s] = join[rest].and_then(|j| family.join(p, j).ok());
            sum[s] = w[p] + sum[rest];
        }
        if join[s] == Some(h) && best.is_none_or(|(b, _)| sum[s] < b) {
            best = Some((sum[s], s));
        }
    }
    let (value, s) = best.expect("h covers itself");
    let chosen: Vec<ElementId> = (0..parts.len())
        .filter(|i| s >> i & 1 == 1)
        .map(|i| parts[i])
        .collect();
    Ok((
        value,
        CoverWitness {
            target: h,
            parts: chosen,
            cover_sum: value,
        },
    ))
}

pub fn brute_cover_closure(
    family: &Family,
    w: &WeightFn,
    budget: OracleBudget,
) -> Result<WeightFn> {
    let values = family
        .ids()
        .map(|h| brute_min_cover(family, w, h, budget).map(|(v, _)| v))
        .collect::<Result<Vec<_>>>()?;
    Ok(w.derived(values))
}

fn report(worst: Option<(f64, Witness)>) -> DefectReport {
    match worst {
        Some((gap, witness)) if gap >= 0.0 => DefectReport {
            epsilon_star: gap,
            witness: Some(witness),
        },
        _ => DefectReport {
            epsilon_star: 0.0,
            witness: None,
        },
    }
}

fn admissible(family: &Family, a: ElementId, b: ElementId, strict: bool) -> bool {
    family.leq(a, b) && !(strict && a == b)
}

pub fn brute_defect(
    family: &Family,
    w: &WeightFn,
    property: Property,
    mode: ConvexMode,
    budget: OracleBudget,
) -> Result<DefectReport> {
    if !w.is_bound_to(family) {
        return Err(Error::FamilyMismatch);
    }
    scan_budget(family, budget)?;
    let mut worst: Option<(f64, Witness)> = None;
    let mut offer = |gap: f64, witness: Witness| {
        if worst.as_ref().is_none_or(|(g, _)| gap > *g) {
            worst = Some((gap, witness));
        }
    };
    match property {
        Property::Monotone => {
            for a in family.ids() {
                for b in family.ids() {
                    if admissible(family, a, b, true) {
                        offer(w[a] - w[b], Witness::Pair { lower: a, upper: b });
                    }
                }
            }
        }
        Property::Subadditive => {
            for h in family.ids() {
                let (value, cover) = brute_min_cover(family, w, h, budget)?;
                offer(w[h] - value, Witness::Cover(cover));
            }
        }
        Property::Convex => {
            let strict = mode == ConvexMode::StrictChain;
            for mid in family.ids() {
                for low in family.ids() {
                    if !admissible(family, low, mid, strict) {
                        continue;
                    }
                    for high in family.ids() {
                        if admissible(family, mid, high, strict) {
                            offer(
                                2.0 * w[mid] - w[low] - w[high],
                                Witness::Triple { low, mid, high },
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(report(worst))
}

/// `min{ w(H′) : H ⊆ H′ } + ε/2` by a direct scan.
pub fn brute_monotone_repair(
    family: &Family,
    w: &WeightFn,
    epsilon: f64,
    budget: OracleBudget,
) -> Result<WeightFn> {
    scan_budget(family, budget)?;
    let values = family
        .ids()
        .map(|h| {
            family
                .ids()
                .filter(|&b| family.leq(h, b))
                .map(|b| w[b])
                .fold(f64::INFINITY, f64::min)
                + epsilon / 2.0
        })
        .collect();
    Ok(w.derived(values))
}

/// One minorant step, minimizing the average over every admissible pair.
pub fn brute_convex_step(
    family: &Family,
    w: &WeightFn,
    mode: ConvexMode,
    budget: OracleBudget,
) -> Result<WeightFn> {
    scan_budget(family, budget)?;
    let strict = mode == ConvexMode::StrictChain;
    let values = family
        .ids()
        .map(|h| {
            let mut best = f64::INFINITY;
            for low in family.ids().filter(|&l| admissible(family, l, h, strict)) {
                for high in family.ids().filter(|&u| admissible(family, h, u, strict)) {
                    best = best.min(0.5 * (w[low] + w[high]));
                }
            }
            match (best.is_finite(), strict) {
                (false, _) => w[h],
                (true, true) => w[h].min(best),
                (true, false) => best,
            }
        })
        .collect();
    Ok(w.derived(values))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Graph;
    use crate::weights::{gen_param_weights, ParamKind};

    fn p3() -> (Graph, Family) {
        let g = Graph::path(3);
        let f = Family::vertex_induced(&g).unwrap();
        (g, f)
    }

    fn squares(f: &Family) -> WeightFn {
        WeightFn::from_fn(f, |id| (f.mask(id).unwrap().count_ones() as f64).powi(2)).unwrap()
    }

    fn keys(f: &Family, ids: &[ElementId]) -> Vec<String> {
        ids.iter().map(|&i| f.element_key(i)).collect()
    }

    #[test]
    fn min_cover_examples() {
        let (_, f) = p3();
        let w = squares(&f);
        let b = OracleBudget::default();
        let (v, c) = brute_min_cover(&f, &w, f.find_key("0,1").unwrap(), b).unwrap();
        assert_eq!(v, 2.0);
        assert_eq!(keys(&f, &c.parts), ["0", "1"]);
        let (v, c) = brute_min_cover(&f, &w, f.top().unwrap(), b).unwrap();
        assert_eq!(v, 3.0);
        assert_eq!(keys(&f, &c.parts), ["0", "1", "2"]);
        let single = f.find_key("1").unwrap();
        let (v, c) = brute_min_cover(&f, &w, single, b).unwrap();
        assert_eq!((v, c.parts), (1.0, vec![single]));
    }

    #[test]
    fn defect_examples() {
        let (g, f) = p3();
        let comp = gen_param_weights(&g, &f, ParamKind::ComponentCount, 0.0).unwrap();
        let b = OracleBudget::default();
        let d = brute_defect(&f, &comp, Property::Monotone, ConvexMode::StrictChain, b).unwrap();
        assert_eq!(d.epsilon_star, 1.0);
        let d = brute_defect(
            &f,
            &squares(&f),
            Property::Subadditive,
            ConvexMode::StrictChain,
            b,
        )
        .unwrap();
        assert_eq!(d.epsilon_star, 6.0);
        let d = brute_defect(&f, &comp, Property::Convex, ConvexMode::StrictChain, b).unwrap();
        assert_eq!(d.epsilon_star, 2.0);
        assert_eq!(
            d.witness,
            Some(Witness::Triple {
                low: f.find_key("0").unwrap(),
                mid: f.find_key("0,2").unwrap(),
                high: f.find_key("0,1,2").unwrap(),
            })
        );
    }

    #[test]
    fn budgets_are_enforced() {
        let f = Family::vertex_induced(&Graph::empty(5)).unwrap();
        let w = WeightFn::constant(&f, 1.0).unwrap();
        let b = OracleBudget::default();
        assert!(matches!(
            brute_min_cover(&f, &w, f.top().unwrap(), b),
            Err(Error::BudgetExceeded { size: 31, .. })
        ));
        let g = Family::vertex_induced(&Graph::empty(7)).unwrap();
        let w = WeightFn::constant(&g, 1.0).unwrap();
        assert!(brute_defect(&g, &w, Property::Monotone, ConvexMode::PaperLiteral, b).is_ok());
        let h = Family::vertex_induced(&Graph::empty(8)).unwrap();
        let w = WeightFn::constant(&h, 1.0).unwrap();
        assert!(brute_defect(&h, &w, Property::Monotone, ConvexMode::PaperLiteral, b).is_err());
    }
}
