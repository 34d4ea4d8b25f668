//! Approximate subadditivity: `w(H) ≤ w(H₁) + … + w(Hₙ) + ε` whenever the
//! `Hᵢ ⊆ H` cover `H`.
//!
//! The cover closure `w̄(H) = min Σ w(Hᵢ)` over all covers of `H` is the
//! subadditive minorant used for the repair. It is computed by
//!
//! ```text
//! c(H) = min( w(H), min{ c(A) + c(B) : A, B ⊊ H, A ∨ B = H } )
//! ```
//!
//! over a linear extension of the order. Any finite cover folds into binary
//! joins (`H₁ ∨ … ∨ Hₙ₋₁` is covered by the first `n − 1` parts), and a part
//! equal to `H` never beats the trivial cover because weights are
//! non-negative, so the recurrence reaches the minimum over all covers. Parts
//! may overlap, which is why `B` ranges over every set with `H ∖ A ⊆ B`, not
//! only complements of `A`.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::lattice::{proper_submasks_desc, ElementId, Family};
use crate::report::{
    check_epsilon, check_tolerance, BoundCheck, CoverWitness, DefectReport, RepairResult, Witness,
};
use crate::weights::{sup_norm_distance, WeightFn};

type Split = Option<(ElementId, ElementId)>;

struct Closure {
    values: Vec<f64>,
    split: Vec<Split>,
}

impl Closure {
    /// Distinct leaf parts of the optimal cover of `h`, ascending.
    fn parts(&self, h: ElementId) -> Vec<ElementId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![h];
        while let Some(x) = stack.pop() {
            match self.split[x] {
                Some((a, b)) => stack.extend([a, b]),
                None => {
                    out.insert(x);
                }
            }
        }
        out.into_iter().collect()
    }
}

/// For every `H`, the best binary split `min c(A) + c(B)` over `A, B ⊊ H`
/// with `A ∨ B = H`, starting from `base`. When `chained`, `c` is the table
/// being built (the cover recurrence); otherwise `c = base`.
fn best_splits(family: &Family, base: &[f64], chained: bool) -> Result<Closure> {
    let m = family.len();
    let mut values = base.to_vec();
    let mut split: Vec<Split> = vec![None; m];
    let mut one_step = vec![f64::INFINITY; m];

    if family.boolean_ground().is_some() {
        // ids ascend with masks, and proper submasks are numerically smaller
        for h in 0..m {
            let hm = h as u64 + 1;
            let mut best = if chained { base[h] } else { f64::INFINITY };
            let mut choice: Split = None;
            let table: &[f64] = if chained { &values } else { base };
            for a in proper_submasks_desc(hm) {
                let ca = table[a as usize - 1];
                if ca >= best {
                    continue;
                }
                let rest = hm & !a;
                let mut s = a;
                loop {
                    s = s.wrapping_sub(1) & a;
                    let b = (rest | s) as usize - 1;
                    let cand = ca + table[b];
                    if cand < best {
                        best = cand;
                        choice = Some((a as usize - 1, b));
                    }
                    if s == 0 {
                        break;
                    }
                }
            }
            if chained {
                values[h] = best;
                split[h] = choice;
            } else {
                one_step[h] = best;
                split[h] = choice;
            }
        }
    } else {
        family.check_join_closed()?;
        for h in family.linear_extension() {
            let below: Vec<ElementId> = family.strict_down(h).collect();
            let table: &[f64] = if chained { &values } else { base };
            let mut best = if chained { base[h] } else { f64::INFINITY };
            let mut choice: Split = None;
            for (i, &a) in below.iter().enumerate() {
                if table[a] >= best {
                    continue;
                }
                for &b in &below[i..] {
                    if family.join(a, b)? != h {
                        continue;
                    }
                    let cand = table[a] + table[b];
                    if cand < best {
                        best = cand;
                        choice = Some((a, b));
                    }
                }
            }
            if chained {
                values[h] = best;
            } else {
                one_step[h] = best;
            }
            split[h] = choice;
        }
    }
    Ok(Closure {
        values: if chained { values } else { one_step },
        split,
    })
}

fn closure(family: &Family, w: &WeightFn) -> Result<Closure> {
    w.ensure_bound(family)?;
    family.guard("cover closure", |g| g.covers)?;
    best_splits(family, w.values(), true)
}

/// `w̄(H) = min Σ w(Hᵢ)` over all covers of `H`.
pub fn cover_closure(family: &Family, w: &WeightFn) -> Result<WeightFn> {
    Ok(w.derived(closure(family, w)?.values))
}

/// `ε* = max_H (w(H) − w̄(H))`, with an optimal cover at the first maximizer.
pub fn subadditive_defect(family: &Family, w: &WeightFn) -> Result<DefectReport> {
    let c = closure(family, w)?;
    let (target, gap) =
        family
            .ids()
            .map(|h| (h, w[h] - c.values[h]))
            .fold(
                (0, f64::NEG_INFINITY),
                |best, x| if x.1 > best.1 { x } else { best },
            );
    let parts = c.parts(target);
    let cover_sum = parts.iter().map(|&p| w[p]).sum();
    Ok(DefectReport {
        epsilon_star: gap.max(0.0),
        witness: Some(Witness::Cover(CoverWitness {
            target,
            parts,
            cover_sum,
        })),
    })
}

pub fn is_approx_subadditive(family: &Family, w: &WeightFn, epsilon: f64) -> Result<bool> {
    check_epsilon(epsilon)?;
    Ok(subadditive_defect(family, w)?.holds_with(epsilon))
}

/// First pair `(A, B)` with `A ≤ B` in id order and
/// `w(A ∨ B) > w(A) + w(B) + tol`. Binary joins suffice: longer covers fold
/// into repeated joins.
pub fn verify_subadditive(
    family: &Family,
    w: &WeightFn,
    tol: f64,
) -> Result<Option<(ElementId, ElementId)>> {
    w.ensure_bound(family)?;
    family.guard("subadditivity verification", |g| g.covers)?;
    family.check_join_closed()?;
    for a in family.ids() {
        for b in a..family.len() {
            let j = family.join(a, b)?;
            if w[j] > w[a] + w[b] + tol {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// Given `lower ≤ Σ upper(Hᵢ)` over every cover, returns the subadditive
/// `w̄ = closure(upper)` with `lower ≤ w̄ ≤ upper`.
pub fn subadditive_sandwich(
    family: &Family,
    lower: &WeightFn,
    upper: &WeightFn,
) -> Result<WeightFn> {
    lower.ensure_bound(family)?;
    let c = cover_closure(family, upper)?;
    if let Some(h) = family.ids().find(|&h| lower[h] > c[h]) {
        return Err(Error::SandwichViolated {
            element: h,
            lower: lower[h],
            closure: c[h],
        });
    }
    Ok(c)
}

/// Repairs with the cover closure and checks `w − ε ≤ w̄ ≤ w`, the floor
/// `w₁ = max(0, w − ε) ≤ w̄`, and subadditivity of `w̄`.
pub fn subadditive_repair(family: &Family, w: &WeightFn, epsilon: f64) -> Result<RepairResult> {
    check_epsilon(epsilon)?;
    let c = closure(family, w)?;
    let repaired = w.derived(c.values);
    let distance = sup_norm_distance(w, &repaired)?;
    let defect = family.ids().map(|h| w[h] - repaired[h]).fold(0.0, f64::max);
    let tol = check_tolerance(w.max_value() + epsilon);

    let w_minus: Vec<f64> = w.values().iter().map(|v| v - epsilon).collect();
    let floor = w.shifted(-epsilon);
    // subadditivity slack per element: best split of w̄ itself
    let splits = best_splits(family, repaired.values(), false)?.values;
    let checks = vec![
        BoundCheck::entrywise("lower: w - eps <= w_bar", &w_minus, repaired.values(), tol),
        BoundCheck::entrywise("minorant: w_bar <= w", repaired.values(), w.values(), 0.0),
        BoundCheck::entrywise(
            "sandwich: w1 = max(0, w - eps) <= w_bar",
            floor.values(),
            repaired.values(),
            tol,
        ),
        BoundCheck::entrywise(
            "subadditive: w_bar(A v B) <= w_bar(A) + w_bar(B)",
            repaired.values(),
            &splits,
            tol,
        ),
    ];
    let hypothesis_holds = defect <= epsilon;
    Ok(RepairResult {
        guarantee_met: hypothesis_holds && checks.iter().all(|c| c.holds),
        repaired,
        distance,
        bound: epsilon,
        hypothesis_holds,
        checks,
        auxiliary: vec![("w1", floor)],
        trace: None,
    })
}
