//! Result containers shared by the property modules.

use serde::Serialize;

use crate::lattice::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Monotone,
    Subadditive,
    Convex,
}

impl Property {
    pub const ALL: [Property; 3] = [Property::Monotone, Property::Subadditive, Property::Convex];

    pub fn name(self) -> &'static str {
        match self {
            Property::Monotone => "monotone",
            Property::Subadditive => "subadditive",
            Property::Convex => "convex",
        }
    }
}

/// Evidence attaining a defect.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Witness {
    /// `lower ⊂ upper` with `w(lower) − w(upper)` equal to the defect.
    Pair { lower: ElementId, upper: ElementId },
    /// A cover of `target` whose weight sum realizes the cover closure.
    Cover(CoverWitness),
    /// `low ⊆ mid ⊆ high` (strict in chain mode) attaining the convex defect.
    Triple {
        low: ElementId,
        mid: ElementId,
        high: ElementId,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverWitness {
    pub target: ElementId,
    /// Distinct parts, ascending; their join is `target`.
    pub parts: Vec<ElementId>,
    pub cover_sum: f64,
}

/// Minimal `ε` for which an approximate property holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectReport {
    pub epsilon_star: f64,
    pub witness: Option<Witness>,
}

impl DefectReport {
    /// Whether the property holds with slack `epsilon`.
    pub fn holds_with(&self, epsilon: f64) -> bool {
        self.epsilon_star <= epsilon
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub iterations: usize,
    /// Sup-norm change produced by each step, first step included.
    pub sup_changes: Vec<f64>,
    pub converged: bool,
}

/// One inequality checked entrywise over the family: `lhs(H) ≤ rhs(H)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: &'static str,
    pub holds: bool,
    /// `min_H (rhs(H) − lhs(H))`; negative when violated.
    pub worst_slack: f64,
    /// Element attaining `worst_slack`.
    pub at: ElementId,
}

impl BoundCheck {
    /// Checks `lhs[i] ≤ rhs[i] + tol` for every `i`.
    pub fn entrywise(name: &'static str, lhs: &[f64], rhs: &[f64], tol: f64) -> Self {
        assert_eq!(lhs.len(), rhs.len());
        let (at, worst_slack) = lhs.iter().zip(rhs).map(|(l, r)| r - l).enumerate().fold(
            (0, f64::INFINITY),
            |best, (i, s)| if s < best.1 { (i, s) } else { best },
        );
        BoundCheck {
            name,
            holds: worst_slack >= -tol,
            worst_slack,
            at,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairResult {
    pub repaired: crate::weights::WeightFn,
    /// `‖w − repaired‖∞`.
    pub distance: f64,
    /// Sup-norm distance the construction promises when its hypothesis holds.
    pub bound: f64,
    /// The input satisfies the approximate property at the requested `ε`.
    pub hypothesis_holds: bool,
    /// Hypothesis holds and every check passed.
    pub guarantee_met: bool,
    pub checks: Vec<BoundCheck>,
    /// Intermediate weight functions reported by the construction, by name.
    pub auxiliary: Vec<(&'static str, crate::weights::WeightFn)>,
    pub trace: Option<IterationTrace>,
}

pub(crate) fn check_epsilon(epsilon: f64) -> crate::error::Result<()> {
    if epsilon.is_finite() && epsilon >= 0.0 {
        Ok(())
    } else {
        Err(crate::error::Error::InvalidArgument(format!(
            "epsilon {epsilon} must be finite and ≥ 0"
        )))
    }
}

/// Absolute slack granted to floating-point checks on values of magnitude
/// up to `scale`.
pub fn check_tolerance(scale: f64) -> f64 {
    1e-12 * (1.0 + scale.abs())
}
