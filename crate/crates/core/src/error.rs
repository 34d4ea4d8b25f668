use crate::lattice::ElementId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("explicit relation is not a partial order: {0}")]
    NotAPoset(String),

    #[error(
        "{operation} is limited to ground size {limit}, got {size} \
         (use --guard-override or WEIGHTLAT_GUARD to raise)"
    )]
    GuardExceeded {
        operation: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("elements {0} and {1} have no join in this family")]
    NoJoin(ElementId, ElementId),

    #[error("element id {0} is out of range")]
    UnknownElement(ElementId),

    #[error("family has no greatest element")]
    NoTop,

    #[error("operation needs a vertex-induced or edge-subset family")]
    NeedsSubgraphFamily,

    #[error("weight function is bound to a different family")]
    FamilyMismatch,

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error(
        "sandwich hypothesis fails at element {element}: lower bound {lower} exceeds cover closure {closure}"
    )]
    SandwichViolated {
        element: ElementId,
        lower: f64,
        closure: f64,
    },

    #[error("oracle budget exceeded: {what} has {size} items, budget is {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
