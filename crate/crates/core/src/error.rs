use thiserror::Error;

use crate::lattice::Elem;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// The first derivation axiom an operator map fails, in checking order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Axiom {
    /// `d(x)` is not an element of the lattice.
    Range { x: Elem },
    /// `d(0) != 0`.
    FixesBottom,
    /// `d(x) <= x` fails at `x`.
    Contraction { x: Elem },
    /// `d(x∧y) = (d(x)∧y) ∨ (x∧d(y))` fails at `(x, y)`.
    Leibniz { x: Elem, y: Elem },
}

impl std::fmt::Display for Axiom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axiom::Range { x } => write!(f, "d({x}) is not an element of the lattice"),
            Axiom::FixesBottom => write!(f, "d(0) = 0"),
            Axiom::Contraction { x } => write!(f, "d(x) <= x at x = {x}"),
            Axiom::Leibniz { x, y } => {
                write!(f, "d(x∧y) = (d(x)∧y) ∨ (x∧d(y)) at (x, y) = ({x}, {y})")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("elements {x} and {y} have no unique {bound}")]
    NotALattice { x: Elem, y: Elem, bound: &'static str },
    #[error("the order has no {0} element")]
    NotBounded(&'static str),
    #[error("cover relation contains a cycle")]
    CyclicCovers,
    #[error("element id {id} out of range for {n} elements")]
    OutOfRange { id: usize, n: usize },
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("lattice is not a chain")]
    NotAChain,
    #[error("expected {lower} <= {upper}")]
    BadPair { lower: Elem, upper: Elem },
    #[error("value {value} is not below d(1) = {top_value}")]
    BadBound { value: Elem, top_value: Elem },
    #[error("lattice does not have the expected shape: {0}")]
    WrongShape(&'static str),
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("operators belong to different lattices")]
    DifferentLattices,
    #[error("poset of derivations is not a lattice")]
    PosetNotLattice,
    #[error("precondition failed: {0}")]
    Precondition(&'static str),
    #[error("order {0} is too large to enumerate")]
    TooLarge(usize),
    #[error("isomorphism check failed: {0}")]
    IsoFailure(String),
    #[error("not a derivation: violates {0}")]
    NotADerivation(Axiom),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
