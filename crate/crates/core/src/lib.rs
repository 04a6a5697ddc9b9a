//! Symbolic Hodge-diamond calculus and a construction planner realizing
//! prescribed Hodge numbers modulo `m` in positive characteristic.
//!
//! Diamonds hold exact polynomials over named unknowns (Hodge numbers the
//! construction does not pin down). A plan is an expression tree of atoms,
//! products, blowups and hyperplane sections; [`planner::solve_full`]
//! produces one for any admissible target and [`verify::verify`] checks it.

pub mod algebra;
pub mod calculus;
pub mod diamond;
pub mod fuzz;
pub mod oracle;
pub mod plan;
pub mod planner;
pub mod verify;

pub use algebra::{Assignment, AssignmentDoc, SymPoly, UnknownId};
pub use calculus::AtomSpec;
pub use diamond::{HodgeDiamond, ResidueTargets};
pub use plan::{Plan, PlanNode};
pub use verify::{verify, VerificationReport};
