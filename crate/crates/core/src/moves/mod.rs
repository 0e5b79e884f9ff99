//! Exchange moves, permutation moves and move certificates.
//!
//! A permutation move selects vertices `v_1..v_n`, a family of child branches
//! at each, cuts all selected edges at once and glues the branches back by a
//! permutation, subject to every `v_i` receiving exactly as many edges as it
//! gave away. Selected vertices may sit inside branches moved from other
//! selected vertices; a branch travels together with whatever it holds after
//! regluing. The balance condition alone keeps the result a tree.

mod certificate;
mod exchange;
mod finder;
mod permutation;

pub use certificate::{CertificateError, CertificateMove, MoveCertificate};
pub use exchange::{
    apply_exchange, enumerate_exchange_moves, exchange_orbit, predicted_profile,
    validate_exchange_move, ExchangeMoveSpec, OrbitOverflow, DEFAULT_ORBIT_CAP,
};
pub use finder::{find_permutation_move, FindMoveError};
pub use permutation::{
    apply_permutation_move, exchange_to_permutation, validate_permutation_move, PermutationMoveSpec,
};

use std::fmt;

use crate::tree::VertexPath;

/// One reason a move does not apply to a tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoveViolation {
    NoVertices,
    GroupCountMismatch {
        vertices: usize,
        groups: usize,
    },
    InvalidVertex(VertexPath),
    DuplicateVertex(VertexPath),
    EmptyGroup {
        vertex: usize,
    },
    InvalidBranch {
        vertex: usize,
        child: usize,
    },
    DuplicateBranch {
        vertex: usize,
        child: usize,
    },
    BadBeta(String),
    NotAPermutation,
    EdgeSumMismatch {
        vertex: usize,
        given: usize,
        received: usize,
    },
    SameVertex,
    BranchContainsSelectedVertex {
        vertex: usize,
        child: usize,
    },
}

impl fmt::Display for MoveViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use MoveViolation::*;
        match self {
            NoVertices => write!(f, "move selects no vertices"),
            GroupCountMismatch { vertices, groups } => {
                write!(f, "{vertices} vertices but {groups} branch groups")
            }
            InvalidVertex(p) => write!(f, "invalid vertex path {p}"),
            DuplicateVertex(p) => write!(f, "vertex {p} selected twice"),
            EmptyGroup { vertex } => write!(f, "vertex {} has an empty branch group", vertex + 1),
            InvalidBranch { vertex, child } => {
                write!(f, "vertex {} has no child {child}", vertex + 1)
            }
            DuplicateBranch { vertex, child } => {
                write!(f, "vertex {} selects child {child} twice", vertex + 1)
            }
            BadBeta(msg) => write!(f, "bad beta sequence: {msg}"),
            NotAPermutation => write!(f, "permutation is not a bijection on the branches"),
            EdgeSumMismatch {
                vertex,
                given,
                received,
            } => write!(
                f,
                "group edge sums differ at vertex {}: gives {given}, receives {received}",
                vertex + 1
            ),
            SameVertex => write!(f, "exchange move needs two distinct vertices"),
            BranchContainsSelectedVertex { vertex, child } => write!(
                f,
                "selected branch contains a selected vertex (child {child} of vertex {})",
                vertex + 1
            ),
        }
    }
}

/// Joins violations into one line each.
pub fn describe_violations(violations: &[MoveViolation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}
