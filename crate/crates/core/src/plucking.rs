//! The plucking polynomial `Q(T)`, computed three independent ways:
//!
//! * [`q_recursive`]: the leaf-plucking recursion on the plane tree,
//! * [`q_state_product`]: the product of q-multinomial vertex weights,
//! * [`q_quotient`]: `[d(r)]_q! / prod_{v != r} [d(v)+1]_q`.
//!
//! [`count_pluck_sequences`] is a brute-force oracle for `Q(T)` at `q = 1`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::qcalc::{multinomial_fraction, q_binomial, q_multinomial, QNumFraction, QPoly};
use crate::tree::{PlaneTree, VertexPath};

/// Largest edge count accepted by [`count_pluck_sequences`].
pub const PLUCK_SEQUENCE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PluckingError {
    #[error("tree has {edges} edges; brute force is limited to {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error(
        "methods disagree on {tree}: recursive={recursive} product={product} quotient={quotient}"
    )]
    MethodMismatch {
        tree: String,
        recursive: QPoly,
        product: QPoly,
        quotient: QPoly,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Recursive,
    Product,
    Quotient,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Recursive, Method::Product, Method::Quotient];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Recursive => "recursive",
            Method::Product => "product",
            Method::Quotient => "quotient",
        })
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "recursive" => Ok(Method::Recursive),
            "product" => Ok(Method::Product),
            "quotient" => Ok(Method::Quotient),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// `Q(T) = sum_{v leaf} q^{r(T,v)} Q(T - v)`, `Q(point) = 1`.
///
/// Subresults are memoized by canonical code, which is sound because `Q`
/// does not depend on the embedding. The memo is local to each call.
pub fn q_recursive(t: &PlaneTree) -> QPoly {
    let mut memo = HashMap::new();
    recursive_memo(t, &mut memo)
}

fn recursive_memo(t: &PlaneTree, memo: &mut HashMap<String, QPoly>) -> QPoly {
    if t.is_leaf() {
        return QPoly::one();
    }
    let key = t.canonical_code();
    if let Some(q) = memo.get(&key) {
        return q.clone();
    }
    let mut total = QPoly::zero();
    for leaf in t.leaves() {
        let r = t.r_value(&leaf).expect("leaf path");
        let rest = t.pluck(&leaf).expect("leaf of a tree with an edge");
        total = &total + &recursive_memo(&rest, memo).shift(r);
    }
    memo.insert(key, total.clone());
    total
}

/// The Boltzmann weight attached to one vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexWeight {
    pub vertex: VertexPath,
    /// `d(v_i) + 1` for each child, in plane order.
    pub parts: Vec<u32>,
    pub weight: QPoly,
}

/// `W(v) = binom(d(v); d(v_1)+1, ..., d(v_k)+1)_q` for every vertex, preorder.
pub fn vertex_weights(t: &PlaneTree) -> Vec<VertexWeight> {
    t.vertices()
        .into_iter()
        .map(|vertex| {
            let node = t.get(&vertex).expect("own vertex");
            let parts: Vec<u32> = node
                .children()
                .iter()
                .map(|c| c.edge_count() as u32 + 1)
                .collect();
            let weight = q_multinomial(&parts);
            VertexWeight {
                vertex,
                parts,
                weight,
            }
        })
        .collect()
}

/// State product formula `Q(T) = prod_v W(v)`.
pub fn q_state_product(t: &PlaneTree) -> QPoly {
    vertex_weights(t).into_iter().map(|w| w.weight).product()
}

/// Reduced form of `[d(r)]_q! / prod_{v != r} [d(v)+1]_q`.
pub fn quotient_fraction(t: &PlaneTree) -> QNumFraction {
    let d = t.descendant_multiset();
    let (root, rest) = d.values().split_first().expect("tree has a root");
    let den = rest.iter().map(|&v| v as u32 + 1);
    QNumFraction::factorial(*root as u32)
        .mul(&QNumFraction::new(std::iter::empty(), den).expect("indices >= 1"))
        .reduce()
}

/// Quotient formula: the reduced fraction and its exact expansion.
pub fn q_quotient(t: &PlaneTree) -> (QNumFraction, QPoly) {
    let fraction = quotient_fraction(t);
    let poly = fraction
        .to_poly()
        .expect("quotient formula always yields a polynomial");
    (fraction, poly)
}

pub fn plucking_polynomial(t: &PlaneTree, method: Method) -> QPoly {
    match method {
        Method::Recursive => q_recursive(t),
        Method::Product => q_state_product(t),
        Method::Quotient => q_quotient(t).1,
    }
}

/// Computes all three methods and fails unless they agree.
pub fn plucking_polynomial_verified(t: &PlaneTree) -> Result<QPoly, PluckingError> {
    let recursive = q_recursive(t);
    let product = q_state_product(t);
    let quotient = q_quotient(t).1;
    if recursive == product && product == quotient {
        Ok(recursive)
    } else {
        Err(PluckingError::MethodMismatch {
            tree: t.to_string(),
            recursive,
            product,
            quotient,
        })
    }
}

/// Number of complete leaf-plucking sequences, by exhaustive enumeration.
pub fn count_pluck_sequences(t: &PlaneTree) -> Result<u64, PluckingError> {
    let edges = t.edge_count();
    if edges > PLUCK_SEQUENCE_LIMIT {
        return Err(PluckingError::TooLarge {
            edges,
            limit: PLUCK_SEQUENCE_LIMIT,
        });
    }
    fn count(t: &PlaneTree) -> u64 {
        if t.is_leaf() {
            return 1;
        }
        t.leaves()
            .iter()
            .map(|leaf| count(&t.pluck(leaf).expect("leaf")))
            .sum()
    }
    Ok(count(t))
}

/// Checks `Q(T_1 v ... v T_k) = binom(sum |E(T_i)|; |E(T_1)|, ...)_q prod Q(T_i)`.
pub fn wedge_formula_check_many(parts: &[PlaneTree]) -> bool {
    let lhs = q_recursive(&PlaneTree::wedge(parts));
    let sizes: Vec<u32> = parts.iter().map(|p| p.edge_count() as u32).collect();
    let rhs = parts
        .iter()
        .map(q_recursive)
        .fold(q_multinomial(&sizes), |acc, q| &acc * &q);
    lhs == rhs
}

/// Two-tree case `Q(T_1 v T_2) = binom(|E_1|+|E_2|; |E_1|, |E_2|)_q Q(T_1) Q(T_2)`.
pub fn wedge_formula_check(t1: &PlaneTree, t2: &PlaneTree) -> bool {
    let lhs = q_recursive(&PlaneTree::wedge(&[t1.clone(), t2.clone()]));
    let rhs = &(&q_binomial(t1.edge_count() as u32, t2.edge_count() as u32) * &q_recursive(t1))
        * &q_recursive(t2);
    lhs == rhs
}

/// Unreduced fraction of the state product, `prod_v W(v)` written over q-numbers.
pub fn state_product_fraction(t: &PlaneTree) -> QNumFraction {
    vertex_weights(t)
        .iter()
        .fold(QNumFraction::default(), |acc, w| {
            acc.mul(&multinomial_fraction(&w.parts))
        })
}
