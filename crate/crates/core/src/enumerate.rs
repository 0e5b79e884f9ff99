//! Exhaustive generation of rooted trees by edge count, grouping by plucking
//! polynomial, and whole-size verification sweeps.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::moves::find_permutation_move;
use crate::plucking::{plucking_polynomial, plucking_polynomial_verified, Method, PluckingError};
use crate::qcalc::QPoly;
use crate::tree::PlaneTree;

pub const DEFAULT_EDGE_LIMIT: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("{edges} edges exceeds the enumeration bound {limit}")]
    TooLarge { edges: usize, limit: usize },
    #[error(transparent)]
    Plucking(#[from] PluckingError),
    #[error("stabilization changed the polynomial of {0}")]
    Stabilization(String),
}

/// All unlabeled rooted trees with `edges` edges, canonical, sorted by code.
pub fn generate_trees(edges: usize) -> Result<Vec<PlaneTree>, EnumerateError> {
    generate_trees_bounded(edges, DEFAULT_EDGE_LIMIT)
}

pub fn generate_trees_bounded(
    edges: usize,
    limit: usize,
) -> Result<Vec<PlaneTree>, EnumerateError> {
    if edges > limit {
        return Err(EnumerateError::TooLarge { edges, limit });
    }
    // by_size[k]: every tree with k edges
    let mut by_size: Vec<Vec<PlaneTree>> = vec![vec![PlaneTree::point()]];
    for n in 1..=edges {
        // a child with k edges uses k + 1 of the parent's edges
        let pieces: Vec<(usize, &PlaneTree)> = by_size
            .iter()
            .enumerate()
            .flat_map(|(k, ts)| ts.iter().map(move |t| (k + 1, t)))
            .collect();
        let mut found = BTreeMap::new();
        let mut stack = Vec::new();
        compose(&pieces, 0, n, &mut stack, &mut found);
        by_size.push(found.into_values().collect());
    }
    Ok(by_size.swap_remove(edges))
}

/// Multisets of pieces (non-decreasing index) with total weight `left`.
fn compose<'a>(
    pieces: &[(usize, &'a PlaneTree)],
    from: usize,
    left: usize,
    stack: &mut Vec<&'a PlaneTree>,
    out: &mut BTreeMap<String, PlaneTree>,
) {
    if left == 0 {
        let t = PlaneTree::node(stack.iter().map(|&c| c.clone()).collect()).canonical();
        out.insert(t.to_string(), t);
        return;
    }
    for (i, &(w, t)) in pieces.iter().enumerate().skip(from) {
        if w > left {
            continue;
        }
        stack.push(t);
        compose(pieces, i, left - w, stack, out);
        stack.pop();
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialClass {
    pub polynomial: QPoly,
    /// Canonical codes, sorted.
    pub members: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub edges: usize,
    pub tree_count: usize,
    /// Sorted by first member code.
    pub classes: Vec<PolynomialClass>,
}

impl ClassificationReport {
    pub fn collisions(&self) -> impl Iterator<Item = &PolynomialClass> {
        self.classes.iter().filter(|c| c.members.len() >= 2)
    }

    pub fn all_singletons(&self) -> bool {
        self.collisions().next().is_none()
    }

    /// One line per class: `polynomial; code code ...`.
    pub fn machine_lines(&self) -> Vec<String> {
        self.classes
            .iter()
            .map(|c| format!("{}; {}", c.polynomial, c.members.join(" ")))
            .collect()
    }
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "edges: {}", self.edges)?;
        writeln!(f, "trees: {}", self.tree_count)?;
        writeln!(f, "classes: {}", self.classes.len())?;
        writeln!(f, "collisions: {}", self.collisions().count())?;
        for (class, line) in self.classes.iter().zip(self.machine_lines()) {
            let key = if class.members.len() >= 2 {
                "collision"
            } else {
                "class"
            };
            writeln!(f, "{key}: {line}")?;
        }
        Ok(())
    }
}

/// Groups all trees of a size by plucking polynomial, computing each
/// polynomial all three ways and checking non-reduced trees against their
/// reduction.
pub fn classify_by_polynomial(edges: usize) -> Result<ClassificationReport, EnumerateError> {
    let trees = generate_trees(edges)?;
    let mut groups: BTreeMap<String, (QPoly, Vec<String>)> = BTreeMap::new();
    for t in &trees {
        let q = plucking_polynomial_verified(t)?;
        let (reduced, k) = t.reduce();
        if k > 0 && plucking_polynomial(&reduced, Method::Quotient) != q {
            return Err(EnumerateError::Stabilization(t.to_string()));
        }
        groups
            .entry(q.to_string())
            .or_insert_with(|| (q, Vec::new()))
            .1
            .push(t.canonical_code());
    }
    let mut classes: Vec<PolynomialClass> = groups
        .into_values()
        .map(|(polynomial, mut members)| {
            members.sort();
            PolynomialClass {
                polynomial,
                members,
            }
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    Ok(ClassificationReport {
        edges,
        tree_count: trees.len(),
        classes,
    })
}

fn reduced_trees(edges: usize) -> Result<Vec<PlaneTree>, EnumerateError> {
    Ok(generate_trees(edges)?
        .into_iter()
        .filter(PlaneTree::is_reduced)
        .collect())
}

/// Over reduced trees with `edges` edges: equal polynomial iff equal
/// descendant multiset.
pub fn verify_prop25(edges: usize) -> Result<bool, EnumerateError> {
    let mut by_q: BTreeMap<String, BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut by_d: BTreeMap<Vec<usize>, BTreeSet<String>> = BTreeMap::new();
    for t in reduced_trees(edges)? {
        let q = plucking_polynomial(&t, Method::Quotient).to_string();
        let d = t.descendant_multiset().values().to_vec();
        by_q.entry(q.clone()).or_default().insert(d.clone());
        by_d.entry(d).or_default().insert(q);
    }
    Ok(by_q.values().all(|s| s.len() == 1) && by_d.values().all(|s| s.len() == 1))
}

/// Every pair of distinct reduced trees with equal polynomial is joined by a
/// single permutation move that replays correctly.
pub fn verify_theorem12(edges: usize) -> Result<bool, EnumerateError> {
    let mut classes: BTreeMap<String, Vec<PlaneTree>> = BTreeMap::new();
    for t in reduced_trees(edges)? {
        let q = plucking_polynomial(&t, Method::Quotient).to_string();
        classes.entry(q).or_default().push(t);
    }
    for class in classes.values() {
        for (i, a) in class.iter().enumerate() {
            for b in &class[i + 1..] {
                let ok = find_permutation_move(a, b).is_ok_and(|cert| cert.verify(a, b).is_ok());
                if !ok {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
