//! Finds a single permutation move between two trees with equal plucking
//! polynomial.
//!
//! After reduction the trees have the same descendant multiset. Any bijection
//! of vertices that fixes the root and preserves descendant counts yields a
//! balanced move: every child whose image is not a child of its parent's image
//! is cut and reglued where the bijection says. The matcher below keeps
//! isomorphic subtrees together so the move touches few branches.

use std::collections::HashMap;

use thiserror::Error;

use super::{CertificateMove, MoveCertificate, PermutationMoveSpec};
use crate::tree::{Arena, DescendantMultiset, PlaneTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FindMoveError {
    #[error("trees are not equivalent: reduced descendant multisets {a} and {b} differ")]
    NotEquivalent {
        a: DescendantMultiset,
        b: DescendantMultiset,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

struct Side {
    arena: Arena,
    d: Vec<usize>,
    code: Vec<String>,
}

impl Side {
    fn new(t: &PlaneTree) -> Side {
        let arena = Arena::from_tree(t);
        let d = (0..arena.len()).map(|v| arena.descendants(v)).collect();
        let code = (0..arena.len())
            .map(|v| arena.to_tree(v).canonical_code())
            .collect();
        Side { arena, d, code }
    }
}

struct Matcher<'a> {
    a: &'a Side,
    b: &'a Side,
    psi: Vec<Option<usize>>,
    pending_a: Vec<usize>,
    pending_b: Vec<usize>,
}

impl Matcher<'_> {
    /// Maps `x` to `y` and as much of their subtrees as fits; leftover
    /// children become pending roots.
    fn pair(&mut self, x: usize, y: usize) {
        self.psi[x] = Some(y);
        let mut left_a: Vec<usize> = self.a.arena.children[x].clone();
        let mut left_b: Vec<usize> = self.b.arena.children[y].clone();
        // identical subtrees first
        let mut i = 0;
        while i < left_a.len() {
            let ca = left_a[i];
            if let Some(j) = left_b
                .iter()
                .position(|&cb| self.b.code[cb] == self.a.code[ca])
            {
                let cb = left_b.remove(j);
                left_a.remove(i);
                self.pair(ca, cb);
            } else {
                i += 1;
            }
        }
        // then equal descendant counts, largest first
        let key_a = |c: &usize| (std::cmp::Reverse(self.a.d[*c]), self.a.code[*c].clone());
        let key_b = |c: &usize| (std::cmp::Reverse(self.b.d[*c]), self.b.code[*c].clone());
        left_a.sort_by_key(key_a);
        left_b.sort_by_key(key_b);
        let mut rest_b = Vec::new();
        let mut ia = 0;
        for cb in left_b {
            while ia < left_a.len() && self.a.d[left_a[ia]] > self.b.d[cb] {
                self.pending_a.push(left_a[ia]);
                ia += 1;
            }
            if ia < left_a.len() && self.a.d[left_a[ia]] == self.b.d[cb] {
                let ca = left_a[ia];
                ia += 1;
                self.pair(ca, cb);
            } else {
                rest_b.push(cb);
            }
        }
        self.pending_a.extend_from_slice(&left_a[ia..]);
        self.pending_b.extend(rest_b);
    }

    /// Pairs pending roots until everything is matched. The largest unmatched
    /// count is always attained by a pending root on both sides.
    fn drain(&mut self) -> Result<(), FindMoveError> {
        while !self.pending_a.is_empty() || !self.pending_b.is_empty() {
            let top = |side: &Side, pending: &[usize]| pending.iter().map(|&v| side.d[v]).max();
            let (Some(da), Some(db)) = (top(self.a, &self.pending_a), top(self.b, &self.pending_b))
            else {
                return Err(FindMoveError::Internal(
                    "pending roots on one side only".into(),
                ));
            };
            if da != db {
                return Err(FindMoveError::Internal(format!(
                    "largest pending counts differ ({da} vs {db})"
                )));
            }
            let cands_a: Vec<usize> = self
                .pending_a
                .iter()
                .copied()
                .filter(|&v| self.a.d[v] == da)
                .collect();
            let cands_b: Vec<usize> = self
                .pending_b
                .iter()
                .copied()
                .filter(|&v| self.b.d[v] == db)
                .collect();
            let (x, y) = cands_a
                .iter()
                .find_map(|&x| {
                    cands_b
                        .iter()
                        .find(|&&y| self.b.code[y] == self.a.code[x])
                        .map(|&y| (x, y))
                })
                .unwrap_or_else(|| {
                    let x = *cands_a.iter().min_by_key(|&&v| &self.a.code[v]).unwrap();
                    let y = *cands_b.iter().min_by_key(|&&v| &self.b.code[v]).unwrap();
                    (x, y)
                });
            self.pending_a.retain(|&v| v != x);
            self.pending_b.retain(|&v| v != y);
            self.pair(x, y);
        }
        Ok(())
    }
}

/// Reads the move off a root-preserving, count-preserving bijection.
fn move_from_bijection(a: &Side, b: &Side, psi: &[usize]) -> PermutationMoveSpec {
    let mut inverse = vec![0; psi.len()];
    for (x, &y) in psi.iter().enumerate() {
        inverse[y] = x;
    }
    let mut vertices = Vec::new();
    let mut groups = Vec::new();
    let mut selected_ids = Vec::new();
    // branch number of each cut child
    let mut branch_of: HashMap<usize, usize> = HashMap::new();
    for x in 0..a.arena.len() {
        let cut: Vec<usize> = a.arena.children[x]
            .iter()
            .enumerate()
            .filter(|&(_, &c)| b.arena.parent[psi[c]] != Some(psi[x]))
            .map(|(i, _)| i)
            .collect();
        if cut.is_empty() {
            continue;
        }
        for &i in &cut {
            branch_of.insert(a.arena.children[x][i], branch_of.len());
        }
        vertices.push(a.arena.paths[x].clone());
        groups.push(cut);
        selected_ids.push(x);
    }
    let mut beta = vec![0];
    let mut permutation = Vec::new();
    for &x in &selected_ids {
        for &yc in &b.arena.children[psi[x]] {
            let c = inverse[yc];
            if a.arena.parent[c] != Some(x) {
                permutation.push(branch_of[&c]);
            }
        }
        beta.push(permutation.len());
    }
    PermutationMoveSpec {
        vertices,
        branch_groups: groups,
        beta,
        permutation,
    }
}

/// A certificate taking `a` to a tree isomorphic to `b`, or the reason none
/// exists. The move is expressed on the reduced `a` in its own plane order.
pub fn find_permutation_move(
    a: &PlaneTree,
    b: &PlaneTree,
) -> Result<MoveCertificate, FindMoveError> {
    let (ra, ka) = a.reduce();
    let (rb, kb) = b.reduce();
    let certificate = |kind| MoveCertificate {
        destabilizations_a: ka,
        destabilizations_b: kb,
        kind,
    };
    if ra.canonical_code() == rb.canonical_code() {
        return Ok(certificate(CertificateMove::Identical));
    }
    let (da, db) = (ra.descendant_multiset(), rb.descendant_multiset());
    if da != db {
        return Err(FindMoveError::NotEquivalent { a: da, b: db });
    }
    let (sa, sb) = (Side::new(&ra), Side::new(&rb));
    let mut matcher = Matcher {
        a: &sa,
        b: &sb,
        psi: vec![None; sa.arena.len()],
        pending_a: Vec::new(),
        pending_b: Vec::new(),
    };
    matcher.pair(0, 0);
    matcher.drain()?;
    let psi: Vec<usize> = matcher
        .psi
        .iter()
        .map(|p| p.ok_or_else(|| FindMoveError::Internal("vertex left unmatched".into())))
        .collect::<Result<_, _>>()?;
    let m = move_from_bijection(&sa, &sb, &psi);
    let cert = certificate(CertificateMove::Permutation(m));
    cert.verify(a, b)
        .map_err(|e| FindMoveError::Internal(format!("derived move does not replay: {e}")))?;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::plucking::q_quotient;
    use std::collections::BTreeMap;

    fn all_trees(edges: usize) -> Vec<PlaneTree> {
        // every parent sequence, deduplicated up to isomorphism
        fn go(parents: &mut Vec<usize>, edges: usize, out: &mut BTreeMap<String, PlaneTree>) {
            if parents.len() == edges {
                let t = PlaneTree::from_parents(parents).unwrap().canonical();
                out.entry(t.to_string()).or_insert(t);
                return;
            }
            for p in 0..=parents.len() {
                parents.push(p);
                go(parents, edges, out);
                parents.pop();
            }
        }
        let mut out = BTreeMap::new();
        go(&mut Vec::new(), edges, &mut out);
        out.into_values().collect()
    }

    #[test]
    fn small_pair() {
        let cert = find_permutation_move(&fixtures::x5(), &fixtures::y5()).unwrap();
        let m = cert.permutation_move().unwrap();
        assert!(m.vertices.len() >= 2);
        cert.verify(&fixtures::x5(), &fixtures::y5()).unwrap();
    }

    #[test]
    fn large_pair() {
        let cert = find_permutation_move(&fixtures::t1(), &fixtures::t2()).unwrap();
        cert.verify(&fixtures::t1(), &fixtures::t2()).unwrap();
        let back = find_permutation_move(&fixtures::t2(), &fixtures::t1()).unwrap();
        back.verify(&fixtures::t2(), &fixtures::t1()).unwrap();
    }

    #[test]
    fn identical_and_inequivalent() {
        let t = fixtures::t1();
        let shuffled: PlaneTree = PlaneTree::node(t.children().iter().rev().cloned().collect());
        let cert = find_permutation_move(&t.stabilize(), &shuffled).unwrap();
        assert_eq!(cert.kind, CertificateMove::Identical);
        assert_eq!((cert.destabilizations_a, cert.destabilizations_b), (1, 0));
        let cherry: PlaneTree = "((()()))".parse().unwrap();
        assert!(matches!(
            find_permutation_move(&cherry, &PlaneTree::star(3)),
            Err(FindMoveError::NotEquivalent { .. })
        ));
    }

    #[test]
    fn complete_for_small_trees() {
        for edges in 1..=9 {
            let mut classes: BTreeMap<String, Vec<PlaneTree>> = BTreeMap::new();
            for t in all_trees(edges) {
                classes
                    .entry(q_quotient(&t).1.to_string())
                    .or_default()
                    .push(t);
            }
            for class in classes.values() {
                let first = &class[0];
                for other in class {
                    find_permutation_move(first, other)
                        .unwrap_or_else(|e| panic!("{first} -> {other}: {e}"));
                }
            }
        }
    }
}
