use std::collections::HashSet;

use super::{ExchangeMoveSpec, MoveViolation};
use crate::tree::{Arena, PlaneTree, VertexPath};

/// A permutation move on a specific plane tree.
///
/// Branches are numbered `T_1..T_{alpha_n}` in group order: group `i` holds
/// the children `branch_groups[i]` of `vertices[i]`. After the move vertex `i`
/// carries `T_{P(beta_i + 1)}, ..., T_{P(beta_{i+1})}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationMoveSpec {
    pub vertices: Vec<VertexPath>,
    /// Child indices (plane order) selected at each vertex.
    pub branch_groups: Vec<Vec<usize>>,
    /// `beta_0 = 0 < beta_1 < ... < beta_n = alpha_n`.
    pub beta: Vec<usize>,
    /// Zero-based one-line form: `permutation[j] = P(j + 1) - 1`.
    pub permutation: Vec<usize>,
}

impl PermutationMoveSpec {
    /// `alpha_0 = 0, alpha_i = alpha_{i-1} + |group i|`.
    pub fn alpha(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.branch_groups.len() + 1);
        out.push(0);
        for g in &self.branch_groups {
            out.push(out.last().unwrap() + g.len());
        }
        out
    }

    pub fn branch_count(&self) -> usize {
        self.branch_groups.iter().map(Vec::len).sum()
    }

    /// One-based one-line notation, e.g. `6 3 2 5 4 1`.
    pub fn permutation_one_line(&self) -> String {
        self.permutation
            .iter()
            .map(|p| (p + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Every vertex keeps its own branches.
    pub fn identity(vertices: Vec<VertexPath>, branch_groups: Vec<Vec<usize>>) -> Self {
        let mut m = PermutationMoveSpec {
            vertices,
            branch_groups,
            beta: Vec::new(),
            permutation: Vec::new(),
        };
        m.beta = m.alpha();
        m.permutation = (0..m.branch_count()).collect();
        m
    }
}

/// Structural checks that need only the tree; returns resolved vertex ids and
/// the branch-root ids in branch order.
fn resolve(
    t: &Arena,
    m: &PermutationMoveSpec,
    out: &mut Vec<MoveViolation>,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = m.vertices.len();
    if n == 0 {
        out.push(MoveViolation::NoVertices);
        return None;
    }
    if m.branch_groups.len() != n {
        out.push(MoveViolation::GroupCountMismatch {
            vertices: n,
            groups: m.branch_groups.len(),
        });
        return None;
    }
    let mut ids = Vec::with_capacity(n);
    let mut seen = HashSet::new();
    for p in &m.vertices {
        match t.resolve(p) {
            Some(id) => {
                if !seen.insert(id) {
                    out.push(MoveViolation::DuplicateVertex(p.clone()));
                }
                ids.push(id);
            }
            None => out.push(MoveViolation::InvalidVertex(p.clone())),
        }
    }
    if ids.len() != n {
        return None;
    }
    let mut branches = Vec::new();
    for (i, group) in m.branch_groups.iter().enumerate() {
        if group.is_empty() {
            out.push(MoveViolation::EmptyGroup { vertex: i });
        }
        let mut local = HashSet::new();
        for &c in group {
            match t.children[ids[i]].get(c) {
                Some(&w) => {
                    if !local.insert(c) {
                        out.push(MoveViolation::DuplicateBranch {
                            vertex: i,
                            child: c,
                        });
                    }
                    branches.push(w);
                }
                None => out.push(MoveViolation::InvalidBranch {
                    vertex: i,
                    child: c,
                }),
            }
        }
    }
    let total = m.branch_count();
    let beta = &m.beta;
    if beta.len() != n + 1 {
        out.push(MoveViolation::BadBeta(format!(
            "expected {} entries, got {}",
            n + 1,
            beta.len()
        )));
    } else if beta[0] != 0 || beta[n] != total || beta.windows(2).any(|w| w[0] >= w[1]) {
        out.push(MoveViolation::BadBeta(format!(
            "need 0 = beta_0 < ... < beta_n = {total}, got {beta:?}"
        )));
    }
    let mut hit = vec![false; total];
    if m.permutation.len() != total
        || m.permutation
            .iter()
            .any(|&p| p >= total || std::mem::replace(&mut hit[p], true))
    {
        out.push(MoveViolation::NotAPermutation);
    }
    out.is_empty().then_some((ids, branches))
}

/// Checks the move against the tree; on success returns the moved tree.
fn check_and_apply(
    t: &PlaneTree,
    m: &PermutationMoveSpec,
) -> Result<PlaneTree, Vec<MoveViolation>> {
    let mut arena = Arena::from_tree(t);
    let mut violations = Vec::new();
    let Some((ids, branches)) = resolve(&arena, m, &mut violations) else {
        return Err(violations);
    };
    let weight: Vec<usize> = branches.iter().map(|&w| arena.descendants(w) + 1).collect();
    let alpha = m.alpha();
    for i in 0..ids.len() {
        let given: usize = weight[alpha[i]..alpha[i + 1]].iter().sum();
        let received: usize = m.permutation[m.beta[i]..m.beta[i + 1]]
            .iter()
            .map(|&k| weight[k])
            .sum();
        if given != received {
            violations.push(MoveViolation::EdgeSumMismatch {
                vertex: i,
                given,
                received,
            });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    for &w in &branches {
        arena.detach(w);
    }
    for (i, &v) in ids.iter().enumerate() {
        for &k in &m.permutation[m.beta[i]..m.beta[i + 1]] {
            arena.attach(v, branches[k]);
        }
    }
    // A branch glued at v weighs at most d(v), and d drops strictly inside a
    // branch, so balanced moves cannot glue a branch inside itself.
    assert_eq!(
        arena.reachable_from_root(),
        arena.len(),
        "balanced move produced a cycle"
    );
    Ok(arena.to_tree(0))
}

/// Empty on success.
pub fn validate_permutation_move(t: &PlaneTree, m: &PermutationMoveSpec) -> Vec<MoveViolation> {
    check_and_apply(t, m).err().unwrap_or_default()
}

/// Detaches all selected branches and reattaches them per the permutation,
/// appended after each vertex's surviving children.
pub fn apply_permutation_move(
    t: &PlaneTree,
    m: &PermutationMoveSpec,
) -> Result<PlaneTree, Vec<MoveViolation>> {
    check_and_apply(t, m)
}

/// An exchange move as a two-vertex permutation move swapping the groups.
pub fn exchange_to_permutation(m: &ExchangeMoveSpec) -> PermutationMoveSpec {
    let (a, b) = (m.branches1.len(), m.branches2.len());
    PermutationMoveSpec {
        vertices: vec![m.v1.clone(), m.v2.clone()],
        branch_groups: vec![m.branches1.clone(), m.branches2.clone()],
        beta: vec![0, b, a + b],
        permutation: (a..a + b).chain(0..a).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::moves::{apply_exchange, enumerate_exchange_moves};
    use crate::plucking::q_quotient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn vp(p: &[usize]) -> VertexPath {
        VertexPath(p.to_vec())
    }

    /// X5 = root{leaf, leaf, chain-top{x{y}}}: swap the two root leaves with
    /// the chain-top's single branch.
    fn x5_swap() -> PermutationMoveSpec {
        PermutationMoveSpec {
            vertices: vec![vp(&[]), vp(&[2])],
            branch_groups: vec![vec![0, 1], vec![0]],
            beta: vec![0, 1, 3],
            permutation: vec![2, 0, 1],
        }
    }

    #[test]
    fn validate_examples() {
        let x5 = fixtures::x5();
        assert!(validate_permutation_move(&x5, &x5_swap()).is_empty());

        let mut one_leaf = x5_swap();
        one_leaf.branch_groups = vec![vec![0], vec![0]];
        one_leaf.beta = vec![0, 1, 2];
        one_leaf.permutation = vec![1, 0];
        let v = validate_permutation_move(&x5, &one_leaf);
        assert!(matches!(
            v[0],
            MoveViolation::EdgeSumMismatch {
                given: 1,
                received: 2,
                ..
            }
        ));
        assert!(v[0].to_string().starts_with("group edge sums differ"));

        // root gives the chain branch, which contains the second selected
        // vertex; trading it for that vertex's own branch is unbalanced
        let contains_v2 = PermutationMoveSpec {
            vertices: vec![vp(&[]), vp(&[2])],
            branch_groups: vec![vec![2], vec![0]],
            beta: vec![0, 1, 2],
            permutation: vec![1, 0],
        };
        let v = validate_permutation_move(&x5, &contains_v2);
        assert_eq!(v.len(), 2);
        assert!(v
            .iter()
            .all(|x| matches!(x, MoveViolation::EdgeSumMismatch { .. })));

        // the same nesting with the identity permutation is a legal no-op
        let nested_identity =
            PermutationMoveSpec::identity(contains_v2.vertices, contains_v2.branch_groups);
        assert_eq!(apply_permutation_move(&x5, &nested_identity).unwrap(), x5);
    }

    #[test]
    fn structural_violations() {
        let x5 = fixtures::x5();
        let bad = |m: PermutationMoveSpec| validate_permutation_move(&x5, &m);
        let empty = PermutationMoveSpec::identity(vec![], vec![]);
        assert_eq!(bad(empty), vec![MoveViolation::NoVertices]);
        let v = bad(PermutationMoveSpec::identity(vec![vp(&[7])], vec![vec![0]]));
        assert_eq!(v, vec![MoveViolation::InvalidVertex(vp(&[7]))]);
        let v = bad(PermutationMoveSpec::identity(
            vec![vp(&[]), vp(&[])],
            vec![vec![0], vec![1]],
        ));
        assert_eq!(v, vec![MoveViolation::DuplicateVertex(vp(&[]))]);
        let v = bad(PermutationMoveSpec::identity(vec![vp(&[])], vec![vec![5]]));
        assert_eq!(
            v,
            vec![MoveViolation::InvalidBranch {
                vertex: 0,
                child: 5
            }]
        );
        let v = bad(PermutationMoveSpec::identity(
            vec![vp(&[])],
            vec![vec![0, 0]],
        ));
        assert_eq!(
            v,
            vec![MoveViolation::DuplicateBranch {
                vertex: 0,
                child: 0
            }]
        );
        let mut m = x5_swap();
        m.permutation = vec![0, 0, 1];
        assert_eq!(bad(m), vec![MoveViolation::NotAPermutation]);
        let mut m = x5_swap();
        m.beta = vec![0, 3, 3];
        assert!(matches!(bad(m)[0], MoveViolation::BadBeta(_)));
        let mut m = x5_swap();
        m.branch_groups[1].clear();
        assert!(bad(m).contains(&MoveViolation::EmptyGroup { vertex: 1 }));
    }

    #[test]
    fn apply_examples() {
        let x5 = fixtures::x5();
        let y5 = apply_permutation_move(&x5, &x5_swap()).unwrap();
        assert_eq!(y5.canonical_code(), fixtures::Y5_TEXT);
        let id = PermutationMoveSpec::identity(vec![vp(&[]), vp(&[2])], vec![vec![0, 1], vec![0]]);
        assert_eq!(
            apply_permutation_move(&x5, &id).unwrap().canonical_code(),
            x5.canonical_code()
        );
    }

    #[test]
    fn exchange_embeds_as_permutation() {
        let x5 = fixtures::x5();
        let ex = ExchangeMoveSpec {
            v1: vp(&[]),
            branches1: vec![0, 1],
            v2: vp(&[2]),
            branches2: vec![0],
        };
        let pm = exchange_to_permutation(&ex);
        assert_eq!(pm, x5_swap());
        assert!(validate_permutation_move(&x5, &pm).is_empty());

        // transposition of two equal leaves at distinct vertices
        let cherries: PlaneTree = "((()())(()()))".parse().unwrap();
        let tr = exchange_to_permutation(&ExchangeMoveSpec {
            v1: vp(&[0]),
            branches1: vec![1],
            v2: vp(&[1]),
            branches2: vec![0],
        });
        assert_eq!(tr.permutation, vec![1, 0]);
        assert!(validate_permutation_move(&cherries, &tr).is_empty());
    }

    fn random_tree(rng: &mut impl Rng, edges: usize) -> PlaneTree {
        let parents: Vec<usize> = (0..edges).map(|i| rng.gen_range(0..=i)).collect();
        PlaneTree::from_parents(&parents).unwrap()
    }

    #[test]
    fn exchange_routes_agree_and_preserve_d() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..60 {
            let n = rng.gen_range(2..=9);
            let t = random_tree(&mut rng, n);
            for (ex, code) in enumerate_exchange_moves(&t) {
                let direct = apply_exchange(&t, &ex).unwrap();
                let via = apply_permutation_move(&t, &exchange_to_permutation(&ex)).unwrap();
                assert_eq!(direct.canonical_code(), via.canonical_code());
                assert_eq!(direct.canonical_code(), code);
                assert_eq!(direct.descendant_multiset(), t.descendant_multiset());
            }
        }
    }

    /// Random permutation moves: pick vertices and branches, then search for a
    /// balanced permutation by shuffling; keep the valid ones.
    #[test]
    fn random_valid_moves_preserve_d_and_q() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let mut applied = 0;
        for _ in 0..3000 {
            let n = rng.gen_range(3..=12);
            let t = random_tree(&mut rng, n);
            let verts: Vec<VertexPath> = t
                .vertices()
                .into_iter()
                .filter(|p| !t.get(p).unwrap().is_leaf())
                .collect();
            let k = rng.gen_range(1..=verts.len().min(3));
            let mut chosen: Vec<VertexPath> = Vec::new();
            while chosen.len() < k {
                let v = verts[rng.gen_range(0..verts.len())].clone();
                if !chosen.contains(&v) {
                    chosen.push(v);
                }
            }
            let groups: Vec<Vec<usize>> = chosen
                .iter()
                .map(|v| {
                    let c = t.get(v).unwrap().children().len();
                    let mut g: Vec<usize> = (0..c).filter(|_| rng.gen_bool(0.6)).collect();
                    if g.is_empty() {
                        g.push(rng.gen_range(0..c));
                    }
                    g
                })
                .collect();
            let mut m = PermutationMoveSpec::identity(chosen, groups);
            let total = m.branch_count();
            for i in (1..total).rev() {
                m.permutation.swap(i, rng.gen_range(0..=i));
            }
            if let Ok(out) = apply_permutation_move(&t, &m) {
                applied += 1;
                assert_eq!(out.descendant_multiset(), t.descendant_multiset());
                assert_eq!(q_quotient(&out), q_quotient(&t));
                assert!(validate_permutation_move(&t, &m).is_empty());
            }
        }
        assert!(applied > 100, "only {applied} random moves were valid");
    }

    #[test]
    fn t1_to_t2_by_nested_move() {
        // v1 = Z (inside Y), v2 = B, v3 = A; P = (6 3 2 5 4 1).
        let t1 = fixtures::t1();
        let m = PermutationMoveSpec {
            vertices: vec![vp(&[1, 1, 0]), vp(&[1]), vp(&[0])],
            branch_groups: vec![vec![0, 1], vec![0, 1], vec![1, 0]],
            beta: vec![0, 2, 4, 6],
            permutation: vec![5, 2, 1, 4, 3, 0],
        };
        assert_eq!(m.permutation_one_line(), "6 3 2 5 4 1");
        let out = apply_permutation_move(&t1, &m).unwrap();
        assert_eq!(out.canonical_code(), fixtures::t2().canonical_code());
    }
}
