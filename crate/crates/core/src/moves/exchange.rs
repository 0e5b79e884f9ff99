//! Exchange moves: swap two equal-size families of branches hanging at two
//! distinct vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use super::MoveViolation;
use crate::tree::{Arena, ChildProfile, PlaneTree, VertexPath};

pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeMoveSpec {
    pub v1: VertexPath,
    /// Child indices of `v1`.
    pub branches1: Vec<usize>,
    pub v2: VertexPath,
    pub branches2: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("exchange orbit exceeds {cap} trees")]
pub struct OrbitOverflow {
    pub cap: usize,
    /// Trees found before giving up.
    pub explored: BTreeSet<String>,
}

/// Resolved `v1`, `v2` and the branch roots leaving each.
type Resolved = (usize, usize, Vec<usize>, Vec<usize>);

fn check(arena: &Arena, m: &ExchangeMoveSpec) -> Result<Resolved, Vec<MoveViolation>> {
    let mut out = Vec::new();
    let v1 = arena.resolve(&m.v1);
    let v2 = arena.resolve(&m.v2);
    if v1.is_none() {
        out.push(MoveViolation::InvalidVertex(m.v1.clone()));
    }
    if v2.is_none() {
        out.push(MoveViolation::InvalidVertex(m.v2.clone()));
    }
    let (Some(v1), Some(v2)) = (v1, v2) else {
        return Err(out);
    };
    if v1 == v2 {
        return Err(vec![MoveViolation::SameVertex]);
    }
    let mut roots = [Vec::new(), Vec::new()];
    for (side, (v, group)) in [(v1, &m.branches1), (v2, &m.branches2)]
        .into_iter()
        .enumerate()
    {
        if group.is_empty() {
            out.push(MoveViolation::EmptyGroup { vertex: side });
        }
        let mut seen = BTreeSet::new();
        for &c in group {
            let Some(&w) = arena.children[v].get(c) else {
                out.push(MoveViolation::InvalidBranch {
                    vertex: side,
                    child: c,
                });
                continue;
            };
            if !seen.insert(c) {
                out.push(MoveViolation::DuplicateBranch {
                    vertex: side,
                    child: c,
                });
            }
            if arena.is_within(v1, w) || arena.is_within(v2, w) {
                out.push(MoveViolation::BranchContainsSelectedVertex {
                    vertex: side,
                    child: c,
                });
            }
            roots[side].push(w);
        }
    }
    if !out.is_empty() {
        return Err(out);
    }
    let [r1, r2] = roots;
    let total = |ws: &[usize]| ws.iter().map(|&w| arena.descendants(w) + 1).sum::<usize>();
    let (e1, e2) = (total(&r1), total(&r2));
    if e1 != e2 {
        return Err(vec![MoveViolation::EdgeSumMismatch {
            vertex: 0,
            given: e1,
            received: e2,
        }]);
    }
    Ok((v1, v2, r1, r2))
}

/// Empty on success.
pub fn validate_exchange_move(t: &PlaneTree, m: &ExchangeMoveSpec) -> Vec<MoveViolation> {
    check(&Arena::from_tree(t), m).err().unwrap_or_default()
}

/// Moves `branches1` to `v2` and `branches2` to `v1`, appended after the
/// surviving children.
pub fn apply_exchange(
    t: &PlaneTree,
    m: &ExchangeMoveSpec,
) -> Result<PlaneTree, Vec<MoveViolation>> {
    let mut arena = Arena::from_tree(t);
    let (v1, v2, r1, r2) = check(&arena, m)?;
    for &w in r1.iter().chain(&r2) {
        arena.detach(w);
    }
    for &w in &r2 {
        arena.attach(v1, w);
    }
    for &w in &r1 {
        arena.attach(v2, w);
    }
    Ok(arena.to_tree(0))
}

/// Nonempty subsets of a vertex's children that avoid `other`, grouped by
/// total branch weight.
fn subsets_by_weight(arena: &Arena, v: usize, other: usize) -> BTreeMap<usize, Vec<Vec<usize>>> {
    let eligible: Vec<(usize, usize)> = arena.children[v]
        .iter()
        .enumerate()
        .filter(|&(_, &w)| !arena.is_within(other, w))
        .map(|(i, &w)| (i, arena.descendants(w) + 1))
        .collect();
    let mut out: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for mask in 1u64..(1u64 << eligible.len()) {
        let chosen: Vec<&(usize, usize)> = eligible
            .iter()
            .enumerate()
            .filter(|(bit, _)| mask >> bit & 1 == 1)
            .map(|(_, e)| e)
            .collect();
        let weight = chosen.iter().map(|e| e.1).sum();
        out.entry(weight)
            .or_default()
            .push(chosen.iter().map(|e| e.0).collect());
    }
    out
}

/// All valid exchange moves, one representative per distinct result, paired
/// with the canonical code of the result. Sorted by result code.
pub fn enumerate_exchange_moves(t: &PlaneTree) -> Vec<(ExchangeMoveSpec, String)> {
    let arena = Arena::from_tree(t);
    let mut found: BTreeMap<String, ExchangeMoveSpec> = BTreeMap::new();
    for v1 in 0..arena.len() {
        for v2 in v1 + 1..arena.len() {
            if arena.children[v1].is_empty() || arena.children[v2].is_empty() {
                continue;
            }
            let s1 = subsets_by_weight(&arena, v1, v2);
            let s2 = subsets_by_weight(&arena, v2, v1);
            for (weight, groups1) in &s1 {
                let Some(groups2) = s2.get(weight) else {
                    continue;
                };
                for b1 in groups1 {
                    for b2 in groups2 {
                        let m = ExchangeMoveSpec {
                            v1: arena.paths[v1].clone(),
                            branches1: b1.clone(),
                            v2: arena.paths[v2].clone(),
                            branches2: b2.clone(),
                        };
                        let code = apply_exchange(t, &m)
                            .expect("enumerated exchange is valid")
                            .canonical_code();
                        found.entry(code).or_insert(m);
                    }
                }
            }
        }
    }
    found.into_iter().map(|(code, m)| (m, code)).collect()
}

/// Closure of `{t}` under exchange moves, as canonical codes.
pub fn exchange_orbit(t: &PlaneTree, cap: usize) -> Result<BTreeSet<String>, OrbitOverflow> {
    let start = t.canonical();
    let mut seen = BTreeSet::from([start.to_string()]);
    let mut queue = VecDeque::from([start]);
    while let Some(tree) = queue.pop_front() {
        for (_, code) in enumerate_exchange_moves(&tree) {
            if seen.contains(&code) {
                continue;
            }
            if seen.len() >= cap {
                return Err(OrbitOverflow {
                    cap,
                    explored: seen,
                });
            }
            queue.push_back(code.parse().expect("canonical code parses"));
            seen.insert(code);
        }
    }
    Ok(seen)
}

/// The child profile expected after an exchange: `U(v1)` loses the weights of
/// `branches1` and gains those of `branches2`, and symmetrically at `v2`.
pub fn predicted_profile(t: &PlaneTree, m: &ExchangeMoveSpec) -> Option<ChildProfile> {
    let arena = Arena::from_tree(t);
    let (v1, v2, r1, r2) = check(&arena, m).ok()?;
    let weight = |w: usize| arena.descendants(w) + 1;
    let tuple_after = |v: usize, gone: &[usize], gained: &[usize]| -> Vec<usize> {
        arena.children[v]
            .iter()
            .filter(|w| !gone.contains(w))
            .chain(gained)
            .map(|&w| weight(w))
            .collect()
    };
    let tuples = (0..arena.len())
        .map(|v| {
            if v == v1 {
                tuple_after(v1, &r1, &r2)
            } else if v == v2 {
                tuple_after(v2, &r2, &r1)
            } else {
                arena.children[v].iter().map(|&w| weight(w)).collect()
            }
        })
        .collect();
    Some(ChildProfile::new(tuples))
}
