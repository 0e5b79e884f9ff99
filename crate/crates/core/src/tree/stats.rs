use std::collections::BTreeMap;
use std::fmt;

/// The multiset `D(T) = {d(v)}`, stored non-increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DescendantMultiset(Vec<usize>);

impl DescendantMultiset {
    pub fn new(mut values: Vec<usize>) -> Self {
        values.sort_unstable_by(|a, b| b.cmp(a));
        DescendantMultiset(values)
    }

    /// Non-increasing.
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    /// Non-decreasing copy, the order used by realization queries.
    pub fn ascending(&self) -> Vec<usize> {
        self.0.iter().rev().copied().collect()
    }

    /// Generating-function form: entry `i` is the multiplicity of `i`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = vec![0; self.0.first().map_or(0, |&m| m + 1)];
        for &v in &self.0 {
            out[v] += 1;
        }
        out
    }

    /// A tree is reduced iff the maximum is strictly more than one above the
    /// next value (or the tree is a single point).
    pub fn looks_reduced(&self) -> bool {
        match self.0.as_slice() {
            [_] => true,
            [a, b, ..] => *a > *b + 1,
            [] => false,
        }
    }
}

impl fmt::Display for DescendantMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// The multiset `U(T)` of unordered tuples `(d(v_1)+1, ..., d(v_k)+1)`, one per
/// vertex. Leaves contribute the empty tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChildProfile(Vec<Vec<usize>>);

impl ChildProfile {
    pub fn new(tuples: Vec<Vec<usize>>) -> Self {
        let mut tuples: Vec<Vec<usize>> = tuples
            .into_iter()
            .map(|mut t| {
                t.sort_unstable();
                t
            })
            .collect();
        tuples.sort_unstable_by(|a, b| b.iter().sum::<usize>().cmp(&a.iter().sum()).then(b.cmp(a)));
        ChildProfile(tuples)
    }

    /// Builds a profile from `(tuple, multiplicity)` pairs.
    pub fn from_counts(entries: &[(&[usize], usize)]) -> Self {
        ChildProfile::new(
            entries
                .iter()
                .flat_map(|(t, k)| std::iter::repeat_n(t.to_vec(), *k))
                .collect(),
        )
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.0
    }
}

/// Printed like `{(9, 10), (3, 6), (5)×2, (0)×5}`; the empty tuple prints as `(0)`.
impl fmt::Display for ChildProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut runs: Vec<(&Vec<usize>, usize)> = Vec::new();
        for t in &self.0 {
            match runs.last_mut() {
                Some((prev, k)) if *prev == t => *k += 1,
                _ => runs.push((t, 1)),
            }
        }
        let parts: Vec<String> = runs
            .into_iter()
            .map(|(t, k)| {
                let body = if t.is_empty() {
                    "0".to_string()
                } else {
                    t.iter()
                        .map(usize::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                if k == 1 {
                    format!("({body})")
                } else {
                    format!("({body})×{k}")
                }
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl ChildProfile {
    /// Tuple counts keyed by tuple, for diffing two profiles.
    pub fn counts(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut m = BTreeMap::new();
        for t in &self.0 {
            *m.entry(t.clone()).or_insert(0) += 1;
        }
        m
    }
}
