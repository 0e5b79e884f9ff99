//! Which descendant multisets come from rooted trees, and which products of
//! q-binomials are plucking polynomials.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::plucking::q_quotient;
use crate::qcalc::{multinomial_chain, q_binomial, QNumFraction, QPoly};
use crate::tree::{DescendantMultiset, PlaneTree};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealizeError {
    #[error("unrealizable: {0}")]
    Unrealizable(String),
    #[error("numerator repeats [{0}]")]
    RepeatedNumerator(u32),
    #[error("malformed fraction: {0}")]
    Malformed(String),
    #[error("bad multiset: {0}")]
    Parse(String),
    #[error("realizability sides disagree: {0}")]
    Inconsistent(String),
}

/// A sorted candidate `a_1 <= ... <= a_n`; not necessarily realizable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CandidateMultiset(Vec<usize>);

impl CandidateMultiset {
    pub fn new(mut values: Vec<usize>) -> Self {
        values.sort_unstable();
        CandidateMultiset(values)
    }

    /// Non-decreasing.
    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn count(&self, v: usize) -> usize {
        self.0.iter().filter(|&&a| a == v).count()
    }
}

impl From<&DescendantMultiset> for CandidateMultiset {
    fn from(d: &DescendantMultiset) -> Self {
        CandidateMultiset::new(d.values().to_vec())
    }
}

/// Comma-separated, non-increasing.
impl fmt::Display for CandidateMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().rev().map(usize::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Any order; whitespace and braces are ignored.
impl FromStr for CandidateMultiset {
    type Err = RealizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}');
        if s.trim().is_empty() {
            return Ok(CandidateMultiset(Vec::new()));
        }
        s.split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| RealizeError::Parse(format!("not a count: {:?}", p.trim())))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(CandidateMultiset::new)
    }
}

/// The four cheap necessary conditions for `{a_1..a_n}` to be some `D(T)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NecessaryCondition {
    /// (i) `a_n = n - 1`: the root sees every other vertex.
    RootCountsAll,
    /// (ii) `a_{n-1} < a_n`: only the root attains the maximum.
    UniqueMaximum,
    /// (iii) `a_1 = 0`: some vertex is a leaf.
    HasLeaf,
    /// (iv) `#0 >= #1`: each vertex with one descendant sits over its own leaf.
    LeavesCoverOnes,
}

impl NecessaryCondition {
    pub fn label(self) -> &'static str {
        match self {
            NecessaryCondition::RootCountsAll => "(i)",
            NecessaryCondition::UniqueMaximum => "(ii)",
            NecessaryCondition::HasLeaf => "(iii)",
            NecessaryCondition::LeavesCoverOnes => "(iv)",
        }
    }
}

impl fmt::Display for NecessaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            NecessaryCondition::RootCountsAll => "a_n = n-1",
            NecessaryCondition::UniqueMaximum => "a_(n-1) < a_n",
            NecessaryCondition::HasLeaf => "a_1 = 0",
            NecessaryCondition::LeavesCoverOnes => "count(0) >= count(1)",
        };
        write!(f, "{} {text}", self.label())
    }
}

/// Violated conditions, in label order. The empty candidate violates (i)
/// and (iii).
pub fn necessary_conditions(c: &CandidateMultiset) -> Vec<NecessaryCondition> {
    let a = c.values();
    let n = a.len();
    let mut out = Vec::new();
    if n == 0 || a[n - 1] != n - 1 {
        out.push(NecessaryCondition::RootCountsAll);
    }
    if n >= 2 && a[n - 2] >= a[n - 1] {
        out.push(NecessaryCondition::UniqueMaximum);
    }
    if a.first() != Some(&0) {
        out.push(NecessaryCondition::HasLeaf);
    }
    if c.count(0) < c.count(1) {
        out.push(NecessaryCondition::LeavesCoverOnes);
    }
    out
}

/// Backtracking over forests: the largest value in a pool must be a forest
/// root, which takes some sub-pool of smaller values as its descendants.
struct ForestSearch {
    memo: HashMap<Vec<usize>, Option<Vec<PlaneTree>>>,
}

impl ForestSearch {
    /// Vertices with equal counts are never nested, so `k` copies of `v` need
    /// `k * v` strictly smaller values between them.
    fn plausible(pool: &[usize]) -> bool {
        let mut smaller = 0;
        let mut i = 0;
        while i < pool.len() {
            let v = pool[i];
            let k = pool[i..].iter().take_while(|&&x| x == v).count();
            if smaller < k * v {
                return false;
            }
            smaller += k;
            i += k;
        }
        true
    }

    /// `pool` is sorted ascending.
    fn forest(&mut self, pool: &[usize]) -> Option<Vec<PlaneTree>> {
        let Some(&m) = pool.last() else {
            return Some(Vec::new());
        };
        if let Some(hit) = self.memo.get(pool) {
            return hit.clone();
        }
        let result = if Self::plausible(pool) {
            self.split(pool, m)
        } else {
            None
        };
        self.memo.insert(pool.to_vec(), result.clone());
        result
    }

    fn split(&mut self, pool: &[usize], m: usize) -> Option<Vec<PlaneTree>> {
        let rest = &pool[..pool.len() - 1];
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &v in rest.iter().filter(|&&v| v < m) {
            *counts.entry(v).or_default() += 1;
        }
        // values descending, so large children are tried first
        let values: Vec<(usize, usize)> = counts.into_iter().rev().collect();
        let mut take = vec![0; values.len()];
        self.choose(rest, m, &values, 0, m, &mut take)
    }

    fn choose(
        &mut self,
        rest: &[usize],
        m: usize,
        values: &[(usize, usize)],
        idx: usize,
        need: usize,
        take: &mut Vec<usize>,
    ) -> Option<Vec<PlaneTree>> {
        if need == 0 {
            let mut inside = Vec::with_capacity(m);
            for (&(v, _), &k) in values.iter().zip(take.iter()) {
                inside.extend(std::iter::repeat_n(v, k));
            }
            inside.sort_unstable();
            let mut outside = rest.to_vec();
            for &v in &inside {
                let pos = outside
                    .iter()
                    .position(|&x| x == v)
                    .expect("value taken from pool");
                outside.remove(pos);
            }
            let children = self.forest(&inside)?;
            let mut siblings = self.forest(&outside)?;
            siblings.push(PlaneTree::node(children));
            return Some(siblings);
        }
        if idx == values.len() {
            return None;
        }
        let available: usize = values[idx..].iter().map(|p| p.1).sum();
        if available < need {
            return None;
        }
        let (_, mult) = values[idx];
        for k in (0..=mult.min(need)).rev() {
            take[idx] = k;
            if let Some(found) = self.choose(rest, m, values, idx + 1, need - k, take) {
                take[idx] = 0;
                return Some(found);
            }
        }
        take[idx] = 0;
        None
    }
}

/// A canonical tree `T` with `D(T) = c`, or why none exists.
pub fn realize_multiset(c: &CandidateMultiset) -> Result<PlaneTree, RealizeError> {
    if let Some(first) = necessary_conditions(c).first() {
        return Err(RealizeError::Unrealizable(format!("violates {first}")));
    }
    let a = c.values();
    let mut search = ForestSearch {
        memo: HashMap::new(),
    };
    match search.forest(&a[..a.len() - 1]) {
        Some(children) => Ok(PlaneTree::node(children).canonical()),
        None => Err(RealizeError::Unrealizable("search exhausted".into())),
    }
}

/// Inverts the quotient formula: from a reduced fraction with repeat-free
/// numerator, the candidate `{a_i}` with `[a_n]! / prod_{i<n} [a_i+1]` equal
/// to it.
pub fn recover_multiset(f: &QNumFraction) -> Result<CandidateMultiset, RealizeError> {
    let f = f.reduce();
    if let Some(k) = f.repeated_numerator_index() {
        return Err(RealizeError::RepeatedNumerator(k));
    }
    let top = f.numerator().last().copied().unwrap_or(0);
    if let Some(&d) = f.denominator().last() {
        if d > top {
            return Err(RealizeError::Malformed(format!(
                "denominator [{d}] exceeds the largest numerator index"
            )));
        }
    }
    let mut shifted: Vec<u32> = (2..=top)
        .filter(|k| f.numerator().binary_search(k).is_err())
        .collect();
    shifted.extend_from_slice(f.denominator());
    let top = top as usize;
    let pad = top.checked_sub(shifted.len()).ok_or_else(|| {
        RealizeError::Malformed(format!(
            "{} non-trivial factors exceed the {} available slots",
            shifted.len(),
            top
        ))
    })?;
    let mut values: Vec<usize> = shifted.into_iter().map(|k| k as usize - 1).collect();
    values.extend(std::iter::repeat_n(0, pad));
    values.push(top);
    Ok(CandidateMultiset::new(values))
}

/// Product of `binom(m+n; m, n)_q` over the factor list.
pub fn binomial_product(factors: &[(u32, u32)]) -> QPoly {
    factors.iter().map(|&(m, n)| q_binomial(m, n)).product()
}

fn binomial_product_fraction(factors: &[(u32, u32)]) -> QNumFraction {
    factors
        .iter()
        .fold(QNumFraction::default(), |acc, &(m, n)| {
            acc.mul(&QNumFraction::binomial(m, n))
        })
        .reduce()
}

/// A tree whose plucking polynomial equals the product of the given
/// q-binomials.
pub fn realize_binomial_product(factors: &[(u32, u32)]) -> Result<PlaneTree, RealizeError> {
    let fraction = binomial_product_fraction(factors);
    let candidate = match recover_multiset(&fraction) {
        Ok(c) => c,
        Err(RealizeError::RepeatedNumerator(k)) => {
            return Err(RealizeError::Unrealizable(format!(
                "numerator repeats [{k}]"
            )))
        }
        Err(e) => return Err(e),
    };
    let tree = realize_multiset(&candidate)
        .map_err(|e| RealizeError::Unrealizable(format!("multiset search failed ({e})")))?;
    if q_quotient(&tree).1 != binomial_product(factors) {
        return Err(RealizeError::Inconsistent(format!(
            "tree {tree} realizes {candidate} but not the requested product"
        )));
    }
    Ok(tree)
}

/// Every vertex weight split into q-binomials, preorder. The product equals
/// the plucking polynomial.
pub fn binomial_factorization(t: &PlaneTree) -> Vec<(u32, u32)> {
    fn walk(t: &PlaneTree, out: &mut Vec<(u32, u32)>) {
        let parts: Vec<u32> = t
            .children()
            .iter()
            .map(|c| c.edge_count() as u32 + 1)
            .collect();
        out.extend(multinomial_chain(&parts));
        for c in t.children() {
            walk(c, out);
        }
    }
    let mut out = Vec::new();
    walk(t, &mut out);
    out
}

/// `[a_n]! / prod_{i<n} [a_i + 1]`, reduced. `None` for the empty candidate.
pub fn candidate_fraction(c: &CandidateMultiset) -> Option<QNumFraction> {
    let (&top, rest) = c.values().split_last()?;
    let den = rest.iter().map(|&a| a as u32 + 1);
    Some(
        QNumFraction::factorial(top as u32)
            .mul(&QNumFraction::new(std::iter::empty(), den).expect("indices >= 1"))
            .reduce(),
    )
}

/// Exponent vector of `binom(m+n; m, n)_q` over cyclotomic polynomials.
fn binomial_exponents(m: u32, n: u32, len: usize) -> Vec<i64> {
    let mut e = QNumFraction::binomial(m, n).cyclotomic_exponents();
    e.resize(len, 0);
    e
}

/// Exact search for a multiset of q-binomials whose product has the given
/// cyclotomic exponents. Every q-binomial is a polynomial, so partial
/// products never overshoot; the largest `d` with a positive exponent must be
/// the top of some factor.
fn binomial_cover(target: &[i64]) -> Option<Vec<(u32, u32)>> {
    fn go(e: &mut Vec<i64>, failed: &mut HashSet<Vec<i64>>, out: &mut Vec<(u32, u32)>) -> bool {
        let Some(top) = (2..e.len()).rev().find(|&d| e[d] > 0) else {
            return true;
        };
        if failed.contains(e) {
            return false;
        }
        let top = top as u32;
        for m in (1..=top / 2).rev() {
            let b = binomial_exponents(m, top - m, e.len());
            if e.iter().zip(&b).any(|(x, y)| x < y) {
                continue;
            }
            for (x, y) in e.iter_mut().zip(&b) {
                *x -= y;
            }
            out.push((m, top - m));
            if go(e, failed, out) {
                return true;
            }
            out.pop();
            for (x, y) in e.iter_mut().zip(&b) {
                *x += y;
            }
        }
        failed.insert(e.clone());
        false
    }
    if target.iter().any(|&x| x < 0) {
        return None;
    }
    let mut e = target.to_vec();
    let mut out = Vec::new();
    go(&mut e, &mut HashSet::new(), &mut out).then_some(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem52Decision {
    pub realizable: bool,
    /// Witness for the tree side.
    pub tree: Option<PlaneTree>,
    /// Binomial factors whose product is the candidate's fraction.
    pub factors: Option<Vec<(u32, u32)>>,
    pub fraction: Option<QNumFraction>,
    /// Why the tree side failed.
    pub reason: Option<String>,
}

/// Decides realizability of `c` two ways and insists they agree.
///
/// Side A is the tree search. Side B asks whether `a_n = n - 1` and the
/// candidate's fraction is a product of q-binomials, settled by an exact
/// search on cyclotomic exponents. When A succeeds the witness tree's own
/// binomial factorization is also checked against the fraction.
pub fn theorem52_decide(c: &CandidateMultiset) -> Result<Theorem52Decision, RealizeError> {
    let side_a = realize_multiset(c);
    let fraction = candidate_fraction(c);
    let root_ok = c.values().last().map(|&a| a + 1) == Some(c.len());
    let cover = match (&fraction, root_ok) {
        (Some(f), true) => binomial_cover(&f.cyclotomic_exponents()),
        _ => None,
    };
    match side_a {
        Ok(tree) => {
            let fraction = fraction.expect("realizable candidates are nonempty");
            let factors = binomial_factorization(&tree);
            let expected = fraction.to_poly().map_err(|e| {
                RealizeError::Inconsistent(format!("fraction of {c} is not a polynomial: {e}"))
            })?;
            if binomial_product(&factors) != expected {
                return Err(RealizeError::Inconsistent(format!(
                    "witness factors of {tree} do not multiply to {fraction}"
                )));
            }
            if cover.is_none() {
                return Err(RealizeError::Inconsistent(format!(
                    "{c} is realized by {tree} but the exponent search found no binomial product"
                )));
            }
            Ok(Theorem52Decision {
                realizable: true,
                tree: Some(tree),
                factors: Some(factors),
                fraction: Some(fraction),
                reason: None,
            })
        }
        Err(RealizeError::Unrealizable(reason)) => {
            if let Some(factors) = cover {
                return Err(RealizeError::Inconsistent(format!(
                    "{c} is unrealizable ({reason}) but its fraction is the binomial product {factors:?}"
                )));
            }
            Ok(Theorem52Decision {
                realizable: false,
                tree: None,
                factors: None,
                fraction,
                reason: Some(reason),
            })
        }
        Err(e) => Err(e),
    }
}
