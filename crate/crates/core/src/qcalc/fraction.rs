//! Quotients of products of q-numbers, `prod [a]_q / prod [b]_q`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{q_number_unchecked, QPoly, QcalcError};

/// `prod_{a in numerator} [a]_q / prod_{b in denominator} [b]_q`.
///
/// Both multisets are kept sorted ascending. Indices equal to 1 are dropped on
/// construction since `[1]_q = 1`; index 0 is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QNumFraction {
    numerator: Vec<u32>,
    denominator: Vec<u32>,
}

fn normalize(items: impl IntoIterator<Item = u32>) -> Result<Vec<u32>, QcalcError> {
    let mut v = Vec::new();
    for a in items {
        match a {
            0 => return Err(QcalcError::Domain("q-number index 0 in fraction".into())),
            1 => {}
            _ => v.push(a),
        }
    }
    v.sort_unstable();
    Ok(v)
}

impl QNumFraction {
    pub fn new(
        numerator: impl IntoIterator<Item = u32>,
        denominator: impl IntoIterator<Item = u32>,
    ) -> Result<Self, QcalcError> {
        Ok(QNumFraction {
            numerator: normalize(numerator)?,
            denominator: normalize(denominator)?,
        })
    }

    /// `[n]_q!` as a fraction with empty denominator.
    pub fn factorial(n: u32) -> Self {
        QNumFraction {
            numerator: (2..=n).collect(),
            denominator: Vec::new(),
        }
    }

    /// The q-binomial `[m+n]! / ([m]! [n]!)`, unreduced.
    pub fn binomial(m: u32, n: u32) -> Self {
        let mut denominator: Vec<u32> = (2..=m).chain(2..=n).collect();
        denominator.sort_unstable();
        QNumFraction {
            numerator: (2..=m + n).collect(),
            denominator,
        }
    }

    pub fn numerator(&self) -> &[u32] {
        &self.numerator
    }

    pub fn denominator(&self) -> &[u32] {
        &self.denominator
    }

    /// Product of two fractions (multiset union on each side), unreduced.
    pub fn mul(&self, other: &QNumFraction) -> QNumFraction {
        let mut numerator = self.numerator.clone();
        numerator.extend_from_slice(&other.numerator);
        numerator.sort_unstable();
        let mut denominator = self.denominator.clone();
        denominator.extend_from_slice(&other.denominator);
        denominator.sort_unstable();
        QNumFraction {
            numerator,
            denominator,
        }
    }

    /// Cancels equal indices pairwise; the result has disjoint multisets.
    pub fn reduce(&self) -> QNumFraction {
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.numerator, &self.denominator);
        let mut numerator = Vec::with_capacity(a.len());
        let mut denominator = Vec::with_capacity(b.len());
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    numerator.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    denominator.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        numerator.extend_from_slice(&a[i..]);
        denominator.extend_from_slice(&b[j..]);
        QNumFraction {
            numerator,
            denominator,
        }
    }

    pub fn is_reduced(&self) -> bool {
        self.reduce() == *self
    }

    /// Smallest numerator index occurring more than once, if any.
    pub fn repeated_numerator_index(&self) -> Option<u32> {
        self.numerator
            .windows(2)
            .find(|w| w[0] == w[1])
            .map(|w| w[0])
    }

    fn max_index(&self) -> u32 {
        let n = self.numerator.last().copied().unwrap_or(0);
        let d = self.denominator.last().copied().unwrap_or(0);
        n.max(d)
    }

    /// Exponent of the cyclotomic polynomial `Phi_d` in the fraction, for
    /// `d = 0..=max index` (entries 0 and 1 are always zero).
    ///
    /// `[n]_q = prod_{d | n, d > 1} Phi_d(q)`, so the exponent of `Phi_d` is the
    /// number of numerator multiples of `d` minus the denominator multiples.
    pub fn cyclotomic_exponents(&self) -> Vec<i64> {
        let max = self.max_index() as usize;
        (0..=max)
            .map(|d| {
                if d < 2 {
                    return 0;
                }
                let count = |side: &[u32]| {
                    side.iter()
                        .filter(|&&a| (a as usize).is_multiple_of(d))
                        .count() as i64
                };
                count(&self.numerator) - count(&self.denominator)
            })
            .collect()
    }

    /// True iff the fraction expands to a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.cyclotomic_exponents().iter().all(|&e| e >= 0)
    }

    /// Expands the fraction into `Z[q]`.
    ///
    /// Numerator factors are multiplied in one at a time and pending
    /// denominator factors are divided out as soon as they divide exactly, so
    /// intermediate coefficients stay close to the size of the result.
    pub fn to_poly(&self) -> Result<QPoly, QcalcError> {
        let reduced = self.reduce();
        if !reduced.is_polynomial() {
            return Err(QcalcError::NotPolynomial);
        }
        let mut pending: Vec<QPoly> = reduced
            .denominator
            .iter()
            .rev()
            .map(|&b| q_number_unchecked(b))
            .collect();
        let mut acc = QPoly::one();
        for &a in &reduced.numerator {
            acc = &acc * &q_number_unchecked(a);
            pending.retain(|den| match acc.exact_div(den) {
                Ok(quot) => {
                    acc = quot;
                    false
                }
                Err(_) => true,
            });
        }
        if !pending.is_empty() {
            unreachable!("cyclotomic exponents nonnegative but [b]_q factors left undivided");
        }
        Ok(acc)
    }
}

fn write_side(f: &mut fmt::Formatter<'_>, side: &[u32]) -> fmt::Result {
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    for &a in side {
        *counts.entry(a).or_default() += 1;
    }
    for (a, k) in counts {
        if k == 1 {
            write!(f, "[{a}]")?;
        } else {
            write!(f, "[{a}]^{k}")?;
        }
    }
    Ok(())
}

/// Factored text form, e.g. `[8][11]/[2]^3[3]`. An empty numerator prints as
/// `1`; an empty denominator omits the slash.
impl fmt::Display for QNumFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.numerator.is_empty() {
            write!(f, "1")?;
        } else {
            write_side(f, &self.numerator)?;
        }
        if !self.denominator.is_empty() {
            write!(f, "/")?;
            write_side(f, &self.denominator)?;
        }
        Ok(())
    }
}

fn parse_side(s: &str) -> Result<Vec<u32>, QcalcError> {
    let s = s.trim();
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    let err = || QcalcError::Parse(format!("bad q-number product {s:?}"));
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let body = rest.strip_prefix('[').ok_or_else(err)?;
        let close = body.find(']').ok_or_else(err)?;
        let index: u32 = body[..close].trim().parse().map_err(|_| err())?;
        rest = &body[close + 1..];
        let mut power = 1usize;
        if let Some(after) = rest.strip_prefix('^') {
            let end = after.find('[').unwrap_or(after.len());
            power = after[..end].trim().parse().map_err(|_| err())?;
            rest = &after[end..];
        }
        out.extend(std::iter::repeat_n(index, power));
        rest = rest.trim_start();
    }
    Ok(out)
}

impl FromStr for QNumFraction {
    type Err = QcalcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, d),
            None => (s, ""),
        };
        QNumFraction::new(parse_side(num)?, parse_side(den)?)
    }
}
