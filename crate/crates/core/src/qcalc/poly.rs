//! Dense integer polynomials in `q`.

use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::QcalcError;

/// An element of `Z[q]`, stored as ascending coefficients.
///
/// The zero polynomial is the empty coefficient vector; every other value has
/// a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly {
            coeffs: vec![BigInt::one()],
        }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = QPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// The monomial `q^k`.
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        QPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at `q = 1`, i.e. the coefficient sum.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn is_palindromic(&self) -> bool {
        self.coeffs.iter().eq(self.coeffs.iter().rev())
    }

    /// Coefficients weakly increase and then weakly decrease.
    pub fn is_unimodal(&self) -> bool {
        let mut descending = false;
        for w in self.coeffs.windows(2) {
            if w[1] < w[0] {
                descending = true;
            } else if w[1] > w[0] && descending {
                return false;
            }
        }
        true
    }

    /// Returns `c` with `divisor * c == self`, or [`QcalcError::Inexact`] when
    /// no such polynomial exists over the integers.
    pub fn exact_div(&self, divisor: &QPoly) -> Result<QPoly, QcalcError> {
        let Some(dd) = divisor.degree() else {
            return Err(QcalcError::DivisionByZero);
        };
        let Some(nd) = self.degree() else {
            return Ok(QPoly::zero());
        };
        if nd < dd {
            return Err(QcalcError::Inexact);
        }
        let lead = &divisor.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); nd - dd + 1];
        for i in (0..=nd - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            if !(top % lead).is_zero() {
                return Err(QcalcError::Inexact);
            }
            let qi = top / lead;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &qi * b;
            }
            quot[i] = qi;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(QcalcError::Inexact);
        }
        Ok(QPoly::from_coeffs(quot))
    }

    /// True when every coefficient is strictly positive.
    pub fn has_positive_coeffs(&self) -> bool {
        self.coeffs.iter().all(Signed::is_positive)
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl Mul for QPoly {
    type Output = QPoly;

    fn mul(self, rhs: QPoly) -> QPoly {
        &self * &rhs
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigInt::zero();
        let coeffs = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + rhs.coeffs.get(i).unwrap_or(&zero))
            .collect();
        QPoly::from_coeffs(coeffs)
    }
}

impl Add for QPoly {
    type Output = QPoly;

    fn add(self, rhs: QPoly) -> QPoly {
        &self + &rhs
    }
}

impl std::iter::Product for QPoly {
    fn product<I: Iterator<Item = QPoly>>(iter: I) -> QPoly {
        iter.fold(QPoly::one(), |acc, p| &acc * &p)
    }
}

/// Comma-separated ascending coefficients; the zero polynomial prints as `0`.
impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for QPoly {
    type Err = QcalcError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let coeffs = s
            .split(',')
            .map(|part| {
                part.trim()
                    .parse::<BigInt>()
                    .map_err(|_| QcalcError::Parse(format!("bad coefficient {:?}", part.trim())))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QPoly::from_coeffs(coeffs))
    }
}
