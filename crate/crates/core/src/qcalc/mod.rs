//! Exact q-calculus: q-numbers, q-factorials, Gaussian binomial and
//! multinomial coefficients, and fractions of q-numbers.

mod fraction;
mod poly;

pub use fraction::QNumFraction;
pub use poly::QPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QcalcError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("polynomial division is not exact over the integers")]
    Inexact,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("fraction does not expand to a polynomial")]
    NotPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
}

pub(crate) fn q_number_unchecked(n: u32) -> QPoly {
    QPoly::from_i64s(&vec![1; n as usize])
}

/// `[n]_q = 1 + q + ... + q^(n-1)`.
pub fn q_number(n: u32) -> Result<QPoly, QcalcError> {
    if n == 0 {
        return Err(QcalcError::Domain("q_number requires n >= 1".into()));
    }
    Ok(q_number_unchecked(n))
}

/// `[n]_q! = [1]_q [2]_q ... [n]_q`; `[0]_q! = 1`.
pub fn q_factorial(n: u32) -> QPoly {
    (1..=n).map(q_number_unchecked).product()
}

/// Gaussian binomial `[m+n]_q! / ([m]_q! [n]_q!)`.
pub fn q_binomial(m: u32, n: u32) -> QPoly {
    QNumFraction::binomial(m, n)
        .to_poly()
        .expect("q-binomial quotient is always exact")
}

/// q-multinomial `[n_1 + ... + n_k]_q! / ([n_1]_q! ... [n_k]_q!)`.
pub fn q_multinomial(parts: &[u32]) -> QPoly {
    multinomial_fraction(parts)
        .to_poly()
        .expect("q-multinomial quotient is always exact")
}

/// The unreduced fraction of a q-multinomial coefficient.
pub fn multinomial_fraction(parts: &[u32]) -> QNumFraction {
    let total: u32 = parts.iter().sum();
    let den = parts.iter().flat_map(|&p| 2..=p);
    QNumFraction::factorial(total).mul(&QNumFraction::new(std::iter::empty(), den).unwrap())
}

/// Splits a multinomial into binomials:
/// `(n_1..n_k) = binom(n_{k-1}, n_k) binom(n_{k-2}, n_{k-1}+n_k) ... binom(n_1, n_2+...+n_k)`.
///
/// Each pair `(m, n)` denotes `binom(m+n; m, n)_q`. Pairs with a zero part are
/// the constant 1 and are omitted.
pub fn multinomial_chain(parts: &[u32]) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let Some((&last, rest)) = parts.split_last() else {
        return out;
    };
    let mut tail = last;
    for &p in rest.iter().rev() {
        if p > 0 && tail > 0 {
            out.push((p, tail));
        }
        tail += p;
    }
    out
}
