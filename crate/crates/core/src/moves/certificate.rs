//! A replayable record of how one tree turns into another: destabilize the
//! source, apply one permutation move, stabilize the result.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{apply_permutation_move, describe_violations, PermutationMoveSpec};
use crate::tree::{PlaneTree, VertexPath};

const FORMAT_TAG: &str = "plucking-move-certificate/1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("certificate line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("certificate is missing the {0:?} field")]
    Missing(&'static str),
    #[error("cannot destabilize {requested} times; the root branches after {available}")]
    Destabilize { requested: usize, available: usize },
    #[error("move does not apply:\n{0}")]
    Move(String),
    #[error("result {got} is not isomorphic to the target {expected}")]
    Mismatch { got: String, expected: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateMove {
    /// The reduced trees are already isomorphic.
    Identical,
    Permutation(PermutationMoveSpec),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveCertificate {
    pub destabilizations_a: usize,
    pub destabilizations_b: usize,
    pub kind: CertificateMove,
}

impl MoveCertificate {
    /// Replays the certificate on `a`.
    pub fn apply(&self, a: &PlaneTree) -> Result<PlaneTree, CertificateError> {
        let mut t = a;
        for done in 0..self.destabilizations_a {
            match t.children() {
                [only] => t = only,
                _ => {
                    return Err(CertificateError::Destabilize {
                        requested: self.destabilizations_a,
                        available: done,
                    })
                }
            }
        }
        let mut out = match &self.kind {
            CertificateMove::Identical => t.clone(),
            CertificateMove::Permutation(m) => apply_permutation_move(t, m)
                .map_err(|v| CertificateError::Move(describe_violations(&v)))?,
        };
        for _ in 0..self.destabilizations_b {
            out = out.stabilize();
        }
        Ok(out)
    }

    /// Replays on `a` and checks the result is isomorphic to `b`.
    pub fn verify(&self, a: &PlaneTree, b: &PlaneTree) -> Result<(), CertificateError> {
        let got = self.apply(a)?;
        if got.is_isomorphic(b) {
            Ok(())
        } else {
            Err(CertificateError::Mismatch {
                got: got.canonical_code(),
                expected: b.canonical_code(),
            })
        }
    }

    pub fn permutation_move(&self) -> Option<&PermutationMoveSpec> {
        match &self.kind {
            CertificateMove::Permutation(m) => Some(m),
            CertificateMove::Identical => None,
        }
    }
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

/// Line-oriented `key: value` text, fields in a fixed order.
impl fmt::Display for MoveCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format: {FORMAT_TAG}")?;
        writeln!(f, "destabilizations-a: {}", self.destabilizations_a)?;
        writeln!(f, "destabilizations-b: {}", self.destabilizations_b)?;
        let m = match &self.kind {
            CertificateMove::Identical => return writeln!(f, "kind: identical"),
            CertificateMove::Permutation(m) => m,
        };
        writeln!(f, "kind: permutation")?;
        writeln!(f, "n: {}", m.vertices.len())?;
        for (i, (v, g)) in m.vertices.iter().zip(&m.branch_groups).enumerate() {
            writeln!(f, "vertex.{}: {v}", i + 1)?;
            writeln!(f, "branches.{}: {}", i + 1, join(g, ","))?;
        }
        writeln!(f, "alpha: {}", join(&m.alpha(), " "))?;
        writeln!(f, "beta: {}", join(&m.beta, " "))?;
        writeln!(f, "permutation: {}", m.permutation_one_line())
    }
}

fn numbers(line: usize, value: &str, sep: char) -> Result<Vec<usize>, CertificateError> {
    value
        .split(sep)
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| CertificateError::Parse {
                line,
                message: format!("expected a number, got {s:?}"),
            })
        })
        .collect()
}

/// Orders `field.i` entries and checks they run `1..=n`.
fn indexed<T>(
    mut items: Vec<(usize, T)>,
    n: usize,
    what: &str,
) -> Result<Vec<T>, CertificateError> {
    items.sort_by_key(|p| p.0);
    if items.iter().map(|p| p.0).ne(1..=n) {
        return Err(CertificateError::Parse {
            line: 0,
            message: format!("expected {what}.1 through {what}.{n}"),
        });
    }
    Ok(items.into_iter().map(|p| p.1).collect())
}

impl FromStr for MoveCertificate {
    type Err = CertificateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut format = None;
        let (mut da, mut db, mut kind, mut n) = (None, None, None, None);
        let mut vertices: Vec<(usize, VertexPath)> = Vec::new();
        let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
        let (mut alpha, mut beta, mut perm) = (None, None, None);
        for (idx, raw) in s.lines().enumerate() {
            let line = idx + 1;
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (key, value) = text
                .split_once(':')
                .ok_or_else(|| CertificateError::Parse {
                    line,
                    message: format!("expected `key: value`, got {text:?}"),
                })?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |message: String| CertificateError::Parse { line, message };
            let single = |v: &str| -> Result<usize, CertificateError> {
                v.parse()
                    .map_err(|_| bad(format!("expected a number, got {v:?}")))
            };
            match key {
                "format" => format = Some(value.to_string()),
                "destabilizations-a" => da = Some(single(value)?),
                "destabilizations-b" => db = Some(single(value)?),
                "kind" => kind = Some(value.to_string()),
                "n" => n = Some(single(value)?),
                "alpha" => alpha = Some(numbers(line, value, ' ')?),
                "beta" => beta = Some(numbers(line, value, ' ')?),
                "permutation" => perm = Some(numbers(line, value, ' ')?),
                _ => {
                    let (field, index) = key
                        .split_once('.')
                        .ok_or_else(|| bad(format!("unknown field {key:?}")))?;
                    let index = single(index)?;
                    match field {
                        "vertex" => vertices.push((
                            index,
                            value
                                .parse()
                                .map_err(|e: crate::tree::TreeError| bad(e.to_string()))?,
                        )),
                        "branches" => groups.push((index, numbers(line, value, ',')?)),
                        _ => return Err(bad(format!("unknown field {key:?}"))),
                    }
                }
            }
        }
        let format = format.ok_or(CertificateError::Missing("format"))?;
        if format != FORMAT_TAG {
            return Err(CertificateError::Parse {
                line: 1,
                message: format!("unsupported format {format:?}"),
            });
        }
        let destabilizations_a = da.ok_or(CertificateError::Missing("destabilizations-a"))?;
        let destabilizations_b = db.ok_or(CertificateError::Missing("destabilizations-b"))?;
        let kind = match kind.ok_or(CertificateError::Missing("kind"))?.as_str() {
            "identical" => CertificateMove::Identical,
            "permutation" => {
                let n = n.ok_or(CertificateError::Missing("n"))?;
                let m = PermutationMoveSpec {
                    vertices: indexed(vertices, n, "vertex")?,
                    branch_groups: indexed(groups, n, "branches")?,
                    beta: beta.ok_or(CertificateError::Missing("beta"))?,
                    permutation: perm
                        .ok_or(CertificateError::Missing("permutation"))?
                        .into_iter()
                        .map(|p| {
                            p.checked_sub(1).ok_or(CertificateError::Parse {
                                line: 0,
                                message: "permutation entries are 1-based".into(),
                            })
                        })
                        .collect::<Result<_, _>>()?,
                };
                if let Some(alpha) = alpha {
                    if alpha != m.alpha() {
                        return Err(CertificateError::Parse {
                            line: 0,
                            message: format!("alpha {alpha:?} disagrees with the branch groups"),
                        });
                    }
                }
                CertificateMove::Permutation(m)
            }
            other => {
                return Err(CertificateError::Parse {
                    line: 0,
                    message: format!("unknown kind {other:?}"),
                })
            }
        };
        Ok(MoveCertificate {
            destabilizations_a,
            destabilizations_b,
            kind,
        })
    }
}
