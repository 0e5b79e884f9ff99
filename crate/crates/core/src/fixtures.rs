//! Named trees used across tests, the CLI and the acceptance suite.
//!
//! `T1`/`T2` are the 19-edge pair with equal plucking polynomial that no
//! sequence of exchange moves connects. `X5`/`Y5` are the smallest distinct
//! pair with equal polynomial.

use crate::tree::PlaneTree;

pub const T1_TEXT: &str = include_str!("../fixtures/t1.tree");
pub const T2_TEXT: &str = include_str!("../fixtures/t2.tree");
pub const X5_TEXT: &str = "(()()((())))";
pub const Y5_TEXT: &str = "((())(()()))";

fn parse(text: &str) -> PlaneTree {
    text.trim().parse().expect("fixture text is well formed")
}

/// Root `{A, B}`: `A` holds a leaf and a 6-edge chain; `B` holds a 2-edge
/// path and a single-child vertex over a node with two 1-edge paths.
pub fn t1() -> PlaneTree {
    parse(T1_TEXT)
}

/// Root `{A', B'}`: `A'` holds a 1-edge path and `v`, where `v` sits over a
/// node with a leaf and a 2-edge path; `B'` holds a 1-edge path and a 6-edge
/// chain.
pub fn t2() -> PlaneTree {
    parse(T2_TEXT)
}

pub fn x5() -> PlaneTree {
    parse(X5_TEXT)
}

pub fn y5() -> PlaneTree {
    parse(Y5_TEXT)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::ChildProfile;

    #[test]
    fn fixture_shapes() {
        assert_eq!(t1().edge_count(), 19);
        assert_eq!(t2().edge_count(), 19);
        assert!(t1().is_reduced() && t2().is_reduced());
        assert_eq!(t1().descendant_multiset(), t2().descendant_multiset());
        assert_eq!(
            t1().descendant_multiset().values(),
            &[19, 9, 8, 6, 5, 5, 4, 4, 3, 2, 2, 1, 1, 1, 1, 0, 0, 0, 0, 0]
        );
        assert_ne!(t1().canonical_code(), t2().canonical_code());
        assert_ne!(x5().canonical_code(), y5().canonical_code());
    }

    #[test]
    fn fixture_profiles() {
        let common: [(&[usize], usize); 7] = [
            (&[6], 1),
            (&[5], 2),
            (&[4], 1),
            (&[3], 1),
            (&[2], 2),
            (&[1], 4),
            (&[], 5),
        ];
        let mut u1 = vec![
            (&[9, 10][..], 1),
            (&[3, 6][..], 1),
            (&[1, 7][..], 1),
            (&[2, 2][..], 1),
        ];
        u1.extend_from_slice(&common);
        let mut u2 = vec![
            (&[9, 10][..], 1),
            (&[2, 7][..], 1),
            (&[2, 6][..], 1),
            (&[1, 3][..], 1),
        ];
        u2.extend_from_slice(&common);
        assert_eq!(t1().child_profile(), ChildProfile::from_counts(&u1));
        assert_eq!(t2().child_profile(), ChildProfile::from_counts(&u2));
    }
}
