//! Rooted plane trees and their descendant statistics.
//!
//! A [`PlaneTree`] keeps an ordered child list at every node. The order only
//! matters for [`PlaneTree::r_value`] and the recursive evaluation of the
//! plucking polynomial; everything else works up to rooted-tree isomorphism
//! via [`PlaneTree::canonical`].

mod arena;
mod stats;

pub(crate) use arena::Arena;
pub use stats::{ChildProfile, DescendantMultiset};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
    #[error("invalid vertex path {0}")]
    InvalidPath(VertexPath),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(VertexPath),
    #[error("cannot pluck the single-point tree")]
    SinglePoint,
}

/// Child indices from the root to a vertex. The empty path is the root.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPath(pub Vec<usize>);

impl VertexPath {
    pub fn root() -> Self {
        VertexPath(Vec::new())
    }

    pub fn child(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        v.push(index);
        VertexPath(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// True if `self` lies in the subtree rooted at `other` (inclusive).
    pub fn is_within(&self, other: &VertexPath) -> bool {
        self.0.starts_with(&other.0)
    }
}

/// `root` for the empty path, otherwise dot-separated indices such as `1.0.2`.
impl fmt::Display for VertexPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join("."))
    }
}

impl FromStr for VertexPath {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "root" || s.is_empty() {
            return Ok(VertexPath::root());
        }
        s.split('.')
            .map(|p| p.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map(VertexPath)
            .map_err(|_| TreeError::Parse {
                position: 0,
                message: format!("bad vertex path {s:?}"),
            })
    }
}

/// A rooted tree with ordered children. Nodes carry no labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    children: Vec<PlaneTree>,
}

impl PlaneTree {
    /// The one-point tree.
    pub fn point() -> Self {
        PlaneTree::default()
    }

    pub fn node(children: Vec<PlaneTree>) -> Self {
        PlaneTree { children }
    }

    /// A path with `edges` edges hanging down from the root.
    pub fn path(edges: usize) -> Self {
        (0..edges).fold(PlaneTree::point(), |t, _| t.stabilize())
    }

    /// A root with `leaves` leaf children.
    pub fn star(leaves: usize) -> Self {
        PlaneTree::node(vec![PlaneTree::point(); leaves])
    }

    /// Builds a tree from a parent array: vertex 0 is the root and vertex
    /// `i > 0` is appended as the last child of `parents[i - 1] < i`.
    pub fn from_parents(parents: &[usize]) -> Option<Self> {
        let n = parents.len() + 1;
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &p) in parents.iter().enumerate() {
            if p > i {
                return None;
            }
            kids[p].push(i + 1);
        }
        fn build(v: usize, kids: &[Vec<usize>]) -> PlaneTree {
            PlaneTree::node(kids[v].iter().map(|&c| build(c, kids)).collect())
        }
        Some(build(0, &kids))
    }

    pub fn children(&self) -> &[PlaneTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(|c| c.edge_count() + 1).sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.edge_count() + 1
    }

    /// A tree is reduced if its root has more than one child.
    pub fn is_reduced(&self) -> bool {
        self.children.len() > 1
    }

    pub fn get(&self, path: &VertexPath) -> Option<&PlaneTree> {
        path.0
            .iter()
            .try_fold(self, |node, &i| node.children.get(i))
    }

    fn get_mut(&mut self, path: &[usize]) -> Option<&mut PlaneTree> {
        path.iter()
            .try_fold(self, |node, &i| node.children.get_mut(i))
    }

    fn require(&self, path: &VertexPath) -> Result<&PlaneTree, TreeError> {
        self.get(path)
            .ok_or_else(|| TreeError::InvalidPath(path.clone()))
    }

    /// All vertex paths in preorder.
    pub fn vertices(&self) -> Vec<VertexPath> {
        fn walk(t: &PlaneTree, here: &mut Vec<usize>, out: &mut Vec<VertexPath>) {
            out.push(VertexPath(here.clone()));
            for (i, c) in t.children.iter().enumerate() {
                here.push(i);
                walk(c, here, out);
                here.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Leaf paths, left to right. The one-point tree has its root as a leaf.
    pub fn leaves(&self) -> Vec<VertexPath> {
        self.vertices()
            .into_iter()
            .filter(|p| self.get(p).is_some_and(PlaneTree::is_leaf))
            .collect()
    }

    /// Recursively sorts children by (edge count, canonical code). Two trees
    /// are isomorphic as unordered rooted trees iff their canonical forms are
    /// equal. Vertex paths of the input do not carry over.
    pub fn canonical(&self) -> PlaneTree {
        self.canonical_with_key().0
    }

    fn canonical_with_key(&self) -> (PlaneTree, usize, String) {
        let mut kids: Vec<(PlaneTree, usize, String)> = self
            .children
            .iter()
            .map(PlaneTree::canonical_with_key)
            .collect();
        kids.sort_by(|a, b| (a.1, &a.2).cmp(&(b.1, &b.2)));
        let edges = kids.iter().map(|k| k.1 + 1).sum();
        let mut code = String::with_capacity(2 * edges + 2);
        code.push('(');
        for k in &kids {
            code.push_str(&k.2);
        }
        code.push(')');
        let tree = PlaneTree::node(kids.into_iter().map(|k| k.0).collect());
        (tree, edges, code)
    }

    /// Serialization of [`PlaneTree::canonical`].
    pub fn canonical_code(&self) -> String {
        self.canonical_with_key().2
    }

    pub fn is_isomorphic(&self, other: &PlaneTree) -> bool {
        self.edge_count() == other.edge_count() && self.canonical_code() == other.canonical_code()
    }

    /// Number of proper descendants `d(v)`.
    pub fn descendant_count(&self, v: &VertexPath) -> Result<usize, TreeError> {
        Ok(self.require(v)?.edge_count())
    }

    pub fn descendant_multiset(&self) -> DescendantMultiset {
        let mut values = Vec::with_capacity(self.vertex_count());
        fn walk(t: &PlaneTree, out: &mut Vec<usize>) -> usize {
            let d = t.children.iter().map(|c| walk(c, out) + 1).sum();
            out.push(d);
            d
        }
        walk(self, &mut values);
        DescendantMultiset::new(values)
    }

    pub fn child_profile(&self) -> ChildProfile {
        let mut tuples = Vec::with_capacity(self.vertex_count());
        fn walk(t: &PlaneTree, out: &mut Vec<Vec<usize>>) -> usize {
            let weights: Vec<usize> = t.children.iter().map(|c| walk(c, out) + 1).collect();
            let d = weights.iter().sum();
            out.push(weights);
            d
        }
        walk(self, &mut tuples);
        ChildProfile::new(tuples)
    }

    /// Number of edges strictly to the right of the root-to-`leaf` path.
    pub fn r_value(&self, leaf: &VertexPath) -> Result<usize, TreeError> {
        if !self.require(leaf)?.is_leaf() {
            return Err(TreeError::NotALeaf(leaf.clone()));
        }
        let mut node = self;
        let mut r = 0;
        for &i in &leaf.0 {
            r += node.children[i + 1..]
                .iter()
                .map(|c| c.edge_count() + 1)
                .sum::<usize>();
            node = &node.children[i];
        }
        Ok(r)
    }

    /// `T - v`: removes a leaf and its incident edge.
    pub fn pluck(&self, leaf: &VertexPath) -> Result<PlaneTree, TreeError> {
        let target = self.require(leaf)?;
        if !target.is_leaf() {
            return Err(TreeError::NotALeaf(leaf.clone()));
        }
        let Some((&last, parent)) = leaf.0.split_last() else {
            return Err(TreeError::SinglePoint);
        };
        let mut out = self.clone();
        out.get_mut(parent)
            .expect("parent of a valid path exists")
            .children
            .remove(last);
        Ok(out)
    }

    /// Contracts the root edge while the root has exactly one child. Returns
    /// the reduced tree and the number of destabilizations performed.
    pub fn reduce(&self) -> (PlaneTree, usize) {
        let mut t = self;
        let mut k = 0;
        while t.children.len() == 1 {
            t = &t.children[0];
            k += 1;
        }
        (t.clone(), k)
    }

    /// New root with `self` as its only child.
    pub fn stabilize(&self) -> PlaneTree {
        PlaneTree::node(vec![self.clone()])
    }

    /// Identifies all roots; children concatenated left to right.
    pub fn wedge(parts: &[PlaneTree]) -> PlaneTree {
        PlaneTree::node(
            parts
                .iter()
                .flat_map(|p| p.children.iter().cloned())
                .collect(),
        )
    }
}

impl fmt::Display for PlaneTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for c in &self.children {
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for PlaneTree {
    type Err = TreeError;

    /// Grammar `tree := '(' tree* ')'`, whitespace ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut stack: Vec<Vec<PlaneTree>> = Vec::new();
        let mut done: Option<PlaneTree> = None;
        for (pos, ch) in s.char_indices() {
            if ch.is_whitespace() {
                continue;
            }
            if done.is_some() {
                return Err(TreeError::Parse {
                    position: pos,
                    message: "trailing input after tree".into(),
                });
            }
            match ch {
                '(' => stack.push(Vec::new()),
                ')' => {
                    let kids = stack.pop().ok_or(TreeError::Parse {
                        position: pos,
                        message: "unmatched ')'".into(),
                    })?;
                    let node = PlaneTree::node(kids);
                    match stack.last_mut() {
                        Some(parent) => parent.push(node),
                        None => done = Some(node),
                    }
                }
                other => {
                    return Err(TreeError::Parse {
                        position: pos,
                        message: format!("unexpected character {other:?}"),
                    })
                }
            }
        }
        done.ok_or(TreeError::Parse {
            position: s.len(),
            message: if stack.is_empty() {
                "empty input".into()
            } else {
                "unbalanced parentheses".into()
            },
        })
    }
}
