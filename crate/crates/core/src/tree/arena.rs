//! Index-based view of a plane tree used for surgery (detaching and
//! regluing branches) where vertex identity must survive edits.

use super::{PlaneTree, VertexPath};

#[derive(Clone, Debug)]
pub(crate) struct Arena {
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Preorder path of each vertex in the tree the arena was built from.
    pub paths: Vec<VertexPath>,
}

impl Arena {
    /// Vertex ids are assigned in preorder; the root is 0.
    pub fn from_tree(tree: &PlaneTree) -> Arena {
        let mut arena = Arena {
            parent: Vec::new(),
            children: Vec::new(),
            paths: Vec::new(),
        };
        fn walk(t: &PlaneTree, parent: Option<usize>, path: VertexPath, a: &mut Arena) -> usize {
            let id = a.parent.len();
            a.parent.push(parent);
            a.children.push(Vec::new());
            a.paths.push(path.clone());
            for (i, c) in t.children().iter().enumerate() {
                let cid = walk(c, Some(id), path.child(i), a);
                a.children[id].push(cid);
            }
            id
        }
        walk(tree, None, VertexPath::root(), &mut arena);
        arena
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn resolve(&self, path: &VertexPath) -> Option<usize> {
        path.0
            .iter()
            .try_fold(0usize, |v, &i| self.children[v].get(i).copied())
    }

    /// Proper descendant count under the current child lists.
    pub fn descendants(&self, v: usize) -> usize {
        self.children[v]
            .iter()
            .map(|&c| self.descendants(c) + 1)
            .sum()
    }

    /// True if `v` lies in the subtree of `ancestor` (inclusive).
    pub fn is_within(&self, mut v: usize, ancestor: usize) -> bool {
        loop {
            if v == ancestor {
                return true;
            }
            match self.parent[v] {
                Some(p) => v = p,
                None => return false,
            }
        }
    }

    /// Removes `child` from its parent's list.
    pub fn detach(&mut self, child: usize) {
        if let Some(p) = self.parent[child].take() {
            self.children[p].retain(|&c| c != child);
        }
    }

    pub fn attach(&mut self, parent: usize, child: usize) {
        self.parent[child] = Some(parent);
        self.children[parent].push(child);
    }

    /// Number of vertices reachable from the root through child lists,
    /// stopping at revisits.
    pub fn reachable_from_root(&self) -> usize {
        let mut seen = vec![false; self.len()];
        let mut stack = vec![0];
        let mut count = 0;
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            count += 1;
            stack.extend(self.children[v].iter().copied());
        }
        count
    }

    /// Rebuilds the plane tree below `v`. Requires an acyclic structure.
    pub fn to_tree(&self, v: usize) -> PlaneTree {
        PlaneTree::node(self.children[v].iter().map(|&c| self.to_tree(c)).collect())
    }
}
