//! Prefix tree over strictly ascending id sequences.
//!
//! The root stands for the empty sequence and the parent of `i1..i(l-1) il`
//! is `i1..i(l-1)`. Only exact membership is supported: a node carries a
//! member flag, so prefixes of members are not members themselves.

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
struct Node {
    /// Sorted by label.
    children: Vec<(u32, u32)>,
    member: bool,
}

impl Node {
    fn child(&self, label: u32) -> std::result::Result<u32, usize> {
        self.children
            .binary_search_by_key(&label, |&(l, _)| l)
            .map(|i| self.children[i].1)
    }
}

#[derive(Clone, Debug)]
pub struct SetTrie {
    nodes: Vec<Node>,
    members: usize,
}

impl Default for SetTrie {
    fn default() -> Self {
        Self::new()
    }
}

fn check_sorted(seq: &[u32]) -> Result<()> {
    if seq.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(format!(
            "set-trie sequences must be strictly ascending, got {seq:?}"
        )));
    }
    Ok(())
}

impl SetTrie {
    pub fn new() -> Self {
        Self {
            nodes: vec![Node::default()],
            members: 0,
        }
    }

    /// Inserts `seq`; returns `false` (and changes nothing) if it is already a member.
    pub fn insert(&mut self, seq: &[u32]) -> Result<bool> {
        check_sorted(seq)?;
        Ok(self.insert_sorted(seq.iter().copied()))
    }

    pub fn contains(&self, seq: &[u32]) -> Result<bool> {
        check_sorted(seq)?;
        Ok(self.contains_sorted(seq.iter().copied()))
    }

    pub(crate) fn insert_sorted(&mut self, seq: impl IntoIterator<Item = u32>) -> bool {
        let mut cur = 0usize;
        for label in seq {
            cur = match self.nodes[cur].child(label) {
                Ok(next) => next as usize,
                Err(pos) => {
                    let id = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[cur].children.insert(pos, (label, id as u32));
                    id
                }
            };
        }
        let node = &mut self.nodes[cur];
        if node.member {
            false
        } else {
            node.member = true;
            self.members += 1;
            true
        }
    }

    pub(crate) fn contains_sorted(&self, seq: impl IntoIterator<Item = u32>) -> bool {
        let mut cur = 0usize;
        for label in seq {
            match self.nodes[cur].child(label) {
                Ok(next) => cur = next as usize,
                Err(_) => return false,
            }
        }
        self.nodes[cur].member
    }

    /// Number of nodes, not counting the root.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Number of distinct member sequences.
    pub fn member_count(&self) -> usize {
        self.members
    }

    pub fn is_empty(&self) -> bool {
        self.members == 0
    }

    /// All members in lexicographic order.
    pub fn members(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(self.members);
        let mut path = Vec::new();
        self.collect(0, &mut path, &mut out);
        out
    }

    fn collect(&self, node: usize, path: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if self.nodes[node].member {
            out.push(path.clone());
        }
        for &(label, child) in &self.nodes[node].children {
            path.push(label);
            self.collect(child as usize, path, out);
            path.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trie() {
        let t = SetTrie::new();
        assert_eq!(t.node_count(), 0);
        assert!(!t.contains(&[]).unwrap());
    }

    #[test]
    fn empty_sequence_twice() {
        let mut t = SetTrie::new();
        assert!(t.insert(&[]).unwrap());
        assert!(!t.insert(&[]).unwrap());
        assert_eq!(t.node_count(), 0);
        assert_eq!(t.member_count(), 1);
    }

    #[test]
    fn node_growth() {
        let mut t = SetTrie::new();
        assert!(t.insert(&[1, 2]).unwrap());
        assert_eq!(t.node_count(), 2);
        assert!(t.insert(&[1, 2, 3]).unwrap());
        assert_eq!(t.node_count(), 3);
        let mut u = SetTrie::new();
        u.insert(&[0]).unwrap();
        u.insert(&[1]).unwrap();
        assert_eq!(u.node_count(), 2);
    }

    #[test]
    fn prefixes_are_not_members() {
        let mut t = SetTrie::new();
        t.insert(&[1, 4, 5]).unwrap();
        assert!(t.contains(&[1, 4, 5]).unwrap());
        assert!(!t.contains(&[1, 4]).unwrap());
        assert!(!t.contains(&[]).unwrap());
    }

    #[test]
    fn unsorted_input_rejected() {
        let mut t = SetTrie::new();
        assert!(matches!(t.insert(&[2, 1]), Err(Error::InvalidInput(_))));
        assert!(matches!(t.contains(&[3, 3]), Err(Error::InvalidInput(_))));
        assert_eq!(t.node_count(), 0);
    }

    #[test]
    fn extending_a_branch() {
        // Intents a, b, c, d, e, bef (a..f -> 0..5) then bdef.
        let mut t = SetTrie::new();
        for s in [&[0][..], &[1], &[2], &[3], &[4], &[1, 4, 5]] {
            assert!(t.insert(s).unwrap());
        }
        let before = t.node_count();
        assert_eq!(before, 7);
        assert!(t.insert(&[1, 3, 4, 5]).unwrap());
        // b already exists; d, e, f are new under it.
        assert_eq!(t.node_count(), before + 3);
    }

    #[test]
    fn members_listed_in_order() {
        let mut t = SetTrie::new();
        for s in [&[2][..], &[0, 1], &[], &[0]] {
            t.insert(s).unwrap();
        }
        assert_eq!(t.members(), vec![vec![], vec![0], vec![0, 1], vec![2]]);
    }
}
