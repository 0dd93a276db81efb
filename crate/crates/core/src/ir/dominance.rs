//! Dominator trees over the block graph of a single region.
//!
//! Uses the iterative scheme of Cooper, Harvey and Kennedy: immediate
//! dominators are refined over reverse postorder until nothing changes.

use std::collections::HashMap;

use super::{BlockId, Ir, RegionId};

/// Immediate dominators of the blocks of one region.
#[derive(Debug, Clone)]
pub struct DominatorTree {
    /// Reverse-postorder index of each reachable block.
    rpo_index: HashMap<BlockId, usize>,
    /// Immediate dominator per RPO index; the entry maps to itself.
    idom: Vec<usize>,
    rpo: Vec<BlockId>,
}

impl DominatorTree {
    /// Builds the tree for `region`, following the successor lists of each
    /// block's final operation. Successors outside the region are ignored.
    pub fn for_region(ir: &Ir, region: RegionId) -> Self {
        let blocks = ir.region(region).blocks();
        let local: HashMap<BlockId, usize> =
            blocks.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let succs: Vec<Vec<usize>> = blocks
            .iter()
            .map(|&b| {
                ir.block(b)
                    .last_op()
                    .map(|t| {
                        ir.op(t)
                            .successors()
                            .iter()
                            .filter_map(|s| local.get(s).copied())
                            .collect()
                    })
                    .unwrap_or_default()
            })
            .collect();
        let tree = Self::from_successors(blocks.len(), &succs);
        DominatorTree {
            rpo_index: tree
                .rpo_index
                .into_iter()
                .map(|(n, i)| (blocks[n], i))
                .collect(),
            idom: tree.idom,
            rpo: tree.rpo.into_iter().map(|n| blocks[n]).collect(),
        }
    }

    pub fn is_reachable(&self, block: BlockId) -> bool {
        self.rpo_index.contains_key(&block)
    }

    /// Whether `a` dominates `b` (reflexive). Unreachable blocks dominate
    /// nothing and are dominated by nothing.
    pub fn dominates(&self, a: BlockId, b: BlockId) -> bool {
        let (Some(&ai), Some(&bi)) = (self.rpo_index.get(&a), self.rpo_index.get(&b)) else {
            return false;
        };
        let mut cur = bi;
        loop {
            if cur == ai {
                return true;
            }
            if cur == 0 {
                return false;
            }
            cur = self.idom[cur];
        }
    }

    pub fn immediate_dominator(&self, block: BlockId) -> Option<BlockId> {
        let &i = self.rpo_index.get(&block)?;
        (i != 0).then(|| self.rpo[self.idom[i]])
    }
}

/// Index-based tree, entry is node 0.
struct IndexTree {
    rpo_index: HashMap<usize, usize>,
    idom: Vec<usize>,
    rpo: Vec<usize>,
}

impl DominatorTree {
    fn from_successors(n: usize, succs: &[Vec<usize>]) -> IndexTree {
        if n == 0 {
            return IndexTree {
                rpo_index: HashMap::new(),
                idom: Vec::new(),
                rpo: Vec::new(),
            };
        }
        // Iterative DFS postorder from the entry.
        let mut visited = vec![false; n];
        let mut post = Vec::with_capacity(n);
        let mut stack = vec![(0usize, 0usize)];
        visited[0] = true;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some(&s) = succs[node].get(*next) {
                *next += 1;
                if !visited[s] {
                    visited[s] = true;
                    stack.push((s, 0));
                }
            } else {
                post.push(node);
                stack.pop();
            }
        }
        let rpo: Vec<usize> = post.into_iter().rev().collect();
        let rpo_index: HashMap<usize, usize> =
            rpo.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); rpo.len()];
        for (i, &b) in rpo.iter().enumerate() {
            for s in &succs[b] {
                if let Some(&si) = rpo_index.get(s) {
                    preds[si].push(i);
                }
            }
        }

        const UNDEF: usize = usize::MAX;
        let mut idom = vec![UNDEF; rpo.len()];
        idom[0] = 0;
        let mut changed = true;
        while changed {
            changed = false;
            for b in 1..rpo.len() {
                let mut new_idom = UNDEF;
                for &p in &preds[b] {
                    if idom[p] == UNDEF {
                        continue;
                    }
                    new_idom = if new_idom == UNDEF {
                        p
                    } else {
                        intersect(&idom, p, new_idom)
                    };
                }
                if new_idom != idom[b] {
                    idom[b] = new_idom;
                    changed = true;
                }
            }
        }
        IndexTree {
            rpo_index,
            idom,
            rpo,
        }
    }
}

fn intersect(idom: &[usize], mut a: usize, mut b: usize) -> usize {
    while a != b {
        while a > b {
            a = idom[a];
        }
        while b > a {
            b = idom[b];
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// `a` dominates `b` iff `b` is unreachable from the entry once `a` is
    /// removed (for `a != b`, both reachable).
    fn brute_force_dominates(succs: &[Vec<usize>], a: usize, b: usize) -> bool {
        let reach = |blocked: Option<usize>| {
            let mut seen = vec![false; succs.len()];
            let mut stack = vec![0];
            if blocked == Some(0) {
                return seen;
            }
            seen[0] = true;
            while let Some(n) = stack.pop() {
                for &s in &succs[n] {
                    if !seen[s] && Some(s) != blocked {
                        seen[s] = true;
                        stack.push(s);
                    }
                }
            }
            seen
        };
        let all = reach(None);
        if !all[a] || !all[b] {
            return false;
        }
        a == b || !reach(Some(a))[b]
    }

    fn tree_dominates(t: &IndexTree, a: usize, b: usize) -> bool {
        let (Some(&ai), Some(&bi)) = (t.rpo_index.get(&a), t.rpo_index.get(&b)) else {
            return false;
        };
        let mut cur = bi;
        loop {
            if cur == ai {
                return true;
            }
            if cur == 0 {
                return false;
            }
            cur = t.idom[cur];
        }
    }

    #[test]
    fn diamond() {
        let succs = vec![vec![1, 2], vec![3], vec![3], vec![]];
        let t = DominatorTree::from_successors(4, &succs);
        assert!(tree_dominates(&t, 0, 3));
        assert!(!tree_dominates(&t, 1, 3));
        assert!(!tree_dominates(&t, 2, 3));
        assert!(tree_dominates(&t, 1, 1));
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            n in 1usize..9,
            edges in proptest::collection::vec((0usize..9, 0usize..9), 0..20),
        ) {
            let mut succs = vec![Vec::new(); n];
            for (a, b) in edges {
                if a < n && b < n {
                    succs[a].push(b);
                }
            }
            let t = DominatorTree::from_successors(n, &succs);
            for a in 0..n {
                for b in 0..n {
                    prop_assert_eq!(
                        tree_dominates(&t, a, b),
                        brute_force_dominates(&succs, a, b),
                        "a={} b={} succs={:?}", a, b, succs
                    );
                }
            }
        }
    }
}
