//! Ground truth by execution.
//!
//! [`merge_sort_count`] is top-down MergeSort that splits off the first
//! `⌊n/2⌋` keys and counts every key-vs-key comparison made by its merges.
//! Index and bound checks are not counted. The generators produce inputs
//! that drive it to `B(n)`, to `W(n)`, or somewhere in between.

use crate::error::{Error, Result};

/// Result of an instrumented sort.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortTrace<T> {
    pub output: Vec<T>,
    pub comparisons: u64,
    pub n: usize,
}

/// Two-pointer merge of two non-decreasing runs, counting key comparisons.
///
/// Ties take from `a`, so the merge is stable.
pub fn merge_count<T: Ord + Clone>(a: &[T], b: &[T]) -> (Vec<T>, u64) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j, mut comps) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        comps += 1;
        if b[j] < a[i] {
            out.push(b[j].clone());
            j += 1;
        } else {
            out.push(a[i].clone());
            i += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    (out, comps)
}

fn sort_rec<T: Ord + Clone>(input: &[T], comps: &mut u64) -> Vec<T> {
    if input.len() <= 1 {
        return input.to_vec();
    }
    let (left, right) = input.split_at(input.len() / 2);
    let left = sort_rec(left, comps);
    let right = sort_rec(right, comps);
    let (merged, c) = merge_count(&left, &right);
    *comps += c;
    merged
}

/// Sorts a copy of `input` and reports the number of key comparisons.
pub fn merge_sort_count<T: Ord + Clone>(input: &[T]) -> SortTrace<T> {
    let mut comparisons = 0;
    let output = sort_rec(input, &mut comparisons);
    SortTrace {
        output,
        comparisons,
        n: input.len(),
    }
}

fn positive(n: usize, op: &'static str) -> Result<()> {
    if n == 0 {
        Err(Error::ZeroArgument { op })
    } else {
        Ok(())
    }
}

/// `0, 1, …, n−1`: every merge it triggers is a best case.
pub fn best_case_input(n: usize) -> Result<Vec<i64>> {
    positive(n, "best_case_input")?;
    Ok((0..n as i64).collect())
}

/// A permutation of `0..n` on which MergeSort makes `W(n)` comparisons.
///
/// The odd-indexed sorted values go to the first `⌊n/2⌋` slots and the
/// even-indexed ones to the rest, recursively. The two largest values then
/// land in different halves and every merge interleaves completely. Blocks of
/// two or fewer are left ascending.
pub fn worst_case_input(n: usize) -> Result<Vec<i64>> {
    positive(n, "worst_case_input")?;
    let values: Vec<i64> = (0..n as i64).collect();
    let mut out = Vec::with_capacity(n);
    arrange_worst(&values, &mut out);
    Ok(out)
}

fn arrange_worst(values: &[i64], out: &mut Vec<i64>) {
    if values.len() <= 2 {
        out.extend_from_slice(values);
        return;
    }
    let odd: Vec<i64> = values.iter().skip(1).step_by(2).copied().collect();
    let even: Vec<i64> = values.iter().step_by(2).copied().collect();
    arrange_worst(&odd, out);
    arrange_worst(&even, out);
}

/// SplitMix64, used for seeded permutations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Seeded Fisher–Yates shuffle of `0..n`; the same seed gives the same permutation.
pub fn random_input(n: usize, seed: u64) -> Result<Vec<i64>> {
    positive(n, "random_input")?;
    let mut rng = SplitMix64::new(seed);
    let mut v: Vec<i64> = (0..n as i64).collect();
    for i in (1..n).rev() {
        let j = (rng.next_u64() % (i as u64 + 1)) as usize;
        v.swap(i, j);
    }
    Ok(v)
}

/// One call of MergeSort in the recursion tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeNode {
    /// Length of the subarray this call receives.
    pub size: u64,
    /// Indices of the two child calls, absent for leaves.
    pub children: Option<(usize, usize)>,
}

/// The size-labelled 2-tree of recursive MergeSort calls.
#[derive(Debug, Clone)]
pub struct RecursionTree {
    nodes: Vec<TreeNode>,
    /// Node indices per level, left to right.
    levels: Vec<Vec<usize>>,
}

impl RecursionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, index: usize) -> &TreeNode {
        &self.nodes[index]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Index of the last level.
    pub fn depth(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn level_sizes(&self, level: usize) -> Vec<u64> {
        self.levels[level]
            .iter()
            .map(|&i| self.nodes[i].size)
            .collect()
    }

    pub fn level_widths(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    /// Largest minus smallest size on a level.
    pub fn level_spread(&self, level: usize) -> u64 {
        let sizes = self.level_sizes(level);
        let max = sizes.iter().max().copied().unwrap_or(0);
        let min = sizes.iter().min().copied().unwrap_or(0);
        max - min
    }

    /// Worst-case comparisons made on a level: `Σ (size − 1)` over its nodes.
    pub fn level_worst_comps(&self, level: usize) -> u64 {
        self.level_sizes(level).iter().map(|s| s - 1).sum()
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.children.is_none()).count()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.children.is_none())
    }
}

/// Builds the recursion tree for an `n`-element call; it has `2n − 1` nodes.
pub fn build_tree(n: u64) -> Result<RecursionTree> {
    if n == 0 {
        return Err(Error::ZeroArgument { op: "build_tree" });
    }
    let mut nodes = vec![TreeNode {
        size: n,
        children: None,
    }];
    let mut levels = vec![vec![0usize]];
    loop {
        let mut next = Vec::new();
        for &idx in levels.last().expect("at least the root level") {
            let size = nodes[idx].size;
            if size >= 2 {
                let left = nodes.len();
                nodes.push(TreeNode {
                    size: size / 2,
                    children: None,
                });
                nodes.push(TreeNode {
                    size: size - size / 2,
                    children: None,
                });
                nodes[idx].children = Some((left, left + 1));
                next.extend([left, left + 1]);
            }
        }
        if next.is_empty() {
            break;
        }
        levels.push(next);
    }
    Ok(RecursionTree { nodes, levels })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_examples() {
        assert_eq!(merge_count(&[0, 1], &[2, 3]), (vec![0, 1, 2, 3], 2));
        assert_eq!(merge_count(&[1, 3], &[0, 2]), (vec![0, 1, 2, 3], 3));
        assert_eq!(merge_count::<i32>(&[], &[5]), (vec![5], 0));
        assert_eq!(merge_count::<i32>(&[], &[]), (vec![], 0));
    }

    #[test]
    fn merge_is_stable() {
        let a = [(1, 'a'), (2, 'a')];
        let b = [(1, 'b')];
        // compare on key only
        #[derive(Clone, Debug, PartialEq, Eq)]
        struct K(i32, char);
        impl PartialOrd for K {
            fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for K {
            fn cmp(&self, o: &Self) -> std::cmp::Ordering {
                self.0.cmp(&o.0)
            }
        }
        let a: Vec<K> = a.iter().map(|&(k, c)| K(k, c)).collect();
        let b: Vec<K> = b.iter().map(|&(k, c)| K(k, c)).collect();
        let (out, _) = merge_count(&a, &b);
        assert_eq!(out[0].1, 'a');
        assert_eq!(out[1].1, 'b');
    }

    #[test]
    fn sort_examples() {
        assert_eq!(merge_sort_count(&[0, 1, 2, 3]).comparisons, 4);
        let t = merge_sort_count(&[1, 3, 0, 2]);
        assert_eq!(t.comparisons, 5);
        assert_eq!(t.output, vec![0, 1, 2, 3]);
        assert_eq!(merge_sort_count(&[7]).comparisons, 0);
        let empty: SortTrace<i32> = merge_sort_count(&[]);
        assert_eq!((empty.n, empty.comparisons), (0, 0));
    }

    #[test]
    fn generator_examples() {
        assert_eq!(best_case_input(4).unwrap(), vec![0, 1, 2, 3]);
        assert_eq!(best_case_input(1).unwrap(), vec![0]);
        assert_eq!(
            merge_sort_count(&best_case_input(5).unwrap()).comparisons,
            5
        );
        assert_eq!(worst_case_input(4).unwrap(), vec![1, 3, 0, 2]);
        assert_eq!(
            merge_sort_count(&worst_case_input(2).unwrap()).comparisons,
            1
        );
        let w8 = worst_case_input(8).unwrap();
        let mut sorted = w8.clone();
        sorted.sort();
        assert_eq!(sorted, (0..8).collect::<Vec<_>>());
        assert_eq!(merge_sort_count(&w8).comparisons, 17);
        assert!(best_case_input(0).is_err());
        assert!(worst_case_input(0).is_err());
        assert!(random_input(0, 1).is_err());
    }

    #[test]
    fn random_is_deterministic() {
        assert_eq!(random_input(1, 99).unwrap(), vec![0]);
        assert_eq!(random_input(5, 7).unwrap(), random_input(5, 7).unwrap());
        assert_ne!(random_input(50, 1).unwrap(), random_input(50, 2).unwrap());
    }

    #[test]
    fn splitmix_reference_values() {
        // Reference outputs of SplitMix64 seeded with 0.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
    }

    #[test]
    fn tree_examples() {
        let t = build_tree(5).unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(t.level_widths(), vec![1, 2, 4, 2]);
        assert_eq!(t.level_sizes(2), vec![1, 1, 1, 2]);
        assert_eq!(t.leaf_count(), 5);
        let t = build_tree(1).unwrap();
        assert_eq!(t.depth(), 0);
        assert_eq!(t.node_count(), 1);
        assert!(t.root().children.is_none());
        let t = build_tree(8).unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(t.level_widths(), vec![1, 2, 4, 8]);
        assert!(build_tree(0).is_err());
    }
}
