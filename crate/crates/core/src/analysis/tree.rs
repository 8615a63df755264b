use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::scene::{TestInput, GENE_COUNT, GENE_NAMES};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 3,
            min_leaf: 10,
        }
    }
}

/// Binary classification tree over test inputs. `true` means violation.
///
/// The text rendering (`Display`) prints one line per branch condition and
/// one per leaf with its label and `False`/`True` class counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TreeNode {
    Split {
        gene: usize,
        gene_name: String,
        /// Samples with `gene < threshold` go left.
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        label: bool,
        samples: usize,
        /// `[safe, violation]`.
        counts: [usize; 2],
    },
}

impl TreeNode {
    pub fn predict(&self, input: &TestInput) -> bool {
        match self {
            TreeNode::Leaf { label, .. } => *label,
            TreeNode::Split {
                gene,
                threshold,
                left,
                right,
                ..
            } => {
                if input.gene(*gene) < *threshold {
                    left.predict(input)
                } else {
                    right.predict(input)
                }
            }
        }
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        match self {
            TreeNode::Leaf { .. } => alloc::vec![self],
            TreeNode::Split { left, right, .. } => {
                let mut v = left.leaves();
                v.extend(right.leaves());
                v
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 0,
            TreeNode::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }

    fn render(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            TreeNode::Leaf { label, samples, counts } => writeln!(
                f,
                "{pad}-> {} (n={samples}; False={}, True={})",
                if *label { "True" } else { "False" },
                counts[0],
                counts[1]
            ),
            TreeNode::Split {
                gene_name,
                threshold,
                left,
                right,
                ..
            } => {
                writeln!(f, "{pad}{gene_name} < {}", fmt_threshold(*threshold))?;
                left.render(f, indent + 1)?;
                writeln!(f, "{pad}{gene_name} >= {}", fmt_threshold(*threshold))?;
                right.render(f, indent + 1)
            }
        }
    }
}

fn fmt_threshold(t: f64) -> String {
    format!("{t:.4}")
}

impl fmt::Display for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.render(f, 0)
    }
}

fn gini(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = counts[1] as f64 / n;
    2.0 * p * (1.0 - p)
}

fn count(labels: &[bool], idx: &[usize]) -> [usize; 2] {
    let v = idx.iter().filter(|&&i| labels[i]).count();
    [idx.len() - v, v]
}

/// Fits a CART tree with Gini impurity.
///
/// Candidate thresholds are midpoints between consecutive distinct gene
/// values. A split must leave at least `min_leaf` samples on each side and
/// strictly lower the weighted impurity.
pub fn tree_fit(inputs: &[TestInput], labels: &[bool], params: TreeParams) -> Result<TreeNode> {
    if inputs.len() != labels.len() {
        return Err(Error::DimensionMismatch {
            expected: inputs.len(),
            found: labels.len(),
        });
    }
    let min_leaf = params.min_leaf.max(1);
    if inputs.is_empty() || inputs.len() < min_leaf {
        return Err(Error::InsufficientData {
            needed: min_leaf.max(1),
            found: inputs.len(),
        });
    }
    let idx: Vec<usize> = (0..inputs.len()).collect();
    Ok(grow(inputs, labels, idx, params.max_depth, min_leaf))
}

fn grow(inputs: &[TestInput], labels: &[bool], idx: Vec<usize>, depth_left: usize, min_leaf: usize) -> TreeNode {
    let counts = count(labels, &idx);
    let impurity = gini(counts);
    let leaf = || TreeNode::Leaf {
        label: counts[1] >= counts[0],
        samples: idx.len(),
        counts,
    };
    if depth_left == 0 || impurity == 0.0 || idx.len() < 2 * min_leaf {
        return leaf();
    }

    let n = idx.len();
    let mut best: Option<(f64, usize, f64)> = None;
    for gene in 0..GENE_COUNT {
        let mut sorted = idx.clone();
        sorted.sort_by(|&a, &b| inputs[a].gene(gene).total_cmp(&inputs[b].gene(gene)).then(a.cmp(&b)));
        let mut left = [0usize; 2];
        let mut right = counts;
        for k in 0..n - 1 {
            let l = labels[sorted[k]] as usize;
            left[l] += 1;
            right[l] -= 1;
            let (lo, hi) = (inputs[sorted[k]].gene(gene), inputs[sorted[k + 1]].gene(gene));
            if lo == hi || k + 1 < min_leaf || n - k - 1 < min_leaf {
                continue;
            }
            let w = ((k + 1) as f64 * gini(left) + (n - k - 1) as f64 * gini(right)) / n as f64;
            if best.is_none_or(|(b, _, _)| w < b - 1e-12) {
                best = Some((w, gene, lo + (hi - lo) / 2.0));
            }
        }
    }

    match best {
        Some((w, gene, threshold)) if w < impurity - 1e-12 => {
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| inputs[i].gene(gene) < threshold);
            TreeNode::Split {
                gene,
                gene_name: String::from(GENE_NAMES[gene]),
                threshold,
                left: Box::new(grow(inputs, labels, l, depth_left - 1, min_leaf)),
                right: Box::new(grow(inputs, labels, r, depth_left - 1, min_leaf)),
            }
        }
        _ => leaf(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seeded_rng;
    use proptest::prelude::*;
    use rand::Rng;

    fn random_inputs(n: usize, seed: u64) -> Vec<TestInput> {
        let mut rng = seeded_rng(seed);
        (0..n)
            .map(|_| {
                TestInput::new(
                    rng.random_range(1.0..25.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-15.0..-2.0),
                    rng.random_range(40.0..160.0),
                    rng.random_range(1.0..5.0),
                )
            })
            .collect()
    }

    #[test]
    fn single_class_is_one_leaf() {
        let xs = random_inputs(50, 1);
        let t = tree_fit(&xs, &[true; 50], TreeParams::default()).unwrap();
        assert_eq!(
            t,
            TreeNode::Leaf {
                label: true,
                samples: 50,
                counts: [0, 50]
            }
        );
    }

    #[test]
    fn recovers_one_dimensional_split() {
        let xs = random_inputs(500, 2);
        let ys: Vec<bool> = xs.iter().map(|x| x.x0p >= 0.0).collect();
        match tree_fit(&xs, &ys, TreeParams::default()).unwrap() {
            TreeNode::Split { gene, threshold, .. } => {
                assert_eq!(gene, 1);
                assert!(threshold.abs() < 0.05, "{threshold}");
            }
            leaf => panic!("expected a split, got {leaf:?}"),
        }
    }

    #[test]
    fn recovers_speed_threshold() {
        let xs = random_inputs(500, 3);
        let ys: Vec<bool> = xs.iter().map(|x| x.v0c >= 20.0).collect();
        match tree_fit(&xs, &ys, TreeParams::default()).unwrap() {
            TreeNode::Split { gene, threshold, .. } => {
                assert_eq!(gene, 0);
                assert!((19.0..=21.0).contains(&threshold));
            }
            leaf => panic!("expected a split, got {leaf:?}"),
        }
    }

    #[test]
    fn insufficient_data() {
        let xs = random_inputs(5, 4);
        assert_eq!(
            tree_fit(&xs, &[false; 5], TreeParams::default()),
            Err(Error::InsufficientData { needed: 10, found: 5 })
        );
    }

    #[test]
    fn tie_goes_to_violation() {
        let xs = random_inputs(10, 5);
        let ys: Vec<bool> = (0..10).map(|i| i % 2 == 0).collect();
        let t = tree_fit(
            &xs,
            &ys,
            TreeParams {
                max_depth: 0,
                min_leaf: 1,
            },
        )
        .unwrap();
        assert!(matches!(
            t,
            TreeNode::Leaf {
                label: true,
                counts: [5, 5],
                ..
            }
        ));
    }

    #[test]
    fn text_rendering_lists_leaf_counts() {
        let xs = random_inputs(200, 6);
        let ys: Vec<bool> = xs.iter().map(|x| x.v0c >= 20.0).collect();
        let t = tree_fit(&xs, &ys, TreeParams::default()).unwrap();
        let text = alloc::format!("{t}");
        assert!(text.starts_with("v0c < "));
        assert!(text.contains("True="));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn partition_and_baseline(seed in any::<u64>(), n in 10usize..120, depth in 0usize..5, min_leaf in 1usize..10) {
            let xs = random_inputs(n, seed);
            let mut rng = seeded_rng(seed ^ 0xABCD);
            let ys: Vec<bool> = xs.iter().map(|x| x.v0c + rng.random_range(-5.0..5.0) > 15.0).collect();
            let t = tree_fit(&xs, &ys, TreeParams { max_depth: depth, min_leaf }).unwrap();
            prop_assert!(t.depth() <= depth);
            let total: usize = t.leaves().iter().map(|l| match l { TreeNode::Leaf { samples, .. } => *samples, _ => 0 }).sum();
            prop_assert_eq!(total, n);
            for leaf in t.leaves() {
                if let TreeNode::Leaf { samples, .. } = leaf {
                    prop_assert!(*samples >= min_leaf);
                }
            }
            let correct = xs.iter().zip(&ys).filter(|(x, y)| t.predict(x) == **y).count();
            let positives = ys.iter().filter(|&&y| y).count();
            prop_assert!(correct >= positives.max(n - positives));
        }
    }
}
