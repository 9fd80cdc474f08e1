//! Castling transformations, minimality, descent, equivalence, and the
//! castling tree.
//!
//! A castling transformation replaces one entry `a_j` of a tuple by
//! `Π_{i≠j} a_i − a_j`. It preserves prehomogeneity and the invariant N,
//! and every castling class contains a unique element of minimal positive
//! dimension, which [`minimize`] finds by repeated product-decreasing steps.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::tuple::TensorTuple;

/// One castling transformation, recorded with enough detail to audit it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CastlingStep {
    /// The tuple the step was applied to, in canonical form.
    pub source: TensorTuple,
    /// Index of the replaced entry in the canonical order of `source`.
    pub replaced_index: usize,
    /// `q = Π_{i≠j} a_i`, the product of the untouched entries.
    #[serde(with = "crate::tuple::serde_big::biguint")]
    pub complement_product: BigUint,
    /// The replaced entry `a_j`.
    #[serde(with = "crate::tuple::serde_big::biguint")]
    pub old_value: BigUint,
    /// The replacement `q − a_j`.
    #[serde(with = "crate::tuple::serde_big::biguint")]
    pub new_value: BigUint,
    /// The resulting tuple, canonicalized.
    pub result: TensorTuple,
}

/// The ordered list of castling steps from a tuple down to the minimal
/// element of its class. Dimension strictly decreases along the steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentTrace {
    pub steps: Vec<CastlingStep>,
    pub terminal: TensorTuple,
}

impl DescentTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Applies the castling transformation at entry `index` of the canonical
/// form of `t`.
///
/// Fails with [`Error::NegativeResult`] when `Π_{i≠j} a_i < a_j`; the
/// transform is only defined for non-negative results. A zero result is
/// allowed here (e.g. `(1,1,1)` castles to `(0,1,1)`); descent simply never
/// takes such a step.
///
/// # Panics
///
/// Panics if `index >= t.len()`.
pub fn castle_at(t: &TensorTuple, index: usize) -> Result<CastlingStep, Error> {
    let source = t.canonicalize();
    assert!(index < source.len(), "castling index out of range");
    let entries = source.entries();
    let old_value = entries[index].clone();
    let complement_product = entries
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .fold(BigUint::one(), |acc, (_, a)| acc * a);
    if complement_product < old_value {
        return Err(Error::NegativeResult {
            index,
            complement_product,
            old_value,
        });
    }
    let new_value = &complement_product - &old_value;
    let mut result_entries = entries.to_vec();
    result_entries[index] = new_value.clone();
    let result = TensorTuple::new(result_entries)
        .expect("castling preserves tuple length")
        .canonicalize();
    Ok(CastlingStep {
        source,
        replaced_index: index,
        complement_product,
        old_value,
        new_value,
        result,
    })
}

/// The unique product-decreasing, all-positive castling step available at
/// `t`, if any.
///
/// A step at `j` decreases the dimension exactly when `new < old`, i.e.
/// `q < 2·a_j`; that forces either `a_j` maximal or the tuple to be of the
/// shape `(1,…,1,b,c)` with `b < c < 2b`, where the step at `b` descends.
/// In both cases all available decreasing steps agree on the resulting
/// multiset, so taking the first index is canonical.
fn descending_step(t: &TensorTuple) -> Option<CastlingStep> {
    (0..t.len()).find_map(|j| match castle_at(t, j) {
        Ok(step) if !step.new_value.is_zero() && step.new_value < step.old_value => Some(step),
        _ => None,
    })
}

/// Whether no castling step strictly decreases the (positive) dimension.
///
/// Expects all entries positive; zero-dimension results do not count as
/// smaller (minimality means minimal *positive* dimension, so `(1,1,1)` and
/// `(2,2,4)` are minimal).
///
/// # Panics
///
/// Panics if any entry is zero.
pub fn is_minimal(t: &TensorTuple) -> bool {
    let t = t.canonicalize();
    assert!(t.all_positive(), "is_minimal requires positive entries");
    descending_step(&t).is_none()
}

/// Descends to the unique minimal element of the castling class of `t`.
///
/// Already-minimal tuples yield an empty trace. The terminal does not
/// depend on exploration order: at every non-minimal tuple all decreasing
/// steps produce the same multiset.
///
/// # Panics
///
/// Panics if any entry is zero.
pub fn minimize(t: &TensorTuple) -> DescentTrace {
    let mut current = t.canonicalize();
    assert!(current.all_positive(), "minimize requires positive entries");
    let mut steps = Vec::new();
    while let Some(step) = descending_step(&current) {
        current = step.result.clone();
        steps.push(step);
    }
    DescentTrace {
        steps,
        terminal: current,
    }
}

/// Whether two tuples lie in the same castling class.
///
/// Castling preserves the number of factors, so tuples of different
/// lengths are never equivalent.
///
/// # Panics
///
/// Panics if any entry of either tuple is zero.
pub fn equivalent(t1: &TensorTuple, t2: &TensorTuple) -> bool {
    t1.len() == t2.len() && minimize(t1).terminal == minimize(t2).terminal
}

/// A node of the castling tree; the root carries no incoming edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    /// The canonical tuple at this node.
    #[serde(rename = "node")]
    pub tuple: TensorTuple,
    /// The invariant N (the same at every node of the tree).
    #[serde(with = "crate::tuple::serde_big::bigint")]
    pub invariant: BigInt,
    pub children: Vec<TreeChild>,
}

/// An edge of the castling tree together with the subtree it leads to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeChild {
    /// Index castled at in the parent's canonical order.
    pub replaced_index: usize,
    /// `q = Π_{i≠j} a_i` of the step that produced this child.
    #[serde(with = "crate::tuple::serde_big::biguint")]
    pub complement_product: BigUint,
    #[serde(flatten)]
    pub node: TreeNode,
}

impl TreeNode {
    /// Total number of nodes in the subtree, including this one.
    pub fn count(&self) -> usize {
        1 + self.children.iter().map(|c| c.node.count()).sum::<usize>()
    }

    /// Renders the tree in Graphviz DOT form. Nodes are labeled with the
    /// canonical tuple and N; edges with the replaced index and q.
    pub fn to_dot(&self) -> String {
        fn walk(node: &TreeNode, id: usize, counter: &mut usize, out: &mut String) {
            out.push_str(&format!(
                "  n{} [label=\"{}\\nN={}\"];\n",
                id, node.tuple, node.invariant
            ));
            for child in &node.children {
                *counter += 1;
                let child_id = *counter;
                out.push_str(&format!(
                    "  n{} -> n{} [label=\"j={}, q={}\"];\n",
                    id, child_id, child.replaced_index, child.complement_product
                ));
                walk(&child.node, child_id, counter, out);
            }
        }
        let mut out = String::from("digraph castling_tree {\n");
        let mut counter = 0;
        walk(self, 0, &mut counter, &mut out);
        out.push_str("}\n");
        out
    }
}

/// Expands the castling tree below `root`.
///
/// Children of a node are the distinct canonical results of valid castling
/// steps with all entries positive and dimension at most `max_dimension`.
/// A child equal (as a multiset) to its parent or to any node on the path
/// back to the root is dropped; that keeps the involution `q − (q − a_j) =
/// a_j` from producing infinite alternation. Nodes at depth `max_depth`
/// are not expanded.
///
/// # Panics
///
/// Panics if any entry of `root` is zero.
pub fn enumerate_tree(
    root: &TensorTuple,
    max_dimension: &BigUint,
    max_depth: usize,
) -> TreeNode {
    let root = root.canonicalize();
    assert!(root.all_positive(), "enumerate_tree requires positive entries");
    let mut path = vec![root.clone()];
    build_node(root, max_dimension, max_depth, 0, &mut path)
}

fn build_node(
    tuple: TensorTuple,
    max_dimension: &BigUint,
    max_depth: usize,
    depth: usize,
    path: &mut Vec<TensorTuple>,
) -> TreeNode {
    let invariant = tuple.invariant_n();
    let mut children = Vec::new();
    if depth < max_depth {
        let mut seen: Vec<TensorTuple> = Vec::new();
        for j in 0..tuple.len() {
            let Ok(step) = castle_at(&tuple, j) else {
                continue;
            };
            if !step.result.all_positive()
                || step.result.dimension() > *max_dimension
                || path.contains(&step.result)
                || seen.contains(&step.result)
            {
                continue;
            }
            seen.push(step.result.clone());
            path.push(step.result.clone());
            let node = build_node(step.result.clone(), max_dimension, max_depth, depth + 1, path);
            path.pop();
            children.push(TreeChild {
                replaced_index: j,
                complement_product: step.complement_product,
                node,
            });
        }
    }
    TreeNode {
        tuple,
        invariant,
        children,
    }
}
