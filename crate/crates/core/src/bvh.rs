//! Bounding-volume hierarchy over boxed items (median split on the longest
//! axis). Used for polygon edges by the emptiness, point-location and
//! nearest-site layers, and by scene validation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::ControlFlow;

use crate::geom::{BBox, Point};

pub const DEFAULT_LEAF_SIZE: usize = 4;

#[derive(Clone, Debug)]
enum NodeKind {
    Leaf { start: u32, end: u32 },
    Inner { left: u32, right: u32 },
}

#[derive(Clone, Debug)]
struct Node {
    bbox: BBox,
    kind: NodeKind,
}

#[derive(Clone, Debug)]
pub struct Bvh {
    nodes: Vec<Node>,
    items: Vec<u32>,
}

impl Bvh {
    pub fn build(boxes: &[BBox], leaf_size: usize) -> Bvh {
        let leaf_size = leaf_size.max(1);
        let mut items: Vec<u32> = (0..boxes.len() as u32).collect();
        let centers: Vec<Point> = boxes.iter().map(BBox::center).collect();
        let mut nodes = Vec::with_capacity(2 * boxes.len() / leaf_size + 1);
        if !boxes.is_empty() {
            build_rec(boxes, &centers, &mut items, 0, leaf_size, &mut nodes);
        }
        Bvh { nodes, items }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn bounds(&self) -> BBox {
        self.nodes.first().map_or(BBox::EMPTY, |n| n.bbox)
    }

    /// Depth-first traversal. `enter` decides whether a node's box is worth
    /// descending into; `visit` sees each item of every entered leaf and may
    /// stop the traversal early.
    pub fn traverse<B>(
        &self,
        mut enter: impl FnMut(&BBox) -> bool,
        mut visit: impl FnMut(u32) -> ControlFlow<B>,
    ) -> Option<B> {
        if self.nodes.is_empty() {
            return None;
        }
        let mut stack = vec![0u32];
        while let Some(i) = stack.pop() {
            let node = &self.nodes[i as usize];
            if !enter(&node.bbox) {
                continue;
            }
            match node.kind {
                NodeKind::Leaf { start, end } => {
                    for &item in &self.items[start as usize..end as usize] {
                        if let ControlFlow::Break(b) = visit(item) {
                            return Some(b);
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    stack.push(right);
                    stack.push(left);
                }
            }
        }
        None
    }

    /// Best-first branch and bound. `lower_bound` must never exceed the
    /// value `eval` returns for any item inside the box. Nodes are pruned
    /// only when their bound is strictly above the best value seen, so every
    /// item attaining the minimum is passed to `eval`.
    pub fn best_first(&self, lower_bound: impl Fn(&BBox) -> f64, mut eval: impl FnMut(u32) -> f64) {
        if self.nodes.is_empty() {
            return;
        }
        let mut best = f64::INFINITY;
        let mut heap = BinaryHeap::new();
        heap.push(Candidate {
            bound: lower_bound(&self.nodes[0].bbox),
            node: 0,
        });
        while let Some(Candidate { bound, node }) = heap.pop() {
            if bound > best {
                break;
            }
            match self.nodes[node as usize].kind {
                NodeKind::Leaf { start, end } => {
                    for &item in &self.items[start as usize..end as usize] {
                        let d = eval(item);
                        if d < best {
                            best = d;
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    for child in [left, right] {
                        let b = lower_bound(&self.nodes[child as usize].bbox);
                        if b <= best {
                            heap.push(Candidate {
                                bound: b,
                                node: child,
                            });
                        }
                    }
                }
            }
        }
    }
}

fn build_rec(
    boxes: &[BBox],
    centers: &[Point],
    items: &mut [u32],
    offset: usize,
    leaf_size: usize,
    nodes: &mut Vec<Node>,
) -> u32 {
    let bbox = items
        .iter()
        .fold(BBox::EMPTY, |b, &i| b.union(boxes[i as usize]));
    let index = nodes.len() as u32;
    if items.len() <= leaf_size {
        nodes.push(Node {
            bbox,
            kind: NodeKind::Leaf {
                start: offset as u32,
                end: (offset + items.len()) as u32,
            },
        });
        return index;
    }
    let spread = items
        .iter()
        .fold(BBox::EMPTY, |b, &i| b.include(centers[i as usize]));
    let along_x = spread.max.x - spread.min.x >= spread.max.y - spread.min.y;
    let key = |i: &u32| {
        let c = centers[*i as usize];
        if along_x {
            c.x
        } else {
            c.y
        }
    };
    let mid = items.len() / 2;
    items.select_nth_unstable_by(mid, |a, b| key(a).total_cmp(&key(b)));
    // placeholder, patched once children exist
    nodes.push(Node {
        bbox,
        kind: NodeKind::Leaf { start: 0, end: 0 },
    });
    let (lo, hi) = items.split_at_mut(mid);
    let left = build_rec(boxes, centers, lo, offset, leaf_size, nodes);
    let right = build_rec(boxes, centers, hi, offset + mid, leaf_size, nodes);
    nodes[index as usize].kind = NodeKind::Inner { left, right };
    index
}

#[derive(Clone, Copy, Debug)]
struct Candidate {
    bound: f64,
    node: u32,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // min-heap on bound, ties by node index
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.node.cmp(&self.node))
    }
}
