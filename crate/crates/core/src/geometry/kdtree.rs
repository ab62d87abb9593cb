//! Exact nearest-neighbour index.
//!
//! A median-split kd-tree over a copy of the cloud. Distances are computed with
//! the same summation order as [`super::sq_dist`], and pruning uses the single
//! splitting-axis bound (which never exceeds the computed squared distance of a
//! point beyond the plane), so every query returns exactly what a brute-force
//! scan would, ties included.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{sq_dist, PointCloud};

const LEAF_SIZE: usize = 16;

/// Above this dimension the tree degenerates to a single leaf (brute force).
pub const MAX_TREE_DIM: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub index: usize,
    pub distance: f64,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: f64, left: usize, right: usize },
}

#[derive(Debug, Clone)]
pub struct KdTree {
    dim: usize,
    /// Points in tree order.
    coords: Vec<f64>,
    /// Original index of each point in tree order.
    ids: Vec<usize>,
    nodes: Vec<Node>,
}

/// Heap entry ordered by (squared distance, index).
#[derive(Debug, Clone, Copy)]
struct Candidate {
    sq: f64,
    index: usize,
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
    fn cmp(&self, other: &Self) -> Ordering {
        self.sq.total_cmp(&other.sq).then(self.index.cmp(&other.index))
    }
}

impl KdTree {
    pub fn new(cloud: &PointCloud) -> Self {
        let dim = cloud.dim();
        let mut order: Vec<usize> = (0..cloud.len()).collect();
        let mut nodes = Vec::new();
        if !order.is_empty() {
            if dim > MAX_TREE_DIM {
                nodes.push(Node::Leaf { start: 0, end: order.len() });
            } else {
                build(cloud, &mut order, 0, &mut nodes);
            }
        }
        let mut coords = Vec::with_capacity(cloud.len() * dim);
        for &i in &order {
            coords.extend_from_slice(cloud.point(i));
        }
        KdTree { dim, coords, ids: order, nodes }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn point(&self, slot: usize) -> &[f64] {
        &self.coords[slot * self.dim..(slot + 1) * self.dim]
    }

    /// The `k` nearest points, sorted by (distance, index).
    pub fn knn(&self, query: &[f64], k: usize) -> Vec<Neighbor> {
        self.knn_excluding(query, k, None)
    }

    /// Like [`KdTree::knn`], but never returns the point with index `exclude`.
    pub fn knn_excluding(&self, query: &[f64], k: usize, exclude: Option<usize>) -> Vec<Neighbor> {
        debug_assert_eq!(query.len(), self.dim);
        if k == 0 || self.nodes.is_empty() {
            return Vec::new();
        }
        let mut heap = BinaryHeap::with_capacity(k + 1);
        self.knn_rec(0, query, k, exclude, &mut heap);
        let mut found = heap.into_vec();
        found.sort();
        found
            .into_iter()
            .map(|c| Neighbor { index: c.index, distance: c.sq.sqrt() })
            .collect()
    }

    fn knn_rec(
        &self,
        node: usize,
        query: &[f64],
        k: usize,
        exclude: Option<usize>,
        heap: &mut BinaryHeap<Candidate>,
    ) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for slot in start..end {
                    let index = self.ids[slot];
                    if Some(index) == exclude {
                        continue;
                    }
                    let cand = Candidate { sq: sq_dist(query, self.point(slot)), index };
                    if heap.len() < k {
                        heap.push(cand);
                    } else if cand < *heap.peek().expect("heap is full") {
                        heap.pop();
                        heap.push(cand);
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = query[axis] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.knn_rec(near, query, k, exclude, heap);
                let plane = diff * diff;
                if heap.len() < k || plane <= heap.peek().expect("heap is full").sq {
                    self.knn_rec(far, query, k, exclude, heap);
                }
            }
        }
    }

    /// Nearest point other than `exclude`, if any.
    pub fn nearest_excluding(&self, query: &[f64], exclude: Option<usize>) -> Option<Neighbor> {
        self.knn_excluding(query, 1, exclude).into_iter().next()
    }

    /// All points with squared distance `<= radius_sq`, sorted by index.
    pub fn within_sq(&self, query: &[f64], radius_sq: f64) -> Vec<Neighbor> {
        let mut out = self.within_sq_unordered(query, radius_sq);
        out.sort_by_key(|nb| nb.index);
        out
    }

    /// Same set as [`KdTree::within_sq`] in tree order.
    pub(crate) fn within_sq_unordered(&self, query: &[f64], radius_sq: f64) -> Vec<Neighbor> {
        let mut out = Vec::new();
        if !self.nodes.is_empty() {
            self.range_rec(0, query, radius_sq, &mut out);
        }
        out.into_iter()
            .map(|c| Neighbor { index: c.index, distance: c.sq.sqrt() })
            .collect()
    }

    fn range_rec(&self, node: usize, query: &[f64], radius_sq: f64, out: &mut Vec<Candidate>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for slot in start..end {
                    let sq = sq_dist(query, self.point(slot));
                    if sq <= radius_sq {
                        out.push(Candidate { sq, index: self.ids[slot] });
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = query[axis] - value;
                let (near, far) = if diff <= 0.0 { (left, right) } else { (right, left) };
                self.range_rec(near, query, radius_sq, out);
                if diff * diff <= radius_sq {
                    self.range_rec(far, query, radius_sq, out);
                }
            }
        }
    }
}

/// Builds the subtree over `order[..]`, whose slots start at `offset` in the final layout.
fn build(cloud: &PointCloud, order: &mut [usize], offset: usize, nodes: &mut Vec<Node>) -> usize {
    let id = nodes.len();
    if order.len() <= LEAF_SIZE {
        nodes.push(Node::Leaf { start: offset, end: offset + order.len() });
        return id;
    }
    let axis = widest_axis(cloud, order);
    let mid = order.len() / 2;
    order.select_nth_unstable_by(mid, |&a, &b| {
        cloud.point(a)[axis].total_cmp(&cloud.point(b)[axis])
    });
    let value = cloud.point(order[mid])[axis];
    // Placeholder, patched once both children exist.
    nodes.push(Node::Leaf { start: 0, end: 0 });
    let (lo, hi) = order.split_at_mut(mid);
    // Everything in `lo` is <= value and everything in `hi` is >= value.
    let left = build(cloud, lo, offset, nodes);
    let right = build(cloud, hi, offset + mid, nodes);
    nodes[id] = Node::Split { axis, value, left, right };
    id
}

fn widest_axis(cloud: &PointCloud, order: &[usize]) -> usize {
    let dim = cloud.dim();
    let mut best = (0, f64::NEG_INFINITY);
    for axis in 0..dim {
        let (lo, hi) = order.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
            let v = cloud.point(i)[axis];
            (lo.min(v), hi.max(v))
        });
        if hi - lo > best.1 {
            best = (axis, hi - lo);
        }
    }
    best.0
}
