use std::collections::VecDeque;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::error::HistoryError;

/// Values of the integrated variables (or their derivatives) at one abscissa.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateVector(pub Vec<f64>);

impl StateVector {
    pub fn zeros(dim: usize) -> Self {
        StateVector(vec![0.0; dim])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for StateVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for StateVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl From<Vec<f64>> for StateVector {
    fn from(v: Vec<f64>) -> Self {
        StateVector(v)
    }
}

impl From<&[f64]> for StateVector {
    fn from(v: &[f64]) -> Self {
        StateVector(v.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub x: f64,
    pub y: StateVector,
    /// Derivative at `(x, y)`; in the corrected modes `y` is the corrected state.
    pub dy: StateVector,
}

/// Bounded window of the most recent accepted nodes, oldest first.
#[derive(Debug, Clone)]
pub struct NodeHistory {
    nodes: VecDeque<Node>,
    capacity: usize,
    dim: Option<usize>,
}

impl NodeHistory {
    pub fn new(capacity: usize) -> Result<Self, HistoryError> {
        if capacity == 0 {
            return Err(HistoryError::ZeroCapacity);
        }
        Ok(NodeHistory {
            nodes: VecDeque::with_capacity(capacity),
            capacity,
            dim: None,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dim
    }

    pub fn latest(&self) -> Option<&Node> {
        self.nodes.back()
    }

    /// Appends a node, evicting the oldest one when full.
    pub fn push(&mut self, node: Node) -> Result<(), HistoryError> {
        if let Some(last) = self.nodes.back() {
            if !(node.x > last.x) {
                return Err(HistoryError::NotIncreasing {
                    last: last.x,
                    next: node.x,
                });
            }
        }
        let expected = *self.dim.get_or_insert(node.y.len());
        for got in [node.y.len(), node.dy.len()] {
            if got != expected {
                return Err(HistoryError::Dimension { expected, got });
            }
        }
        if self.nodes.len() == self.capacity {
            self.nodes.pop_front();
        }
        self.nodes.push_back(node);
        Ok(())
    }

    /// The `count` most recent nodes, oldest first. Clamped to what is stored.
    pub fn window(&self, count: usize) -> impl Iterator<Item = &Node> + Clone {
        let skip = self.nodes.len().saturating_sub(count);
        self.nodes.iter().skip(skip)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }
}
