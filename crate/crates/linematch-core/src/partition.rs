//! Decomposition of the merged line into maximal same-side runs.
//!
//! Walking `S ∪ T` left to right, consecutive points of the same side form a
//! block; blocks alternate sides and every point of block `w` lies left of
//! every point of block `w + 1`.

use alloc::vec::Vec;
use core::fmt;

use crate::instance::{Instance, PointRef, Side};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub side: Side,
    /// Indices into the instance's `side` array, ascending by coordinate.
    pub points: Vec<usize>,
}

impl Block {
    pub fn refs(&self) -> impl DoubleEndedIterator<Item = PointRef> + '_ {
        let side = self.side;
        self.points.iter().map(move |&index| PointRef { side, index })
    }

    pub fn last(&self) -> PointRef {
        PointRef { side: self.side, index: *self.points.last().expect("blocks are non-empty") }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    pub blocks: Vec<Block>,
}

impl BlockPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of every point, keyed by side.
    pub fn block_of(&self, inst: &Instance) -> (Vec<usize>, Vec<usize>) {
        let mut s = alloc::vec![0; inst.y()];
        let mut t = alloc::vec![0; inst.z()];
        for (w, b) in self.blocks.iter().enumerate() {
            let target = match b.side {
                Side::S => &mut s,
                Side::T => &mut t,
            };
            for &i in &b.points {
                target[i] = w;
            }
        }
        (s, t)
    }

    /// Concatenation of all blocks.
    pub fn flatten(&self) -> Vec<PointRef> {
        self.blocks.iter().flat_map(|b| b.refs()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionError {
    EmptyInstance,
    IndexOutOfRange { block: usize, blocks: usize },
}

impl fmt::Display for PartitionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartitionError::EmptyInstance => f.write_str("instance has no points"),
            PartitionError::IndexOutOfRange { block, blocks } => {
                write!(f, "block {block} requested from a partition of {blocks}")
            }
        }
    }
}

impl core::error::Error for PartitionError {}

pub fn partition(inst: &Instance) -> Result<BlockPartition, PartitionError> {
    if inst.is_empty() {
        return Err(PartitionError::EmptyInstance);
    }
    let mut blocks: Vec<Block> = Vec::new();
    for p in inst.merged() {
        match blocks.last_mut() {
            Some(b) if b.side == p.side => b.points.push(p.index),
            _ => blocks.push(Block { side: p.side, points: alloc::vec![p.index] }),
        }
    }
    Ok(BlockPartition { blocks })
}

/// The largest point of block `w - 1`, or `None` for the first block.
pub fn boundary_point(part: &BlockPartition, w: usize) -> Result<Option<PointRef>, PartitionError> {
    if w >= part.blocks.len() {
        return Err(PartitionError::IndexOutOfRange { block: w, blocks: part.blocks.len() });
    }
    Ok(w.checked_sub(1).map(|prev| part.blocks[prev].last()))
}
