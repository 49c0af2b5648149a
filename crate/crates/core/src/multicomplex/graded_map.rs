use crate::ring_core::{Matrix, Ring};

use super::grading::GradingBox;

/// A degree-preserving map between graded free modules: one matrix per
/// multidegree of `grading`. Outside the box the map is between zero
/// modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap<E> {
    grading: GradingBox,
    blocks: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> GradedMap<E> {
    pub fn new(grading: GradingBox, blocks: Vec<Matrix<E>>) -> Self {
        assert_eq!(grading.volume(), blocks.len(), "one block per multidegree");
        GradedMap { grading, blocks }
    }

    pub fn from_fn(grading: GradingBox, mut f: impl FnMut(&[i64]) -> Matrix<E>) -> Self {
        let blocks = grading.degrees().map(|d| f(&d)).collect();
        GradedMap { grading, blocks }
    }

    pub fn grading(&self) -> &GradingBox {
        &self.grading
    }

    pub fn blocks(&self) -> &[Matrix<E>] {
        &self.blocks
    }

    pub fn block(&self, degree: &[i64]) -> Option<&Matrix<E>> {
        self.grading.index_of(degree).map(|i| &self.blocks[i])
    }

    /// The block at `degree`, or the zero `rows x cols` map outside the box.
    pub fn block_or_zero<R: Ring<Elem = E>>(&self, ring: &R, degree: &[i64], rows: usize, cols: usize) -> Matrix<E> {
        self.block(degree).cloned().unwrap_or_else(|| Matrix::zeros(ring, rows, cols))
    }

    pub fn compose<R: Ring<Elem = E>>(&self, ring: &R, inner: &GradedMap<E>) -> Self {
        assert_eq!(self.grading, inner.grading, "composing maps over different boxes");
        let blocks = self.blocks.iter().zip(&inner.blocks).map(|(a, b)| a.mul(ring, b)).collect();
        GradedMap { grading: self.grading.clone(), blocks }
    }

    pub fn direct_sum<R: Ring<Elem = E>>(&self, ring: &R, other: &GradedMap<E>) -> Self {
        assert_eq!(self.grading, other.grading, "summing maps over different boxes");
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.block_diag(ring, b)).collect();
        GradedMap { grading: self.grading.clone(), blocks }
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.blocks.iter().all(|b| b.is_zero(ring))
    }
}
