//! Finitely generated modules over a PID, presented as cokernels.

use thiserror::Error;

use crate::ring_core::{hermite_column_basis, smith_normal_form, solve, Matrix, Ring};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ModuleError {
    #[error("relation matrix has {rows} rows but the module has {generators} generators")]
    ShapeMismatch { generators: usize, rows: usize },
    #[error("module has torsion")]
    NotFree,
    #[error("inner submodule is not contained in the outer one")]
    NotASubmodule,
}

/// `R^g / span(relations)`, with the relation matrix stored in canonical
/// Hermite form so equal relation spans compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule<E> {
    generators: usize,
    relations: Matrix<E>,
    invariant_factors: Vec<E>,
}

impl<E: Clone + PartialEq> PresentedModule<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, generators: usize, relations: &Matrix<E>) -> Result<Self, ModuleError> {
        if relations.rows() != generators {
            return Err(ModuleError::ShapeMismatch { generators, rows: relations.rows() });
        }
        let invariant_factors = smith_normal_form(ring, relations).invariant_factors();
        Ok(PresentedModule { generators, relations: hermite_column_basis(ring, relations), invariant_factors })
    }

    /// The free module `R^g`.
    pub fn free<R: Ring<Elem = E>>(ring: &R, generators: usize) -> Self {
        PresentedModule { generators, relations: Matrix::zeros(ring, generators, 0), invariant_factors: Vec::new() }
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &Matrix<E> {
        &self.relations
    }

    /// Nonzero invariant factors `d_1 | d_2 | ...`, canonical associates.
    pub fn invariant_factors(&self) -> &[E] {
        &self.invariant_factors
    }

    /// The non-unit invariant factors, i.e. the torsion summands `R/(d)`.
    pub fn torsion_factors<R: Ring<Elem = E>>(&self, ring: &R) -> Vec<E> {
        self.invariant_factors.iter().filter(|d| !ring.is_unit(d)).cloned().collect()
    }

    /// Torsion-free, which over a PID is the same as free.
    pub fn is_torsion_free<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.invariant_factors.iter().all(|d| ring.is_unit(d))
    }

    pub fn free_rank<R: Ring<Elem = E>>(&self, ring: &R) -> Result<usize, ModuleError> {
        if !self.is_torsion_free(ring) {
            return Err(ModuleError::NotFree);
        }
        Ok(self.generators - self.invariant_factors.len())
    }

    pub fn is_zero<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.is_torsion_free(ring) && self.invariant_factors.len() == self.generators
    }
}

/// The quotient `span(outer) / span(inner)` of submodules of `R^n`, given by
/// bases. Presented on the columns of `outer` with relations `X` where
/// `outer · X = inner`.
pub fn submodule_quotient<R: Ring>(
    ring: &R,
    ambient_rank: usize,
    inner: &Matrix<R::Elem>,
    outer: &Matrix<R::Elem>,
) -> Result<PresentedModule<R::Elem>, ModuleError> {
    if inner.rows() != ambient_rank || outer.rows() != ambient_rank {
        return Err(ModuleError::ShapeMismatch {
            generators: ambient_rank,
            rows: if inner.rows() != ambient_rank { inner.rows() } else { outer.rows() },
        });
    }
    let x = solve(ring, outer, inner).ok_or(ModuleError::NotASubmodule)?;
    PresentedModule::new(ring, outer.cols(), &x)
}
