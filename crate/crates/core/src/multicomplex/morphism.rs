use std::fmt;

use thiserror::Error;

use crate::ring_core::{check_short_exact, is_invertible, Matrix, Ring, SesDefect};

use super::binary::{BinaryMulticomplex, Differential};
use super::graded_map::GradedMap;
use super::grading::{format_degree, shifted, GradingBox};
use super::nil::NilBinaryMulticomplex;

/// Common view of plain and Nil-decorated multicomplexes for the morphism
/// checks.
pub trait GradedObject<E> {
    fn base(&self) -> &BinaryMulticomplex<E>;
    fn endomorphism(&self) -> Option<&GradedMap<E>>;
}

impl<E> GradedObject<E> for BinaryMulticomplex<E> {
    fn base(&self) -> &BinaryMulticomplex<E> {
        self
    }

    fn endomorphism(&self) -> Option<&GradedMap<E>> {
        None
    }
}

impl<E: Clone + PartialEq> GradedObject<E> for NilBinaryMulticomplex<E> {
    fn base(&self) -> &BinaryMulticomplex<E> {
        NilBinaryMulticomplex::base(self)
    }

    fn endomorphism(&self) -> Option<&GradedMap<E>> {
        Some(self.nu())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MorphismDefect {
    #[error("dimension mismatch between map and objects")]
    Dimension,
    #[error("block at {} is {}x{}, expected {}x{}", format_degree(at), found.0, found.1, expected.0, expected.1)]
    Shape { at: Vec<i64>, expected: (usize, usize), found: (usize, usize) },
    #[error("does not commute with {which}^{} at {}", dir + 1, format_degree(at))]
    NotChainMap { dir: usize, which: Differential, at: Vec<i64> },
    #[error("does not commute with ν at {}", format_degree(at))]
    NotNilMap { at: Vec<i64> },
    #[error("not exact at {}: {defect}", format_degree(at))]
    Sequence { at: Vec<i64>, defect: SesDefect },
    #[error("block at {} is not invertible", format_degree(at))]
    NotInvertible { at: Vec<i64> },
}

/// Which map of a short exact sequence a defect belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SesMap {
    Iota,
    Pi,
    /// Degreewise exactness rather than either map.
    Sequence,
}

impl fmt::Display for SesMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SesMap::Iota => "iota",
            SesMap::Pi => "pi",
            SesMap::Sequence => "sequence",
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{map}: {defect}")]
pub struct SesMapDefect {
    pub map: SesMap,
    pub defect: MorphismDefect,
}

fn nu_at<R: Ring, O: GradedObject<R::Elem>>(ring: &R, obj: &O, degree: &[i64]) -> Option<Matrix<R::Elem>> {
    let r = obj.base().rank(degree);
    obj.endomorphism().map(|nu| nu.block_or_zero(ring, degree, r, r))
}

fn span(boxes: &[&GradingBox]) -> GradingBox {
    boxes[1..].iter().fold(boxes[0].clone(), |acc, b| acc.union(b))
}

/// Checks that `f: src -> dst` has the right block shapes, commutes with
/// every differential, and (when both sides carry one) with `ν`.
pub fn check_morphism<R: Ring, O: GradedObject<R::Elem>>(
    ring: &R,
    f: &GradedMap<R::Elem>,
    src: &O,
    dst: &O,
) -> Result<(), MorphismDefect> {
    let (s, t) = (src.base(), dst.base());
    if f.grading().dim() != s.dim() || s.dim() != t.dim() {
        return Err(MorphismDefect::Dimension);
    }
    let whole = span(&[f.grading(), s.grading(), t.grading()]);
    let block = |d: &[i64]| f.block_or_zero(ring, d, t.rank(d), s.rank(d));
    for d in whole.degrees() {
        let expected = (t.rank(&d), s.rank(&d));
        let found = block(&d).shape();
        if found != expected {
            return Err(MorphismDefect::Shape { at: d, expected, found });
        }
    }
    for d in whole.degrees() {
        let here = block(&d);
        for k in 0..s.dim() {
            let below = block(&shifted(&d, k, -1));
            for which in Differential::BOTH {
                let lhs = below.mul(ring, &s.map(ring, k, &d, which));
                let rhs = t.map(ring, k, &d, which).mul(ring, &here);
                if lhs != rhs {
                    return Err(MorphismDefect::NotChainMap { dir: k, which, at: d });
                }
            }
        }
        if let (Some(nu_s), Some(nu_t)) = (nu_at(ring, src, &d), nu_at(ring, dst, &d)) {
            if here.mul(ring, &nu_s) != nu_t.mul(ring, &here) {
                return Err(MorphismDefect::NotNilMap { at: d });
            }
        }
    }
    Ok(())
}

/// `0 -> left --iota--> middle --pi--> right -> 0`: both maps are
/// morphisms and every multidegree is short exact.
pub fn check_ses<R: Ring, O: GradedObject<R::Elem>>(
    ring: &R,
    iota: &GradedMap<R::Elem>,
    pi: &GradedMap<R::Elem>,
    left: &O,
    middle: &O,
    right: &O,
) -> Result<(), SesMapDefect> {
    check_morphism(ring, iota, left, middle).map_err(|defect| SesMapDefect { map: SesMap::Iota, defect })?;
    check_morphism(ring, pi, middle, right).map_err(|defect| SesMapDefect { map: SesMap::Pi, defect })?;
    let whole =
        span(&[left.base().grading(), middle.base().grading(), right.base().grading(), iota.grading(), pi.grading()]);
    let (l, m, r) = (left.base(), middle.base(), right.base());
    for d in whole.degrees() {
        let i = iota.block_or_zero(ring, &d, m.rank(&d), l.rank(&d));
        let p = pi.block_or_zero(ring, &d, r.rank(&d), m.rank(&d));
        check_short_exact(ring, &i, &p).map_err(|defect| SesMapDefect {
            map: SesMap::Sequence,
            defect: MorphismDefect::Sequence { at: d.clone(), defect },
        })?;
    }
    Ok(())
}

/// A morphism whose every block is invertible.
pub fn check_chain_iso<R: Ring, O: GradedObject<R::Elem>>(
    ring: &R,
    alpha: &GradedMap<R::Elem>,
    src: &O,
    dst: &O,
) -> Result<(), MorphismDefect> {
    check_morphism(ring, alpha, src, dst)?;
    let whole = span(&[alpha.grading(), src.base().grading(), dst.base().grading()]);
    for d in whole.degrees() {
        let r = src.base().rank(&d);
        if !is_invertible(ring, &alpha.block_or_zero(ring, &d, r, r)) {
            return Err(MorphismDefect::NotInvertible { at: d });
        }
    }
    Ok(())
}

/// The identity of `obj` over its own support.
pub fn identity_map<R: Ring>(ring: &R, obj: &BinaryMulticomplex<R::Elem>) -> GradedMap<R::Elem> {
    GradedMap::from_fn(obj.grading().clone(), |d| Matrix::identity(ring, obj.rank(d)))
}

/// `a -> a ⊕ b`, over the support of the sum.
pub fn sum_inclusion<R: Ring>(
    ring: &R,
    a: &BinaryMulticomplex<R::Elem>,
    b: &BinaryMulticomplex<R::Elem>,
) -> GradedMap<R::Elem> {
    GradedMap::from_fn(a.grading().union(b.grading()), |d| {
        Matrix::identity(ring, a.rank(d)).vstack(&Matrix::zeros(ring, b.rank(d), a.rank(d)))
    })
}

/// `a ⊕ b -> b`, over the support of the sum.
pub fn sum_projection<R: Ring>(
    ring: &R,
    a: &BinaryMulticomplex<R::Elem>,
    b: &BinaryMulticomplex<R::Elem>,
) -> GradedMap<R::Elem> {
    GradedMap::from_fn(a.grading().union(b.grading()), |d| {
        Matrix::zeros(ring, b.rank(d), a.rank(d)).hstack(&Matrix::identity(ring, b.rank(d)))
    })
}
