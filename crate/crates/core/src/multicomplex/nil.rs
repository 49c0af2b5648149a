use thiserror::Error;

use crate::nil_category::nilpotency_index;
use crate::ring_core::{inverse, Matrix, Ring};

use super::binary::{
    multicomplex_direct_sum, tensor, validate, BinaryMulticomplex, Differential, ValidationReport, Violation,
};
use super::graded_map::GradedMap;
use super::grading::shifted;
use super::morphism::{check_chain_iso, MorphismDefect};

/// A binary multicomplex with a degreewise nilpotent endomorphism `ν`
/// that commutes with every differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilBinaryMulticomplex<E> {
    base: BinaryMulticomplex<E>,
    nu: GradedMap<E>,
}

impl<E: Clone + PartialEq> NilBinaryMulticomplex<E> {
    /// Pairs `base` with `nu` after checking `nu` is square, nilpotent and
    /// commutes with all differentials.
    pub fn new<R: Ring<Elem = E>>(
        ring: &R,
        base: BinaryMulticomplex<E>,
        nu: GradedMap<E>,
    ) -> Result<Self, ValidationReport> {
        let obj = NilBinaryMulticomplex { base, nu };
        let report = validate_nil(ring, &obj);
        if report.is_pass() {
            Ok(obj)
        } else {
            Err(report)
        }
    }

    pub(crate) fn from_parts(base: BinaryMulticomplex<E>, nu: GradedMap<E>) -> Self {
        NilBinaryMulticomplex { base, nu }
    }

    pub fn base(&self) -> &BinaryMulticomplex<E> {
        &self.base
    }

    pub fn nu(&self) -> &GradedMap<E> {
        &self.nu
    }

    /// `ν` at `degree`, zero outside the support.
    pub fn nu_at<R: Ring<Elem = E>>(&self, ring: &R, degree: &[i64]) -> Matrix<E> {
        let r = self.base.rank(degree);
        self.nu.block_or_zero(ring, degree, r, r)
    }

    pub fn is_zero_nil<R: Ring<Elem = E>>(&self, ring: &R) -> bool {
        self.nu.is_zero(ring)
    }

    /// Largest nilpotency index over all multidegrees.
    pub fn nil_index<R: Ring<Elem = E>>(&self, ring: &R) -> usize {
        self.nu.blocks().iter().map(|b| nilpotency_index(ring, b).expect("validated nilpotent")).max().unwrap_or(1)
    }

    pub fn trimmed<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        let base = self.base.trimmed(ring);
        let nu = GradedMap::from_fn(base.grading().clone(), |d| self.nu_at(ring, d));
        NilBinaryMulticomplex { base, nu }
    }

    /// `ν' = g·ν·g⁻¹` on the conjugated base.
    pub fn conjugate<R: Ring<Elem = E>>(&self, ring: &R, g: &GradedMap<E>, g_inv: &GradedMap<E>) -> Self {
        let base = self.base.conjugate(ring, g, g_inv);
        let nu = GradedMap::from_fn(base.grading().clone(), |d| {
            let r = base.rank(d);
            g.block_or_zero(ring, d, r, r)
                .mul(ring, &self.nu_at(ring, d))
                .mul(ring, &g_inv.block_or_zero(ring, d, r, r))
        });
        NilBinaryMulticomplex { base, nu }
    }
}

/// Squaring, commutation, nilpotency of every `ν_δ`, and `ν` commuting
/// with all `2n` differential families.
pub fn validate_nil<R: Ring>(ring: &R, obj: &NilBinaryMulticomplex<R::Elem>) -> ValidationReport {
    let mut report = validate(ring, &obj.base, false);
    let b = &obj.base;
    for d in b.grading().degrees().chain(obj.nu.grading().degrees()) {
        if !b.grading().contains(&d) {
            // ν outside the support may only be the empty map
            let block = obj.nu.block(&d).expect("degree from ν's box");
            if block.shape() != (0, 0) {
                report.violations.push(Violation::NuShape { at: d });
            }
            continue;
        }
        let r = b.rank(&d);
        let Some(block) = obj.nu.block(&d) else {
            if r > 0 {
                report.violations.push(Violation::NuShape { at: d });
            }
            continue;
        };
        if block.shape() != (r, r) {
            report.violations.push(Violation::NuShape { at: d });
            continue;
        }
        if nilpotency_index(ring, block).is_none() {
            report.violations.push(Violation::NuNotNilpotent { at: d.clone() });
        }
    }
    if report.violations.iter().any(|v| matches!(v, Violation::NuShape { .. })) {
        return report;
    }
    for d in b.grading().degrees() {
        for k in 0..b.dim() {
            let below = obj.nu_at(ring, &shifted(&d, k, -1));
            let here = obj.nu_at(ring, &d);
            for which in Differential::BOTH {
                let m = b.map(ring, k, &d, which);
                if below.mul(ring, &m) != m.mul(ring, &here) {
                    report.violations.push(Violation::NuNotCommuting { dir: k, which, at: d.clone() });
                }
            }
        }
    }
    report
}

/// Attaches `ν = 0` in every multidegree.
pub fn decorate_zero_nil<R: Ring>(ring: &R, b: &BinaryMulticomplex<R::Elem>) -> NilBinaryMulticomplex<R::Elem> {
    let nu = GradedMap::from_fn(b.grading().clone(), |d| {
        let r = b.rank(d);
        Matrix::zeros(ring, r, r)
    });
    NilBinaryMulticomplex { base: b.clone(), nu }
}

pub fn forget_nil<E: Clone>(nb: &NilBinaryMulticomplex<E>) -> BinaryMulticomplex<E> {
    nb.base.clone()
}

pub fn nil_multicomplex_direct_sum<R: Ring>(
    ring: &R,
    a: &NilBinaryMulticomplex<R::Elem>,
    b: &NilBinaryMulticomplex<R::Elem>,
) -> NilBinaryMulticomplex<R::Elem> {
    let base = multicomplex_direct_sum(ring, &a.base, &b.base);
    let nu = GradedMap::from_fn(base.grading().clone(), |d| a.nu_at(ring, d).block_diag(ring, &b.nu_at(ring, d)));
    NilBinaryMulticomplex { base, nu }
}

/// `a ⊗ b` with `ν = 1 ⊗ ν_b`.
pub fn tensor_nil<R: Ring>(
    ring: &R,
    a: &BinaryMulticomplex<R::Elem>,
    b: &NilBinaryMulticomplex<R::Elem>,
) -> NilBinaryMulticomplex<R::Elem> {
    let base = tensor(ring, a, &b.base);
    let n = a.dim();
    let nu = GradedMap::from_fn(base.grading().clone(), |d| {
        Matrix::identity(ring, a.rank(&d[..n])).kronecker(ring, &b.nu_at(ring, &d[n..]))
    });
    NilBinaryMulticomplex { base, nu }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransportError {
    #[error("alpha is not a chain isomorphism: {0}")]
    NotChainIso(MorphismDefect),
    #[error("transported endomorphism fails validation: {0}")]
    Invalid(ValidationReport),
}

/// Given a chain isomorphism `alpha: src.base ⊕ pad -> dst_base`, decorates
/// `dst_base` with `ν' = alpha·(ν ⊕ 0)·alpha⁻¹` and re-validates the result.
pub fn transport_nil<R: Ring>(
    ring: &R,
    alpha: &GradedMap<R::Elem>,
    src: &NilBinaryMulticomplex<R::Elem>,
    pad: &BinaryMulticomplex<R::Elem>,
    dst_base: &BinaryMulticomplex<R::Elem>,
) -> Result<NilBinaryMulticomplex<R::Elem>, TransportError> {
    let padded = nil_multicomplex_direct_sum(ring, src, &decorate_zero_nil(ring, pad));
    check_chain_iso(ring, alpha, padded.base(), dst_base).map_err(TransportError::NotChainIso)?;
    let nu = GradedMap::from_fn(dst_base.grading().clone(), |d| {
        let r = dst_base.rank(d);
        let a = alpha.block_or_zero(ring, d, r, r);
        let a_inv = inverse(ring, &a).expect("checked invertible");
        a.mul(ring, &padded.nu_at(ring, d)).mul(ring, &a_inv)
    });
    NilBinaryMulticomplex::new(ring, dst_base.clone(), nu).map_err(TransportError::Invalid)
}
