//! Nilpotent endomorphisms of free modules and the kernel-filtration
//! certificate showing `[(R^n, ν)] = [(R^n, 0)]` in `K_0(Nil(R))`.
//!
//! For a nilpotent `ν` of index `m`, the kernels `K_i = ker(ν^i)` form a
//! chain `0 ⊆ K_1 ⊆ ... ⊆ K_m = R^n`. Each quotient `K_{i+1}/K_i` is
//! torsion-free, hence free over a PID, and `ν` induces zero on it. The
//! certificate records every split sequence
//! `0 -> (K_i, ν) -> (K_{i+1}, ν) -> (K_{i+1}/K_i, 0) -> 0`
//! together with an isomorphism `K_1 ⊕ Q_1 ⊕ ... ⊕ Q_{m-1} ≅ R^n`.

use thiserror::Error;

use crate::pid_modules::{submodule_quotient, PresentedModule};
use crate::ring_core::{
    check_split_short_exact, is_invertible, kernel_basis, smith_normal_form, solve, split_surjection, Matrix, Ring,
    SesDefect,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum NilError {
    #[error("endomorphism is not nilpotent")]
    NotNilpotent,
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    NotSquare { expected: usize, rows: usize, cols: usize },
    #[error("dimension mismatch: map is {map:?}, objects have ranks {src} -> {dst}")]
    DimensionMismatch { map: (usize, usize), src: usize, dst: usize },
}

/// A free module `R^n` with a nilpotent endomorphism of least index `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilObject<E> {
    rank: usize,
    nu: Matrix<E>,
    index: usize,
}

impl<E: Clone + PartialEq> NilObject<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, rank: usize, nu: Matrix<E>) -> Result<Self, NilError> {
        if nu.shape() != (rank, rank) {
            return Err(NilError::NotSquare { expected: rank, rows: nu.rows(), cols: nu.cols() });
        }
        let index = nilpotency_index(ring, &nu).ok_or(NilError::NotNilpotent)?;
        Ok(NilObject { rank, nu, index })
    }

    /// For decoders that must carry invalid objects through to a verifier.
    pub(crate) fn raw(rank: usize, nu: Matrix<E>, index: usize) -> Self {
        NilObject { rank, nu, index }
    }

    pub fn zero<R: Ring<Elem = E>>(ring: &R, rank: usize) -> Self {
        NilObject { rank, nu: Matrix::zeros(ring, rank, rank), index: 1 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nu(&self) -> &Matrix<E> {
        &self.nu
    }

    pub fn index(&self) -> usize {
        self.index
    }
}

/// Least `m >= 1` with `nu^m = 0`, or `None` when `nu^n ≠ 0`.
pub fn nilpotency_index<R: Ring>(ring: &R, nu: &Matrix<R::Elem>) -> Option<usize> {
    assert!(nu.is_square());
    let mut power = nu.clone();
    for m in 1..=nu.rows().max(1) {
        if power.is_zero(ring) {
            return Some(m);
        }
        power = power.mul(ring, nu);
    }
    None
}

pub fn make_nil_object<R: Ring>(ring: &R, n: usize, nu: Matrix<R::Elem>) -> Result<NilObject<R::Elem>, NilError> {
    NilObject::new(ring, n, nu)
}

/// Whether `f: src -> dst` satisfies `f·ν_src = ν_dst·f`.
pub fn check_nil_morphism<R: Ring>(
    ring: &R,
    f: &Matrix<R::Elem>,
    src: &NilObject<R::Elem>,
    dst: &NilObject<R::Elem>,
) -> Result<bool, NilError> {
    if f.shape() != (dst.rank, src.rank) {
        return Err(NilError::DimensionMismatch { map: f.shape(), src: src.rank, dst: dst.rank });
    }
    Ok(f.mul(ring, &src.nu) == dst.nu.mul(ring, f))
}

/// Canonical bases of `ker(ν), ker(ν^2), ..., ker(ν^m) = R^n`.
pub fn kernel_filtration<R: Ring>(ring: &R, obj: &NilObject<R::Elem>) -> Vec<Matrix<R::Elem>> {
    let mut power = Matrix::identity(ring, obj.rank);
    (1..=obj.index)
        .map(|_| {
            power = power.mul(ring, &obj.nu);
            kernel_basis(ring, &power)
        })
        .collect()
}

/// The quotients `K_{i+1}/K_i` for `i = 1..m-1`, as presented modules.
pub fn filtration_quotients<R: Ring>(ring: &R, obj: &NilObject<R::Elem>) -> Vec<PresentedModule<R::Elem>> {
    kernel_filtration(ring, obj)
        .windows(2)
        .map(|w| submodule_quotient(ring, obj.rank, &w[0], &w[1]).expect("kernels are nested"))
        .collect()
}

pub fn nil_direct_sum<R: Ring>(ring: &R, a: &NilObject<R::Elem>, b: &NilObject<R::Elem>) -> NilObject<R::Elem> {
    NilObject { rank: a.rank + b.rank, nu: a.nu.block_diag(ring, &b.nu), index: a.index.max(b.index) }
}

/// `0 -> left --iota--> middle --pi--> right -> 0` in `Nil(R)`, split by
/// `section`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilSesWitness<E> {
    pub left: NilObject<E>,
    pub middle: NilObject<E>,
    pub right: NilObject<E>,
    pub iota: Matrix<E>,
    pub pi: Matrix<E>,
    pub section: Matrix<E>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingCertificate<E> {
    pub target: NilObject<E>,
    /// Step `i` (0-based) is the sequence for `K_{i+1} ⊆ K_{i+2}`.
    pub ses_chain: Vec<NilSesWitness<E>>,
    /// `K_1 ⊕ Q_1 ⊕ ... ⊕ Q_{m-1} -> R^n`, columns in that block order.
    pub final_iso: Matrix<E>,
}

/// Endomorphism induced by `nu` on the span of `basis`, in that basis.
fn restrict<R: Ring>(ring: &R, nu: &Matrix<R::Elem>, basis: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    solve(ring, basis, &nu.mul(ring, basis)).expect("kernels of powers are ν-stable")
}

/// Builds the full chain of split sequences for `obj`.
///
/// Over a PID every filtration quotient is free, so this never fails for a
/// valid object.
pub fn vanishing_certificate<R: Ring>(ring: &R, obj: &NilObject<R::Elem>) -> VanishingCertificate<R::Elem> {
    let kernels = kernel_filtration(ring, obj);
    let restricted: Vec<NilObject<R::Elem>> = kernels
        .iter()
        .map(|k| {
            let nu = restrict(ring, &obj.nu, k);
            NilObject::new(ring, k.cols(), nu).expect("restriction of a nilpotent is nilpotent")
        })
        .collect();

    let mut ses_chain = Vec::with_capacity(kernels.len().saturating_sub(1));
    // columns of `assembled` map K_1 ⊕ Q_1 ⊕ ... ⊕ Q_i into K_{i+1} coordinates
    let mut assembled = Matrix::identity(ring, kernels[0].cols());
    for i in 0..kernels.len() - 1 {
        let (inner, outer) = (&kernels[i], &kernels[i + 1]);
        let iota = solve(ring, outer, inner).expect("kernels are nested");
        let snf = smith_normal_form(ring, &iota);
        debug_assert!((0..snf.rank).all(|j| ring.is_unit(snf.d.get(j, j))), "filtration quotient has torsion");
        let pi = snf.u.select_rows(snf.rank..outer.cols());
        let section = split_surjection(ring, &pi).expect("projection onto a free quotient");
        let right = NilObject::zero(ring, pi.rows());
        assembled = iota.mul(ring, &assembled).hstack(&section);
        ses_chain.push(NilSesWitness {
            left: restricted[i].clone(),
            middle: restricted[i + 1].clone(),
            right,
            iota,
            pi,
            section,
        });
    }

    let final_iso = kernels.last().expect("index is at least 1").mul(ring, &assembled);
    VanishingCertificate { target: obj.clone(), ses_chain, final_iso }
}

/// The first equation a certificate violates.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CertificateDefect {
    #[error("{object}: not a valid Nil object ({reason})")]
    BadObject { object: String, reason: NilError },
    #[error("ses[{step}]: {defect}")]
    Sequence { step: usize, defect: SesDefect },
    #[error("ses[{step}]: iota does not commute with ν")]
    IotaNotNilMorphism { step: usize },
    #[error("ses[{step}]: pi does not commute with ν")]
    PiNotNilMorphism { step: usize },
    #[error("ses[{step}]: quotient endomorphism is not zero")]
    QuotientNotZero { step: usize },
    #[error("ses[{step}]: middle term differs from the left term of ses[{next}]")]
    ChainBroken { step: usize, next: usize },
    #[error("last middle term differs from the target")]
    TargetMismatch,
    #[error("innermost kernel endomorphism is not zero")]
    InnermostNotZero,
    #[error("final_iso has shape {got:?}, expected {expected}x{expected}")]
    FinalIsoShape { got: (usize, usize), expected: usize },
    #[error("summand ranks add up to {got}, expected {expected}")]
    RankSum { got: usize, expected: usize },
    #[error("final_iso not invertible")]
    FinalIsoNotInvertible,
}

fn recheck_object<R: Ring>(
    ring: &R,
    obj: &NilObject<R::Elem>,
    name: impl FnOnce() -> String,
) -> Result<(), CertificateDefect> {
    NilObject::new(ring, obj.rank, obj.nu.clone())
        .and_then(|fresh| if fresh.index == obj.index { Ok(()) } else { Err(NilError::NotNilpotent) })
        .map_err(|reason| CertificateDefect::BadObject { object: name(), reason })
}

/// Re-derives every equation in `cert` from the matrices it carries.
pub fn verify_vanishing_certificate<R: Ring>(
    ring: &R,
    cert: &VanishingCertificate<R::Elem>,
) -> Result<(), CertificateDefect> {
    let n = cert.target.rank;
    recheck_object(ring, &cert.target, || "target".into())?;

    for (step, w) in cert.ses_chain.iter().enumerate() {
        recheck_object(ring, &w.left, || format!("ses[{step}].left"))?;
        recheck_object(ring, &w.middle, || format!("ses[{step}].middle"))?;
        recheck_object(ring, &w.right, || format!("ses[{step}].right"))?;
        let shape_ok = w.iota.shape() == (w.middle.rank, w.left.rank) && w.pi.shape() == (w.right.rank, w.middle.rank);
        if !shape_ok {
            return Err(CertificateDefect::Sequence {
                step,
                defect: SesDefect::Shape { iota: w.iota.shape(), pi: w.pi.shape() },
            });
        }
        check_split_short_exact(ring, &w.iota, &w.pi, &w.section)
            .map_err(|defect| CertificateDefect::Sequence { step, defect })?;
        if w.middle.nu.mul(ring, &w.iota) != w.iota.mul(ring, &w.left.nu) {
            return Err(CertificateDefect::IotaNotNilMorphism { step });
        }
        if w.right.nu.mul(ring, &w.pi) != w.pi.mul(ring, &w.middle.nu) {
            return Err(CertificateDefect::PiNotNilMorphism { step });
        }
        if !w.right.nu.is_zero(ring) {
            return Err(CertificateDefect::QuotientNotZero { step });
        }
        if let Some(next) = cert.ses_chain.get(step + 1) {
            if next.left != w.middle {
                return Err(CertificateDefect::ChainBroken { step, next: step + 1 });
            }
        }
    }

    let (innermost, outermost) = match (cert.ses_chain.first(), cert.ses_chain.last()) {
        (Some(first), Some(last)) => (&first.left, &last.middle),
        _ => (&cert.target, &cert.target),
    };
    if outermost != &cert.target {
        return Err(CertificateDefect::TargetMismatch);
    }
    if !innermost.nu.is_zero(ring) {
        return Err(CertificateDefect::InnermostNotZero);
    }

    if cert.final_iso.shape() != (n, n) {
        return Err(CertificateDefect::FinalIsoShape { got: cert.final_iso.shape(), expected: n });
    }
    let summed = innermost.rank + cert.ses_chain.iter().map(|w| w.right.rank).sum::<usize>();
    if summed != n {
        return Err(CertificateDefect::RankSum { got: summed, expected: n });
    }
    if !is_invertible(ring, &cert.final_iso) {
        return Err(CertificateDefect::FinalIsoNotInvertible);
    }
    Ok(())
}
