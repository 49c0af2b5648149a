use thiserror::Error;

use super::matrix::Matrix;
use super::normal_form::{hermite_column_basis, is_injective, is_surjective, kernel_basis};
use super::ring::Ring;

/// The first equation of `0 -> A --iota--> B --pi--> C -> 0` that fails.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SesDefect {
    #[error("shapes do not compose: iota is {iota:?}, pi is {pi:?}")]
    Shape { iota: (usize, usize), pi: (usize, usize) },
    #[error("iota is not injective")]
    NotInjective,
    #[error("pi is not surjective")]
    NotSurjective,
    #[error("pi·iota ≠ 0")]
    CompositeNonzero,
    #[error("im(iota) ≠ ker(pi)")]
    ImageNotKernel,
    #[error("pi·section ≠ identity")]
    SectionFails,
}

/// Checks exactness of `0 -> R^a --iota--> R^b --pi--> R^c -> 0`.
pub fn check_short_exact<R: Ring>(ring: &R, iota: &Matrix<R::Elem>, pi: &Matrix<R::Elem>) -> Result<(), SesDefect> {
    if iota.rows() != pi.cols() {
        return Err(SesDefect::Shape { iota: iota.shape(), pi: pi.shape() });
    }
    if !is_injective(ring, iota) {
        return Err(SesDefect::NotInjective);
    }
    if !is_surjective(ring, pi) {
        return Err(SesDefect::NotSurjective);
    }
    if !pi.mul(ring, iota).is_zero(ring) {
        return Err(SesDefect::CompositeNonzero);
    }
    if hermite_column_basis(ring, iota) != kernel_basis(ring, pi) {
        return Err(SesDefect::ImageNotKernel);
    }
    Ok(())
}

/// As [`check_short_exact`], additionally requiring `pi·section = 1`.
pub fn check_split_short_exact<R: Ring>(
    ring: &R,
    iota: &Matrix<R::Elem>,
    pi: &Matrix<R::Elem>,
    section: &Matrix<R::Elem>,
) -> Result<(), SesDefect> {
    check_short_exact(ring, iota, pi)?;
    if section.shape() != (pi.cols(), pi.rows()) || !pi.mul(ring, section).is_identity(ring) {
        return Err(SesDefect::SectionFails);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::ring::Integers;

    #[test]
    fn canonical_split_sequence() {
        let z = Integers;
        let iota = Matrix::from_i64(&z, &[[1], [0]]);
        let pi = Matrix::from_i64(&z, &[[0, 1]]);
        assert_eq!(check_short_exact(&z, &iota, &pi), Ok(()));
        let section = Matrix::from_i64(&z, &[[0], [1]]);
        assert_eq!(check_split_short_exact(&z, &iota, &pi, &section), Ok(()));
    }

    #[test]
    fn multiplication_by_two_is_not_split() {
        let z = Integers;
        // 0 -> Z --2--> Z -> Z/2 -> 0 is exact but Z/2 is not free; as a
        // sequence of free modules 0 -> Z --2--> Z --0--> 0 fails exactness.
        let iota = Matrix::from_i64(&z, &[[2]]);
        let pi = Matrix::zeros(&z, 0, 1);
        assert_eq!(check_short_exact(&z, &iota, &pi), Err(SesDefect::ImageNotKernel));
    }

    #[test]
    fn nonzero_composite() {
        let z = Integers;
        let iota = Matrix::from_i64(&z, &[[1], [1]]);
        let pi = Matrix::from_i64(&z, &[[0, 1]]);
        assert_eq!(check_short_exact(&z, &iota, &pi), Err(SesDefect::CompositeNonzero));
    }
}
