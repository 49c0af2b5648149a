//! Bounded chain complexes of finitely generated free modules.
//!
//! Acyclicity here is the factorization condition: every differential
//! factors as `N_i ↠ Z_{i-1} ↪ N_{i-1}` with each `0 -> Z_i -> N_i -> Z_{i-1} -> 0`
//! split exact. Over a PID, for bounded complexes of free modules, this is
//! equivalent to all homology vanishing, because submodules of free modules
//! are free. That equivalence is special to the supported rings.

use thiserror::Error;

use crate::pid_modules::{submodule_quotient, PresentedModule};
use crate::ring_core::{
    check_split_short_exact, hermite_column_basis, kernel_basis, solve, split_surjection, Matrix, Ring, SesDefect,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("differentials do not square to zero at degree {0}")]
    NotAComplex(i64),
}

/// `N_lo <- ... <- N_hi` with `d_i: N_i -> N_{i-1}` stored for `lo < i <= hi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex<E> {
    lo: i64,
    hi: i64,
    ranks: Vec<usize>,
    diffs: Vec<Matrix<E>>,
}

impl<E: Clone + PartialEq> FreeComplex<E> {
    pub fn new(lo: i64, hi: i64, ranks: Vec<usize>, diffs: Vec<Matrix<E>>) -> Result<Self, ComplexError> {
        if lo > hi {
            return Err(ComplexError::ShapeMismatch(format!("empty support [{lo}, {hi}]")));
        }
        let len = (hi - lo + 1) as usize;
        if ranks.len() != len {
            return Err(ComplexError::ShapeMismatch(format!("{} ranks for support [{lo}, {hi}]", ranks.len())));
        }
        if diffs.len() != len - 1 {
            return Err(ComplexError::ShapeMismatch(format!(
                "{} differentials for support [{lo}, {hi}], expected {}",
                diffs.len(),
                len - 1
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            let expected = (ranks[k], ranks[k + 1]);
            if d.shape() != expected {
                return Err(ComplexError::ShapeMismatch(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    lo + 1 + k as i64,
                    d.rows(),
                    d.cols(),
                    expected.0,
                    expected.1
                )));
            }
        }
        Ok(FreeComplex { lo, hi, ranks, diffs })
    }

    /// All-zero complex on `[lo, hi]`.
    pub fn zero<R: Ring<Elem = E>>(ring: &R, lo: i64, hi: i64) -> Self {
        let len = (hi - lo + 1) as usize;
        FreeComplex { lo, hi, ranks: vec![0; len], diffs: (1..len).map(|_| Matrix::zeros(ring, 0, 0)).collect() }
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank at degree `i`; zero outside the support.
    pub fn rank(&self, i: i64) -> usize {
        if (self.lo..=self.hi).contains(&i) {
            self.ranks[(i - self.lo) as usize]
        } else {
            0
        }
    }

    /// `d_i`, the differential leaving degree `i`, for `lo < i <= hi`.
    pub fn diff(&self, i: i64) -> Option<&Matrix<E>> {
        (i > self.lo && i <= self.hi).then(|| &self.diffs[(i - self.lo - 1) as usize])
    }

    pub fn diffs(&self) -> &[Matrix<E>] {
        &self.diffs
    }

    /// `d_i` as a full matrix, including the zero maps at the boundary.
    pub fn diff_or_zero<R: Ring<Elem = E>>(&self, ring: &R, i: i64) -> Matrix<E> {
        self.diff(i).cloned().unwrap_or_else(|| Matrix::zeros(ring, self.rank(i - 1), self.rank(i)))
    }

    /// `Σ (-1)^i rank_i`.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|i| if i.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(i) as i64).sum()
    }

    /// The same complex on a larger support, padded with zero modules.
    pub fn with_support<R: Ring<Elem = E>>(&self, ring: &R, lo: i64, hi: i64) -> Result<Self, ComplexError> {
        if lo > self.lo || hi < self.hi {
            return Err(ComplexError::ShapeMismatch(format!(
                "[{lo}, {hi}] does not contain [{}, {}]",
                self.lo, self.hi
            )));
        }
        let ranks = (lo..=hi).map(|i| self.rank(i)).collect();
        let diffs = (lo + 1..=hi).map(|i| self.diff_or_zero(ring, i)).collect();
        FreeComplex::new(lo, hi, ranks, diffs)
    }
}

/// Whether every `d_{i-1} · d_i` vanishes.
pub fn check_complex<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>) -> bool {
    first_nonzero_square(ring, c).is_none()
}

fn first_nonzero_square<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>) -> Option<i64> {
    (c.lo + 2..=c.hi).find(|&i| {
        let (outer, inner) = (c.diff(i - 1).unwrap(), c.diff(i).unwrap());
        !outer.mul(ring, inner).is_zero(ring)
    })
}

fn require_complex<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>) -> Result<(), ComplexError> {
    match first_nonzero_square(ring, c) {
        Some(i) => Err(ComplexError::NotAComplex(i)),
        None => Ok(()),
    }
}

/// `H_i = ker(d_i) / im(d_{i+1})`.
pub fn homology<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>, i: i64) -> Result<PresentedModule<R::Elem>, ComplexError> {
    require_complex(ring, c)?;
    let n = c.rank(i);
    let cycles = kernel_basis(ring, &c.diff_or_zero(ring, i));
    let boundaries = hermite_column_basis(ring, &c.diff_or_zero(ring, i + 1));
    Ok(submodule_quotient(ring, n, &boundaries, &cycles).expect("boundaries are cycles"))
}

/// Cycle modules, factorizations and splittings of an acyclic complex.
///
/// Entry `k` of each list belongs to degree `lo + k`. `projections[k]`
/// maps `N_i` onto `Z_{i-1}` (so `projections[0]` has zero rows) and
/// `sections[k]` splits it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcyclicityWitness<E> {
    pub cycles: Vec<Matrix<E>>,
    pub projections: Vec<Matrix<E>>,
    pub sections: Vec<Matrix<E>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Acyclicity<E> {
    Acyclic(AcyclicityWitness<E>),
    /// Homology is nonzero at this degree (the first such).
    NotAcyclic {
        degree: i64,
    },
}

impl<E> Acyclicity<E> {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, Acyclicity::Acyclic(_))
    }

    pub fn witness(&self) -> Option<&AcyclicityWitness<E>> {
        match self {
            Acyclicity::Acyclic(w) => Some(w),
            Acyclicity::NotAcyclic { .. } => None,
        }
    }
}

/// Builds the factorization witness, or reports the first degree where the
/// image of `d_{i+1}` falls short of the kernel of `d_i`.
pub fn acyclicity_witness<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>) -> Result<Acyclicity<R::Elem>, ComplexError> {
    require_complex(ring, c)?;
    let mut cycles = Vec::with_capacity(c.ranks.len());
    for i in c.degrees() {
        let z = kernel_basis(ring, &c.diff_or_zero(ring, i));
        let b = hermite_column_basis(ring, &c.diff_or_zero(ring, i + 1));
        if z != b {
            return Ok(Acyclicity::NotAcyclic { degree: i });
        }
        cycles.push(z);
    }
    let mut projections = Vec::with_capacity(cycles.len());
    let mut sections = Vec::with_capacity(cycles.len());
    for (k, i) in c.degrees().enumerate() {
        let proj = if k == 0 {
            Matrix::zeros(ring, 0, c.rank(i))
        } else {
            solve(ring, &cycles[k - 1], &c.diff_or_zero(ring, i)).expect("d_i lands in Z_{i-1}")
        };
        sections.push(split_surjection(ring, &proj).expect("d_i is onto Z_{i-1}"));
        projections.push(proj);
    }
    Ok(Acyclicity::Acyclic(AcyclicityWitness { cycles, projections, sections }))
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum WitnessDefect {
    #[error("witness lists do not match the support")]
    Length,
    #[error("degree {degree}: d ≠ inclusion·projection")]
    Factorization { degree: i64 },
    #[error("degree {degree}: {defect}")]
    Sequence { degree: i64, defect: SesDefect },
    #[error("top cycle module is not zero")]
    TopCycles,
}

/// Re-checks every equation of an acyclicity witness against `c`.
pub fn verify_acyclicity_witness<R: Ring>(
    ring: &R,
    c: &FreeComplex<R::Elem>,
    w: &AcyclicityWitness<R::Elem>,
) -> Result<(), WitnessDefect> {
    let len = c.ranks.len();
    if w.cycles.len() != len || w.projections.len() != len || w.sections.len() != len {
        return Err(WitnessDefect::Length);
    }
    for (k, i) in c.degrees().enumerate() {
        let z = &w.cycles[k];
        let proj = &w.projections[k];
        if z.rows() != c.rank(i) {
            return Err(WitnessDefect::Length);
        }
        if k > 0 {
            let prev = &w.cycles[k - 1];
            if prev.cols() != proj.rows() || prev.mul(ring, proj) != c.diff_or_zero(ring, i) {
                return Err(WitnessDefect::Factorization { degree: i });
            }
        } else if proj.rows() != 0 {
            return Err(WitnessDefect::Factorization { degree: i });
        }
        check_split_short_exact(ring, z, proj, &w.sections[k])
            .map_err(|defect| WitnessDefect::Sequence { degree: i, defect })?;
    }
    if w.cycles.last().is_some_and(|z| z.cols() != 0) {
        return Err(WitnessDefect::TopCycles);
    }
    Ok(())
}

/// Degreewise block sum over the union of the supports.
pub fn complex_direct_sum<R: Ring>(
    ring: &R,
    a: &FreeComplex<R::Elem>,
    b: &FreeComplex<R::Elem>,
) -> FreeComplex<R::Elem> {
    let (lo, hi) = (a.lo.min(b.lo), a.hi.max(b.hi));
    let ranks = (lo..=hi).map(|i| a.rank(i) + b.rank(i)).collect();
    let diffs = (lo + 1..=hi).map(|i| a.diff_or_zero(ring, i).block_diag(ring, &b.diff_or_zero(ring, i))).collect();
    FreeComplex::new(lo, hi, ranks, diffs).expect("block sums have consistent shapes")
}

/// Whether `0 -> a --iota--> b --pi--> c -> 0` is a short exact sequence of
/// chain complexes. Maps are indexed by degree over `b`'s support; `a` and
/// `c` must live on the same support.
pub fn ses_of_complexes_check<R: Ring>(
    ring: &R,
    iota: &[Matrix<R::Elem>],
    pi: &[Matrix<R::Elem>],
    a: &FreeComplex<R::Elem>,
    b: &FreeComplex<R::Elem>,
    c: &FreeComplex<R::Elem>,
) -> Result<bool, ComplexError> {
    let len = b.ranks.len();
    if (a.lo, a.hi) != (b.lo, b.hi) || (c.lo, c.hi) != (b.lo, b.hi) {
        return Err(ComplexError::ShapeMismatch("complexes have different supports".into()));
    }
    if iota.len() != len || pi.len() != len {
        return Err(ComplexError::ShapeMismatch("map lists do not match the support".into()));
    }
    for (k, i) in b.degrees().enumerate() {
        if iota[k].shape() != (b.rank(i), a.rank(i)) || pi[k].shape() != (c.rank(i), b.rank(i)) {
            return Err(ComplexError::ShapeMismatch(format!("maps at degree {i} have wrong shape")));
        }
    }
    for (k, i) in b.degrees().enumerate() {
        if crate::ring_core::check_short_exact(ring, &iota[k], &pi[k]).is_err() {
            return Ok(false);
        }
        if k > 0 {
            let iota_commutes =
                b.diff_or_zero(ring, i).mul(ring, &iota[k]) == iota[k - 1].mul(ring, &a.diff_or_zero(ring, i));
            let pi_commutes =
                c.diff_or_zero(ring, i).mul(ring, &pi[k]) == pi[k - 1].mul(ring, &b.diff_or_zero(ring, i));
            if !iota_commutes || !pi_commutes {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring_core::Integers;
    use num_bigint::BigInt;

    fn m(rows: &[&[i64]]) -> Matrix<BigInt> {
        let z = Integers;
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(rows.len(), cols, |i, j| z.from_i64(rows[i][j]))
    }

    fn two_term(d: i64) -> FreeComplex<BigInt> {
        FreeComplex::new(0, 1, vec![1, 1], vec![m(&[&[d]])]).unwrap()
    }

    fn three_term() -> FreeComplex<BigInt> {
        FreeComplex::new(0, 2, vec![1, 2, 1], vec![m(&[&[1, -1]]), m(&[&[1], &[1]])]).unwrap()
    }

    #[test]
    fn complex_condition() {
        let z = Integers;
        let single = FreeComplex::new(0, 0, vec![3], vec![]).unwrap();
        assert!(check_complex(&z, &single));
        assert!(check_complex(&z, &two_term(1)));
        let bad = FreeComplex::new(0, 2, vec![1, 1, 1], vec![m(&[&[1]]), m(&[&[1]])]).unwrap();
        assert!(!check_complex(&z, &bad));
        assert_eq!(homology(&z, &bad, 0), Err(ComplexError::NotAComplex(2)));
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(FreeComplex::new(0, 1, vec![1, 2], vec![m(&[&[1]])]), Err(ComplexError::ShapeMismatch(_))));
        assert!(FreeComplex::<BigInt>::new(0, 1, vec![1], vec![]).is_err());
    }

    #[test]
    fn homology_examples() {
        let z = Integers;
        let h0 = homology(&z, &two_term(2), 0).unwrap();
        assert_eq!(h0.torsion_factors(&z), vec![z.from_i64(2)]);
        for i in 0..=1 {
            assert!(homology(&z, &two_term(1), i).unwrap().is_zero(&z));
        }
        for i in 0..=2 {
            assert!(homology(&z, &three_term(), i).unwrap().is_zero(&z), "degree {i}");
        }
    }

    #[test]
    fn witnesses() {
        let z = Integers;
        let c = two_term(1);
        let w = acyclicity_witness(&z, &c).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.cycles[0].shape(), (1, 1));
        assert_eq!(w.cycles[1].shape(), (1, 0));
        assert_eq!(verify_acyclicity_witness(&z, &c, w), Ok(()));

        assert_eq!(acyclicity_witness(&z, &two_term(2)).unwrap(), Acyclicity::NotAcyclic { degree: 0 });

        let c = three_term();
        let w = acyclicity_witness(&z, &c).unwrap();
        let w = w.witness().unwrap();
        assert_eq!(w.cycles[1], m(&[&[1], &[1]]));
        assert_eq!(verify_acyclicity_witness(&z, &c, w), Ok(()));
    }

    #[test]
    fn corrupted_witness_is_rejected() {
        let z = Integers;
        let c = three_term();
        let mut w = acyclicity_witness(&z, &c).unwrap().witness().unwrap().clone();
        w.projections[1] = w.projections[1].scale(&z, &z.from_i64(2));
        assert!(matches!(verify_acyclicity_witness(&z, &c, &w), Err(WitnessDefect::Factorization { degree: 1 })));
    }

    #[test]
    fn empty_complex_is_acyclic() {
        let z = Integers;
        let c = FreeComplex::zero(&z, 0, 3);
        let w = acyclicity_witness(&z, &c).unwrap();
        assert_eq!(verify_acyclicity_witness(&z, &c, w.witness().unwrap()), Ok(()));
    }

    #[test]
    fn direct_sums() {
        let z = Integers;
        let a = three_term();
        assert_eq!(complex_direct_sum(&z, &a, &FreeComplex::zero(&z, 0, 2)), a);
        let s = complex_direct_sum(&z, &two_term(1), &two_term(1));
        assert_eq!(s.ranks(), &[2, 2]);
        assert!(s.diff(1).unwrap().is_identity(&z));
        let s = complex_direct_sum(&z, &two_term(1), &three_term());
        assert!(acyclicity_witness(&z, &s).unwrap().is_acyclic());
        assert_eq!(s.euler_characteristic(), 0);
    }

    #[test]
    fn short_exact_sequences_of_complexes() {
        let z = Integers;
        let a = two_term(1).with_support(&z, 0, 2).unwrap();
        let c = three_term();
        let b = complex_direct_sum(&z, &a, &c);
        let iota: Vec<_> = b
            .degrees()
            .map(|i| {
                let (ra, rc) = (a.rank(i), c.rank(i));
                Matrix::identity(&z, ra).vstack(&Matrix::zeros(&z, rc, ra))
            })
            .collect();
        let pi: Vec<_> = b
            .degrees()
            .map(|i| {
                let (ra, rc) = (a.rank(i), c.rank(i));
                Matrix::zeros(&z, rc, ra).hstack(&Matrix::identity(&z, rc))
            })
            .collect();
        assert_eq!(ses_of_complexes_check(&z, &iota, &pi, &a, &b, &c), Ok(true));

        // pi that is exact degreewise but not a chain map
        let mut bad_pi = pi.clone();
        bad_pi[1] = Matrix::zeros(&z, 2, 1).hstack(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!(ses_of_complexes_check(&z, &iota, &bad_pi, &a, &b, &c), Ok(false));

        // iota exact degreewise but not a chain map: -1 in degree 1 only
        let mut bad_iota = iota.clone();
        bad_iota[1] = bad_iota[1].neg(&z);
        assert_eq!(ses_of_complexes_check(&z, &bad_iota, &pi, &a, &b, &c), Ok(false));
    }
}
