use std::fmt;

use thiserror::Error;

use crate::complexes::{acyclicity_witness, Acyclicity, ComplexError, FreeComplex};
use crate::ring_core::{Matrix, Ring};

use super::graded_map::GradedMap;
use super::grading::{format_degree, shifted, GradingBox};

/// Multicomplexes of higher dimension are rejected unless the cap is raised
/// explicitly; the number of degrees grows with the box volume.
pub const DEFAULT_MAX_DIM: usize = 3;

/// Which member of a differential pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Differential {
    D,
    Dt,
}

impl Differential {
    pub const BOTH: [Differential; 2] = [Differential::D, Differential::Dt];
}

impl fmt::Display for Differential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Differential::D => "d",
            Differential::Dt => "dt",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffPair<E> {
    pub d: Matrix<E>,
    pub dt: Matrix<E>,
}

impl<E> DiffPair<E> {
    pub fn get(&self, which: Differential) -> &Matrix<E> {
        match which {
            Differential::D => &self.d,
            Differential::Dt => &self.dt,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MulticomplexError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("multidegree {0} is outside the support")]
    OutsideSupport(String),
}

/// A bounded `Z^n`-graded free module with a pair of differentials
/// `(d^k, dt^k)` in every direction `k`, each lowering the `k`-th degree.
///
/// Differentials are stored direction-major, multidegree-minor, one pair for
/// every multidegree of the support box. At the lower face of direction
/// `k` the pair maps into the zero module and is stored as `0 x rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryMulticomplex<E> {
    grading: GradingBox,
    ranks: Vec<usize>,
    diffs: Vec<Vec<DiffPair<E>>>,
}

pub struct MulticomplexBuilder<E> {
    grading: GradingBox,
    ranks: Vec<usize>,
    diffs: Vec<Vec<Option<DiffPair<E>>>>,
    max_dim: usize,
}

impl<E: Clone + PartialEq> MulticomplexBuilder<E> {
    pub fn new(grading: GradingBox) -> Self {
        let volume = grading.volume();
        let dim = grading.dim();
        MulticomplexBuilder {
            grading,
            ranks: vec![0; volume],
            diffs: (0..dim).map(|_| (0..volume).map(|_| None).collect()).collect(),
            max_dim: DEFAULT_MAX_DIM,
        }
    }

    pub fn max_dim(mut self, cap: usize) -> Self {
        self.max_dim = cap;
        self
    }

    fn index(&self, degree: &[i64]) -> Result<usize, MulticomplexError> {
        self.grading.index_of(degree).ok_or_else(|| MulticomplexError::OutsideSupport(format_degree(degree)))
    }

    pub fn rank(&mut self, degree: &[i64], rank: usize) -> Result<&mut Self, MulticomplexError> {
        let i = self.index(degree)?;
        self.ranks[i] = rank;
        Ok(self)
    }

    /// Sets the pair leaving `degree` in direction `dir` (0-based).
    pub fn diff(
        &mut self,
        dir: usize,
        degree: &[i64],
        d: Matrix<E>,
        dt: Matrix<E>,
    ) -> Result<&mut Self, MulticomplexError> {
        if dir >= self.grading.dim() {
            return Err(MulticomplexError::Shape(format!("no direction {}", dir + 1)));
        }
        let i = self.index(degree)?;
        self.diffs[dir][i] = Some(DiffPair { d, dt });
        Ok(self)
    }

    pub fn build<R: Ring<Elem = E>>(self, ring: &R) -> Result<BinaryMulticomplex<E>, MulticomplexError> {
        let dim = self.grading.dim();
        if dim > self.max_dim {
            return Err(MulticomplexError::DimensionCap { dim, cap: self.max_dim });
        }
        let rank_at = |d: &[i64]| self.grading.index_of(d).map_or(0, |i| self.ranks[i]);
        let mut diffs = Vec::with_capacity(dim);
        for (k, per_degree) in self.diffs.into_iter().enumerate() {
            let mut column = Vec::with_capacity(per_degree.len());
            for (i, pair) in per_degree.into_iter().enumerate() {
                let degree = self.grading.degree_at(i);
                let expected = (rank_at(&shifted(&degree, k, -1)), self.ranks[i]);
                let pair = pair.unwrap_or_else(|| DiffPair {
                    d: Matrix::zeros(ring, expected.0, expected.1),
                    dt: Matrix::zeros(ring, expected.0, expected.1),
                });
                for which in Differential::BOTH {
                    let m = pair.get(which);
                    if m.shape() != expected {
                        return Err(MulticomplexError::Shape(format!(
                            "{which}^{} at {} is {}x{}, expected {}x{}",
                            k + 1,
                            format_degree(&degree),
                            m.rows(),
                            m.cols(),
                            expected.0,
                            expected.1
                        )));
                    }
                }
                column.push(pair);
            }
            diffs.push(column);
        }
        Ok(BinaryMulticomplex { grading: self.grading, ranks: self.ranks, diffs })
    }
}

impl<E: Clone + PartialEq> BinaryMulticomplex<E> {
    /// The zero object, supported at the origin.
    pub fn zero<R: Ring<Elem = E>>(ring: &R, dim: usize) -> Self {
        MulticomplexBuilder::new(GradingBox::origin(dim)).max_dim(dim).build(ring).expect("zero object is well formed")
    }

    pub fn dim(&self) -> usize {
        self.grading.dim()
    }

    pub fn grading(&self) -> &GradingBox {
        &self.grading
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank at `degree`; zero outside the support.
    pub fn rank(&self, degree: &[i64]) -> usize {
        self.grading.index_of(degree).map_or(0, |i| self.ranks[i])
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn is_zero_object(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// The stored pair leaving `degree` in direction `dir`.
    pub fn diff(&self, dir: usize, degree: &[i64]) -> Option<&DiffPair<E>> {
        self.grading.index_of(degree).map(|i| &self.diffs[dir][i])
    }

    /// `d^dir` or `dt^dir` leaving `degree`, the zero map outside the support.
    pub fn map<R: Ring<Elem = E>>(&self, ring: &R, dir: usize, degree: &[i64], which: Differential) -> Matrix<E> {
        match self.diff(dir, degree) {
            Some(pair) => pair.get(which).clone(),
            None => Matrix::zeros(ring, self.rank(&shifted(degree, dir, -1)), self.rank(degree)),
        }
    }

    /// The complex along direction `dir` through `start` (whose `dir`-th
    /// coordinate is ignored), using differential `which`.
    pub fn line_complex<R: Ring<Elem = E>>(
        &self,
        ring: &R,
        dir: usize,
        start: &[i64],
        which: Differential,
    ) -> FreeComplex<E> {
        let (lo, hi) = (self.grading.lo(dir), self.grading.hi(dir));
        let at = |i: i64| {
            let mut d = start.to_vec();
            d[dir] = i;
            d
        };
        let ranks = (lo..=hi).map(|i| self.rank(&at(i))).collect();
        let diffs = (lo + 1..=hi).map(|i| self.map(ring, dir, &at(i), which)).collect();
        FreeComplex::new(lo, hi, ranks, diffs).expect("lines of a multicomplex are well formed")
    }

    /// Rebuilds the object over `grading`, which must contain every
    /// multidegree of nonzero rank.
    pub fn regrade<R: Ring<Elem = E>>(&self, ring: &R, grading: &GradingBox) -> Result<Self, MulticomplexError> {
        if grading.dim() != self.dim() {
            return Err(MulticomplexError::Shape("dimension mismatch".into()));
        }
        if let Some(lost) = self.grading.degrees().find(|d| self.rank(d) > 0 && !grading.contains(d)) {
            return Err(MulticomplexError::OutsideSupport(format_degree(&lost)));
        }
        let ranks = grading.degrees().map(|d| self.rank(&d)).collect();
        let diffs = (0..self.dim())
            .map(|k| {
                grading
                    .degrees()
                    .map(|d| {
                        let target = if d[k] > grading.lo(k) { self.rank(&shifted(&d, k, -1)) } else { 0 };
                        let pick = |which| {
                            let m = self.map(ring, k, &d, which);
                            if m.rows() == target {
                                m
                            } else {
                                Matrix::zeros(ring, target, m.cols())
                            }
                        };
                        DiffPair { d: pick(Differential::D), dt: pick(Differential::Dt) }
                    })
                    .collect()
            })
            .collect();
        Ok(BinaryMulticomplex { grading: grading.clone(), ranks, diffs })
    }

    /// Smallest box holding every nonzero rank (the origin for the zero
    /// object).
    pub fn minimal_support(&self) -> GradingBox {
        let nonzero: Vec<Vec<i64>> = self.grading.degrees().filter(|d| self.rank(d) > 0).collect();
        let Some(first) = nonzero.first() else {
            return GradingBox::origin(self.dim());
        };
        let mut bounds: Vec<(i64, i64)> = first.iter().map(|&x| (x, x)).collect();
        for d in &nonzero {
            for (b, &x) in bounds.iter_mut().zip(d) {
                b.0 = b.0.min(x);
                b.1 = b.1.max(x);
            }
        }
        GradingBox::new(bounds).expect("nonempty bounds")
    }

    pub fn trimmed<R: Ring<Elem = E>>(&self, ring: &R) -> Self {
        self.regrade(ring, &self.minimal_support()).expect("minimal support holds every rank")
    }

    /// Transport of structure along degreewise isomorphisms `g` (with
    /// inverse `g_inv`): `d' = g · d · g⁻¹` in every direction.
    pub fn conjugate<R: Ring<Elem = E>>(&self, ring: &R, g: &GradedMap<E>, g_inv: &GradedMap<E>) -> Self {
        let block = |m: &GradedMap<E>, d: &[i64]| {
            let r = self.rank(d);
            m.block_or_zero(ring, d, r, r)
        };
        let diffs = (0..self.dim())
            .map(|k| {
                self.grading
                    .degrees()
                    .map(|d| {
                        let left = block(g, &shifted(&d, k, -1));
                        let right = block(g_inv, &d);
                        let pair = self.diff(k, &d).expect("degree in support");
                        DiffPair {
                            d: left.mul(ring, &pair.d).mul(ring, &right),
                            dt: left.mul(ring, &pair.dt).mul(ring, &right),
                        }
                    })
                    .collect()
            })
            .collect();
        BinaryMulticomplex { grading: self.grading.clone(), ranks: self.ranks.clone(), diffs }
    }

    /// Replaces the pair in one direction by the given per-degree matrices.
    #[cfg(test)]
    pub(crate) fn with_direction(&self, dir: usize, pairs: Vec<DiffPair<E>>) -> Self {
        let mut out = self.clone();
        out.diffs[dir] = pairs;
        out
    }
}

/// Degreewise direct sum over the union of the supports.
pub fn multicomplex_direct_sum<R: Ring>(
    ring: &R,
    a: &BinaryMulticomplex<R::Elem>,
    b: &BinaryMulticomplex<R::Elem>,
) -> BinaryMulticomplex<R::Elem> {
    assert_eq!(a.dim(), b.dim(), "direct sum of multicomplexes of different dimension");
    let grading = a.grading.union(&b.grading);
    let ranks = grading.degrees().map(|d| a.rank(&d) + b.rank(&d)).collect();
    let diffs = (0..a.dim())
        .map(|k| {
            grading
                .degrees()
                .map(|d| {
                    let sum = |which| {
                        let (x, y) = (a.map(ring, k, &d, which), b.map(ring, k, &d, which));
                        let m = x.block_diag(ring, &y);
                        if d[k] == grading.lo(k) {
                            Matrix::zeros(ring, 0, m.cols())
                        } else {
                            m
                        }
                    };
                    DiffPair { d: sum(Differential::D), dt: sum(Differential::Dt) }
                })
                .collect()
        })
        .collect();
    BinaryMulticomplex { grading, ranks, diffs }
}

/// External tensor product: an `n`-dimensional and an `m`-dimensional
/// multicomplex give an `(n+m)`-dimensional one, with `d ⊗ 1` in the first
/// `n` directions and `1 ⊗ d` in the rest. The two families commute without
/// signs.
pub fn tensor<R: Ring>(
    ring: &R,
    a: &BinaryMulticomplex<R::Elem>,
    b: &BinaryMulticomplex<R::Elem>,
) -> BinaryMulticomplex<R::Elem> {
    let grading = a.grading.concat(&b.grading);
    let split = |d: &[i64]| (d[..a.dim()].to_vec(), d[a.dim()..].to_vec());
    let ranks = grading
        .degrees()
        .map(|d| {
            let (x, y) = split(&d);
            a.rank(&x) * b.rank(&y)
        })
        .collect();
    let diffs = (0..grading.dim())
        .map(|k| {
            grading
                .degrees()
                .map(|d| {
                    let (x, y) = split(&d);
                    let pair = |which| {
                        if k < a.dim() {
                            a.map(ring, k, &x, which).kronecker(ring, &Matrix::identity(ring, b.rank(&y)))
                        } else {
                            Matrix::identity(ring, a.rank(&x)).kronecker(ring, &b.map(ring, k - a.dim(), &y, which))
                        }
                    };
                    DiffPair { d: pair(Differential::D), dt: pair(Differential::Dt) }
                })
                .collect()
        })
        .collect();
    BinaryMulticomplex { grading, ranks, diffs }
}

/// `Δ(N, d) = (N, d, d)`, a one-dimensional binary complex.
pub fn diagonal_embed<R: Ring>(ring: &R, c: &FreeComplex<R::Elem>) -> BinaryMulticomplex<R::Elem> {
    let grading = GradingBox::new(vec![(c.lo(), c.hi())]).expect("complex support is nonempty");
    let ranks = c.ranks().to_vec();
    let pairs = c
        .degrees()
        .map(|i| {
            let d = c.diff_or_zero(ring, i);
            let d = if i == c.lo() { Matrix::zeros(ring, 0, d.cols()) } else { d };
            DiffPair { d: d.clone(), dt: d }
        })
        .collect();
    BinaryMulticomplex { grading, ranks, diffs: vec![pairs] }
}

/// First direction in which the two differentials agree everywhere.
pub fn diagonal_direction<E: Clone + PartialEq>(b: &BinaryMulticomplex<E>) -> Option<usize> {
    (0..b.dim()).find(|&k| b.diffs[k].iter().all(|p| p.d == p.dt))
}

/// Diagonal in at least one direction.
pub fn is_diagonal<E: Clone + PartialEq>(b: &BinaryMulticomplex<E>) -> bool {
    diagonal_direction(b).is_some()
}

/// One failed equation found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    SupportExceedsWindow { support: GradingBox },
    NotSquareZero { dir: usize, which: Differential, at: Vec<i64> },
    NotCommuting { i: usize, j: usize, first: Differential, second: Differential, at: Vec<i64> },
    NuShape { at: Vec<i64> },
    NuNotNilpotent { at: Vec<i64> },
    NuNotCommuting { dir: usize, which: Differential, at: Vec<i64> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SupportExceedsWindow { support } => {
                write!(f, "support exceeds window: {support} is not inside [0,2]^{}", support.dim())
            }
            Violation::NotSquareZero { dir, which, at } => {
                write!(f, "{which}^{0}·{which}^{0} ≠ 0 at {1}", dir + 1, format_degree(at))
            }
            Violation::NotCommuting { i, j, first, second, at } => write!(
                f,
                "directions ({}, {}) at {}: {first}^{0}·{second}^{1} ≠ {second}^{1}·{first}^{0}",
                i + 1,
                j + 1,
                format_degree(at)
            ),
            Violation::NuShape { at } => write!(f, "ν at {} has the wrong shape", format_degree(at)),
            Violation::NuNotNilpotent { at } => write!(f, "ν at {} is not nilpotent", format_degree(at)),
            Violation::NuNotCommuting { dir, which, at } => {
                write!(f, "ν does not commute with {which}^{} at {}", dir + 1, format_degree(at))
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "pass");
        }
        let lines: Vec<String> = self.violations.iter().map(Violation::to_string).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Checks every squaring and cross-commutation equation; with `window`
/// also requires the support to lie in `[0,2]^n`.
pub fn validate<R: Ring>(ring: &R, b: &BinaryMulticomplex<R::Elem>, window: bool) -> ValidationReport {
    let mut violations = Vec::new();
    let g = &b.grading;
    if window && !b.minimal_support().within_window(0, 2) {
        violations.push(Violation::SupportExceedsWindow { support: b.minimal_support() });
    }
    for d in g.degrees() {
        for k in 0..b.dim() {
            if d[k] < g.lo(k) + 2 {
                continue;
            }
            let below = shifted(&d, k, -1);
            for which in Differential::BOTH {
                let m = b.map(ring, k, &below, which).mul(ring, &b.map(ring, k, &d, which));
                if !m.is_zero(ring) {
                    violations.push(Violation::NotSquareZero { dir: k, which, at: d.clone() });
                }
            }
        }
        for i in 0..b.dim() {
            for j in i + 1..b.dim() {
                if d[i] == g.lo(i) || d[j] == g.lo(j) {
                    continue;
                }
                let (di, dj) = (shifted(&d, i, -1), shifted(&d, j, -1));
                for first in Differential::BOTH {
                    for second in Differential::BOTH {
                        let lhs = b.map(ring, i, &dj, first).mul(ring, &b.map(ring, j, &d, second));
                        let rhs = b.map(ring, j, &di, second).mul(ring, &b.map(ring, i, &d, first));
                        if lhs != rhs {
                            violations.push(Violation::NotCommuting { i, j, first, second, at: d.clone() });
                        }
                    }
                }
            }
        }
    }
    ValidationReport { violations }
}

/// A line complex that is not acyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFailure {
    pub dir: usize,
    pub start: Vec<i64>,
    pub which: Differential,
    /// Degree along the line where homology first fails to vanish, or where
    /// the differential does not square to zero.
    pub degree: i64,
    pub not_a_complex: bool,
}

impl fmt::Display for LineFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = if self.not_a_complex { "is not a complex" } else { "has nonzero homology" };
        write!(
            f,
            "{}^{} line through {} {what} at degree {}",
            self.which,
            self.dir + 1,
            format_degree(&self.start),
            self.degree
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AcyclicityReport {
    pub lines_checked: usize,
    pub failures: Vec<LineFailure>,
}

impl AcyclicityReport {
    pub fn is_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs the acyclicity check on every line, in every direction, for both
/// differentials. Failures are listed in (direction, line, d before dt)
/// order.
pub fn check_acyclic<R: Ring>(ring: &R, b: &BinaryMulticomplex<R::Elem>) -> AcyclicityReport {
    let mut report = AcyclicityReport::default();
    for k in 0..b.dim() {
        for start in b.grading.line_starts(k) {
            for which in Differential::BOTH {
                report.lines_checked += 1;
                let line = b.line_complex(ring, k, &start, which);
                let failure = match acyclicity_witness(ring, &line) {
                    Ok(Acyclicity::Acyclic(_)) => None,
                    Ok(Acyclicity::NotAcyclic { degree }) => Some((degree, false)),
                    Err(ComplexError::NotAComplex(degree)) => Some((degree, true)),
                    Err(ComplexError::ShapeMismatch(_)) => unreachable!("lines are well formed"),
                };
                if let Some((degree, not_a_complex)) = failure {
                    report.failures.push(LineFailure { dir: k, start: start.clone(), which, degree, not_a_complex });
                }
            }
        }
    }
    report
}
