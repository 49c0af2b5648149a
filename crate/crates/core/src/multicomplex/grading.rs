use std::fmt;

/// A box `[lo_1, hi_1] × ... × [lo_n, hi_n]` of multidegrees, enumerated in
/// ascending lexicographic order (last coordinate fastest).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradingBox {
    bounds: Vec<(i64, i64)>,
}

impl GradingBox {
    /// `None` if the box is zero-dimensional or some interval is empty.
    pub fn new(bounds: Vec<(i64, i64)>) -> Option<Self> {
        if bounds.is_empty() || bounds.iter().any(|&(lo, hi)| lo > hi) {
            return None;
        }
        Some(GradingBox { bounds })
    }

    /// The single multidegree `(0, ..., 0)`.
    pub fn origin(dim: usize) -> Self {
        assert!(dim > 0);
        GradingBox { bounds: vec![(0, 0); dim] }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.bounds
    }

    pub fn lo(&self, k: usize) -> i64 {
        self.bounds[k].0
    }

    pub fn hi(&self, k: usize) -> i64 {
        self.bounds[k].1
    }

    fn extent(&self, k: usize) -> usize {
        (self.bounds[k].1 - self.bounds[k].0 + 1) as usize
    }

    pub fn volume(&self) -> usize {
        (0..self.dim()).map(|k| self.extent(k)).product()
    }

    pub fn contains(&self, degree: &[i64]) -> bool {
        degree.len() == self.dim() && degree.iter().zip(&self.bounds).all(|(x, &(lo, hi))| lo <= *x && *x <= hi)
    }

    pub fn contains_box(&self, other: &GradingBox) -> bool {
        self.dim() == other.dim() && self.bounds.iter().zip(&other.bounds).all(|(a, b)| a.0 <= b.0 && b.1 <= a.1)
    }

    pub fn index_of(&self, degree: &[i64]) -> Option<usize> {
        if !self.contains(degree) {
            return None;
        }
        let mut idx = 0;
        for k in 0..self.dim() {
            idx = idx * self.extent(k) + (degree[k] - self.lo(k)) as usize;
        }
        Some(idx)
    }

    pub fn degree_at(&self, mut idx: usize) -> Vec<i64> {
        let mut degree = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            let e = self.extent(k);
            degree[k] = self.lo(k) + (idx % e) as i64;
            idx /= e;
        }
        degree
    }

    /// All multidegrees in lexicographic order.
    pub fn degrees(&self) -> impl Iterator<Item = Vec<i64>> + '_ {
        (0..self.volume()).map(|i| self.degree_at(i))
    }

    /// Smallest box containing both.
    pub fn union(&self, other: &GradingBox) -> GradingBox {
        assert_eq!(self.dim(), other.dim(), "union of boxes of different dimension");
        GradingBox {
            bounds: self.bounds.iter().zip(&other.bounds).map(|(a, b)| (a.0.min(b.0), a.1.max(b.1))).collect(),
        }
    }

    pub fn within_window(&self, lo: i64, hi: i64) -> bool {
        self.bounds.iter().all(|&(a, b)| lo <= a && b <= hi)
    }

    /// Starting points of the lines in direction `k`: degrees with the `k`-th
    /// coordinate at its lower bound.
    pub fn line_starts(&self, k: usize) -> Vec<Vec<i64>> {
        self.degrees().filter(|d| d[k] == self.lo(k)).collect()
    }

    pub fn concat(&self, other: &GradingBox) -> GradingBox {
        let mut bounds = self.bounds.clone();
        bounds.extend_from_slice(&other.bounds);
        GradingBox { bounds }
    }
}

impl fmt::Display for GradingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bounds.iter().map(|(lo, hi)| format!("[{lo},{hi}]")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// `(1,-2,0)`, the textual form of a multidegree.
pub fn format_degree(degree: &[i64]) -> String {
    let parts: Vec<String> = degree.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Inverse of [`format_degree`]; surrounding parentheses are optional.
pub fn parse_degree(text: &str) -> Option<Vec<i64>> {
    let t = text.trim();
    let t = t.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(t);
    t.split(',').map(|p| p.trim().parse().ok()).collect()
}

pub(crate) fn shifted(degree: &[i64], k: usize, by: i64) -> Vec<i64> {
    let mut d = degree.to_vec();
    d[k] += by;
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_indexing() {
        let b = GradingBox::new(vec![(0, 1), (-1, 1)]).unwrap();
        assert_eq!(b.volume(), 6);
        let all: Vec<_> = b.degrees().collect();
        assert_eq!(all[0], vec![0, -1]);
        assert_eq!(all[1], vec![0, 0]);
        assert_eq!(all[3], vec![1, -1]);
        for (i, d) in all.iter().enumerate() {
            assert_eq!(b.index_of(d), Some(i));
        }
        assert_eq!(b.index_of(&[2, 0]), None);
        assert_eq!(b.line_starts(1), vec![vec![0, -1], vec![1, -1]]);
    }

    #[test]
    fn degree_text() {
        assert_eq!(format_degree(&[1, -2]), "(1,-2)");
        assert_eq!(parse_degree("(1,-2)"), Some(vec![1, -2]));
        assert_eq!(parse_degree("3"), Some(vec![3]));
        assert_eq!(parse_degree("(a)"), None);
    }

    #[test]
    fn rejects_empty_boxes() {
        assert!(GradingBox::new(vec![]).is_none());
        assert!(GradingBox::new(vec![(1, 0)]).is_none());
    }
}
