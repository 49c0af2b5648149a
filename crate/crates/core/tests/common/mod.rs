//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use nilk::complexes::FreeComplex;
use nilk::ledger::{EqualityWitness, SesMaps};
use nilk::multicomplex::{
    multicomplex_direct_sum, sum_inclusion, sum_projection, tensor, BinaryMulticomplex, GradedMap, GradingBox,
    MulticomplexBuilder, NilBinaryMulticomplex,
};
use nilk::ring_core::{Matrix, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Ring>(ring: &R, rng: &mut TestRng, rows: usize, cols: usize, bound: i64) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.from_i64(rng.gen_range(-bound..=bound)))
}

/// A random product of elementary matrices, with its inverse tracked
/// alongside.
pub fn unimodular<R: Ring>(ring: &R, rng: &mut TestRng, n: usize) -> (Matrix<R::Elem>, Matrix<R::Elem>) {
    let mut g = Matrix::identity(ring, n);
    let mut g_inv = Matrix::identity(ring, n);
    if n == 0 {
        return (g, g_inv);
    }
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            if rng.gen_bool(0.3) {
                let m = ring.from_i64(-1);
                g.scale_row(ring, i, &m);
                g_inv.scale_col(ring, i, &m);
            }
            continue;
        }
        let c = rng.gen_range(-2..=2);
        // g <- (I + c e_ij) g,  g_inv <- g_inv (I - c e_ij)
        g.add_row_multiple(ring, i, j, &ring.from_i64(c));
        g_inv.add_col_multiple(ring, j, i, &ring.from_i64(-c));
    }
    debug_assert!(g.mul(ring, &g_inv).is_identity(ring));
    (g, g_inv)
}

/// `P U P^-1` with `U` strictly upper triangular, entries in `[-3, 3]`.
pub fn nilpotent<R: Ring>(ring: &R, rng: &mut TestRng, n: usize) -> Matrix<R::Elem> {
    let u = Matrix::from_fn(n, n, |i, j| if j > i { ring.from_i64(rng.gen_range(-3..=3)) } else { ring.zero() });
    let (p, p_inv) = unimodular(ring, rng, n);
    p.mul(ring, &u).mul(ring, &p_inv)
}

pub struct SampledComplex<E> {
    pub complex: FreeComplex<E>,
    /// Known from the construction, independently of any homology computation.
    pub acyclic: bool,
}

/// A sum of two-term pieces `R --s--> R` and lone copies of `R`, conjugated
/// degreewise by random unimodular matrices. Acyclic exactly when there are
/// no lone pieces and every `s` is a unit.
pub fn random_complex<R: Ring>(
    ring: &R,
    rng: &mut TestRng,
    max_len: usize,
    max_rank: usize,
    force_acyclic: bool,
) -> SampledComplex<R::Elem> {
    let len = rng.gen_range(1..=max_len) as i64;
    let lo = rng.gen_range(-2..=2);
    let hi = lo + len - 1;
    let mut ranks = vec![0usize; len as usize];
    let mut edges: Vec<(i64, i64)> = Vec::new();
    let mut lone = 0;
    for _ in 0..rng.gen_range(0..=2 * max_rank) {
        if len >= 2 && (force_acyclic || rng.gen_bool(0.7)) {
            let i = rng.gen_range(lo + 1..=hi);
            let (top, bottom) = ((i - lo) as usize, (i - 1 - lo) as usize);
            if ranks[top] < max_rank && ranks[bottom] < max_rank {
                let s = if force_acyclic || rng.gen_bool(0.6) {
                    if rng.gen_bool(0.5) {
                        1
                    } else {
                        -1
                    }
                } else {
                    [0, 2, 3, 4][rng.gen_range(0..4)]
                };
                ranks[top] += 1;
                ranks[bottom] += 1;
                edges.push((i, s));
            }
        } else if !force_acyclic {
            let k = rng.gen_range(0..len as usize);
            if ranks[k] < max_rank {
                ranks[k] += 1;
                lone += 1;
            }
        }
    }
    let acyclic = lone == 0 && edges.iter().all(|&(_, s)| ring.is_unit(&ring.from_i64(s)));

    let mut diffs: Vec<Matrix<R::Elem>> =
        (lo + 1..=hi).map(|i| Matrix::zeros(ring, ranks[(i - 1 - lo) as usize], ranks[(i - lo) as usize])).collect();
    let mut used = vec![0usize; len as usize];
    for &(i, s) in &edges {
        let (top, bottom) = ((i - lo) as usize, (i - 1 - lo) as usize);
        diffs[bottom].set(used[bottom], used[top], ring.from_i64(s));
        used[top] += 1;
        used[bottom] += 1;
    }
    let g: Vec<_> = ranks.iter().map(|&r| unimodular(ring, rng, r)).collect();
    let diffs = diffs.iter().enumerate().map(|(k, d)| g[k].0.mul(ring, d).mul(ring, &g[k + 1].1)).collect();
    SampledComplex { complex: FreeComplex::new(lo, hi, ranks, diffs).expect("consistent shapes"), acyclic }
}

/// A random degreewise automorphism `(g, g^-1)` of `b`.
pub fn graded_automorphism<R: Ring>(
    ring: &R,
    rng: &mut TestRng,
    b: &BinaryMulticomplex<R::Elem>,
) -> (GradedMap<R::Elem>, GradedMap<R::Elem>) {
    let pairs: Vec<_> = b.grading().degrees().map(|d| unimodular(ring, rng, b.rank(&d))).collect();
    let (fwd, inv) = pairs.into_iter().unzip();
    (GradedMap::new(b.grading().clone(), fwd), GradedMap::new(b.grading().clone(), inv))
}

/// One-dimensional: an acyclic complex with `dt` its conjugate by a graded
/// automorphism. Higher dimensions: tensor products, then conjugated.
pub fn random_acyclic_binary<R: Ring>(
    ring: &R,
    rng: &mut TestRng,
    dim: usize,
    max_len: usize,
    max_rank: usize,
) -> BinaryMulticomplex<R::Elem> {
    let line = |rng: &mut TestRng| {
        let c = random_complex(ring, rng, max_len, max_rank, true).complex;
        let g: Vec<_> = c.ranks().iter().map(|&r| unimodular(ring, rng, r)).collect();
        let grading = GradingBox::new(vec![(c.lo(), c.hi())]).unwrap();
        let mut b = MulticomplexBuilder::new(grading);
        for i in c.degrees() {
            b.rank(&[i], c.rank(i)).unwrap();
        }
        for i in c.lo() + 1..=c.hi() {
            let k = (i - c.lo()) as usize;
            let d = c.diff_or_zero(ring, i);
            let dt = g[k - 1].0.mul(ring, &d).mul(ring, &g[k].1);
            b.diff(0, &[i], d, dt).unwrap();
        }
        b.build(ring).unwrap()
    };
    let mut out = line(rng);
    for _ in 1..dim {
        out = tensor(ring, &out, &line(rng));
    }
    let (g, g_inv) = graded_automorphism(ring, rng, &out);
    out.conjugate(ring, &g, &g_inv)
}

/// `X ⊗ R^k` with every differential `d ⊗ 1`.
pub fn inflate<R: Ring>(ring: &R, x: &BinaryMulticomplex<R::Elem>, k: usize) -> BinaryMulticomplex<R::Elem> {
    let id = Matrix::identity(ring, k);
    let mut b = MulticomplexBuilder::new(x.grading().clone());
    for d in x.grading().degrees() {
        b.rank(&d, x.rank(&d) * k).unwrap();
        for dir in 0..x.dim() {
            let pair = x.diff(dir, &d).unwrap();
            b.diff(dir, &d, pair.d.kronecker(ring, &id), pair.dt.kronecker(ring, &id)).unwrap();
        }
    }
    b.build(ring).unwrap()
}

pub struct DecoratedSample<E> {
    pub object: NilBinaryMulticomplex<E>,
    /// Underlying acyclic object before inflation.
    pub core: BinaryMulticomplex<E>,
    pub k: usize,
    /// The conjugation applied after inflating.
    pub h: (GradedMap<E>, GradedMap<E>),
}

/// `(X ⊗ R^k, 1 ⊗ N)` conjugated by a random graded automorphism.
pub fn random_nil_binary<R: Ring>(ring: &R, rng: &mut TestRng, dim: usize) -> DecoratedSample<R::Elem> {
    let (len, rank) = if dim == 1 { (4, 3) } else { (3, 2) };
    let core = random_acyclic_binary(ring, rng, dim, len, rank);
    let k = rng.gen_range(1..=3);
    let n = nilpotent(ring, rng, k);
    let base = inflate(ring, &core, k);
    let nu = GradedMap::from_fn(base.grading().clone(), |d| Matrix::identity(ring, core.rank(d)).kronecker(ring, &n));
    let plain = NilBinaryMulticomplex::new(ring, base, nu).expect("1 ⊗ N commutes with d ⊗ 1");
    let h = graded_automorphism(ring, rng, plain.base());
    DecoratedSample { object: plain.conjugate(ring, &h.0, &h.1), core, k, h }
}

/// A chain automorphism `h (1 ⊗ U) h^-1` of a decorated sample's base.
pub fn chain_automorphism<R: Ring>(
    ring: &R,
    rng: &mut TestRng,
    s: &DecoratedSample<R::Elem>,
) -> (GradedMap<R::Elem>, GradedMap<R::Elem>) {
    let (u, u_inv) = unimodular(ring, rng, s.k);
    let grading = s.object.base().grading().clone();
    let at = |m: &Matrix<R::Elem>, d: &[i64]| Matrix::identity(ring, s.core.rank(d)).kronecker(ring, m);
    let fwd = GradedMap::from_fn(grading.clone(), |d| {
        s.h.0.block(d).unwrap().mul(ring, &at(&u, d)).mul(ring, s.h.1.block(d).unwrap())
    });
    let inv = GradedMap::from_fn(grading, |d| {
        s.h.0.block(d).unwrap().mul(ring, &at(&u_inv, d)).mul(ring, s.h.1.block(d).unwrap())
    });
    (fwd, inv)
}

pub struct Extensions<E> {
    pub a: BinaryMulticomplex<E>,
    pub b: BinaryMulticomplex<E>,
    pub c: BinaryMulticomplex<E>,
    pub d: BinaryMulticomplex<E>,
    pub ses_a: SesMaps<E>,
    pub ses_b: SesMaps<E>,
    /// A chain isomorphism `a -> b`.
    pub a_to_b: GradedMap<E>,
}

/// Two differently conjugated extensions of `d` by `c`.
pub fn extensions<R: Ring>(ring: &R, rng: &mut TestRng, dim: usize) -> Extensions<R::Elem> {
    let (len, rank) = if dim == 1 { (3, 2) } else { (2, 1) };
    let c = random_acyclic_binary(ring, rng, dim, len, rank);
    let d = random_acyclic_binary(ring, rng, dim, len, rank);
    let split = multicomplex_direct_sum(ring, &c, &d);
    let (ga, ga_inv) = graded_automorphism(ring, rng, &split);
    let (gb, gb_inv) = graded_automorphism(ring, rng, &split);
    let g = split.grading();
    let (incl, proj) = (sum_inclusion(ring, &c, &d), sum_projection(ring, &c, &d));
    let ses = |gm: &GradedMap<R::Elem>, gm_inv: &GradedMap<R::Elem>| SesMaps {
        iota: GradedMap::from_fn(g.clone(), |x| {
            gm.block(x).unwrap().mul(ring, &incl.block_or_zero(ring, x, split.rank(x), c.rank(x)))
        }),
        pi: GradedMap::from_fn(g.clone(), |x| {
            proj.block_or_zero(ring, x, d.rank(x), split.rank(x)).mul(ring, gm_inv.block(x).unwrap())
        }),
    };
    let (ses_a, ses_b) = (ses(&ga, &ga_inv), ses(&gb, &gb_inv));
    let a_to_b = GradedMap::from_fn(g.clone(), |x| gb.block(x).unwrap().mul(ring, ga_inv.block(x).unwrap()));
    Extensions {
        a: split.conjugate(ring, &ga, &ga_inv),
        b: split.conjugate(ring, &gb, &gb_inv),
        c,
        d,
        ses_a,
        ses_b,
        a_to_b,
    }
}

/// Adds the extensions to both sides of `w`, extending its isomorphism by
/// `a -> b`.
pub fn with_extensions<R: Ring>(
    ring: &R,
    w: EqualityWitness<BinaryMulticomplex<R::Elem>, R::Elem>,
    e: Extensions<R::Elem>,
) -> EqualityWitness<BinaryMulticomplex<R::Elem>, R::Elem> {
    let whole = w.p.grading().union(w.q.grading()).union(e.a.grading());
    let iso = GradedMap::from_fn(whole, |x| {
        let (rp, rq, ra) = (w.p.rank(x), w.q.rank(x), e.a.rank(x));
        w.iso.block_or_zero(ring, x, rq, rp).block_diag(ring, &e.a_to_b.block_or_zero(ring, x, ra, ra))
    });
    EqualityWitness { a: e.a, b: e.b, c: e.c, d: e.d, ses_a: e.ses_a, ses_b: e.ses_b, iso, ..w }
}

/// Evidence for `[p] = [q]` with `q` a conjugate of `p`, padded by a pair of
/// extensions.
pub fn random_equality_witness<R: Ring>(
    ring: &R,
    rng: &mut TestRng,
    dim: usize,
) -> EqualityWitness<BinaryMulticomplex<R::Elem>, R::Elem> {
    let (len, rank) = if dim == 1 { (3, 2) } else { (2, 1) };
    let p = random_acyclic_binary(ring, rng, dim, len, rank);
    let (h, h_inv) = graded_automorphism(ring, rng, &p);
    let q = p.conjugate(ring, &h, &h_inv);
    let e = extensions(ring, rng, dim);
    with_extensions(ring, EqualityWitness::from_iso(ring, p, q, h), e)
}
