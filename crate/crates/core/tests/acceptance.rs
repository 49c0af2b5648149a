//! Acceptance suite: one pass/fail line per criterion. Exits nonzero if any
//! criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use nilk::complexes::{acyclicity_witness, homology, verify_acyclicity_witness, Acyclicity, FreeComplex};
use nilk::ledger::{
    insert_zero_transform, normalize_nil_generator, verify_transcript, EqualityWitness, FormalSum, Ledger, LedgerPair,
    NormalizeOptions,
};
use nilk::multicomplex::{
    check_acyclic, decorate_zero_nil, diagonal_embed, transport_nil, validate_nil, BinaryMulticomplex, Differential,
};
use nilk::nil_category::{
    filtration_quotients, kernel_filtration, vanishing_certificate, verify_vanishing_certificate, NilObject,
};
use nilk::ring_core::{determinant, smith_normal_form, Integers, Matrix, PrimeField, Ring};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::Rng as _;

type Outcome = Result<String, String>;

/// Objects produced by the other criteria, checked for Euler
/// characteristics at the end.
#[derive(Default)]
struct Corpus {
    complexes: Vec<FreeComplex<BigInt>>,
    complexes_f5: Vec<FreeComplex<u64>>,
    binaries: Vec<BinaryMulticomplex<BigInt>>,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nil_runs<R: Ring>(ring: &R, seed: u64, count: usize) -> Result<(usize, usize), String> {
    let mut r = rng(seed);
    let mut quotients_seen = 0;
    let mut torsion = 0;
    for case in 0..count {
        let n = r.gen_range(1..=6);
        let obj = NilObject::new(ring, n, nilpotent(ring, &mut r, n)).map_err(|e| format!("case {case}: {e}"))?;
        let cert = vanishing_certificate(ring, &obj);
        verify_vanishing_certificate(ring, &cert).map_err(|e| format!("case {case}: {e}"))?;
        let quotients = filtration_quotients(ring, &obj);
        quotients_seen += quotients.len();
        torsion += quotients.iter().filter(|q| !q.is_torsion_free(ring)).count();
        let total = kernel_filtration(ring, &obj)[0].cols()
            + quotients.iter().map(|q| q.free_rank(ring).unwrap_or(0)).sum::<usize>();
        ensure(total == n, || format!("case {case}: quotient ranks sum to {total}, expected {n}"))?;
    }
    Ok((quotients_seen, torsion))
}

fn criteria_1_and_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let runs = nil_runs(&Integers, 1, 200)
        .and_then(|a| nil_runs(&PrimeField::new(5).unwrap(), 2, 200).map(|b| (a.0 + b.0, a.1 + b.1)));
    let elapsed = start.elapsed();
    match runs {
        Err(e) => (Err(e.clone()), Err(format!("criterion 1 did not complete: {e}"))),
        Ok((seen, torsion)) => {
            let first = if elapsed < Duration::from_secs(30) {
                Ok(format!("400 certificates verified in {:.2}s", elapsed.as_secs_f64()))
            } else {
                Err(format!("took {:.2}s, budget 30s", elapsed.as_secs_f64()))
            };
            let second = if torsion == 0 {
                Ok(format!("{seen} filtration quotients, all torsion-free"))
            } else {
                Err(format!("{torsion} of {seen} quotients have torsion"))
            };
            (first, second)
        }
    }
}

fn acyclicity_runs<R: Ring>(
    ring: &R,
    seed: u64,
    count: usize,
    keep: &mut Vec<FreeComplex<R::Elem>>,
) -> Result<usize, String> {
    let mut r = rng(seed);
    let mut acyclic = 0;
    for case in 0..count {
        let c = random_complex(ring, &mut r, 4, 4, false).complex;
        let oracle = c.degrees().all(|i| homology(ring, &c, i).map(|h| h.is_zero(ring)).unwrap_or(false));
        match acyclicity_witness(ring, &c).map_err(|e| format!("case {case}: {e}"))? {
            Acyclicity::Acyclic(w) => {
                ensure(oracle, || format!("case {case}: witness for a complex with homology"))?;
                verify_acyclicity_witness(ring, &c, &w).map_err(|e| format!("case {case}: {e}"))?;
                acyclic += 1;
                keep.push(c);
            }
            Acyclicity::NotAcyclic { degree } => {
                ensure(!oracle, || format!("case {case}: no witness but homology vanishes (degree {degree})"))?;
            }
        }
    }
    Ok(acyclic)
}

fn criterion_3(corpus: &mut Corpus) -> Outcome {
    let start = Instant::now();
    let z = acyclicity_runs(&Integers, 3, 500, &mut corpus.complexes)?;
    let f = acyclicity_runs(&PrimeField::new(5).unwrap(), 4, 500, &mut corpus.complexes_f5)?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {:.2}s, budget 60s", elapsed.as_secs_f64()))?;
    Ok(format!(
        "1000 complexes agree with the homology oracle ({z} + {f} acyclic witnesses re-verified) in {:.2}s",
        elapsed.as_secs_f64()
    ))
}

fn criterion_4(corpus: &Corpus) -> Outcome {
    let mut complexes = 0;
    for c in &corpus.complexes {
        ensure(c.euler_characteristic() == 0, || format!("complex with χ = {}", c.euler_characteristic()))?;
        complexes += 1;
    }
    for c in &corpus.complexes_f5 {
        ensure(c.euler_characteristic() == 0, || format!("complex over F5 with χ = {}", c.euler_characteristic()))?;
        complexes += 1;
    }
    let z = Integers;
    let mut lines = 0;
    for b in &corpus.binaries {
        for k in 0..b.dim() {
            for start in b.grading().line_starts(k) {
                for which in Differential::BOTH {
                    let line = b.line_complex(&z, k, &start, which);
                    if acyclicity_witness(&z, &line).map(|a| a.is_acyclic()).unwrap_or(false) {
                        ensure(line.euler_characteristic() == 0, || {
                            format!("line with χ = {}", line.euler_characteristic())
                        })?;
                        lines += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{complexes} acyclic complexes and {lines} acyclic lines of {} binary multicomplexes have χ = 0",
        corpus.binaries.len()
    ))
}

fn criterion_5(corpus: &mut Corpus) -> Outcome {
    let z = Integers;
    let mut r = rng(5);
    for case in 0..50 {
        let c = loop {
            let c = random_complex(&z, &mut r, 4, 4, true).complex;
            if c.ranks().iter().any(|&n| n > 0) {
                break c;
            }
        };
        let delta = diagonal_embed(&z, &c);
        let mut ledger: Ledger<Integers, BinaryMulticomplex<BigInt>> = Ledger::new(z, 1);
        let key = ledger.register(&delta).map_err(|e| format!("case {case}: {e}"))?;
        ledger.relate_diagonal(&key).map_err(|e| format!("case {case}: {e}"))?;
        let x = FormalSum::class(&key);
        let with = ledger.equal_mod_relations(&x, &FormalSum::zero(), true).map_err(|e| e.to_string())?;
        let without = ledger.equal_mod_relations(&x, &FormalSum::zero(), false).map_err(|e| e.to_string())?;
        ensure(with && !without, || format!("case {case}: mod diagonal {with}, plain {without}"))?;
        corpus.binaries.push(delta);
    }
    Ok("50 diagonal objects: null modulo diagonals only".into())
}

fn criterion_6(corpus: &mut Corpus) -> Outcome {
    let z = Integers;
    let mut r = rng(6);
    for case in 0..100 {
        let dim = 1 + case % 2;
        let s = random_nil_binary(&z, &mut r, dim);
        let (alpha, _) = chain_automorphism(&z, &mut r, &s);
        let pad = BinaryMulticomplex::zero(&z, dim);
        let moved =
            transport_nil(&z, &alpha, &s.object, &pad, s.object.base()).map_err(|e| format!("case {case}: {e}"))?;
        let report = validate_nil(&z, &moved);
        ensure(report.is_pass(), || format!("case {case}: {report}"))?;
        ensure(check_acyclic(&z, moved.base()).failures.is_empty(), || format!("case {case}: base not acyclic"))?;
        let (before, after) = (s.object.nil_index(&z), moved.nil_index(&z));
        ensure(before == after, || format!("case {case}: nilpotency index {before} became {after}"))?;
        corpus.binaries.push(moved.base().clone());
    }
    Ok("100 transported decorations valid, nilpotency index preserved".into())
}

fn criterion_7(corpus: &mut Corpus) -> Outcome {
    let z = Integers;
    let mut r = rng(7);
    for case in 0..50 {
        let dim = 1 + case % 2;
        let w = random_equality_witness(&z, &mut r, dim);
        let mut pair = LedgerPair::new(z, dim);
        let out = insert_zero_transform(&mut pair, &w).map_err(|e| format!("case {case}: {e}"))?;
        out.witness.verify(&z).map_err(|e| format!("case {case}: {e}"))?;
        let equal = pair
            .nil()
            .equal_mod_relations(&FormalSum::class(&out.nil.p), &FormalSum::class(&out.nil.q), false)
            .map_err(|e| e.to_string())?;
        ensure(equal, || format!("case {case}: decorated classes not equal"))?;
        corpus.binaries.extend([w.p, w.q, w.a, w.b]);
    }
    Ok("50 zero-decorated equality witnesses verify in the Nil ledger".into())
}

fn criterion_8(corpus: &mut Corpus) -> Outcome {
    let z = Integers;
    let mut r = rng(8);
    let mut counts = [0usize; 3];
    for case in 0..25 {
        let dim = 1 + case % 2;
        let mut pair = LedgerPair::new(z, dim);
        let kind = case % 5;
        let (x, witness, base) = match kind {
            // conjugate of a zero-decorated object
            0 | 1 => {
                let x_obj = random_acyclic_binary(&z, &mut r, dim, 3, 2);
                let (g, g_inv) = graded_automorphism(&z, &mut r, &x_obj);
                let p = x_obj.conjugate(&z, &g, &g_inv);
                let kp = pair.register_nil(&decorate_zero_nil(&z, &p)).map_err(|e| e.to_string())?;
                let kf = pair.register_nil(&decorate_zero_nil(&z, &x_obj)).map_err(|e| e.to_string())?;
                let w = EqualityWitness::from_iso(&z, p.clone(), x_obj, g_inv);
                (FormalSum::class(&kp).minus(&FormalSum::class(&kf)), Some(w), p)
            }
            // genuine decoration against a conjugated base
            2 | 3 => {
                let s = loop {
                    let s = random_nil_binary(&z, &mut r, dim);
                    if !s.object.is_zero_nil(&z) {
                        break s;
                    }
                };
                let (g, g_inv) = graded_automorphism(&z, &mut r, s.object.base());
                let f_base = s.object.base().conjugate(&z, &g, &g_inv);
                let kp = pair.register_nil(&s.object).map_err(|e| e.to_string())?;
                let kf = pair.register_nil(&decorate_zero_nil(&z, &f_base)).map_err(|e| e.to_string())?;
                let mut w = EqualityWitness::from_iso(&z, s.object.base().clone(), f_base, g);
                if kind == 3 {
                    w = with_extensions(&z, w, extensions(&z, &mut r, dim));
                }
                (FormalSum::class(&kp).minus(&FormalSum::class(&kf)), Some(w), s.object.base().clone())
            }
            // already in normal form
            _ => {
                let s = loop {
                    let s = random_nil_binary(&z, &mut r, dim);
                    if !s.object.is_zero_nil(&z) && !nilk::multicomplex::is_diagonal(s.object.base()) {
                        break s;
                    }
                };
                let kp = pair.register_nil(&s.object).map_err(|e| e.to_string())?;
                let kf = pair.register_nil(&decorate_zero_nil(&z, s.object.base())).map_err(|e| e.to_string())?;
                (FormalSum::class(&kp).minus(&FormalSum::class(&kf)), None, s.object.base().clone())
            }
        };
        let t = normalize_nil_generator(&mut pair, &x, witness.as_ref(), NormalizeOptions::default())
            .map_err(|e| format!("case {case}: {e}"))?;
        verify_transcript(&pair, &t).map_err(|e| format!("case {case}: {e}"))?;
        for c in &t.normal_form {
            let shared = pair.forget_key(&c.with_nu).ok() == Some(c.base.clone())
                && pair.forget_key(&c.with_zero).ok() == Some(c.base.clone());
            ensure(shared, || format!("case {case}: normal-form pair over different bases"))?;
        }
        let image = pair.forgetful_image(&t.residual).map_err(|e| e.to_string())?;
        ensure(image.is_zero(), || format!("case {case}: forgetful image {image}"))?;
        if kind == 4 {
            ensure(t.already_normal && t.residual == x, || format!("case {case}: normal input was rewritten"))?;
        }
        counts[kind.min(4) / 2] += 1;
        corpus.binaries.push(base);
    }
    Ok(format!(
        "25 transcripts re-derived ({} zero-decorated conjugates, {} genuine decorations, {} already normal)",
        counts[0], counts[1], counts[2]
    ))
}

fn det_i64(m: &[Vec<i64>]) -> i64 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        n => (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                sign * m[0][j] * det_i64(&minor)
            })
            .sum(),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (k - 1..n)
        .flat_map(|last| {
            subsets(last, k - 1).into_iter().map(move |mut s| {
                s.push(last);
                s
            })
        })
        .collect()
}

/// Invariant factors from the gcds of `k x k` minors.
fn minors_oracle(m: &[Vec<i64>], rows: usize, cols: usize) -> Vec<BigInt> {
    let mut divisors = vec![BigInt::from(1)];
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                g = g.gcd(&BigInt::from(det_i64(&minor)));
            }
        }
        if g.is_zero() {
            break;
        }
        divisors.push(g);
    }
    divisors.windows(2).map(|w| &w[1] / &w[0]).collect()
}

fn criterion_9() -> Outcome {
    let z = Integers;
    let mut r = rng(9);
    for case in 0..1000 {
        let (rows, cols) = (r.gen_range(1..=4), r.gen_range(1..=4));
        let raw: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| r.gen_range(-4..=4)).collect()).collect();
        let m = Matrix::from_i64(&z, &raw);
        let s = smith_normal_form(&z, &m);
        let expected = minors_oracle(&raw, rows, cols);
        let found = s.invariant_factors();
        ensure(found == expected, || format!("case {case}: {found:?} vs oracle {expected:?}"))?;
        ensure(found.iter().all(|f| f.is_positive()), || format!("case {case}: non-canonical factor"))?;
        ensure(s.u.mul(&z, &m).mul(&z, &s.v) == s.d, || format!("case {case}: UMV ≠ D"))?;
        let units = z.is_unit(&determinant(&z, &s.u)) && z.is_unit(&determinant(&z, &s.v));
        ensure(units, || format!("case {case}: U or V not unimodular"))?;
    }
    Ok("1000 matrices match the gcd-of-minors oracle, UMV = D, det U and det V units".into())
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    })
}

fn main() -> ExitCode {
    let mut corpus = Corpus::default();
    let (c1, c2) = catch_unwind(criteria_1_and_2).unwrap_or_else(|_| {
        let e = Err("panicked".to_string());
        (e.clone(), e)
    });
    let c3 = guarded(|| criterion_3(&mut corpus));
    let c5 = guarded(|| criterion_5(&mut corpus));
    let c6 = guarded(|| criterion_6(&mut corpus));
    let c7 = guarded(|| criterion_7(&mut corpus));
    let c8 = guarded(|| criterion_8(&mut corpus));
    let c4 = guarded(|| criterion_4(&corpus));
    let c9 = guarded(criterion_9);

    let names = [
        "nil vanishing certificates",
        "torsion-free filtration quotients",
        "acyclicity witness vs homology",
        "euler characteristic",
        "diagonal relation",
        "nil transport",
        "insert zero",
        "normalization",
        "smith normal form oracle",
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in names.iter().zip([c1, c2, c3, c4, c5, c6, c7, c8, c9]).enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
