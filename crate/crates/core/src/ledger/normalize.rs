use std::fmt;

use crate::multicomplex::{
    decorate_zero_nil, identity_map, is_diagonal, sum_inclusion, sum_projection, transport_nil, validate,
    BinaryMulticomplex, NilBinaryMulticomplex,
};
use crate::ring_core::Ring;

use super::object::{FormalSum, LedgerObject, ObjectKey};
use super::pair::{insert_zero_transform, EqualityWitness, LedgerPair};
use super::store::{LedgerError, RelationWitness};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LedgerSide {
    Plain,
    Nil,
}

impl fmt::Display for LedgerSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LedgerSide::Plain => "plain",
            LedgerSide::Nil => "nil",
        })
    }
}

/// One equation `lhs = rhs` of a transcript, derivable in `side` from the
/// relations listed in `witnesses`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptStep {
    pub label: String,
    pub side: LedgerSide,
    pub lhs: FormalSum,
    pub rhs: FormalSum,
    pub mod_diagonal: bool,
    pub witnesses: Vec<usize>,
    pub note: Option<String>,
}

/// `sign · ([with_nu] - [with_zero])`, both on the same underlying object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NilPair {
    pub with_nu: ObjectKey,
    pub with_zero: ObjectKey,
    pub base: ObjectKey,
    pub sign: i64,
}

impl NilPair {
    pub fn as_sum(&self) -> FormalSum {
        FormalSum::from_terms([(self.with_nu.clone(), self.sign), (self.with_zero.clone(), -self.sign)])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationTranscript {
    pub input: FormalSum,
    pub steps: Vec<TranscriptStep>,
    /// Whether the cofinality pad was the zero object.
    pub pad_empty: bool,
    /// Pairs surviving after dropping zero decorations and diagonal bases.
    pub normal_form: Vec<NilPair>,
    /// Sum of `normal_form`; equal to `input` modulo the diagonal relations.
    pub residual: FormalSum,
    pub already_normal: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NormalizeOptions {
    /// Require every object involved to be supported in `[0,2]^n`.
    pub window_02: bool,
}

fn step<R: Ring>(
    pair: &LedgerPair<R>,
    label: &str,
    side: LedgerSide,
    lhs: FormalSum,
    rhs: FormalSum,
    mod_diagonal: bool,
    note: Option<&str>,
) -> Result<TranscriptStep, LedgerError> {
    let derivation = match side {
        LedgerSide::Plain => pair.plain().derive(&lhs, &rhs, mod_diagonal)?,
        LedgerSide::Nil => pair.nil().derive(&lhs, &rhs, mod_diagonal)?,
    };
    let derivation = derivation.ok_or_else(|| LedgerError::BadWitness(format!("step {label:?} is not derivable")))?;
    Ok(TranscriptStep {
        label: label.to_string(),
        side,
        lhs,
        rhs,
        mod_diagonal,
        witnesses: derivation.relation_ids(),
        note: note.map(str::to_string),
    })
}

/// Splits `x` into `[P] - [F]`.
fn split_difference(x: &FormalSum) -> Option<(ObjectKey, ObjectKey)> {
    let terms: Vec<(&ObjectKey, i64)> = x.terms().collect();
    match terms.as_slice() {
        [(a, 1), (b, -1)] => Some(((*a).clone(), (*b).clone())),
        [(a, -1), (b, 1)] => Some(((*b).clone(), (*a).clone())),
        _ => None,
    }
}

/// Rewrites `x = [(P, ν)] - [(F, ν̃)]`, whose forgetful image vanishes by
/// `witness`, as a combination of differences `[(F', ν')] - [(F', 0)]` over
/// a common underlying object, then drops the pairs on diagonal objects
/// modulo diagonal relations.
///
/// Every equation of the returned transcript is derivable in the pair's
/// ledgers; witnesses it needs are recorded along the way.
pub fn normalize_nil_generator<R: Ring>(
    pair: &mut LedgerPair<R>,
    x: &FormalSum,
    witness: Option<&EqualityWitness<BinaryMulticomplex<R::Elem>, R::Elem>>,
    opts: NormalizeOptions,
) -> Result<NormalizationTranscript, LedgerError> {
    let ring = pair.ring().clone();
    let hypothesis = |msg: String| LedgerError::HypothesisFailed(msg);
    for k in x.keys() {
        pair.nil().object(k)?;
    }
    if x.is_zero() {
        return Ok(NormalizationTranscript {
            input: x.clone(),
            steps: vec![],
            pad_empty: true,
            normal_form: vec![],
            residual: FormalSum::zero(),
            already_normal: true,
        });
    }
    let (p_key, f_key) = split_difference(x).ok_or_else(|| hypothesis(format!("{x} is not of the form [P] - [F]")))?;
    let p = pair.nil().object(&p_key)?.clone();
    let f = pair.nil().object(&f_key)?.clone();
    if opts.window_02 {
        for (name, obj) in [("P", &p), ("F", &f)] {
            let report = validate(&ring, obj.base(), true);
            if !report.is_pass() {
                return Err(hypothesis(format!("{name}: {report}")));
            }
        }
    }
    let (p_base, f_base) = (pair.forget_key(&p_key)?, pair.forget_key(&f_key)?);

    if p_base == f_base && f.is_zero_nil(&ring) && !is_diagonal(p.base()) {
        let identity = step(pair, "identity", LedgerSide::Nil, x.clone(), x.clone(), false, None)?;
        let normal = NilPair { with_nu: p_key, with_zero: f_key, base: p_base, sign: 1 };
        return Ok(NormalizationTranscript {
            input: x.clone(),
            steps: vec![identity],
            pad_empty: true,
            normal_form: vec![normal],
            residual: x.clone(),
            already_normal: true,
        });
    }

    if witness.is_none() && p_base != f_base {
        return Err(hypothesis("an equality witness is needed when P and F have different underlying objects".into()));
    }
    let mut steps = Vec::new();
    let forgotten = pair.forgetful_image(x)?;
    if let Some(w) = witness {
        w.verify(&ring)?;
        let (wp, wq) = (w.p.key(&ring), w.q.key(&ring));
        let matches = (wp == p_base && wq == f_base) || (wp == f_base && wq == p_base);
        if !matches {
            return Err(hypothesis("the equality witness is not about the underlying objects of x".into()));
        }
        w.record(pair)?;
    }
    if !pair.plain().equal_mod_relations(&forgotten, &FormalSum::zero(), false)? {
        return Err(hypothesis("the forgetful image of x is not derivably zero".into()));
    }
    steps.push(step(pair, "hypothesis", LedgerSide::Plain, forgotten, FormalSum::zero(), false, None)?);

    // Cofinality: every object over a PID is already free, so the pad is the
    // zero object and alpha the identity.
    let dim = pair.dim();
    let pad = BinaryMulticomplex::zero(&ring, dim);
    let pad_nil = decorate_zero_nil(&ring, &pad);
    let alpha = identity_map(&ring, p.base());
    let transported = transport_nil(&ring, &alpha, &p, &pad, p.base())
        .map_err(|e| LedgerError::BadWitness(format!("cofinality: {e}")))?;
    let padded = <NilBinaryMulticomplex<R::Elem> as LedgerObject<R>>::direct_sum(&ring, &p, &pad_nil);
    let q0 = pair.register_nil(&pad_nil)?;
    let padded_key = pair.register_nil(&padded)?;
    let tilde_nu = pair.register_nil(&transported)?;
    pair.relate_nil(RelationWitness::Ses {
        left: p_key.clone(),
        middle: padded_key.clone(),
        right: q0.clone(),
        iota: sum_inclusion(&ring, p.base(), &pad),
        pi: sum_projection(&ring, p.base(), &pad),
    })?;
    pair.relate_nil(RelationWitness::Iso { source: padded_key, target: tilde_nu.clone(), alpha })?;
    steps.push(step(
        pair,
        "zero can be put",
        LedgerSide::Nil,
        FormalSum::from_terms([(p_key.clone(), 1), (q0.clone(), 1)]),
        FormalSum::class(&tilde_nu),
        false,
        Some("pad is the zero object: over a PID every object is already free"),
    )?);

    // Insert zero into the plain equality [F] + [Q] = [F~].
    let tilde_zero = pair.register_nil(&decorate_zero_nil(&ring, transported.base()))?;
    let f_zero = pair.register_nil(&decorate_zero_nil(&ring, f.base()))?;
    let plain_witness = match witness {
        Some(w) => w.clone(),
        None => EqualityWitness::identity(&ring, f.base().clone()),
    };
    insert_zero_transform(pair, &plain_witness)?;
    steps.push(step(
        pair,
        "insert zero",
        LedgerSide::Nil,
        FormalSum::from_terms([(f_zero.clone(), 1), (q0, 1)]),
        FormalSum::class(&tilde_zero),
        false,
        None,
    )?);

    let before = FormalSum::from_terms([(tilde_nu.clone(), 1), (tilde_zero.clone(), -1), (f_zero.clone(), 1)]);
    steps.push(step(pair, "before final expression", LedgerSide::Nil, FormalSum::class(&p_key), before, false, None)?);

    let candidates = [
        NilPair { with_nu: tilde_nu, with_zero: tilde_zero, base: p_base, sign: 1 },
        NilPair { with_nu: f_key, with_zero: f_zero, base: f_base, sign: -1 },
    ];
    let final_expression = candidates.iter().fold(FormalSum::zero(), |acc, c| acc.plus(&c.as_sum()));
    steps.push(step(pair, "final expression", LedgerSide::Nil, x.clone(), final_expression, false, None)?);

    let mut normal_form = Vec::new();
    let mut dropped_diagonal = false;
    for c in candidates {
        if c.with_nu == c.with_zero {
            continue;
        }
        if is_diagonal(pair.plain().object(&c.base)?) {
            pair.relate_nil(diagonal_witness(pair, &c.with_nu)?)?;
            pair.relate_nil(diagonal_witness(pair, &c.with_zero)?)?;
            dropped_diagonal = true;
            continue;
        }
        normal_form.push(c);
    }
    let residual = normal_form.iter().fold(FormalSum::zero(), |acc, c| acc.plus(&c.as_sum()));
    if dropped_diagonal {
        steps.push(step(pair, "modulo diagonal objects", LedgerSide::Nil, x.clone(), residual.clone(), true, None)?);
    }
    Ok(NormalizationTranscript {
        input: x.clone(),
        steps,
        pad_empty: true,
        normal_form,
        residual,
        already_normal: false,
    })
}

fn diagonal_witness<R: Ring>(pair: &LedgerPair<R>, key: &ObjectKey) -> Result<RelationWitness<R::Elem>, LedgerError> {
    let direction = crate::multicomplex::diagonal_direction(pair.nil().object(key)?.base())
        .ok_or_else(|| LedgerError::BadWitness("diagonal: no direction with d = dt".into()))?;
    Ok(RelationWitness::Diagonal { object: key.clone(), direction })
}

/// Re-derives every step of `t` in `pair`.
pub fn verify_transcript<R: Ring>(pair: &LedgerPair<R>, t: &NormalizationTranscript) -> Result<(), LedgerError> {
    for s in &t.steps {
        let derivation = match s.side {
            LedgerSide::Plain => pair.plain().derive(&s.lhs, &s.rhs, s.mod_diagonal)?,
            LedgerSide::Nil => pair.nil().derive(&s.lhs, &s.rhs, s.mod_diagonal)?,
        };
        let derivation =
            derivation.ok_or_else(|| LedgerError::BadWitness(format!("step {:?} is not derivable", s.label)))?;
        match s.side {
            LedgerSide::Plain => pair.plain().verify_derivation(&s.lhs, &s.rhs, &derivation, s.mod_diagonal)?,
            LedgerSide::Nil => pair.nil().verify_derivation(&s.lhs, &s.rhs, &derivation, s.mod_diagonal)?,
        }
    }
    let residual = t.normal_form.iter().fold(FormalSum::zero(), |acc, c| acc.plus(&c.as_sum()));
    if residual != t.residual {
        return Err(LedgerError::BadWitness("residual differs from the sum of the normal form".into()));
    }
    for c in &t.normal_form {
        if pair.forget_key(&c.with_nu)? != c.base || pair.forget_key(&c.with_zero)? != c.base {
            return Err(LedgerError::BadWitness("a normal-form pair does not share its underlying object".into()));
        }
    }
    if !pair.nil().equal_mod_relations(&t.input, &t.residual, true)? {
        return Err(LedgerError::BadWitness("input and residual differ modulo diagonal relations".into()));
    }
    Ok(())
}
