use std::collections::BTreeMap;

use crate::multicomplex::{
    check_chain_iso, check_ses, decorate_zero_nil, identity_map, sum_inclusion, sum_projection, BinaryMulticomplex,
    GradedMap, GradingBox, NilBinaryMulticomplex,
};
use crate::ring_core::{Matrix, Ring};

use super::object::{FormalSum, LedgerObject, ObjectKey};
use super::store::{Ledger, LedgerError, RelationWitness};

/// A plain ledger and a Nil ledger linked by the forgetful map.
///
/// Every Nil object registered here also has its underlying multicomplex
/// registered in the plain ledger, and every Nil relation is mirrored by
/// its forgotten image, so the forgetful map sends relations to relations.
#[derive(Clone, Debug)]
pub struct LedgerPair<R: Ring> {
    plain: Ledger<R, BinaryMulticomplex<R::Elem>>,
    nil: Ledger<R, NilBinaryMulticomplex<R::Elem>>,
    forget: BTreeMap<ObjectKey, ObjectKey>,
}

impl<R: Ring> LedgerPair<R> {
    pub fn new(ring: R, dim: usize) -> Self {
        LedgerPair { plain: Ledger::new(ring.clone(), dim), nil: Ledger::new(ring, dim), forget: BTreeMap::new() }
    }

    pub fn ring(&self) -> &R {
        self.plain.ring()
    }

    pub fn dim(&self) -> usize {
        self.plain.dim()
    }

    pub fn plain(&self) -> &Ledger<R, BinaryMulticomplex<R::Elem>> {
        &self.plain
    }

    pub fn nil(&self) -> &Ledger<R, NilBinaryMulticomplex<R::Elem>> {
        &self.nil
    }

    pub fn register_plain(&mut self, obj: &BinaryMulticomplex<R::Elem>) -> Result<ObjectKey, LedgerError> {
        self.plain.register(obj)
    }

    pub fn register_nil(&mut self, obj: &NilBinaryMulticomplex<R::Elem>) -> Result<ObjectKey, LedgerError> {
        let key = self.nil.register(obj)?;
        let base = self.plain.register(obj.base())?;
        self.forget.insert(key.clone(), base);
        Ok(key)
    }

    pub fn relate_plain(&mut self, witness: RelationWitness<R::Elem>) -> Result<usize, LedgerError> {
        self.plain.relate(witness)
    }

    /// Records a Nil relation together with its forgotten image.
    pub fn relate_nil(&mut self, witness: RelationWitness<R::Elem>) -> Result<usize, LedgerError> {
        let mirror = witness.map_keys(|k| self.forget.get(k).cloned().unwrap_or_else(|| k.clone()));
        let id = self.nil.relate(witness)?;
        self.plain.relate(mirror)?;
        Ok(id)
    }

    /// Key of the underlying plain object.
    pub fn forget_key(&self, key: &ObjectKey) -> Result<ObjectKey, LedgerError> {
        self.forget.get(key).cloned().ok_or_else(|| LedgerError::UnknownKey(key.clone()))
    }

    /// `[(P, ν)] ↦ [P]`, keywise.
    pub fn forgetful_image(&self, x: &FormalSum) -> Result<FormalSum, LedgerError> {
        let mut out = FormalSum::zero();
        for (k, c) in x.terms() {
            out.add_term(&self.forget_key(k)?, c);
        }
        Ok(out)
    }

    pub(crate) fn parts_mut(
        &mut self,
    ) -> (
        &mut Ledger<R, BinaryMulticomplex<R::Elem>>,
        &mut Ledger<R, NilBinaryMulticomplex<R::Elem>>,
        &mut BTreeMap<ObjectKey, ObjectKey>,
    ) {
        (&mut self.plain, &mut self.nil, &mut self.forget)
    }
}

/// Routes registration and relations to the matching side of a pair.
pub trait PairSide<R: Ring>: LedgerObject<R> {
    fn side(pair: &LedgerPair<R>) -> &Ledger<R, Self>;
    fn register_in(pair: &mut LedgerPair<R>, obj: &Self) -> Result<ObjectKey, LedgerError>;
    fn relate_in(pair: &mut LedgerPair<R>, witness: RelationWitness<R::Elem>) -> Result<usize, LedgerError>;
}

impl<R: Ring> PairSide<R> for BinaryMulticomplex<R::Elem> {
    fn side(pair: &LedgerPair<R>) -> &Ledger<R, Self> {
        pair.plain()
    }

    fn register_in(pair: &mut LedgerPair<R>, obj: &Self) -> Result<ObjectKey, LedgerError> {
        pair.register_plain(obj)
    }

    fn relate_in(pair: &mut LedgerPair<R>, witness: RelationWitness<R::Elem>) -> Result<usize, LedgerError> {
        pair.relate_plain(witness)
    }
}

impl<R: Ring> PairSide<R> for NilBinaryMulticomplex<R::Elem> {
    fn side(pair: &LedgerPair<R>) -> &Ledger<R, Self> {
        pair.nil()
    }

    fn register_in(pair: &mut LedgerPair<R>, obj: &Self) -> Result<ObjectKey, LedgerError> {
        pair.register_nil(obj)
    }

    fn relate_in(pair: &mut LedgerPair<R>, witness: RelationWitness<R::Elem>) -> Result<usize, LedgerError> {
        pair.relate_nil(witness)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesMaps<E> {
    pub iota: GradedMap<E>,
    pub pi: GradedMap<E>,
}

/// Evidence that `[p] = [q]`: sequences `0 -> c -> a -> d -> 0` and
/// `0 -> c -> b -> d -> 0` together with an isomorphism `p ⊕ a ≅ q ⊕ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityWitness<O, E> {
    pub p: O,
    pub q: O,
    pub a: O,
    pub b: O,
    pub c: O,
    pub d: O,
    pub ses_a: SesMaps<E>,
    pub ses_b: SesMaps<E>,
    pub iso: GradedMap<E>,
}

/// Keys and relation ids produced by recording an [`EqualityWitness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualityRecord {
    pub p: ObjectKey,
    pub q: ObjectKey,
    pub relations: Vec<usize>,
}

fn empty_map<E: Clone + PartialEq>(dim: usize) -> GradedMap<E> {
    GradedMap::new(GradingBox::origin(dim), vec![Matrix::from_vec(0, 0, vec![])])
}

impl<O: Clone, E: Clone + PartialEq> EqualityWitness<O, E> {
    /// `[p] = [q]` from an isomorphism `alpha: p -> q`, with `a = b = c = d = 0`.
    pub fn from_iso<R: Ring<Elem = E>>(ring: &R, p: O, q: O, alpha: GradedMap<E>) -> Self
    where
        O: PairSide<R>,
    {
        let dim = p.base().dim();
        let zero = O::zero(ring, dim);
        let trivial = SesMaps { iota: empty_map(dim), pi: empty_map(dim) };
        EqualityWitness {
            p,
            q,
            a: zero.clone(),
            b: zero.clone(),
            c: zero.clone(),
            d: zero,
            ses_a: trivial.clone(),
            ses_b: trivial,
            iso: alpha,
        }
    }

    /// `[p] = [p]`.
    pub fn identity<R: Ring<Elem = E>>(ring: &R, p: O) -> Self
    where
        O: PairSide<R>,
    {
        let id = identity_map(ring, p.base());
        Self::from_iso(ring, p.clone(), p, id)
    }

    pub fn verify<R: Ring<Elem = E>>(&self, ring: &R) -> Result<(), LedgerError>
    where
        O: PairSide<R>,
    {
        let bad = |what: &str, e: &dyn std::fmt::Display| LedgerError::BadWitness(format!("{what}: {e}"));
        check_ses(ring, &self.ses_a.iota, &self.ses_a.pi, &self.c, &self.a, &self.d)
            .map_err(|e| bad("c -> a -> d", &e))?;
        check_ses(ring, &self.ses_b.iota, &self.ses_b.pi, &self.c, &self.b, &self.d)
            .map_err(|e| bad("c -> b -> d", &e))?;
        let pa = O::direct_sum(ring, &self.p, &self.a);
        let qb = O::direct_sum(ring, &self.q, &self.b);
        check_chain_iso(ring, &self.iso, &pa, &qb).map_err(|e| bad("p ⊕ a ≅ q ⊕ b", &e))?;
        Ok(())
    }

    /// Registers every object and records the five relations from which
    /// `[p] = [q]` follows.
    pub fn record<R: Ring<Elem = E>>(&self, pair: &mut LedgerPair<R>) -> Result<EqualityRecord, LedgerError>
    where
        O: PairSide<R>,
    {
        let ring = pair.ring().clone();
        let pa = O::direct_sum(&ring, &self.p, &self.a);
        let qb = O::direct_sum(&ring, &self.q, &self.b);
        let mut key = |o: &O| O::register_in(pair, o);
        let (p, q, a, b, c, d) =
            (key(&self.p)?, key(&self.q)?, key(&self.a)?, key(&self.b)?, key(&self.c)?, key(&self.d)?);
        let (pa_key, qb_key) = (key(&pa)?, key(&qb)?);
        let witnesses = [
            RelationWitness::Ses {
                left: c.clone(),
                middle: a.clone(),
                right: d.clone(),
                iota: self.ses_a.iota.clone(),
                pi: self.ses_a.pi.clone(),
            },
            RelationWitness::Ses {
                left: c,
                middle: b.clone(),
                right: d,
                iota: self.ses_b.iota.clone(),
                pi: self.ses_b.pi.clone(),
            },
            RelationWitness::Iso { source: pa_key.clone(), target: qb_key.clone(), alpha: self.iso.clone() },
            RelationWitness::Ses {
                left: p.clone(),
                middle: pa_key,
                right: a,
                iota: sum_inclusion(&ring, self.p.base(), self.a.base()),
                pi: sum_projection(&ring, self.p.base(), self.a.base()),
            },
            RelationWitness::Ses {
                left: q.clone(),
                middle: qb_key,
                right: b,
                iota: sum_inclusion(&ring, self.q.base(), self.b.base()),
                pi: sum_projection(&ring, self.q.base(), self.b.base()),
            },
        ];
        let relations = witnesses.into_iter().map(|w| O::relate_in(pair, w)).collect::<Result<Vec<_>, _>>()?;
        Ok(EqualityRecord { p, q, relations })
    }
}

impl<E: Clone + PartialEq> EqualityWitness<BinaryMulticomplex<E>, E> {
    /// Every object decorated with `ν = 0`; the maps are unchanged.
    pub fn decorate_zero<R: Ring<Elem = E>>(&self, ring: &R) -> EqualityWitness<NilBinaryMulticomplex<E>, E> {
        let z = |o: &BinaryMulticomplex<E>| decorate_zero_nil(ring, o);
        EqualityWitness {
            p: z(&self.p),
            q: z(&self.q),
            a: z(&self.a),
            b: z(&self.b),
            c: z(&self.c),
            d: z(&self.d),
            ses_a: self.ses_a.clone(),
            ses_b: self.ses_b.clone(),
            iso: self.iso.clone(),
        }
    }
}

/// Output of [`insert_zero_transform`].
#[derive(Clone, Debug)]
pub struct InsertZero<E> {
    pub witness: EqualityWitness<NilBinaryMulticomplex<E>, E>,
    pub plain: EqualityRecord,
    pub nil: EqualityRecord,
}

/// From `[p] = [q]` in the plain ledger to `[(p, 0)] = [(q, 0)]` in the
/// Nil ledger: the same sequences and isomorphism, with every object
/// decorated by zero.
pub fn insert_zero_transform<R: Ring>(
    pair: &mut LedgerPair<R>,
    witness: &EqualityWitness<BinaryMulticomplex<R::Elem>, R::Elem>,
) -> Result<InsertZero<R::Elem>, LedgerError> {
    let ring = pair.ring().clone();
    witness.verify(&ring)?;
    let plain = witness.record(pair)?;
    let decorated = witness.decorate_zero(&ring);
    decorated.verify(&ring)?;
    let nil = decorated.record(pair)?;
    if !pair.nil().equal_mod_relations(&FormalSum::class(&nil.p), &FormalSum::class(&nil.q), false)? {
        return Err(LedgerError::BadWitness("decorated classes are not equal in the Nil ledger".into()));
    }
    Ok(InsertZero { witness: decorated, plain, nil })
}
