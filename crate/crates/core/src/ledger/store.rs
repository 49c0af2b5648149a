use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::multicomplex::{check_chain_iso, check_ses, diagonal_direction, GradedMap, GradingBox, DEFAULT_MAX_DIM};
use crate::ring_core::{solve, Integers, Matrix, Ring};

use super::object::{FormalSum, LedgerObject, ObjectKey};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LedgerError {
    #[error("invalid object: {0}")]
    InvalidObject(String),
    #[error("unknown key {0}")]
    UnknownKey(ObjectKey),
    #[error("bad witness: {0}")]
    BadWitness(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RelationKind {
    Ses,
    Iso,
    Diagonal,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Ses => "ses",
            RelationKind::Iso => "iso",
            RelationKind::Diagonal => "diagonal",
        })
    }
}

/// Evidence for one relation, referring to registered objects by key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationWitness<E> {
    /// `0 -> left -> middle -> right -> 0`.
    Ses { left: ObjectKey, middle: ObjectKey, right: ObjectKey, iota: GradedMap<E>, pi: GradedMap<E> },
    /// `alpha: source -> target`.
    Iso { source: ObjectKey, target: ObjectKey, alpha: GradedMap<E> },
    /// `d = dt` in direction `direction` (0-based).
    Diagonal { object: ObjectKey, direction: usize },
}

impl<E> RelationWitness<E> {
    pub fn kind(&self) -> RelationKind {
        match self {
            RelationWitness::Ses { .. } => RelationKind::Ses,
            RelationWitness::Iso { .. } => RelationKind::Iso,
            RelationWitness::Diagonal { .. } => RelationKind::Diagonal,
        }
    }

    pub fn keys(&self) -> Vec<&ObjectKey> {
        match self {
            RelationWitness::Ses { left, middle, right, .. } => vec![left, middle, right],
            RelationWitness::Iso { source, target, .. } => vec![source, target],
            RelationWitness::Diagonal { object, .. } => vec![object],
        }
    }

    /// `[middle] - [left] - [right]`, `[source] - [target]`, or `[object]`.
    pub fn vector(&self) -> FormalSum {
        match self {
            RelationWitness::Ses { left, middle, right, .. } => {
                FormalSum::from_terms([(middle.clone(), 1), (left.clone(), -1), (right.clone(), -1)])
            }
            RelationWitness::Iso { source, target, .. } => {
                FormalSum::from_terms([(source.clone(), 1), (target.clone(), -1)])
            }
            RelationWitness::Diagonal { object, .. } => FormalSum::class(object),
        }
    }

    /// The same witness with every key replaced through `f`.
    pub fn map_keys(&self, mut f: impl FnMut(&ObjectKey) -> ObjectKey) -> Self
    where
        E: Clone,
    {
        match self {
            RelationWitness::Ses { left, middle, right, iota, pi } => RelationWitness::Ses {
                left: f(left),
                middle: f(middle),
                right: f(right),
                iota: iota.clone(),
                pi: pi.clone(),
            },
            RelationWitness::Iso { source, target, alpha } => {
                RelationWitness::Iso { source: f(source), target: f(target), alpha: alpha.clone() }
            }
            RelationWitness::Diagonal { object, direction } => {
                RelationWitness::Diagonal { object: f(object), direction: *direction }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation<E> {
    pub id: usize,
    pub witness: RelationWitness<E>,
    pub vector: FormalSum,
    /// Diagonal relations generate the subgroup that is quotiented out only
    /// on request.
    pub diagonal: bool,
}

/// Integer coefficients on relation ids whose weighted vectors add up to
/// `x - y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub coefficients: Vec<(usize, BigInt)>,
}

impl Derivation {
    pub fn relation_ids(&self) -> Vec<usize> {
        self.coefficients.iter().map(|(id, _)| *id).collect()
    }
}

/// A finite set of registered objects and verified relations among their
/// classes.
///
/// Equality answers are sound but partial: `true` comes with an explicit
/// integer combination of verified relations, while `false` only means the
/// difference is not derivable from the relations recorded so far.
#[derive(Clone, Debug)]
pub struct Ledger<R: Ring, O> {
    ring: R,
    dim: usize,
    max_dim: usize,
    objects: BTreeMap<ObjectKey, O>,
    relations: Vec<Relation<R::Elem>>,
}

impl<R: Ring, O: LedgerObject<R>> Ledger<R, O> {
    pub fn new(ring: R, dim: usize) -> Self {
        Ledger { ring, dim, max_dim: DEFAULT_MAX_DIM.max(dim), objects: BTreeMap::new(), relations: Vec::new() }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn objects(&self) -> impl Iterator<Item = (&ObjectKey, &O)> {
        self.objects.iter()
    }

    pub fn object(&self, key: &ObjectKey) -> Result<&O, LedgerError> {
        self.objects.get(key).ok_or_else(|| LedgerError::UnknownKey(key.clone()))
    }

    pub fn contains(&self, key: &ObjectKey) -> bool {
        self.objects.contains_key(key)
    }

    pub fn relations(&self) -> &[Relation<R::Elem>] {
        &self.relations
    }

    /// Admits `obj` and returns its key; registering the same object twice
    /// is a no-op. The zero object is made null by an automatic
    /// `0 -> 0 -> 0` relation.
    pub fn register(&mut self, obj: &O) -> Result<ObjectKey, LedgerError> {
        if obj.base().dim() != self.dim {
            return Err(LedgerError::InvalidObject(format!(
                "dimension {} in a ledger of dimension {}",
                obj.base().dim(),
                self.dim
            )));
        }
        O::admit(&self.ring, obj).map_err(LedgerError::InvalidObject)?;
        let trimmed = obj.trimmed(&self.ring);
        let key = trimmed.key(&self.ring);
        if !self.objects.contains_key(&key) {
            let is_zero = trimmed.base().is_zero_object();
            self.objects.insert(key.clone(), trimmed);
            if is_zero {
                let empty = GradedMap::new(GradingBox::origin(self.dim), vec![Matrix::from_vec(0, 0, vec![])]);
                let witness = RelationWitness::Ses {
                    left: key.clone(),
                    middle: key.clone(),
                    right: key.clone(),
                    iota: empty.clone(),
                    pi: empty,
                };
                self.relate(witness)?;
            }
        }
        Ok(key)
    }

    /// Re-checks `witness` against the registry and returns its vector.
    pub fn verify_witness(&self, witness: &RelationWitness<R::Elem>) -> Result<FormalSum, LedgerError> {
        let ring = &self.ring;
        let bad = |what: &str, e: &dyn fmt::Display| LedgerError::BadWitness(format!("{what}: {e}"));
        match witness {
            RelationWitness::Ses { left, middle, right, iota, pi } => {
                let (l, m, r) = (self.object(left)?, self.object(middle)?, self.object(right)?);
                check_ses(ring, iota, pi, l, m, r).map_err(|e| bad("ses", &e))?;
            }
            RelationWitness::Iso { source, target, alpha } => {
                let (s, t) = (self.object(source)?, self.object(target)?);
                check_chain_iso(ring, alpha, s, t).map_err(|e| bad("iso", &e))?;
            }
            RelationWitness::Diagonal { object, direction } => {
                let b = self.object(object)?.base();
                let diagonal = *direction < b.dim()
                    && b.grading().degrees().all(|d| {
                        let pair = b.diff(*direction, &d).expect("degree in support");
                        pair.d == pair.dt
                    });
                if !diagonal {
                    return Err(LedgerError::BadWitness(format!("diagonal: d ≠ dt in direction {}", direction + 1)));
                }
            }
        }
        Ok(witness.vector())
    }

    /// Verifies `witness` from scratch and appends its relation.
    pub fn relate(&mut self, witness: RelationWitness<R::Elem>) -> Result<usize, LedgerError> {
        let vector = self.verify_witness(&witness)?;
        let id = self.relations.len();
        let diagonal = witness.kind() == RelationKind::Diagonal;
        self.relations.push(Relation { id, witness, vector, diagonal });
        Ok(id)
    }

    /// Records `[key] ≡ 0` modulo diagonals, choosing the first diagonal
    /// direction.
    pub fn relate_diagonal(&mut self, key: &ObjectKey) -> Result<usize, LedgerError> {
        let direction = diagonal_direction(self.object(key)?.base())
            .ok_or_else(|| LedgerError::BadWitness("diagonal: no direction with d = dt".into()))?;
        self.relate(RelationWitness::Diagonal { object: key.clone(), direction })
    }

    fn check_keys(&self, sums: &[&FormalSum]) -> Result<(), LedgerError> {
        for s in sums {
            for k in s.keys() {
                self.object(k)?;
            }
        }
        Ok(())
    }

    /// Solves for an integer combination of recorded relation vectors equal
    /// to `x - y`.
    pub fn derive(&self, x: &FormalSum, y: &FormalSum, mod_diagonal: bool) -> Result<Option<Derivation>, LedgerError> {
        self.check_keys(&[x, y])?;
        let target = x.minus(y);
        if target.is_zero() {
            return Ok(Some(Derivation { coefficients: vec![] }));
        }
        let used: Vec<&Relation<R::Elem>> = self.relations.iter().filter(|r| mod_diagonal || !r.diagonal).collect();
        let keys: Vec<&ObjectKey> = self.objects.keys().collect();
        let z = Integers;
        let m = Matrix::from_fn(keys.len(), used.len(), |i, j| BigInt::from(used[j].vector.coefficient(keys[i])));
        let b = Matrix::from_fn(keys.len(), 1, |i, _| BigInt::from(target.coefficient(keys[i])));
        Ok(solve(&z, &m, &b).map(|x| Derivation {
            coefficients: used
                .iter()
                .enumerate()
                .filter(|(j, _)| !x.get(*j, 0).is_zero())
                .map(|(j, r)| (r.id, x.get(j, 0).clone()))
                .collect(),
        }))
    }

    /// Whether `x - y` lies in the lattice of recorded relations (plus the
    /// diagonal ones when `mod_diagonal`).
    pub fn equal_mod_relations(&self, x: &FormalSum, y: &FormalSum, mod_diagonal: bool) -> Result<bool, LedgerError> {
        Ok(self.derive(x, y, mod_diagonal)?.is_some())
    }

    /// Re-checks a derivation by re-verifying every witness it uses and
    /// summing the weighted vectors.
    pub fn verify_derivation(
        &self,
        x: &FormalSum,
        y: &FormalSum,
        derivation: &Derivation,
        mod_diagonal: bool,
    ) -> Result<(), LedgerError> {
        let mut total: BTreeMap<ObjectKey, BigInt> = BTreeMap::new();
        for (id, c) in &derivation.coefficients {
            let rel = self.relations.get(*id).ok_or_else(|| LedgerError::BadWitness(format!("no relation {id}")))?;
            if rel.diagonal && !mod_diagonal {
                return Err(LedgerError::BadWitness(format!("relation {id} is diagonal")));
            }
            let vector = self.verify_witness(&rel.witness)?;
            for (k, v) in vector.terms() {
                *total.entry(k.clone()).or_default() += c * BigInt::from(v);
            }
        }
        let target = x.minus(y);
        let keys: std::collections::BTreeSet<&ObjectKey> = total.keys().chain(target.keys()).collect();
        for k in keys {
            let got = total.get(k).cloned().unwrap_or_default();
            if got != BigInt::from(target.coefficient(k)) {
                return Err(LedgerError::BadWitness(format!("derivation misses the coefficient of {}", k.short())));
            }
        }
        Ok(())
    }

    /// Replaces the contents wholesale after re-admitting every object and
    /// re-verifying every relation.
    pub(crate) fn restore(
        &mut self,
        objects: Vec<(ObjectKey, O)>,
        relations: Vec<(RelationWitness<R::Elem>, bool)>,
    ) -> Result<(), LedgerError> {
        self.objects.clear();
        self.relations.clear();
        for (key, obj) in objects {
            O::admit(&self.ring, &obj).map_err(LedgerError::InvalidObject)?;
            let trimmed = obj.trimmed(&self.ring);
            let actual = trimmed.key(&self.ring);
            if actual != key {
                return Err(LedgerError::InvalidObject(format!("stored key {key} does not match contents ({actual})")));
            }
            self.objects.insert(key, trimmed);
        }
        for (witness, diagonal) in relations {
            if diagonal != (witness.kind() == RelationKind::Diagonal) {
                return Err(LedgerError::BadWitness("diagonal flag disagrees with witness kind".into()));
            }
            self.relate(witness)?;
        }
        Ok(())
    }
}
