use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::codec::{
    decode_multicomplex, decode_nil_multicomplex, encode_multicomplex, encode_nil_multicomplex, DecodeError,
};
use crate::multicomplex::{
    check_acyclic, multicomplex_direct_sum, nil_multicomplex_direct_sum, validate, validate_nil, BinaryMulticomplex,
    GradedObject, NilBinaryMulticomplex,
};
use crate::ring_core::Ring;

/// Identity of a registered object: a kind prefix and the SHA-256 of the
/// canonical JSON of its trimmed form.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectKey(String);

impl ObjectKey {
    pub fn new(text: impl Into<String>) -> Self {
        ObjectKey(text.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The first twelve hex digits, for human-readable output.
    pub fn short(&self) -> &str {
        let cut = self.0.find(':').map_or(0, |i| i + 1) + 12;
        &self.0[..cut.min(self.0.len())]
    }
}

impl fmt::Display for ObjectKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// The two kinds of object a ledger can hold.
pub trait LedgerObject<R: Ring>: GradedObject<R::Elem> + Clone + PartialEq + Sized {
    const PREFIX: &'static str;

    /// Full admission check: differentials, line acyclicity, and the
    /// decoration if there is one.
    fn admit(ring: &R, obj: &Self) -> Result<(), String>;
    fn trimmed(&self, ring: &R) -> Self;
    fn encode(&self, ring: &R) -> Value;
    fn decode(ring: &R, v: &Value, path: &str, max_dim: usize) -> Result<Self, DecodeError>;
    fn zero(ring: &R, dim: usize) -> Self;
    fn direct_sum(ring: &R, a: &Self, b: &Self) -> Self;

    fn key(&self, ring: &R) -> ObjectKey {
        let text = self.trimmed(ring).encode(ring).to_string();
        ObjectKey(format!("{}:{}", Self::PREFIX, hex::encode(Sha256::digest(text.as_bytes()))))
    }
}

fn admit_base<R: Ring>(ring: &R, b: &BinaryMulticomplex<R::Elem>) -> Result<(), String> {
    let report = validate(ring, b, false);
    if !report.is_pass() {
        return Err(report.to_string());
    }
    let acyclic = check_acyclic(ring, b);
    match acyclic.failures.first() {
        None => Ok(()),
        Some(f) => Err(f.to_string()),
    }
}

impl<R: Ring> LedgerObject<R> for BinaryMulticomplex<R::Elem> {
    const PREFIX: &'static str = "bin";

    fn admit(ring: &R, obj: &Self) -> Result<(), String> {
        admit_base(ring, obj)
    }

    fn trimmed(&self, ring: &R) -> Self {
        BinaryMulticomplex::trimmed(self, ring)
    }

    fn encode(&self, ring: &R) -> Value {
        encode_multicomplex(ring, self)
    }

    fn decode(ring: &R, v: &Value, path: &str, max_dim: usize) -> Result<Self, DecodeError> {
        decode_multicomplex(ring, v, path, max_dim)
    }

    fn zero(ring: &R, dim: usize) -> Self {
        BinaryMulticomplex::zero(ring, dim)
    }

    fn direct_sum(ring: &R, a: &Self, b: &Self) -> Self {
        multicomplex_direct_sum(ring, a, b)
    }
}

impl<R: Ring> LedgerObject<R> for NilBinaryMulticomplex<R::Elem> {
    const PREFIX: &'static str = "nil";

    fn admit(ring: &R, obj: &Self) -> Result<(), String> {
        let report = validate_nil(ring, obj);
        if !report.is_pass() {
            return Err(report.to_string());
        }
        admit_base(ring, obj.base())
    }

    fn trimmed(&self, ring: &R) -> Self {
        NilBinaryMulticomplex::trimmed(self, ring)
    }

    fn encode(&self, ring: &R) -> Value {
        encode_nil_multicomplex(ring, self)
    }

    fn decode(ring: &R, v: &Value, path: &str, max_dim: usize) -> Result<Self, DecodeError> {
        decode_nil_multicomplex(ring, v, path, max_dim)
    }

    fn zero(ring: &R, dim: usize) -> Self {
        crate::multicomplex::decorate_zero_nil(ring, &BinaryMulticomplex::zero(ring, dim))
    }

    fn direct_sum(ring: &R, a: &Self, b: &Self) -> Self {
        nil_multicomplex_direct_sum(ring, a, b)
    }
}

/// A finite integer combination of object classes. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct FormalSum {
    terms: BTreeMap<ObjectKey, i64>,
}

impl FormalSum {
    pub fn zero() -> Self {
        FormalSum::default()
    }

    /// `[key]`.
    pub fn class(key: &ObjectKey) -> Self {
        FormalSum::from_terms([(key.clone(), 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (ObjectKey, i64)>) -> Self {
        let mut s = FormalSum::zero();
        for (k, c) in terms {
            s.add_term(&k, c);
        }
        s
    }

    pub fn add_term(&mut self, key: &ObjectKey, c: i64) {
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(key);
        }
    }

    pub fn coefficient(&self, key: &ObjectKey) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ObjectKey, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn keys(&self) -> impl Iterator<Item = &ObjectKey> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn plus(&self, other: &FormalSum) -> FormalSum {
        let mut s = self.clone();
        for (k, c) in other.terms() {
            s.add_term(k, c);
        }
        s
    }

    pub fn minus(&self, other: &FormalSum) -> FormalSum {
        self.plus(&other.scaled(-1))
    }

    pub fn scaled(&self, c: i64) -> FormalSum {
        FormalSum::from_terms(self.terms().map(|(k, x)| (k.clone(), x * c)))
    }

    /// Applies `f` to every key, merging coefficients of keys that collide.
    pub fn map_keys(&self, mut f: impl FnMut(&ObjectKey) -> ObjectKey) -> FormalSum {
        FormalSum::from_terms(self.terms().map(|(k, c)| (f(k), c)))
    }
}

impl fmt::Display for FormalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            let sign = if c < 0 {
                "-"
            } else if i > 0 {
                "+"
            } else {
                ""
            };
            let sep = if i > 0 { " " } else { "" };
            let space = if i > 0 { " " } else { "" };
            match c.abs() {
                1 => write!(f, "{sep}{sign}{space}[{}]", k.short())?,
                n => write!(f, "{sep}{sign}{space}{n}[{}]", k.short())?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formal_sums_drop_zeros() {
        let (a, b) = (ObjectKey::new("bin:aaaaaaaaaaaaaaaa"), ObjectKey::new("bin:bbbbbbbbbbbbbbbb"));
        let s = FormalSum::class(&a).plus(&FormalSum::class(&b).scaled(2));
        assert_eq!(s.len(), 2);
        assert!(s.minus(&s).is_zero());
        assert_eq!(s.to_string(), "[bin:aaaaaaaaaaaa] + 2[bin:bbbbbbbbbbbb]");
        assert_eq!(FormalSum::class(&a).scaled(-1).to_string(), "-[bin:aaaaaaaaaaaa]");
        assert_eq!(s.map_keys(|_| a.clone()).coefficient(&a), 3);
    }
}
