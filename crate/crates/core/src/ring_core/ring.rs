use std::fmt;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Which of the supported principal ideal domains a computation runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    PrimeField(u64),
    Rationals,
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::PrimeField(p) => write!(f, "F{p}"),
            RingDescriptor::Rationals => write!(f, "Q"),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("{0} is not a prime below 2^63")]
    NotPrime(u64),
    #[error("cannot parse {text:?} as an element of {ring}")]
    BadElement { text: String, ring: RingDescriptor },
}

/// A computable principal ideal domain with a Euclidean division.
///
/// Rings are passed around as context values: elements do not know which
/// ring they live in (a residue mod p is a bare `u64`), so every operation
/// goes through the ring.
pub trait Ring: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn descriptor(&self) -> RingDescriptor;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn is_unit(&self, a: &Self::Elem) -> bool;

    /// `Some(q)` with `q * b == a`, if such `q` exists.
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;

    /// Euclidean division by a nonzero `b`: `a = q*b + r` with
    /// `size(r) < size(b)`. Over the integers the remainder has the sign of
    /// `b`, so a positive divisor yields the least nonnegative residue.
    fn div_rem(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// `(g, s, t)` with `g = s*a + t*b` and `g` a canonical gcd.
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem) -> (Self::Elem, Self::Elem, Self::Elem);

    /// `(c, u)` with `u` a unit and `c = u*a` the canonical associate of `a`.
    fn normalize(&self, a: &Self::Elem) -> (Self::Elem, Self::Elem);

    /// Euclidean size; zero exactly for the zero element.
    fn size(&self, a: &Self::Elem) -> BigUint;

    fn parse(&self, text: &str) -> Result<Self::Elem, RingError>;
    fn render(&self, a: &Self::Elem) -> String;

    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        self.exact_div(&self.one(), a)
    }

    fn divides(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        if self.is_zero(a) {
            self.is_zero(b)
        } else {
            self.exact_div(b, a).is_some()
        }
    }

    fn is_canonical(&self, a: &Self::Elem) -> bool {
        &self.normalize(a).0 == a
    }
}

/// The integers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Integers
    }
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigInt) -> bool {
        a.magnitude().is_one()
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return a.is_zero().then(BigInt::zero);
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn div_rem(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
        a.div_mod_floor(b)
    }
    fn xgcd(&self, a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
        let e = a.extended_gcd(b);
        if e.gcd.is_negative() {
            (-e.gcd, -e.x, -e.y)
        } else {
            (e.gcd, e.x, e.y)
        }
    }
    fn normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.sign() == Sign::Minus {
            (-a, BigInt::from(-1))
        } else {
            (a.clone(), BigInt::one())
        }
    }
    fn size(&self, a: &BigInt) -> BigUint {
        a.magnitude().clone()
    }
    fn parse(&self, text: &str) -> Result<BigInt, RingError> {
        text.trim().parse().map_err(|_| RingError::BadElement { text: text.to_string(), ring: self.descriptor() })
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
}

/// The prime field of order `p`, elements stored as residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, RingError> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    fn mul_mod(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn pow_mod(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_mod(acc, base);
            }
            base = self.mul_mod(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow_mod(a, self.p - 2)
    }
}

impl Ring for PrimeField {
    type Elem = u64;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::PrimeField(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mul_mod(*a, *b)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_unit(&self, a: &u64) -> bool {
        *a != 0
    }
    fn exact_div(&self, a: &u64, b: &u64) -> Option<u64> {
        if *b == 0 {
            return (*a == 0).then_some(0);
        }
        Some(self.mul_mod(*a, self.inv(*b)))
    }
    fn div_rem(&self, a: &u64, b: &u64) -> (u64, u64) {
        (self.mul_mod(*a, self.inv(*b)), 0)
    }
    fn xgcd(&self, a: &u64, b: &u64) -> (u64, u64, u64) {
        if *a != 0 {
            (1, self.inv(*a), 0)
        } else if *b != 0 {
            (1, 0, self.inv(*b))
        } else {
            (0, 0, 0)
        }
    }
    fn normalize(&self, a: &u64) -> (u64, u64) {
        if *a == 0 {
            (0, 1)
        } else {
            (1, self.inv(*a))
        }
    }
    fn size(&self, a: &u64) -> BigUint {
        BigUint::from(u8::from(*a != 0))
    }
    fn parse(&self, text: &str) -> Result<u64, RingError> {
        let v: BigInt = text
            .trim()
            .parse()
            .map_err(|_| RingError::BadElement { text: text.to_string(), ring: self.descriptor() })?;
        let r = v.mod_floor(&BigInt::from(self.p));
        Ok(r.try_into().expect("residue below p fits in u64"))
    }
    fn render(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// The rationals; as a field every nonzero element is a unit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_unit(&self, a: &BigRational) -> bool {
        !a.is_zero()
    }
    fn exact_div(&self, a: &BigRational, b: &BigRational) -> Option<BigRational> {
        if b.is_zero() {
            return a.is_zero().then(BigRational::zero);
        }
        Some(a / b)
    }
    fn div_rem(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational) {
        (a / b, BigRational::zero())
    }
    fn xgcd(&self, a: &BigRational, b: &BigRational) -> (BigRational, BigRational, BigRational) {
        if !a.is_zero() {
            (self.one(), a.recip(), self.zero())
        } else if !b.is_zero() {
            (self.one(), self.zero(), b.recip())
        } else {
            (self.zero(), self.zero(), self.zero())
        }
    }
    fn normalize(&self, a: &BigRational) -> (BigRational, BigRational) {
        if a.is_zero() {
            (self.zero(), self.one())
        } else {
            (self.one(), a.recip())
        }
    }
    fn size(&self, a: &BigRational) -> BigUint {
        BigUint::from(u8::from(!a.is_zero()))
    }
    fn parse(&self, text: &str) -> Result<BigRational, RingError> {
        let bad = || RingError::BadElement { text: text.to_string(), ring: self.descriptor() };
        let text = text.trim();
        match text.split_once('/') {
            None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
            Some((num, den)) => {
                let num: BigInt = num.trim().parse().map_err(|_| bad())?;
                let den: BigInt = den.trim().parse().map_err(|_| bad())?;
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(num, den))
            }
        }
    }
    fn render(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, b);
            }
            b = mul(b, b);
            e >>= 1;
        }
        acc
    };
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
