//! Coefficient rings `Z`, `Q` and `Z_n`.
//!
//! Values are kept as `BigRational` in canonical form: integers for `Z`,
//! reduced fractions for `Q`, least nonnegative residues for `Z_n`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BaseRing {
    Integers,
    Rationals,
    IntegersMod(BigInt),
}

impl BaseRing {
    pub fn modular(n: impl Into<BigInt>) -> Result<Self> {
        let n = n.into();
        if n < BigInt::from(2) {
            return Err(Error::InvalidPresentation(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        Ok(BaseRing::IntegersMod(n))
    }

    pub fn modulus(&self) -> Option<&BigInt> {
        match self {
            BaseRing::IntegersMod(n) => Some(n),
            _ => None,
        }
    }

    pub fn modulus_u64(&self) -> Option<u64> {
        self.modulus().and_then(|n| n.to_u64())
    }

    pub fn is_field(&self) -> bool {
        match self {
            BaseRing::Integers => false,
            BaseRing::Rationals => true,
            BaseRing::IntegersMod(n) => is_prime(n),
        }
    }

    pub fn is_domain(&self) -> bool {
        !matches!(self, BaseRing::IntegersMod(n) if !is_prime(n))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, BaseRing::IntegersMod(_))
    }

    /// Canonical representative; fails on a fraction outside `Q`.
    pub fn canon(&self, v: &BigRational) -> Result<BigRational> {
        match self {
            BaseRing::Rationals => Ok(v.clone()),
            BaseRing::Integers => {
                if v.is_integer() {
                    Ok(v.clone())
                } else {
                    Err(Error::InvalidPresentation(format!("{v} is not an integer")))
                }
            }
            BaseRing::IntegersMod(n) => {
                if v.is_integer() {
                    Ok(BigRational::from_integer(v.numer().mod_floor(n)))
                } else {
                    // a/b with b invertible mod n is meaningful, but literals
                    // of this shape are rejected at parse time; keep it strict.
                    Err(Error::InvalidPresentation(format!(
                        "fraction {v} is not an element of Z_{n}"
                    )))
                }
            }
        }
    }

    pub(crate) fn reduce_int(&self, v: BigInt) -> BigRational {
        match self {
            BaseRing::IntegersMod(n) => BigRational::from_integer(v.mod_floor(n)),
            _ => BigRational::from_integer(v),
        }
    }

    pub(crate) fn add_raw(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a + b)
    }

    pub(crate) fn mul_raw(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.norm(a * b)
    }

    pub(crate) fn neg_raw(&self, a: &BigRational) -> BigRational {
        self.norm(-a)
    }

    fn norm(&self, v: BigRational) -> BigRational {
        match self {
            BaseRing::IntegersMod(n) => BigRational::from_integer(v.to_integer().mod_floor(n)),
            _ => v,
        }
    }

    pub(crate) fn inverse_raw(&self, a: &BigRational) -> Option<BigRational> {
        match self {
            BaseRing::Integers => {
                if a.abs().is_one() {
                    Some(a.clone())
                } else {
                    None
                }
            }
            BaseRing::Rationals => {
                if a.is_zero() {
                    None
                } else {
                    Some(a.recip())
                }
            }
            BaseRing::IntegersMod(n) => {
                mod_inverse(&a.to_integer(), n).map(BigRational::from_integer)
            }
        }
    }

    /// Least `k` with `a^k = 0`, if any.
    pub(crate) fn nilpotency_raw(&self, a: &BigRational) -> Option<u32> {
        if a.is_zero() {
            return Some(1);
        }
        let n = self.modulus()?;
        // Every prime power dividing n has exponent at most bitlength(n).
        let cutoff = n.bits() as u32;
        let a = a.to_integer();
        let mut p = a.clone();
        for k in 1..=cutoff {
            if p.mod_floor(n).is_zero() {
                return Some(k);
            }
            p = (&p * &a).mod_floor(n);
        }
        None
    }

    pub fn scalar(&self, v: impl Into<BigInt>) -> Scalar {
        Scalar {
            ring: self.clone(),
            value: self.reduce_int(v.into()),
        }
    }

    pub fn rational(&self, num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Scalar> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::InvalidPresentation("zero denominator".into()));
        }
        let v = BigRational::new(num.into(), den);
        Ok(Scalar {
            ring: self.clone(),
            value: self.canon(&v)?,
        })
    }

    pub fn zero(&self) -> Scalar {
        self.scalar(0)
    }

    pub fn one(&self) -> Scalar {
        self.scalar(1)
    }

    /// Every element when the ring is finite.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let n = self.modulus_u64()?;
        Some((0..n).map(|v| self.scalar(v)).collect())
    }
}

impl fmt::Display for BaseRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseRing::Integers => write!(f, "Z"),
            BaseRing::Rationals => write!(f, "Q"),
            BaseRing::IntegersMod(n) => write!(f, "Zmod {n}"),
        }
    }
}

impl Serialize for BaseRing {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar {
    ring: BaseRing,
    value: BigRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarOp {
    Add,
    Sub,
    Mul,
    Neg,
}

impl Scalar {
    pub(crate) fn from_raw(ring: &BaseRing, value: BigRational) -> Scalar {
        Scalar {
            ring: ring.clone(),
            value,
        }
    }

    pub fn ring(&self) -> &BaseRing {
        &self.ring
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    /// The integer representative (for `Z` and `Z_n`).
    pub fn to_integer(&self) -> BigInt {
        self.value.to_integer()
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::BaseMismatch(
                self.ring.to_string(),
                other.ring.to_string(),
            ));
        }
        Ok(())
    }

    /// `neg` ignores its second operand.
    pub fn arith(op: ScalarOp, a: &Scalar, b: &Scalar) -> Result<Scalar> {
        a.check(b)?;
        let r = &a.ring;
        let value = match op {
            ScalarOp::Add => r.add_raw(&a.value, &b.value),
            ScalarOp::Sub => r.add_raw(&a.value, &r.neg_raw(&b.value)),
            ScalarOp::Mul => r.mul_raw(&a.value, &b.value),
            ScalarOp::Neg => r.neg_raw(&a.value),
        };
        Ok(Scalar::from_raw(r, value))
    }

    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        Scalar::arith(ScalarOp::Add, self, o)
    }

    pub fn sub(&self, o: &Scalar) -> Result<Scalar> {
        Scalar::arith(ScalarOp::Sub, self, o)
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        Scalar::arith(ScalarOp::Mul, self, o)
    }

    pub fn neg(&self) -> Scalar {
        Scalar::from_raw(&self.ring, self.ring.neg_raw(&self.value))
    }

    pub fn pow(&self, k: u32) -> Scalar {
        let mut acc = self.ring.one();
        for _ in 0..k {
            acc = Scalar::from_raw(&self.ring, self.ring.mul_raw(&acc.value, &self.value));
        }
        acc
    }

    /// The inverse, when `self` is a unit.
    pub fn is_unit(&self) -> Option<Scalar> {
        self.ring
            .inverse_raw(&self.value)
            .map(|v| Scalar::from_raw(&self.ring, v))
    }

    /// The minimal nilpotency exponent, when `self` is nilpotent.
    pub fn is_nilpotent(&self) -> Option<u32> {
        self.ring.nilpotency_raw(&self.value)
    }

    /// Generator `n / gcd(n, a)` of the annihilator of `a` in `Z_n`.
    pub fn annihilator_generator(&self) -> Result<Scalar> {
        let n = self
            .ring
            .modulus()
            .ok_or_else(|| Error::NotModular(self.ring.to_string()))?;
        let g = n.gcd(&self.to_integer());
        // For a unit this is n, i.e. the zero residue.
        Ok(self.ring.scalar(n / g))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn mod_inverse(a: &BigInt, n: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(n).extended_gcd(n);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(n))
    } else {
        None
    }
}

pub fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let n = match n.to_u64() {
        Some(v) => v,
        None => return prime_factors(n).len() == 1 && prime_factors(n)[0].1 == 1,
    };
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn prime_factors(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut e = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            out.push((d.clone(), e));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// Chinese remainder: combine residues modulo pairwise coprime moduli.
pub fn crt(residues: &[(BigInt, BigInt)]) -> (BigInt, BigInt) {
    let mut x = BigInt::zero();
    let mut m = BigInt::one();
    for (r, mi) in residues {
        // x' = x + m * t, with m t = r - x (mod mi)
        let inv = mod_inverse(&m, mi).expect("moduli must be coprime");
        let t = ((r - &x) * inv).mod_floor(mi);
        x += &m * t;
        m *= mi;
    }
    (x.mod_floor(&m), m)
}
