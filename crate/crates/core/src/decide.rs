//! Certificate-producing decision procedures for units, nilpotents,
//! zero-divisors and idempotents, plus the componentwise membership checks
//! for radical colon ideals.
//!
//! Every positive certificate is re-verified by direct arithmetic before it
//! is returned.

use std::borrow::Cow;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{EngineKind, Element, Monomial, Ring};
use crate::error::{Error, Result};
use crate::grading::Grade;
use crate::oracle::{FiniteRingTable, DEFAULT_ENUMERATION_CAP};
use crate::scalars::{crt, prime_factors, BaseRing, Scalar};

pub const DEFAULT_NILPOTENCY_CAP: u32 = 64;

fn as_string<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ContentEvidence {
    /// The degree-zero part of a nonnegatively graded element is not a unit.
    ConstantNotUnit { constant: Scalar },
    /// Every coefficient is divisible by this prime factor of the modulus.
    CommonPrime {
        #[serde(serialize_with = "as_string")]
        prime: BigInt,
    },
    /// Modulo this prime (0: over the base itself) the element is not a
    /// unit monomial of the monoid ring, which is then a domain.
    NotMonomialModPrime {
        #[serde(serialize_with = "as_string")]
        prime: BigInt,
    },
    /// Every homogeneous component lies in this prime ideal.
    Prime { generators: Vec<Element> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    ContentProper { evidence: ContentEvidence },
    CrossPairNotNilpotent { i: Grade, k: Grade },
    PositivePartNotNilpotent { part: Element },
    /// The element lies in this maximal ideal.
    InMaximalIdeal { generators: Vec<Element> },
    /// `f^start = f^(start + period)` and no power is one.
    PowersCycle { start: u32, period: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NilWitness {
    /// A term `c·m` of a monoid ring with `c` not nilpotent.
    ComponentScalar { grade: Grade, scalar: Scalar },
    /// Powers of the element (or of its component at `grade`) repeat
    /// without reaching zero.
    StabilizedPower {
        grade: Option<Grade>,
        start: u32,
        period: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NzdReason {
    /// No nonzero scalar kills every coefficient.
    JointAnnihilatorZero {
        #[serde(serialize_with = "as_string")]
        modulus: BigInt,
    },
    /// Monoid ring over a domain.
    Domain,
    /// In a finite ring every non-unit is a zero-divisor.
    FiniteUnit { inverse: Element },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdempotentReport {
    pub is_idempotent: bool,
    pub homogeneous_degree_zero: bool,
    pub offending_grades: Vec<Grade>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    Unit { inverse: Element },
    NotUnit { obstruction: Obstruction },
    Nilpotent { exponent: u32 },
    NotNilpotent { witness: NilWitness },
    ZeroDivisor { annihilator: Element },
    NotZeroDivisor { reason: NzdReason },
    Idempotent(IdempotentReport),
}

impl Certificate {
    pub fn verdict(&self) -> &'static str {
        match self {
            Certificate::Unit { .. } => "unit",
            Certificate::NotUnit { .. } => "not_unit",
            Certificate::Nilpotent { .. } => "nilpotent",
            Certificate::NotNilpotent { .. } => "not_nilpotent",
            Certificate::ZeroDivisor { .. } => "zero_divisor",
            Certificate::NotZeroDivisor { .. } => "not_zero_divisor",
            Certificate::Idempotent(r) if r.is_idempotent => "idempotent",
            Certificate::Idempotent(_) => "not_idempotent",
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(
            self,
            Certificate::Unit { .. }
                | Certificate::Nilpotent { .. }
                | Certificate::ZeroDivisor { .. }
        ) || matches!(self, Certificate::Idempotent(r) if r.is_idempotent)
    }
}

/// Re-checks a positive certificate by arithmetic. Negative certificates
/// carry evidence rather than a checkable identity and verify trivially.
pub fn verify(f: &Element, cert: &Certificate) -> Result<bool> {
    Ok(match cert {
        Certificate::Unit { inverse } => f.mul(inverse)?.is_one(),
        Certificate::Nilpotent { exponent } => {
            *exponent >= 1 && f.pow(*exponent)?.is_zero() && !f.pow(exponent - 1)?.is_zero()
        }
        Certificate::ZeroDivisor { annihilator } => {
            !annihilator.is_zero()
                && annihilator.is_homogeneous()
                && f.mul(annihilator)?.is_zero()
        }
        Certificate::Idempotent(r) => r.is_idempotent == (f.mul(f)? == *f),
        _ => true,
    })
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::TheoremViolation(what()))
    }
}

fn require_ordered(r: &Ring) -> Result<()> {
    if r.grading().is_ordered() {
        Ok(())
    } else {
        Err(Error::UnorderedGrading(r.grading().to_string()))
    }
}

enum Powers {
    Zero(u32),
    Cycle { start: u32, period: u32 },
}

/// Powers `f, f^2, ...` up to `cap`, stopping at zero or at the first repeat.
fn power_search(f: &Element, cap: u32) -> Result<Powers> {
    let mut seen: HashMap<Element, u32> = HashMap::new();
    let mut p = f.clone();
    for k in 1..=cap {
        if p.is_zero() {
            return Ok(Powers::Zero(k));
        }
        if let Some(&j) = seen.get(&p) {
            return Ok(Powers::Cycle {
                start: j,
                period: k - j,
            });
        }
        let next = p.mul(f)?;
        seen.insert(p, k);
        p = next;
    }
    Err(Error::CapExceeded(format!(
        "powers of {f} neither vanish nor repeat up to exponent {cap}"
    )))
}

/// Least `k` with `f^k = 0`, given that `f^bound = 0`.
fn minimal_exponent(f: &Element, bound: u32) -> Result<u32> {
    let mut p = f.clone();
    for k in 1..=bound {
        if p.is_zero() {
            return Ok(k);
        }
        p = p.mul(f)?;
    }
    Err(Error::TheoremViolation(format!(
        "{f} does not vanish at the exponent bound {bound}"
    )))
}

fn is_monoid_ring(r: &Ring) -> bool {
    r.engine_kind() == EngineKind::Free
}

/// Decision procedures with a nilpotency cap and an optional precomputed
/// finite-ring table for the ring in question.
#[derive(Clone, Copy, Debug)]
pub struct Decider<'a> {
    pub nilpotency_cap: u32,
    oracle: Option<&'a FiniteRingTable>,
}

impl Default for Decider<'_> {
    fn default() -> Self {
        Decider {
            nilpotency_cap: DEFAULT_NILPOTENCY_CAP,
            oracle: None,
        }
    }
}

impl<'a> Decider<'a> {
    pub fn new(nilpotency_cap: u32) -> Self {
        Decider {
            nilpotency_cap,
            oracle: None,
        }
    }

    pub fn with_oracle(mut self, t: &'a FiniteRingTable) -> Self {
        self.oracle = Some(t);
        self
    }

    /// The finite-ring table for `r`: the attached one, or a fresh
    /// enumeration. `None` when `r` is not finite.
    fn table(&self, r: &Ring) -> Result<Option<Cow<'a, FiniteRingTable>>> {
        if let Some(t) = self.oracle {
            if t.ring().same_ring(r) {
                return Ok(Some(Cow::Borrowed(t)));
            }
        }
        if !r.base().is_finite() {
            return Ok(None);
        }
        match FiniteRingTable::enumerate(r, DEFAULT_ENUMERATION_CAP) {
            Ok(t) => Ok(Some(Cow::Owned(t))),
            Err(Error::InfiniteRing(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    // ---- nilpotency ----

    pub fn is_nilpotent(&self, f: &Element) -> Result<Certificate> {
        let cert = self.nilpotent_inner(f)?;
        ensure(verify(f, &cert)?, || format!("nilpotency certificate for {f} fails"))?;
        Ok(cert)
    }

    fn nilpotent_inner(&self, f: &Element) -> Result<Certificate> {
        if f.is_zero() {
            return Ok(Certificate::Nilpotent { exponent: 1 });
        }
        let r = f.ring();
        if is_monoid_ring(r) {
            // Monomials are non-zero-divisors, so a term c·m is nilpotent
            // exactly when c is.
            let mut bound = 1u32;
            for (m, c) in f.terms() {
                let c = Scalar::from_raw(r.base(), c.clone());
                match c.is_nilpotent() {
                    Some(e) => bound += e - 1,
                    None => {
                        return Ok(Certificate::NotNilpotent {
                            witness: NilWitness::ComponentScalar {
                                grade: r.monomial_grade(m),
                                scalar: c,
                            },
                        })
                    }
                }
            }
            ensure(f.pow(bound)?.is_zero(), || {
                format!("{f} does not vanish at the term bound {bound}")
            })?;
            return Ok(Certificate::Nilpotent {
                exponent: minimal_exponent(f, bound)?,
            });
        }
        if !r.grading().is_ordered() {
            return Ok(match power_search(f, self.nilpotency_cap)? {
                Powers::Zero(k) => Certificate::Nilpotent { exponent: k },
                Powers::Cycle { start, period } => Certificate::NotNilpotent {
                    witness: NilWitness::StabilizedPower {
                        grade: None,
                        start,
                        period,
                    },
                },
            });
        }
        let mut bound = 1u32;
        for (g, c) in f.homogeneous_components() {
            match power_search(&c, self.nilpotency_cap)? {
                Powers::Zero(k) => bound += k - 1,
                Powers::Cycle { start, period } => {
                    return Ok(Certificate::NotNilpotent {
                        witness: NilWitness::StabilizedPower {
                            grade: Some(g),
                            start,
                            period,
                        },
                    })
                }
            }
        }
        ensure(f.pow(bound)?.is_zero(), || {
            format!("{f} does not vanish at the component bound {bound}")
        })?;
        Ok(Certificate::Nilpotent {
            exponent: minimal_exponent(f, bound)?,
        })
    }

    fn nilpotent_bool(&self, f: &Element) -> Result<bool> {
        Ok(matches!(self.is_nilpotent(f)?, Certificate::Nilpotent { .. }))
    }

    // ---- units ----

    pub fn is_unit(&self, f: &Element) -> Result<Certificate> {
        let r = f.ring();
        let cert = if self.nonnegative_family(r) {
            self.unit_nonnegative(f)?
        } else if is_monoid_ring(r) {
            self.unit_monoid(f)?
        } else if let Some(t) = self.table(r)? {
            self.unit_finite(f, &t)?
        } else {
            self.unit_power_cycle(f)?
        };
        if let Certificate::Unit { inverse } = &cert {
            ensure(f.mul(inverse)?.is_one(), || {
                format!("claimed inverse {inverse} of {f} fails")
            })?;
            self.check_unit_cross_pairs(f)?;
        }
        Ok(cert)
    }

    /// Nonnegatively graded with degree-zero part the base ring, either by
    /// the ring's own grading or by total degree.
    fn nonnegative_family(&self, r: &Ring) -> bool {
        if r.engine_kind() == EngineKind::StructureConstants {
            return false;
        }
        if r.is_total_degree_graded() {
            return true;
        }
        r.grading().is_ordered()
            && !r.has_invertible_generators()
            && r.generators()
                .iter()
                .all(|g| g.grade.is_positive().unwrap_or(false))
    }

    fn unit_nonnegative(&self, f: &Element) -> Result<Certificate> {
        let r = f.ring();
        let n = r.nvars();
        let u = f.coefficient(&Monomial::one(n));
        let Some(ui) = u.is_unit() else {
            return Ok(Certificate::NotUnit {
                obstruction: Obstruction::ContentProper {
                    evidence: ContentEvidence::ConstantNotUnit { constant: u },
                },
            });
        };
        let m = f.sub(&f.constant_term())?;
        let k = match self.is_nilpotent(&m)? {
            Certificate::Nilpotent { exponent } => exponent,
            _ => {
                return Ok(Certificate::NotUnit {
                    obstruction: Obstruction::PositivePartNotNilpotent { part: m },
                })
            }
        };
        // f = u(1 + u^-1 m), inverse u^-1 Σ_{j<k} (-u^-1 m)^j
        let ui_e = r.scalar(&ui)?;
        let q = ui_e.mul(&m)?.neg();
        let mut sum = r.zero();
        let mut p = r.one();
        for _ in 0..k {
            sum = sum.add(&p)?;
            p = p.mul(&q)?;
        }
        Ok(Certificate::Unit {
            inverse: ui_e.mul(&sum)?,
        })
    }

    /// Monoid rings: reduce modulo each prime factor of the modulus, where
    /// the ring becomes a domain whose units are the unit monomials, then
    /// lift by a geometric series and recombine with CRT idempotents.
    fn unit_monoid(&self, f: &Element) -> Result<Certificate> {
        let r = f.ring();
        let terms: Vec<(Monomial, BigRational)> =
            f.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let invertible_monomial = |m: &Monomial| {
            r.generators()
                .iter()
                .zip(m.exponents())
                .all(|(g, &e)| e == 0 || g.invertible)
        };
        let cross_pair = |live: &[&(Monomial, BigRational)]| -> Option<Obstruction> {
            for a in live {
                for b in live {
                    let (ga, gb) = (r.monomial_grade(&a.0), r.monomial_grade(&b.0));
                    if ga != gb {
                        return Some(Obstruction::CrossPairNotNilpotent { i: ga, k: gb });
                    }
                }
            }
            None
        };
        let n = match r.base() {
            BaseRing::IntegersMod(n) => n.clone(),
            _ => {
                let live: Vec<&(Monomial, BigRational)> = terms.iter().collect();
                if live.len() == 1 && invertible_monomial(&live[0].0) {
                    if let Some(inv) = f.monomial_inverse() {
                        return Ok(Certificate::Unit { inverse: inv });
                    }
                }
                let obstruction = cross_pair(&live).unwrap_or(Obstruction::ContentProper {
                    evidence: ContentEvidence::NotMonomialModPrime {
                        prime: BigInt::zero(),
                    },
                });
                return Ok(Certificate::NotUnit { obstruction });
            }
        };
        let factors = prime_factors(&n);
        let mut approx = r.zero();
        let mut max_e = 1u32;
        for (p, e) in &factors {
            max_e = max_e.max(*e);
            let live: Vec<&(Monomial, BigRational)> = terms
                .iter()
                .filter(|(_, c)| !(c.to_integer().mod_floor(p)).is_zero())
                .collect();
            if live.is_empty() {
                return Ok(Certificate::NotUnit {
                    obstruction: Obstruction::ContentProper {
                        evidence: ContentEvidence::CommonPrime { prime: p.clone() },
                    },
                });
            }
            if live.len() > 1 || !invertible_monomial(&live[0].0) {
                let obstruction = cross_pair(&live).unwrap_or(Obstruction::ContentProper {
                    evidence: ContentEvidence::NotMonomialModPrime { prime: p.clone() },
                });
                return Ok(Certificate::NotUnit { obstruction });
            }
            // e_p ≡ c^-1 mod p^e and 0 modulo the other prime powers
            let q = p.pow(*e);
            let c = live[0].1.to_integer();
            let ci = crate::scalars::mod_inverse(&c, &q).expect("coprime to p");
            let others = &n / &q;
            let (ep, _) = crt(&[(ci, q), (BigInt::zero(), others)]);
            let inv_m = Monomial(live[0].0.exponents().iter().map(|e| -e).collect());
            approx = approx.add(&r.from_terms([(inv_m, BigRational::from_integer(ep))])?)?;
        }
        // f·approx = 1 + nilpotent
        let nil = f.mul(&approx)?.sub(&r.one())?.neg();
        let mut sum = r.zero();
        let mut p = r.one();
        let mut steps = 0u32;
        while !p.is_zero() {
            sum = sum.add(&p)?;
            p = p.mul(&nil)?;
            steps += 1;
            ensure(steps <= max_e + 1, || {
                format!("correction term for {f} is not nilpotent")
            })?;
        }
        Ok(Certificate::Unit {
            inverse: approx.mul(&sum)?,
        })
    }

    fn unit_finite(&self, f: &Element, t: &FiniteRingTable) -> Result<Certificate> {
        let r = f.ring();
        let ord = t.ordinal(f)?;
        if let Some(inv) = t.unit_inverse(ord) {
            if r.grading().is_ordered() {
                for p in t.primes() {
                    let inside = f
                        .content_generators()
                        .iter()
                        .map(|c| t.ordinal(c).map(|o| p.contains(o)))
                        .collect::<Result<Vec<_>>>()?;
                    ensure(!inside.iter().all(|&b| b), || {
                        format!("unit {f} has its content inside a prime")
                    })?;
                }
            }
            return Ok(Certificate::Unit {
                inverse: t.element(inv),
            });
        }
        let gens = |p: &crate::oracle::ElementSet| -> Vec<Element> {
            t.ideal_generators(p).into_iter().map(|o| t.element(o)).collect()
        };
        if !r.grading().is_ordered() {
            let p = t
                .primes()
                .iter()
                .find(|p| p.contains(ord))
                .ok_or_else(|| Error::TheoremViolation(format!("non-unit {f} avoids every prime")))?;
            return Ok(Certificate::NotUnit {
                obstruction: Obstruction::InMaximalIdeal { generators: gens(p) },
            });
        }
        let comps = f.homogeneous_components();
        for (a, (gi, fi)) in comps.iter().enumerate() {
            for (gk, fk) in &comps[a + 1..] {
                let o = t.ordinal(&fi.mul(fk)?)?;
                if t.nil_exponent(o).is_none() {
                    return Ok(Certificate::NotUnit {
                        obstruction: Obstruction::CrossPairNotNilpotent {
                            i: gi.clone(),
                            k: gk.clone(),
                        },
                    });
                }
            }
        }
        let ords = comps
            .iter()
            .map(|(_, c)| t.ordinal(c))
            .collect::<Result<Vec<_>>>()?;
        let p = t
            .primes()
            .iter()
            .find(|p| ords.iter().all(|&o| p.contains(o)))
            .ok_or_else(|| {
                Error::TheoremViolation(format!(
                    "non-unit {f} has nilpotent cross pairs and content equal to the ring"
                ))
            })?;
        Ok(Certificate::NotUnit {
            obstruction: Obstruction::ContentProper {
                evidence: ContentEvidence::Prime { generators: gens(p) },
            },
        })
    }

    /// Searches for a power of `f` equal to a unit scalar; a repeat first
    /// rules `f` out as a unit.
    fn unit_power_cycle(&self, f: &Element) -> Result<Certificate> {
        let r = f.ring();
        let one_m = Monomial::one(r.nvars());
        let mut seen: HashMap<Element, u32> = HashMap::new();
        let mut prev = r.one();
        let mut p = f.clone();
        for k in 1..=self.nilpotency_cap {
            if p.terms().len() == 1 {
                if let Some(c) = p.terms().get(&one_m) {
                    if let Some(ci) = Scalar::from_raw(r.base(), c.clone()).is_unit() {
                        return Ok(Certificate::Unit {
                            inverse: r.scalar(&ci)?.mul(&prev)?,
                        });
                    }
                }
            }
            if let Some(&j) = seen.get(&p) {
                return Ok(Certificate::NotUnit {
                    obstruction: Obstruction::PowersCycle {
                        start: j,
                        period: k - j,
                    },
                });
            }
            let next = p.mul(f)?;
            seen.insert(p.clone(), k);
            prev = p;
            p = next;
        }
        Err(Error::Unsupported(format!(
            "no unit decision for {f} in {}: powers do not settle up to exponent {}",
            r.name(),
            self.nilpotency_cap
        )))
    }

    /// A unit has nilpotent products of distinct components; checked where
    /// nilpotency is decidable.
    fn check_unit_cross_pairs(&self, f: &Element) -> Result<()> {
        if !f.ring().grading().is_ordered() {
            return Ok(());
        }
        let comps = f.homogeneous_components();
        for (a, (_, fi)) in comps.iter().enumerate() {
            for (_, fk) in &comps[a + 1..] {
                match self.is_nilpotent(&fi.mul(fk)?) {
                    Ok(Certificate::NotNilpotent { .. }) => {
                        return Err(Error::TheoremViolation(format!(
                            "unit {f} has components {fi} and {fk} with non-nilpotent product"
                        )))
                    }
                    Ok(_) | Err(Error::CapExceeded(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(())
    }

    pub fn invert_homogeneous(&self, f: &Element) -> Result<Element> {
        let Some(d) = f.degree() else {
            return Err(Error::Precondition(format!("{f} is not homogeneous")));
        };
        match self.is_unit(f)? {
            Certificate::Unit { inverse } => {
                ensure(inverse.degree() == Some(d.neg()), || {
                    format!("inverse {inverse} of homogeneous {f} is not homogeneous of degree {}", d.neg())
                })?;
                Ok(inverse)
            }
            _ => Err(Error::NotUnit(f.to_string())),
        }
    }

    // ---- zero-divisors ----

    pub fn is_zero_divisor(&self, f: &Element, seed: Option<&Element>) -> Result<Certificate> {
        let cert = self.zero_divisor_inner(f, seed)?;
        ensure(verify(f, &cert)?, || {
            format!("zero-divisor certificate for {f} fails")
        })?;
        Ok(cert)
    }

    fn zero_divisor_inner(&self, f: &Element, seed: Option<&Element>) -> Result<Certificate> {
        let r = f.ring();
        if f.is_zero() {
            return Ok(Certificate::ZeroDivisor {
                annihilator: r.one(),
            });
        }
        if is_monoid_ring(r) {
            return Ok(match r.base() {
                BaseRing::IntegersMod(n) => {
                    let g = f
                        .terms()
                        .values()
                        .fold(n.clone(), |acc, c| acc.gcd(&c.to_integer()));
                    if g.is_one() {
                        Certificate::NotZeroDivisor {
                            reason: NzdReason::JointAnnihilatorZero { modulus: n.clone() },
                        }
                    } else {
                        Certificate::ZeroDivisor {
                            annihilator: r.integer(n / g),
                        }
                    }
                }
                _ => Certificate::NotZeroDivisor {
                    reason: NzdReason::Domain,
                },
            });
        }
        if let Some(h) = seed {
            let g = homogenize_annihilator(std::slice::from_ref(f), h)?;
            return Ok(Certificate::ZeroDivisor { annihilator: g });
        }
        let Some(t) = self.table(r)? else {
            return Err(Error::Unsupported(format!(
                "zero-divisor test in {} needs a seed annihilator",
                r.name()
            )));
        };
        let ord = t.ordinal(f)?;
        match t.zero_divisor_witness(ord) {
            Some(w) => Ok(Certificate::ZeroDivisor {
                annihilator: homogenize_annihilator(std::slice::from_ref(f), &t.element(w))?,
            }),
            None => {
                let inv = t.unit_inverse(ord).ok_or_else(|| {
                    Error::TheoremViolation(format!("{f} is neither a unit nor a zero-divisor"))
                })?;
                Ok(Certificate::NotZeroDivisor {
                    reason: NzdReason::FiniteUnit {
                        inverse: t.element(inv),
                    },
                })
            }
        }
    }

    // ---- radical colon ideals ----

    fn is_reduced(&self, r: &Ring) -> Result<bool> {
        if is_monoid_ring(r) {
            return Ok(match r.base() {
                BaseRing::IntegersMod(n) => prime_factors(n).iter().all(|(_, e)| *e == 1),
                _ => true,
            });
        }
        match self.table(r)? {
            Some(t) => Ok(t.nilradical().len() == 1),
            None => Ok(false),
        }
    }

    fn member(&self, kind: IdealKind, x: &Element, t: Option<&FiniteRingTable>) -> Result<bool> {
        match kind {
            IdealKind::Zero => Ok(x.is_zero()),
            IdealKind::Nilradical => self.nilpotent_bool(x),
            IdealKind::JacobsonFinite => {
                let t = t.expect("table present for the Jacobson radical");
                Ok(t.jacobson_radical().contains(t.ordinal(x)?))
            }
        }
    }

    /// Checks `fg ∈ I ⟺ f_i g_k ∈ I for all i, k` for a graded radical ideal `I`.
    pub fn check_colon_gradedness(
        &self,
        kind: IdealKind,
        f: &Element,
        g: &Element,
    ) -> Result<ColonReport> {
        let r = f.ring();
        require_ordered(r)?;
        let table = match kind {
            IdealKind::Zero => {
                if !self.is_reduced(r)? {
                    return Err(Error::Precondition(format!(
                        "the zero ideal of {} is not known to be radical",
                        r.name()
                    )));
                }
                None
            }
            IdealKind::Nilradical => None,
            IdealKind::JacobsonFinite => Some(self.table(r)?.ok_or_else(|| {
                Error::Unsupported(format!("Jacobson radical of the infinite ring {}", r.name()))
            })?),
        };
        let t = table.as_deref();
        let product_in_ideal = self.member(kind, &f.mul(g)?, t)?;
        let mut pairs = Vec::new();
        for (i, fi) in f.homogeneous_components() {
            for (k, gk) in g.homogeneous_components() {
                let member = self.member(kind, &fi.mul(&gk)?, t)?;
                pairs.push(PairMembership { i: i.clone(), k, member });
            }
        }
        let all = pairs.iter().all(|p| p.member);
        ensure(all == product_in_ideal, || {
            format!("componentwise membership of {f}·{g} disagrees with the product")
        })?;
        Ok(ColonReport {
            kind,
            product_in_ideal,
            pairs,
        })
    }

    /// `fg` is nilpotent exactly when every `f_i g_k` is.
    pub fn product_nilpotent_componentwise(&self, f: &Element, g: &Element) -> Result<ColonReport> {
        self.check_colon_gradedness(IdealKind::Nilradical, f, g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdealKind {
    Zero,
    Nilradical,
    JacobsonFinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairMembership {
    pub i: Grade,
    pub k: Grade,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColonReport {
    pub kind: IdealKind,
    pub product_in_ideal: bool,
    pub pairs: Vec<PairMembership>,
}

/// Turns an annihilator `h` of the ideal generated by `gens` into a nonzero
/// homogeneous one.
///
/// If the top component of `h` kills every generator it is returned.
/// Otherwise `h` is replaced by `f_t·h`, where `t` is the largest grade with
/// `f_t·h ≠ 0` over all generators `f` (ties go to the earlier generator).
/// The support of `h` shrinks at every step.
pub fn homogenize_annihilator(gens: &[Element], h: &Element) -> Result<Element> {
    if h.is_zero() {
        return Err(Error::Precondition("seed annihilator is zero".into()));
    }
    require_ordered(h.ring())?;
    for f in gens {
        if !f.mul(h)?.is_zero() {
            return Err(Error::Precondition(format!("{h} does not annihilate {f}")));
        }
    }
    let mut h = h.clone();
    loop {
        let comps = h.homogeneous_components();
        let (_, top) = comps.last().expect("nonzero");
        let mut kills = true;
        for f in gens {
            if !f.mul(top)?.is_zero() {
                kills = false;
                break;
            }
        }
        if kills {
            return Ok(top.clone());
        }
        let mut best: Option<(Grade, Element)> = None;
        for f in gens {
            for (t, ft) in f.homogeneous_components().into_iter().rev() {
                let p = ft.mul(&h)?;
                if p.is_zero() {
                    continue;
                }
                if best.as_ref().is_none_or(|(bt, _)| t > *bt) {
                    best = Some((t, p));
                }
                break;
            }
        }
        let (_, next) = best.ok_or_else(|| {
            Error::TheoremViolation(format!("{h} kills every generator componentwise yet its top does not"))
        })?;
        ensure(next.support().len() < comps.len(), || {
            format!("support did not shrink from {h} to {next}")
        })?;
        h = next;
    }
}

pub fn check_idempotent_homogeneity(f: &Element) -> Result<IdempotentReport> {
    let is_idempotent = f.mul(f)? == *f;
    let offending_grades: Vec<Grade> = f.support().into_iter().filter(|g| !g.is_zero()).collect();
    let report = IdempotentReport {
        is_idempotent,
        homogeneous_degree_zero: offending_grades.is_empty(),
        offending_grades,
    };
    if is_idempotent && f.ring().grading().is_torsion_free() {
        ensure(report.homogeneous_degree_zero, || {
            format!("idempotent {f} has components outside degree zero")
        })?;
    }
    Ok(report)
}

pub fn is_nilpotent(f: &Element) -> Result<Certificate> {
    Decider::default().is_nilpotent(f)
}

pub fn is_unit(f: &Element) -> Result<Certificate> {
    Decider::default().is_unit(f)
}

pub fn invert_homogeneous(f: &Element) -> Result<Element> {
    Decider::default().invert_homogeneous(f)
}

pub fn is_zero_divisor(f: &Element, seed: Option<&Element>) -> Result<Certificate> {
    Decider::default().is_zero_divisor(f, seed)
}

pub fn check_colon_gradedness(kind: IdealKind, f: &Element, g: &Element) -> Result<ColonReport> {
    Decider::default().check_colon_gradedness(kind, f, g)
}

pub fn product_nilpotent_componentwise(f: &Element, g: &Element) -> Result<ColonReport> {
    Decider::default().product_nilpotent_componentwise(f, g)
}

#[cfg(test)]
mod tests;
