//! Brute-force model of a finite graded ring.
//!
//! Elements are numbered by mixed-radix ordinals over an additive basis of
//! homogeneous elements. Everything here is computed from definitions by
//! exhaustive scans, so it can serve as an independent check on `decide`
//! and `spectra`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::{Element, FiniteBasis, Ring, TableSpec};
use crate::error::{Error, Result};
use crate::grading::Grade;

pub const DEFAULT_ENUMERATION_CAP: u64 = 65536;
/// Rings up to this size get a cached multiplication table.
const FULL_TABLE_LIMIT: usize = 256;
/// Rings up to this size get the brute-force graded-part cross-check.
const GRADED_PART_CHECK_LIMIT: usize = 512;

/// A subset of the ring, as a membership mask over ordinals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementSet {
    mask: Vec<bool>,
}

impl ElementSet {
    fn empty(size: usize) -> Self {
        ElementSet {
            mask: vec![false; size],
        }
    }

    fn from_fn(size: usize, f: impl Fn(usize) -> bool) -> Self {
        ElementSet {
            mask: (0..size).map(f).collect(),
        }
    }

    pub fn from_members(size: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut s = ElementSet::empty(size);
        for m in members {
            s.insert(m);
        }
        s
    }

    pub fn contains(&self, ord: usize) -> bool {
        self.mask[ord]
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.mask.len()).filter(|&i| self.mask[i]).collect()
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.mask.iter().zip(&other.mask).all(|(a, b)| !a || *b)
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        ElementSet {
            mask: self.mask.iter().zip(&other.mask).map(|(a, b)| *a && *b).collect(),
        }
    }

    fn insert(&mut self, ord: usize) {
        self.mask[ord] = true;
    }
}

/// Outcome of a gradedness test, with the first failing member (by ordinal)
/// and its first offending component (by grade).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCheck {
    pub graded: bool,
    pub witness: Option<(usize, Grade, usize)>,
}

#[derive(Clone)]
pub struct FiniteRingTable {
    ring: Ring,
    basis: FiniteBasis,
    place: Vec<u64>,
    size: usize,
    one: usize,
    digits: Vec<u32>,
    grade_keys: Vec<Grade>,
    basis_grade: Vec<usize>,
    table: Option<Vec<u32>>,
    unit_inverse: Vec<Option<u32>>,
    nil_exponent: Vec<Option<u32>>,
    idem_closure: Vec<u32>,
    zd_witness: Vec<Option<u32>>,
    idempotents: Vec<usize>,
    nilradical: ElementSet,
    jacobson: ElementSet,
    primes: Vec<ElementSet>,
}

impl std::fmt::Debug for FiniteRingTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteRingTable({}, {} elements)", self.ring.name(), self.size)
    }
}

impl FiniteRingTable {
    pub fn enumerate(ring: &Ring, cap: u64) -> Result<FiniteRingTable> {
        let basis = ring.finite_basis()?;
        let mut size: u64 = 1;
        for &t in &basis.torsion {
            size = size.checked_mul(t).filter(|&s| s <= cap).ok_or_else(|| {
                Error::CapExceeded(format!(
                    "{} has more than {cap} elements",
                    ring.name()
                ))
            })?;
        }
        let size = size as usize;
        let b = basis.monomials.len();
        let mut place = Vec::with_capacity(b);
        let mut p = 1u64;
        for &t in &basis.torsion {
            place.push(p);
            p *= t;
        }
        let mut digits = vec![0u32; size * b];
        for ord in 0..size {
            let mut rest = ord as u64;
            for (k, &t) in basis.torsion.iter().enumerate() {
                digits[ord * b + k] = (rest % t) as u32;
                rest /= t;
            }
        }
        let mut grade_keys: Vec<Grade> = basis.grades.clone();
        grade_keys.sort();
        grade_keys.dedup();
        let basis_grade = basis
            .grades
            .iter()
            .map(|g| grade_keys.binary_search(g).expect("grade listed"))
            .collect();
        let one = basis
            .identity
            .iter()
            .zip(&place)
            .map(|(d, p)| d * p)
            .sum::<u64>() as usize;
        let mut t = FiniteRingTable {
            ring: ring.clone(),
            basis,
            place,
            size,
            one,
            digits,
            grade_keys,
            basis_grade,
            table: None,
            unit_inverse: Vec::new(),
            nil_exponent: Vec::new(),
            idem_closure: Vec::new(),
            zd_witness: Vec::new(),
            idempotents: Vec::new(),
            nilradical: ElementSet::empty(size),
            jacobson: ElementSet::empty(size),
            primes: Vec::new(),
        };
        if size <= FULL_TABLE_LIMIT {
            let mut tab = vec![0u32; size * size];
            for a in 0..size {
                for c in a..size {
                    let v = t.mul_slow(a, c) as u32;
                    tab[a * size + c] = v;
                    tab[c * size + a] = v;
                }
            }
            t.table = Some(tab);
        }
        t.scan_powers()?;
        t.scan_zero_divisors()?;
        t.idempotents = (0..size).filter(|&f| t.mul(f, f) == f).collect();
        t.nilradical = ElementSet::from_fn(size, |f| t.nil_exponent[f].is_some());
        if !t.is_ideal(&t.nilradical) {
            return Err(Error::TheoremViolation(
                "nilpotent elements do not form an ideal".into(),
            ));
        }
        t.primes = t.compute_primes()?;
        t.jacobson = t.compute_jacobson()?;
        Ok(t)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn basis(&self) -> &FiniteBasis {
        &self.basis
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn one(&self) -> usize {
        self.one
    }

    fn digits_of(&self, ord: usize) -> &[u32] {
        let b = self.basis.monomials.len();
        &self.digits[ord * b..(ord + 1) * b]
    }

    fn encode(&self, d: &[u64]) -> usize {
        d.iter().zip(&self.place).map(|(x, p)| x * p).sum::<u64>() as usize
    }

    pub fn add(&self, a: usize, c: usize) -> usize {
        let (da, dc) = (self.digits_of(a), self.digits_of(c));
        let d: Vec<u64> = da
            .iter()
            .zip(dc)
            .zip(&self.basis.torsion)
            .map(|((x, y), t)| (*x as u64 + *y as u64) % t)
            .collect();
        self.encode(&d)
    }

    pub fn neg(&self, a: usize) -> usize {
        let d: Vec<u64> = self
            .digits_of(a)
            .iter()
            .zip(&self.basis.torsion)
            .map(|(x, t)| (t - *x as u64) % t)
            .collect();
        self.encode(&d)
    }

    pub fn sub(&self, a: usize, c: usize) -> usize {
        self.add(a, self.neg(c))
    }

    fn mul_slow(&self, a: usize, c: usize) -> usize {
        let b = self.basis.monomials.len();
        let (da, dc) = (self.digits_of(a), self.digits_of(c));
        let mut acc = vec![0u64; b];
        for i in 0..b {
            if da[i] == 0 {
                continue;
            }
            for j in 0..b {
                if dc[j] == 0 {
                    continue;
                }
                let s = da[i] as u64 * dc[j] as u64;
                for (k, coef) in self.basis.products[i][j].iter().enumerate() {
                    if *coef != 0 {
                        let t = self.basis.torsion[k];
                        acc[k] = (acc[k] + (s % t) * (coef % t)) % t;
                    }
                }
            }
        }
        self.encode(&acc)
    }

    pub fn mul(&self, a: usize, c: usize) -> usize {
        match &self.table {
            Some(t) => t[a * self.size + c] as usize,
            None => self.mul_slow(a, c),
        }
    }

    /// The normal-form element with the given ordinal.
    pub fn element(&self, ord: usize) -> Element {
        let terms = self
            .digits_of(ord)
            .iter()
            .zip(&self.basis.monomials)
            .filter(|(d, _)| **d != 0)
            .map(|(d, m)| (m.clone(), BigRational::from_integer(BigInt::from(*d))));
        self.ring
            .from_terms(terms)
            .expect("basis combinations are elements")
    }

    pub fn ordinal(&self, e: &Element) -> Result<usize> {
        if !e.ring().same_ring(&self.ring) {
            return Err(Error::RingMismatch(
                e.ring().name().to_string(),
                self.ring.name().to_string(),
            ));
        }
        let mut d = vec![0u64; self.basis.monomials.len()];
        for (m, c) in e.terms() {
            let k = self
                .basis
                .monomials
                .iter()
                .position(|x| x == m)
                .ok_or_else(|| Error::InvalidPresentation(format!("{e} is not in normal form")))?;
            d[k] = c.to_integer().to_u64().expect("residue");
        }
        Ok(self.encode(&d))
    }

    /// Homogeneous components as `(grade, ordinal)`, ascending by grade.
    pub fn components(&self, ord: usize) -> Vec<(Grade, usize)> {
        let b = self.basis.monomials.len();
        let digits = self.digits_of(ord);
        let mut out = Vec::new();
        for (gi, g) in self.grade_keys.iter().enumerate() {
            let mut d = vec![0u64; b];
            let mut any = false;
            for k in 0..b {
                if self.basis_grade[k] == gi && digits[k] != 0 {
                    d[k] = digits[k] as u64;
                    any = true;
                }
            }
            if any {
                out.push((g.clone(), self.encode(&d)));
            }
        }
        out
    }

    fn scan_powers(&mut self) -> Result<()> {
        let n = self.size;
        let mut stamp = vec![(u32::MAX, 0u32); n];
        let mut unit_inverse = vec![None; n];
        let mut nil_exponent = vec![None; n];
        let mut idem_closure = vec![0u32; n];
        let mut powers: Vec<usize> = Vec::new();
        for f in 0..n {
            powers.clear();
            powers.push(self.one);
            let mut p = f;
            let mut k = 1usize;
            let (start, period) = loop {
                if stamp[p].0 == f as u32 {
                    let j = stamp[p].1 as usize;
                    break (j, k - j);
                }
                stamp[p] = (f as u32, k as u32);
                powers.push(p);
                if p == 0 && nil_exponent[f].is_none() {
                    nil_exponent[f] = Some(k as u32);
                }
                if p == self.one && unit_inverse[f].is_none() {
                    unit_inverse[f] = Some(powers[k - 1] as u32);
                }
                p = self.mul(p, f);
                k += 1;
            };
            // f^m with m >= start a multiple of the period is idempotent.
            let m = start.div_ceil(period) * period;
            let e = powers[start + (m - start) % period];
            if self.mul(e, e) != e {
                return Err(Error::TheoremViolation(format!(
                    "stabilized power of element {f} is not idempotent"
                )));
            }
            idem_closure[f] = e as u32;
        }
        self.unit_inverse = unit_inverse;
        self.nil_exponent = nil_exponent;
        self.idem_closure = idem_closure;
        Ok(())
    }

    /// Zero-divisor witnesses by the Fitting decomposition: with `e` the
    /// idempotent power of `f`, `f` acts nilpotently on `(1 - e)R`.
    fn scan_zero_divisors(&mut self) -> Result<()> {
        let mut w = vec![None; self.size];
        for f in 0..self.size {
            let e = self.idem_closure[f] as usize;
            let mut h = self.sub(self.one, e);
            if h == 0 {
                continue;
            }
            loop {
                let next = self.mul(f, h);
                if next == 0 {
                    break;
                }
                h = next;
            }
            w[f] = Some(h as u32);
            if self.unit_inverse[f].is_some() {
                return Err(Error::TheoremViolation(format!(
                    "element {f} is both a unit and a zero-divisor"
                )));
            }
        }
        for (f, wf) in w.iter().enumerate() {
            if wf.is_none() && self.unit_inverse[f].is_none() {
                return Err(Error::TheoremViolation(format!(
                    "element {f} is neither a unit nor a zero-divisor"
                )));
            }
        }
        self.zd_witness = w;
        Ok(())
    }

    /// Additive subgroup generated by `gens`.
    fn subgroup(&self, gens: impl IntoIterator<Item = usize>) -> ElementSet {
        let mut set = ElementSet::empty(self.size);
        set.insert(0);
        let mut members = vec![0usize];
        for g in gens {
            if set.contains(g) {
                continue;
            }
            // S + <g>: add multiples of g until one falls back into S.
            let base = members.clone();
            let mut mult = g;
            while !set.contains(mult) {
                for &s in &base {
                    let v = self.add(s, mult);
                    if !set.contains(v) {
                        set.insert(v);
                        members.push(v);
                    }
                }
                mult = self.add(mult, g);
            }
        }
        set
    }

    /// The ideal generated by `gens`.
    pub fn ideal_generated(&self, gens: &[usize]) -> ElementSet {
        let b = self.basis.monomials.len();
        let mut all = Vec::new();
        for &g in gens {
            for k in 0..b {
                let mut d = vec![0u64; b];
                d[k] = 1;
                all.push(self.mul(g, self.encode(&d)));
            }
        }
        self.subgroup(all)
    }

    pub fn is_ideal(&self, s: &ElementSet) -> bool {
        let members = s.members();
        if !s.contains(0) || self.subgroup(members.iter().copied()) != *s {
            return false;
        }
        let b = self.basis.monomials.len();
        let basis_ords: Vec<usize> = (0..b)
            .map(|k| {
                let mut d = vec![0u64; b];
                d[k] = 1;
                self.encode(&d)
            })
            .collect();
        members
            .iter()
            .all(|&m| basis_ords.iter().all(|&x| s.contains(self.mul(m, x))))
    }

    /// Greedy ideal generators, in ordinal order.
    pub fn ideal_generators(&self, s: &ElementSet) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = ElementSet::from_fn(self.size, |i| i == 0);
        for m in s.members() {
            if !cur.contains(m) {
                gens.push(m);
                cur = self.ideal_generated(&gens);
            }
        }
        gens
    }

    fn compute_primes(&self) -> Result<Vec<ElementSet>> {
        let nil = self.nilradical.members();
        // coset representatives of R/N: least ordinal of each class
        let mut class = vec![usize::MAX; self.size];
        let mut reps = Vec::new();
        for f in 0..self.size {
            if class[f] != usize::MAX {
                continue;
            }
            for &n in &nil {
                class[self.add(f, n)] = f;
            }
            reps.push(f);
        }
        let in_nil = |x: usize| self.nilradical.contains(x);
        let idem: Vec<usize> = reps
            .iter()
            .copied()
            .filter(|&r| !in_nil(r) && in_nil(self.sub(self.mul(r, r), r)))
            .collect();
        let primitive: Vec<usize> = idem
            .iter()
            .copied()
            .filter(|&e| {
                idem.iter()
                    .all(|&e2| e2 == e || class[self.mul(e, e2)] != class[e2])
            })
            .collect();
        let mut primes = Vec::new();
        for &e in &primitive {
            let p = ElementSet::from_fn(self.size, |f| in_nil(self.mul(f, e)));
            if p.contains(self.one) || !self.is_ideal(&p) {
                return Err(Error::TheoremViolation(
                    "primitive idempotent does not cut out a proper ideal".into(),
                ));
            }
            for &a in &reps {
                for &c in &reps {
                    if p.contains(self.mul(a, c)) && !p.contains(a) && !p.contains(c) {
                        return Err(Error::TheoremViolation(
                            "ideal cut out by a primitive idempotent is not prime".into(),
                        ));
                    }
                }
            }
            primes.push(p);
        }
        let mut meet = ElementSet::from_fn(self.size, |_| true);
        for p in &primes {
            meet = meet.intersection(p);
        }
        if meet != self.nilradical {
            return Err(Error::TheoremViolation(
                "intersection of primes differs from the nilradical".into(),
            ));
        }
        Ok(primes)
    }

    fn compute_jacobson(&self) -> Result<ElementSet> {
        // (a) f with 1 + f r a unit for every r
        let by_units = ElementSet::from_fn(self.size, |f| {
            (0..self.size).all(|r| {
                self.unit_inverse[self.add(self.one, self.mul(f, r))].is_some()
            })
        });
        // (b) intersection of the maximal ideals; in a finite ring every prime is maximal
        let mut meet = ElementSet::from_fn(self.size, |_| true);
        for p in &self.primes {
            meet = meet.intersection(p);
        }
        if by_units != meet {
            return Err(Error::TheoremViolation(
                "the two descriptions of the Jacobson radical disagree".into(),
            ));
        }
        if by_units != self.nilradical {
            return Err(Error::TheoremViolation(
                "Jacobson radical and nilradical differ in a finite ring".into(),
            ));
        }
        Ok(by_units)
    }

    pub fn unit_inverse(&self, ord: usize) -> Option<usize> {
        self.unit_inverse[ord].map(|v| v as usize)
    }

    pub fn nil_exponent(&self, ord: usize) -> Option<u32> {
        self.nil_exponent[ord]
    }

    pub fn zero_divisor_witness(&self, ord: usize) -> Option<usize> {
        self.zd_witness[ord].map(|v| v as usize)
    }

    /// `f^k` for the least `k` with `f^k = f^(2k)`, an idempotent.
    pub fn idempotent_closure(&self, ord: usize) -> usize {
        self.idem_closure[ord] as usize
    }

    pub fn units(&self) -> ElementSet {
        ElementSet::from_fn(self.size, |f| self.unit_inverse[f].is_some())
    }

    pub fn zero_divisors(&self) -> ElementSet {
        ElementSet::from_fn(self.size, |f| self.zd_witness[f].is_some())
    }

    pub fn idempotents(&self) -> &[usize] {
        &self.idempotents
    }

    pub fn nilradical(&self) -> &ElementSet {
        &self.nilradical
    }

    pub fn jacobson_radical(&self) -> &ElementSet {
        &self.jacobson
    }

    pub fn primes(&self) -> &[ElementSet] {
        &self.primes
    }

    pub fn is_homogeneous(&self, ord: usize) -> bool {
        self.components(ord).len() == 1
    }

    pub fn is_graded_subset(&self, s: &ElementSet) -> GradedCheck {
        for m in s.members() {
            for (g, c) in self.components(m) {
                if !s.contains(c) {
                    return GradedCheck {
                        graded: false,
                        witness: Some((m, g, c)),
                    };
                }
            }
        }
        GradedCheck {
            graded: true,
            witness: None,
        }
    }

    /// The ideal generated by the homogeneous elements of `s`: the largest
    /// graded ideal contained in `s`.
    pub fn graded_part(&self, s: &ElementSet) -> Result<ElementSet> {
        if !self.is_ideal(s) {
            return Err(Error::Precondition("subset is not an ideal".into()));
        }
        let homogeneous: Vec<usize> = s
            .members()
            .into_iter()
            .filter(|&m| self.is_homogeneous(m))
            .collect();
        let part = self.ideal_generated(&homogeneous);
        if !part.is_subset(s) || !self.is_graded_subset(&part).graded {
            return Err(Error::TheoremViolation(
                "graded part is not a graded ideal inside the set".into(),
            ));
        }
        if self.size <= GRADED_PART_CHECK_LIMIT {
            // Largest graded ideal in s, from the definition.
            let brute = ElementSet::from_fn(self.size, |f| {
                (0..self.size).all(|r| {
                    self.components(self.mul(r, f))
                        .iter()
                        .all(|(_, c)| s.contains(*c))
                })
            });
            if brute != part {
                return Err(Error::TheoremViolation(
                    "graded part differs from the largest graded ideal inside the set".into(),
                ));
            }
        }
        Ok(part)
    }

    pub fn is_prime(&self, p: &ElementSet) -> bool {
        if p.contains(self.one) || !self.is_ideal(p) {
            return false;
        }
        (0..self.size).all(|a| {
            p.contains(a)
                || (0..self.size).all(|c| p.contains(c) || !p.contains(self.mul(a, c)))
        })
    }

    /// The degree-zero part as a ring of its own, with the embedding of its
    /// ordinals into this table.
    pub fn degree_zero_subring(&self) -> Result<(FiniteRingTable, Vec<usize>)> {
        let zero = self.ring.grading().zero();
        let idx: Vec<usize> = (0..self.basis.monomials.len())
            .filter(|&k| self.basis.grades[k] == zero)
            .collect();
        let names = idx
            .iter()
            .map(|&k| {
                let mut d = vec![0u64; self.basis.monomials.len()];
                d[k] = 1;
                self.element(self.encode(&d)).to_string()
            })
            .collect();
        let mut products = Vec::new();
        for &i in &idx {
            let mut row = Vec::new();
            for &j in &idx {
                let full = &self.basis.products[i][j];
                for (k, c) in full.iter().enumerate() {
                    if *c != 0 && !idx.contains(&k) {
                        return Err(Error::TheoremViolation(
                            "degree-zero basis elements multiply out of degree zero".into(),
                        ));
                    }
                }
                row.push(idx.iter().map(|&k| BigInt::from(full[k])).collect());
            }
            products.push(row);
        }
        let spec = TableSpec {
            names,
            grades: vec![zero; idx.len()],
            torsion: idx.iter().map(|&k| BigInt::from(self.basis.torsion[k])).collect(),
            products,
            identity: idx.iter().map(|&k| BigInt::from(self.basis.identity[k])).collect(),
        };
        if self.components(self.one).iter().any(|(g, _)| !g.is_zero()) {
            return Err(Error::TheoremViolation("identity is not of degree zero".into()));
        }
        let base = self.ring.base().clone();
        let r0 = Ring::from_table(
            format!("{}_0", self.ring.name()),
            base,
            self.ring.grading().clone(),
            spec,
        )?;
        let t0 = FiniteRingTable::enumerate(&r0, DEFAULT_ENUMERATION_CAP)?;
        let embed = (0..t0.size)
            .map(|o| {
                let mut d = vec![0u64; self.basis.monomials.len()];
                for (pos, &k) in idx.iter().enumerate() {
                    d[k] = t0.digits_of(o)[pos] as u64;
                }
                self.encode(&d)
            })
            .collect();
        Ok((t0, embed))
    }

    pub fn report(&self) -> OracleReport {
        let show = |s: &ElementSet| -> Vec<String> {
            self.ideal_generators(s)
                .into_iter()
                .map(|o| self.element(o).to_string())
                .collect()
        };
        let graded = |s: &ElementSet| {
            let c = self.is_graded_subset(s);
            GradednessReport {
                graded: c.graded,
                witness: c.witness.as_ref().map(|(m, _, _)| self.element(*m).to_string()),
                component: c.witness.as_ref().map(|(_, _, comp)| self.element(*comp).to_string()),
            }
        };
        OracleReport {
            schema: 1,
            ring: self.ring.name().to_string(),
            cardinality: self.size,
            units: self.units().len(),
            nilpotents: self.nilradical.len(),
            idempotents: self.idempotents.len(),
            zero_divisors: self.zero_divisors().len(),
            primes: self
                .primes
                .iter()
                .map(|p| PrimeReport {
                    size: p.len(),
                    generators: show(p),
                })
                .collect(),
            nilradical: graded(&self.nilradical),
            jacobson: graded(&self.jacobson),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimeReport {
    pub size: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GradednessReport {
    pub graded: bool,
    pub witness: Option<String>,
    pub component: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub schema: u32,
    pub ring: String,
    pub cardinality: usize,
    pub units: usize,
    pub nilpotents: usize,
    pub idempotents: usize,
    pub zero_divisors: usize,
    pub primes: Vec<PrimeReport>,
    pub nilradical: GradednessReport,
    pub jacobson: GradednessReport,
}

/// Grades present in a table, ascending.
pub fn grade_counts(t: &FiniteRingTable) -> BTreeMap<Grade, usize> {
    let mut m = BTreeMap::new();
    for g in &t.basis.grades {
        *m.entry(g.clone()).or_insert(0) += 1;
    }
    m
}
