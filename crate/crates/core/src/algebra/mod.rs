//! Graded ring presentations and element arithmetic.
//!
//! A ring is given by generators with grades, homogeneous relations and a
//! reduction engine that brings every product to a unique normal form:
//!
//! * no relations (polynomial, Laurent and mixed monoid rings),
//! * monic univariate rules `x^d = tail(x)`, one per generator,
//! * per-degree linear reduction over a field,
//! * explicit structure constants on a finite additive basis (used by the
//!   product, trivial-extension and associated-graded constructors).

mod constructors;
pub(crate) mod linear;

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use constructors::{
    associated_graded, group_ring, laurent_ring, polynomial_ring, product_ring,
    trivial_extension, truncated_polynomial,
};

use crate::error::{Error, Result};
use crate::grading::{Grade, GradeMorphism, GradingGroup};
use crate::scalars::{BaseRing, Scalar};
use linear::{add_term, SliceReducer};

/// Highest total degree for which linear slices are computed.
pub const DEFAULT_SLICE_CAP: usize = 12;

pub type Polynomial = BTreeMap<Monomial, BigRational>;

/// Exponent vector aligned with the generators of a ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<i64>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn unit(nvars: usize, i: usize) -> Self {
        let mut v = vec![0; nvars];
        v[i] = 1;
        Monomial(v)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub grade: Grade,
    pub invertible: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reduction {
    None,
    MonicUnivariate,
    PerDegreeLinear,
}

/// Which normal-form engine a built ring uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EngineKind {
    Free,
    MonicUnivariate,
    PerDegreeLinear,
    StructureConstants,
}

#[derive(Clone, Debug)]
pub struct RingPresentation {
    pub name: String,
    pub base: BaseRing,
    pub grading: GradingGroup,
    pub generators: Vec<Generator>,
    pub relations: Vec<Polynomial>,
    /// `None` lets the builder pick the engine from the relations.
    pub reduction: Option<Reduction>,
    pub slice_cap: usize,
}

impl RingPresentation {
    pub fn new(name: impl Into<String>, base: BaseRing, grading: GradingGroup) -> Self {
        RingPresentation {
            name: name.into(),
            base,
            grading,
            generators: Vec::new(),
            relations: Vec::new(),
            reduction: None,
            slice_cap: DEFAULT_SLICE_CAP,
        }
    }

    pub fn gen(mut self, name: &str, coords: &[i64], invertible: bool) -> Result<Self> {
        let grade = self.grading.grade(coords)?;
        self.generators.push(Generator {
            name: name.to_string(),
            grade,
            invertible,
        });
        Ok(self)
    }

    /// Adds a relation written in the ring-file expression syntax.
    pub fn rel(mut self, expr: &str) -> Result<Self> {
        let free = self.free_ring()?;
        let e = crate::dsl::parse_expr(expr)?;
        let f = crate::dsl::eval_expr(&free, &e)?;
        self.relations.push(f.terms);
        Ok(self)
    }

    pub fn rel_terms(mut self, p: Polynomial) -> Self {
        self.relations.push(p);
        self
    }

    pub fn reduction(mut self, r: Reduction) -> Self {
        self.reduction = Some(r);
        self
    }

    pub fn slice_cap(mut self, cap: usize) -> Self {
        self.slice_cap = cap;
        self
    }

    /// The same generators with no relations.
    pub fn free_ring(&self) -> Result<Ring> {
        let mut p = self.clone();
        p.relations.clear();
        p.reduction = Some(Reduction::None);
        p.build()
    }

    pub fn build(self) -> Result<Ring> {
        Ring::build(self)
    }
}

struct MonicRule {
    degree: i64,
    /// `x^degree` equals `sum tail[j] x^j`.
    tail: Vec<BigRational>,
}

struct TableEngine {
    torsion: Vec<BigInt>,
    products: Vec<Vec<Polynomial>>,
    identity: Polynomial,
}

enum Engine {
    Free,
    Monic(Vec<Option<MonicRule>>),
    Linear(SliceReducer),
    Table(TableEngine),
}

/// Structure-constant description of a finite graded ring.
#[derive(Clone, Debug)]
pub struct TableSpec {
    pub names: Vec<String>,
    pub grades: Vec<Grade>,
    /// Additive order of each basis element.
    pub torsion: Vec<BigInt>,
    /// `products[i][j][k]` is the coefficient of basis `k` in `b_i * b_j`.
    pub products: Vec<Vec<Vec<BigInt>>>,
    pub identity: Vec<BigInt>,
}

struct RingData {
    id: u64,
    name: String,
    base: BaseRing,
    grading: GradingGroup,
    generators: Vec<Generator>,
    relations: Vec<Polynomial>,
    kind: EngineKind,
    engine: Arc<Engine>,
    /// Relations are homogeneous for total degree and no generator is inverted.
    total_degree_graded: bool,
}

static NEXT_RING_ID: AtomicU64 = AtomicU64::new(1);

fn next_id() -> u64 {
    NEXT_RING_ID.fetch_add(1, AtomicOrdering::Relaxed)
}

/// A built ring; cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.name)
    }
}

/// Finite additive basis of a ring with its multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteBasis {
    pub monomials: Vec<Monomial>,
    pub torsion: Vec<u64>,
    pub grades: Vec<Grade>,
    /// `products[i][j]` lists the coefficients of `b_i * b_j` in the basis.
    pub products: Vec<Vec<Vec<u64>>>,
    pub identity: Vec<u64>,
}

fn grade_of(gens: &[Generator], grading: &GradingGroup, m: &Monomial) -> Grade {
    let mut g = grading.zero();
    for (gen, &e) in gens.iter().zip(&m.0) {
        if e != 0 {
            g = g.add(&gen.grade.scale(e)).expect("generator grades share the group");
        }
    }
    g
}

fn analyse_monic(p: &Polynomial, gens: &[Generator], base: &BaseRing) -> Option<(usize, MonicRule)> {
    let mut var = None;
    for m in p.keys() {
        for (i, &e) in m.0.iter().enumerate() {
            if e != 0 {
                match var {
                    None => var = Some(i),
                    Some(v) if v == i => {}
                    Some(_) => return None,
                }
            }
        }
    }
    let i = var?;
    if gens[i].invertible {
        return None;
    }
    let (lead_m, lead_c) = p.iter().max_by_key(|(m, _)| m.0[i])?;
    let d = lead_m.0[i];
    let inv = base.inverse_raw(lead_c)?;
    let mut tail = vec![BigRational::zero(); d as usize];
    for (m, c) in p {
        let e = m.0[i];
        if e < 0 {
            return None;
        }
        if e != d {
            tail[e as usize] = base.neg_raw(&base.mul_raw(c, &inv));
        }
    }
    Some((i, MonicRule { degree: d, tail }))
}

fn render_terms(
    names: &[String],
    base: &BaseRing,
    terms: &[(&Monomial, &BigRational)],
    pretty: bool,
) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let compact = pretty && names.iter().all(|n| n.chars().count() == 1);
    let mut out = String::new();
    for (idx, (m, c)) in terms.iter().enumerate() {
        let c: BigRational = match base {
            BaseRing::IntegersMod(n) if pretty => {
                let v = c.to_integer();
                if &(&v * 2) > n {
                    BigRational::from_integer(v - n)
                } else {
                    (*c).clone()
                }
            }
            _ => (*c).clone(),
        };
        let negative = c.is_negative();
        let a = c.abs();
        let mut factors = Vec::new();
        for (name, &e) in names.iter().zip(&m.0) {
            if e == 0 || name == "1" {
                continue;
            }
            if e == 1 {
                factors.push(name.clone());
            } else if pretty {
                factors.push(format!("{name}{}", superscript(e)));
            } else {
                factors.push(format!("{name}^{e}"));
            }
        }
        let mono = if pretty {
            factors.join(if compact { "" } else { "·" })
        } else {
            factors.join("*")
        };
        let coeff = if a.is_integer() {
            a.to_integer().to_string()
        } else if pretty && !mono.is_empty() {
            format!("({a})")
        } else {
            a.to_string()
        };
        let body = if mono.is_empty() {
            coeff
        } else if a.is_one() {
            mono
        } else if pretty {
            format!("{coeff}{mono}")
        } else {
            format!("{coeff}*{mono}")
        };
        let sep = match (idx == 0, negative, pretty) {
            (true, false, _) => "",
            (true, true, _) => "-",
            (false, false, true) => "+",
            (false, true, true) => "-",
            (false, false, false) => " + ",
            (false, true, false) => " - ",
        };
        out.push_str(sep);
        out.push_str(&body);
    }
    out
}

fn superscript(e: i64) -> String {
    e.to_string()
        .chars()
        .map(|ch| match ch {
            '-' => '⁻',
            '0' => '⁰',
            '1' => '¹',
            '2' => '²',
            '3' => '³',
            '4' => '⁴',
            '5' => '⁵',
            '6' => '⁶',
            '7' => '⁷',
            '8' => '⁸',
            _ => '⁹',
        })
        .collect()
}

impl Ring {
    pub fn build(p: RingPresentation) -> Result<Ring> {
        let n = p.generators.len();
        let mut seen = std::collections::BTreeSet::new();
        for g in &p.generators {
            if g.name.is_empty() || !seen.insert(g.name.clone()) {
                return Err(Error::InvalidPresentation(format!(
                    "generator name `{}` is empty or repeated",
                    g.name
                )));
            }
            if g.grade.group() != &p.grading {
                return Err(Error::GroupMismatch(
                    g.grade.group().to_string(),
                    p.grading.to_string(),
                ));
            }
        }
        let names: Vec<String> = p.generators.iter().map(|g| g.name.clone()).collect();
        let mut relations = Vec::new();
        for (index, rel) in p.relations.iter().enumerate() {
            let mut clean = Polynomial::new();
            for (m, c) in rel {
                if m.0.len() != n {
                    return Err(Error::InvalidPresentation(format!(
                        "relation {index} has a monomial of the wrong length"
                    )));
                }
                for (g, &e) in p.generators.iter().zip(&m.0) {
                    if e < 0 && !g.invertible {
                        return Err(Error::NegativeExponent(g.name.clone()));
                    }
                }
                add_term(&p.base, &mut clean, m.clone(), p.base.canon(c)?);
            }
            if clean.is_empty() {
                continue;
            }
            let mut grades: Vec<Grade> = clean
                .keys()
                .map(|m| grade_of(&p.generators, &p.grading, m))
                .collect();
            grades.sort();
            grades.dedup();
            if grades.len() > 1 {
                let terms: Vec<(&Monomial, &BigRational)> = clean.iter().rev().collect();
                return Err(Error::NonHomogeneousRelation {
                    index,
                    relation: render_terms(&names, &p.base, &terms, false),
                    first: grades[0].to_string(),
                    second: grades[1].to_string(),
                });
            }
            relations.push(clean);
        }
        let any_invertible = p.generators.iter().any(|g| g.invertible);
        let total_homogeneous = relations.iter().all(|r| {
            let mut d = r.keys().map(|m| m.total_degree());
            let first = d.next();
            d.all(|x| Some(x) == first)
        });

        let monic: Option<Vec<Option<MonicRule>>> = {
            let mut rules: Vec<Option<MonicRule>> = (0..n).map(|_| None).collect();
            let mut ok = true;
            for r in &relations {
                match analyse_monic(r, &p.generators, &p.base) {
                    Some((i, rule)) if rules[i].is_none() => rules[i] = Some(rule),
                    _ => {
                        ok = false;
                        break;
                    }
                }
            }
            ok.then_some(rules)
        };
        let reduction = match p.reduction {
            Some(r) => r,
            None if relations.is_empty() => Reduction::None,
            None if monic.is_some() => Reduction::MonicUnivariate,
            None => Reduction::PerDegreeLinear,
        };
        let (kind, engine) = match reduction {
            Reduction::None => {
                if !relations.is_empty() {
                    return Err(Error::InvalidPresentation(
                        "relations need a reduction engine (monic or linear)".into(),
                    ));
                }
                (EngineKind::Free, Engine::Free)
            }
            Reduction::MonicUnivariate => match monic {
                Some(rules) => (EngineKind::MonicUnivariate, Engine::Monic(rules)),
                None => {
                    let bad = relations
                        .iter()
                        .find(|r| analyse_monic(r, &p.generators, &p.base).is_none())
                        .unwrap_or(&relations[0]);
                    let terms: Vec<(&Monomial, &BigRational)> = bad.iter().rev().collect();
                    return Err(Error::NonMonicRelation(render_terms(
                        &names, &p.base, &terms, false,
                    )));
                }
            },
            Reduction::PerDegreeLinear => {
                if !p.base.is_field() {
                    return Err(Error::NotAField(p.base.to_string()));
                }
                if !p.grading.is_ordered() {
                    return Err(Error::UnorderedGrading(p.grading.to_string()));
                }
                if any_invertible {
                    return Err(Error::InvalidPresentation(
                        "per-degree linear reduction does not allow invertible generators"
                            .into(),
                    ));
                }
                for g in &p.generators {
                    if g.grade.cmp_lex(&p.grading.zero())? == std::cmp::Ordering::Less {
                        return Err(Error::InvalidPresentation(format!(
                            "generator {} has negative grade {}",
                            g.name, g.grade
                        )));
                    }
                }
                if !total_homogeneous {
                    return Err(Error::InvalidPresentation(
                        "relations must be homogeneous in total degree".into(),
                    ));
                }
                let rels = relations
                    .iter()
                    .map(|r| (r.keys().next().unwrap().total_degree() as usize, r.clone()))
                    .collect();
                (
                    EngineKind::PerDegreeLinear,
                    Engine::Linear(SliceReducer::new(p.base.clone(), n, rels, p.slice_cap)),
                )
            }
        };
        Ok(Ring(Arc::new(RingData {
            id: next_id(),
            name: p.name,
            base: p.base,
            grading: p.grading,
            generators: p.generators,
            relations,
            kind,
            engine: Arc::new(engine),
            total_degree_graded: !any_invertible && total_homogeneous,
        })))
    }

    /// A finite ring given by structure constants on an additive basis.
    pub fn from_table(
        name: impl Into<String>,
        base: BaseRing,
        grading: GradingGroup,
        spec: TableSpec,
    ) -> Result<Ring> {
        let b = spec.names.len();
        let modulus = base
            .modulus()
            .cloned()
            .ok_or_else(|| Error::NotModular(base.to_string()))?;
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        if spec.grades.len() != b
            || spec.torsion.len() != b
            || spec.identity.len() != b
            || spec.products.len() != b
            || spec.products.iter().any(|r| r.len() != b || r.iter().any(|v| v.len() != b))
        {
            return bad("structure constant table has inconsistent dimensions".into());
        }
        for t in &spec.torsion {
            if t < &BigInt::from(2) || !(&modulus % t).is_zero() {
                return bad(format!("torsion {t} does not divide the modulus {modulus}"));
            }
        }
        let generators: Vec<Generator> = spec
            .names
            .iter()
            .zip(&spec.grades)
            .map(|(n, g)| Generator {
                name: n.clone(),
                grade: g.clone(),
                invertible: false,
            })
            .collect();
        let to_poly = |v: &[BigInt]| -> Polynomial {
            v.iter()
                .enumerate()
                .filter_map(|(k, c)| {
                    let c = c.mod_floor(&spec.torsion[k]);
                    (!c.is_zero()).then(|| (Monomial::unit(b, k), BigRational::from_integer(c)))
                })
                .collect()
        };
        let products: Vec<Vec<Polynomial>> = spec
            .products
            .iter()
            .map(|row| row.iter().map(|v| to_poly(v)).collect())
            .collect();
        let engine = TableEngine {
            torsion: spec.torsion.clone(),
            products,
            identity: to_poly(&spec.identity),
        };
        let ring = Ring(Arc::new(RingData {
            id: next_id(),
            name: name.into(),
            base,
            grading,
            generators,
            relations: Vec::new(),
            kind: EngineKind::StructureConstants,
            engine: Arc::new(Engine::Table(engine)),
            total_degree_graded: false,
        }));
        ring.validate_table()?;
        Ok(ring)
    }

    fn validate_table(&self) -> Result<()> {
        let Engine::Table(t) = &*self.0.engine else {
            return Ok(());
        };
        let b = t.torsion.len();
        let basis: Vec<Element> = (0..b).map(|i| self.gen(i)).collect();
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        for i in 0..b {
            for j in 0..b {
                if t.products[i][j] != t.products[j][i] {
                    return bad(format!("table is not commutative at ({i},{j})"));
                }
                let want = self.0.generators[i]
                    .grade
                    .add(&self.0.generators[j].grade)?;
                for m in t.products[i][j].keys() {
                    if self.monomial_grade(m) != want {
                        return bad(format!("product ({i},{j}) is not grade preserving"));
                    }
                }
                // torsion of b_i must kill b_i * b_j
                for (m, c) in &t.products[i][j] {
                    let k = m.0.iter().position(|&e| e == 1).unwrap();
                    let v = (c.to_integer() * &t.torsion[i]).mod_floor(&t.torsion[k]);
                    if !v.is_zero() {
                        return bad(format!("torsion of basis {i} is inconsistent with ({i},{j})"));
                    }
                }
            }
            if basis[i].mul(&self.one())? != basis[i] {
                return bad("identity does not act as identity".into());
            }
        }
        for i in 0..b {
            for j in 0..b {
                let ij = basis[i].mul(&basis[j])?;
                for k in 0..b {
                    if ij.mul(&basis[k])? != basis[i].mul(&basis[j].mul(&basis[k])?)? {
                        return bad(format!("table is not associative at ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn base(&self) -> &BaseRing {
        &self.0.base
    }

    pub fn grading(&self) -> &GradingGroup {
        &self.0.grading
    }

    pub fn generators(&self) -> &[Generator] {
        &self.0.generators
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.0.relations
    }

    pub fn engine_kind(&self) -> EngineKind {
        self.0.kind
    }

    pub fn nvars(&self) -> usize {
        self.0.generators.len()
    }

    pub fn same_ring(&self, other: &Ring) -> bool {
        self.0.id == other.0.id
    }

    pub fn has_invertible_generators(&self) -> bool {
        self.0.generators.iter().any(|g| g.invertible)
    }

    /// Whether the ring carries a nonnegative grading by total degree whose
    /// degree-zero part is the base ring.
    pub fn is_total_degree_graded(&self) -> bool {
        self.0.total_degree_graded
    }

    /// Degree cap of the linear engine, if the ring uses it.
    pub fn slice_cap(&self) -> Option<usize> {
        match &*self.0.engine {
            Engine::Linear(r) => Some(r.cap()),
            _ => None,
        }
    }

    pub fn monomial_grade(&self, m: &Monomial) -> Grade {
        grade_of(&self.0.generators, &self.0.grading, m)
    }

    fn elem(&self, terms: Polynomial) -> Element {
        Element {
            ring: self.clone(),
            terms,
        }
    }

    pub fn zero(&self) -> Element {
        self.elem(Polynomial::new())
    }

    pub fn one(&self) -> Element {
        self.integer(1)
    }

    pub fn integer(&self, v: impl Into<BigInt>) -> Element {
        let v = BigRational::from_integer(v.into());
        self.rational(v).expect("integers lie in every base ring")
    }

    pub fn rational(&self, v: BigRational) -> Result<Element> {
        let v = self.0.base.canon(&v)?;
        let terms = match &*self.0.engine {
            Engine::Table(t) => t
                .identity
                .iter()
                .map(|(m, c)| (m.clone(), c * &v))
                .collect(),
            _ => [(Monomial::one(self.nvars()), v)].into_iter().collect(),
        };
        Ok(self.elem(self.normalize(terms)?))
    }

    pub fn scalar(&self, s: &Scalar) -> Result<Element> {
        if s.ring() != self.base() {
            return Err(Error::BaseMismatch(s.ring().to_string(), self.base().to_string()));
        }
        self.rational(s.value().clone())
    }

    /// The `i`-th generator (the `i`-th basis element for structure-constant rings).
    pub fn gen(&self, i: usize) -> Element {
        let terms = [(Monomial::unit(self.nvars(), i), BigRational::one())]
            .into_iter()
            .collect();
        self.elem(self.normalize(terms).expect("generators reduce"))
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.0.generators.iter().position(|g| g.name == name)
    }

    pub fn gen_named(&self, name: &str) -> Result<Element> {
        self.gen_index(name)
            .map(|i| self.gen(i))
            .ok_or_else(|| Error::InvalidPresentation(format!("unknown generator `{name}`")))
    }

    pub fn monomial(&self, exps: &[i64]) -> Result<Element> {
        self.from_terms([(Monomial(exps.to_vec()), BigRational::one())])
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Result<Element> {
        let mut p = Polynomial::new();
        for (m, c) in terms {
            if m.0.len() != self.nvars() {
                return Err(Error::InvalidPresentation(format!(
                    "monomial has {} exponents, ring has {} generators",
                    m.0.len(),
                    self.nvars()
                )));
            }
            if let Engine::Table(_) = &*self.0.engine {
                if m.0.iter().filter(|&&e| e != 0).count() != 1 || m.0.iter().any(|&e| e != 0 && e != 1) {
                    return Err(Error::InvalidPresentation(
                        "terms of a structure-constant ring are single basis elements".into(),
                    ));
                }
            }
            for (g, &e) in self.0.generators.iter().zip(&m.0) {
                if e < 0 && !g.invertible {
                    return Err(Error::NegativeExponent(g.name.clone()));
                }
            }
            let c = self.0.base.canon(&c)?;
            add_term(&self.0.base, &mut p, m, c);
        }
        Ok(self.elem(self.normalize(p)?))
    }

    fn normalize(&self, p: Polynomial) -> Result<Polynomial> {
        match &*self.0.engine {
            Engine::Free => Ok(p),
            Engine::Monic(rules) => Ok(self.monic_reduce(rules, p)),
            Engine::Linear(r) => r.reduce(p),
            Engine::Table(t) => Ok(p
                .into_iter()
                .filter_map(|(m, c)| {
                    let k = m.0.iter().position(|&e| e == 1).expect("basis monomial");
                    let c = c.to_integer().mod_floor(&t.torsion[k]);
                    (!c.is_zero()).then(|| (m, BigRational::from_integer(c)))
                })
                .collect()),
        }
    }

    fn monic_reduce(&self, rules: &[Option<MonicRule>], p: Polynomial) -> Polynomial {
        let base = &self.0.base;
        let mut work = p;
        let mut out = Polynomial::new();
        while let Some((m, c)) = work.pop_last() {
            let hit = rules.iter().enumerate().find_map(|(i, r)| {
                r.as_ref().filter(|r| m.0[i] >= r.degree).map(|r| (i, r))
            });
            match hit {
                None => add_term(base, &mut out, m, c),
                Some((i, rule)) => {
                    for (j, t) in rule.tail.iter().enumerate() {
                        if t.is_zero() {
                            continue;
                        }
                        let mut e = m.0.clone();
                        e[i] = e[i] - rule.degree + j as i64;
                        add_term(base, &mut work, Monomial(e), base.mul_raw(&c, t));
                    }
                }
            }
        }
        out
    }

    fn mul_polys(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        let base = &self.0.base;
        let mut out = Polynomial::new();
        match &*self.0.engine {
            Engine::Table(t) => {
                for (ma, ca) in a {
                    let i = ma.0.iter().position(|&e| e == 1).unwrap();
                    for (mb, cb) in b {
                        let j = mb.0.iter().position(|&e| e == 1).unwrap();
                        let cab = base.mul_raw(ca, cb);
                        for (mk, ck) in &t.products[i][j] {
                            add_term(base, &mut out, mk.clone(), base.mul_raw(&cab, ck));
                        }
                    }
                }
            }
            _ => {
                for (ma, ca) in a {
                    for (mb, cb) in b {
                        add_term(base, &mut out, ma.mul(mb), base.mul_raw(ca, cb));
                    }
                }
            }
        }
        self.normalize(out)
    }

    /// Same arithmetic with grades pushed along an additive map.
    pub fn regrade(&self, morphism: &GradeMorphism) -> Result<Ring> {
        if morphism.source() != &self.0.grading {
            return Err(Error::GroupMismatch(
                morphism.source().to_string(),
                self.0.grading.to_string(),
            ));
        }
        let generators = self
            .0
            .generators
            .iter()
            .map(|g| {
                Ok(Generator {
                    name: g.name.clone(),
                    grade: morphism.apply(&g.grade)?,
                    invertible: g.invertible,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Ring(Arc::new(RingData {
            id: next_id(),
            name: self.0.name.clone(),
            base: self.0.base.clone(),
            grading: morphism.target().clone(),
            generators,
            relations: self.0.relations.clone(),
            kind: self.0.kind,
            engine: self.0.engine.clone(),
            total_degree_graded: self.0.total_degree_graded,
        })))
    }

    /// Additive basis and multiplication table when the ring is finite.
    pub fn finite_basis(&self) -> Result<FiniteBasis> {
        let infinite = |why: &str| Err(Error::InfiniteRing(format!("{}: {why}", self.name())));
        let Some(n) = self.0.base.modulus_u64() else {
            return infinite("base ring is infinite");
        };
        let nv = self.nvars();
        let (monomials, torsion): (Vec<Monomial>, Vec<u64>) = match &*self.0.engine {
            Engine::Free => {
                if nv > 0 {
                    return infinite("free generators");
                }
                (vec![Monomial::one(0)], vec![n])
            }
            Engine::Monic(rules) => {
                let mut degs = Vec::new();
                for (g, r) in self.0.generators.iter().zip(rules) {
                    match r {
                        Some(r) => degs.push(r.degree),
                        None => return infinite(&format!("generator {} is unconstrained", g.name)),
                    }
                }
                let mut ms = vec![Vec::new()];
                for d in degs {
                    ms = ms
                        .into_iter()
                        .flat_map(|p: Vec<i64>| {
                            (0..d).map(move |e| {
                                let mut q = p.clone();
                                q.push(e);
                                q
                            })
                        })
                        .collect();
                }
                let ms: Vec<Monomial> = ms.into_iter().map(Monomial).collect();
                let t = vec![n; ms.len()];
                (ms, t)
            }
            Engine::Linear(r) => {
                let mut ms = Vec::new();
                let mut d = 0;
                loop {
                    let s = r.slice(d).map_err(|_| {
                        Error::InfiniteRing(format!(
                            "{}: nonzero slices up to the degree cap",
                            self.name()
                        ))
                    })?;
                    if s.standard.is_empty() {
                        break;
                    }
                    ms.extend(s.standard.iter().cloned());
                    d += 1;
                }
                let t = vec![n; ms.len()];
                (ms, t)
            }
            Engine::Table(t) => (
                (0..nv).map(|i| Monomial::unit(nv, i)).collect(),
                t.torsion.iter().map(|x| x.to_u64().expect("small torsion")).collect(),
            ),
        };
        let index: BTreeMap<&Monomial, usize> =
            monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let coords = |e: &Element| -> Vec<u64> {
            let mut v = vec![0u64; monomials.len()];
            for (m, c) in &e.terms {
                let k = *index.get(m).expect("normal forms stay in the basis");
                v[k] = c.to_integer().to_u64().expect("residue");
            }
            v
        };
        let elems: Vec<Element> = monomials
            .iter()
            .map(|m| self.elem([(m.clone(), BigRational::one())].into_iter().collect()))
            .collect();
        let mut products = Vec::new();
        for a in &elems {
            let mut row = Vec::new();
            for b in &elems {
                row.push(coords(&a.mul(b)?));
            }
            products.push(row);
        }
        let grades = monomials.iter().map(|m| self.monomial_grade(m)).collect();
        let identity = coords(&self.one());
        Ok(FiniteBasis {
            monomials,
            torsion,
            grades,
            products,
            identity,
        })
    }
}

/// A ring element in normal form.
#[derive(Clone)]
pub struct Element {
    ring: Ring,
    terms: Polynomial,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.terms == other.terms
    }
}

impl Eq for Element {}

impl Hash for Element {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ring.0.id.hash(state);
        self.terms.hash(state);
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Element {
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &Polynomial {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn check(&self, other: &Element) -> Result<()> {
        if !self.ring.same_ring(&other.ring) {
            return Err(Error::RingMismatch(
                self.ring.name().to_string(),
                other.ring.name().to_string(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        let base = self.ring.base();
        let mut t = self.terms.clone();
        for (m, c) in &other.terms {
            add_term(base, &mut t, m.clone(), c.clone());
        }
        // Sums of normal forms are normal forms, except that structure-constant
        // rings reduce each coefficient modulo its own torsion.
        if self.ring.engine_kind() == EngineKind::StructureConstants {
            t = self.ring.normalize(t)?;
        }
        Ok(self.ring.elem(t))
    }

    pub fn neg(&self) -> Element {
        let base = self.ring.base();
        let t = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), base.neg_raw(c)))
            .collect();
        // Negation commutes with every reduction engine.
        self.ring.elem(self.ring.normalize(t).expect("negation stays reduced"))
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        self.check(other)?;
        Ok(self.ring.elem(self.ring.mul_polys(&self.terms, &other.terms)?))
    }

    pub fn scale(&self, c: &BigRational) -> Result<Element> {
        self.mul(&self.ring.rational(c.clone())?)
    }

    pub fn pow(&self, k: u32) -> Result<Element> {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Integer powers; negative exponents need a unit monomial term.
    pub fn pow_signed(&self, k: i64) -> Result<Element> {
        if k >= 0 {
            return self.pow(k as u32);
        }
        let inv = self
            .monomial_inverse()
            .ok_or_else(|| Error::NegativeExponent(self.to_string()))?;
        inv.pow((-k) as u32)
    }

    /// Inverse of `c * x^a` when `c` is a unit and `x^a` only involves inverted generators.
    pub fn monomial_inverse(&self) -> Option<Element> {
        if self.terms.len() != 1 || matches!(self.ring.engine_kind(), EngineKind::StructureConstants) {
            return None;
        }
        let (m, c) = self.terms.iter().next()?;
        for (g, &e) in self.ring.generators().iter().zip(&m.0) {
            if e != 0 && !g.invertible {
                return None;
            }
        }
        let ci = self.ring.base().inverse_raw(c)?;
        let inv = Monomial(m.0.iter().map(|e| -e).collect());
        self.ring.from_terms([(inv, ci)]).ok()
    }

    /// Homogeneous components keyed and ordered by grade.
    pub fn homogeneous_components(&self) -> Vec<(Grade, Element)> {
        let mut by: BTreeMap<Grade, Polynomial> = BTreeMap::new();
        for (m, c) in &self.terms {
            by.entry(self.ring.monomial_grade(m))
                .or_default()
                .insert(m.clone(), c.clone());
        }
        by.into_iter()
            .map(|(g, t)| (g, self.ring.elem(t)))
            .collect()
    }

    pub fn component(&self, grade: &Grade) -> Element {
        let t = self
            .terms
            .iter()
            .filter(|(m, _)| &self.ring.monomial_grade(m) == grade)
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        self.ring.elem(t)
    }

    /// Generators of the content ideal: the homogeneous components.
    pub fn content_generators(&self) -> Vec<Element> {
        self.homogeneous_components()
            .into_iter()
            .map(|(_, e)| e)
            .collect()
    }

    pub fn support(&self) -> Vec<Grade> {
        self.homogeneous_components()
            .into_iter()
            .map(|(g, _)| g)
            .collect()
    }

    /// Least and greatest grade of the support.
    pub fn support_bounds(&self) -> Result<(Grade, Grade)> {
        if !self.ring.grading().is_ordered() {
            return Err(Error::UnorderedGrading(self.ring.grading().to_string()));
        }
        let s = self.support();
        match (s.first(), s.last()) {
            (Some(a), Some(b)) => Ok((a.clone(), b.clone())),
            _ => Err(Error::ZeroElement),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.support().len() == 1
    }

    /// Grade of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<Grade> {
        let s = self.support();
        (s.len() == 1).then(|| s[0].clone())
    }

    /// Part of total degree zero (the constant term).
    pub fn constant_term(&self) -> Element {
        let t = self
            .terms
            .iter()
            .filter(|(m, _)| m.is_one())
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        self.ring.elem(t)
    }

    /// Coefficient as a base ring scalar.
    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        let v = self.terms.get(m).cloned().unwrap_or_else(BigRational::zero);
        Scalar::from_raw(self.ring.base(), v)
    }

    fn sorted_terms(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<(Grade, &Monomial, &BigRational)> = self
            .terms
            .iter()
            .map(|(m, c)| (self.ring.monomial_grade(m), m, c))
            .collect();
        v.sort_by(|a, b| (&b.0, b.1).cmp(&(&a.0, a.1)));
        v.into_iter().map(|(_, m, c)| (m, c)).collect()
    }

    fn render(&self, pretty: bool) -> String {
        let names: Vec<String> = self.ring.generators().iter().map(|g| g.name.clone()).collect();
        render_terms(&names, self.ring.base(), &self.sorted_terms(), pretty)
    }

    /// Compact mathematical notation, e.g. `2x+3x⁻¹`.
    pub fn pretty(&self) -> String {
        self.render(true)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&Element> for &Element {
            type Output = Element;
            fn $m(self, rhs: &Element) -> Element {
                Element::$f(self, rhs).expect("element arithmetic failed")
            }
        }
        impl std::ops::$tr<Element> for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                Element::$f(&self, &rhs).expect("element arithmetic failed")
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl std::ops::Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::neg(self)
    }
}

impl std::ops::Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element::neg(&self)
    }
}

#[cfg(test)]
pub(crate) mod tests;
