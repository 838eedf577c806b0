//! Connected components of prime spectra, computed on finite rings through
//! idempotents, plus the graded spectrum of `Z_n[x, x^-1]` and a bounded
//! quasi-compactness test for `Proj`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::linear::solve;
use crate::algebra::{EngineKind, Element, Monomial, Ring};
use crate::error::{Error, Result};
use crate::oracle::{ElementSet, FiniteRingTable, GradedCheck};
use crate::scalars::{is_prime, prime_factors};

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::TheoremViolation(what()))
    }
}

/// Idempotent data of a finite ring and the component partitions it induces.
#[derive(Clone, Debug)]
pub struct PierceData {
    pub idempotents: Vec<usize>,
    pub primitive_idempotents: Vec<usize>,
    /// Distinct ideals `p_*` generated by the idempotents inside a prime `p`.
    pub max_regular_ideals: Vec<ElementSet>,
    /// Prime indices grouped by component, in order of `max_regular_ideals`.
    pub components_spec: Vec<Vec<usize>>,
    /// Graded prime indices grouped the same way; a group may be empty.
    pub components_spec_star: Vec<Vec<usize>>,
}

pub fn pierce_spectrum(t: &FiniteRingTable) -> Result<PierceData> {
    let idempotents = t.idempotents().to_vec();
    let nonzero: Vec<usize> = idempotents.iter().copied().filter(|&e| e != 0).collect();
    let primitive: Vec<usize> = nonzero
        .iter()
        .copied()
        .filter(|&e| nonzero.iter().all(|&d| d == e || t.mul(e, d) != d))
        .collect();
    let mut sum = 0;
    for (a, &e) in primitive.iter().enumerate() {
        sum = t.add(sum, e);
        for &d in &primitive[a + 1..] {
            ensure(t.mul(e, d) == 0, || "primitive idempotents are not orthogonal".into())?;
        }
    }
    ensure(sum == t.one(), || "primitive idempotents do not sum to one".into())?;

    let primes = t.primes();
    let mut max_regular: Vec<ElementSet> = Vec::new();
    let mut component_of = Vec::with_capacity(primes.len());
    for p in primes {
        let inside: Vec<usize> = idempotents.iter().copied().filter(|&e| p.contains(e)).collect();
        let lower = t.ideal_generated(&inside);
        let idx = match max_regular.iter().position(|m| *m == lower) {
            Some(i) => i,
            None => {
                max_regular.push(lower);
                max_regular.len() - 1
            }
        };
        component_of.push(idx);
    }
    ensure(max_regular.len() == primitive.len(), || {
        format!(
            "{} max-regular ideals but {} primitive idempotents",
            max_regular.len(),
            primitive.len()
        )
    })?;
    // Two primes are in one component exactly when no idempotent separates them.
    for (a, p) in primes.iter().enumerate() {
        for (b, q) in primes.iter().enumerate() {
            let separated = idempotents
                .iter()
                .any(|&e| p.contains(e) && q.contains(t.sub(t.one(), e)));
            ensure(separated == (component_of[a] != component_of[b]), || {
                format!("primes {a} and {b} are misplaced by the idempotent partition")
            })?;
        }
    }
    let mut components_spec = vec![Vec::new(); max_regular.len()];
    for (i, &c) in component_of.iter().enumerate() {
        components_spec[c].push(i);
    }
    let graded = graded_primes(t)?;
    let mut components_spec_star = vec![Vec::new(); max_regular.len()];
    for &i in &graded.graded {
        components_spec_star[component_of[i]].push(i);
    }
    Ok(PierceData {
        idempotents,
        primitive_idempotents: primitive,
        max_regular_ideals: max_regular,
        components_spec,
        components_spec_star,
    })
}

#[derive(Clone, Debug)]
pub struct GradedPrimes {
    /// Indices into `FiniteRingTable::primes` of the graded primes.
    pub graded: Vec<usize>,
    /// Non-graded primes with a member whose component falls outside.
    pub witnesses: Vec<(usize, GradedCheck)>,
}

/// Graded primes among the primes of a finite ring. For torsion-free
/// gradings every minimal prime must be graded; in a finite ring every
/// prime is minimal.
pub fn graded_primes(t: &FiniteRingTable) -> Result<GradedPrimes> {
    let mut graded = Vec::new();
    let mut witnesses = Vec::new();
    for (i, p) in t.primes().iter().enumerate() {
        let c = t.is_graded_subset(p);
        if c.graded {
            graded.push(i);
        } else {
            witnesses.push((i, c));
        }
    }
    if t.ring().grading().is_torsion_free() {
        ensure(witnesses.is_empty(), || {
            format!("{} has a minimal prime that is not graded", t.ring().name())
        })?;
    }
    Ok(GradedPrimes { graded, witnesses })
}

#[derive(Clone, Debug, Serialize)]
pub struct Pi0Report {
    pub schema: u32,
    pub ring: String,
    /// Component counts of Spec(R), Spec(R_0) and Spec*(R).
    pub counts: [usize; 3],
    pub spec: Vec<Vec<usize>>,
    pub spec_degree_zero: Vec<Vec<usize>>,
    pub spec_star: Vec<Vec<usize>>,
    pub idempotents_in_degree_zero: bool,
    pub idempotents_match_degree_zero: bool,
    pub bijections_verified: bool,
}

/// Compares the components of Spec(R), Spec(R_0) and Spec*(R) and checks
/// the maps `V(M) -> V(M ∩ R_0)` and `V(M) -> Spec* ∩ V(M)`.
pub fn pi0_equivalences(t: &FiniteRingTable) -> Result<Pi0Report> {
    if !t.ring().grading().is_torsion_free() {
        return Err(Error::Precondition(format!(
            "{} is graded by a group with torsion",
            t.ring().name()
        )));
    }
    let pd = pierce_spectrum(t)?;
    let idempotents_in_degree_zero = pd
        .idempotents
        .iter()
        .all(|&e| t.components(e).iter().all(|(g, _)| g.is_zero()));
    ensure(idempotents_in_degree_zero, || {
        "an idempotent has a component outside degree zero".into()
    })?;
    let (t0, embed) = t.degree_zero_subring()?;
    let mut from_zero: Vec<usize> = t0.idempotents().iter().map(|&e| embed[e]).collect();
    from_zero.sort_unstable();
    let idempotents_match_degree_zero = from_zero == pd.idempotents;
    ensure(idempotents_match_degree_zero, || {
        "idempotents of R and of R_0 differ".into()
    })?;
    let pd0 = pierce_spectrum(&t0)?;
    let counts = [
        pd.components_spec.len(),
        pd0.components_spec.len(),
        pd.components_spec_star.iter().filter(|c| !c.is_empty()).count(),
    ];
    ensure(counts[0] == counts[1] && counts[1] == counts[2], || {
        format!("component counts differ: {counts:?}")
    })?;
    // V(M) -> V(M ∩ R_0)
    let mut hit = vec![false; pd0.max_regular_ideals.len()];
    for m in &pd.max_regular_ideals {
        let restricted = ElementSet::from_members(t0.size(), (0..t0.size()).filter(|&o| m.contains(embed[o])));
        let j = pd0
            .max_regular_ideals
            .iter()
            .position(|m0| *m0 == restricted)
            .ok_or_else(|| {
                Error::TheoremViolation("a max-regular ideal restricts to no max-regular ideal of R_0".into())
            })?;
        ensure(!hit[j], || "restriction to R_0 is not injective on components".into())?;
        hit[j] = true;
    }
    // V(M) -> Spec* ∩ V(M): graded primes containing M
    let graded = graded_primes(t)?;
    let mut owner = vec![None; t.primes().len()];
    for (c, m) in pd.max_regular_ideals.iter().enumerate() {
        let above: Vec<usize> = graded
            .graded
            .iter()
            .copied()
            .filter(|&i| m.is_subset(&t.primes()[i]))
            .collect();
        ensure(!above.is_empty(), || format!("component {c} has no graded prime"))?;
        ensure(above == pd.components_spec_star[c], || {
            format!("graded primes over component {c} disagree with the partition")
        })?;
        for i in above {
            ensure(owner[i].replace(c).is_none(), || {
                format!("graded prime {i} lies in two components")
            })?;
        }
    }
    Ok(Pi0Report {
        schema: 1,
        ring: t.ring().name().to_string(),
        counts,
        spec: pd.components_spec,
        spec_degree_zero: pd0.components_spec,
        spec_star: pd.components_spec_star,
        idempotents_in_degree_zero,
        idempotents_match_degree_zero,
        bijections_verified: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LaurentReport {
    pub schema: u32,
    pub n: String,
    /// Primes `(p)` of `Z_n`, by increasing `p`.
    pub primes: Vec<String>,
    /// The graded primes `√(pR)` of `Z_n[x, x^-1]`, in matching order.
    pub graded_primes: Vec<String>,
    pub bijection_verified: bool,
}

/// Above this size the domain test of `Z_d` uses trial division instead of
/// a full zero-divisor scan.
const DOMAIN_SCAN_LIMIT: u64 = 4096;

fn residue_ring_is_domain(d: &BigInt) -> bool {
    if d <= &BigInt::one() {
        return false;
    }
    match d.to_u64().filter(|&v| v <= DOMAIN_SCAN_LIMIT) {
        Some(d) => (1..d).all(|a| (1..d).all(|b| a * b % d != 0)),
        None => is_prime(d),
    }
}

/// Graded primes of `R = Z_n[x, x^-1]` with `deg x = 1`.
///
/// A graded prime `P` is determined by the ideals `I_k = {c : c x^k ∈ P}`
/// of `Z_n`; since `x` is a unit, every `I_k` equals `I_0 = P ∩ R_0`, which is
/// a prime of `Z_n`. So the graded primes are `√(pR) = {Σ c_k x^k : p | c_k}`
/// for the prime ideals `(p)` of `Z_n`, and `P -> P ∩ R_0` is a bijection.
pub fn laurent_spec_star(n: &BigInt) -> Result<LaurentReport> {
    if n < &BigInt::from(2) {
        return Err(Error::Precondition(format!("modulus {n} is below 2")));
    }
    // Ideals of Z_n are (d) for d | n; keep the prime ones.
    let mut divisors = vec![BigInt::one()];
    let factors = prime_factors(n);
    for (p, e) in &factors {
        let mut next = Vec::new();
        for d in &divisors {
            let mut q = d.clone();
            for _ in 0..=*e {
                next.push(q.clone());
                q *= p;
            }
        }
        divisors = next;
    }
    divisors.sort();
    let prime_ideals: Vec<BigInt> = divisors
        .into_iter()
        .filter(residue_ring_is_domain)
        .collect();
    let expected: Vec<BigInt> = factors.iter().map(|(p, _)| p.clone()).collect();
    ensure(prime_ideals == expected, || {
        format!("prime ideals of Z_{n} do not match the prime factors of {n}")
    })?;
    for p in &prime_ideals {
        // Homogeneous elements c x^a, c' x^b: the product lies in √(pR) iff
        // p | cc', which forces p | c or p | c'. Checked on residues mod p,
        // which determine membership.
        if let Some(pv) = p.to_u64().filter(|&v| v <= DOMAIN_SCAN_LIMIT) {
            for a in 0..pv {
                for b in 0..pv {
                    let in_p = |c: u64| c.is_multiple_of(pv);
                    ensure(!in_p(a * b) || in_p(a) || in_p(b), || {
                        format!("√({p}R) fails primality at {a}, {b}")
                    })?;
                }
            }
        }
        // proper: 1 is not divisible by p
        ensure(!(BigInt::one().mod_floor(p)).is_zero(), || format!("√({p}R) is the unit ideal"))?;
    }
    Ok(LaurentReport {
        schema: 1,
        n: n.to_string(),
        primes: prime_ideals.iter().map(|p| format!("({p})")).collect(),
        graded_primes: prime_ideals.iter().map(|p| format!("√({p}R)")).collect(),
        bijection_verified: true,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjWitness {
    pub generator: String,
    pub exponent: u32,
    /// `generator^exponent = Σ multipliers[i] · gens[i]`.
    pub multipliers: Vec<Element>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProjOutcome {
    QuasiCompact { witnesses: Vec<ProjWitness> },
    /// No power of `generator` up to `cap` lies in the ideal.
    Unknown {
        generator: String,
        cap: u32,
        obstruction: Option<String>,
    },
}

/// Monomials of weighted degree `d` for positive weights.
fn monomials_of_weight(weights: &[i64], d: i64) -> Vec<Monomial> {
    fn go(weights: &[i64], left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Monomial>) {
        if prefix.len() == weights.len() {
            if left == 0 {
                out.push(Monomial(prefix.clone()));
            }
            return;
        }
        let w = weights[prefix.len()];
        for e in 0..=left / w {
            prefix.push(e);
            go(weights, left - e * w, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 0 {
        go(weights, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Searches `x^k ∈ (gens)` for every ring generator `x` and `k <= cap`;
/// success shows that the positive part lies in the radical of `(gens)`.
pub fn proj_quasicompact(r: &Ring, gens: &[Element], cap: u32) -> Result<ProjOutcome> {
    let field = r.base();
    let prime_field = match field.modulus() {
        Some(p) => is_prime(p),
        None => field.is_field(),
    };
    if !prime_field || !matches!(r.engine_kind(), EngineKind::Free | EngineKind::PerDegreeLinear) {
        return Err(Error::Precondition(format!(
            "{} is not a polynomial ring or linear quotient over a prime field",
            r.name()
        )));
    }
    if r.grading().rank() != 1 || !r.grading().is_ordered() || r.has_invertible_generators() {
        return Err(Error::Precondition(format!("{} is not graded by N", r.name())));
    }
    let weights: Vec<i64> = r.generators().iter().map(|g| g.grade.coords()[0]).collect();
    if weights.iter().any(|&w| w <= 0) {
        return Err(Error::Precondition(format!(
            "{} has generators of non-positive degree",
            r.name()
        )));
    }
    let mut gen_degrees = Vec::new();
    for f in gens {
        match f.degree() {
            Some(d) if d.coords()[0] > 0 => gen_degrees.push(d.coords()[0]),
            _ => {
                return Err(Error::Precondition(format!(
                    "{f} is not homogeneous of positive degree"
                )))
            }
        }
    }
    let mut witnesses = Vec::new();
    'generators: for (j, g) in r.generators().iter().enumerate() {
        let x = r.gen(j);
        for k in 1..=cap {
            let target = match x.pow(k) {
                Ok(t) => t,
                Err(Error::CapExceeded(_)) => break,
                Err(e) => return Err(e),
            };
            let d = k as i64 * weights[j];
            let mut columns = Vec::new();
            let mut labels = Vec::new();
            for (i, f) in gens.iter().enumerate() {
                for m in monomials_of_weight(&weights, d - gen_degrees[i]) {
                    let col = match r.monomial(m.exponents())?.mul(f) {
                        Ok(c) => c,
                        Err(Error::CapExceeded(_)) => continue 'generators,
                        Err(e) => return Err(e),
                    };
                    columns.push(col.terms().clone());
                    labels.push((i, m));
                }
            }
            let Some(coeffs) = solve(field, &columns, target.terms()) else {
                continue;
            };
            let mut multipliers = vec![r.zero(); gens.len()];
            for ((i, m), c) in labels.into_iter().zip(coeffs) {
                if !c.is_zero() {
                    let term = r.from_terms([(m, c)])?;
                    multipliers[i] = multipliers[i].add(&term)?;
                }
            }
            let mut combo = r.zero();
            for (a, f) in multipliers.iter().zip(gens) {
                combo = combo.add(&a.mul(f)?)?;
            }
            ensure(combo == target, || {
                format!("combination for {}^{k} does not re-expand", g.name)
            })?;
            witnesses.push(ProjWitness {
                generator: g.name.clone(),
                exponent: k,
                multipliers,
            });
            continue 'generators;
        }
        return Ok(ProjOutcome::Unknown {
            generator: g.name.clone(),
            cap,
            obstruction: monomial_obstruction(r, gens, j),
        });
    }
    Ok(ProjOutcome::QuasiCompact { witnesses })
}

/// For monomial generators of a polynomial ring: a power of `x_j` is a
/// multiple of a monomial only if that monomial is a power of `x_j`.
fn monomial_obstruction(r: &Ring, gens: &[Element], j: usize) -> Option<String> {
    if r.engine_kind() != EngineKind::Free || gens.iter().any(|f| f.terms().len() != 1) {
        return None;
    }
    let name = &r.generators()[j].name;
    let blockers: Vec<String> = gens
        .iter()
        .filter_map(|f| {
            let (m, _) = f.terms().iter().next()?;
            m.exponents()
                .iter()
                .enumerate()
                .find(|&(i, &e)| i != j && e > 0)
                .map(|(i, _)| r.generators()[i].name.clone())
        })
        .collect();
    (blockers.len() == gens.len()).then(|| {
        let mut vars = blockers;
        vars.sort();
        vars.dedup();
        format!(
            "every generator has positive degree in {}, while powers of {name} have degree zero there",
            vars.join(", ")
        )
    })
}
