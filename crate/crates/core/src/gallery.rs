//! Worked examples, rebuilt from the public API and checked exactly.
//!
//! Each item records its checks; the first failing check aborts the item
//! with an error carrying the expected and actual values.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::{associated_graded, laurent_ring, polynomial_ring, Element, Ring};
use crate::decide::{self, Certificate, IdealKind};
use crate::dsl::{element, ring_from_str};
use crate::error::{Error, Result};
use crate::oracle::{FiniteRingTable, DEFAULT_ENUMERATION_CAP};
use crate::scalars::BaseRing;

/// Primes used by the torsion examples.
pub const TORSION_PRIMES: [u32; 3] = [2, 3, 5];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GalleryId {
    Deligne,
    TorsionNilradical(u32),
    GroupRingIdempotent(u32),
    LaurentUnit,
    AssocGradedZ4,
    MccoyZ6,
}

impl GalleryId {
    pub fn all() -> Vec<GalleryId> {
        let mut v = vec![GalleryId::Deligne];
        v.extend(TORSION_PRIMES.map(GalleryId::TorsionNilradical));
        v.extend(TORSION_PRIMES.map(GalleryId::GroupRingIdempotent));
        v.extend([GalleryId::LaurentUnit, GalleryId::AssocGradedZ4, GalleryId::MccoyZ6]);
        v
    }
}

impl fmt::Display for GalleryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GalleryId::Deligne => write!(f, "deligne"),
            GalleryId::TorsionNilradical(p) => write!(f, "torsion_nilradical({p})"),
            GalleryId::GroupRingIdempotent(p) => write!(f, "group_ring_idempotent({p})"),
            GalleryId::LaurentUnit => write!(f, "laurent_unit"),
            GalleryId::AssocGradedZ4 => write!(f, "assoc_graded_z4"),
            GalleryId::MccoyZ6 => write!(f, "mccoy_z6"),
        }
    }
}

impl FromStr for GalleryId {
    type Err = Error;

    /// Accepts `name` or `name(p)`; the torsion items need `p` in {2, 3, 5}.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once('(') {
            Some((n, rest)) => {
                let a = rest.strip_suffix(')').ok_or_else(|| bad_id(s))?;
                (n, Some(a.trim().parse::<u32>().map_err(|_| bad_id(s))?))
            }
            None => (s, None),
        };
        let prime = |a: Option<u32>| match a {
            Some(p) if TORSION_PRIMES.contains(&p) => Ok(p),
            _ => Err(Error::Precondition(format!(
                "gallery item {name} needs a prime in {{2, 3, 5}}, e.g. {name}(3)"
            ))),
        };
        match (name, arg) {
            ("deligne", None) => Ok(GalleryId::Deligne),
            ("torsion_nilradical", a) => Ok(GalleryId::TorsionNilradical(prime(a)?)),
            ("group_ring_idempotent", a) => Ok(GalleryId::GroupRingIdempotent(prime(a)?)),
            ("laurent_unit", None) => Ok(GalleryId::LaurentUnit),
            ("assoc_graded_z4", None) => Ok(GalleryId::AssocGradedZ4),
            ("mccoy_z6", None) => Ok(GalleryId::MccoyZ6),
            _ => Err(bad_id(s)),
        }
    }
}

fn bad_id(s: &str) -> Error {
    Error::Precondition(format!("unknown gallery item `{s}`"))
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryCheck {
    pub check: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryReport {
    pub schema: u32,
    pub id: String,
    /// Name and description of each constructed object.
    pub objects: Vec<(String, String)>,
    pub checks: Vec<GalleryCheck>,
    pub transcript: Vec<String>,
    pub passed: bool,
}

struct Recorder {
    id: String,
    report: GalleryReport,
}

impl Recorder {
    fn new(id: GalleryId) -> Self {
        Recorder {
            id: id.to_string(),
            report: GalleryReport {
                schema: 1,
                id: id.to_string(),
                objects: Vec::new(),
                checks: Vec::new(),
                transcript: Vec::new(),
                passed: true,
            },
        }
    }

    fn object(&mut self, name: &str, what: impl fmt::Display) {
        self.report.objects.push((name.to_string(), what.to_string()));
    }

    fn say(&mut self, line: impl Into<String>) {
        self.report.transcript.push(line.into());
    }

    fn check(&mut self, name: &str, expected: impl fmt::Display, actual: impl fmt::Display) -> Result<()> {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let pass = expected == actual;
        self.report.checks.push(GalleryCheck {
            check: name.to_string(),
            expected: expected.clone(),
            actual: actual.clone(),
            pass,
        });
        if pass {
            Ok(())
        } else {
            Err(Error::GalleryCheck {
                id: self.id.clone(),
                check: name.to_string(),
                expected,
                actual,
            })
        }
    }

    fn finish(self) -> GalleryReport {
        self.report
    }
}

pub fn gallery(id: GalleryId) -> Result<GalleryReport> {
    let mut rec = Recorder::new(id);
    match id {
        GalleryId::Deligne => deligne(&mut rec)?,
        GalleryId::TorsionNilradical(p) => torsion_nilradical(&mut rec, p)?,
        GalleryId::GroupRingIdempotent(p) => group_ring_idempotent(&mut rec, p)?,
        GalleryId::LaurentUnit => laurent_unit(&mut rec)?,
        GalleryId::AssocGradedZ4 => assoc_graded_z4(&mut rec)?,
        GalleryId::MccoyZ6 => mccoy_z6(&mut rec)?,
    }
    Ok(rec.finish())
}

const DELIGNE_RING: &str = "ring S {
  base Q
  grading Z
  gen a1 deg 0
  gen a2 deg 0
  gen a3 deg 0
  gen a4 deg 0
  gen T deg 1
  rel a1*a3
  rel a2*a4
  rel a1*a4 + a2*a3
}
";

pub fn deligne_ring() -> Result<Ring> {
    ring_from_str(DELIGNE_RING)
}

fn deligne(rec: &mut Recorder) -> Result<()> {
    let s = deligne_ring()?;
    rec.object("S", "Q[a1,a2,a3,a4,T]/(a1a3, a2a4, a1a4+a2a3), deg T = 1, deg a_i = 0");
    let e = |t: &str| element(&s, t);
    let f = e("a1*T + a2")?;
    let g = e("a3*T + a4")?;
    rec.object("f", &f);
    rec.object("g", &g);
    let fg = f.mul(&g)?;
    rec.check("f*g", "0", &fg)?;
    rec.say(format!("({})({}) = {}", f.pretty(), g.pretty(), fg.pretty()));
    let top = e("a1*T")?.mul(&g)?;
    rec.check("a1*T*g is nonzero", true, !top.is_zero())?;
    let low = e("a2")?.mul(&g)?;
    rec.check("a2*g is nonzero", true, !low.is_zero())?;
    rec.say("Ann(g) contains f but neither a1*T nor a2, so it is not graded");
    let n = e("a2*a3")?;
    rec.check("a2*a3 is nonzero", true, !n.is_zero())?;
    rec.check("(a2*a3)^2", "0", n.pow(2)?)?;
    let refused = matches!(
        decide::check_colon_gradedness(IdealKind::Zero, &f, &g),
        Err(Error::Precondition(_))
    );
    rec.check("componentwise test refused for the non-radical zero ideal", true, refused)?;
    let h = decide::homogenize_annihilator(std::slice::from_ref(&g), &f)?;
    rec.check("homogeneous annihilator", e("a2*a3*T")?, &h)?;
    rec.check("annihilator is homogeneous", true, h.is_homogeneous())?;
    rec.check("annihilator kills g", "0", h.mul(&g)?)?;
    rec.say(format!("homogeneous annihilator of {g}: {h}"));
    Ok(())
}

fn torsion_ring(p: u32) -> Result<Ring> {
    ring_from_str(&format!(
        "ring T{p} {{\n  base Zmod {p}\n  grading Zmod {p}\n  gen x deg 1\n  rel x^{p} - 1\n}}\n"
    ))
}

fn torsion_nilradical(rec: &mut Recorder, p: u32) -> Result<()> {
    let t = torsion_ring(p)?;
    rec.object("T", format!("Z{p}[x]/(x^{p} - 1), graded by Z/{p} with deg x = 1"));
    let f = element(&t, "x - 1")?;
    rec.check("(x-1)^p", "0", f.pow(p)?)?;
    rec.say(format!("({})^{p} = x^{p} - 1 = 0", f.pretty()));
    rec.check(
        "nilpotency of x - 1",
        format!("{:?}", Certificate::Nilpotent { exponent: p }),
        format!("{:?}", decide::is_nilpotent(&f)?),
    )?;
    for (grade, c) in f.homogeneous_components() {
        let nil = decide::is_nilpotent(&c)?.is_positive();
        rec.check(&format!("component {} of degree {grade} is not nilpotent", c.pretty()), false, nil)?;
    }
    let table = FiniteRingTable::enumerate(&t, DEFAULT_ENUMERATION_CAP)?;
    let n = table.is_graded_subset(table.nilradical());
    rec.check("nilradical graded", false, n.graded)?;
    let (m, _, comp) = n.witness.expect("witness for a non-graded set");
    rec.check("witness", f.pretty(), table.element(m).pretty())?;
    rec.check(
        "offending component",
        element(&t, "-1")?.pretty(),
        table.element(comp).pretty(),
    )?;
    let j = table.is_graded_subset(table.jacobson_radical());
    rec.check("Jacobson radical graded", false, j.graded)?;
    rec.say(format!(
        "{} lies in the nilradical but its component {} does not",
        table.element(m).pretty(),
        table.element(comp).pretty()
    ));
    Ok(())
}

fn group_ring_idempotent(rec: &mut Recorder, p: u32) -> Result<()> {
    let r = ring_from_str(&format!(
        "ring QZ{p} {{\n  base Q\n  grading Zmod {p}\n  gen g deg 1\n  rel g^{p} - 1\n}}\n"
    ))?;
    rec.object("R", format!("Q[g]/(g^{p} - 1), graded by Z/{p} with deg g = 1"));
    let terms: Vec<String> = (1..=p).map(|s| format!("1/{p}*g^{s}")).collect();
    let f = element(&r, &terms.join(" + "))?;
    rec.object("f", &f);
    rec.check("f^2", &f, f.mul(&f)?)?;
    rec.check("nonzero components", p, f.homogeneous_components().len())?;
    let rep = decide::check_idempotent_homogeneity(&f)?;
    rec.check("idempotent", true, rep.is_idempotent)?;
    rec.check("homogeneous of degree zero", false, rep.homogeneous_degree_zero)?;
    let grades: Vec<String> = rep.offending_grades.iter().map(|g| g.to_string()).collect();
    let want: Vec<String> = (1..p).map(|s| s.to_string()).collect();
    rec.check("offending grades", want.join(","), grades.join(","))?;
    rec.say(format!("f = {} is an idempotent with {p} nonzero components", f.pretty()));
    Ok(())
}

fn laurent_unit(rec: &mut Recorder) -> Result<()> {
    let l = laurent_ring(6)?;
    rec.object("R", "Z6[x, x^-1], deg x = 1");
    let f = element(&l, "2*x + 3*x^-1")?;
    let g = element(&l, "3*x + 2*x^-1")?;
    let fg = f.mul(&g)?;
    rec.check("f*g", "1", &fg)?;
    rec.say(format!("({})({}) = {}", f.pretty(), g.pretty(), fg.pretty()));
    let cert = decide::is_unit(&f)?;
    rec.check(
        "certificate",
        format!("{:?}", Certificate::Unit { inverse: g.clone() }),
        format!("{cert:?}"),
    )?;
    rec.check("f is homogeneous", false, f.is_homogeneous())?;
    rec.say(format!("{} is a unit that is not homogeneous, as Z6 is not a domain", f.pretty()));
    Ok(())
}

fn assoc_graded_z4(rec: &mut Recorder) -> Result<()> {
    let r = associated_graded(4, 2)?;
    rec.object("gr", "associated graded ring of Z4 for the ideal (2): Z2 ⊕ Z2·ε");
    let eps = element(&r, "ε")?;
    rec.check("ε^2", "0", eps.mul(&eps)?)?;
    let u = r.one().add(&eps)?;
    rec.check(
        "certificate for 1 + ε",
        format!("{:?}", Certificate::Unit { inverse: u.clone() }),
        format!("{:?}", decide::is_unit(&u)?),
    )?;
    rec.check("1 + ε is homogeneous", false, u.is_homogeneous())?;
    rec.check("base ring", "Zmod 2", r.base())?;
    rec.check("base ring is a domain", true, r.base().is_domain())?;
    rec.check(
        "ε is a zero-divisor",
        true,
        decide::is_zero_divisor(&eps, None)?.is_positive(),
    )?;
    rec.say(format!(
        "{} is a non-homogeneous unit although the degree-zero part Z2 is a domain",
        u.pretty()
    ));
    Ok(())
}

fn annihilator_of(f: &Element) -> Result<Option<Element>> {
    Ok(match decide::is_zero_divisor(f, None)? {
        Certificate::ZeroDivisor { annihilator } => Some(annihilator),
        _ => None,
    })
}

fn mccoy_z6(rec: &mut Recorder) -> Result<()> {
    let r = polynomial_ring("Z6[x]", BaseRing::modular(6)?, &[("x", 1)])?;
    rec.object("R", "Z6[x], deg x = 1");
    let show = |a: Option<Element>| a.map_or("none".to_string(), |e| e.to_string());
    for (text, want) in [("2", "3"), ("3*x", "2"), ("2 + 3*x", "none")] {
        let f = element(&r, text)?;
        let ann = annihilator_of(&f)?;
        rec.check(&format!("annihilator of {f}"), want, show(ann.clone()))?;
        match ann {
            Some(a) => rec.say(format!("{} is killed by the constant {}", f.pretty(), a.pretty())),
            None => rec.say(format!("{} is not a zero-divisor", f.pretty())),
        }
    }
    Ok(())
}
