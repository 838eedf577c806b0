use super::*;
use crate::algebra::{laurent_ring, polynomial_ring, truncated_polynomial};
use crate::dsl::{element, ring_from_str};
use proptest::prelude::*;

fn z(n: i64) -> Ring {
    polynomial_ring(&format!("Z{n}[x]"), BaseRing::modular(n).unwrap(), &[("x", 1)]).unwrap()
}

fn el(r: &Ring, s: &str) -> Element {
    element(r, s).unwrap()
}

fn deligne() -> Ring {
    crate::algebra::tests::deligne()
}

fn torsion_ring(p: i64) -> Ring {
    ring_from_str(&format!(
        "ring T {{\n base Zmod {p}\n grading Zmod {p}\n gen x deg 1\n rel x^{p} - 1\n}}\n"
    ))
    .unwrap()
}

fn rational_group_ring(p: i64) -> Ring {
    ring_from_str(&format!(
        "ring QC {{\n base Q\n grading Zmod {p}\n gen g deg 1\n rel g^{p} - 1\n}}\n"
    ))
    .unwrap()
}

#[test]
fn nilpotency_examples() {
    let r = z(4);
    assert_eq!(is_nilpotent(&el(&r, "2*x")).unwrap(), Certificate::Nilpotent { exponent: 2 });
    let t = torsion_ring(5);
    assert_eq!(is_nilpotent(&el(&t, "x - 1")).unwrap(), Certificate::Nilpotent { exponent: 5 });
    let r = z(6);
    match is_nilpotent(&el(&r, "3*x")).unwrap() {
        Certificate::NotNilpotent {
            witness: NilWitness::ComponentScalar { grade, scalar },
        } => {
            assert_eq!(grade.coords(), &[1]);
            assert_eq!(scalar.to_string(), "3");
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(is_nilpotent(&r.zero()).unwrap(), Certificate::Nilpotent { exponent: 1 });
}

#[test]
fn nilpotency_in_quotients() {
    let r = truncated_polynomial(8, 3).unwrap();
    // (2 + x)^k: 2 has exponent 3, x has exponent 3
    let f = el(&r, "2 + x");
    let Certificate::Nilpotent { exponent } = is_nilpotent(&f).unwrap() else {
        panic!()
    };
    assert!(f.pow(exponent).unwrap().is_zero());
    assert!(!f.pow(exponent - 1).unwrap().is_zero());
    let s = deligne();
    assert_eq!(
        is_nilpotent(&el(&s, "x2*x3")).unwrap(),
        Certificate::Nilpotent { exponent: 2 }
    );
    assert!(matches!(
        is_nilpotent(&el(&s, "T")),
        Err(Error::CapExceeded(_))
    ));
    assert!(matches!(
        is_nilpotent(&el(&r, "1 + x")).unwrap(),
        Certificate::NotNilpotent { .. }
    ));
}

#[test]
fn unit_examples() {
    let l = laurent_ring(6).unwrap();
    let f = el(&l, "2*x + 3*x^-1");
    assert_eq!(
        is_unit(&f).unwrap(),
        Certificate::Unit {
            inverse: el(&l, "3*x + 2*x^-1")
        }
    );
    let r = z(4);
    assert_eq!(
        is_unit(&el(&r, "1 + 2*x")).unwrap(),
        Certificate::Unit {
            inverse: el(&r, "1 + 2*x")
        }
    );
    let r = z(6);
    match is_unit(&el(&r, "2 + 3*x")).unwrap() {
        Certificate::NotUnit {
            obstruction:
                Obstruction::ContentProper {
                    evidence: ContentEvidence::ConstantNotUnit { constant },
                },
        } => assert_eq!(constant.to_string(), "2"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn laurent_non_units() {
    let l = laurent_ring(6).unwrap();
    assert!(matches!(
        is_unit(&el(&l, "2*x + 4*x^-1")).unwrap(),
        Certificate::NotUnit {
            obstruction: Obstruction::ContentProper {
                evidence: ContentEvidence::CommonPrime { .. }
            }
        }
    ));
    assert!(matches!(
        is_unit(&el(&l, "x + x^2")).unwrap(),
        Certificate::NotUnit {
            obstruction: Obstruction::CrossPairNotNilpotent { .. }
        }
    ));
    let l12 = laurent_ring(12).unwrap();
    let f = el(&l12, "3*x^-1 + 4*x^2 + 6");
    let Certificate::Unit { inverse } = is_unit(&f).unwrap() else {
        panic!()
    };
    assert!((&f * &inverse).is_one());
}

#[test]
fn units_in_finite_and_cyclic_rings() {
    let t = torsion_ring(5);
    let f = el(&t, "x");
    assert_eq!(invert_homogeneous(&f).unwrap(), el(&t, "x^4"));
    assert!(matches!(
        is_unit(&el(&t, "x - 1")).unwrap(),
        Certificate::NotUnit { .. }
    ));
    let q = rational_group_ring(3);
    assert_eq!(invert_homogeneous(&el(&q, "g")).unwrap(), el(&q, "g^2"));
    let l = laurent_ring(6).unwrap();
    assert_eq!(invert_homogeneous(&el(&l, "5*x^2")).unwrap(), el(&l, "5*x^-2"));
    assert_eq!(invert_homogeneous(&l.one()).unwrap(), l.one());
    assert!(matches!(
        invert_homogeneous(&el(&l, "2*x")),
        Err(Error::NotUnit(_))
    ));
    assert!(matches!(
        invert_homogeneous(&el(&l, "x + 1")),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn zero_divisor_examples() {
    let r = z(6);
    assert_eq!(
        is_zero_divisor(&el(&r, "2 + 3*x"), None).unwrap(),
        Certificate::NotZeroDivisor {
            reason: NzdReason::JointAnnihilatorZero {
                modulus: BigInt::from(6)
            }
        }
    );
    assert_eq!(
        is_zero_divisor(&el(&r, "2"), None).unwrap(),
        Certificate::ZeroDivisor {
            annihilator: el(&r, "3")
        }
    );
    assert_eq!(
        is_zero_divisor(&el(&r, "2 + 4*x"), None).unwrap(),
        Certificate::ZeroDivisor {
            annihilator: el(&r, "3")
        }
    );
    let s = deligne();
    assert!(matches!(
        is_zero_divisor(&el(&s, "x3*T + x4"), None),
        Err(Error::Unsupported(_))
    ));
    let seed = el(&s, "x1*T + x2");
    assert_eq!(
        is_zero_divisor(&el(&s, "x3*T + x4"), Some(&seed)).unwrap(),
        Certificate::ZeroDivisor {
            annihilator: el(&s, "x2*x3*T")
        }
    );
}

#[test]
fn homogenize_examples() {
    let s = deligne();
    let g = homogenize_annihilator(&[el(&s, "x3*T + x4")], &el(&s, "x1*T + x2")).unwrap();
    assert_eq!(g, el(&s, "x2*x3*T"));
    let r = z(6);
    assert_eq!(
        homogenize_annihilator(&[el(&r, "2*x")], &el(&r, "3 + 3*x")).unwrap(),
        el(&r, "3*x")
    );
    assert_eq!(
        homogenize_annihilator(&[el(&r, "2*x")], &el(&r, "3*x^2")).unwrap(),
        el(&r, "3*x^2")
    );
    assert!(matches!(
        homogenize_annihilator(&[el(&r, "2*x")], &r.zero()),
        Err(Error::Precondition(_))
    ));
    assert!(matches!(
        homogenize_annihilator(&[el(&r, "2*x")], &el(&r, "2")),
        Err(Error::Precondition(_))
    ));
}

#[test]
fn colon_examples() {
    let r = z(4);
    let rep = check_colon_gradedness(IdealKind::Nilradical, &el(&r, "2 + 2*x"), &el(&r, "2*x")).unwrap();
    assert!(rep.product_in_ideal);
    assert!(rep.pairs.iter().all(|p| p.member));
    let r = z(6);
    let rep = check_colon_gradedness(IdealKind::Nilradical, &el(&r, "2"), &el(&r, "3*x")).unwrap();
    assert!(rep.product_in_ideal);
    let rep = check_colon_gradedness(IdealKind::Zero, &el(&r, "2 + x"), &el(&r, "3")).unwrap();
    assert!(!rep.product_in_ideal);
    let s = deligne();
    assert!(matches!(
        check_colon_gradedness(IdealKind::Zero, &el(&s, "x1*T + x2"), &el(&s, "x3*T + x4")),
        Err(Error::Precondition(_))
    ));
    let z4 = z(4);
    assert!(matches!(
        check_colon_gradedness(IdealKind::Zero, &el(&z4, "2"), &el(&z4, "2")),
        Err(Error::Precondition(_))
    ));
    let t = truncated_polynomial(6, 3).unwrap();
    let rep = check_colon_gradedness(IdealKind::JacobsonFinite, &el(&t, "2 + x"), &el(&t, "1 + x")).unwrap();
    assert!(!rep.product_in_ideal);
}

#[test]
fn idempotent_examples() {
    let q = rational_group_ring(3);
    let f = el(&q, "1/3 + 1/3*g + 1/3*g^2");
    let rep = check_idempotent_homogeneity(&f).unwrap();
    assert!(rep.is_idempotent);
    assert!(!rep.homogeneous_degree_zero);
    let grades: Vec<i64> = rep.offending_grades.iter().map(|g| g.coords()[0]).collect();
    assert_eq!(grades, vec![1, 2]);
    let t = truncated_polynomial(6, 3).unwrap();
    let rep = check_idempotent_homogeneity(&el(&t, "3")).unwrap();
    assert!(rep.is_idempotent && rep.homogeneous_degree_zero);
    assert!(!check_idempotent_homogeneity(&el(&t, "3 + x")).unwrap().is_idempotent);
}

#[test]
fn finite_ring_agreement() {
    let r = truncated_polynomial(12, 2).unwrap();
    let t = FiniteRingTable::enumerate(&r, DEFAULT_ENUMERATION_CAP).unwrap();
    let d = Decider::default().with_oracle(&t);
    for o in 0..t.size() {
        let f = t.element(o);
        assert_eq!(
            d.is_unit(&f).unwrap().is_positive(),
            t.unit_inverse(o).is_some(),
            "{f}"
        );
        assert_eq!(
            d.is_nilpotent(&f).unwrap().is_positive(),
            t.nil_exponent(o).is_some(),
            "{f}"
        );
        assert_eq!(
            d.is_zero_divisor(&f, None).unwrap().is_positive(),
            t.zero_divisor_witness(o).is_some(),
            "{f}"
        );
    }
}

fn small_poly(n: i64) -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(0..n, 1..5)
}

fn laurent_element(l: &Ring, coeffs: &[i64], shift: i64) -> Element {
    let terms = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| (Monomial(vec![i as i64 - shift]), BigRational::from_integer((*c).into())));
    l.from_terms(terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laurent_unit_certificates_verify(coeffs in small_poly(12), shift in -2i64..3) {
        let l = laurent_ring(12).unwrap();
        let f = laurent_element(&l, &coeffs, shift);
        let cert = is_unit(&f).unwrap();
        prop_assert!(verify(&f, &cert).unwrap());
        // a unit of Z12[x^±1] is a unit modulo 2 and 3, i.e. a single unit
        // monomial modulo each prime
        let single = |p: i64| coeffs.iter().filter(|c| *c % p != 0).count() == 1;
        prop_assert_eq!(cert.is_positive(), single(2) && single(3));
    }

    #[test]
    fn nilpotency_matches_components(coeffs in small_poly(8)) {
        let r = truncated_polynomial(8, 3).unwrap();
        let f = laurent_element(&r, &coeffs[..coeffs.len().min(3)], 0);
        let whole = is_nilpotent(&f).unwrap().is_positive();
        let parts = f
            .homogeneous_components()
            .iter()
            .all(|(_, c)| is_nilpotent(c).unwrap().is_positive());
        prop_assert_eq!(whole, parts);
    }
}
