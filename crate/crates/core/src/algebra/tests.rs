use super::*;
use crate::dsl::{element, ring_from_str};
use proptest::prelude::*;

fn z6x() -> Ring {
    polynomial_ring("Z6[x]", BaseRing::modular(6).unwrap(), &[("x", 1)]).unwrap()
}

pub(crate) fn deligne() -> Ring {
    ring_from_str(
        "ring S {
  base Q
  grading Z
  gen x1 deg 0
  gen x2 deg 0
  gen x3 deg 0
  gen x4 deg 0
  gen T deg 1
  rel x1*x3
  rel x2*x4
  rel x1*x4 + x2*x3
}
",
    )
    .unwrap()
}

#[test]
fn builds_polynomial_ring() {
    let r = z6x();
    assert_eq!(r.engine_kind(), EngineKind::Free);
    let x = r.gen(0);
    let f = &(&x + &r.integer(2)) * &x;
    assert_eq!(f.to_string(), "x^2 + 2*x");
}

#[test]
fn laurent_unit_product() {
    let r = laurent_ring(6).unwrap();
    let f = element(&r, "2*x + 3*x^-1").unwrap();
    let g = element(&r, "3*x + 2*x^-1").unwrap();
    assert!((&f * &g).is_one());
    assert_eq!(f.pretty(), "2x+3x⁻¹");
    assert_eq!(g.pretty(), "3x+2x⁻¹");
}

#[test]
fn deligne_product_vanishes() {
    let s = deligne();
    assert_eq!(s.engine_kind(), EngineKind::PerDegreeLinear);
    let f = element(&s, "x1*T + x2").unwrap();
    let g = element(&s, "x3*T + x4").unwrap();
    assert!((&f * &g).is_zero());
    assert!(!(&element(&s, "x1*T").unwrap() * &g).is_zero());
    assert!(!(&element(&s, "x2").unwrap() * &g).is_zero());
    // (x2 x3)^2 lies in the ideal while x2 x3 does not.
    let w = element(&s, "x2*x3").unwrap();
    assert!(!w.is_zero());
    assert!(w.pow(2).unwrap().is_zero());
}

/// Independent check of the degree-two slice of the Deligne ideal: the
/// relations are linearly independent monomial combinations, so the slice
/// has rank three, and the quotient keeps x1x4, x2x3, x1x2.
#[test]
fn deligne_degree_two_slice() {
    let s = deligne();
    let Engine::Linear(r) = &*s.0.engine else {
        panic!("linear engine expected")
    };
    let slice = r.slice(2).unwrap();
    let total = linear::monomials_of_degree(5, 2).len();
    assert_eq!(total - slice.standard.len(), 3);
    for z in ["x1*x3", "x2*x4", "x1*x4 + x2*x3"] {
        assert!(element(&s, z).unwrap().is_zero(), "{z}");
    }
    for nz in ["x1*x4", "x2*x3", "x1*x2"] {
        assert!(!element(&s, nz).unwrap().is_zero(), "{nz}");
    }
}

#[test]
fn torsion_group_ring() {
    let t = ring_from_str(
        "ring T {\n  base Zmod 5\n  grading Zmod 5\n  gen x deg 1\n  rel x^5 - 1\n}\n",
    )
    .unwrap();
    assert_eq!(t.engine_kind(), EngineKind::MonicUnivariate);
    let f = element(&t, "x - 1").unwrap();
    assert!(f.pow(5).unwrap().is_zero());
    assert_eq!(f.pretty(), "x-1");
    let g = group_ring(BaseRing::Rationals, 3).unwrap();
    let gen = g.gen(0);
    assert!(gen.pow(3).unwrap().is_one());
    assert!(g.finite_basis().unwrap_err().to_string().contains("infinite"));
}

#[test]
fn components_and_bounds() {
    let r = z6x();
    let f = element(&r, "2 + 3*x").unwrap();
    let comps = f.homogeneous_components();
    assert_eq!(comps.len(), 2);
    assert_eq!(comps[0].0.coords(), &[0]);
    assert_eq!(comps[0].1.to_string(), "2");
    assert_eq!(comps[1].1.to_string(), "3*x");
    assert!(r.zero().homogeneous_components().is_empty());
    assert!(matches!(r.zero().support_bounds(), Err(Error::ZeroElement)));

    let l = laurent_ring(6).unwrap();
    let (lo, hi) = element(&l, "2*x + 3*x^-1").unwrap().support_bounds().unwrap();
    assert_eq!((lo.coords()[0], hi.coords()[0]), (-1, 1));

    let z2 = GradingGroup::free_lex(2).unwrap();
    let r2 = RingPresentation::new("Z[x,y]", BaseRing::Integers, z2)
        .gen("x", &[1, 0], false)
        .unwrap()
        .gen("y", &[0, 1], false)
        .unwrap()
        .build()
        .unwrap();
    let (lo, hi) = element(&r2, "x + y").unwrap().support_bounds().unwrap();
    assert_eq!(lo.coords(), &[0, 1]);
    assert_eq!(hi.coords(), &[1, 0]);
    let x3 = element(&r2, "x^3").unwrap();
    let (lo, hi) = x3.support_bounds().unwrap();
    assert_eq!(lo, hi);
    assert_eq!(x3.content_generators(), vec![x3.clone()]);
}

#[test]
fn regrade_along_reduction() {
    let r = polynomial_ring("Z5[x]", BaseRing::modular(5).unwrap(), &[("x", 1)]).unwrap();
    let m = GradeMorphism::reduction_mod(5).unwrap();
    let t = r.regrade(&m).unwrap();
    let f = element(&t, "x^5 - 1").unwrap();
    assert!(f.is_homogeneous());
    assert!(f.degree().unwrap().is_zero());
    let id = r.regrade(&GradeMorphism::identity(r.grading())).unwrap();
    let g = element(&id, "x^2 + 1").unwrap();
    assert_eq!(g.homogeneous_components().len(), 2);

    let z2 = GradingGroup::free_lex(2).unwrap();
    let r2 = RingPresentation::new("Z[x,y]", BaseRing::Integers, z2)
        .gen("x", &[1, 0], false)
        .unwrap()
        .gen("y", &[0, 1], false)
        .unwrap()
        .build()
        .unwrap();
    let p = r2.regrade(&GradeMorphism::projection(2, 0).unwrap()).unwrap();
    assert!(element(&p, "y").unwrap().degree().unwrap().is_zero());
}

#[test]
fn associated_graded_z4() {
    let r = associated_graded(4, 2).unwrap();
    let fb = r.finite_basis().unwrap();
    assert_eq!(fb.torsion, vec![2, 2]);
    assert_eq!(r.base(), &BaseRing::modular(2).unwrap());
    let eps = r.gen_named("ε").unwrap();
    assert!(eps.pow(2).unwrap().is_zero());
    let u = &r.one() + &eps;
    assert!(u.pow(2).unwrap().is_one());
    assert!(!u.is_homogeneous());
    let z8 = associated_graded(8, 2).unwrap();
    assert_eq!(z8.finite_basis().unwrap().torsion, vec![2, 2, 2]);
}

#[test]
fn product_and_trivial_extension() {
    let a = truncated_polynomial(2, 2).unwrap();
    let b = truncated_polynomial(3, 2).unwrap();
    let p = product_ring(&a, &b).unwrap();
    let e = p.gen_named("(1,0)").unwrap();
    assert_eq!(e.degree().unwrap().coords(), &[0]);
    assert_eq!(e.pow(2).unwrap(), e);
    let y = p.gen_named("(0,x)").unwrap();
    assert_eq!(y.degree().unwrap().coords(), &[-1]);
    assert!((&e * &y).is_zero());
    assert!((&(&e + &p.gen_named("(0,1)").unwrap()) - &p.one()).is_zero());

    let t = trivial_extension(&truncated_polynomial(4, 2).unwrap(), 2).unwrap();
    let fb = t.finite_basis().unwrap();
    assert_eq!(fb.torsion, vec![4, 4, 2, 2]);
    let m = t.gen_named("(0,2*1)").unwrap();
    assert!((&m * &m).is_zero());
    assert!(!m.is_zero());
}

#[test]
fn normal_form_examples() {
    let r = truncated_polynomial(6, 3).unwrap();
    let f = element(&r, "3 + x").unwrap();
    assert_eq!((&f * &f).to_string(), "x^2 + 3");
    // two constructions of the same element agree
    let a = element(&r, "(x + 1)^3").unwrap();
    let b = element(&r, "3*x^2 + 3*x + 1").unwrap();
    assert_eq!(a, b);
    assert_eq!(a.terms(), b.terms());
    assert!(element(&r, "x^3").unwrap().is_zero());
}

#[test]
fn negative_exponent_needs_unit() {
    let r = z6x();
    assert!(matches!(
        element(&r, "x^-1").unwrap_err(),
        Error::Parse { .. }
    ));
    assert!(r.gen(0).pow_signed(-1).is_err());
}

#[test]
fn ring_mismatch_is_an_error() {
    let a = z6x();
    let b = z6x();
    assert!(matches!(a.gen(0).add(&b.gen(0)), Err(Error::RingMismatch(..))));
}

#[test]
fn non_monic_relation_rejected() {
    let e = RingPresentation::new("R", BaseRing::modular(6).unwrap(), GradingGroup::integers())
        .gen("x", &[1], false)
        .unwrap()
        .rel("2*x^2")
        .unwrap()
        .reduction(Reduction::MonicUnivariate)
        .build()
        .unwrap_err();
    assert!(matches!(e, Error::NonMonicRelation(_)));
    let e = RingPresentation::new("R", BaseRing::modular(6).unwrap(), GradingGroup::integers())
        .gen("x", &[1], false)
        .unwrap()
        .rel("x^2")
        .unwrap()
        .reduction(Reduction::PerDegreeLinear)
        .build()
        .unwrap_err();
    assert!(matches!(e, Error::NotAField(_)));
}

#[test]
fn linear_cap_is_explicit() {
    let s = deligne();
    let x1 = element(&s, "x1").unwrap();
    assert!(matches!(x1.pow(13), Err(Error::CapExceeded(_))));
}

fn corpus() -> Vec<Ring> {
    vec![
        truncated_polynomial(6, 3).unwrap(),
        laurent_ring(6).unwrap(),
        group_ring(BaseRing::Rationals, 3).unwrap(),
        associated_graded(8, 2).unwrap(),
        product_ring(
            &truncated_polynomial(2, 2).unwrap(),
            &truncated_polynomial(3, 2).unwrap(),
        )
        .unwrap(),
        trivial_extension(&truncated_polynomial(4, 2).unwrap(), 2).unwrap(),
        deligne(),
    ]
}

fn random_element(r: &Ring, coeffs: &[i64]) -> Element {
    let n = r.nvars();
    let mut f = r.zero();
    for (k, c) in coeffs.iter().enumerate() {
        let mut term = r.integer(*c);
        if n > 0 {
            let i = k % n;
            let e = (k / n) as i64 % 3;
            let exp = if r.generators()[i].invertible { e - 1 } else { e.min(1) };
            let mut ex = vec![0; n];
            ex[i] = exp;
            if r.engine_kind() == EngineKind::StructureConstants && exp == 0 {
                ex[i] = 1;
            }
            term = term.mul(&r.monomial(&ex).unwrap()).unwrap();
        }
        f = f.add(&term).unwrap();
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_axioms_hold(
        a in proptest::collection::vec(-5i64..5, 1..6),
        b in proptest::collection::vec(-5i64..5, 1..6),
        c in proptest::collection::vec(-5i64..5, 1..6),
    ) {
        for r in corpus() {
            let (f, g, h) = (random_element(&r, &a), random_element(&r, &b), random_element(&r, &c));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert_eq!(&f + &r.zero(), f.clone());
            prop_assert_eq!(&f * &r.one(), f.clone());
            let sum: Element = f
                .homogeneous_components()
                .into_iter()
                .fold(r.zero(), |acc, (_, e)| &acc + &e);
            prop_assert_eq!(sum, f.clone());
        }
    }

    #[test]
    fn grades_add_under_multiplication(
        a in proptest::collection::vec(-5i64..5, 1..6),
        b in proptest::collection::vec(-5i64..5, 1..6),
    ) {
        for r in corpus() {
            let (f, g) = (random_element(&r, &a), random_element(&r, &b));
            for (gi, fi) in f.homogeneous_components() {
                for (gk, gk_el) in g.homogeneous_components() {
                    let p = &fi * &gk_el;
                    if !p.is_zero() {
                        prop_assert_eq!(p.degree().unwrap(), gi.add(&gk).unwrap());
                    }
                }
            }
        }
    }
}

#[test]
fn relations_reduce_to_zero() {
    for r in corpus() {
        let free_terms = r.relations().to_vec();
        for rel in free_terms {
            let e = r.from_terms(rel).unwrap();
            assert!(e.is_zero(), "{}", r.name());
        }
    }
}
