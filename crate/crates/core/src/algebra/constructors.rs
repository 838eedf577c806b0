//! Standard graded rings: polynomial and Laurent rings, truncations, group
//! rings, products, trivial extensions and associated graded rings.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{FiniteBasis, Reduction, Ring, RingPresentation, TableSpec};
use crate::error::{Error, Result};
use crate::grading::{Grade, GradingGroup};
use crate::scalars::BaseRing;

/// `base[x_1, ..., x_k]` graded by `Z` with the given degrees.
pub fn polynomial_ring(name: &str, base: BaseRing, gens: &[(&str, i64)]) -> Result<Ring> {
    let mut p = RingPresentation::new(name, base, GradingGroup::integers());
    for (g, d) in gens {
        p = p.gen(g, &[*d], false)?;
    }
    p.build()
}

/// `Z_n[x, x^-1]` graded by `Z` with `deg x = 1`.
pub fn laurent_ring(n: i64) -> Result<Ring> {
    RingPresentation::new(
        format!("Z{n}[x^±1]"),
        BaseRing::modular(n)?,
        GradingGroup::integers(),
    )
    .gen("x", &[1], true)?
    .build()
}

/// `Z_n[x]/(x^k)` graded by `Z` with `deg x = 1`.
pub fn truncated_polynomial(n: i64, k: u32) -> Result<Ring> {
    RingPresentation::new(
        format!("Z{n}[x]/(x^{k})"),
        BaseRing::modular(n)?,
        GradingGroup::integers(),
    )
    .gen("x", &[1], false)?
    .rel(&format!("x^{k}"))?
    .reduction(Reduction::MonicUnivariate)
    .build()
}

/// The group ring `base[Z_m] = base[g]/(g^m - 1)`, graded by `Z_m` with `deg g = 1`.
pub fn group_ring(base: BaseRing, m: i64) -> Result<Ring> {
    let grading = GradingGroup::cyclic(m)?;
    RingPresentation::new(format!("{base}[Z{m}]"), base, grading)
        .gen("g", &[1], false)?
        .rel(&format!("g^{m} - 1"))?
        .reduction(Reduction::MonicUnivariate)
        .build()
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn basis_names(r: &Ring, fb: &FiniteBasis) -> Result<Vec<String>> {
    fb.monomials
        .iter()
        .map(|m| Ok(r.monomial(m.exponents())?.to_string()))
        .collect()
}

fn require_nonnegative_z(r: &Ring, fb: &FiniteBasis) -> Result<()> {
    if r.grading() != &GradingGroup::integers() {
        return Err(Error::Precondition(format!(
            "{} must be graded by Z, not {}",
            r.name(),
            r.grading()
        )));
    }
    if fb.grades.iter().any(|g| g.coords()[0] < 0) {
        return Err(Error::Precondition(format!(
            "{} has components of negative degree",
            r.name()
        )));
    }
    Ok(())
}

/// `R x S` graded by `Z`: `R_n x 0` in degree `n > 0`, `0 x S_n` in degree `-n`,
/// and `R_0 x S_0` in degree zero. Both factors must be finite and
/// nonnegatively graded.
pub fn product_ring(r: &Ring, s: &Ring) -> Result<Ring> {
    let (fr, fs) = (r.finite_basis()?, s.finite_basis()?);
    require_nonnegative_z(r, &fr)?;
    require_nonnegative_z(s, &fs)?;
    let nr = r.base().modulus().cloned().expect("finite base");
    let ns = s.base().modulus().cloned().expect("finite base");
    let base = BaseRing::modular(nr.lcm(&ns))?;
    let (a, b) = (fr.monomials.len(), fs.monomials.len());
    let z = GradingGroup::integers();
    let mut names = Vec::new();
    for n in basis_names(r, &fr)? {
        names.push(format!("({n},0)"));
    }
    for n in basis_names(s, &fs)? {
        names.push(format!("(0,{n})"));
    }
    let mut grades: Vec<Grade> = fr.grades.clone();
    grades.extend(fs.grades.iter().map(|g| g.neg()));
    let mut torsion = to_big(&fr.torsion);
    torsion.extend(to_big(&fs.torsion));
    let zero_row = vec![BigInt::zero(); a + b];
    let mut products = vec![vec![zero_row.clone(); a + b]; a + b];
    for i in 0..a {
        for j in 0..a {
            for (k, c) in fr.products[i][j].iter().enumerate() {
                products[i][j][k] = BigInt::from(*c);
            }
        }
    }
    for i in 0..b {
        for j in 0..b {
            for (k, c) in fs.products[i][j].iter().enumerate() {
                products[a + i][a + j][a + k] = BigInt::from(*c);
            }
        }
    }
    let mut identity = to_big(&fr.identity);
    identity.extend(to_big(&fs.identity));
    Ring::from_table(
        format!("{} x {}", r.name(), s.name()),
        base,
        z,
        TableSpec {
            names,
            grades,
            torsion,
            products,
            identity,
        },
    )
}

/// The idealization `R ⋉ M` with `M = cR` for an integer `c`, where
/// `(r, m)(r', m') = (rr', rm' + r'm)` and `M` keeps the grading of `R`.
pub fn trivial_extension(r: &Ring, c: i64) -> Result<Ring> {
    let fr = r.finite_basis()?;
    let names_r = basis_names(r, &fr)?;
    let a = fr.monomials.len();
    let c = BigInt::from(c);
    // Basis of M: c * b_i, of additive order m_i / gcd(c, m_i); zero ones are dropped.
    let mut m_index = Vec::new();
    let mut m_torsion = Vec::new();
    for (i, &t) in fr.torsion.iter().enumerate() {
        let t = BigInt::from(t);
        let order = &t / t.gcd(&c);
        if !order.is_one() {
            m_index.push(i);
            m_torsion.push(order);
        }
    }
    let b = m_index.len();
    let mut names: Vec<String> = names_r.iter().map(|n| format!("({n},0)")).collect();
    for &i in &m_index {
        let coeff = if c.is_one() { String::new() } else { format!("{c}*") };
        names.push(format!("(0,{coeff}{})", names_r[i]));
    }
    let mut grades = fr.grades.clone();
    grades.extend(m_index.iter().map(|&i| fr.grades[i].clone()));
    let mut torsion = to_big(&fr.torsion);
    torsion.extend(m_torsion);
    let zero_row = vec![BigInt::zero(); a + b];
    let mut products = vec![vec![zero_row; a + b]; a + b];
    for i in 0..a {
        for j in 0..a {
            for (k, v) in fr.products[i][j].iter().enumerate() {
                products[i][j][k] = BigInt::from(*v);
            }
        }
        for (jj, &j) in m_index.iter().enumerate() {
            for (kk, &k) in m_index.iter().enumerate() {
                let v = BigInt::from(fr.products[i][j][k]);
                products[i][a + jj][a + kk] = v.clone();
                products[a + jj][i][a + kk] = v;
            }
        }
    }
    let mut identity = to_big(&fr.identity);
    identity.extend(std::iter::repeat_n(BigInt::zero(), b));
    Ring::from_table(
        format!("{} ⋉ {c}R", r.name()),
        r.base().clone(),
        r.grading().clone(),
        TableSpec {
            names,
            grades,
            torsion,
            products,
            identity,
        },
    )
}

/// The associated graded ring of the `(g)`-adic filtration of `Z_n`.
///
/// Degree `k` holds `g^k Z_n / g^(k+1) Z_n`, cyclic of order
/// `gcd(g^(k+1), n) / gcd(g^k, n)`, spanned by the class `ε^k` of `g^k`.
pub fn associated_graded(n: i64, g: i64) -> Result<Ring> {
    let nb = BigInt::from(n);
    let gb = BigInt::from(g).mod_floor(&nb);
    let mut orders = Vec::new();
    let mut power = BigInt::one();
    loop {
        let next = &power * &gb;
        let order = next.gcd(&nb) / power.gcd(&nb);
        if order.is_one() || orders.len() > 64 {
            break;
        }
        orders.push(order);
        power = next;
    }
    if orders.is_empty() {
        return Err(Error::Precondition(format!("{g} generates the unit ideal of Z_{n}")));
    }
    let k = orders.len();
    let z = GradingGroup::integers();
    let names = (0..k)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "ε".to_string(),
            _ => format!("ε^{i}"),
        })
        .collect();
    let grades = (0..k).map(|i| z.grade(&[i as i64])).collect::<Result<Vec<_>>>()?;
    let mut products = vec![vec![vec![BigInt::zero(); k]; k]; k];
    for (i, row) in products.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i + j < k {
                v[i + j] = BigInt::one();
            }
        }
    }
    let mut identity = vec![BigInt::zero(); k];
    identity[0] = BigInt::one();
    let base = BaseRing::modular(orders[0].clone())?;
    Ring::from_table(
        format!("gr_({g})(Z{n})"),
        base,
        z,
        TableSpec {
            names,
            grades,
            torsion: orders,
            products,
            identity,
        },
    )
}
