//! Linear algebra over a base field: per-degree slices of a homogeneous ideal.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::Zero;

use super::{Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::scalars::BaseRing;

/// All exponent vectors of `nvars` variables with total degree `d`, largest first.
pub(crate) fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Monomial> {
    fn go(prefix: &mut Vec<i64>, left: usize, nvars: usize, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left as i64);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as i64);
            go(prefix, left - e, nvars, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    go(&mut Vec::new(), d, nvars, &mut out);
    out
}

/// Row reduction in place; returns the pivot column of each surviving row.
/// Rows end fully reduced with pivot entries equal to one.
pub(crate) fn rref(field: &BaseRing, rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = field
            .inverse_raw(&rows[r][c])
            .expect("nonzero entries are invertible in a field");
        for v in rows[r].iter_mut() {
            *v = field.mul_raw(v, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = field.add_raw(v, &field.neg_raw(&field.mul_raw(&factor, pv)));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Solves `sum_i x_i * columns[i] = target` over the field, if possible.
pub(crate) fn solve(
    field: &BaseRing,
    columns: &[Polynomial],
    target: &Polynomial,
) -> Option<Vec<BigRational>> {
    let mut keys: Vec<&Monomial> = columns.iter().flat_map(|c| c.keys()).collect();
    keys.extend(target.keys());
    keys.sort();
    keys.dedup();
    let n = columns.len();
    // One row per monomial, augmented with the target coefficient.
    let mut rows: Vec<Vec<BigRational>> = keys
        .iter()
        .map(|m| {
            let mut row: Vec<BigRational> = columns
                .iter()
                .map(|c| c.get(*m).cloned().unwrap_or_else(BigRational::zero))
                .collect();
            row.push(target.get(*m).cloned().unwrap_or_else(BigRational::zero));
            row
        })
        .collect();
    let pivots = rref(field, &mut rows);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (row, &c) in rows.iter().zip(&pivots) {
        x[c] = row[n].clone();
    }
    Some(x)
}

pub(crate) struct Slice {
    /// Pivot monomial mapped to its normal form (a combination of standard monomials).
    rewrite: BTreeMap<Monomial, Vec<(Monomial, BigRational)>>,
    pub(crate) standard: Vec<Monomial>,
}

pub(crate) struct SliceReducer {
    field: BaseRing,
    nvars: usize,
    relations: Vec<(usize, Polynomial)>,
    cap: usize,
    slices: Mutex<BTreeMap<usize, Arc<Slice>>>,
}

impl SliceReducer {
    pub(crate) fn new(
        field: BaseRing,
        nvars: usize,
        relations: Vec<(usize, Polynomial)>,
        cap: usize,
    ) -> Self {
        SliceReducer {
            field,
            nvars,
            relations,
            cap,
            slices: Mutex::new(BTreeMap::new()),
        }
    }

    pub(crate) fn cap(&self) -> usize {
        self.cap
    }

    pub(crate) fn slice(&self, d: usize) -> Result<Arc<Slice>> {
        if d > self.cap {
            return Err(Error::CapExceeded(format!(
                "degree slice {d} is beyond the cap {}",
                self.cap
            )));
        }
        if let Some(s) = self.slices.lock().expect("slice cache poisoned").get(&d) {
            return Ok(s.clone());
        }
        let s = Arc::new(self.compute(d));
        self.slices
            .lock()
            .expect("slice cache poisoned")
            .insert(d, s.clone());
        Ok(s)
    }

    fn compute(&self, d: usize) -> Slice {
        let cols = monomials_of_degree(self.nvars, d);
        let index: BTreeMap<&Monomial, usize> =
            cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for (e, rel) in &self.relations {
            if *e > d {
                continue;
            }
            for m in monomials_of_degree(self.nvars, d - e) {
                let mut row = vec![BigRational::zero(); cols.len()];
                for (t, c) in rel {
                    row[index[&m.mul(t)]] = c.clone();
                }
                rows.push(row);
            }
        }
        let pivots = rref(&self.field, &mut rows);
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; cols.len()];
            for &p in &pivots {
                v[p] = true;
            }
            v
        };
        let mut rewrite = BTreeMap::new();
        for (row, &p) in rows.iter().zip(&pivots) {
            let tail = row
                .iter()
                .enumerate()
                .filter(|(j, v)| *j != p && !v.is_zero())
                .map(|(j, v)| (cols[j].clone(), self.field.neg_raw(v)))
                .collect();
            rewrite.insert(cols[p].clone(), tail);
        }
        let standard = cols
            .iter()
            .zip(&pivot_set)
            .filter(|(_, p)| !**p)
            .map(|(m, _)| m.clone())
            .collect();
        Slice { rewrite, standard }
    }

    /// Smallest already computed degree whose slice lies entirely in the ideal.
    fn vanishing_degree(&self) -> Option<usize> {
        let slices = self.slices.lock().expect("slice cache poisoned");
        slices
            .iter()
            .find(|(_, s)| s.standard.is_empty())
            .map(|(d, _)| *d)
    }

    pub(crate) fn reduce(&self, poly: Polynomial) -> Result<Polynomial> {
        let mut by_degree: BTreeMap<usize, Vec<(Monomial, BigRational)>> = BTreeMap::new();
        for (m, c) in poly {
            by_degree.entry(m.total_degree() as usize).or_default().push((m, c));
        }
        let mut out = Polynomial::new();
        for (d, terms) in by_degree {
            if d > self.cap {
                match self.vanishing_degree() {
                    Some(v) if v <= d => continue,
                    _ => {
                        return Err(Error::CapExceeded(format!(
                            "degree slice {d} is beyond the cap {}",
                            self.cap
                        )))
                    }
                }
            }
            let slice = self.slice(d)?;
            for (m, c) in terms {
                match slice.rewrite.get(&m) {
                    Some(tail) => {
                        for (t, v) in tail {
                            add_term(&self.field, &mut out, t.clone(), self.field.mul_raw(&c, v));
                        }
                    }
                    None => add_term(&self.field, &mut out, m, c),
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn add_term(field: &BaseRing, p: &mut Polynomial, m: Monomial, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(m);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = field.add_raw(o.get(), &c);
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}
