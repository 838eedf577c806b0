//! Grading groups: free abelian groups `Z^d` under the lexicographic order,
//! and cyclic groups `Z_m`, which carry no compatible order and only serve
//! to build rings where the ordered-group results fail.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest supported rank of a free grading group.
pub const MAX_RANK: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GradingGroup {
    FreeLex { rank: usize },
    Cyclic { modulus: i64 },
}

impl GradingGroup {
    pub fn free_lex(rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_RANK {
            return Err(Error::InvalidGroup(format!(
                "rank must lie in 1..={MAX_RANK}, got {rank}"
            )));
        }
        Ok(GradingGroup::FreeLex { rank })
    }

    pub fn cyclic(modulus: i64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::InvalidGroup(format!(
                "cyclic modulus must be at least 2, got {modulus}"
            )));
        }
        Ok(GradingGroup::Cyclic { modulus })
    }

    /// `Z` with its usual order.
    pub fn integers() -> Self {
        GradingGroup::FreeLex { rank: 1 }
    }

    pub fn is_torsion_free(&self) -> bool {
        matches!(self, GradingGroup::FreeLex { .. })
    }

    /// Only the torsion-free groups admit a translation invariant total order.
    pub fn is_ordered(&self) -> bool {
        self.is_torsion_free()
    }

    pub fn rank(&self) -> usize {
        match self {
            GradingGroup::FreeLex { rank } => *rank,
            GradingGroup::Cyclic { .. } => 1,
        }
    }

    pub fn zero(&self) -> Grade {
        Grade {
            group: self.clone(),
            coords: vec![0; self.rank()],
        }
    }

    /// Builds a grade from raw coordinates, reducing cyclic residues.
    pub fn grade(&self, coords: &[i64]) -> Result<Grade> {
        if coords.len() != self.rank() {
            return Err(Error::InvalidGroup(format!(
                "{self} expects {} coordinate(s), got {}",
                self.rank(),
                coords.len()
            )));
        }
        let coords = match self {
            GradingGroup::FreeLex { .. } => coords.to_vec(),
            GradingGroup::Cyclic { modulus } => vec![coords[0].rem_euclid(*modulus)],
        };
        Ok(Grade {
            group: self.clone(),
            coords,
        })
    }

    /// The `i`-th standard generator (`e_i` for `Z^d`, `1` for `Z_m`).
    pub fn basis_grade(&self, i: usize) -> Grade {
        let mut coords = vec![0; self.rank()];
        coords[i] = 1;
        Grade {
            group: self.clone(),
            coords,
        }
    }
}

impl fmt::Display for GradingGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GradingGroup::FreeLex { rank: 1 } => write!(f, "Z"),
            GradingGroup::FreeLex { rank } => write!(f, "Z^{rank} lex"),
            GradingGroup::Cyclic { modulus } => write!(f, "Zmod {modulus}"),
        }
    }
}

/// An element of a grading group.
///
/// The derived `Ord` is a storage order (lexicographic on coordinates). On
/// free groups it coincides with the group order; use [`Grade::cmp_lex`]
/// when the group order is what is meant, since it rejects cyclic groups.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Grade {
    group: GradingGroup,
    coords: Vec<i64>,
}

impl Grade {
    pub fn group(&self) -> &GradingGroup {
        &self.group
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    fn same_group(&self, other: &Grade) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(
                self.group.to_string(),
                other.group.to_string(),
            ));
        }
        Ok(())
    }

    fn reduced(group: &GradingGroup, coords: Vec<i64>) -> Grade {
        let coords = match group {
            GradingGroup::FreeLex { .. } => coords,
            GradingGroup::Cyclic { modulus } => vec![coords[0].rem_euclid(*modulus)],
        };
        Grade {
            group: group.clone(),
            coords,
        }
    }

    pub fn add(&self, other: &Grade) -> Result<Grade> {
        self.same_group(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Grade::reduced(&self.group, coords))
    }

    pub fn neg(&self) -> Grade {
        Grade::reduced(&self.group, self.coords.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Grade) -> Result<Grade> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Grade {
        Grade::reduced(&self.group, self.coords.iter().map(|c| c * k).collect())
    }

    /// Lexicographic comparison: the first differing coordinate decides.
    pub fn cmp_lex(&self, other: &Grade) -> Result<Ordering> {
        self.same_group(other)?;
        if !self.group.is_ordered() {
            return Err(Error::UnorderedGrading(self.group.to_string()));
        }
        Ok(self.coords.cmp(&other.coords))
    }

    /// `true` when strictly greater than zero in the lexicographic order.
    pub fn is_positive(&self) -> Result<bool> {
        Ok(self.cmp_lex(&self.group.zero())? == Ordering::Greater)
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            write!(f, "{}", self.coords[0])
        } else {
            let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(","))
        }
    }
}

impl Serialize for Grade {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An additive map between grading groups, given by the images of the
/// standard generators of the source.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeMorphism {
    source: GradingGroup,
    target: GradingGroup,
    images: Vec<Grade>,
}

impl GradeMorphism {
    pub fn new(source: GradingGroup, target: GradingGroup, images: Vec<Grade>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(Error::NotAdditive(format!(
                "{source} has {} generator(s) but {} image(s) were given",
                source.rank(),
                images.len()
            )));
        }
        for img in &images {
            if img.group() != &target {
                return Err(Error::NotAdditive(format!(
                    "image {img} does not lie in {target}"
                )));
            }
        }
        // Z_m -> H is well defined only if m * image(1) = 0.
        if let GradingGroup::Cyclic { modulus } = source {
            if !images[0].scale(modulus).is_zero() {
                return Err(Error::NotAdditive(format!(
                    "{modulus} * {} is not zero in {target}",
                    images[0]
                )));
            }
        }
        Ok(GradeMorphism {
            source,
            target,
            images,
        })
    }

    pub fn identity(group: &GradingGroup) -> Self {
        let images = (0..group.rank()).map(|i| group.basis_grade(i)).collect();
        GradeMorphism {
            source: group.clone(),
            target: group.clone(),
            images,
        }
    }

    /// Reduction `Z -> Z_m`.
    pub fn reduction_mod(modulus: i64) -> Result<Self> {
        let target = GradingGroup::cyclic(modulus)?;
        let one = target.basis_grade(0);
        GradeMorphism::new(GradingGroup::integers(), target, vec![one])
    }

    /// Coordinate projection `Z^d -> Z`, `(a_1..a_d) -> a_k`.
    pub fn projection(rank: usize, k: usize) -> Result<Self> {
        let source = GradingGroup::free_lex(rank)?;
        let target = GradingGroup::integers();
        let images = (0..rank)
            .map(|i| target.grade(&[i64::from(i == k)]))
            .collect::<Result<Vec<_>>>()?;
        GradeMorphism::new(source, target, images)
    }

    pub fn source(&self) -> &GradingGroup {
        &self.source
    }

    pub fn target(&self) -> &GradingGroup {
        &self.target
    }

    pub fn apply(&self, g: &Grade) -> Result<Grade> {
        if g.group() != &self.source {
            return Err(Error::GroupMismatch(
                g.group().to_string(),
                self.source.to_string(),
            ));
        }
        let mut acc = self.target.zero();
        for (c, img) in g.coords().iter().zip(&self.images) {
            acc = acc.add(&img.scale(*c))?;
        }
        Ok(acc)
    }
}
