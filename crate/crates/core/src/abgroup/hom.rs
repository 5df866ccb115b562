use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::snf::{null_space, smith, solve_with};
use super::{matrix_from_rows, rows_of, Big, FgAbGroup, IntMatrix, Presentation};
use crate::{Error, Result};

/// A homomorphism between presented groups, acting on column vectors of
/// generator coordinates: `matrix` has one row per target generator and one
/// column per source generator.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GroupHom {
    matrix: IntMatrix,
    source: Presentation,
    target: Presentation,
}

impl GroupHom {
    /// Checked constructor: every source relation must map into the target
    /// relation lattice.
    pub fn new(source: Presentation, target: Presentation, matrix: IntMatrix) -> Result<Self> {
        if matrix.shape() != (target.generator_count(), source.generator_count()) {
            return Err(Error::InvalidHom(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generator_count(),
                source.generator_count()
            )));
        }
        let mut h = GroupHom { matrix, source, target };
        h.reduce();
        h.check_well_defined()?;
        Ok(h)
    }

    /// Hom between the canonical presentations of two normal-form groups.
    pub fn between(source: &FgAbGroup, target: &FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        Self::new(source.presentation(), target.presentation(), matrix)
    }

    pub fn identity(p: &Presentation) -> Self {
        let n = p.generator_count();
        GroupHom { matrix: IntMatrix::identity(n), source: p.clone(), target: p.clone() }
    }

    pub fn zero(source: &Presentation, target: &Presentation) -> Self {
        GroupHom {
            matrix: IntMatrix::zeros(target.generator_count(), source.generator_count()),
            source: source.clone(),
            target: target.clone(),
        }
    }

    /// Multiplication by `c` on a presented group.
    pub fn scalar(p: &Presentation, c: impl Into<BigInt>) -> Self {
        let mut h = GroupHom { matrix: IntMatrix::scalar(p.generator_count(), &c.into()), source: p.clone(), target: p.clone() };
        h.reduce();
        h
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    fn reduce(&mut self) {
        if let Some(t) = self.target.as_canonical() {
            for (i, d) in t.invariant_factors().iter().enumerate() {
                self.matrix.reduce_row(i, d);
            }
        }
    }

    fn check_well_defined(&self) -> Result<()> {
        let rel = self.source.relations();
        let canonical = self.target.as_canonical();
        let target_lattice = if canonical.is_none() { Some(smith(&self.target.relations().transpose())) } else { None };
        for r in 0..rel.rows() {
            let image = self.matrix.mul_vec(rel.row(r));
            let ok = match (&canonical, &target_lattice) {
                (Some(g), _) => g.is_zero_element(&image),
                (None, Some(s)) => image.iter().all(Zero::is_zero) || solve_with(s, &image).is_some(),
                (None, None) => unreachable!(),
            };
            if !ok {
                return Err(Error::InvalidHom(format!("relation {r} of the source does not map to zero")));
            }
        }
        Ok(())
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = self.matrix.mul_vec(v);
        if let Some(t) = self.target.as_canonical() {
            t.reduce(&mut out);
        }
        out
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &GroupHom) -> Result<GroupHom> {
        if first.target != self.source {
            return Err(Error::InvalidHom("composition of homs with mismatched endpoints".into()));
        }
        let mut h = GroupHom { matrix: self.matrix.mul(&first.matrix), source: first.source.clone(), target: self.target.clone() };
        h.reduce();
        Ok(h)
    }

    /// `self - other`, on equal endpoints.
    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidHom("difference of homs with mismatched endpoints".into()));
        }
        let mut h = GroupHom { matrix: self.matrix.sub(&other.matrix), source: self.source.clone(), target: self.target.clone() };
        h.reduce();
        Ok(h)
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::InvalidHom("sum of homs with mismatched endpoints".into()));
        }
        let mut h = GroupHom { matrix: self.matrix.add(&other.matrix), source: self.source.clone(), target: self.target.clone() };
        h.reduce();
        Ok(h)
    }

    /// `id − self` for an endomorphism.
    pub fn one_minus(&self) -> Result<GroupHom> {
        if !self.is_endomorphism() {
            return Err(Error::InvalidHom("1 - f needs an endomorphism".into()));
        }
        GroupHom::identity(&self.source).sub(self)
    }

    /// Whether `self` and `other` agree as maps (matrices may differ by relations).
    pub fn same_map(&self, other: &GroupHom) -> bool {
        self.source == other.source
            && self.target == other.target
            && (0..self.matrix.cols()).all(|j| {
                let d: Vec<BigInt> = self.matrix.column(j).iter().zip(other.matrix.column(j)).map(|(a, b)| a - b).collect();
                self.target.is_zero_element(&d)
            })
    }

    pub fn is_zero_map(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero_element(&self.matrix.column(j)))
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(kernel(self)?.0.is_trivial())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(cokernel(self)?.group.is_trivial())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }

    /// Finds `h` with `injection ∘ h = self`. Fails if the image of `self`
    /// does not lie in the image of `injection`.
    pub fn lift_through(&self, injection: &GroupHom) -> Result<GroupHom> {
        if injection.target != self.target {
            return Err(Error::InvalidHom("lift through a map with a different target".into()));
        }
        let a = injection.matrix.hstack(&self.target.relations().transpose());
        let s = smith(&a);
        let nb = injection.source.generator_count();
        let mut cols = Vec::with_capacity(self.matrix.cols());
        for j in 0..self.matrix.cols() {
            let x = solve_with(&s, &self.matrix.column(j))
                .ok_or_else(|| Error::InvalidHom(format!("generator {j} does not lift")))?;
            cols.push(x[..nb].to_vec());
        }
        GroupHom::new(self.source.clone(), injection.source.clone(), IntMatrix::from_columns(nb, &cols))
    }
}

#[derive(Serialize, Deserialize)]
struct HomRepr {
    matrix: Vec<Vec<Big>>,
    source: Presentation,
    target: Presentation,
}

impl Serialize for GroupHom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomRepr { matrix: rows_of(&self.matrix), source: self.source.clone(), target: self.target.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroupHom {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = HomRepr::deserialize(d)?;
        let cols = r.source.generator_count();
        let matrix = matrix_from_rows(cols, r.matrix).map_err(serde::de::Error::custom)?;
        GroupHom::new(r.source, r.target, matrix).map_err(serde::de::Error::custom)
    }
}

/// Kernel of `f` as a normal-form group with its inclusion into `f`'s source.
pub fn kernel(f: &GroupHom) -> Result<(FgAbGroup, GroupHom)> {
    let ns = f.source.generator_count();
    // x with f(x) ∈ relations of the target: null space of [M | Relᵀ], top block.
    let a = f.matrix.hstack(&f.target.relations().transpose());
    let null = null_space(&a);
    let top: Vec<usize> = (0..ns).collect();
    let preimage = null.select_rows(&top);
    // Relations among those generators: combinations landing in source relations.
    let g = preimage.cols();
    let b = preimage.hstack(&f.source.relations().transpose());
    let rel_null = null_space(&b);
    let idx: Vec<usize> = (0..g).collect();
    let relations = rel_null.select_rows(&idx).transpose();
    let pres = Presentation::new(g, relations);
    let n = pres.normalize();
    let inclusion = GroupHom::new(n.group.presentation(), f.source.clone(), preimage.mul(&n.from_normal))?;
    Ok((n.group, inclusion))
}

/// Cokernel of a hom with its projection and a set-theoretic section on generators.
#[derive(Clone, Debug)]
pub struct Cokernel {
    pub group: FgAbGroup,
    pub projection: GroupHom,
    /// Column `i` is a preimage of the `i`-th canonical generator of `group`.
    pub section: IntMatrix,
}

pub fn cokernel(f: &GroupHom) -> Result<Cokernel> {
    let nt = f.target.generator_count();
    let relations = f.target.relations().vstack(&f.matrix.transpose());
    let pres = Presentation::new(nt, relations);
    let n = pres.normalize();
    let projection = GroupHom::new(f.target.clone(), n.group.presentation(), n.to_normal)?;
    Ok(Cokernel { group: n.group, projection, section: n.from_normal })
}

/// Map between cokernels induced by `g` on the targets:
/// `coker(a) → coker(b)` given `g: target(a) → target(b)` with `g(im a) ⊆ im b`.
pub fn induced_on_cokernels(from: &Cokernel, to: &Cokernel, g: &GroupHom) -> Result<GroupHom> {
    let m = to.projection.matrix().mul(g.matrix()).mul(&from.section);
    GroupHom::new(from.group.presentation(), to.group.presentation(), m)
}

/// Image of `f` as a normal-form group.
pub fn image(f: &GroupHom) -> Result<FgAbGroup> {
    // im f ≅ source / ker f
    let (_, inc) = kernel(f)?;
    Ok(cokernel(&inc)?.group)
}
