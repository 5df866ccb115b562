//! Finitely generated abelian groups: presentations, Smith normal form,
//! homomorphisms with kernels and cokernels, and localization.

mod enumerate;
mod group;
mod hom;
mod localize;
mod matrix;
pub mod snf;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub use enumerate::{brute_force_orders, enumerate_elements, FiniteElements};
pub use group::{FgAbGroup, Normalized, Presentation};
pub use hom::{cokernel, image, induced_on_cokernels, kernel, Cokernel, GroupHom};
pub use localize::{localize, LocalizedGroup, PrimeSet};
pub use matrix::IntMatrix;
pub use snf::smith_normal_form;

/// JSON form of an integer: a number when it fits in 64 bits, otherwise a
/// decimal string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Big(pub BigInt);

impl Serialize for Big {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(x) => s.serialize_i64(x),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Big {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(x) => Ok(Big(BigInt::from(x))),
            Repr::Str(s) => s.parse().map(Big).map_err(serde::de::Error::custom),
        }
    }
}

pub(crate) fn rows_of(m: &IntMatrix) -> Vec<Vec<Big>> {
    (0..m.rows()).map(|i| m.row(i).iter().cloned().map(Big).collect()).collect()
}

pub(crate) fn matrix_from_rows(cols: usize, rows: Vec<Vec<Big>>) -> Result<IntMatrix, String> {
    if rows.iter().any(|r| r.len() != cols) {
        return Err(format!("every row must have {cols} entries"));
    }
    let n = rows.len();
    Ok(IntMatrix::from_vec(n, cols, rows.into_iter().flatten().map(|b| b.0).collect()))
}
