//! Forward-mode dual numbers lifted to matrices.
//!
//! A [`DualMatrix`] carries a value and one tangent matrix per seeded input
//! direction; products follow the Leibniz rule, so a chain of products
//! propagates all directional derivatives in a single pass.

use crate::qmat::{CMatrix, C64};

#[derive(Clone, Debug)]
pub struct DualMatrix<const N: usize> {
    pub value: CMatrix<N>,
    pub tangents: Vec<CMatrix<N>>,
}

impl<const N: usize> DualMatrix<N> {
    /// A matrix independent of all `directions` inputs.
    pub fn constant(value: CMatrix<N>, directions: usize) -> Self {
        Self {
            value,
            tangents: vec![CMatrix::zeros(); directions],
        }
    }

    /// A matrix depending on input `direction` only, with the given derivative.
    pub fn seeded(value: CMatrix<N>, direction: usize, derivative: CMatrix<N>, directions: usize) -> Self {
        let mut d = Self::constant(value, directions);
        d.tangents[direction] = derivative;
        d
    }

    pub fn directions(&self) -> usize {
        self.tangents.len()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.directions(), rhs.directions());
        let value = self.value * rhs.value;
        let tangents = self
            .tangents
            .iter()
            .zip(&rhs.tangents)
            .map(|(da, db)| (da * &rhs.value) + (&self.value * db))
            .collect();
        Self { value, tangents }
    }

    pub fn dagger(&self) -> Self {
        Self {
            value: self.value.dagger(),
            tangents: self.tangents.iter().map(CMatrix::dagger).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            value: self.value.scale(s),
            tangents: self.tangents.iter().map(|t| t.scale(s)).collect(),
        }
    }
}
