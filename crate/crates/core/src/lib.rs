//! Exact construction of the Lie algebras E6 (dim 78), D4 (dim 28) and G2
//! (dim 14) over fields of characteristic 2, starting from the generalized
//! quadrangle of type O₆⁻(2).
//!
//! The pipeline is:
//!
//! 1. [`quadrangle`]: V = GF(4)³ with Q(x) = Σ xᵢx̄ᵢ; 27 points, 45 lines.
//! 2. [`rootbases`]: the 72 root bases Δ and their sums s_Δ.
//! 3. [`weyl`]: W(E6) of order 51840 as permutations of the points.
//! 4. [`liealg`]: operators H_v and R_Δ on the 27-dimensional module and the
//!    subalgebras they span, including the centralizer of an order-3 element
//!    of a line stabilizer, which is 14-dimensional.
//!
//! Everything is computed over GF(2) with bit-packed matrices; [`extension`]
//! re-checks closure over GF(2^k).

pub mod error;
pub mod extension;
pub mod fields;
pub mod gf2;
pub mod liealg;
pub mod quadrangle;
pub mod rootbases;
pub mod suites;
pub mod table;
pub mod weyl;

pub use error::{Error, Result};

use quadrangle::QuadrangleCatalog;
use rootbases::PhiCatalog;

/// The point-line geometry together with its root bases.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub quad: QuadrangleCatalog,
    pub phi: PhiCatalog,
}

impl Geometry {
    pub fn build() -> Result<Self> {
        let quad = QuadrangleCatalog::build();
        let phi = PhiCatalog::enumerate(&quad)?;
        Ok(Geometry { quad, phi })
    }
}
