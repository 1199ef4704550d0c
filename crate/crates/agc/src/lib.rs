//! Affine Grassmann codes over GF(q), q >= 3: code construction, synthesis
//! of orthogonal parity-check sets from rank-r matrix families, and q-ary
//! majority-logic decoding, together with the brute-force oracles that
//! validate every closed-form parameter at desk scale.

pub mod agcode;
pub mod checkfile;
pub mod decoder;
pub mod error;
pub mod falinalg;
pub mod gf;
pub mod oracle;
pub mod paritygen;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
