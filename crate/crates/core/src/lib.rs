//! Exact arithmetic over GF(2)[z] and GF(2)[a, b] for continued fractions
//! built on the Thue–Morse word, together with identity verification,
//! Laurent-series analysis and algebraic-relation guessing.

pub mod analysis;
pub mod bipoly;
pub mod cert;
pub mod clmul;
pub mod contfrac;
pub mod guess;
pub mod identity;
pub mod linalg;
pub mod poly;
pub mod ring;
pub mod series;

pub use bipoly::{BiPoly, BiPolyError, BiSeries, SymMat2, TauLaurent};
pub use cert::{Certificate, Check, Report};
pub use contfrac::{CfError, ConvergentPair, PQStream, TMWord};
pub use poly::{PolyError, PolyZ};
pub use ring::{Mat2, Ring};
pub use series::{LaurentZ, Norm, SeriesError, DEFAULT_PRECISION};
