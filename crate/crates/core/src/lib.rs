//! Khovanov homology over Z and F2 from planar-diagram codes, the Steenrod
//! squares Sq1 and Sq2 on it, and the resulting stable homotopy types of
//! width-three links.

pub mod complex;
pub mod cube;
pub mod error;
pub mod homology;
pub mod homotopy;
pub mod pd;
pub mod resolve;
pub mod steenrod;

pub use error::Error;
