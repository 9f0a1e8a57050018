//! Multivariate medians, type-D depth functions, depth regions and centers
//! of finitely supported weighted point clouds.

pub mod cli;
pub mod depth;
pub mod error;
pub mod exact;
pub mod jensen;
pub mod json;
pub mod mass;
pub mod measure;
pub mod order;
pub mod par;
pub mod polygon;
pub mod regions;

pub use depth::{DepthFamily, DepthValue};
pub use error::{Error, Result};
pub use mass::Mass;
pub use measure::{Halfspace, QuantilePair, WeightedSample};
pub use order::{ConeOrder, OrderInterval};
pub use regions::{BoundCheck, Center, GridSpec, RegionPolytope};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
