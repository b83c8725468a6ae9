//! The nodal cubic near its node: branch coordinates, localization of plane
//! forms into `(z, w)`-series, monomial valuations and lattice colengths.

mod bivariate;
mod form;
mod lattice;
mod model;
mod valuation;

pub use bivariate::{newton_vertices, BivariateSeries, WeightedInitial};
pub use form::{monomial_basis, Exps, Form};
pub use lattice::colength;
pub use model::{NodalCubicModel, WeightedOrder, DEFAULT_TRUNCATION_CAP};
pub use valuation::MonomialValuation;
