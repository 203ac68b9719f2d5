//! Effective and reciprocal effective metrics, curvature and the principal symbol.

pub mod curvature;
pub mod metric;
pub mod symbol;

pub use curvature::{
    christoffel_fd, default_step, ricci_scalar, ricci_scalar_fd, ricci_scalar_numeric, Christoffel,
};
pub use metric::{
    inv_metric_cartesian, inv_metric_matrix, inv_metric_toroidal, metric_cartesian, metric_matrix,
    proportionality, reciprocal_from_strain, toroidal_to_cartesian_tensor, FlatMetric,
    HopfionMetric, SpatialMetric,
};
pub use symbol::{
    lorentzian_check, principal_symbol, Covector4, LorentzianReport, PrincipalSymbol,
    SignatureStatus, StrainEigenvalues,
};
