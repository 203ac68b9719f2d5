//! Toroidal chart, torus ansatz, strain and topological charge of the hopfion.

pub mod ansatz;
pub mod charge;
pub mod chart;
pub mod linking;

pub use ansatz::{
    ansatz_map, field_jet, profile_residual, sigma1, strain, AnsatzConfig, FieldJet, FnProfile,
    Profile, SinhProfile, SpherePoint, StrainSample,
};
pub use charge::{hopf_charge_whitehead, hopf_charge_whitehead_with, ChargeEstimate, ChargeQuadrature};
pub use chart::{cartesian_to_toroidal, toroidal_to_cartesian, ToroidalPoint};
pub use linking::{linking_number, preimage_curve, preimage_linking, write_curve_csv};
