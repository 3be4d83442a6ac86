//! Sphere templates, witnesses and spherical-dimension bounds.

mod bounds;
mod template;
mod witness;

pub use template::{
    barycentric_boundary, crosspolytope, SphereTemplate, TemplateKind, MAX_BARYCENTRIC_DIM, MAX_CROSSPOLYTOPE_DIM,
};
pub use witness::{
    barycentric_witness, crosspolytope_witness, join_witness, transport_witness, verify_witness, SphereWitness,
    WitnessFailure, WitnessReport,
};
pub use bounds::{sd_bounds, LowerBound, LowerSource, SdBounds, SdOptions, UpperBound, UpperSource};
