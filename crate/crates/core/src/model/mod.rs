//! Dispersion relations, kinetic densities, Newtonian potentials and the
//! energy functional together with the residuals of its stationarity
//! identities.

pub mod bounds;
pub mod energy;
pub mod kinetic;
pub mod params;
pub mod potential;
pub mod profile;

pub use bounds::{dispersion_bound_check, BoundRanges, BoundReport, BoundSample};
pub use energy::{
    energy_gap_bounds, gns_ratio, kinetic_energy, kinetic_moment, multiplier_residual, total_energy, virial_residual,
    EnergyParts, GnsTracker,
};
pub use kinetic::{
    chemical_work_density, density_from_potential, dispersion, inverse_dispersion, kinetic_defect, kinetic_density,
    kinetic_density_bar, momentum_from_potential, virial_density,
};
pub use params::{LightSpeed, ModelParams};
pub use potential::{coulomb_energy, newton_potential, NewtonPotential};
pub use profile::DensityProfile;
