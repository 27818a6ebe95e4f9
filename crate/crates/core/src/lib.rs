//! Legendrian submanifold path geometry: jets and contact ideals, osculating
//! quadrics, the flat model, sp(n+1)-valued Cartan forms, torsion
//! normalization and the supporting representation theory.

pub mod cartan_forms;
pub mod coframe;
pub mod contact_jets;
pub mod error;
pub mod flat_model;
pub mod quadric_osculation;
pub mod random;
pub mod rep_decomp;
pub mod report_io;
pub mod suite;
pub mod torsion_normalizer;

pub use error::{CoreError, Result};

pub use legpath_symbolic::{Chart, ChartMap, DifferentialForm, Expression, RationalFunction, Q};
pub use torsion_normalizer::{PTensorQ, Torsion};

pub type Gauge = torsion_normalizer::GaugeParameters<Q>;
pub type SecondGauge = torsion_normalizer::SecondGaugeParameters<Q>;
pub type SymbolicTorsion = torsion_normalizer::TorsionTensor<RationalFunction>;
