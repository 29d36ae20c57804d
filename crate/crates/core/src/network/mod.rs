//! Parallel converters sharing one DC link.

pub mod closure;
pub mod config;
pub mod sim;

pub use closure::{inner_closed_loop, single_loop_maps, transfer_functions_of_network, transfer_functions_with_gammas, NetworkMaps};
pub use config::{ConverterSpec, Mode, NetworkConfig, Schedule, Segment};
pub use sim::{build_network, Init, OperatingPoint, SaturationEvent, SimEngine, SimOptions, SimResult};
