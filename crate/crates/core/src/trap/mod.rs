//! Single-atom trap: loading with collisional blockade, fluorescence
//! detection, and qubit preparation/readout.

mod fluorescence;
mod occupancy;
mod readout;

pub use fluorescence::{
    classify_occupancy, count_histogram, fluorescence_trace, Classification, FluorescenceTrace,
    PoissonMixture,
};
pub use occupancy::{simulate_occupancy, EventKind, OccupancyEvent, OccupancyEvents, OccupancyProcess, OccupancyTrace};
pub use readout::{absent_probability, optical_pump, pushout_readout, pushout_shot, QubitPopulation, ReadoutOutcome, ReadoutParams};
