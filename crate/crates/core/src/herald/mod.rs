//! Two-photon interference of photons emitted by two atoms and the
//! coincidence herald that projects the atoms onto an entangled state.
//!
//! Each atom emits one photon whose frequency (`ν₁` or `ν₂`) is entangled
//! with its qubit state. The photons meet on a 50/50 beam splitter with
//! inputs `a` (atom A) and `b` (atom B) and outputs `c`, `d`. Imperfect
//! spatial mode matching is described by the overlap `⟨f_A|f_B⟩`.

mod bell;
mod filter;
mod modes;
mod rate;

pub use bell::{atom_pair_space, atom_photon_state, bell_decomposition, reconstruct, singlet, AtomLabel, BellTerm, PhotonSector};
pub use filter::{herald_filter, sector_coincidence_probability, DetectorPair, HeraldConfig, HeraldOutcome, OutputPort};
pub use modes::{coincidence_vs_displacement, hom_coincidence_probability, PhotonModePair, DEFAULT_MODE_WAIST};
pub use rate::{entanglement_rate, EntanglementRate, IDEAL_HERALD_PROBABILITY};
