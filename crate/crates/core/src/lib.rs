//! Miller–Abrahams random resistor networks on marked Poisson point
//! processes: threshold graphs, percolation thresholds, left-right crossings,
//! effective conductivity and Mott's random walk.
//!
//! Conductances are `c_xy = exp(−|x−y| − β(|E_x|+|E_y|+|E_x−E_y|))`. The
//! threshold graph `G[ζ,β]` keeps the pairs with `c_xy ≥ e^{−ζ}`.

pub mod cells;
pub mod conductivity;
pub mod crossings;
pub mod error;
pub mod fkg;
pub mod geometry;
pub mod graph;
pub mod law;
pub mod percolation;
pub mod point_process;
pub mod rng;
pub mod stats;
pub mod walk;

pub use conductivity::{
    rescaled_conductivity, solve_potential, thinned_lower_bound, Circuit, ConductivityOptions, ConductivityReport,
    Cutoff, MottPlan, MottScan, PotentialSolution,
};
pub use crossings::{brute_force_crossings, crossing_lower_bound, max_vertex_disjoint_crossings};
pub use error::{Error, Result};
pub use fkg::{fkg_events, fkg_probabilities, FkgSummary};
pub use geometry::{Region, StripeGeometry, Window};
pub use graph::{
    build_boolean_graph, build_ma_network, build_threshold_graph, conductance, energy_term, Edge, GraphMeta,
    WeightedGraph,
};
pub use law::{EnergyLaw, PowerClass, SignMode, TableLaw};
pub use percolation::{
    clusters, has_lr_crossing, ClusterLabels, ProbeRecord, ThresholdEstimate, ThresholdModel, ThresholdSearch,
};
pub use point_process::{mott_length, sample_marked_ppp, sample_perturbed_lattice, MarkedConfiguration};
pub use rng::RngSeed;
pub use walk::{estimate_diffusion, simulate_walk, DiffusionEstimate, Trajectory, WalkNetwork};
