//! Turning a network graph state into GHZ states or Bell pairs for chosen
//! users.

pub mod accounting;
pub mod orbit;
pub mod pairwise;
pub mod plan;
pub mod settings;

pub use accounting::{
    circuit_success_probability, link_schedule, network_use_accounting, Gate, Protocol,
};
pub use orbit::{lc_orbit, lc_orbit_with_paths, OrbitMember, ORBIT_CAP};
pub use pairwise::{plan_pairwise, PAIRWISE_USER_CAP};
pub use plan::{
    find_bell_multicast_plan, find_bell_multicast_plan_for, find_ghz_plan, find_ghz_plan_for,
    find_plan, ByproductEntry, ExtractionPlan, ExtractionTask, NonparticipantMeasurement,
    PlanOptions, TaskKind,
};
pub use settings::{byproduct_correction, compile_round_settings, RoundDecoder, RoundSetting, RoundType};
