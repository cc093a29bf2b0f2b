//! Conference key agreement over extracted resources: the multipartite
//! protocol on one GHZ state versus pairwise keys combined by XOR.

pub mod batch;
pub mod rates;
pub mod report;
pub mod scenario;
pub mod simulate;
pub mod xor;

pub use batch::{
    choose_alice, estimate_errors, estimate_qber, estimate_qx, pairwise_error, ErrorEstimates,
    QberEstimate, RoleAssignment, RoundBatch, Tally,
};
pub use rates::{akr_2, akr_2_schedule, akr_n, binary_entropy, secure_rate, ConferenceRate};
pub use report::{
    analyze, analyze_counts, CopiesPerBit, KeyRateReport, LinkRate, NqkdRates, PairwiseRates,
    Resource, ResourceCounts, ResourceTallies, Statistic,
};
pub use scenario::PlanSet;
pub use simulate::{
    exact_tally, simulate_protocol, OutcomeSource, SimulatedRounds, SimulationOptions,
};
pub use xor::{xor_bits, xor_combine, Announcement, ConferenceKey};
