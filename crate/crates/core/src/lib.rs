//! Graph-state quantum network simulator.
//!
//! Extracts GHZ and Bell states from a shared network graph state, simulates
//! conference and pairwise key agreement on noisy copies, and reports key
//! rates with Poisson Monte Carlo uncertainties. The `book/` directory holds
//! a guide whose code samples are compiled as doc tests of this crate.

pub mod clifford;
pub mod dense;
pub mod error;
pub mod fixtures;
pub mod graph;
pub mod io;
pub mod noise;
pub mod pauli;
pub mod qcka;
pub mod router;
pub mod state;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graph_states.md")]
    mod graph_states {}
    #[doc = include_str!("../../../book/src/extraction.md")]
    mod extraction {}
    #[doc = include_str!("../../../book/src/key_rates.md")]
    mod key_rates {}
    #[doc = include_str!("../../../book/src/noise.md")]
    mod noise {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
