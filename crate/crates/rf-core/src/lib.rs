//! Colorings of complete graphs where every small clique must see many
//! distinct colors, built by a two-phase randomized packing procedure,
//! together with a verifier for the clique condition and an exact
//! counting certificate for the matching lower bound on the number of
//! colors.
//!
//! The crate is organized bottom-up:
//!
//! * [`coloring`]: edge colorings of `K_n`, repetition counts on vertex
//!   subsets, violation search, monochromatic components.
//! * [`certificate`]: triangle normalization, the component partition with
//!   its hit ledger, and the exact rational lower bound.
//! * [`gadget`]: the seven-edge two-triangle gadget, its validity
//!   conditions against a phase universe, enumeration and seeded sampling.
//! * [`phase_a`]: random greedy gadget packing with matching-class
//!   invariants, alternating-cycle rejection and conflict classification.
//! * [`sfamily`]: indexed families of near-violating vertex subsets around
//!   an uncolored edge, with a structural case classifier.
//! * [`phase_b`]: list assignment for the leftover edges avoiding the
//!   conflict system derived from the subset families.
//! * [`stats`]: quasirandomness and anchor-degree reports.
//! * [`io`]: plain-text coloring and universe fixture formats.
//! * [`pipeline`]: end-to-end seeded runs combining both phases.
//!
//! Scans over vertex subsets run on rayon when the `parallel` feature
//! (default) is enabled; every parallel entry point has a sequential
//! fallback that is always compiled and used when the feature is off.

pub mod coloring;
pub mod certificate;
pub mod gadget;
pub mod io;
pub mod phase_a;
pub mod phase_b;
pub mod pipeline;
pub mod sfamily;
pub mod stats;

pub use coloring::{ColorId, Edge, EdgeColoring, Vertex};

/// Caps rayon's global thread pool from the `RF_THREADS` environment
/// variable. Call once at process start; later calls are no-ops. Does
/// nothing when the variable is unset, invalid, or the `parallel` feature
/// is disabled.
pub fn init_threads_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("RF_THREADS") {
            if let Ok(k) = v.trim().parse::<usize>() {
                if k >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(k)
                        .build_global();
                }
            }
        }
    }
}
