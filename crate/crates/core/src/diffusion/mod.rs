//! Delay laws and first-arrival cascade simulation.

mod cascade;
mod delay;

pub use cascade::{
    load_cascades, merge_by_source, parse_cascades, save_cascades, simulate_cascade,
    write_cascades, Cascade, Simulator,
};
pub use delay::{make_heterogeneous, DelayFamily, DelayMode, DelaySpec, NormalComponent};
