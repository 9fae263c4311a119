//! Builders for racks, trivial and cube □-sets, rack spaces and trunk nerves.

pub mod rack;
pub mod spaces;
pub mod trunk;

pub use rack::{Group, Rack, RackDefect};
pub use spaces::{
    cube_set, estimate_rack_space, induced_rack_map, rack_index, rack_space, rack_tuple, terminal_map,
    trivial_set,
};
pub use trunk::{cube_edges, trunk_nerve, trunk_of_rack, Nerve, Trunk};

use crate::error::{Error, Result};

/// Default bound on the total number of cells a builder may produce.
pub const DEFAULT_CELL_CAP: u128 = 5_000_000;

/// Builders attach text labels only up to this many cells.
pub const LABEL_LIMIT: u128 = 200_000;

pub(crate) fn check_cap(counts: &[u128], cap: u128) -> Result<()> {
    let total = counts.iter().fold(0u128, |a, &c| a.saturating_add(c));
    if total > cap {
        Err(Error::TooLarge { estimated: total, cap })
    } else {
        Ok(())
    }
}
