//! Finite groups as indexed element sets with a multiplication table.

mod io;
mod law;
mod spec;
mod table;

pub use io::{read_group, write_group, MAGIC};
pub use spec::{parse_spec, GroupSpec};
pub use table::{build_closure, construct_group, direct_product, GroupTable};

/// Largest group order accepted anywhere.
pub const MAX_ORDER: usize = 50_000;

/// Largest order for which a full n x n table is materialized.
pub const DENSE_LIMIT: usize = 8192;
