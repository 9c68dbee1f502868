//! Two- and three-qutrit pure states, their party-versus-rest flattenings,
//! the catalog of canonical vectors, and the JSON state format.

mod catalog;
mod io;
mod state;

pub use catalog::{
    bipartite_canonical, bipartite_catalog, canonical_state, catalog, CanonicalId, CatalogEntry, Family, ProductParams,
};
pub use io::{read_state, read_state_dense, write_state};
pub use state::{flatten, unflatten, Flattening, PureState};
