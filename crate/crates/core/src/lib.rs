//! Gadgets, wall geometry and exact verifiers for the edge-Erdős–Pósa
//! counterexample construction.

pub mod gadgets;
pub mod graph;
pub mod io;
pub mod planarity;
pub mod search;
pub mod verify;
pub mod wall;

pub use gadgets::{
    build_z, crossed_path_gadget, double_path_gadget, elementary_grid, elementary_wall,
    heinlein_wall, multiply_edge, wall_prime, CounterexampleInstance, GadgetError, HeinleinWall,
    Terminals, WallDesignation, DEFAULT_MIN_APART,
};
pub use graph::{Edge, Graph, GraphError, RoleLabel, VertexId};
pub use search::{Budget, SearchConfig, VerifyError, DEFAULT_NODE_BUDGET};
pub use wall::{Wall, WallError, WallKind};
