//! Exact, budgeted decision procedures with checkable witnesses.

pub mod hitting;
pub mod linkage;
pub mod menger;
pub mod subdivision;
pub mod survey;
pub mod width;

pub use hitting::{
    check_no_hitting_set, hitting_robustness, linkage_robustness, HittingMode, HittingReport,
    RobustnessReport,
};
pub use linkage::{
    exists_two_edge_disjoint_linkages, find_linkage, find_linkage_budgeted,
    two_edge_disjoint_linkages, Linkage, TwoLinkageReport,
};
pub use menger::{
    compute_b_m, max_fan, max_fan_size, min_vertex_separator, three_fan, Fan, Separator,
};
pub use subdivision::{
    count_subdivisions, find_subdivision, find_subdivision_hinted, fold_subdivisions, Embedding,
    EmbeddingCount, Merge,
};
pub use survey::{all_subdivisions_contain_linkage, SurveyReport};
pub use width::{
    pathwidth_exact, treewidth_exact, PathDecomposition, TreeDecomposition, WidthResult,
};
