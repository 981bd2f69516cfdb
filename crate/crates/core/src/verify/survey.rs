//! Linkage-containment statistics over all embeddings of the pattern in `Z`.
//!
//! For small patterns the large-treewidth hypothesis is not met, so
//! violations are expected; this reports data and asserts nothing.

use serde::{Deserialize, Serialize};

use crate::gadgets::CounterexampleInstance;
use crate::graph::{Edge, Graph};
use crate::search::{SearchConfig, VerifyError};
use crate::verify::linkage::find_linkage;
use crate::verify::subdivision::{fold_subdivisions, Embedding, Merge};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyReport {
    /// Embeddings up to permutations of interchangeable midpoints.
    pub canonical_embeddings: u64,
    /// Total count once every twin permutation is expanded back out.
    pub expanded_embeddings: u128,
    pub conforming: u64,
    pub violating: u64,
    pub expanded_conforming: u128,
    pub expanded_violating: u128,
    /// First violating canonical embedding in search order.
    pub first_violation: Option<Embedding>,
    pub nodes_explored: u64,
}

impl SurveyReport {
    /// Vacuously true when the pattern does not embed at all.
    pub fn all_conform(&self) -> bool {
        self.violating == 0
    }
}

impl Merge for SurveyReport {
    fn merge(&mut self, other: Self) {
        self.canonical_embeddings += other.canonical_embeddings;
        self.expanded_embeddings = self
            .expanded_embeddings
            .saturating_add(other.expanded_embeddings);
        self.conforming += other.conforming;
        self.violating += other.violating;
        self.expanded_conforming = self
            .expanded_conforming
            .saturating_add(other.expanded_conforming);
        self.expanded_violating = self
            .expanded_violating
            .saturating_add(other.expanded_violating);
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
    }
}

/// Does the part of the embedded image lying in the gadget contain a linkage?
fn image_has_linkage(inst: &CounterexampleInstance, emb: &Embedding) -> bool {
    let mut inside = vec![false; inst.z.n()];
    for &v in &inst.wall.to_z {
        inside[v] = true;
    }
    let edges: Vec<Edge> = emb
        .image_edges()
        .into_iter()
        .filter(|e| inside[e.lo()] && inside[e.hi()])
        .collect();
    let image = Graph::with_vertices(inst.z.n(), edges).expect("image edges lie in Z");
    find_linkage(&image, inst.wall.terminals).is_some()
}

pub fn all_subdivisions_contain_linkage(
    inst: &CounterexampleInstance,
    config: &SearchConfig,
) -> Result<SurveyReport, VerifyError> {
    let (mut report, nodes) = fold_subdivisions(
        &inst.pattern,
        &inst.z,
        config,
        |acc: &mut SurveyReport, emb, x| {
            acc.canonical_embeddings += 1;
            acc.expanded_embeddings = acc.expanded_embeddings.saturating_add(x);
            if image_has_linkage(inst, emb) {
                acc.conforming += 1;
                acc.expanded_conforming = acc.expanded_conforming.saturating_add(x);
            } else {
                acc.violating += 1;
                acc.expanded_violating = acc.expanded_violating.saturating_add(x);
                if acc.first_violation.is_none() {
                    acc.first_violation = Some(emb.clone());
                }
            }
        },
    )?;
    report.nodes_explored = nodes;
    Ok(report)
}
