//! Small edge sets that try (and should fail) to destroy linkages or
//! H-subdivisions.
//!
//! Both properties are monotone under edge deletion, so only sets of size
//! exactly `budget` need to be tried: if `G - U` fails, so does `G - U'` for
//! every `U' ⊇ U`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gadgets::{CounterexampleInstance, HeinleinWall, Terminals};
use crate::graph::{Edge, Graph};
use crate::search::{combinations, find_first, Budget, SearchConfig, VerifyError};
use crate::verify::linkage::find_linkage_budgeted;
use crate::verify::subdivision::find_subdivision_with;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobustnessReport {
    pub holds: bool,
    /// Lexicographically least failing edge set.
    pub witness: Option<Vec<Edge>>,
    pub subsets_checked: u64,
    pub nodes_explored: u64,
}

/// Tries every edge set of size `min(k, m)` in lexicographic order and
/// returns the first `U` for which `test(G - U)` is false.
fn sweep<F>(
    g: &Graph,
    subsets: Vec<Vec<usize>>,
    parallel: bool,
    budget: &Budget,
    test: F,
) -> Result<RobustnessReport, VerifyError>
where
    F: Fn(&Graph) -> Result<bool, VerifyError> + Sync + Send,
{
    let checked = std::sync::atomic::AtomicU64::new(0);
    let witness = find_first(&subsets, parallel, |idx| {
        checked.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let u: Vec<Edge> = idx.iter().map(|&i| g.edges()[i]).collect();
        let rest = g.delete_edges(&u)?;
        Ok::<_, VerifyError>(if test(&rest)? { None } else { Some(u) })
    })?;
    Ok(RobustnessReport {
        holds: witness.is_none(),
        witness,
        subsets_checked: checked.into_inner(),
        nodes_explored: budget.used(),
    })
}

/// True iff every `G - U` with `|U| ≤ k` still has an (a-b, c-d) linkage.
pub fn linkage_robustness(
    g: &Graph,
    t: Terminals,
    k: usize,
    config: &SearchConfig,
) -> Result<RobustnessReport, VerifyError> {
    let budget = config.budget();
    let subsets = combinations(g.m(), k.min(g.m()));
    sweep(g, subsets, config.parallel, &budget, |rest| {
        Ok(find_linkage_budgeted(rest, t, &budget)?.is_some())
    })
}

pub fn hitting_robustness(
    w: &HeinleinWall,
    k: usize,
    config: &SearchConfig,
) -> Result<RobustnessReport, VerifyError> {
    linkage_robustness(&w.graph, w.terminals, k, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HittingMode {
    Exhaustive,
    Structural,
    Sampled { seed: u64, samples: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingReport {
    pub mode: HittingMode,
    pub budget: usize,
    pub holds: bool,
    /// An edge set of `Z` whose removal leaves no subdivision of the pattern
    /// (or, in structural mode, breaks a step of the argument).
    pub failing_set: Option<Vec<Edge>>,
    pub subsets_checked: u64,
    pub nodes_explored: u64,
    /// Structural mode only: every multiplied edge keeps a parallel path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parallel_paths_survive: Option<bool>,
    /// Structural mode only: the glued gadget keeps a linkage.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gadget_robust: Option<bool>,
}

/// Checks that no edge set of size at most `budget` meets every subdivision
/// of the pattern in `Z`.
pub fn check_no_hitting_set(
    inst: &CounterexampleInstance,
    budget: usize,
    mode: HittingMode,
    config: &SearchConfig,
) -> Result<HittingReport, VerifyError> {
    if budget > inst.r {
        return Err(VerifyError::InvalidInput(format!(
            "budget {budget} exceeds the instance parameter r = {}",
            inst.r
        )));
    }
    let z = &inst.z;
    let h = &inst.pattern;
    let k = budget.min(z.m());
    match mode {
        HittingMode::Exhaustive | HittingMode::Sampled { .. } => {
            let subsets = match mode {
                HittingMode::Sampled { seed, samples } => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..samples)
                        .map(|_| {
                            let mut s = sample(&mut rng, z.m(), k).into_vec();
                            s.sort_unstable();
                            s
                        })
                        .collect()
                }
                _ => combinations(z.m(), k),
            };
            let nodes = config.budget();
            // Parallelism goes to the subset sweep; each embedding search runs
            // alone. The natural placement `h -> h*` is only a search-order hint.
            let r = sweep(z, subsets, config.parallel, &nodes, |rest| {
                Ok(find_subdivision_with(h, rest, Some(&inst.star_map), false, &nodes)?.is_some())
            })?;
            Ok(HittingReport {
                mode,
                budget,
                holds: r.holds,
                failing_set: r.witness,
                subsets_checked: r.subsets_checked,
                nodes_explored: r.nodes_explored,
                parallel_paths_survive: None,
                gadget_robust: None,
            })
        }
        HittingMode::Structural => {
            // U meets at most `budget` of the 2r parallel paths of any edge.
            let paths_survive = inst.midpoints.values().all(|m| m.len() > budget);
            let (gadget, to_z) = inst.gadget_graph();
            let from_z = |v| {
                to_z.iter()
                    .position(|&x| x == v)
                    .expect("terminal lies in the gadget")
            };
            let t = inst.wall.terminals;
            let local = Terminals {
                a: from_z(t.a),
                b: from_z(t.b),
                c: from_z(t.c),
                d: from_z(t.d),
            };
            let r = linkage_robustness(&gadget, local, budget, config)?;
            let failing_set = r.witness.map(|u| {
                u.into_iter()
                    .map(|e| Edge::new(to_z[e.lo()], to_z[e.hi()]))
                    .collect()
            });
            Ok(HittingReport {
                mode,
                budget,
                holds: paths_survive && r.holds,
                failing_set,
                subsets_checked: r.subsets_checked,
                nodes_explored: r.nodes_explored,
                parallel_paths_survive: Some(paths_survive),
                gadget_robust: Some(r.holds),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::heinlein_wall;

    #[test]
    fn heinlein_one_is_fragile() {
        let w = heinlein_wall(1).unwrap();
        let r = hitting_robustness(&w, 1, &SearchConfig::default()).unwrap();
        assert!(!r.holds);
        assert_eq!(
            r.witness,
            Some(vec![Edge::new(w.terminals.c, w.terminals.d)])
        );
    }

    #[test]
    fn heinlein_two_survives_one_deletion() {
        let w = heinlein_wall(2).unwrap();
        let r = hitting_robustness(&w, 1, &SearchConfig::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.subsets_checked, 20);
    }

    #[test]
    fn budget_zero_is_plain_linkage() {
        let w = heinlein_wall(3).unwrap();
        let r = hitting_robustness(&w, 0, &SearchConfig::default()).unwrap();
        assert!(r.holds);
        assert_eq!(r.subsets_checked, 1);
    }
}
