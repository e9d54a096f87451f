use serde::{Deserialize, Serialize};

/// Observational counters collected while a construction runs.
///
/// Per-stage vectors are indexed by stage (the number of inserted points once
/// the insertion completes); `nodes_visited` is indexed by insertion rank
/// minus one. Counters never influence the algorithms that fill them.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub nodes_created: Vec<u64>,
    pub nodes_visited: Vec<u64>,
    pub conflict_edges_created: Vec<u64>,
    pub walk_crossings: Vec<u64>,
    pub rebuild_conflict_tests: Vec<u64>,
    pub rebuild_stages: Vec<usize>,
    pub walk_fallbacks: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub phase_wall_ms: Vec<f64>,
}

fn bump(v: &mut Vec<u64>, idx: usize, by: u64) {
    if v.len() <= idx {
        v.resize(idx + 1, 0);
    }
    v[idx] += by;
}

impl RunStats {
    pub(crate) fn add_created(&mut self, stage: usize, count: u64) {
        bump(&mut self.nodes_created, stage, count);
    }

    pub(crate) fn record_visit(&mut self, rank: usize, count: u64) {
        bump(&mut self.nodes_visited, rank, count);
    }

    pub(crate) fn add_conflict_edges(&mut self, stage: usize, count: u64) {
        bump(&mut self.conflict_edges_created, stage, count);
    }

    pub fn total_created(&self) -> u64 {
        self.nodes_created.iter().sum()
    }

    pub fn total_visited(&self) -> u64 {
        self.nodes_visited.iter().sum()
    }

    pub fn total_conflict_edges(&self) -> u64 {
        self.conflict_edges_created.iter().sum()
    }

    pub fn total_walk_crossings(&self) -> u64 {
        self.walk_crossings.iter().sum()
    }

    /// Running sum of `nodes_created`, i.e. the node count after each stage
    /// (the root is not included).
    pub fn cumulative_created(&self) -> Vec<u64> {
        self.nodes_created
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_matches_total() {
        let mut s = RunStats::default();
        s.add_created(3, 4);
        s.add_created(5, 6);
        s.add_created(4, 3);
        let cum = s.cumulative_created();
        assert_eq!(cum, vec![0, 0, 0, 4, 7, 13]);
        assert_eq!(*cum.last().unwrap(), s.total_created());
        assert!(cum.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn timing_is_omitted_when_absent() {
        let s = RunStats::default();
        let json = serde_json::to_string(&s).unwrap();
        assert!(!json.contains("phase_wall_ms"));
        let back: RunStats = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }
}
