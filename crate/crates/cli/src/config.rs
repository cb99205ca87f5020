use serde::{Deserialize, Serialize};

/// Everything a run depends on. Two runs with equal configs write
/// byte-identical reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_group")]
    pub group: String,
    /// Only randomized operations read the seed.
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    #[serde(flatten)]
    pub op: Operation,
}

fn default_group() -> String {
    "z".into()
}

fn default_folner() -> String {
    "initial".into()
}

fn default_points() -> usize {
    40
}

fn default_core_k() -> i64 {
    5
}

/// Sets, windows and finite sets are given in the text forms of
/// [`crate::parse`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Operation {
    /// Exact densities on a roughly geometric grid of `points` indices.
    Density {
        set: String,
        #[serde(default = "default_folner")]
        folner: String,
        range: [usize; 2],
        #[serde(default = "default_points")]
        points: usize,
    },
    /// `[generator_bound, shift_bound]`.
    DetectFs { set: String, m: usize, bounds: [i64; 2] },
    DetectMultiples { xs: Vec<i64>, t: i64 },
    DetectSyndetic { set: String, k: String, window: String },
    DetectThick {
        set: String,
        k: String,
        window: String,
        #[serde(default)]
        avoid_k: bool,
    },
    DetectPws {
        set: String,
        k: String,
        k_prime: String,
        window: String,
    },
    DetectFp {
        set: String,
        m: usize,
        mode: String,
        candidates: String,
        #[serde(default)]
        escaping: bool,
    },
    ExtractFpi { set: String, m: usize },
    Obstruction { n: usize, window_level: usize },
    Defect { folner: String, n: usize, g: String },
    Reiter {
        folner: String,
        n: usize,
        #[serde(default)]
        two_sided: bool,
    },
    Measure {
        set: String,
        psi: String,
        n: usize,
        cylinder: String,
    },
    Probe {
        set: String,
        k: String,
        domain: String,
        samples: usize,
        sample_window: String,
    },
    Unique { set: String, window: String },
    ConstructStraus {
        eps: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        emit_window: Option<String>,
    },
    ConstructNonpws {
        eps: String,
        depth: usize,
        window: i64,
        #[serde(default = "default_core_k")]
        core_k: i64,
    },
    ConstructAlt { n_max: usize },
    ConstructDoubling { set: String, emit_window: String },
    ConstructFamily { depth: usize, window: String },
    ConstructGreedy { s: String, f: String },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Density { .. } => "density",
            Operation::DetectFs { .. } => "detect-fs",
            Operation::DetectMultiples { .. } => "detect-multiples",
            Operation::DetectSyndetic { .. } => "detect-syndetic",
            Operation::DetectThick { .. } => "detect-thick",
            Operation::DetectPws { .. } => "detect-pws",
            Operation::DetectFp { .. } => "detect-fp",
            Operation::ExtractFpi { .. } => "extract-fpi",
            Operation::Obstruction { .. } => "obstruction",
            Operation::Defect { .. } => "defect",
            Operation::Reiter { .. } => "reiter",
            Operation::Measure { .. } => "measure",
            Operation::Probe { .. } => "probe",
            Operation::Unique { .. } => "unique",
            Operation::ConstructStraus { .. } => "construct-straus",
            Operation::ConstructNonpws { .. } => "construct-nonpws",
            Operation::ConstructAlt { .. } => "construct-alt",
            Operation::ConstructDoubling { .. } => "construct-doubling",
            Operation::ConstructFamily { .. } => "construct-family",
            Operation::ConstructGreedy { .. } => "construct-greedy",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_with_defaults() {
        let text = r#"{"op": "density", "set": "straus:eps=0.1", "range": [1000, 1000000]}"#;
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.group, "z");
        assert_eq!(c.seed, 0);
        match &c.op {
            Operation::Density { folner, points, .. } => {
                assert_eq!(folner, "initial");
                assert_eq!(*points, 40);
            }
            other => panic!("{other:?}"),
        }
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_unknown_operations() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"op": "bogus"}"#).is_err());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"op": "detect-fs", "set": "z"}"#).is_err());
    }
}
