//! Per-snapshot arithmetic cost (additions and multiplications) of the
//! implemented algorithms and the reference reduced-rank families they are
//! compared against. Counts are exact integer polynomial evaluations in the
//! array size `m` and rank `r`.

use std::fmt;

/// Algorithms with a published arithmetic-cost formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    FullRankCmv,
    FullRankCcm,
    MswfCmv,
    MswfCcm,
    Avf,
    JioCmv,
    JioCmvGs,
    JioCcm,
    JioCcmGs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::FullRankCmv,
        Algorithm::FullRankCcm,
        Algorithm::MswfCmv,
        Algorithm::MswfCcm,
        Algorithm::Avf,
        Algorithm::JioCmv,
        Algorithm::JioCmvGs,
        Algorithm::JioCcm,
        Algorithm::JioCcmGs,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::FullRankCmv => "Full-Rank-CMV",
            Algorithm::FullRankCcm => "Full-Rank-CCM",
            Algorithm::MswfCmv => "MSWF-CMV",
            Algorithm::MswfCcm => "MSWF-CCM",
            Algorithm::Avf => "AVF",
            Algorithm::JioCmv => "JIO-CMV",
            Algorithm::JioCmvGs => "JIO-CMV-GS",
            Algorithm::JioCcm => "JIO-CCM",
            Algorithm::JioCcmGs => "JIO-CCM-GS",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Addition/multiplication counts for one algorithm at a given (m, r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityReport {
    pub algorithm: Algorithm,
    pub additions: u64,
    pub multiplications: u64,
}

/// Evaluate the cost formula of `algorithm` for an `m`-sensor array at rank
/// `r`. The full-rank rows do not depend on `r`.
pub fn table1_counts(algorithm: Algorithm, m: usize, r: usize) -> ComplexityReport {
    assert!(m >= 1, "need at least one sensor");
    assert!(r >= 1, "need rank at least 1");
    let m = m as i64;
    let r = r as i64;
    let (additions, multiplications) = match algorithm {
        Algorithm::FullRankCmv => (3 * m - 1, 4 * m + 1),
        Algorithm::FullRankCcm => (3 * m, 4 * m + 3),
        Algorithm::MswfCmv => (
            r * m * m + r * m + m + 2 * r - 2,
            r * m * m + m * m + 2 * r * m + 5 * r + 2,
        ),
        Algorithm::MswfCcm => (
            r * m * m + r * m + m + 2 * r - 1,
            r * m * m + m * m + 2 * r * m + 5 * r + 4,
        ),
        Algorithm::Avf => (
            r * (4 * m * m + m - 2) + 5 * m * m - m - 1,
            r * (5 * m * m + 3 * m) + 8 * m * m + 2 * m,
        ),
        Algorithm::JioCmv => (4 * r * m + m + 2 * r - 3, 4 * r * m + m + 7 * r + 3),
        Algorithm::JioCmvGs => (7 * r * m - m - 1, 7 * r * m - 2 * m + 8 * r + 2),
        Algorithm::JioCcm => (4 * r * m + m + 2 * r - 2, 4 * r * m + m + 7 * r + 6),
        Algorithm::JioCcmGs => (7 * r * m - m, 7 * r * m - 2 * m + 8 * r + 5),
    };
    assert!(
        additions >= 0 && multiplications >= 0,
        "negative operation count for {algorithm} at m={m}, r={r}"
    );
    ComplexityReport {
        algorithm,
        additions: additions as u64,
        multiplications: multiplications as u64,
    }
}

/// All nine rows in canonical order.
pub fn all_counts(m: usize, r: usize) -> Vec<ComplexityReport> {
    Algorithm::ALL
        .iter()
        .map(|&alg| table1_counts(alg, m, r))
        .collect()
}
