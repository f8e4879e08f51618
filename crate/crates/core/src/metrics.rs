//! Overlap of per-environment success matrices and the two design metrics.
//!
//! For a fixed design, each environment yields a binary success matrix over
//! the controller grid. Their element-wise sum is the overlap matrix with
//! entries 0..=4. Learnability is the fraction of controllers succeeding in
//! all four environments; forgetting resistance is the ratio of those
//! generalists to controllers succeeding anywhere. Both are computed from
//! integer counts, never from stored floats.

use crate::error::{Error, Result};
use crate::sweep::{DesignRecord, SuccessMatrix};

/// Element-wise sum of four success matrices; entries in 0..=4.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    n: usize,
    values: Vec<u8>,
}

impl OverlapMatrix {
    /// Build from raw row-major values. Entries must be <= 4.
    pub fn from_values(n: usize, values: Vec<u8>) -> Result<Self> {
        if values.len() != n * n {
            return Err(Error::DimensionMismatch(values.len(), n * n));
        }
        if let Some(&bad) = values.iter().find(|&&v| v > 4) {
            return Err(Error::InvalidConfig(format!(
                "overlap entry {bad} exceeds the four environments"
            )));
        }
        Ok(OverlapMatrix { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.values[i * self.n + j]
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Histogram of entry values: counts[k] = number of elements equal to k.
    pub fn value_counts(&self) -> [usize; 5] {
        let mut counts = [0usize; 5];
        for &v in &self.values {
            counts[v as usize] += 1;
        }
        counts
    }
}

/// Sum the four success matrices element-wise.
pub fn overlap(matrices: &[SuccessMatrix; 4]) -> Result<OverlapMatrix> {
    let n = matrices[0].n();
    for m in &matrices[1..] {
        if m.n() != n {
            return Err(Error::DimensionMismatch(n, m.n()));
        }
    }
    let mut values = vec![0u8; n * n];
    for m in matrices {
        for i in 0..n {
            for j in 0..n {
                values[i * n + j] += m.get(i, j) as u8;
            }
        }
    }
    Ok(OverlapMatrix { n, values })
}

/// Number of overlap entries equal to `k`.
pub fn count_values(o: &OverlapMatrix, k: u8) -> usize {
    assert!(k <= 4, "overlap values lie in 0..=4");
    o.values.iter().filter(|&&v| v == k).count()
}

/// Learnability from a count histogram: generalists over the whole grid.
pub fn learnability_from_counts(counts: &[usize; 5]) -> f64 {
    let total: usize = counts.iter().sum();
    counts[4] as f64 / total as f64
}

/// Forgetting resistance from a count histogram: generalists over
/// specialists, or 0 when nothing succeeds anywhere.
pub fn cf_resistance_from_counts(counts: &[usize; 5]) -> f64 {
    let specialists = counts[1] + counts[2] + counts[3] + counts[4];
    if specialists == 0 {
        0.0
    } else {
        counts[4] as f64 / specialists as f64
    }
}

/// Fraction of the controller grid succeeding in all four environments.
pub fn learnability(o: &OverlapMatrix) -> f64 {
    learnability_from_counts(&o.value_counts())
}

/// Ratio of generalist controllers to controllers succeeding in at least
/// one environment; 0 for the null overlap matrix.
pub fn cf_resistance(o: &OverlapMatrix) -> f64 {
    cf_resistance_from_counts(&o.value_counts())
}

/// Learnability and forgetting resistance for one design.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricPair {
    pub m_l: f64,
    pub m_cf: f64,
}

impl MetricPair {
    pub fn from_counts(counts: &[usize; 5]) -> Self {
        MetricPair {
            m_l: learnability_from_counts(counts),
            m_cf: cf_resistance_from_counts(counts),
        }
    }
}

/// Which metric to rank designs by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankKey {
    Learnability,
    CfResistance,
}

/// Top `top` records, descending by `key`; ties break on the other metric
/// descending, then on design index ascending.
pub fn rank_designs(records: &[DesignRecord], key: RankKey, top: usize) -> Vec<DesignRecord> {
    let mut ranked: Vec<DesignRecord> = records.to_vec();
    ranked.sort_by(|a, b| {
        let (pa, sa, pb, sb) = match key {
            RankKey::Learnability => (a.m_l, a.m_cf, b.m_l, b.m_cf),
            RankKey::CfResistance => (a.m_cf, a.m_l, b.m_cf, b.m_l),
        };
        pb.total_cmp(&pa)
            .then(sb.total_cmp(&sa))
            .then(a.design_index.cmp(&b.design_index))
    });
    ranked.truncate(top);
    ranked
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn matrix_from_rows(env_id: u8, rows: &[&[u8]]) -> SuccessMatrix {
        let n = rows.len();
        let mut m = SuccessMatrix::new(env_id, n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, v != 0);
            }
        }
        m
    }

    fn overlap_2x2(values: [u8; 4]) -> OverlapMatrix {
        OverlapMatrix::from_values(2, values.to_vec()).unwrap()
    }

    #[test]
    fn overlap_hand_sum() {
        let matrices = [
            matrix_from_rows(1, &[&[1, 0], &[0, 1]]),
            matrix_from_rows(2, &[&[1, 1], &[0, 0]]),
            matrix_from_rows(3, &[&[1, 0], &[0, 0]]),
            matrix_from_rows(4, &[&[1, 0], &[0, 0]]),
        ];
        let o = overlap(&matrices).unwrap();
        assert_eq!(o.values(), &[4, 1, 0, 1]);
    }

    #[test]
    fn overlap_uniform_cases() {
        let zeros = [
            SuccessMatrix::new(1, 3),
            SuccessMatrix::new(2, 3),
            SuccessMatrix::new(3, 3),
            SuccessMatrix::new(4, 3),
        ];
        assert!(overlap(&zeros).unwrap().values().iter().all(|&v| v == 0));

        let ones: [SuccessMatrix; 4] = std::array::from_fn(|k| {
            let mut m = SuccessMatrix::new((k + 1) as u8, 3);
            for i in 0..3 {
                for j in 0..3 {
                    m.set(i, j, true);
                }
            }
            m
        });
        assert!(overlap(&ones).unwrap().values().iter().all(|&v| v == 4));
    }

    #[test]
    fn overlap_rejects_mismatched_dims() {
        let matrices = [
            SuccessMatrix::new(1, 2),
            SuccessMatrix::new(2, 3),
            SuccessMatrix::new(3, 2),
            SuccessMatrix::new(4, 2),
        ];
        assert!(matches!(
            overlap(&matrices),
            Err(Error::DimensionMismatch(2, 3))
        ));
    }

    #[test]
    fn count_examples() {
        let o = overlap_2x2([4, 1, 0, 1]);
        assert_eq!(count_values(&o, 4), 1);
        assert_eq!(count_values(&o, 1), 2);
        let total: usize = (0..=4).map(|k| count_values(&o, k)).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn learnability_examples() {
        assert_eq!(learnability(&overlap_2x2([4, 4, 4, 4])), 1.0);
        assert_eq!(learnability(&overlap_2x2([4, 1, 0, 1])), 0.25);
    }

    #[test]
    fn cf_resistance_examples() {
        assert_eq!(cf_resistance(&overlap_2x2([0, 0, 0, 0])), 0.0);
        assert_eq!(cf_resistance(&overlap_2x2([4, 1, 0, 1])), 1.0 / 3.0);
        assert_eq!(cf_resistance(&overlap_2x2([4, 0, 4, 4])), 1.0);
    }

    fn record(design_index: usize, m_l: f64, m_cf: f64) -> DesignRecord {
        DesignRecord {
            design_index,
            l1: [0.0, 0.0],
            l2: [0.0, 0.0],
            g: [0, 0, 0, 0, 0],
            m_l,
            m_cf,
        }
    }

    #[test]
    fn ranking_orders_and_breaks_ties() {
        let records = vec![
            record(7, 0.1, 0.9),
            record(3, 0.3, 0.2),
            record(5, 0.2, 0.5),
        ];
        let top = rank_designs(&records, RankKey::Learnability, 1);
        assert_eq!(top[0].design_index, 3);

        // Equal on both metrics: lower design index wins.
        let ties = vec![record(9, 0.4, 0.4), record(2, 0.4, 0.4)];
        let ranked = rank_designs(&ties, RankKey::Learnability, 2);
        assert_eq!(ranked[0].design_index, 2);
        assert_eq!(ranked[1].design_index, 9);

        // Primary tie, secondary decides.
        let secondary = vec![record(1, 0.4, 0.1), record(4, 0.4, 0.7)];
        let ranked = rank_designs(&secondary, RankKey::Learnability, 2);
        assert_eq!(ranked[0].design_index, 4);

        let repeat = rank_designs(&records, RankKey::CfResistance, 3);
        assert_eq!(repeat, rank_designs(&records, RankKey::CfResistance, 3));
    }

    proptest! {
        #[test]
        fn counts_partition_the_grid(n in 2usize..12, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let values: Vec<u8> = (0..n * n).map(|_| rng.gen_range(0..=4)).collect();
            let o = OverlapMatrix::from_values(n, values).unwrap();
            let counts = o.value_counts();
            prop_assert_eq!(counts.iter().sum::<usize>(), n * n);

            // Generalists present => resistance at least learnability.
            if counts[4] > 0 {
                let m = MetricPair::from_counts(&counts);
                prop_assert!(m.m_cf >= m.m_l);
            }
        }
    }
}
