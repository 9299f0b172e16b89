//! Origin/destination aggregation by postal zone and by sector.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::ledger::{Cents, TransactionSet};
use crate::share::ser6;

/// Zone of a postal code: its leading digit. `None` when the code is missing
/// or does not start with a digit.
pub fn zone_of(postal_code: Option<&str>) -> Option<u8> {
    let c = postal_code?.bytes().next()?;
    c.is_ascii_digit().then(|| c - b'0')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Measure {
    Count,
    Volume,
    /// Volume divided by the number of distinct (buyer, seller) pairs in the cell.
    MeanPerPair,
    /// Transaction count divided by the number of distinct pairs in the cell.
    MeanCountPerPair,
}

/// Raw origin/destination tallies from which every measure is derived.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdAggregate {
    pub labels: Vec<String>,
    pub count: Vec<Vec<u64>>,
    pub volume_cents: Vec<Vec<Cents>>,
    pub pairs: Vec<Vec<u64>>,
    pub resolved: u64,
    pub total: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZoneMatrix {
    pub measure: Measure,
    pub labels: Vec<String>,
    /// Volumes are in cents.
    pub cells: Vec<Vec<f64>>,
    #[serde(serialize_with = "ser6")]
    pub coverage: f64,
}

impl OdAggregate {
    fn build<F: Fn(&str) -> Option<String>>(
        set: &TransactionSet,
        fixed: Option<Vec<String>>,
        key: F,
    ) -> Self {
        let mut resolved_txs = Vec::new();
        let mut labels: BTreeSet<String> = fixed.iter().flatten().cloned().collect();
        for t in &set.transactions {
            if let (Some(a), Some(b)) = (key(&t.buyer_id), key(&t.seller_id)) {
                labels.insert(a.clone());
                labels.insert(b.clone());
                resolved_txs.push((a, b, t));
            }
        }
        let labels: Vec<String> = labels.into_iter().collect();
        let k = labels.len();
        let pos = |l: &str| {
            labels
                .binary_search_by(|x| x.as_str().cmp(l))
                .expect("label present")
        };
        let mut count = vec![vec![0u64; k]; k];
        let mut volume = vec![vec![0u64; k]; k];
        let mut pair_sets: BTreeMap<(usize, usize), BTreeSet<(&str, &str)>> = BTreeMap::new();
        for (a, b, t) in &resolved_txs {
            let (i, j) = (pos(a), pos(b));
            count[i][j] += 1;
            volume[i][j] += t.amount;
            pair_sets
                .entry((i, j))
                .or_default()
                .insert((&t.buyer_id, &t.seller_id));
        }
        let mut pairs = vec![vec![0u64; k]; k];
        for ((i, j), s) in pair_sets {
            pairs[i][j] = s.len() as u64;
        }
        OdAggregate {
            labels,
            count,
            volume_cents: volume,
            pairs,
            resolved: resolved_txs.len() as u64,
            total: set.transactions.len() as u64,
        }
    }

    pub fn coverage(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.resolved as f64 / self.total as f64
        }
    }

    pub fn matrix(&self, measure: Measure) -> ZoneMatrix {
        let k = self.labels.len();
        let cells = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        let p = self.pairs[i][j] as f64;
                        match measure {
                            Measure::Count => self.count[i][j] as f64,
                            Measure::Volume => self.volume_cents[i][j] as f64,
                            Measure::MeanPerPair if p > 0.0 => self.volume_cents[i][j] as f64 / p,
                            Measure::MeanCountPerPair if p > 0.0 => self.count[i][j] as f64 / p,
                            _ => 0.0,
                        }
                    })
                    .collect()
            })
            .collect();
        ZoneMatrix {
            measure,
            labels: self.labels.clone(),
            cells,
            coverage: self.coverage(),
        }
    }
}

/// 10×10 buyer-zone × seller-zone tallies.
pub fn zone_aggregate(set: &TransactionSet) -> OdAggregate {
    let zones = (0..10).map(|z: u8| z.to_string()).collect();
    OdAggregate::build(set, Some(zones), |id| {
        zone_of(set.users.get(id).and_then(|u| u.postal_code.as_deref())).map(|z| z.to_string())
    })
}

/// Sector × sector tallies; labels sorted lexicographically.
pub fn sector_aggregate(set: &TransactionSet) -> OdAggregate {
    OdAggregate::build(set, None, |id| {
        set.users.get(id).and_then(|u| u.sector.clone())
    })
}

pub fn zone_matrix(set: &TransactionSet, measure: Measure) -> ZoneMatrix {
    zone_aggregate(set).matrix(measure)
}

pub fn sector_matrix(set: &TransactionSet, measure: Measure) -> ZoneMatrix {
    sector_aggregate(set).matrix(measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::{Transaction, UserRecord};
    use chrono::NaiveDate;

    fn set(
        users: &[(&str, Option<&str>, Option<&str>)],
        txs: &[(&str, &str, u64)],
    ) -> TransactionSet {
        let mut s = TransactionSet::default();
        for (id, pc, sector) in users {
            s.users.insert(
                id.to_string(),
                UserRecord {
                    user_id: id.to_string(),
                    postal_code: pc.map(String::from),
                    sector: sector.map(String::from),
                    ..Default::default()
                },
            );
        }
        s.transactions = txs
            .iter()
            .map(|&(b, sl, amount)| Transaction {
                tx_id: String::new(),
                date: NaiveDate::from_ymd_opt(2022, 1, 1).unwrap(),
                buyer_id: b.into(),
                seller_id: sl.into(),
                amount,
            })
            .collect();
        s
    }

    #[test]
    fn zones() {
        assert_eq!(zone_of(Some("09100")), Some(0));
        assert_eq!(zone_of(Some("35121")), Some(3));
        assert_eq!(zone_of(Some("")), None);
        assert_eq!(zone_of(None), None);
    }

    #[test]
    fn same_cell_sums() {
        let s = set(
            &[("a", Some("09100"), None), ("b", Some("35121"), None)],
            &[("a", "b", 100), ("a", "b", 300)],
        );
        assert_eq!(zone_matrix(&s, Measure::Count).cells[0][3], 2.0);
        assert_eq!(zone_matrix(&s, Measure::Volume).cells[0][3], 400.0);
        assert_eq!(zone_matrix(&s, Measure::MeanPerPair).cells[0][3], 400.0);
    }

    #[test]
    fn mean_per_pair_over_two_pairs() {
        let s = set(
            &[
                ("a", Some("01"), None),
                ("c", Some("02"), None),
                ("b", Some("35"), None),
            ],
            &[("a", "b", 100), ("c", "b", 300)],
        );
        assert_eq!(zone_matrix(&s, Measure::MeanPerPair).cells[0][3], 200.0);
        assert_eq!(zone_matrix(&s, Measure::MeanCountPerPair).cells[0][3], 1.0);
    }

    #[test]
    fn unresolved_reduce_coverage() {
        let s = set(
            &[("a", Some("01"), None), ("b", None, None)],
            &[("a", "b", 1), ("a", "a", 1)],
        );
        let m = zone_matrix(&s, Measure::Count);
        assert_eq!(m.coverage, 0.5);
        assert_eq!(m.cells.iter().flatten().sum::<f64>(), 1.0);
    }

    #[test]
    fn sectors() {
        let s = set(
            &[("g", None, Some("Groceries")), ("h", None, Some("Horeca"))],
            &[("g", "h", 600_000)],
        );
        let m = sector_matrix(&s, Measure::Volume);
        assert_eq!(m.labels, vec!["Groceries", "Horeca"]);
        assert_eq!(m.cells[0][1], 600_000.0);
        let none = set(&[("g", None, None), ("h", None, None)], &[("g", "h", 1)]);
        let m = sector_matrix(&none, Measure::Count);
        assert!(m.labels.is_empty() && m.coverage == 0.0);
    }

    #[test]
    fn group_by_oracle() {
        let users: Vec<(String, Option<String>)> = (0..12)
            .map(|i| {
                (
                    format!("u{i}"),
                    (i % 4 != 3).then(|| ["Food", "Build", "Care"][i % 3].to_string()),
                )
            })
            .collect();
        let uref: Vec<(&str, Option<&str>, Option<&str>)> = users
            .iter()
            .map(|(id, s)| (id.as_str(), None, s.as_deref()))
            .collect();
        let txs: Vec<(String, String, u64)> = (0..40)
            .map(|k| {
                (
                    format!("u{}", k % 12),
                    format!("u{}", (k * 5 + 1) % 12),
                    10 + k as u64,
                )
            })
            .collect();
        let tref: Vec<(&str, &str, u64)> = txs
            .iter()
            .map(|(a, b, v)| (a.as_str(), b.as_str(), *v))
            .collect();
        let s = set(&uref, &tref);
        let agg = sector_aggregate(&s);
        let mut oracle: BTreeMap<(String, String), (u64, u64)> = BTreeMap::new();
        let sector = |id: &str| {
            users
                .iter()
                .find(|(u, _)| u == id)
                .and_then(|(_, s)| s.clone())
        };
        for (a, b, v) in &txs {
            if let (Some(x), Some(y)) = (sector(a), sector(b)) {
                let e = oracle.entry((x, y)).or_default();
                e.0 += 1;
                e.1 += v;
            }
        }
        for ((x, y), (c, v)) in &oracle {
            let i = agg.labels.iter().position(|l| l == x).unwrap();
            let j = agg.labels.iter().position(|l| l == y).unwrap();
            assert_eq!((agg.count[i][j], agg.volume_cents[i][j]), (*c, *v));
        }
        assert_eq!(agg.resolved, oracle.values().map(|x| x.0).sum::<u64>());
        assert_eq!(agg.count.iter().flatten().sum::<u64>(), agg.resolved);
    }
}
