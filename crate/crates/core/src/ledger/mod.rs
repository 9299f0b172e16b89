//! Ledger rows, user attributes and dataset-level reports.

mod parse;
pub mod reports;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

pub use parse::{
    parse_transactions, read_ledger_files, write_transactions, write_users, ParseReport, RowError,
    TX_HEADER, USER_HEADER,
};

/// Amounts are integer cents; 100 cents = 1 currency unit.
pub type Cents = u64;

pub const CENTS_PER_UNIT: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum UserType {
    /// Business.
    B,
    /// Consumer.
    C,
    /// Employee.
    E,
    /// Provider.
    P,
}

impl UserType {
    pub const ALL: [UserType; 4] = [UserType::B, UserType::C, UserType::E, UserType::P];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            UserType::B => "B",
            UserType::C => "C",
            UserType::E => "E",
            UserType::P => "P",
        }
    }
}

impl fmt::Display for UserType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for UserType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "B" => Ok(UserType::B),
            "C" => Ok(UserType::C),
            "E" => Ok(UserType::E),
            "P" => Ok(UserType::P),
            other => Err(format!("unknown user type `{other}`")),
        }
    }
}

/// Index of a user-type stratum where slot 4 holds users of unknown type.
pub fn stratum(t: Option<UserType>) -> usize {
    t.map_or(4, UserType::index)
}

pub const STRATUM_LABELS: [&str; 5] = ["B", "C", "E", "P", "unknown"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub tx_id: String,
    pub date: NaiveDate,
    pub buyer_id: String,
    pub seller_id: String,
    pub amount: Cents,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct UserRecord {
    pub user_id: String,
    /// `None` only for records synthesized for ids missing from the user file.
    pub utype: Option<UserType>,
    pub sector: Option<String>,
    pub postal_code: Option<String>,
    pub coord: Option<(f64, f64)>,
}

impl UserRecord {
    pub fn unknown(user_id: &str) -> Self {
        UserRecord {
            user_id: user_id.to_owned(),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TransactionSet {
    pub transactions: Vec<Transaction>,
    pub users: BTreeMap<String, UserRecord>,
    pub period: String,
    /// Ids that appear in transactions but had no row in the user file.
    pub synthesized: BTreeSet<String>,
}

impl TransactionSet {
    pub fn user_type(&self, id: &str) -> Option<UserType> {
        self.users.get(id).and_then(|u| u.utype)
    }

    /// Years covered by at least one transaction, ascending.
    pub fn years(&self) -> Vec<i32> {
        let ys: BTreeSet<i32> = self.transactions.iter().map(|t| t.date.year()).collect();
        ys.into_iter().collect()
    }

    /// Ids of every user appearing as buyer or seller of some transaction.
    pub fn active_users(&self) -> BTreeSet<&str> {
        self.transactions
            .iter()
            .flat_map(|t| [t.buyer_id.as_str(), t.seller_id.as_str()])
            .collect()
    }

    /// Keeps transactions satisfying `keep` and restricts the user map to the
    /// users still appearing.
    pub fn filter<F: Fn(&Transaction) -> bool>(&self, period: String, keep: F) -> TransactionSet {
        let transactions: Vec<Transaction> = self
            .transactions
            .iter()
            .filter(|t| keep(t))
            .cloned()
            .collect();
        let mut out = TransactionSet {
            transactions,
            users: BTreeMap::new(),
            period,
            synthesized: BTreeSet::new(),
        };
        let active: BTreeSet<String> = out.active_users().into_iter().map(str::to_owned).collect();
        for id in active {
            if let Some(u) = self.users.get(&id) {
                out.users.insert(id.clone(), u.clone());
            }
            if self.synthesized.contains(&id) {
                out.synthesized.insert(id);
            }
        }
        out
    }
}

/// Transactions dated in calendar `year`, with the user map restricted to
/// the users appearing in them.
pub fn slice_by_period(set: &TransactionSet, year: i32) -> TransactionSet {
    set.filter(year.to_string(), |t| t.date.year() == year)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn tx(id: &str, date: &str, b: &str, s: &str, amount: u64) -> Transaction {
        Transaction {
            tx_id: id.into(),
            date: NaiveDate::parse_from_str(date, "%Y-%m-%d").unwrap(),
            buyer_id: b.into(),
            seller_id: s.into(),
            amount,
        }
    }

    fn set_of(txs: Vec<Transaction>) -> TransactionSet {
        let mut set = TransactionSet {
            transactions: txs,
            ..Default::default()
        };
        let ids: Vec<String> = set.active_users().into_iter().map(String::from).collect();
        for id in ids {
            set.users.insert(
                id.clone(),
                UserRecord {
                    user_id: id,
                    utype: Some(UserType::B),
                    ..Default::default()
                },
            );
        }
        set
    }

    #[test]
    fn slice_keeps_only_the_year() {
        let set = set_of(vec![
            tx("1", "2022-01-01", "a", "b", 1),
            tx("2", "2023-06-01", "c", "d", 1),
        ]);
        let s = slice_by_period(&set, 2022);
        assert_eq!(s.transactions.len(), 1);
        assert_eq!(s.users.len(), 2);
        assert!(s.users.contains_key("a") && !s.users.contains_key("c"));
        assert!(slice_by_period(&set, 2030).transactions.is_empty());
    }

    #[test]
    fn slices_partition_three_years() {
        let mut txs = Vec::new();
        for (k, y) in [2022, 2023, 2024, 2022, 2024, 2023, 2023]
            .iter()
            .enumerate()
        {
            txs.push(tx(
                &k.to_string(),
                &format!("{y}-0{}-1{}", 1 + k % 9, k % 9),
                "a",
                "b",
                k as u64,
            ));
        }
        let set = set_of(txs);
        let mut seen = Vec::new();
        for y in set.years() {
            for t in slice_by_period(&set, y).transactions {
                seen.push(t.tx_id);
            }
        }
        seen.sort();
        let mut all: Vec<String> = set.transactions.iter().map(|t| t.tx_id.clone()).collect();
        all.sort();
        assert_eq!(seen, all);
    }
}
