use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use csv::{ReaderBuilder, StringRecord};
use serde::Serialize;

use super::{Transaction, TransactionSet, UserRecord, UserType};
use crate::error::{Error, Result};

const TX_FILE: &str = "transactions.csv";
const USER_FILE: &str = "users.csv";

pub const TX_HEADER: [&str; 5] = ["tx_id", "date", "buyer_id", "seller_id", "amount_cents"];
pub const USER_HEADER: [&str; 6] = ["user_id", "type", "sector", "postal_code", "lat", "lon"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowError {
    pub file: &'static str,
    pub line: u64,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ParseReport {
    pub row_errors: Vec<RowError>,
    /// Users referenced by transactions but absent from the user file.
    pub synthesized_users: Vec<String>,
}

fn column_indices<const N: usize>(
    headers: &StringRecord,
    wanted: &[&'static str; N],
    file: &'static str,
) -> Result<[usize; N]> {
    let mut idx = [0usize; N];
    for (slot, name) in idx.iter_mut().zip(wanted) {
        *slot = headers
            .iter()
            .position(|h| h.trim() == *name)
            .ok_or(Error::MissingColumn { file, column: name })?;
    }
    Ok(idx)
}

fn field(rec: &StringRecord, i: usize) -> &str {
    rec.get(i).unwrap_or("").trim()
}

fn non_empty(s: &str) -> Option<String> {
    (!s.is_empty()).then(|| s.to_owned())
}

fn parse_tx_row(rec: &StringRecord, idx: &[usize; 5]) -> std::result::Result<Transaction, String> {
    let tx_id = field(rec, idx[0]).to_owned();
    let date_s = field(rec, idx[1]);
    let date = NaiveDate::parse_from_str(date_s, "%Y-%m-%d")
        .map_err(|_| format!("invalid date `{date_s}`"))?;
    let buyer_id = field(rec, idx[2]);
    let seller_id = field(rec, idx[3]);
    if buyer_id.is_empty() || seller_id.is_empty() {
        return Err("empty buyer_id or seller_id".into());
    }
    let amount_s = field(rec, idx[4]);
    if amount_s.is_empty() || !amount_s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(format!("non-numeric amount_cents `{amount_s}`"));
    }
    let amount = amount_s
        .parse::<u64>()
        .map_err(|_| format!("amount_cents out of range `{amount_s}`"))?;
    Ok(Transaction {
        tx_id,
        date,
        buyer_id: buyer_id.to_owned(),
        seller_id: seller_id.to_owned(),
        amount,
    })
}

fn parse_user_row(rec: &StringRecord, idx: &[usize; 6]) -> std::result::Result<UserRecord, String> {
    let user_id = field(rec, idx[0]);
    if user_id.is_empty() {
        return Err("empty user_id".into());
    }
    let utype: UserType = field(rec, idx[1]).parse()?;
    let postal_code = non_empty(field(rec, idx[3]));
    if let Some(pc) = &postal_code {
        if !pc.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("postal_code `{pc}` is not all digits"));
        }
    }
    let (lat, lon) = (field(rec, idx[4]), field(rec, idx[5]));
    let coord = match (lat.is_empty(), lon.is_empty()) {
        (true, true) => None,
        (false, false) => {
            let lat: f64 = lat.parse().map_err(|_| format!("invalid lat `{lat}`"))?;
            let lon: f64 = lon.parse().map_err(|_| format!("invalid lon `{lon}`"))?;
            Some((lat, lon))
        }
        _ => return Err("lat and lon must both be present or both empty".into()),
    };
    Ok(UserRecord {
        user_id: user_id.to_owned(),
        utype: Some(utype),
        sector: non_empty(field(rec, idx[2])),
        postal_code,
        coord,
    })
}

/// Reads a transaction file and a user file.
///
/// A missing required column is fatal. Row-level problems (bad amount, bad
/// date, unknown user type) are collected in the returned [`ParseReport`]
/// with their line numbers and the row is skipped. Ids that occur in
/// transactions without a user row get a synthesized record of unknown type.
pub fn parse_transactions<T: Read, U: Read>(
    tx_file: T,
    user_file: U,
) -> Result<(TransactionSet, ParseReport)> {
    let mut report = ParseReport::default();

    let mut users = BTreeMap::new();
    let mut rdr = ReaderBuilder::new().flexible(true).from_reader(user_file);
    let headers = rdr
        .headers()
        .map_err(|source| Error::Csv {
            file: USER_FILE,
            source,
        })?
        .clone();
    let idx = column_indices(&headers, &USER_HEADER, USER_FILE)?;
    for rec in rdr.records() {
        let rec = rec.map_err(|source| Error::Csv {
            file: USER_FILE,
            source,
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        match parse_user_row(&rec, &idx) {
            Ok(u) => {
                if users.contains_key(&u.user_id) {
                    report.row_errors.push(RowError {
                        file: USER_FILE,
                        line,
                        message: format!("duplicate user_id `{}`", u.user_id),
                    });
                } else {
                    users.insert(u.user_id.clone(), u);
                }
            }
            Err(message) => report.row_errors.push(RowError {
                file: USER_FILE,
                line,
                message,
            }),
        }
    }

    let mut transactions = Vec::new();
    let mut rdr = ReaderBuilder::new().flexible(true).from_reader(tx_file);
    let headers = rdr
        .headers()
        .map_err(|source| Error::Csv {
            file: TX_FILE,
            source,
        })?
        .clone();
    let idx = column_indices(&headers, &TX_HEADER, TX_FILE)?;
    for rec in rdr.records() {
        let rec = rec.map_err(|source| Error::Csv {
            file: TX_FILE,
            source,
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        match parse_tx_row(&rec, &idx) {
            Ok(t) => transactions.push(t),
            Err(message) => report.row_errors.push(RowError {
                file: TX_FILE,
                line,
                message,
            }),
        }
    }

    let mut synthesized = BTreeSet::new();
    for t in &transactions {
        for id in [&t.buyer_id, &t.seller_id] {
            if !users.contains_key(id) {
                users.insert(id.clone(), UserRecord::unknown(id));
                synthesized.insert(id.clone());
            }
        }
    }
    report.synthesized_users = synthesized.iter().cloned().collect();

    Ok((
        TransactionSet {
            transactions,
            users,
            period: "all".into(),
            synthesized,
        },
        report,
    ))
}

/// Opens and parses ledger files. Without a user file every participant is
/// synthesized with unknown type.
pub fn read_ledger_files(
    tx_path: &Path,
    user_path: Option<&Path>,
) -> Result<(TransactionSet, ParseReport)> {
    let open = |p: &Path| {
        File::open(p).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        })
    };
    let tx = BufReader::new(open(tx_path)?);
    match user_path {
        Some(u) => parse_transactions(tx, BufReader::new(open(u)?)),
        None => parse_transactions(tx, USER_HEADER.join(",").as_bytes()),
    }
}

/// Writes transactions in the ledger schema.
pub fn write_transactions<W: Write>(w: W, txs: &[Transaction]) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(TX_HEADER)?;
    for t in txs {
        wr.write_record([
            t.tx_id.as_str(),
            &t.date.format("%Y-%m-%d").to_string(),
            &t.buyer_id,
            &t.seller_id,
            &t.amount.to_string(),
        ])?;
    }
    wr.flush()?;
    Ok(())
}

/// Writes user records in the ledger schema. Records of unknown type are skipped.
pub fn write_users<'a, W: Write, I: IntoIterator<Item = &'a UserRecord>>(
    w: W,
    users: I,
) -> csv::Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(USER_HEADER)?;
    for u in users {
        let Some(t) = u.utype else { continue };
        let (lat, lon) = u
            .coord
            .map(|(a, b)| (format!("{a:.6}"), format!("{b:.6}")))
            .unwrap_or_default();
        wr.write_record([
            u.user_id.as_str(),
            t.as_str(),
            u.sector.as_deref().unwrap_or(""),
            u.postal_code.as_deref().unwrap_or(""),
            &lat,
            &lon,
        ])?;
    }
    wr.flush()?;
    Ok(())
}
