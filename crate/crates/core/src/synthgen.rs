//! Seeded synthetic ledgers.
//!
//! Every user draws a latent activity `a` from a Pareto law and buyers are
//! picked with probability proportional to `a`. Under the default
//! [`SellerChoice::Capped`] rule a buyer `i` weighs each other user `j` by
//! `min(a_i, a_j)^beta`: more active peers are preferred, but only up to the
//! buyer's own scale. Under [`SellerChoice::Global`] the weight is simply
//! `a_j^beta`. With `beta = 0` both reduce to a uniform choice among the
//! other users. Amounts are log-normal in currency units
//! per buyer type. Everything is driven by a single ChaCha8 stream seeded
//! from the config, so identical configs give identical ledgers.

use chrono::{Datelike, Duration, NaiveDate};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::LogNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::{Cents, Transaction, TransactionSet, UserRecord, UserType, CENTS_PER_UNIT};

pub const RNG_ALGORITHM: &str = "ChaCha8";

pub const DEFAULT_SECTORS: [&str; 8] = [
    "Agrifood",
    "Construction",
    "Groceries",
    "Horeca",
    "Manufacturing",
    "Professional services",
    "Retail",
    "Transport",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SellerChoice {
    /// Attractiveness `a^beta` for every candidate, whatever the buyer.
    Global,
    /// Attractiveness `min(a_buyer, a)^beta`.
    Capped,
}

/// Log-normal parameters of an amount in currency units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmountModel {
    pub mu: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_users: u32,
    /// Shares of B, C, E, P.
    pub type_mix: [f64; 4],
    pub n_transactions: u64,
    pub imitation_beta: f64,
    pub seller_choice: SellerChoice,
    pub activity_tail: f64,
    /// Amount model per buyer type, in B, C, E, P order.
    pub amounts: [AmountModel; 4],
    pub years: Vec<i32>,
    /// Leading postal digits to draw from.
    pub zones: Vec<u8>,
    pub sectors: Vec<String>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let total = 14_649.0;
        SynthConfig {
            n_users: 2_000,
            type_mix: [
                5_461.0 / total,
                6_604.0 / total,
                2_581.0 / total,
                3.0 / total,
            ],
            n_transactions: 40_000,
            imitation_beta: 1.0,
            seller_choice: SellerChoice::Capped,
            activity_tail: 1.5,
            amounts: [
                AmountModel {
                    mu: 50f64.ln(),
                    sigma: 1.2,
                },
                AmountModel {
                    mu: -0.2,
                    sigma: 1.0,
                },
                AmountModel {
                    mu: 5.7,
                    sigma: 0.8,
                },
                AmountModel {
                    mu: 5.0,
                    sigma: 1.3,
                },
            ],
            years: vec![2022],
            zones: (0..10).collect(),
            sectors: DEFAULT_SECTORS.iter().map(|s| s.to_string()).collect(),
            seed: 42,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.n_users < 2 {
            return bad("n_users must be at least 2");
        }
        if self.n_transactions == 0 {
            return bad("n_transactions must be positive");
        }
        if self.type_mix.iter().any(|&x| x.is_nan() || x < 0.0)
            || (self.type_mix.iter().sum::<f64>() - 1.0).abs() > 1e-9
        {
            return bad("type_mix must be non-negative and sum to 1");
        }
        if !self.imitation_beta.is_finite() || self.imitation_beta < 0.0 {
            return bad("imitation_beta must be a non-negative number");
        }
        if !self.activity_tail.is_finite() || self.activity_tail <= 1.0 {
            return bad("activity_tail must exceed 1");
        }
        if self
            .amounts
            .iter()
            .any(|a| !a.mu.is_finite() || !a.sigma.is_finite() || a.sigma < 0.0)
        {
            return bad("amount model needs finite mu and non-negative sigma");
        }
        if self.years.is_empty()
            || self
                .years
                .iter()
                .any(|&y| NaiveDate::from_ymd_opt(y, 1, 1).is_none())
        {
            return bad("years must be a non-empty list of valid years");
        }
        if self.zones.is_empty() || self.zones.iter().any(|&z| z > 9) {
            return bad("zones must be a non-empty list of digits");
        }
        if self.sectors.is_empty() {
            return bad("sectors must not be empty");
        }
        Ok(())
    }
}

/// Seller sampling over users ranked by activity (ties by index).
struct SellerSampler {
    order: Vec<usize>,
    rank: Vec<usize>,
    /// `prefix[r]` is the summed attractiveness of ranks `0..r`.
    prefix: Vec<f64>,
    /// Attractiveness by rank.
    weight: Vec<f64>,
    choice: SellerChoice,
}

impl SellerSampler {
    fn new(activity: &[f64], beta: f64, choice: SellerChoice) -> Self {
        let mut order: Vec<usize> = (0..activity.len()).collect();
        order.sort_by(|&a, &b| activity[a].total_cmp(&activity[b]).then(a.cmp(&b)));
        let mut rank = vec![0; order.len()];
        let weight: Vec<f64> = order.iter().map(|&v| activity[v].powf(beta)).collect();
        let mut prefix = Vec::with_capacity(order.len() + 1);
        prefix.push(0.0);
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
            prefix.push(prefix[r] + weight[r]);
        }
        SellerSampler {
            order,
            rank,
            prefix,
            weight,
            choice,
        }
    }

    /// Rank in `lo..order.len()` whose attractiveness interval contains `x`,
    /// measured from `prefix[lo]`.
    fn locate(&self, lo: usize, x: f64) -> usize {
        let target = self.prefix[lo] + x;
        let r = self.prefix[lo + 1..].partition_point(|&p| p <= target) + lo;
        r.min(self.order.len() - 1)
    }

    fn sample<R: Rng>(&self, buyer: usize, rng: &mut R) -> usize {
        let n = self.order.len();
        let rb = self.rank[buyer];
        match self.choice {
            SellerChoice::Global => loop {
                let x = rng.random::<f64>() * self.prefix[n];
                let s = self.order[self.locate(0, x)];
                if s != buyer {
                    return s;
                }
            },
            SellerChoice::Capped => {
                let own = self.weight[rb];
                let below = self.prefix[rb];
                let x = rng.random::<f64>() * (below + own * (n - 1 - rb) as f64);
                if x < below {
                    self.order[self.locate(0, x).min(rb - 1)]
                } else {
                    self.order[(rb + 1 + ((x - below) / own) as usize).min(n - 1)]
                }
            }
        }
    }
}

fn user_id(i: usize) -> String {
    format!("u{i:06}")
}

pub fn generate_ledger(cfg: &SynthConfig) -> Result<TransactionSet> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.n_users as usize;
    let type_pick =
        WeightedIndex::new(cfg.type_mix).map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let mut set = TransactionSet::default();
    let mut types = Vec::with_capacity(n);
    let mut activity = Vec::with_capacity(n);
    for i in 0..n {
        let t = UserType::ALL[type_pick.sample(&mut rng)];
        let u: f64 = rng.random();
        activity.push((1.0 - u).powf(-1.0 / cfg.activity_tail));
        let zone = cfg.zones[rng.random_range(0..cfg.zones.len())];
        let postal = format!("{zone}{:04}", rng.random_range(0..10_000u32));
        let sector = cfg.sectors[rng.random_range(0..cfg.sectors.len())].clone();
        let lat = 36.0 + 0.8 * zone as f64 + rng.random::<f64>() * 0.8;
        let lon = 7.0 + rng.random::<f64>() * 11.0;
        types.push(t);
        set.users.insert(
            user_id(i),
            UserRecord {
                user_id: user_id(i),
                utype: Some(t),
                sector: Some(sector),
                postal_code: Some(postal),
                coord: Some((lat, lon)),
            },
        );
    }

    let buyers = WeightedIndex::new(&activity).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let sellers = SellerSampler::new(&activity, cfg.imitation_beta, cfg.seller_choice);
    let amount_laws: Vec<LogNormal<f64>> = cfg
        .amounts
        .iter()
        .map(|a| LogNormal::new(a.mu, a.sigma).map_err(|e| Error::InvalidConfig(e.to_string())))
        .collect::<Result<_>>()?;
    let year_spans: Vec<(NaiveDate, i64)> = cfg
        .years
        .iter()
        .map(|&y| {
            let start = NaiveDate::from_ymd_opt(y, 1, 1).expect("validated");
            let days = NaiveDate::from_ymd_opt(y + 1, 1, 1).map_or(365, |e| (e - start).num_days());
            (start, days)
        })
        .collect();

    set.transactions.reserve(cfg.n_transactions as usize);
    for k in 0..cfg.n_transactions {
        let b = buyers.sample(&mut rng);
        let s = sellers.sample(b, &mut rng);
        let units = amount_laws[types[b].index()].sample(&mut rng);
        let amount = ((units * CENTS_PER_UNIT as f64).round() as Cents).max(1);
        let (start, days) = year_spans[rng.random_range(0..year_spans.len())];
        let date = start + Duration::days(rng.random_range(0..days));
        debug_assert_eq!(date.year(), start.year());
        set.transactions.push(Transaction {
            tx_id: format!("t{k:08}"),
            date,
            buyer_id: user_id(b),
            seller_id: user_id(s),
            amount,
        });
    }
    set.period = match (cfg.years.iter().min(), cfg.years.iter().max()) {
        (Some(a), Some(b)) if a == b => a.to_string(),
        (Some(a), Some(b)) => format!("{a}-{b}"),
        _ => String::new(),
    };
    Ok(set)
}
