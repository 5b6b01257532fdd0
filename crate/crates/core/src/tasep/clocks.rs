use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};
use std::ops::RangeInclusive;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{keyed, unit_exp, Domain};

/// The Poisson processes `𝒟_i`, one per bond, addressed by absolute bond index.
///
/// Bond `i`'s epochs depend only on `(seed, replica, i)` and its rate, so any
/// set of processes that reads bond `i` sees the same epochs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BondClocks {
    seed: u64,
    replica: u64,
    rates: BTreeMap<i64, f64>,
}

impl BondClocks {
    /// Rate 1 everywhere.
    pub fn uniform(seed: u64) -> Self {
        BondClocks {
            seed,
            replica: 0,
            rates: BTreeMap::new(),
        }
    }

    /// Rate `r` at bond 0, rate 1 elsewhere.
    pub fn slow_bond(r: f64, seed: u64) -> Result<Self> {
        BondClocks::uniform(seed).with_rate(0, r)
    }

    pub fn with_rate(mut self, bond: i64, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::param("rate", format!("bond rates must be positive, got {rate}")));
        }
        if rate == 1.0 {
            self.rates.remove(&bond);
        } else {
            self.rates.insert(bond, rate);
        }
        Ok(self)
    }

    pub fn with_replica(mut self, replica: u64) -> Self {
        self.replica = replica;
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn replica(&self) -> u64 {
        self.replica
    }

    pub fn rate(&self, bond: i64) -> f64 {
        self.rates.get(&bond).copied().unwrap_or(1.0)
    }

    pub fn special_bonds(&self) -> &BTreeMap<i64, f64> {
        &self.rates
    }

    pub fn stream(&self, bond: i64) -> BondStream {
        BondStream {
            rng: keyed(self.seed, Domain::Clock, self.replica, bond as u64),
            rate: self.rate(bond),
            last: 0.0,
        }
    }
}

/// Successive epochs of one bond's clock.
pub struct BondStream {
    rng: ChaCha8Rng,
    rate: f64,
    last: f64,
}

impl BondStream {
    pub fn next_epoch(&mut self) -> f64 {
        self.last += unit_exp(&mut self.rng) / self.rate;
        self.last
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Pending {
    time: f64,
    bond: i64,
}

impl Eq for Pending {}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on time
        other
            .time
            .total_cmp(&self.time)
            .then_with(|| other.bond.cmp(&self.bond))
    }
}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A process updated at the epochs of bond clocks.
pub trait BondDriven {
    fn on_epoch(&mut self, bond: i64, time: f64);
}

/// Merges the clocks of a range of bonds into one time-ordered event stream.
pub struct ClockQueue {
    bonds: RangeInclusive<i64>,
    streams: Vec<BondStream>,
    heap: BinaryHeap<Pending>,
    time: f64,
    events: u64,
}

impl ClockQueue {
    pub fn new(clocks: &BondClocks, bonds: RangeInclusive<i64>) -> Self {
        let mut streams: Vec<BondStream> = bonds.clone().map(|b| clocks.stream(b)).collect();
        let heap = bonds
            .clone()
            .zip(streams.iter_mut())
            .map(|(bond, s)| Pending {
                time: s.next_epoch(),
                bond,
            })
            .collect();
        ClockQueue {
            bonds,
            streams,
            heap,
            time: 0.0,
            events: 0,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn events(&self) -> u64 {
        self.events
    }

    pub fn bonds(&self) -> RangeInclusive<i64> {
        self.bonds.clone()
    }

    /// Delivers every epoch in `(time, horizon]` in order, then sets the time to `horizon`.
    pub fn advance_to<F: FnMut(i64, f64)>(&mut self, horizon: f64, mut on_epoch: F) {
        while let Some(&next) = self.heap.peek() {
            if next.time > horizon {
                break;
            }
            self.heap.pop();
            on_epoch(next.bond, next.time);
            self.events += 1;
            let k = (next.bond - self.bonds.start()) as usize;
            self.heap.push(Pending {
                time: self.streams[k].next_epoch(),
                bond: next.bond,
            });
        }
        self.time = self.time.max(horizon);
    }

    /// Drives several processes with the same epochs.
    pub fn drive(&mut self, horizon: f64, processes: &mut [&mut dyn BondDriven]) {
        self.advance_to(horizon, |bond, time| {
            for p in processes.iter_mut() {
                p.on_epoch(bond, time);
            }
        });
    }
}
