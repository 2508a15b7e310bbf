use crate::error::{Error, Result};

/// Largest state space the dense analytic solver accepts.
pub const STATE_CAP: usize = 20_000;

/// All `(L+1)^K` buffer occupancy vectors in canonical order: total
/// occupancy ascending, then lexicographically descending within a level.
/// For `K = 2, L = 2` this is `(0,0) (1,0) (0,1) (2,0) (1,1) (0,2) (2,1) (1,2) (2,2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSpace {
    relays: usize,
    capacity: u32,
    states: Vec<u32>,
    /// Mixed-radix code of an occupancy vector -> canonical index.
    index_of_code: Vec<usize>,
}

impl StateSpace {
    pub fn new(relays: usize, capacity: u32) -> Result<Self> {
        if relays == 0 || capacity == 0 {
            return Err(Error::Config("state space needs at least one relay and a positive capacity".into()));
        }
        let radix = capacity as usize + 1;
        let count = u32::try_from(relays)
            .ok()
            .and_then(|k| radix.checked_pow(k))
            .filter(|&n| n <= STATE_CAP)
            .ok_or(Error::StateSpace {
                states: radix.saturating_pow(relays.min(u32::MAX as usize) as u32),
                cap: STATE_CAP,
            })?;

        let mut vectors: Vec<Vec<u32>> = (0..count)
            .map(|mut code| {
                (0..relays)
                    .map(|_| {
                        let d = (code % radix) as u32;
                        code /= radix;
                        d
                    })
                    .collect()
            })
            .collect();
        vectors.sort_by(|a, b| {
            let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
            sa.cmp(&sb).then_with(|| b.cmp(a))
        });

        let mut index_of_code = vec![0; count];
        let mut states = Vec::with_capacity(count * relays);
        for (i, v) in vectors.iter().enumerate() {
            index_of_code[code(v, radix)] = i;
            states.extend_from_slice(v);
        }
        Ok(Self { relays, capacity, states, index_of_code })
    }

    pub fn len(&self) -> usize {
        self.index_of_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn relays(&self) -> usize {
        self.relays
    }

    pub fn capacity(&self) -> u32 {
        self.capacity
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i * self.relays..(i + 1) * self.relays]
    }

    pub fn index(&self, levels: &[u32]) -> Option<usize> {
        if levels.len() != self.relays || levels.iter().any(|&l| l > self.capacity) {
            return None;
        }
        Some(self.index_of_code[code(levels, self.capacity as usize + 1)])
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> {
        self.states.chunks_exact(self.relays)
    }
}

fn code(levels: &[u32], radix: usize) -> usize {
    levels.iter().rev().fold(0, |acc, &d| acc * radix + d as usize)
}

/// Link counts offered by one buffer state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinkCounts {
    /// Single (non-successive) links: two per partially filled relay, one otherwise.
    pub single: usize,
    /// Ordered successive pairs `(t, r)`, `t != r`, with `t` non-empty and `r` non-full.
    pub successive: usize,
}

impl LinkCounts {
    /// All candidate outgoing transitions.
    pub fn total(&self) -> usize {
        self.single + self.successive
    }
}

pub fn count_links(levels: &[u32], capacity: u32) -> LinkCounts {
    let single = levels.iter().map(|&l| if l > 0 && l < capacity { 2 } else { 1 }).sum();
    let senders = levels.iter().filter(|&&l| l > 0).count();
    let receivers = levels.iter().filter(|&&l| l < capacity).count();
    let both = levels.iter().filter(|&&l| l > 0 && l < capacity).count();
    LinkCounts { single, successive: senders * receivers - both }
}
