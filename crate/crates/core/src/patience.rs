//! Patience sorting in which every candidate pile is missed with probability t.

use rand::seq::SliceRandom;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::Stream;

/// Piles in creation order, each listed bottom card first.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PileState {
    pub piles: Vec<Vec<u32>>,
}

impl PileState {
    pub fn len(&self) -> usize {
        self.piles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.piles.is_empty()
    }

    pub fn top(&self, k: usize) -> u32 {
        *self.piles[k].last().expect("piles are never empty")
    }

    /// Piles listed top card first, sorted by top card.
    pub fn top_first(&self) -> Vec<Vec<u32>> {
        let mut v: Vec<Vec<u32>> = self.piles.iter().map(|p| p.iter().rev().copied().collect()).collect();
        v.sort();
        v
    }
}

pub fn check_deck(deck: &[u32]) -> Result<()> {
    let mut seen = vec![false; deck.len()];
    for &c in deck {
        let i = c as usize;
        if i == 0 || i > deck.len() || seen[i - 1] {
            return Err(Error::Domain("deck must be a permutation of 1..N".into()));
        }
        seen[i - 1] = true;
    }
    Ok(())
}

/// Place one card: candidates are the piles with top above `card`, by increasing
/// top; the number of misses before a placement is geometric and truncated at g.
pub fn place(state: &mut PileState, card: u32, t: f64, rng: &mut Stream) {
    let mut cand: Vec<usize> = (0..state.len()).filter(|&k| state.top(k) > card).collect();
    cand.sort_by_key(|&k| state.top(k));
    let g = cand.len();
    let misses = if g == 0 || t <= 0.0 {
        0
    } else if t >= 1.0 {
        g
    } else {
        // P(misses >= k) = t^k
        let m = (rng.uniform_open().ln() / t.ln()).floor();
        if m >= g as f64 {
            g
        } else {
            m as usize
        }
    };
    if misses < g {
        state.piles[cand[misses]].push(card);
    } else {
        state.piles.push(vec![card]);
    }
}

pub fn patience_sort(deck: &[u32], t: f64, seed: u64) -> Result<PileState> {
    check_deck(deck)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("t must lie in [0,1], got {t}")));
    }
    let mut rng = Stream::keyed(seed, &[3]);
    let mut state = PileState::default();
    for &c in deck {
        place(&mut state, c, t, &mut rng);
    }
    Ok(state)
}

pub fn random_deck(n: usize, rng: &mut Stream) -> Vec<u32> {
    let mut deck: Vec<u32> = (1..=n as u32).collect();
    deck.shuffle(rng);
    deck
}

/// Pile count for a uniformly shuffled deck of Poisson(theta2) cards.
pub fn poissonized_pile_count(theta2: f64, t: f64, seed: u64) -> Result<u32> {
    if !(theta2 >= 0.0) {
        return Err(Error::Domain("theta^2 must be non-negative".into()));
    }
    let mut rng = Stream::keyed(seed, &[4]);
    let n = if theta2 > 0.0 {
        Poisson::new(theta2)
            .map_err(|e| Error::Domain(e.to_string()))?
            .sample(&mut rng) as usize
    } else {
        0
    };
    let deck = random_deck(n, &mut rng);
    Ok(patience_sort(&deck, t, seed)?.len() as u32)
}

/// Length of the longest increasing subsequence.
pub fn lis_length(seq: &[u32]) -> usize {
    let mut tails: Vec<u32> = Vec::new();
    for &x in seq {
        match tails.binary_search(&x) {
            Ok(_) => {}
            Err(p) if p == tails.len() => tails.push(x),
            Err(p) => tails[p] = x,
        }
    }
    tails.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classic_example() {
        let s = patience_sort(&[5, 2, 1, 3, 4, 6], 0.0, 0).unwrap();
        assert_eq!(s.top_first(), vec![vec![1, 2, 5], vec![3], vec![4], vec![6]]);
    }

    #[test]
    fn always_missing_gives_singletons() {
        let s = patience_sort(&[3, 1, 4, 2, 5], 1.0, 0).unwrap();
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(patience_sort(&[1, 1, 2], 0.0, 0).is_err());
        assert!(patience_sort(&[0, 1], 0.0, 0).is_err());
    }

    #[test]
    fn zero_theta_gives_no_piles() {
        assert_eq!(poissonized_pile_count(0.0, 0.5, 1).unwrap(), 0);
    }

    #[test]
    fn lis_dp_small() {
        assert_eq!(lis_length(&[5, 2, 1, 3, 4, 6]), 4);
        assert_eq!(lis_length(&[]), 0);
    }
}
