use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Resolves one nondeterministic choice among `n > 1` options.
pub trait Chooser {
    fn choose(&mut self, n: usize) -> usize;
}

/// Always the first option in declaration order.
#[derive(Debug, Clone, Copy, Default)]
pub struct FirstDeclared;

impl Chooser for FirstDeclared {
    fn choose(&mut self, _n: usize) -> usize {
        0
    }
}

/// Uniform choice from a seeded generator; equal seeds give equal runs.
#[derive(Debug, Clone)]
pub struct Seeded(ChaCha8Rng);

impl Seeded {
    pub fn new(seed: u64) -> Self {
        Seeded(ChaCha8Rng::seed_from_u64(seed))
    }
}

impl Chooser for Seeded {
    fn choose(&mut self, n: usize) -> usize {
        self.0.gen_range(0..n)
    }
}

/// Replays a prefix of recorded decisions and takes option 0 beyond it,
/// recording every arity met. [`Replay::advance`] steps to the next
/// resolution in depth-first order, so repeated runs visit every one.
#[derive(Debug, Clone, Default)]
pub struct Replay {
    picks: Vec<usize>,
    arities: Vec<usize>,
    pos: usize,
}

impl Replay {
    pub fn new() -> Self {
        Self::default()
    }

    /// Prepares the next resolution; false once all have been visited.
    pub fn advance(&mut self) -> bool {
        self.picks.truncate(self.pos);
        self.arities.truncate(self.pos);
        while let Some(last) = self.picks.pop() {
            let n = self.arities.pop().unwrap_or(1);
            if last + 1 < n {
                self.picks.push(last + 1);
                self.arities.push(n);
                self.pos = 0;
                return true;
            }
        }
        self.pos = 0;
        false
    }
}

impl Chooser for Replay {
    fn choose(&mut self, n: usize) -> usize {
        let pick = if self.pos < self.picks.len() {
            self.picks[self.pos]
        } else {
            self.picks.push(0);
            self.arities.push(n);
            0
        };
        self.pos += 1;
        pick
    }
}

/// How nondeterministic choices are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    FirstDeclared,
    Seeded(u64),
    /// Explore every resolution, failing beyond the given number of traces.
    Exhaustive(usize),
}

impl Policy {
    /// A chooser for single-run policies; `None` for [`Policy::Exhaustive`].
    pub fn chooser(self) -> Option<Box<dyn Chooser>> {
        match self {
            Policy::FirstDeclared => Some(Box::new(FirstDeclared)),
            Policy::Seeded(k) => Some(Box::new(Seeded::new(k))),
            Policy::Exhaustive(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_visits_every_resolution() {
        // choice tree: 2 options, then 3 options only under option 1
        let mut r = Replay::new();
        let mut seen = Vec::new();
        loop {
            let a = r.choose(2);
            let b = if a == 1 { Some(r.choose(3)) } else { None };
            seen.push((a, b));
            if !r.advance() {
                break;
            }
        }
        assert_eq!(
            seen,
            vec![(0, None), (1, Some(0)), (1, Some(1)), (1, Some(2))]
        );
    }

    #[test]
    fn seeded_is_reproducible() {
        let mut a = Seeded::new(7);
        let mut b = Seeded::new(7);
        let xs: Vec<_> = (0..32).map(|_| a.choose(5)).collect();
        let ys: Vec<_> = (0..32).map(|_| b.choose(5)).collect();
        assert_eq!(xs, ys);
        assert!(xs.iter().all(|&x| x < 5));
    }
}
