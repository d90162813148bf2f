//! Allocation of generators and basic commutators during compilation.
//!
//! Generators come in two kinds. *Letter* generators occur with nonzero
//! exponent in some input; every other generator only ever occurs inside
//! commutators. A basic commutator `[x_i, x_j]` with at least one non-letter
//! generator never picks up collection cross terms, so the equation it
//! induces in the derived system is linear. Those are the only pairs handed
//! out as closure or tie commutators in [`AllocationMode::FreshPairs`].

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AllocationMode {
    /// Every gadget gets its own letter pair; central commutators avoid
    /// letter-letter pairs.
    #[default]
    FreshPairs,
    /// Letters are shared across gadgets and every basic commutator is fair
    /// game, trading generators for soundness guarantees. Experimental.
    Packed,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Role {
    /// Carries the value of one equation; `equation` is its index.
    Equation { equation: usize },
    /// Forces the closing letters of a gadget to cancel the opening ones.
    Closure,
    /// Ties a reuse of a variable to its defining slot.
    Tie { variable: String },
    /// Carries an intermediate term value (term compiler only).
    Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    pub pair: (usize, usize),
    pub role: Role,
    /// Gadget the commutator was drawn for.
    pub gadget: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LetterAllocation {
    pub gadget: usize,
    pub letters: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorPool {
    mode: AllocationMode,
    rank: usize,
    used: BTreeSet<(usize, usize)>,
    letters: BTreeSet<usize>,
    log: Vec<Allocation>,
    letter_log: Vec<LetterAllocation>,
    gadgets: usize,
}

impl CommutatorPool {
    pub fn new(mode: AllocationMode) -> Self {
        CommutatorPool {
            mode,
            rank: 0,
            used: BTreeSet::new(),
            letters: BTreeSet::new(),
            log: Vec::new(),
            letter_log: Vec::new(),
            gadgets: 0,
        }
    }

    pub fn mode(&self) -> AllocationMode {
        self.mode
    }

    /// Number of generators allocated so far; the rank of the compiled group.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn log(&self) -> &[Allocation] {
        &self.log
    }

    pub fn letter_log(&self) -> &[LetterAllocation] {
        &self.letter_log
    }

    pub fn is_letter(&self, generator: usize) -> bool {
        self.letters.contains(&generator)
    }

    /// Opens a new gadget and returns its id.
    pub fn begin_gadget(&mut self) -> usize {
        self.gadgets += 1;
        self.gadgets
    }

    pub fn count(&self, pred: impl Fn(&Role) -> bool) -> usize {
        self.log.iter().filter(|a| pred(&a.role)).count()
    }

    fn new_generator(&mut self) -> usize {
        self.rank += 1;
        self.rank
    }

    fn record(&mut self, pair: (usize, usize), role: Role, gadget: usize) -> (usize, usize) {
        let fresh = self.used.insert(pair);
        debug_assert!(fresh, "commutator {pair:?} allocated twice");
        self.log.push(Allocation { pair, role, gadget });
        pair
    }

    /// Two letter generators `a < b` for a gadget; `[a, b]` is recorded with
    /// `role`.
    pub fn letter_pair(&mut self, gadget: usize, role: Role) -> (usize, usize) {
        let pair = match self.mode {
            AllocationMode::FreshPairs => {
                let a = self.new_generator();
                let b = self.new_generator();
                (a, b)
            }
            AllocationMode::Packed => self.smallest_free(|_, _| true),
        };
        self.letters.insert(pair.0);
        self.letters.insert(pair.1);
        self.letter_log.push(LetterAllocation { gadget, letters: pair });
        self.record(pair, role, gadget)
    }

    /// A basic commutator not used before, safe to use as a central element.
    pub fn central(&mut self, gadget: usize, role: Role) -> (usize, usize) {
        let pair = match self.mode {
            AllocationMode::FreshPairs => {
                let letters = self.letters.clone();
                self.smallest_free(|i, j| !(letters.contains(&i) && letters.contains(&j)))
            }
            AllocationMode::Packed => self.smallest_free(|_, _| true),
        };
        self.record(pair, role, gadget)
    }

    fn smallest_free(&mut self, allowed: impl Fn(usize, usize) -> bool) -> (usize, usize) {
        loop {
            for i in 1..=self.rank {
                for j in i + 1..=self.rank {
                    if !self.used.contains(&(i, j)) && allowed(i, j) {
                        return (i, j);
                    }
                }
            }
            self.new_generator();
        }
    }

    /// Structural safety checks on the allocation log:
    /// no commutator is handed out twice, and in fresh-pair mode distinct
    /// gadgets never share letters and no central commutator pairs two
    /// letters.
    pub fn check_invariants(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for a in &self.log {
            if !seen.insert(a.pair) {
                return Err(Error::Invariant(format!("commutator {:?} allocated twice", a.pair)));
            }
        }
        if self.mode == AllocationMode::FreshPairs {
            let mut owner = std::collections::BTreeMap::new();
            for la in &self.letter_log {
                for g in [la.letters.0, la.letters.1] {
                    if let Some(prev) = owner.insert(g, la.gadget) {
                        if prev != la.gadget {
                            return Err(Error::Invariant(format!(
                                "letter x{g} shared by gadgets {prev} and {}",
                                la.gadget
                            )));
                        }
                    }
                }
            }
            let letter_pairs: BTreeSet<(usize, usize)> = self.letter_log.iter().map(|l| l.letters).collect();
            for a in &self.log {
                let (i, j) = a.pair;
                if self.letters.contains(&i) && self.letters.contains(&j) && !letter_pairs.contains(&a.pair) {
                    return Err(Error::Invariant(format!("central commutator {:?} pairs two letters", a.pair)));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_mode_keeps_central_pairs_clean() {
        let mut pool = CommutatorPool::new(AllocationMode::FreshPairs);
        let g = pool.begin_gadget();
        let ab = pool.letter_pair(g, Role::Equation { equation: 0 });
        assert_eq!(ab, (1, 2));
        let c = pool.central(g, Role::Closure);
        assert_eq!(c, (1, 3), "x3 is not a letter");
        let h = pool.begin_gadget();
        let xy = pool.letter_pair(h, Role::Term);
        assert_eq!(xy, (4, 5));
        for _ in 0..10 {
            let (i, j) = pool.central(h, Role::Closure);
            assert!(!(pool.is_letter(i) && pool.is_letter(j)));
        }
        pool.check_invariants().unwrap();
    }

    #[test]
    fn packed_mode_reuses_generators() {
        let mut pool = CommutatorPool::new(AllocationMode::Packed);
        for n in 0..10 {
            let g = pool.begin_gadget();
            pool.letter_pair(g, Role::Equation { equation: n });
        }
        // ten pairs fit in five generators
        assert_eq!(pool.rank(), 5);
        pool.check_invariants().unwrap();
    }
}
