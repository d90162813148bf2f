//! Compilation of Diophantine systems into knapsack instances over free
//! class-2 nilpotent groups.
//!
//! Three encodings are available:
//!
//! * [`compile_quadratic`]: one carrier input per variable plus a four-input
//!   gadget per quadratic monomial; needs degree at most 2 (see
//!   [`degree_reduce`]).
//! * [`compile_terms`]: gadgets following the binary computation tree of each
//!   side of an equation; any degree.
//! * [`compile_product_forms`]: equations written as sums of products of
//!   signed linear forms, encoded without carriers by tying repeated
//!   occurrences of a variable directly to each other.
//!
//! Each returns a [`Compilation`], which besides the instance records what
//! every exponent slot means in terms of the system variables, so solutions
//! can be carried across in both directions.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{KpInstance, NormalForm, VarBinding};
use crate::poly::Polynomial;
use crate::scalar::Coefficient;

mod degree;
mod nonneg;
mod pool;
mod product_forms;
mod quadratic;
mod terms;

pub use degree::degree_reduce;
pub use nonneg::{nonneg_encode, SignMode};
pub use pool::{Allocation, AllocationMode, CommutatorPool, LetterAllocation, Role};
pub use product_forms::{compile_product_forms, LinearSlot, ProductForm, ProductFormEquation, Signed};
pub use quadratic::compile_quadratic;
pub use terms::{compile_terms, system_to_terms, Term, TermEquation};

/// Sparse group element under construction; the rank is fixed only when the
/// compilation finishes.
#[derive(Debug, Clone)]
pub(crate) struct Pending<C> {
    alpha: BTreeMap<usize, C>,
    beta: BTreeMap<(usize, usize), C>,
}

impl<C: Coefficient> Pending<C> {
    pub(crate) fn new() -> Self {
        Pending { alpha: BTreeMap::new(), beta: BTreeMap::new() }
    }

    pub(crate) fn letter(mut self, generator: usize, e: C) -> Self {
        self.add_letter(generator, e);
        self
    }

    pub(crate) fn comm(mut self, pair: (usize, usize), e: C) -> Self {
        self.add_comm(pair, e);
        self
    }

    pub(crate) fn add_letter(&mut self, generator: usize, e: C) {
        let v = self.alpha.remove(&generator).map_or(e.clone(), |old| old + e);
        if !v.is_zero() {
            self.alpha.insert(generator, v);
        }
    }

    pub(crate) fn add_comm(&mut self, (i, j): (usize, usize), e: C) {
        let (key, e) = if i < j { ((i, j), e) } else { ((j, i), -e) };
        let v = self.beta.remove(&key).map_or(e.clone(), |old| old + e);
        if !v.is_zero() {
            self.beta.insert(key, v);
        }
    }

    fn build(&self, rank: usize) -> Result<NormalForm<C>> {
        let mut alpha = vec![C::zero(); rank];
        for (&g, e) in &self.alpha {
            alpha[g - 1] = e.clone();
        }
        NormalForm::from_parts(rank, alpha, self.beta.iter().map(|(&k, e)| (k, e.clone())))
    }
}

/// Shared bookkeeping for the three compilers.
pub(crate) struct Builder<C> {
    pub(crate) pool: CommutatorPool,
    inputs: Vec<Pending<C>>,
    meanings: Vec<Polynomial<C>>,
    pub(crate) target: Pending<C>,
    bindings: Vec<VarBinding>,
}

impl<C: Coefficient> Builder<C> {
    pub(crate) fn new(mode: AllocationMode) -> Self {
        Builder {
            pool: CommutatorPool::new(mode),
            inputs: Vec::new(),
            meanings: Vec::new(),
            target: Pending::new(),
            bindings: Vec::new(),
        }
    }

    /// Appends an input whose exponent equals `meaning` on solutions; returns
    /// its 0-based slot.
    pub(crate) fn push(&mut self, element: Pending<C>, meaning: Polynomial<C>) -> usize {
        self.inputs.push(element);
        self.meanings.push(meaning);
        self.inputs.len() - 1
    }

    pub(crate) fn input_mut(&mut self, slot: usize) -> &mut Pending<C> {
        &mut self.inputs[slot]
    }

    pub(crate) fn bind(&mut self, name: &str, slot: usize, negated: bool) {
        self.bindings.push(VarBinding { name: name.to_string(), slot, negated });
    }

    pub(crate) fn finish(self) -> Result<Compilation<C>> {
        self.pool.check_invariants()?;
        let rank = self.pool.rank().max(1);
        let inputs = self.inputs.iter().map(|p| p.build(rank)).collect::<Result<Vec<_>>>()?;
        let instance = KpInstance { rank, inputs, target: self.target.build(rank)?, variable_map: self.bindings };
        instance.validate()?;
        Ok(Compilation { instance, pool: self.pool, slots: self.meanings })
    }
}

/// A compiled instance together with the allocation log and the meaning of
/// each exponent slot.
#[derive(Debug, Clone)]
pub struct Compilation<C> {
    pub instance: KpInstance<C>,
    pub pool: CommutatorPool,
    /// `slots[i]` is the value `epsilon_{i+1}` takes, as a polynomial in the
    /// system variables, on the witness induced by a system solution.
    pub slots: Vec<Polynomial<C>>,
}

impl<C: Coefficient> Compilation<C> {
    pub fn equation_commutators(&self) -> usize {
        self.pool.count(|r| matches!(r, Role::Equation { .. }))
    }

    pub fn tie_commutators(&self) -> usize {
        self.pool.count(|r| matches!(r, Role::Tie { .. }))
    }

    pub fn closure_commutators(&self) -> usize {
        self.pool.count(|r| matches!(r, Role::Closure))
    }

    pub fn term_commutators(&self) -> usize {
        self.pool.count(|r| matches!(r, Role::Term))
    }

    pub fn total_commutators(&self) -> usize {
        self.pool.log().len()
    }
}

impl Compilation<BigInt> {
    /// The witness induced by a solution of the source system.
    pub fn extend_witness(&self, solution: &HashMap<String, BigInt>) -> Result<Vec<BigInt>> {
        self.slots.iter().map(|p| p.eval(solution)).collect()
    }

    /// Reads the system variables off a witness through the variable map.
    pub fn restrict(&self, eps: &[BigInt]) -> Result<HashMap<String, BigInt>> {
        restrict(&self.instance, eps)
    }
}

/// Reads variable values off a witness of an instance carrying a variable map.
pub fn restrict<C: Coefficient>(instance: &KpInstance<C>, eps: &[BigInt]) -> Result<HashMap<String, BigInt>> {
    if eps.len() != instance.len() {
        return Err(Error::LengthMismatch { expected: instance.len(), got: eps.len() });
    }
    Ok(instance
        .variable_map
        .iter()
        .map(|b| {
            let v = eps[b.slot].clone();
            (b.name.clone(), if b.negated { -v } else { v })
        })
        .collect())
}
