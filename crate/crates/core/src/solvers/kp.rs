//! Bounded knapsack search: through the derived system, and by direct
//! enumeration of group products.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::group::{evaluate_kp, KpInstance, NormalForm};
use crate::solvers::search::Search;
use crate::solvers::{Domain, SearchBox};
use crate::symbolic::kp_to_system;

/// Lexicographically least exponent vector in the box whose product equals
/// the target. The answer is recomputed in the group before it is returned.
pub fn bounded_solve_kp(instance: &KpInstance<BigInt>, bx: &SearchBox, jobs: usize) -> Result<Option<Vec<BigInt>>> {
    instance.validate()?;
    let system = kp_to_system(instance);
    let search = Search::new(&system, bx)?;
    let Some(eps) = search.first(jobs)? else { return Ok(None) };
    if !evaluate_kp(instance, &eps)?.1 {
        return Err(Error::Invariant("search returned a non-solution".into()));
    }
    Ok(Some(eps))
}

/// Same answer as [`bounded_solve_kp`] on a fully bounded box, computed by
/// walking every exponent vector in lexicographic order and multiplying in
/// the group.
pub fn enumerate_kp(instance: &KpInstance<BigInt>, bx: &SearchBox) -> Result<Option<Vec<BigInt>>> {
    instance.validate()?;
    if bx.len() != instance.len() {
        return Err(Error::DimensionMismatch { expected: instance.len(), got: bx.len() });
    }
    let mut bounds = Vec::with_capacity(bx.len());
    for (i, d) in bx.domains().iter().enumerate() {
        match d {
            Domain::Bounded(lo, hi) => bounds.push((lo.clone(), hi.clone())),
            Domain::Free => return Err(Error::Unenumerable(crate::symbolic::exponent_name(i))),
        }
    }
    let mut eps = Vec::with_capacity(bounds.len());
    walk(instance, &bounds, &NormalForm::identity(instance.rank), &mut eps)
}

fn walk(
    instance: &KpInstance<BigInt>,
    bounds: &[(BigInt, BigInt)],
    prefix: &NormalForm<BigInt>,
    eps: &mut Vec<BigInt>,
) -> Result<Option<Vec<BigInt>>> {
    let i = eps.len();
    if i == bounds.len() {
        return Ok((prefix == &instance.target).then(|| eps.clone()));
    }
    let (lo, hi) = &bounds[i];
    let mut e = lo.clone();
    while &e <= hi {
        let next = prefix.multiply(&instance.inputs[i].power(&e))?;
        eps.push(e.clone());
        let hit = walk(instance, bounds, &next, eps)?;
        eps.pop();
        if hit.is_some() {
            return Ok(hit);
        }
        e += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Nf = NormalForm<BigInt>;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn product_of_generators() {
        // x1^3 x2^2 = x1^3 x2^2
        let g1 = Nf::generator(2, 1).unwrap();
        let g2 = Nf::generator(2, 2).unwrap();
        let target = g1.power(&b(3)).multiply(&g2.power(&b(2))).unwrap();
        let inst = KpInstance::new(2, vec![g1, g2], target).unwrap();
        let bx = SearchBox::symmetric(2, 4);
        assert_eq!(enumerate_kp(&inst, &bx).unwrap(), Some(vec![b(3), b(2)]));
        assert_eq!(bounded_solve_kp(&inst, &bx, 1).unwrap(), Some(vec![b(3), b(2)]));
        assert_eq!(bounded_solve_kp(&inst, &bx, 4).unwrap(), Some(vec![b(3), b(2)]));
    }

    #[test]
    fn commutator_target_out_of_reach() {
        let g1 = Nf::generator(2, 1).unwrap();
        let g2 = Nf::generator(2, 2).unwrap();
        let target = Nf::commutator_power(2, 1, 2, b(1)).unwrap();
        let inst = KpInstance::new(2, vec![g1, g2], target).unwrap();
        let bx = SearchBox::symmetric(2, 3);
        assert_eq!(enumerate_kp(&inst, &bx).unwrap(), None);
        assert_eq!(bounded_solve_kp(&inst, &bx, 1).unwrap(), None);
    }

    #[test]
    fn free_box_is_rejected_by_enumeration() {
        let g1 = Nf::generator(1, 1).unwrap();
        let inst = KpInstance::new(1, vec![g1.clone()], g1).unwrap();
        let bx = SearchBox::new(vec![Domain::Free]).unwrap();
        assert_eq!(enumerate_kp(&inst, &bx).unwrap_err(), Error::Unenumerable("e1".into()));
        assert_eq!(bounded_solve_kp(&inst, &bx, 1).unwrap(), Some(vec![b(1)]));
    }
}
