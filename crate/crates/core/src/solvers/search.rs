//! Depth-first search over a box with propagation.
//!
//! Variables are assigned in declared order. An equation becomes active at
//! the level of its last variable, where it is a univariate polynomial in
//! that variable; its integer roots are the only candidates, so variables
//! determined by earlier ones cost nothing to enumerate and may be left
//! unbounded.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::DiophantineSystem;
use crate::solvers::{Domain, SearchBox, Witness};

/// Largest bounded domain scanned point by point when a univariate
/// polynomial of degree 3 or more has to be solved.
const SCAN_LIMIT: u64 = 1 << 20;

/// Largest constant term factored by trial division.
const DIVISOR_LIMIT: u64 = 1_000_000_000_000;

struct Term {
    coef: BigInt,
    powers: Vec<(usize, u32)>,
}

pub(crate) struct Search<'a> {
    names: &'a [String],
    domains: &'a [Domain],
    levels: Vec<Vec<Vec<Term>>>,
    contradiction: bool,
}

enum Item {
    Prefix(Vec<BigInt>),
    Fail(Error),
}

impl<'a> Search<'a> {
    pub(crate) fn new(system: &'a DiophantineSystem<BigInt>, bx: &'a SearchBox) -> Result<Self> {
        if bx.len() != system.variables.len() {
            return Err(Error::DimensionMismatch { expected: system.variables.len(), got: bx.len() });
        }
        system.validate()?;
        let index = |v: &str| system.variables.iter().position(|n| n == v).expect("validated");
        let mut levels: Vec<Vec<Vec<Term>>> = (0..system.variables.len()).map(|_| Vec::new()).collect();
        let mut contradiction = false;
        for eq in &system.equations {
            let r = eq.residual();
            if r.is_zero() {
                continue;
            }
            let terms: Vec<Term> = r
                .terms()
                .map(|(m, c)| Term { coef: c.clone(), powers: m.powers().map(|(v, e)| (index(v), e)).collect() })
                .collect();
            match terms.iter().flat_map(|t| t.powers.iter().map(|p| p.0)).max() {
                Some(level) => levels[level].push(terms),
                None => contradiction = true,
            }
        }
        Ok(Search { names: &system.variables, domains: bx.domains(), levels, contradiction })
    }

    fn univariate(eq: &[Term], d: usize, assign: &[BigInt]) -> Vec<BigInt> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        for t in eq {
            let mut c = t.coef.clone();
            let mut deg = 0usize;
            for &(v, e) in &t.powers {
                if v == d {
                    deg = e as usize;
                } else {
                    c *= Pow::pow(&assign[v], e);
                }
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigInt::zero());
            }
            coeffs[deg] += c;
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        coeffs
    }

    /// Admissible values of variable `d` given the assignment of `0..d`,
    /// ascending.
    fn candidates(&self, d: usize, assign: &[BigInt]) -> Result<Vec<BigInt>> {
        let polys: Vec<Vec<BigInt>> = self.levels[d].iter().map(|eq| Self::univariate(eq, d, assign)).collect();
        if polys.iter().any(|p| p.len() == 1) {
            return Ok(Vec::new());
        }
        let domain = &self.domains[d];
        let raw = match polys.iter().find(|p| p.len() > 1) {
            Some(p) => integer_roots(p, domain).ok_or_else(|| Error::Unenumerable(self.names[d].clone()))?,
            None => match domain {
                Domain::Bounded(lo, hi) => num_iter_range(lo, hi),
                Domain::Free => return Err(Error::Unenumerable(self.names[d].clone())),
            },
        };
        Ok(raw.into_iter().filter(|v| domain.contains(v) && polys.iter().all(|p| eval(p, v).is_zero())).collect())
    }

    /// Visits solutions extending `assign` in lexicographic order until
    /// `visit` returns `false`. Returns whether the visit was stopped.
    fn walk(&self, assign: &mut Vec<BigInt>, visit: &mut dyn FnMut(&[BigInt]) -> bool) -> Result<bool> {
        let d = assign.len();
        if d == self.names.len() {
            return Ok(!visit(assign));
        }
        for c in self.candidates(d, assign)? {
            assign.push(c);
            let stop = self.walk(assign, visit)?;
            assign.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn first_from(&self, prefix: Vec<BigInt>) -> Result<Option<Vec<BigInt>>> {
        let mut found = None;
        let mut assign = prefix;
        self.walk(&mut assign, &mut |w| {
            found = Some(w.to_vec());
            false
        })?;
        Ok(found)
    }

    /// Ordered prefixes covering the search space, at least `target` of
    /// them unless the space is smaller.
    fn shards(&self, target: usize) -> (Vec<Item>, usize) {
        let mut items = vec![Item::Prefix(Vec::new())];
        let mut depth = 0;
        while depth < self.names.len() && items.iter().filter(|i| matches!(i, Item::Prefix(_))).count() < target {
            let mut next = Vec::with_capacity(items.len());
            for item in items {
                match item {
                    Item::Prefix(p) => match self.candidates(depth, &p) {
                        Ok(cs) => next.extend(cs.into_iter().map(|c| {
                            let mut q = p.clone();
                            q.push(c);
                            Item::Prefix(q)
                        })),
                        Err(e) => next.push(Item::Fail(e)),
                    },
                    fail => next.push(fail),
                }
            }
            items = next;
            depth += 1;
        }
        (items, depth)
    }

    pub(crate) fn first(&self, jobs: usize) -> Result<Option<Vec<BigInt>>> {
        if self.contradiction {
            return Ok(None);
        }
        if jobs <= 1 {
            return self.first_from(Vec::new());
        }
        let (items, _) = self.shards(jobs * 8);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
        let hit = pool.install(|| {
            items.par_iter().find_map_first(|item| match item {
                Item::Prefix(p) => self.first_from(p.clone()).transpose(),
                Item::Fail(e) => Some(Err(e.clone())),
            })
        });
        hit.transpose()
    }

    pub(crate) fn all(&self, limit: usize) -> Result<Vec<Vec<BigInt>>> {
        let mut out = Vec::new();
        if self.contradiction || limit == 0 {
            return Ok(out);
        }
        self.walk(&mut Vec::new(), &mut |w| {
            out.push(w.to_vec());
            out.len() < limit
        })?;
        Ok(out)
    }
}

use num_traits::Pow;

fn num_iter_range(lo: &BigInt, hi: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut v = lo.clone();
    while &v <= hi {
        out.push(v.clone());
        v += 1;
    }
    out
}

fn eval(coeffs: &[BigInt], x: &BigInt) -> BigInt {
    coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Integer roots, ascending, of `sum coeffs[i] x^i` (nonconstant, leading
/// coefficient nonzero), restricted to `domain` only where that is needed to
/// make the search finite. `None` when the roots cannot be enumerated.
pub fn integer_roots(coeffs: &[BigInt], domain: &Domain) -> Option<Vec<BigInt>> {
    let mut roots = match coeffs.len() {
        0 | 1 => return Some(Vec::new()),
        2 => {
            let (q, r) = (-&coeffs[0]).div_rem(&coeffs[1]);
            if r.is_zero() {
                vec![q]
            } else {
                vec![]
            }
        }
        3 => {
            let (c, b, a) = (&coeffs[0], &coeffs[1], &coeffs[2]);
            let disc = b * b - BigInt::from(4) * a * c;
            if disc.sign() == Sign::Minus {
                return Some(Vec::new());
            }
            let s = disc.sqrt();
            if &s * &s != disc {
                return Some(Vec::new());
            }
            let two_a = a * 2;
            [-b - &s, -b + &s]
                .into_iter()
                .filter_map(|n| {
                    let (q, r) = n.div_rem(&two_a);
                    r.is_zero().then_some(q)
                })
                .collect()
        }
        _ => {
            if let Domain::Bounded(lo, hi) = domain {
                if (hi - lo).to_u64().is_some_and(|w| w <= SCAN_LIMIT) {
                    let all = num_iter_range(lo, hi);
                    return Some(all.into_iter().filter(|x| eval(coeffs, x).is_zero()).collect());
                }
            }
            let shift = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
            let mut out = Vec::new();
            if shift > 0 {
                out.push(BigInt::zero());
            }
            let reduced = &coeffs[shift..];
            if reduced.len() > 1 {
                let c0 = reduced[0].abs().to_u64().filter(|c| *c <= DIVISOR_LIMIT)?;
                let mut d = 1u64;
                while d * d <= c0 {
                    if c0 % d == 0 {
                        for q in [d, c0 / d] {
                            for cand in [BigInt::from(q), -BigInt::from(q)] {
                                if eval(reduced, &cand).is_zero() {
                                    out.push(cand);
                                }
                            }
                        }
                    }
                    d += 1;
                }
            }
            out
        }
    };
    roots.sort();
    roots.dedup();
    Some(roots)
}

fn witness(system: &DiophantineSystem<BigInt>, values: Vec<BigInt>) -> Witness {
    Witness { names: system.variables.clone(), values }
}

/// Lexicographically least solution in the box, variables in declared order.
/// `jobs > 1` shards the search over that many threads with identical
/// results.
pub fn bounded_solve_system(
    system: &DiophantineSystem<BigInt>,
    bx: &SearchBox,
    jobs: usize,
) -> Result<Option<Witness>> {
    let search = Search::new(system, bx)?;
    Ok(search.first(jobs)?.map(|v| witness(system, v)))
}

/// Up to `limit` solutions in the box, in lexicographic order.
pub fn all_solutions(system: &DiophantineSystem<BigInt>, bx: &SearchBox, limit: usize) -> Result<Vec<Witness>> {
    let search = Search::new(system, bx)?;
    Ok(search.all(limit)?.into_iter().map(|v| witness(system, v)).collect())
}
