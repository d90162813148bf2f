//! Algebraic and round-trip properties over random inputs.

mod common;

use common::*;
use nilkp::compiler::{
    compile_quadratic, compile_terms, degree_reduce, nonneg_encode, system_to_terms, AllocationMode, Compilation,
    SignMode,
};
use nilkp::format::{format_witness, parse_instance, parse_system, parse_witness, print_instance, print_system};
use nilkp::group::{KpInstance, NormalForm, Word};
use nilkp::matrix::{matrix_to_normal_form, rho_normal_form, rho_word};
use nilkp::poly::{DiophantineSystem, Equation, Polynomial};
use nilkp::solvers::{
    all_solutions, bounded_solve_kp, bounded_solve_system, enumerate_kp, heisenberg_search, HeisenbergOutcome,
    SearchBox,
};
use nilkp::{evaluate_kp, kp_to_system, reduce_word, BigInt, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

type Nf = NormalForm<BigInt>;

fn normal_form(rank: usize) -> impl Strategy<Value = Nf> {
    let pairs = rank * (rank - 1) / 2;
    (prop::collection::vec(-20i64..=20, rank), prop::collection::vec(-50i64..=50, pairs)).prop_map(move |(a, b)| {
        let mut beta = Vec::new();
        let mut it = b.into_iter();
        for i in 1..=rank {
            for j in i + 1..=rank {
                beta.push(((i, j), int(it.next().unwrap())));
            }
        }
        Nf::from_parts(rank, ints(&a), beta).unwrap()
    })
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word<BigInt>> {
    prop::collection::vec((1..=rank, -3i64..=3), 0..=max_len)
        .prop_map(move |ls| Word::new(rank, ls.into_iter().map(|(g, e)| (g, int(e)))).unwrap())
}

/// Seed-driven generators from the shared helpers, so shrinking works on
/// the seed.
fn seeded<T: std::fmt::Debug>(f: impl Fn(&mut rand_chacha::ChaCha8Rng) -> T) -> impl Strategy<Value = T> {
    any::<u64>().prop_map(move |s| f(&mut rand_chacha::ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(rank in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b, c) = (random_normal_form(&mut r, rank, 9), random_normal_form(&mut r, rank, 9), random_normal_form(&mut r, rank, 9));
        prop_assert_eq!(a.multiply(&b).unwrap().multiply(&c).unwrap(), a.multiply(&b.multiply(&c).unwrap()).unwrap());
    }

    #[test]
    fn inverse_and_identity(g in normal_form(4)) {
        let e = Nf::identity(4);
        prop_assert_eq!(g.multiply(&g.inverse()).unwrap(), e.clone());
        prop_assert_eq!(g.inverse().multiply(&g).unwrap(), e.clone());
        prop_assert_eq!(g.multiply(&e).unwrap(), g.clone());
    }

    #[test]
    fn powers_add(g in normal_form(3), a in -12i64..=12, b in -12i64..=12) {
        prop_assert_eq!(g.power(&int(a)).multiply(&g.power(&int(b))).unwrap(), g.power(&int(a + b)));
        let mut repeated = Nf::identity(3);
        let step = if a < 0 { g.inverse() } else { g.clone() };
        for _ in 0..a.abs() {
            repeated = repeated.multiply(&step).unwrap();
        }
        prop_assert_eq!(g.power(&int(a)), repeated);
    }

    #[test]
    fn commutators_are_central(g in normal_form(4), h in normal_form(4), k in normal_form(4)) {
        let c = g.commutator(&h).unwrap();
        prop_assert!(c.is_central());
        prop_assert!(c.commutator(&k).unwrap().is_identity());
        prop_assert_eq!(h.commutator(&g).unwrap(), c.inverse());
    }

    #[test]
    fn spelling_reduces_back(g in normal_form(5)) {
        prop_assert_eq!(reduce_word(&g.spell()), g);
    }

    #[test]
    fn embedding_is_a_homomorphism(g in normal_form(4), h in normal_form(4)) {
        let gh = g.multiply(&h).unwrap();
        prop_assert_eq!(rho_normal_form(&gh), rho_normal_form(&g).multiply(&rho_normal_form(&h)));
        prop_assert_eq!(matrix_to_normal_form(&rho_normal_form(&gh), 4).unwrap(), gh);
    }

    #[test]
    fn words_collect_like_matrices(w in word(4, 24)) {
        prop_assert_eq!(rho_word(&w), rho_normal_form(&reduce_word(&w)));
    }

    #[test]
    fn machine_integers_agree_with_bigint(rank in 1usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_normal_form(&mut r, rank, 30);
        let b = random_normal_form(&mut r, rank, 30);
        let small = |g: &Nf| g.map(|v| i64::try_from(v).unwrap());
        let product = small(&a).multiply(&small(&b)).unwrap().power(&-3);
        prop_assert_eq!(product.map(|&v| BigInt::from(v)), a.multiply(&b).unwrap().power(&int(-3)));
    }

    #[test]
    fn derived_system_matches_group_evaluation(inst in seeded(|r| {
        let rank = r.gen_range(1..=4);
        let k = r.gen_range(1..=4);
        random_instance(r, rank, k, 2)
    }), seed in any::<u64>()) {
        let system = kp_to_system(&inst);
        let mut r = rng(seed);
        for _ in 0..20 {
            let eps: Vec<BigInt> = (0..inst.len()).map(|_| int(r.gen_range(-4..=4))).collect();
            let (value, hit) = evaluate_kp(&inst, &eps).unwrap();
            prop_assert_eq!(&value, &product_by_words(&inst, &eps));
            prop_assert_eq!(system.is_satisfied_by(&assignment(&system.variables, &eps)).unwrap(), hit);
        }
    }

    #[test]
    fn instance_round_trip(inst in seeded(|r| {
        let rank = r.gen_range(1..=4);
        let k = r.gen_range(0..=4);
        random_instance(r, rank, k, 2)
    })) {
        let text = print_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(print_instance(&back), text);
    }

    #[test]
    fn compiled_instance_round_trip(sys in seeded(|r| random_quadratic_system(r, 2, 2, 3))) {
        let c = compile_quadratic(&sys, AllocationMode::FreshPairs).unwrap();
        let text = print_instance(&c.instance);
        prop_assert_eq!(parse_instance(&text).unwrap(), c.instance);
    }

    #[test]
    fn system_round_trip(sys in seeded(|r| {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(0..=3);
        random_quadratic_system(r, n, m, 9)
    })) {
        let text = print_system(&sys);
        let back = parse_system(&text).unwrap().materialize().unwrap();
        prop_assert_eq!(&back, &sys);
        prop_assert_eq!(print_system(&back), text);
    }

    #[test]
    fn witness_round_trip(v in prop::collection::vec(-1000i64..=1000, 0..8)) {
        let eps = ints(&v);
        prop_assert_eq!(parse_witness(&format_witness(&eps), eps.len()).unwrap(), eps);
    }
}

fn check_compilation(
    sys: &DiophantineSystem<BigInt>,
    c: &Compilation<BigInt>,
    bound: i64,
) -> Result<(), TestCaseError> {
    let truth = brute_force_system(sys, bound);
    if let Some(sol) = &truth {
        let eps = c.extend_witness(&assignment(&sys.variables, sol)).unwrap();
        prop_assert!(evaluate_kp(&c.instance, &eps).unwrap().1, "solution does not lift");
    }
    match bounded_solve_kp(&c.instance, &SearchBox::induced(&c.instance, bound), 1) {
        Ok(found) => {
            prop_assert_eq!(found.is_some(), truth.is_some());
            if let Some(eps) = found {
                let back = c.restrict(&eps).unwrap();
                prop_assert!(sys.is_satisfied_by(&back).unwrap(), "witness does not restrict to a solution");
            }
        }
        Err(Error::Unenumerable(_)) => prop_assert_eq!(c.pool.mode(), AllocationMode::Packed),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn quadratic_compiler_is_equisolvable(sys in seeded(|r| {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=2);
        random_quadratic_system(r, n, m, 3)
    })) {
        let c = compile_quadratic(&sys, AllocationMode::FreshPairs).unwrap();
        check_compilation(&sys, &c, 3)?;
    }

    #[test]
    fn term_compiler_is_equisolvable(sys in seeded(|r| {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=2);
        random_quadratic_system(r, n, m, 3)
    })) {
        let c = compile_terms(&sys.variables, &system_to_terms(&sys), AllocationMode::FreshPairs).unwrap();
        check_compilation(&sys, &c, 3)?;
    }

    #[test]
    fn packed_allocation_is_equisolvable(sys in seeded(|r| {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=2);
        random_quadratic_system(r, n, m, 3)
    })) {
        let c = compile_quadratic(&sys, AllocationMode::Packed).unwrap();
        check_compilation(&sys, &c, 3)?;
        let c = compile_terms(&sys.variables, &system_to_terms(&sys), AllocationMode::Packed).unwrap();
        check_compilation(&sys, &c, 3)?;
    }

    #[test]
    fn degree_reduction_preserves_solutions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = r.gen_range(-3i64..=3);
        let b = r.gen_range(-3i64..=3);
        let rhs = r.gen_range(-30i64..=30);
        let (x, y) = (Polynomial::var("x"), Polynomial::var("y"));
        let lhs = x.pow(3).scale(&int(a)).add(&x.mul(&y.pow(2)).scale(&int(b)));
        let eq = Equation::new(lhs, Polynomial::constant(int(rhs)));
        let sys = DiophantineSystem::new(vec!["x".into(), "y".into()], vec![eq]).unwrap();
        let reduced = degree_reduce(&sys);
        prop_assert!(reduced.max_degree() <= 2);
        let original: Vec<Vec<BigInt>> = box_points(2, 3)
            .filter(|p| sys.is_satisfied_by(&assignment(&sys.variables, p)).unwrap())
            .collect();
        let bx = SearchBox::symmetric(reduced.variables.len(), 27);
        let lifted: Vec<Vec<BigInt>> = all_solutions(&reduced, &bx, 10_000)
            .unwrap()
            .into_iter()
            .map(|w| w.values[..2].to_vec())
            .filter(|p| p.iter().all(|v| v.magnitude() <= &3u32.into()))
            .collect();
        prop_assert_eq!(original, lifted);
    }

    #[test]
    fn sign_encodings_restrict_solutions(target in 0i64..=12, positive in any::<bool>()) {
        let sys = parse_system(&format!("vars: x y\neq: x + y = {target}\n")).unwrap().materialize().unwrap();
        let mode = if positive { SignMode::Positive } else { SignMode::Nonnegative };
        let enc = nonneg_encode(&sys, mode);
        let floor = if positive { 1 } else { 0 };
        let expected: Vec<Vec<BigInt>> = box_points(2, 12)
            .filter(|p| p.iter().all(|v| v >= &int(floor)))
            .filter(|p| &p[0] + &p[1] == int(target))
            .collect();
        let n = enc.variables.len();
        let bx = SearchBox::symmetric(n, 12);
        let found: Vec<Vec<BigInt>> = all_solutions(&enc, &bx, 100_000)
            .unwrap()
            .into_iter()
            .map(|w| w.values[..2].to_vec())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        prop_assert_eq!(found, expected);
    }

    #[test]
    fn kp_search_agrees_with_enumeration(inst in seeded(|r| {
        let rank = r.gen_range(1..=4);
        let k = r.gen_range(1..=3);
        random_instance(r, rank, k, 2)
    })) {
        let bx = SearchBox::symmetric(inst.len(), 2);
        let expected = enumerate_kp(&inst, &bx).unwrap();
        prop_assert_eq!(&bounded_solve_kp(&inst, &bx, 1).unwrap(), &expected);
        prop_assert_eq!(&bounded_solve_kp(&inst, &bx, 4).unwrap(), &expected);
        let via_system = bounded_solve_system(&kp_to_system(&inst), &bx, 1).unwrap().map(|w| w.values);
        prop_assert_eq!(via_system, expected);
    }

    #[test]
    fn parallel_search_is_deterministic(sys in seeded(|r| random_quadratic_system(r, 3, 2, 3)), jobs in 2usize..=8) {
        let bx = SearchBox::symmetric(3, 4);
        prop_assert_eq!(bounded_solve_system(&sys, &bx, 1).unwrap(), bounded_solve_system(&sys, &bx, jobs).unwrap());
    }

    #[test]
    fn heisenberg_agrees_with_direct_search(inst in seeded(|r| {
        let k = r.gen_range(1..=4);
        random_instance(r, 2, k, 2)
    })) {
        let bx = SearchBox::symmetric(inst.len(), 2);
        let direct = bounded_solve_kp(&inst, &bx, 1).unwrap();
        match heisenberg_search(&inst, 2).unwrap() {
            HeisenbergOutcome::Sat(eps) => prop_assert_eq!(Some(eps), direct),
            HeisenbergOutcome::Unsat | HeisenbergOutcome::Unknown => prop_assert_eq!(direct, None),
        }
    }
}

#[test]
fn lifting_respects_the_variable_map() {
    let sys = parse_system("vars: x y\neq: x*y - y = 4\n").unwrap().materialize().unwrap();
    for mode in [AllocationMode::FreshPairs, AllocationMode::Packed] {
        let c = compile_quadratic(&sys, mode).unwrap();
        let inst: &KpInstance<BigInt> = &c.instance;
        for sol in box_points(2, 5).filter(|p| sys.is_satisfied_by(&assignment(&sys.variables, p)).unwrap()) {
            let eps = c.extend_witness(&assignment(&sys.variables, &sol)).unwrap();
            assert!(evaluate_kp(inst, &eps).unwrap().1);
            assert_eq!(c.restrict(&eps).unwrap(), assignment(&sys.variables, &sol));
        }
    }
}
