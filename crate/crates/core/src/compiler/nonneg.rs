//! Restricting variables to positive or nonnegative values with sums of
//! four squares.

use crate::poly::{DiophantineSystem, Equation, Polynomial};
use crate::scalar::Coefficient;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignMode {
    Positive,
    Nonnegative,
}

/// Adds, for every declared variable `v`, four fresh variables `s1..s4` and
/// the defining equation `v = s1^2 + s2^2 + s3^2 + s4^2` (plus 1 in positive
/// mode). By Lagrange's four-square theorem the integer solutions of the
/// result restrict exactly to the positive (or nonnegative) solutions of the
/// input. The result has degree at most `max(2, degree of the input)`.
pub fn nonneg_encode<C: Coefficient>(system: &DiophantineSystem<C>, mode: SignMode) -> DiophantineSystem<C> {
    let mut out = system.clone();
    for v in &system.variables {
        let mut squares = Polynomial::zero();
        for _ in 0..4 {
            let s = out.fresh_name(&format!("{v}_s"));
            out.variables.push(s.clone());
            squares = squares.add(&Polynomial::var(&s).pow(2));
        }
        if mode == SignMode::Positive {
            squares = squares.add(&Polynomial::constant(C::one()));
        }
        out.equations.push(Equation::new(Polynomial::var(v), squares));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use std::collections::HashMap;

    fn single(value: i64) -> DiophantineSystem<BigInt> {
        DiophantineSystem::new(
            vec!["x".into()],
            vec![Equation::new(Polynomial::var("x"), Polynomial::constant(BigInt::from(value)))],
        )
        .unwrap()
    }

    /// Whether some a, b, c, d in [0, 3] satisfy the encoded system.
    fn solvable(s: &DiophantineSystem<BigInt>, x: i64) -> bool {
        let names = &s.variables[1..];
        (0..256).any(|code| {
            let mut env: HashMap<String, BigInt> = HashMap::from([("x".to_string(), BigInt::from(x))]);
            for (k, n) in names.iter().enumerate() {
                env.insert(n.clone(), BigInt::from((code >> (2 * k)) & 3));
            }
            s.is_satisfied_by(&env).unwrap()
        })
    }

    #[test]
    fn positive_mode() {
        let one = nonneg_encode(&single(1), SignMode::Positive);
        assert_eq!(one.variables, vec!["x", "x_s1", "x_s2", "x_s3", "x_s4"]);
        assert_eq!(one.equations[1].to_text(&one.variables), "x = x_s1^2 + x_s2^2 + x_s3^2 + x_s4^2 + 1");
        assert!(solvable(&one, 1));
        assert!(!solvable(&nonneg_encode(&single(0), SignMode::Positive), 0));
    }

    #[test]
    fn nonnegative_mode() {
        let seven = nonneg_encode(&single(7), SignMode::Nonnegative);
        assert!(solvable(&seven, 7));
        assert!(!solvable(&nonneg_encode(&single(-1), SignMode::Nonnegative), -1));
    }
}
