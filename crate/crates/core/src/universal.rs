//! The universal Diophantine system of degree 2 in 63 unknowns and 51
//! equations, parameterized by `x, bz, by, bu`, and resource accounting for
//! its compilation.
//!
//! Names are ASCII transliterations: `G1..G27` for the Gamma variables,
//! `alf`, `Del`, `eps`, `lam`, `gam`, `phi` for the Greek letters, `bz`,
//! `by`, `bu` for the set-encoding parameters.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::compiler::Compilation;
use crate::constexpr::ConstExpr;
use crate::error::{Error, Result};
use crate::format::parse_system;
use crate::poly::DiophantineSystem;
use crate::scalar::Coefficient;

/// Declared unknowns in output order.
pub const VARIABLES: [&str; 63] = [
    "G1", "G2", "G3", "G4", "G5", "G6", "G7", "G8", "G9", "G10", "G11", "G12", "G13", "G14", "G15", "G16", "G17",
    "G18", "G19", "G20", "G21", "G22", "G23", "G24", "G25", "G26", "G27", "B", "C1", "D1", "c", "e", "l", "t", "m",
    "g", "S", "T", "N", "R", "P", "K", "h", "M", "U", "Y", "w", "s", "D", "I", "o", "F", "i", "E", "G", "H", "j",
    "alf", "Del", "eps", "lam", "gam", "phi",
];

/// Equation templates; `{x}`, `{bz}`, `{by}`, `{bu}` are parameters and
/// `{p}` is the constant `5^59` (or its toy replacement).
const EQUATIONS: [&str; 51] = [
    "G1 = G26^2",
    "G2 = M*U",
    "G3 = B*(2*G23 - B) - 1",
    "G4 = G23*C1",
    "G5 = c^2",
    "G6 = G5^2",
    "G8 = G24^2",
    "G9 = lam*B",
    "G10 = G*H",
    "G11 = F^2",
    "G12 = G23*E",
    "G13 = G25^2",
    "G14 = G23*G25",
    "G15 = N^2",
    "G16 = Y*K",
    "G18 = P*K",
    "G20 = G8*G24",
    "G21 = G8^2",
    "G22 = G6*G20",
    "B = 2*G1^2*pow(mul(2,{bz}),add({p},1))",
    "D1 = 1 + G27 + C1*(G23 - B) + alf*G3",
    "(G4 - C1)*(G4 + C1) + 1 = D1^2",
    "C1 = {p} + Del*(G23 - 1)",
    "c = 1 + (G26 - eps)*B + g",
    "e + 2*{bz}*G26*l + 2*{bz}*B*G6 + G7 = 2*{bz}*(1 + G27)",
    "l = {bu} + t*(B - 2*{bz})",
    "e = {by} + m*(B - 2*{bz})",
    "S = g - 4*{bz}^2*G22 + l*G24 + e*(G8 + 4*{bz}*G22) + 2*{bz}*G9*(-2*{bz}*G22 + G20 + G21)",
    "T = G24 - 1 - (G26 - 1)*l + (G9 - 2*lam*{bz})*(G24 + G8) + 2*{bz}*(B - 2)*G21",
    "N = 16*{bz}*G20*G8",
    "R = S*(G15 - N) + (T + 1)*(G15 - 1)",
    "P = 2*M*G2",
    "(K - G18)*(K + G18) + G19^2 = 1",
    "(2*G25 - 2*G16 - K)*(2*G25 - 2*G16 + K) + G17 = 0",
    "K = R + 1 + h*(P - 1)",
    "M = R*Y",
    "U = G15*w",
    "Y = G15*s",
    "D = -2*G25 - 5*gam + G26*w + G23*(G25 + 4*gam)",
    "I = D + o*F",
    "(D - G14)*(D + G14) + G13 = 1",
    "E = i*G13 + 1",
    "(G12 - E)*(G12 + E) - G11 + 1 = 0",
    "G = G23 + G11*(G11 - G23)",
    "H = 2*R + 1 + j*G25",
    "I^2 + H*(H - G10) = 1",
    "G23 = G2 + M",
    "G24 = 1 + G9 - lam",
    "G25 = 2*R + 1 + C1 + phi",
    "G26 = eps + {x}",
    "G27 = lam*(B - 1)",
];

/// Index of the equation `(K - G18)(K + G18) + G19^2 = 1` in [`jones_system`].
pub const WORKED_EQUATION: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalParams {
    pub x: ConstExpr,
    pub z: ConstExpr,
    pub y: ConstExpr,
    pub u: ConstExpr,
    /// Replaces `5^59` (so `5^59 + 1` becomes `toy_exponent + 1`).
    pub toy_exponent: Option<BigInt>,
}

impl UniversalParams {
    pub fn new(x: i64, z: i64, y: i64, u: i64) -> Self {
        UniversalParams { x: x.into(), z: z.into(), y: y.into(), u: u.into(), toy_exponent: None }
    }

    pub fn with_toy_exponent(mut self, e: i64) -> Self {
        self.toy_exponent = Some(BigInt::from(e));
        self
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("x", &self.x), ("z", &self.z), ("y", &self.y), ("u", &self.u)] {
            let ok = v.materialize().map(|v| v.is_positive()).unwrap_or(true) && !v.is_negative_hint();
            if !ok {
                return Err(Error::InvalidParameter(name.into()));
            }
        }
        if let Some(e) = &self.toy_exponent {
            if !e.is_positive() {
                return Err(Error::InvalidParameter("toy-exponent".into()));
            }
        }
        Ok(())
    }
}

/// The universal system with parameters substituted. Coefficients stay
/// symbolic; without a toy exponent the coefficient of `G1^2` in the `B`
/// equation is the tower `2 * (2 bz)^(5^59 + 1)` and cannot be materialized.
pub fn jones_system(params: &UniversalParams) -> Result<DiophantineSystem<ConstExpr>> {
    params.validate()?;
    let p = match &params.toy_exponent {
        Some(e) => ConstExpr::Lit(e.clone()),
        None => ConstExpr::pow(5.into(), 59.into()),
    };
    let mut text = format!("vars: {}\n", VARIABLES.join(" "));
    for t in EQUATIONS {
        let eq = t
            .replace("{x}", &params.x.to_string())
            .replace("{bz}", &params.z.to_string())
            .replace("{by}", &params.y.to_string())
            .replace("{bu}", &params.u.to_string())
            .replace("{p}", &p.to_string());
        text.push_str("eq: ");
        text.push_str(&eq);
        text.push('\n');
    }
    let mut system = parse_system(&text)?;
    system.notes.push(format!("universal system, x={} bz={} by={} bu={}", params.x, params.z, params.y, params.u));
    if let Some(e) = &params.toy_exponent {
        system.notes.push(format!("toy exponent: 5^59 replaced by {e} in the B and C1 equations"));
    }
    Ok(system)
}

/// Published figures for the compiled universal system: equation
/// commutators, tie commutators, total commutators, inputs.
pub const REFERENCE_FIGURES: (usize, usize, usize, usize) = (167, 155, 322, 334);

/// Structural counts of a compilation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ResourceReport {
    pub equations: usize,
    pub variables: usize,
    pub equation_commutators: usize,
    pub closure_commutators: usize,
    pub tie_commutators: usize,
    pub term_commutators: usize,
    pub total_commutators: usize,
    pub generators: usize,
    pub inputs: usize,
}

pub fn resource_report<C: Coefficient>(system: &DiophantineSystem<C>, compiled: &Compilation<C>) -> ResourceReport {
    ResourceReport {
        equations: system.equations.len(),
        variables: system.variables.len(),
        equation_commutators: compiled.equation_commutators(),
        closure_commutators: compiled.closure_commutators(),
        tie_commutators: compiled.tie_commutators(),
        term_commutators: compiled.term_commutators(),
        total_commutators: compiled.total_commutators(),
        generators: compiled.pool.rank(),
        inputs: compiled.instance.len(),
    }
}

impl fmt::Display for ResourceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (eqc, ties, total, inputs) = REFERENCE_FIGURES;
        writeln!(f, "equations: {}", self.equations)?;
        writeln!(f, "variables: {}", self.variables)?;
        writeln!(f, "equation commutators: {}", self.equation_commutators)?;
        writeln!(f, "closure commutators: {}", self.closure_commutators)?;
        writeln!(f, "tie commutators: {}", self.tie_commutators)?;
        if self.term_commutators > 0 {
            writeln!(f, "term commutators: {}", self.term_commutators)?;
        }
        writeln!(f, "total commutators: {}", self.total_commutators)?;
        writeln!(f, "generators: {}", self.generators)?;
        writeln!(f, "inputs: {}", self.inputs)?;
        writeln!(f, "reference comparison: informational")?;
        writeln!(
            f,
            "  equation commutators: {} here, {eqc} published",
            self.equation_commutators + self.closure_commutators
        )?;
        writeln!(f, "  tie commutators: {} here, {ties} published", self.tie_commutators)?;
        writeln!(f, "  total commutators: {} here, {total} published", self.total_commutators)?;
        writeln!(f, "  inputs: {} here, {inputs} published", self.inputs)
    }
}
