//! Text formats for systems (`.dio`) and instances (`.kp`).
//!
//! System files:
//!
//! ```text
//! # free-form note
//! vars: x y
//! eq: x*y - 2*x^2 = pow(3,40) + 1
//! ```
//!
//! Expressions use `+ - * ^`, parentheses, decimal integers of any size and
//! the constant functions `pow(b,e)`, `mul(a,b)`, `add(a,b)`, whose arguments
//! are constant expressions. `^` takes a nonnegative integer exponent.
//!
//! Instance files:
//!
//! ```text
//! rank: 2
//! g1: x2
//! g2: x1
//! g: x1^2 x2^3 c1,2^-6
//! map:
//!   x = e1
//!   y = -e2
//! ```
//!
//! A word is a space-separated product of tokens `x<k>` and `c<k>,<l>`
//! (the basic commutator `[x_k, x_l]`, `k < l`), each optionally followed by
//! `^<integer>`; `1` is the empty word. Lines starting with `#` are comments.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::constexpr::ConstExpr;
use crate::error::{Error, Result};
use crate::group::{KpInstance, NormalForm, VarBinding};
use crate::poly::{DiophantineSystem, Equation, Polynomial};
use crate::scalar::Coefficient;

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Character cursor over one line, reporting 1-based columns.
struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    offset: usize,
    line: usize,
    vars: Option<&'a [String]>,
}

impl<'a> Cursor<'a> {
    fn new(text: &str, line: usize, offset: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, offset, line, vars: None }
    }

    fn column(&self) -> usize {
        self.offset + self.pos + 1
    }

    fn err(&self, message: impl Into<String>) -> Error {
        parse_error(self.line, self.column(), message)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic() || *c == '_') {
            return None;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_') {
            self.pos += 1;
        }
        Some(self.chars[start..self.pos].iter().collect())
    }

    fn unsigned(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits parse"))
    }

    fn integer(&mut self) -> Result<BigInt> {
        let negative = self.eat('-');
        let v = self.unsigned()?;
        Ok(if negative { -v } else { v })
    }

    // expr := ['+'|'-'] term (('+'|'-') term)*
    fn expr(&mut self) -> Result<Polynomial<ConstExpr>> {
        let mut acc = if self.eat('-') {
            self.term()?.neg()
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<ConstExpr>> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<ConstExpr>> {
        let base = self.atom()?;
        if self.eat('^') {
            let col = self.column();
            let e = self.unsigned()?;
            let e = e.to_u32().ok_or_else(|| parse_error(self.line, col, "exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial<ConstExpr>> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Polynomial::constant(ConstExpr::Lit(self.unsigned()?))),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let col = self.column();
                let name = self.ident().expect("identifier start checked");
                if self.peek() == Some('(') && matches!(name.as_str(), "pow" | "mul" | "add") {
                    return Ok(Polynomial::constant(self.call(&name)?));
                }
                if let Some(vars) = self.vars {
                    if !vars.contains(&name) {
                        return Err(parse_error(self.line, col, format!("undeclared variable `{name}`")));
                    }
                }
                Ok(Polynomial::var(&name))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of line")),
        }
    }

    fn call(&mut self, name: &str) -> Result<ConstExpr> {
        self.expect('(')?;
        let a = self.const_expr()?;
        self.expect(',')?;
        let b = self.const_expr()?;
        self.expect(')')?;
        Ok(match name {
            "pow" => ConstExpr::pow(a, b),
            "mul" => a * b,
            _ => a + b,
        })
    }

    fn const_expr(&mut self) -> Result<ConstExpr> {
        let negative = self.eat('-');
        let v = match self.peek() {
            Some(c) if c.is_ascii_digit() => ConstExpr::Lit(self.unsigned()?),
            Some(c) if c.is_ascii_alphabetic() => {
                let col = self.column();
                let name = self.ident().expect("identifier start checked");
                if !matches!(name.as_str(), "pow" | "mul" | "add") {
                    return Err(parse_error(self.line, col, format!("`{name}` is not a constant function")));
                }
                self.call(&name)?
            }
            _ => return Err(self.err("expected a constant expression")),
        };
        Ok(if negative { -v } else { v })
    }
}

/// Splits `key: rest` and returns the column at which `rest` starts.
fn split_key(line: &str) -> Option<(&str, &str, usize)> {
    let idx = line.find(':')?;
    Some((line[..idx].trim(), &line[idx + 1..], idx + 1))
}

/// Parses a system file. Coefficients stay symbolic.
pub fn parse_system(text: &str) -> Result<DiophantineSystem<ConstExpr>> {
    let mut notes = Vec::new();
    let mut variables: Option<Vec<String>> = None;
    let mut equations = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() {
            continue;
        }
        if let Some(note) = line.trim_start().strip_prefix('#') {
            notes.push(note.strip_prefix(' ').unwrap_or(note).to_string());
            continue;
        }
        let Some((key, rest, offset)) = split_key(line) else {
            return Err(parse_error(line_no, 1, "expected `vars:` or `eq:`"));
        };
        match key {
            "vars" => {
                if variables.is_some() {
                    return Err(parse_error(line_no, 1, "second `vars:` line"));
                }
                let mut c = Cursor::new(rest, line_no, offset);
                let mut names: Vec<String> = Vec::new();
                while !c.at_end() {
                    let col = c.column();
                    let name = c.ident().ok_or_else(|| c.err("expected a variable name"))?;
                    if matches!(name.as_str(), "pow" | "mul" | "add") {
                        return Err(parse_error(line_no, col, format!("`{name}` is reserved")));
                    }
                    if names.contains(&name) {
                        return Err(parse_error(line_no, col, format!("duplicate variable `{name}`")));
                    }
                    names.push(name);
                }
                variables = Some(names);
            }
            "eq" => {
                let vars = variables.as_deref().ok_or_else(|| parse_error(line_no, 1, "`eq:` before `vars:`"))?;
                let mut c = Cursor::new(rest, line_no, offset);
                c.vars = Some(vars);
                let lhs = c.expr()?;
                c.expect('=')?;
                let rhs = c.expr()?;
                if !c.at_end() {
                    return Err(c.err("trailing input"));
                }
                equations.push(Equation::new(lhs, rhs));
            }
            other => return Err(parse_error(line_no, 1, format!("unknown key `{other}`"))),
        }
    }
    let mut system = DiophantineSystem::new(variables.unwrap_or_default(), equations)?;
    system.notes = notes;
    Ok(system)
}

/// Canonical system text; inverse of [`parse_system`].
pub fn print_system<C: Coefficient>(system: &DiophantineSystem<C>) -> String {
    system.to_text()
}

fn parse_word(text: &str, rank: usize, line: usize, offset: usize) -> Result<NormalForm<BigInt>> {
    let mut acc = NormalForm::identity(rank);
    let mut c = Cursor::new(text, line, offset);
    if c.at_end() {
        return Err(c.err("expected a word"));
    }
    let index = |c: &mut Cursor, v: BigInt, col: usize| -> Result<usize> {
        match v.to_usize() {
            Some(i) if (1..=rank).contains(&i) => Ok(i),
            _ => Err(parse_error(c.line, col, format!("generator index {v} out of range for rank {rank}"))),
        }
    };
    while !c.at_end() {
        let col = c.column();
        let element = match c.peek() {
            Some('1') => {
                c.pos += 1;
                NormalForm::identity(rank)
            }
            Some('x') => {
                c.pos += 1;
                let i = c.unsigned()?;
                let i = index(&mut c, i, col)?;
                let e = if c.eat('^') { c.integer()? } else { BigInt::from(1) };
                NormalForm::generator_power(rank, i, e)?
            }
            Some('c') => {
                c.pos += 1;
                let i = c.unsigned()?;
                let i = index(&mut c, i, col)?;
                c.expect(',')?;
                let j = c.unsigned()?;
                let j = index(&mut c, j, col)?;
                if i >= j {
                    return Err(parse_error(line, col, format!("commutator c{i},{j} needs {i} < {j}")));
                }
                let e = if c.eat('^') { c.integer()? } else { BigInt::from(1) };
                NormalForm::commutator_power(rank, i, j, e)?
            }
            Some(other) => return Err(c.err(format!("unexpected `{other}` in word"))),
            None => unreachable!("checked not at end"),
        };
        acc = acc.multiply(&element)?;
    }
    Ok(acc)
}

/// Parses an instance file.
pub fn parse_instance(text: &str) -> Result<KpInstance<BigInt>> {
    let mut rank: Option<usize> = None;
    let mut inputs = Vec::new();
    let mut target = None;
    let mut map = Vec::new();
    let mut in_map = false;
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.trim_end();
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        if in_map {
            let (name, value) =
                line.split_once('=').ok_or_else(|| parse_error(line_no, 1, "expected `name = e<i>` in map block"))?;
            let name = name.trim();
            let value_col = line.find('=').expect("split on =") + 2;
            let mut c = Cursor::new(value, line_no, value_col);
            let valid_name = Cursor::new(name, line_no, 0).ident().is_some_and(|id| id == name);
            if !valid_name {
                return Err(parse_error(line_no, 1, format!("invalid variable name `{name}`")));
            }
            let negated = c.eat('-');
            if c.peek() != Some('e') {
                return Err(c.err("expected `e<i>`"));
            }
            c.pos += 1;
            let col = c.column();
            let slot = c.unsigned()?;
            if !c.at_end() {
                return Err(c.err("trailing input"));
            }
            let slot = slot
                .to_usize()
                .filter(|s| *s >= 1)
                .ok_or_else(|| parse_error(line_no, col, "slot must be positive"))?;
            map.push(VarBinding { name: name.to_string(), slot: slot - 1, negated });
            continue;
        }
        let Some((key, rest, offset)) = split_key(line) else {
            return Err(parse_error(line_no, 1, "expected `key: value`"));
        };
        match key {
            "rank" => {
                let mut c = Cursor::new(rest, line_no, offset);
                let col = c.column();
                let r = c.unsigned()?;
                if !c.at_end() {
                    return Err(c.err("trailing input"));
                }
                match r.to_usize() {
                    Some(r) if r > 0 => rank = Some(r),
                    _ => return Err(parse_error(line_no, col, "rank must be a positive integer")),
                }
            }
            "map" => {
                if !rest.trim().is_empty() {
                    return Err(parse_error(line_no, offset + 1, "map entries go on the following lines"));
                }
                in_map = true;
            }
            "g" => {
                let r = rank.ok_or_else(|| parse_error(line_no, 1, "target before `rank:`"))?;
                target = Some(parse_word(rest, r, line_no, offset)?);
            }
            k if k.starts_with('g') => {
                let r = rank.ok_or_else(|| parse_error(line_no, 1, "input before `rank:`"))?;
                let idx: usize = k[1..].parse().map_err(|_| parse_error(line_no, 1, format!("unknown key `{k}`")))?;
                if idx != inputs.len() + 1 {
                    return Err(parse_error(line_no, 1, format!("expected g{}, found {k}", inputs.len() + 1)));
                }
                if target.is_some() {
                    return Err(parse_error(line_no, 1, "inputs must precede the target"));
                }
                inputs.push(parse_word(rest, r, line_no, offset)?);
            }
            other => return Err(parse_error(line_no, 1, format!("unknown key `{other}`"))),
        }
    }
    let rank = rank.ok_or_else(|| parse_error(1, 1, "missing `rank:` line"))?;
    let target = target.ok_or_else(|| parse_error(1, 1, "missing target line `g:`"))?;
    let instance = KpInstance { rank, inputs, target, variable_map: map };
    instance.validate()?;
    Ok(instance)
}

/// Canonical instance text; inverse of [`parse_instance`].
pub fn print_instance<C: Coefficient>(instance: &KpInstance<C>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "rank: {}", instance.rank);
    for (i, g) in instance.inputs.iter().enumerate() {
        let _ = writeln!(out, "g{}: {g}", i + 1);
    }
    let _ = writeln!(out, "g: {}", instance.target);
    if !instance.variable_map.is_empty() {
        out.push_str("map:\n");
        for b in &instance.variable_map {
            let _ = writeln!(out, "  {} = {}e{}", b.name, if b.negated { "-" } else { "" }, b.slot + 1);
        }
    }
    out
}

/// Parses `e1=3,e2=-1` (any order, every slot exactly once) into a vector of
/// length `k`.
pub fn parse_witness(text: &str, k: usize) -> Result<Vec<BigInt>> {
    let mut values: HashMap<usize, BigInt> = HashMap::new();
    let mut c = Cursor::new(text, 1, 0);
    if c.at_end() {
        if k == 0 {
            return Ok(Vec::new());
        }
        return Err(c.err("empty witness"));
    }
    loop {
        let col = c.column();
        if !c.eat('e') {
            return Err(c.err("expected `e<i>=<integer>`"));
        }
        let i = c.unsigned()?;
        let i =
            i.to_usize().filter(|i| (1..=k).contains(i)).ok_or_else(|| parse_error(1, col, format!("no slot e{i}")))?;
        c.expect('=')?;
        let v = c.integer()?;
        if values.insert(i, v).is_some() {
            return Err(parse_error(1, col, format!("e{i} given twice")));
        }
        if c.at_end() {
            break;
        }
        c.expect(',')?;
    }
    (1..=k).map(|i| values.remove(&i).ok_or_else(|| parse_error(1, 1, format!("missing e{i}")))).collect()
}

/// `e1=3,e2=-1`.
pub fn format_witness(eps: &[BigInt]) -> String {
    eps.iter().enumerate().map(|(i, v)| format!("e{}={v}", i + 1)).collect::<Vec<_>>().join(",")
}

/// `x=3,y=-1` in the given variable order.
pub fn format_assignment(order: &[String], values: &HashMap<String, BigInt>) -> String {
    order.iter().filter_map(|v| values.get(v).map(|x| format!("{v}={x}"))).collect::<Vec<_>>().join(",")
}
