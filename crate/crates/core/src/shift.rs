//! Weight shifts of holomorphic weights `(k, w)` for a totally real field in
//! which `p` splits as `∏ P_j` with residue degrees `f_j`: admissibility of a
//! shift `k ↦ k + a`, `w ↦ w + p^β - 1`, the shift-vector tables of the
//! generalized Dickson and D operators, and compilation of a plan into the
//! explicit operator `Λ_j` on each prime block.
//!
//! Positions inside block `j` are the Frobenius twists `0..f_j`; block `j`
//! is a module for `GL₂(F_{p^{f_j}})` with degrees `k_i - 2`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::{is_prime, Elem, FieldCtx, FieldError};
use crate::modrep::{
    check_equivariance, d_op, dickson_op, generators, max_dim, serre_d_op, theta_op, LinMap, ModRepError, ModuleSpec,
};

/// Largest destination dimension `compile_*` will build. Operator columns
/// stay sparse, so this is far above the dense budget.
pub const LAMBDA_DST_LIMIT: usize = 1 << 22;

/// Largest destination dimension for the composite equivariance check.
const COMPOSITE_CHECK_LIMIT: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShiftError {
    #[error("invalid prime split: {0}")]
    BadSplit(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("weight entry {0} is below 2")]
    WeightTooSmall(i64),
    #[error("not holomorphic: {0}")]
    NotHolomorphic(String),
    #[error("(♣) violated: {0}")]
    Club(String),
    #[error("{0}")]
    Rejected(Rejection),
    #[error("Λ exceeds the explicit-matrix budget: {0}")]
    TooLarge(String),
    #[error(transparent)]
    ModRep(#[from] ModRepError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `p O_F = ∏ P_j` with residue degrees `f_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeSplit {
    p: u64,
    f: Vec<u32>,
}

impl PrimeSplit {
    pub fn new(p: u64, f: Vec<u32>) -> Result<Self, ShiftError> {
        if p == 2 || !is_prime(p) {
            return Err(ShiftError::BadSplit(format!("p = {p} must be an odd prime")));
        }
        if f.is_empty() || f.contains(&0) {
            return Err(ShiftError::BadSplit(format!("residue degrees must be >= 1, got {f:?}")));
        }
        Ok(PrimeSplit { p, f })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn f(&self) -> &[u32] {
        &self.f
    }

    pub fn g(&self) -> u32 {
        self.f.iter().sum()
    }

    pub fn min_f(&self) -> u32 {
        *self.f.iter().min().expect("non-empty")
    }
}

/// Holomorphic weight data: per-block vectors `k^{(j)}` and the odd `w`.
/// Nothing is checked on construction; the planner checks parity and range.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightParams {
    pub k: Vec<Vec<i64>>,
    pub w: i64,
}

impl WeightParams {
    pub fn new(k: Vec<Vec<i64>>, w: i64) -> Self {
        WeightParams { k, w }
    }

    /// `w_i = (w + 1 - k_i) / 2`, when all are integers.
    pub fn w_vector(&self) -> Option<Vec<Vec<i64>>> {
        self.k
            .iter()
            .map(|block| block.iter().map(|k| half(self.w + 1 - k)).collect::<Option<Vec<_>>>())
            .collect()
    }

    fn check_parity(&self) -> Result<(), String> {
        if self.w.rem_euclid(2) != 1 {
            return Err(format!("w = {} must be odd", self.w));
        }
        for (j, block) in self.k.iter().enumerate() {
            for (i, k) in block.iter().enumerate() {
                if half(self.w + 1 - k).is_none() {
                    return Err(format!("w + 1 - k_{i}^({}) = {} is odd", j + 1, self.w + 1 - k));
                }
            }
        }
        Ok(())
    }

    fn check_shape(&self, ps: &PrimeSplit) -> Result<(), String> {
        if self.k.len() != ps.f.len() {
            return Err(format!("{} weight blocks for {} primes", self.k.len(), ps.f.len()));
        }
        for (j, (block, f)) in self.k.iter().zip(&ps.f).enumerate() {
            if block.len() != *f as usize {
                return Err(format!("block {} has {} entries, f = {f}", j + 1, block.len()));
            }
            if let Some(k) = block.iter().find(|k| **k < 2) {
                return Err(format!("k entry {k} is below 2"));
            }
        }
        Ok(())
    }
}

fn half(n: i64) -> Option<i64> {
    (n.rem_euclid(2) == 0).then(|| n.div_euclid(2))
}

/// The common `w = k_i + 2 w_i - 1`, or an error if it is not constant.
/// Parity of `w` is not checked here.
pub fn validate_holomorphic(k: &[Vec<i64>], w_vec: &[Vec<i64>]) -> Result<i64, ShiftError> {
    if k.len() != w_vec.len() || k.iter().zip(w_vec).any(|(a, b)| a.len() != b.len()) {
        return Err(ShiftError::Shape("k and w vectors differ in shape".into()));
    }
    let mut common = None;
    for (kb, wb) in k.iter().zip(w_vec) {
        for (&ki, &wi) in kb.iter().zip(wb) {
            if ki < 2 {
                return Err(ShiftError::WeightTooSmall(ki));
            }
            let w = ki + 2 * wi - 1;
            match common {
                None => common = Some(w),
                Some(c) if c != w => {
                    return Err(ShiftError::NotHolomorphic(format!("k + 2w - 1 takes values {c} and {w}")))
                }
                _ => {}
            }
        }
    }
    common.ok_or_else(|| ShiftError::Shape("empty weight".into()))
}

/// Clauses in the order they are checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Clause {
    #[serde(rename = "parity")]
    Parity,
    #[serde(rename = "range")]
    Range,
    #[serde(rename = "(♠)")]
    Spade,
    #[serde(rename = "(*)")]
    Star,
    #[serde(rename = "(**)")]
    StarStar,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::Parity => "parity",
            Clause::Range => "range",
            Clause::Spade => "(♠)",
            Clause::Star => "(*)",
            Clause::StarStar => "(**)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub clause: Clause,
    pub detail: String,
}

impl Rejection {
    fn new(clause: Clause, detail: impl Into<String>) -> Self {
        Rejection { clause, detail: detail.into() }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.clause, self.detail)
    }
}

/// Which admissibility condition a plan was accepted under.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    #[serde(rename = "(*)")]
    Star,
    #[serde(rename = "(**)")]
    StarStar,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Star => "(*)",
            Condition::StarStar => "(**)",
        })
    }
}

/// `a_i = p^β + 1` (a Dickson-type operator) or `a_i = p^β - 1` (a D-operator).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Selector {
    Theta,
    D,
}

impl Selector {
    pub fn a_value(self, p: u64, beta: u32) -> i64 {
        let pb = (p as i64).pow(beta);
        match self {
            Selector::Theta => pb + 1,
            Selector::D => pb - 1,
        }
    }
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "theta" | "Theta" | "t" | "T" | "Θ" | "θ" | "+" => Ok(Selector::Theta),
            "d" | "D" | "-" => Ok(Selector::D),
            other => Err(format!("unknown selector {other:?} (expected theta or d)")),
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::Theta => "theta",
            Selector::D => "d",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftChoice {
    pub beta: u32,
    pub selectors: Vec<Vec<Selector>>,
}

impl ShiftChoice {
    pub fn new(beta: u32, selectors: Vec<Vec<Selector>>) -> Self {
        ShiftChoice { beta, selectors }
    }

    /// Reads selectors back from `a`-values `p^β ± 1`.
    pub fn from_a_values(p: u64, beta: u32, a: &[Vec<i64>]) -> Result<Self, ShiftError> {
        let sel = |x: i64| {
            [Selector::Theta, Selector::D]
                .into_iter()
                .find(|s| s.a_value(p, beta) == x)
                .ok_or_else(|| ShiftError::Shape(format!("a = {x} is neither p^β + 1 nor p^β - 1")))
        };
        let selectors = a.iter().map(|b| b.iter().map(|x| sel(*x)).collect()).collect::<Result<_, _>>()?;
        Ok(ShiftChoice { beta, selectors })
    }

    pub fn a_values(&self, p: u64) -> Vec<Vec<i64>> {
        self.selectors.iter().map(|b| b.iter().map(|s| s.a_value(p, self.beta)).collect()).collect()
    }
}

/// One intertwining operator on a block with residue degree `f`; `twist` is
/// `α` and `sub` the subscript `β` of `Θ_β^{[α]}` / `D_β^{[α]}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Theta { twist: u32, sub: u32 },
    Dickson { twist: u32 },
    D { twist: u32, sub: u32 },
    SerreD { twist: u32 },
}

impl Op {
    pub fn twist(self) -> u32 {
        match self {
            Op::Theta { twist, .. } | Op::Dickson { twist } | Op::D { twist, .. } | Op::SerreD { twist } => twist,
        }
    }

    /// Positions whose degree the operator changes.
    pub fn positions(self, f: u32) -> Vec<usize> {
        match self {
            Op::Theta { twist, sub } | Op::D { twist, sub } => {
                vec![twist as usize, ((twist + sub) % f) as usize]
            }
            Op::Dickson { twist } | Op::SerreD { twist } => vec![twist as usize],
        }
    }

    /// Degree change on a block with residue degree `f`.
    pub fn shift(self, p: u64, f: u32) -> Vec<i64> {
        let p = p as i64;
        let q = p.pow(f);
        let mut out = vec![0; f as usize];
        match self {
            Op::Theta { twist, sub } => {
                out[twist as usize] += 1;
                out[((twist + sub) % f) as usize] += p.pow(f - sub);
            }
            Op::D { twist, sub } => {
                out[twist as usize] -= 1;
                out[((twist + sub) % f) as usize] += p.pow(f - sub);
            }
            Op::Dickson { twist } => out[twist as usize] += q + 1,
            Op::SerreD { twist } => out[twist as usize] += q - 1,
        }
        out
    }

    /// The explicit map on `det^m ⊗ ⊗ M_{ks[i]}^{[i]}`.
    pub fn build(self, f: &FieldCtx, ks: &[i64], m: i64) -> Result<LinMap, ModRepError> {
        match self {
            Op::Theta { twist, sub } => theta_op(f, ks, m, twist, sub),
            Op::Dickson { twist } => dickson_op(f, ks, m, twist),
            Op::D { twist, sub } => d_op(f, ks, m, twist, sub),
            Op::SerreD { twist } => serre_d_op(f, ks, m, twist),
        }
    }

    fn label(self, bracket_zero: bool) -> String {
        let tw = |t: u32| if t == 0 && !bracket_zero { String::new() } else { format!("^[{t}]") };
        match self {
            Op::Theta { twist, sub } => format!("Θ_{sub}{}", tw(twist)),
            Op::Dickson { twist } => format!("Θ{}", tw(twist)),
            Op::D { twist, sub } => format!("D_{sub}{}", tw(twist)),
            Op::SerreD { twist } => format!("D{}", tw(twist)),
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label(true))
    }
}

impl Serialize for Op {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `ϑ_i` / `δ_i` for a block: `Θ_{f-β}^{[i]}` or `D_{f-β}^{[i]}`, and the
/// classical `Θ^{[i]}` / `D^{[i]}` when `β = f`.
pub fn block_operator(sel: Selector, f: u32, beta: u32, i: u32) -> Op {
    match (sel, beta < f) {
        (Selector::Theta, true) => Op::Theta { twist: i, sub: f - beta },
        (Selector::Theta, false) => Op::Dickson { twist: i },
        (Selector::D, true) => Op::D { twist: i, sub: f - beta },
        (Selector::D, false) => Op::SerreD { twist: i },
    }
}

/// `Λ_j` in application order: the D-operators first, then the
/// Dickson-type ones, each set by ascending position.
pub fn block_recipe(sels: &[Selector], beta: u32) -> Vec<Op> {
    let f = sels.len() as u32;
    let pick = |want: Selector| {
        sels.iter()
            .enumerate()
            .filter(move |(_, s)| **s == want)
            .map(move |(i, s)| block_operator(*s, f, beta, i as u32))
    };
    pick(Selector::D).chain(pick(Selector::Theta)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanInput {
    pub p: u64,
    pub f: Vec<u32>,
    pub k: Vec<Vec<i64>>,
    pub w: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanTarget {
    pub k: Vec<Vec<i64>>,
    pub w: i64,
}

/// The outcome of planning a shift; rejected plans keep their input and
/// the first violated clause.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftPlan {
    pub input: PlanInput,
    pub beta: u32,
    pub choices: Vec<Vec<i64>>,
    pub accepted: bool,
    pub condition: Option<Condition>,
    #[serde(serialize_with = "ser_rejection")]
    pub rejection: Option<Rejection>,
    pub target: Option<PlanTarget>,
    /// Per block, in application order; empty when the shapes are invalid.
    pub recipe: Vec<Vec<Op>>,
    #[serde(skip)]
    pub selectors: Vec<Vec<Selector>>,
}

fn ser_rejection<S: Serializer>(r: &Option<Rejection>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

impl ShiftPlan {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plan serializes")
    }
}

/// Plans the shift `k ↦ k + a`, `w ↦ w + p^β - 1` for the given choice.
///
/// Clauses are checked in the order parity, range, `(*)`, `(**)`; the plan
/// is accepted when `(*)` or `(**)` holds and records which one did.
pub fn plan_general(ps: &PrimeSplit, wp: &WeightParams, choice: &ShiftChoice) -> ShiftPlan {
    let p = ps.p;
    let beta = choice.beta;
    let mut plan = ShiftPlan {
        input: PlanInput { p, f: ps.f.clone(), k: wp.k.clone(), w: wp.w },
        beta,
        choices: choice.a_values(p),
        accepted: false,
        condition: None,
        rejection: None,
        target: None,
        recipe: Vec::new(),
        selectors: choice.selectors.clone(),
    };
    let range = wp.check_shape(ps).and_then(|_| check_choice_shape(ps, choice));
    if range.is_ok() {
        plan.recipe = choice.selectors.iter().map(|s| block_recipe(s, beta)).collect();
    }
    if let Err(e) = wp.check_parity() {
        plan.rejection = Some(Rejection::new(Clause::Parity, e));
        return plan;
    }
    if let Err(e) = range {
        plan.rejection = Some(Rejection::new(Clause::Range, e));
        return plan;
    }
    let star = check_star(ps, wp, choice);
    let star_star = check_star_star(p, &wp.k);
    plan.condition = match (&star, &star_star) {
        (Ok(()), _) => Some(Condition::Star),
        (Err(_), Ok(())) => Some(Condition::StarStar),
        (Err(a), Err(b)) => {
            plan.rejection = Some(Rejection::new(Clause::Star, format!("{a}; (**): {b}")));
            return plan;
        }
    };
    let target_k = wp.k.iter().zip(&plan.choices).map(|(k, a)| k.iter().zip(a).map(|(x, y)| x + y).collect()).collect();
    let target = WeightParams::new(target_k, wp.w + (p as i64).pow(beta) - 1);
    debug_assert!(target.check_parity().is_ok() && target.check_shape(ps).is_ok());
    plan.accepted = true;
    plan.target = Some(PlanTarget { k: target.k, w: target.w });
    plan
}

fn check_choice_shape(ps: &PrimeSplit, choice: &ShiftChoice) -> Result<(), String> {
    let f = ps.min_f();
    if choice.beta == 0 || choice.beta > f {
        return Err(format!("β = {} must lie in 1..={f}", choice.beta));
    }
    if choice.selectors.len() != ps.f.len() || choice.selectors.iter().zip(&ps.f).any(|(s, f)| s.len() != *f as usize) {
        return Err("selectors do not match the residue degrees".into());
    }
    Ok(())
}

fn in_generic_range(p: u64, k: i64) -> bool {
    2 < k && k <= p as i64 + 1
}

/// Condition `(*)`, block by block. The position quantifier runs over
/// `0 ≤ i ≤ f_j - 1`.
fn check_star(ps: &PrimeSplit, wp: &WeightParams, choice: &ShiftChoice) -> Result<(), String> {
    let (p, beta) = (ps.p, choice.beta);
    for (j, ((k, sels), &f)) in wp.k.iter().zip(&choice.selectors).zip(&ps.f).enumerate() {
        let block = j + 1;
        let ds: Vec<usize> = (0..f as usize).filter(|i| sels[*i] == Selector::D).collect();
        for &i in &ds {
            if !in_generic_range(p, k[i]) {
                return Err(format!("block {block}: D at position {i} needs 2 < k_{i} = {} <= {}", k[i], p + 1));
            }
            if beta < f {
                let t = (i + (f - beta) as usize) % f as usize;
                if !(2..=p as i64 + 1).contains(&k[t]) {
                    return Err(format!("block {block}: D at position {i} needs 2 <= k_{t} = {} <= {}", k[t], p + 1));
                }
                for &i2 in &ds {
                    if i2 != i && (i as i64 - (i2 as i64 - beta as i64)).rem_euclid(f as i64) == 0 {
                        return Err(format!("block {block}: D at positions {i} and {i2} with {i} ≡ {i2} - β (mod {f})"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn check_star_star(p: u64, k: &[Vec<i64>]) -> Result<(), String> {
    match k.iter().flatten().find(|x| !in_generic_range(p, **x)) {
        Some(x) => Err(format!("k entry {x} is not in (2, {}]", p + 1)),
        None => Ok(()),
    }
}

/// Parameters of the two-embedding shift with operator multiplicities
/// `n, m` (`Θ_1^{[0]}, Θ_1^{[1]}`), `r, s` (`D_1^{[0]}, D_1^{[1]}`),
/// `t, u` (`Θ^{[0]}, Θ^{[1]}`), `v, z` (`D^{[0]}, D^{[1]}`), and the
/// determinant twists `α`, `β` (`β` defaults to `α`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F2Params {
    pub p: u64,
    pub k0: i64,
    pub k1: i64,
    pub w: i64,
    pub n: i64,
    pub m: i64,
    pub r: i64,
    pub s: i64,
    pub t: i64,
    pub u: i64,
    pub v: i64,
    pub z: i64,
    pub alpha: i64,
    pub beta: Option<i64>,
}

impl F2Params {
    /// All multiplicities zero, `α = 0`.
    pub fn new(p: u64, k0: i64, k1: i64, w: i64) -> Self {
        F2Params { p, k0, k1, w, n: 0, m: 0, r: 0, s: 0, t: 0, u: 0, v: 0, z: 0, alpha: 0, beta: None }
    }

    /// Operators of `Λ` in application order, with multiplicity.
    pub fn recipe(&self) -> Vec<Op> {
        let ops = [
            (Op::D { twist: 0, sub: 1 }, self.r),
            (Op::D { twist: 1, sub: 1 }, self.s),
            (Op::SerreD { twist: 0 }, self.v),
            (Op::SerreD { twist: 1 }, self.z),
            (Op::Theta { twist: 0, sub: 1 }, self.n),
            (Op::Theta { twist: 1, sub: 1 }, self.m),
            (Op::Dickson { twist: 0 }, self.t),
            (Op::Dickson { twist: 1 }, self.u),
        ];
        ops.iter().flat_map(|&(op, c)| std::iter::repeat_n(op, c.max(0) as usize)).collect()
    }

    /// The target weight `(k₀', k₁'; w')`.
    pub fn target(&self) -> (i64, i64, i64) {
        let p = self.p as i64;
        let a = self.alpha;
        let k0 = self.k0 + (p + 1) * (self.n + self.t) + (p - 1) * (self.r + self.v) + p * (p - 1) * (self.u + self.z);
        let k1 = self.k1 + (p + 1) * (self.m + self.u) + (p - 1) * (self.s + self.z) + p * (p - 1) * (self.t + self.v);
        let w = self.w + (p - 1) * (self.n + self.t + self.r + self.v + 2 * a + p * (self.u + self.z + 2 * a));
        (k0, k1, w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F2Target {
    pub k0: i64,
    pub k1: i64,
    pub w: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct F2Plan {
    pub input: F2Params,
    pub accepted: bool,
    pub condition: Option<Condition>,
    #[serde(serialize_with = "ser_rejection")]
    pub rejection: Option<Rejection>,
    pub target: Option<F2Target>,
    /// False when `β ≠ α`: the target formula is only established for `α = β`.
    pub verified: bool,
}

/// Plans the two-embedding shift; clauses in the order parity, range,
/// `(♠)`, `(*)`, `(**)`.
pub fn plan_f2(params: &F2Params) -> F2Plan {
    let mut plan = F2Plan {
        input: params.clone(),
        accepted: false,
        condition: None,
        rejection: None,
        target: None,
        verified: params.beta.is_none_or(|b| b == params.alpha),
    };
    let reject = |mut plan: F2Plan, clause, detail: String| {
        plan.rejection = Some(Rejection::new(clause, detail));
        plan
    };
    let F2Params { p, k0, k1, w, n, m, r, s, t, u, v, z, .. } = *params;
    if w.rem_euclid(2) != 1 {
        return reject(plan, Clause::Parity, format!("w = {w} must be odd"));
    }
    if let Some(k) = [k0, k1].into_iter().find(|k| half(w + 1 - k).is_none()) {
        return reject(plan, Clause::Parity, format!("w + 1 - {k} is odd"));
    }
    if p == 2 || !is_prime(p) {
        return reject(plan, Clause::Range, format!("p = {p} must be an odd prime"));
    }
    if let Some(k) = [k0, k1].into_iter().find(|k| *k < 2) {
        return reject(plan, Clause::Range, format!("k entry {k} is below 2"));
    }
    if [n, m, r, s, t, u, v, z].iter().any(|x| *x < 0) {
        return reject(plan, Clause::Range, "multiplicities n..z must be non-negative".into());
    }
    let pm1 = p as i64 - 1;
    let (lhs, rhs) = ((m - n) + (s - r), pm1 * ((u - t) + (z - v)));
    if lhs != rhs {
        return reject(plan, Clause::Spade, format!("(m-n)+(s-r) = {lhs} but (p-1)((u-t)+(z-v)) = {rhs}"));
    }
    let star = r == 0 && s == 0 && v == 0 && z == 0;
    let star_star = in_generic_range(p, k0) && in_generic_range(p, k1) && r + v <= k0 - 2 && s + z <= k1 - 2;
    plan.condition = if star {
        Some(Condition::Star)
    } else if star_star {
        Some(Condition::StarStar)
    } else {
        let why = if !(in_generic_range(p, k0) && in_generic_range(p, k1)) {
            format!("k = ({k0}, {k1}) not in (2, {}]", p + 1)
        } else {
            format!("r+v = {} > k0-2 or s+z = {} > k1-2", r + v, s + z)
        };
        return reject(plan, Clause::Star, format!("r, s, v, z not all zero; (**): {why}"));
    };
    let (k0t, k1t, wt) = params.target();
    plan.accepted = true;
    plan.target = Some(F2Target { k0: k0t, k1: k1t, w: wt });
    plan
}

fn falling(x: i64, n: i64, p: i64) -> i64 {
    (0..n).fold(1, |acc, i| acc * (x - i).rem_euclid(p) % p)
}

/// The scalar `c` of the image `c·X^{a-r+ps+(p²-1)v} ⊗ X^{b+pr-s+(p²-1)z}`
/// of `X^a ⊗ X^b` under the D-part of `Λ`, reduced mod `p`.
pub fn diamond_coefficient(a: i64, b: i64, r: i64, s: i64, v: i64, z: i64, p: u64) -> Result<u64, ShiftError> {
    if [r, s, v, z].iter().any(|x| *x < 0) || a < 0 || b < 0 {
        return Err(ShiftError::Club("exponents must be non-negative".into()));
    }
    let p = p as i64;
    let steps = [(a, r), (b + p * r, s), (a - r + p * s, v), (b + p * r - s, z)];
    if let Some((x, n)) = steps.iter().find(|(x, n)| x - n < 0) {
        return Err(ShiftError::Club(format!("exponent {x} - {n} is negative")));
    }
    Ok(steps.iter().fold(1, |acc, &(x, n)| acc * falling(x, n, p) % p) as u64)
}

/// Whether `c ≢ 0 (mod p)`.
pub fn check_c_nonzero(a: i64, b: i64, r: i64, s: i64, v: i64, z: i64, p: u64) -> Result<bool, ShiftError> {
    Ok(diamond_coefficient(a, b, r, s, v, z, p)? != 0)
}

/// A table entry, symbolic in `p` (and `q = p^g`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Entry {
    Int(i64),
    PPow(u32),
    QPlusOne,
    QMinusOne,
}

impl Entry {
    pub fn eval(self, p: u64, g: u32) -> i64 {
        let p = p as i64;
        match self {
            Entry::Int(n) => n,
            Entry::PPow(e) => p.pow(e),
            Entry::QPlusOne => p.pow(g) + 1,
            Entry::QMinusOne => p.pow(g) - 1,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Int(n) => write!(f, "{n}"),
            Entry::PPow(1) => f.write_str("p"),
            Entry::PPow(e) => write!(f, "p^{e}"),
            Entry::QPlusOne => f.write_str("q+1"),
            Entry::QMinusOne => f.write_str("q-1"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    /// Row label as printed, e.g. `Θ_1^[1]`, `D_2`, `Θ^[1]`.
    pub label: String,
    pub op: Op,
    #[serde(serialize_with = "ser_entries")]
    pub entries: Vec<Entry>,
}

fn ser_entries<S: Serializer>(e: &[Entry], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(e.iter().map(ToString::to_string))
}

impl TableRow {
    pub fn evaluate(&self, p: u64, g: u32) -> Vec<i64> {
        self.entries.iter().map(|e| e.eval(p, g)).collect()
    }

    /// `(1,p^2,0)`-style rendering.
    pub fn vector_string(&self) -> String {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// The `g²` shift vectors of the generalized Dickson operators and of the
/// generalized D-operators: `Θ_β^{[α]}` for `1 ≤ β < g`, then `Θ^{[α]}`,
/// each group by ascending `α`; likewise for `D`.
pub fn shift_vector_tables(g: u32) -> (Vec<TableRow>, Vec<TableRow>) {
    let row = |op: Op, lead: Entry, classical: Entry| {
        let mut entries = vec![Entry::Int(0); g as usize];
        match op {
            Op::Theta { twist, sub } | Op::D { twist, sub } => {
                entries[twist as usize] = lead;
                entries[((twist + sub) % g) as usize] = Entry::PPow(g - sub);
            }
            Op::Dickson { twist } | Op::SerreD { twist } => entries[twist as usize] = classical,
        }
        TableRow { label: op.label(false), op, entries }
    };
    let mut theta = Vec::new();
    let mut d = Vec::new();
    for sub in 1..g {
        for twist in 0..g {
            theta.push(row(Op::Theta { twist, sub }, Entry::Int(1), Entry::QPlusOne));
            d.push(row(Op::D { twist, sub }, Entry::Int(-1), Entry::QMinusOne));
        }
    }
    for twist in 0..g {
        theta.push(row(Op::Dickson { twist }, Entry::Int(1), Entry::QPlusOne));
        d.push(row(Op::SerreD { twist }, Entry::Int(-1), Entry::QMinusOne));
    }
    (theta, d)
}

fn block_field(p: u64, f: u32) -> Result<Arc<FieldCtx>, ShiftError> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<FieldCtx>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&(p, f)) {
        return Ok(ctx.clone());
    }
    let ctx = FieldCtx::new(p, f)?;
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert((p, f), ctx.clone());
    Ok(ctx)
}

/// The explicit `Λ` on one block and what was verified about it.
#[derive(Clone, Debug, Serialize)]
pub struct LambdaReport {
    pub p: u64,
    pub f: u32,
    pub recipe: Vec<Op>,
    pub src: ModuleSpec,
    pub dst: ModuleSpec,
    pub src_dim: usize,
    pub dst_dim: usize,
    pub rank: usize,
    pub injective: bool,
    /// `Λ` is a `G`-map `det^{det_twist} ⊗ src → dst`.
    pub det_twist: u64,
    /// Every operator in the recipe is equivariant (checked on its own factors).
    pub local_equivariant: bool,
    /// The composite checked directly; `None` when the destination is too large.
    pub equivariant: Option<bool>,
    /// Destination degrees and `det` power match the planned target weight.
    pub target_matches: Option<bool>,
    #[serde(skip)]
    pub map: LinMap,
}

/// Builds `Λ` for a block with weight `k`, `w`, applying `ops` in order to
/// `⊗ (M_{k_i-2} ⊗ det^{w_i})^{[i]}`. `target` is the expected `(k', w')`.
pub fn compile_recipe(
    p: u64,
    k: &[i64],
    w: i64,
    ops: &[Op],
    target: Option<(&[i64], i64)>,
) -> Result<LambdaReport, ShiftError> {
    let f = k.len() as u32;
    if f == 0 {
        return Err(ShiftError::Shape("empty block".into()));
    }
    if let Some(x) = k.iter().find(|x| **x < 2) {
        return Err(ShiftError::WeightTooSmall(*x));
    }
    let pp = crate::field::PrimePower::new(p, f)?;
    let det_of = |k: &[i64], w: i64| -> Result<i64, ShiftError> {
        let q1 = (pp.q() - 1) as i64;
        k.iter().enumerate().try_fold(0i64, |acc, (i, ki)| {
            let wi = half(w + 1 - ki).ok_or_else(|| ShiftError::NotHolomorphic(format!("w + 1 - {ki} is odd")))?;
            Ok((acc + wi.rem_euclid(q1) * pp.p_pow_mod_q1(i as i64) as i64) % q1)
        })
    };
    let m = det_of(k, w)?;
    let src_degrees: Vec<i64> = k.iter().map(|x| x - 2).collect();
    let mut degrees = src_degrees.clone();
    for op in ops {
        if op.positions(f).iter().any(|&i| i >= f as usize) {
            return Err(ShiftError::Shape(format!("{op} does not act on a block of degree {f}")));
        }
        for (d, s) in degrees.iter_mut().zip(op.shift(p, f)) {
            *d += s;
        }
    }
    let dst_dim: usize = degrees.iter().map(|d| (d + 1).max(0) as usize).product();
    let src_dim: usize = src_degrees.iter().map(|d| (d + 1) as usize).product();
    if src_dim > max_dim() || dst_dim > LAMBDA_DST_LIMIT {
        return Err(ShiftError::TooLarge(format!("source dimension {src_dim}, destination dimension {dst_dim}")));
    }
    let ctx = block_field(p, f)?;
    let gens = generators(&ctx)?;
    let src = ModuleSpec::standard(pp, m, &src_degrees)?;
    let mut map = LinMap {
        src: src.clone(),
        dst: src.clone(),
        cols: (0..src_dim).map(|c| vec![(c, Elem::ONE)]).collect(),
        det_twist: 0,
    };
    let mut local_equivariant = true;
    let mut cur = src_degrees.clone();
    let mut dead = false;
    for op in ops {
        if !dead {
            // the operator is the identity on untouched factors, so it is
            // enough to check it on a module where those have degree 0
            let mut local = vec![0; f as usize];
            for i in op.positions(f) {
                local[i] = cur[i];
            }
            local_equivariant &= check_equivariance(&ctx, &op.build(&ctx, &local, m)?, &gens)?;
            let step = op.build(&ctx, &cur, m)?;
            map = step.compose(&map, &ctx)?;
        }
        for (d, s) in cur.iter_mut().zip(op.shift(p, f)) {
            *d += s;
        }
        if cur.iter().any(|d| *d < 0) {
            // a D-operator killed a degree-0 factor; Λ is zero from here on
            dead = true;
        }
    }
    if dead {
        let det_twist = ops.iter().filter(|o| matches!(o, Op::Theta { .. } | Op::Dickson { .. })).map(|o| pp.p_pow(o.twist())).sum();
        let dst = ModuleSpec::standard(pp, m, &cur.iter().map(|d| (*d).max(-1)).collect::<Vec<_>>())?;
        map = LinMap { src: src.clone(), dst, cols: vec![Vec::new(); src_dim], det_twist };
    }
    let rank = map.rank(&ctx);
    let equivariant = if map.dst.dim() <= COMPOSITE_CHECK_LIMIT { Some(check_equivariance(&ctx, &map, &gens)?) } else { None };
    let target_matches = match target {
        Some((tk, tw)) => {
            let q1 = (pp.q() - 1) as i64;
            let degrees_ok = tk.len() == degrees.len() && tk.iter().zip(&degrees).all(|(a, b)| a - 2 == *b);
            let det_ok = degrees_ok && det_of(tk, tw).is_ok_and(|d| d == (m - map.det_twist as i64).rem_euclid(q1));
            Some(degrees_ok && det_ok)
        }
        None => None,
    };
    Ok(LambdaReport {
        p,
        f,
        recipe: ops.to_vec(),
        src,
        dst: map.dst.clone(),
        src_dim,
        dst_dim: map.dst.dim(),
        rank,
        injective: rank == src_dim,
        det_twist: map.det_twist,
        local_equivariant,
        equivariant,
        target_matches,
        map,
    })
}

/// `Λ_j` for block `j` (0-based) of a plan whose shapes are valid.
pub fn compile_lambda(plan: &ShiftPlan, j: usize) -> Result<LambdaReport, ShiftError> {
    let recipe = plan.recipe.get(j).ok_or_else(|| ShiftError::Shape(format!("plan has no recipe for block {j}")))?;
    let k = &plan.input.k[j];
    let tk: Vec<i64> = k.iter().zip(&plan.choices[j]).map(|(x, a)| x + a).collect();
    let tw = plan.input.w + (plan.input.p as i64).pow(plan.beta) - 1;
    compile_recipe(plan.input.p, k, plan.input.w, recipe, Some((&tk, tw)))
}

/// `Λ` for the two-embedding shift, checked against the target formula.
pub fn compile_f2(params: &F2Params) -> Result<LambdaReport, ShiftError> {
    let (k0, k1, w) = params.target();
    compile_recipe(params.p, &[params.k0, params.k1], params.w, &params.recipe(), Some((&[k0, k1], w)))
}
