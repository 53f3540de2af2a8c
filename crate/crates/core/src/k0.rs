//! The Grothendieck ring `K₀(GL₂(F_q))` and its rewrite system.
//!
//! A virtual representation is an integer combination of labels
//! `det^m ⊗ ⊗_i M_{k_i}^{[i]}` with `0 <= m < q-1` and `0 <= k_i <= p-1`.
//! Arbitrary products of symmetric powers are brought to that form by
//!
//! * reflection: `M_{-1} = 0`, `M_k = -e^{1+k} M_{-k-2}` for `k <= -2`;
//! * the product rule `M_a M_b = Σ_{t=0}^{min(a,b)} e^t M_{a+b-2t}` for two
//!   factors with the same twist (the iterate of `M_n M_m = M_{n+m} + e M_{n-1} M_{m-1}`);
//! * a degree-lowering rule for `M_k`, `k >= p`: the Frobenius rule
//!   `M_k = M_{k-p} M_1^{[1]} - e^p M_{k-2p}` (any `g`), or for `g = 1`
//!   `M_k = M_{k-(p-1)} + e M_{k-(p+1)} - e M_{k-2p}`.
//!
//! Here `e = det` and everything twisted by `[i]` has `e` replaced by `e^{p^i}`.

pub mod identities;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::field::PrimePower;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum K0Error {
    #[error("context mismatch: {0} vs {1}")]
    ContextMismatch(PrimePower, PrimePower),
    #[error("label out of range: m = {m}, ks = {ks:?} for {pp}")]
    LabelOutOfRange { pp: PrimePower, m: i64, ks: Vec<i64> },
    #[error("the reduction rule set {0:?} requires g = 1")]
    RulesNeedPrimeField(RuleSet),
    #[error("term has {got} degrees, expected g = {expected}")]
    WrongLength { got: usize, expected: usize },
}

/// A standard-form basis element `det^m ⊗ ⊗ M_{ks[i]}^{[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisLabel {
    pub m: u64,
    pub ks: Vec<u32>,
}

impl BasisLabel {
    pub fn new(pp: PrimePower, m: i64, ks: &[i64]) -> Result<Self, K0Error> {
        let bad = || K0Error::LabelOutOfRange { pp, m, ks: ks.to_vec() };
        if ks.len() != pp.g() as usize {
            return Err(K0Error::WrongLength { got: ks.len(), expected: pp.g() as usize });
        }
        if m < 0 || m as u64 >= (pp.q() - 1).max(1) {
            return Err(bad());
        }
        if ks.iter().any(|k| *k < 0 || *k as u64 >= pp.p()) {
            return Err(bad());
        }
        Ok(BasisLabel { m: m as u64, ks: ks.iter().map(|k| *k as u32).collect() })
    }

    pub fn trivial(pp: PrimePower) -> Self {
        BasisLabel { m: 0, ks: vec![0; pp.g() as usize] }
    }

    pub fn dim(&self) -> u64 {
        self.ks.iter().map(|k| *k as u64 + 1).product()
    }

    /// The label as a raw monomial with coefficient 1.
    pub fn to_term(&self) -> RawTerm {
        RawTerm::from_ks(1, self.m as i64, &self.ks.iter().map(|k| *k as i64).collect::<Vec<_>>())
    }
}

/// `coeff · e^m · ∏ M_k^{[twist]}` with unrestricted integers. Several factors
/// may share a twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTerm {
    pub coeff: BigInt,
    pub m: i64,
    pub factors: Vec<(i64, u32)>,
}

impl RawTerm {
    pub fn new(coeff: impl Into<BigInt>, m: i64, factors: Vec<(i64, u32)>) -> Self {
        RawTerm { coeff: coeff.into(), m, factors }
    }

    /// One factor per twist, `ks[i]` at twist `i`.
    pub fn from_ks(coeff: impl Into<BigInt>, m: i64, ks: &[i64]) -> Self {
        let factors = ks.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
        RawTerm::new(coeff, m, factors)
    }

    /// `M_k^{[twist]}`.
    pub fn sym(k: i64, twist: u32) -> Self {
        RawTerm::new(1, 0, vec![(k, twist)])
    }

    /// Virtual dimension, using the reflection rule for negative degrees.
    pub fn dim(&self) -> BigInt {
        self.factors.iter().fold(self.coeff.clone(), |acc, (k, _)| acc * BigInt::from(k + 1))
    }

    pub fn negated(mut self) -> Self {
        self.coeff = -self.coeff;
        self
    }
}

/// An element of `K₀(G)` in standard form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VirtualRep {
    pp: PrimePower,
    terms: BTreeMap<BasisLabel, BigInt>,
}

impl VirtualRep {
    pub fn zero(pp: PrimePower) -> Self {
        VirtualRep { pp, terms: BTreeMap::new() }
    }

    pub fn from_label(pp: PrimePower, label: BasisLabel, coeff: impl Into<BigInt>) -> Self {
        let mut v = Self::zero(pp);
        v.add_term(label, coeff.into());
        v
    }

    /// The unit `M_0` (trivial label).
    pub fn one(pp: PrimePower) -> Self {
        Self::from_label(pp, BasisLabel::trivial(pp), 1)
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn add_term(&mut self, label: BasisLabel, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(label.clone()).or_insert_with(BigInt::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&label);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, label: &BasisLabel) -> BigInt {
        self.terms.get(label).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ coeff · ∏ (k_i + 1)`.
    pub fn dim(&self) -> BigInt {
        self.terms.iter().map(|(l, c)| c * BigInt::from(l.dim())).sum()
    }

    fn check(&self, other: &Self) -> Result<(), K0Error> {
        if self.pp != other.pp {
            Err(K0Error::ContextMismatch(self.pp, other.pp))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, K0Error> {
        self.check(other)?;
        let mut out = self.clone();
        for (l, c) in &other.terms {
            out.add_term(l.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, K0Error> {
        self.check(other)?;
        self.checked_add(&other.scaled(&BigInt::from(-1)))
    }

    pub fn scaled(&self, c: &BigInt) -> Self {
        let mut out = Self::zero(self.pp);
        for (l, a) in &self.terms {
            out.add_term(l.clone(), a * c);
        }
        out
    }

    /// The `n`-th Frobenius twist: `(m; k_0..k_{g-1})` goes to
    /// `(m p^n mod (q-1); k'_{(i+n) mod g} = k_i)`.
    pub fn frobenius_twist(&self, n: i64) -> Self {
        let pp = self.pp;
        let g = pp.g() as usize;
        let shift = pp.twist(n) as usize;
        let q1 = pp.q() - 1;
        let pn = pp.p_pow_mod_q1(n);
        let mut out = Self::zero(pp);
        for (l, c) in &self.terms {
            let mut ks = vec![0; g];
            for (i, k) in l.ks.iter().enumerate() {
                ks[(i + shift) % g] = *k;
            }
            let m = if q1 <= 1 { 0 } else { l.m * pn % q1 };
            out.add_term(BasisLabel { m, ks }, c.clone());
        }
        out
    }

    /// Back to raw terms, e.g. for the character oracle.
    pub fn to_terms(&self) -> Vec<RawTerm> {
        self.terms
            .iter()
            .map(|(l, c)| {
                let mut t = l.to_term();
                t.coeff = c.clone();
                t
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("VirtualRep serializes")
    }
}

struct Coeff<'a>(&'a BigInt);

impl Serialize for Coeff<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct TermJson<'a>(&'a BasisLabel, &'a BigInt);

impl Serialize for TermJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("coeff", &Coeff(self.1))?;
        map.serialize_entry("m", &self.0.m)?;
        map.serialize_entry("ks", &self.0.ks)?;
        map.end()
    }
}

struct TermsJson<'a>(&'a BTreeMap<BasisLabel, BigInt>);

impl Serialize for TermsJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for (l, c) in self.0 {
            seq.serialize_element(&TermJson(l, c))?;
        }
        seq.end()
    }
}

/// `{"p", "g", "terms": [{"coeff", "m", "ks"}]}`, terms sorted by `(m, ks)`.
impl Serialize for VirtualRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("p", &self.pp.p())?;
        map.serialize_entry("g", &self.pp.g())?;
        map.serialize_entry("terms", &TermsJson(&self.terms))?;
        map.end()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.m {
            0 => {}
            1 => parts.push("e".to_string()),
            m => parts.push(format!("e^{m}")),
        }
        for (i, k) in self.ks.iter().enumerate() {
            if *k == 0 {
                continue;
            }
            parts.push(if i == 0 { format!("M{k}") } else { format!("M{k}^[{i}]") });
        }
        if parts.is_empty() || parts.len() == 1 && self.m != 0 {
            parts.push("M0".to_string());
        }
        write!(f, "{}", parts.join("·"))
    }
}

impl fmt::Display for VirtualRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (l, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Which degree-lowering rule the rewriter uses for `M_k`, `k >= p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleSet {
    /// Reflection, Frobenius rule, product rule; valid for every `g`.
    DeltaPhiPi,
    /// Reflection, the `q ± 1` rule, product rule; only for `g = 1`.
    DeltaSigmaPi,
}

/// The rewriting engine for one `q`. Caches the standard forms of `M_k`.
pub struct K0Ring {
    pp: PrimePower,
    rules: RuleSet,
    /// Standard form of `M_k` (twist 0) for `k >= p`.
    memo: RwLock<HashMap<i64, VirtualRep>>,
}

impl fmt::Debug for K0Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("K0Ring").field("pp", &self.pp).field("rules", &self.rules).finish()
    }
}

type Acc = BTreeMap<BasisLabel, BigInt>;

impl K0Ring {
    pub fn new(pp: PrimePower) -> Self {
        K0Ring { pp, rules: RuleSet::DeltaPhiPi, memo: RwLock::new(HashMap::new()) }
    }

    pub fn with_rules(pp: PrimePower, rules: RuleSet) -> Result<Self, K0Error> {
        if rules == RuleSet::DeltaSigmaPi && pp.g() != 1 {
            return Err(K0Error::RulesNeedPrimeField(rules));
        }
        Ok(K0Ring { pp, rules, memo: RwLock::new(HashMap::new()) })
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn rules(&self) -> RuleSet {
        self.rules
    }

    fn det_weight(&self, twist: u32) -> i64 {
        self.pp.p_pow_mod_q1(twist as i64) as i64
    }

    fn reduce_m(&self, m: i64) -> i64 {
        m.rem_euclid((self.pp.q() - 1).max(1) as i64)
    }

    /// Standard form of `M_k^{[twist]}`.
    pub fn sym(&self, k: i64, twist: i64) -> VirtualRep {
        let twist = self.pp.twist(twist);
        if (0..self.pp.p() as i64).contains(&k) || k < 0 {
            return self.normalize(&[RawTerm::sym(k, twist)]);
        }
        let base = self.sym_untwisted(k);
        if twist == 0 {
            base
        } else {
            base.frobenius_twist(twist as i64)
        }
    }

    fn sym_untwisted(&self, k: i64) -> VirtualRep {
        if let Some(v) = self.memo.read().unwrap_or_else(|e| e.into_inner()).get(&k) {
            return v.clone();
        }
        let p = self.pp.p() as i64;
        let raw = match self.rules {
            RuleSet::DeltaPhiPi => vec![
                RawTerm::new(1, 0, vec![(k - p, 0), (1, self.pp.twist(1))]),
                RawTerm::new(-1, p, vec![(k - 2 * p, 0)]),
            ],
            RuleSet::DeltaSigmaPi => vec![
                RawTerm::new(1, 0, vec![(k - (p - 1), 0)]),
                RawTerm::new(1, 1, vec![(k - (p + 1), 0)]),
                RawTerm::new(-1, 1, vec![(k - 2 * p, 0)]),
            ],
        };
        let v = self.normalize(&raw);
        self.memo
            .write()
            .unwrap_or_else(|e| e.into_inner())
            .entry(k)
            .or_insert_with(|| v.clone());
        v
    }

    /// Standard form of a sum of raw monomials.
    pub fn normalize(&self, terms: &[RawTerm]) -> VirtualRep {
        let mut acc = Acc::new();
        for t in terms {
            let factors = t.factors.iter().map(|(k, i)| (*k, self.pp.twist(*i as i64))).collect();
            self.reduce_into(&mut acc, t.coeff.clone(), self.reduce_m(t.m), factors);
        }
        acc.retain(|_, c| !c.is_zero());
        VirtualRep { pp: self.pp, terms: acc }
    }

    fn reduce_into(&self, acc: &mut Acc, mut coeff: BigInt, mut m: i64, mut factors: Vec<(i64, u32)>) {
        if coeff.is_zero() {
            return;
        }
        for f in factors.iter_mut() {
            match f.0 {
                -1 => return,
                k if k <= -2 => {
                    coeff = -coeff;
                    m = self.reduce_m(m + (1 + k) * self.det_weight(f.1));
                    f.0 = -k - 2;
                }
                _ => {}
            }
        }
        factors.retain(|f| f.0 != 0);
        factors.sort_by_key(|f| (f.1, f.0));

        if let Some(pos) = factors.windows(2).position(|w| w[0].1 == w[1].1) {
            let (a, i) = factors[pos];
            let (b, _) = factors[pos + 1];
            let rest: Vec<(i64, u32)> =
                factors.iter().enumerate().filter(|(n, _)| *n != pos && *n != pos + 1).map(|(_, f)| *f).collect();
            let w = self.det_weight(i);
            for t in 0..=a.min(b) {
                let mut next = rest.clone();
                next.push((a + b - 2 * t, i));
                self.reduce_into(acc, coeff.clone(), self.reduce_m(m + t * w), next);
            }
            return;
        }

        let p = self.pp.p() as i64;
        if let Some(pos) = factors.iter().position(|f| f.0 >= p) {
            let (k, i) = factors.remove(pos);
            let expansion = self.sym(k, i as i64);
            for (label, c) in expansion.terms() {
                let mut next = factors.clone();
                next.extend(label.ks.iter().enumerate().filter(|(_, k)| **k != 0).map(|(j, k)| (*k as i64, j as u32)));
                self.reduce_into(acc, &coeff * c, self.reduce_m(m + label.m as i64), next);
            }
            return;
        }

        let mut ks = vec![0u32; self.pp.g() as usize];
        for (k, i) in factors {
            ks[i as usize] = k as u32;
        }
        let label = BasisLabel { m: m as u64, ks };
        *acc.entry(label).or_insert_with(BigInt::zero) += coeff;
    }

    /// Ring product in standard form.
    pub fn mul(&self, a: &VirtualRep, b: &VirtualRep) -> Result<VirtualRep, K0Error> {
        if a.pp != self.pp {
            return Err(K0Error::ContextMismatch(self.pp, a.pp));
        }
        a.check(b)?;
        let mut acc = Acc::new();
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                let mut factors = Vec::new();
                for (i, (ka, kb)) in la.ks.iter().zip(&lb.ks).enumerate() {
                    factors.push((*ka as i64, i as u32));
                    factors.push((*kb as i64, i as u32));
                }
                self.reduce_into(&mut acc, ca * cb, self.reduce_m((la.m + lb.m) as i64), factors);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(VirtualRep { pp: self.pp, terms: acc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pp(p: u64, g: u32) -> PrimePower {
        PrimePower::new(p, g).unwrap()
    }

    fn label(pp: PrimePower, m: i64, ks: &[i64]) -> BasisLabel {
        BasisLabel::new(pp, m, ks).unwrap()
    }

    #[test]
    fn m_p_splits_into_two_factors() {
        let pp = pp(3, 2);
        let ring = K0Ring::new(pp);
        let mut expect = VirtualRep::from_label(pp, label(pp, 0, &[0, 1]), 1);
        expect.add_term(label(pp, 1, &[1, 0]), BigInt::one());
        assert_eq!(ring.sym(3, 0), expect);
    }

    #[test]
    fn negative_degrees() {
        for (p, g) in [(3, 1), (3, 2), (5, 1), (2, 2)] {
            let pp = pp(p, g);
            let ring = K0Ring::new(pp);
            assert!(ring.sym(-1, 0).is_zero());
            let q = pp.q() as i64;
            let expect = VirtualRep::from_label(pp, label(pp, (q - 2).rem_euclid((q - 1).max(1)), &vec![0; g as usize]), -1);
            assert_eq!(ring.sym(-2, 0), expect);
            assert_eq!(ring.sym(-2, 0).dim(), BigInt::from(-1));
        }
    }

    #[test]
    fn product_of_two_m1() {
        let pp = pp(3, 1);
        let ring = K0Ring::new(pp);
        let v = ring.normalize(&[RawTerm::new(1, 0, vec![(1, 0), (1, 0)])]);
        let mut expect = VirtualRep::from_label(pp, label(pp, 0, &[2]), 1);
        expect.add_term(label(pp, 1, &[0]), BigInt::one());
        assert_eq!(v, expect);
    }

    #[test]
    fn dims_of_sym() {
        for (p, g) in [(3, 1), (3, 2), (5, 2), (2, 3), (3, 3)] {
            let ring = K0Ring::new(pp(p, g));
            for k in 0..=30 {
                assert_eq!(ring.sym(k, 0).dim(), BigInt::from(k + 1), "p={p} g={g} k={k}");
            }
        }
    }

    #[test]
    fn in_range_term_is_fixed() {
        let pp = pp(5, 2);
        let ring = K0Ring::new(pp);
        let t = RawTerm::from_ks(1, 3, &[4, 2]);
        let v = ring.normalize(&[t]);
        assert_eq!(v, VirtualRep::from_label(pp, label(pp, 3, &[4, 2]), 1));
        let w = ring.normalize(&v.to_terms());
        assert_eq!(v, w);
    }

    #[test]
    fn twist_examples() {
        let pp = pp(3, 2);
        let v = VirtualRep::from_label(pp, label(pp, 2, &[1, 2]), 5);
        assert_eq!(v.frobenius_twist(0), v);
        assert_eq!(v.frobenius_twist(2), v);
        assert_eq!(v.frobenius_twist(1), VirtualRep::from_label(pp, label(pp, 6, &[2, 1]), 5));
        assert_eq!(v.frobenius_twist(-1), v.frobenius_twist(1));
    }

    #[test]
    fn sigma_rules_need_g_one() {
        assert!(K0Ring::with_rules(pp(3, 2), RuleSet::DeltaSigmaPi).is_err());
        assert!(K0Ring::with_rules(pp(3, 1), RuleSet::DeltaSigmaPi).is_ok());
    }

    #[test]
    fn json_shape() {
        let pp = pp(3, 2);
        let ring = K0Ring::new(pp);
        let s = serde_json::to_string(&ring.sym(3, 0)).unwrap();
        assert_eq!(
            s,
            r#"{"p":3,"g":2,"terms":[{"coeff":1,"m":0,"ks":[0,1]},{"coeff":1,"m":1,"ks":[1,0]}]}"#
        );
        let big = VirtualRep::from_label(pp, BasisLabel::trivial(pp), BigInt::from(1) << 80);
        assert!(serde_json::to_string(&big).unwrap().contains("\"1208925819614629174706176\""));
    }

    #[test]
    fn display() {
        let ring = K0Ring::new(pp(3, 2));
        assert_eq!(ring.sym(3, 0).to_string(), "M1^[1] + e·M1");
        assert_eq!(ring.sym(-2, 0).to_string(), "-e^7·M0");
        assert_eq!(VirtualRep::zero(pp(3, 2)).to_string(), "0");
    }

    #[test]
    fn mul_with_unit_and_context_check() {
        let pp3 = pp(3, 1);
        let ring = K0Ring::new(pp3);
        let a = ring.sym(2, 0);
        assert_eq!(ring.mul(&a, &VirtualRep::one(pp3)).unwrap(), a);
        let other = VirtualRep::one(pp(5, 1));
        assert!(matches!(ring.mul(&a, &other), Err(K0Error::ContextMismatch(..))));
    }
}
