//! Brauer characters on the regular (semisimple) classes of `GL₂(F_q)`.
//!
//! The Teichmüller lift is pinned as `χ(γ₂^e) = ζ^e` with `ζ` a primitive
//! `M`-th root of unity, so a class is described by the discrete logs of its
//! two eigenvalues and every character value is a sum of powers of `ζ`.
//!
//! Two routes decide equality of virtual characters:
//!
//! * [`CharVector`]: the literal table of values, one [`CycloInt`] per class;
//! * [`TorusImage`]: the formal character pushed to the group rings of the
//!   split torus `(ℤ/(q-1))²` and the non-split torus `ℤ/M`. A class function
//!   on regular elements is determined by its restriction to the two tori, and
//!   a function on a finite abelian group determines its Fourier coefficients,
//!   so equal images is the same as equal values on every regular class.
//!   This route needs no cyclotomic arithmetic and is what [`char_equal`] uses.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclo::{coeffs_as_i64, CycloInt};
use crate::field::{FieldCtx, Mat2, PrimePower};
use crate::k0::{RawTerm, VirtualRep};

/// A regular class, by the discrete logs (base `γ₂`) of its eigenvalues.
///
/// `Central{e}` is `diag(a, a)`, `Split{ea, eb}` is `diag(a, b)` with
/// `ea < eb`, and `NonSplit{d}` is `ι(c)` with `d = min(dlog c, dlog c^q)`.
/// The logs of `F_q^×` elements are multiples of `q + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ConjClass {
    Central { e: u64 },
    Split { ea: u64, eb: u64 },
    NonSplit { d: u64 },
}

impl ConjClass {
    /// Logs of the two eigenvalues in `F_{q^2}^×`.
    pub fn eigen_exponents(&self, pp: PrimePower) -> (u64, u64) {
        match *self {
            ConjClass::Central { e } => (e, e),
            ConjClass::Split { ea, eb } => (ea, eb),
            ConjClass::NonSplit { d } => (d, d * pp.q() % pp.unit_order()),
        }
    }

    pub fn representative(&self, f: &FieldCtx) -> Mat2 {
        match *self {
            ConjClass::Central { e } => {
                let a = f.gen_pow(e as i64);
                Mat2::diag(a, a)
            }
            ConjClass::Split { ea, eb } => Mat2::diag(f.gen_pow(ea as i64), f.gen_pow(eb as i64)),
            ConjClass::NonSplit { d } => f.embed_iota(f.gen_pow(d as i64)).expect("nonzero"),
        }
    }

    /// Class of a semisimple element with the given eigenvalue logs.
    pub fn from_eigen_exponents(pp: PrimePower, u: u64, v: u64) -> ConjClass {
        let (m, q) = (pp.unit_order(), pp.q());
        let (u, v) = (u % m, v % m);
        if u % (q + 1) != 0 {
            debug_assert_eq!(v, u * q % m);
            return ConjClass::NonSplit { d: u.min(v) };
        }
        match u.cmp(&v) {
            std::cmp::Ordering::Equal => ConjClass::Central { e: u },
            std::cmp::Ordering::Less => ConjClass::Split { ea: u, eb: v },
            std::cmp::Ordering::Greater => ConjClass::Split { ea: v, eb: u },
        }
    }
}

/// All regular classes: central, then split, then non-split, each sorted.
pub fn regular_classes(pp: PrimePower) -> Vec<ConjClass> {
    let (q, m) = (pp.q(), pp.unit_order());
    let fq: Vec<u64> = (0..q - 1).map(|x| x * (q + 1)).collect();
    let mut out: Vec<ConjClass> = fq.iter().map(|&e| ConjClass::Central { e }).collect();
    for (i, &ea) in fq.iter().enumerate() {
        for &eb in &fq[i + 1..] {
            out.push(ConjClass::Split { ea, eb });
        }
    }
    for d in 0..m {
        if d % (q + 1) != 0 && d < d * q % m {
            out.push(ConjClass::NonSplit { d });
        }
    }
    out
}

/// `(exponent, multiplicity)` pairs of the character of `M_k` at eigenvalue
/// logs `(u, v)`: `Σ_j ζ^{u(k-j)+vj}` for `k >= 0`, zero for `k = -1`, and
/// the reflected sum `-ζ^{(1+k)(u+v)} S_{-k-2}` below that.
pub fn sym_exponents(k: i64, u: i64, v: i64) -> Vec<(i64, i64)> {
    match k {
        -1 => Vec::new(),
        k if k >= 0 => (0..=k).map(|j| (u * (k - j) + v * j, 1)).collect(),
        k => {
            let shift = (1 + k) * (u + v);
            sym_exponents(-k - 2, u, v).into_iter().map(|(e, c)| (e + shift, -c)).collect()
        }
    }
}

/// Sparse group-ring element of `ℤ/n`.
fn convolve(acc: &BTreeMap<u64, i64>, factor: &[(i64, i64)], n: u64) -> BTreeMap<u64, i64> {
    let mut out = BTreeMap::new();
    for (&e, &c) in acc {
        for &(f, d) in factor {
            let key = (e as i64 + f).rem_euclid(n as i64) as u64;
            let slot = out.entry(key).or_insert(0i64);
            *slot = slot.checked_add(c.checked_mul(d).expect("weight overflow")).expect("weight overflow");
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Exponent multiset of one monomial (coefficient ignored) at eigenvalue
/// logs `(u, v)` modulo `n`.
fn term_exponents(pp: PrimePower, t: &RawTerm, u: u64, v: u64, n: u64) -> BTreeMap<u64, i64> {
    let ni = n as i64;
    let mut acc = BTreeMap::new();
    let det = (t.m.rem_euclid(ni) as i128 * ((u + v) % n) as i128).rem_euclid(ni as i128) as u64;
    acc.insert(det, 1i64);
    for &(k, i) in &t.factors {
        let pi = pow_mod(pp.p(), i as u64, n);
        let (ut, vt) = ((u % n) * pi % n, (v % n) * pi % n);
        let ex = sym_exponents(k, ut as i64, vt as i64);
        acc = convolve(&acc, &ex, n);
        if acc.is_empty() {
            break;
        }
    }
    acc
}

fn pow_mod(b: u64, e: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    let mut base = b % n;
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % n;
        }
        base = base * base % n;
        e >>= 1;
    }
    acc
}

/// `χ(M_k)` at a class.
pub fn char_sym(pp: PrimePower, k: i64, class: &ConjClass) -> CycloInt {
    char_term(pp, &RawTerm::sym(k, 0), class)
}

/// Value of `coeff · e^m · ∏ M_k^{[i]}` at a class.
pub fn char_term(pp: PrimePower, t: &RawTerm, class: &ConjClass) -> CycloInt {
    let m = pp.unit_order();
    let (u, v) = class.eigen_exponents(pp);
    let ex = term_exponents(pp, t, u, v, m);
    CycloInt::from_exponents(m, ex.into_iter().map(|(e, c)| (e as i64, c))).scale(&t.coeff)
}

/// Value of a sum of monomials at a class.
pub fn char_terms_at(pp: PrimePower, terms: &[RawTerm], class: &ConjClass) -> CycloInt {
    let m = pp.unit_order();
    let (u, v) = class.eigen_exponents(pp);
    let mut out = CycloInt::zero(m);
    for t in terms {
        let ex = term_exponents(pp, t, u, v, m);
        let val = CycloInt::from_exponents(m, ex.into_iter().map(|(e, c)| (e as i64, c)));
        out.add_scaled(&val, &t.coeff).expect("same modulus");
    }
    out
}

/// The full table of values over [`regular_classes`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharVector {
    pub classes: Vec<ConjClass>,
    pub values: Vec<CycloInt>,
}

impl CharVector {
    pub fn of_terms(pp: PrimePower, terms: &[RawTerm]) -> Self {
        let classes = regular_classes(pp);
        let values = classes.par_iter().map(|c| char_terms_at(pp, terms, c)).collect();
        CharVector { classes, values }
    }

    pub fn value(&self, class: &ConjClass) -> Option<&CycloInt> {
        self.classes.iter().position(|c| c == class).map(|i| &self.values[i])
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(CycloInt::is_zero)
    }

    /// `[{"class": {...}, "value": [coefficients]}]`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = self
            .classes
            .iter()
            .zip(&self.values)
            .map(|(c, v)| {
                let value = match coeffs_as_i64(v) {
                    Some(cs) => serde_json::json!(cs),
                    None => serde_json::json!(v.coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>()),
                };
                serde_json::json!({ "class": c, "value": value })
            })
            .collect();
        serde_json::Value::Array(rows)
    }
}

pub fn char_vrep(v: &VirtualRep) -> CharVector {
    CharVector::of_terms(v.prime_power(), &v.to_terms())
}

/// Image of a virtual character in `ℤ[(ℤ/(q-1))²] × ℤ[ℤ/M]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusImage {
    split: BTreeMap<(u64, u64), BigInt>,
    nonsplit: BTreeMap<u64, BigInt>,
}

impl TorusImage {
    pub fn of_terms(pp: PrimePower, terms: &[RawTerm]) -> Self {
        let (q, m) = (pp.q(), pp.unit_order());
        let q1 = q - 1;
        let mut split: BTreeMap<(u64, u64), BigInt> = BTreeMap::new();
        let mut nonsplit: BTreeMap<u64, BigInt> = BTreeMap::new();
        // Weights a^s b^t: on the split torus only (s, t) mod (q-1) matters;
        // at ι(c) they become ζ^{d(s + qt)}. Weights are read off with
        // (u, v) = (1, 0) and (0, 1) in suitably large moduli.
        for t in terms {
            for (key, c) in formal_character(pp, t) {
                let (s, tt) = key;
                let ks = (s.rem_euclid(q1 as i64) as u64, tt.rem_euclid(q1 as i64) as u64);
                *split.entry(ks).or_insert_with(BigInt::zero) += &t.coeff * c;
                let kn = (s as i128 + q as i128 * tt as i128).rem_euclid(m as i128) as u64;
                *nonsplit.entry(kn).or_insert_with(BigInt::zero) += &t.coeff * c;
            }
        }
        split.retain(|_, c| !c.is_zero());
        nonsplit.retain(|_, c| !c.is_zero());
        TorusImage { split, nonsplit }
    }

    pub fn of_vrep(v: &VirtualRep) -> Self {
        Self::of_terms(v.prime_power(), &v.to_terms())
    }

    pub fn is_zero(&self) -> bool {
        self.split.is_empty() && self.nonsplit.is_empty()
    }
}

/// Formal character of one monomial: weight `(s, t)` for `a^s b^t`.
fn formal_character(pp: PrimePower, t: &RawTerm) -> BTreeMap<(i64, i64), i64> {
    let mut acc = BTreeMap::new();
    acc.insert((t.m, t.m), 1i64);
    for &(k, i) in &t.factors {
        let pi = pp.p_pow(i % pp.g()) as i64;
        let mut next = BTreeMap::new();
        // two-variable version of sym_exponents
        let weights: Vec<((i64, i64), i64)> = match k {
            -1 => Vec::new(),
            k if k >= 0 => (0..=k).map(|j| (((k - j) * pi, j * pi), 1)).collect(),
            k => {
                let kk = -k - 2;
                let sh = (1 + k) * pi;
                (0..=kk).map(|j| (((kk - j) * pi + sh, j * pi + sh), -1)).collect()
            }
        };
        for (&(s, tt), &c) in &acc {
            for &((ds, dt), d) in &weights {
                *next.entry((s + ds, tt + dt)).or_insert(0i64) += c * d;
            }
        }
        next.retain(|_, c| *c != 0);
        acc = next;
    }
    acc
}

/// Either side of a character comparison.
#[derive(Clone, Copy, Debug)]
pub enum Expr<'a> {
    Terms(&'a [RawTerm]),
    Rep(&'a VirtualRep),
}

impl<'a> From<&'a [RawTerm]> for Expr<'a> {
    fn from(t: &'a [RawTerm]) -> Self {
        Expr::Terms(t)
    }
}

impl<'a> From<&'a Vec<RawTerm>> for Expr<'a> {
    fn from(t: &'a Vec<RawTerm>) -> Self {
        Expr::Terms(t)
    }
}

impl<'a> From<&'a VirtualRep> for Expr<'a> {
    fn from(v: &'a VirtualRep) -> Self {
        Expr::Rep(v)
    }
}

impl Expr<'_> {
    pub fn torus_image(&self, pp: PrimePower) -> TorusImage {
        match self {
            Expr::Terms(t) => TorusImage::of_terms(pp, t),
            Expr::Rep(v) => TorusImage::of_vrep(v),
        }
    }

    pub fn char_vector(&self, pp: PrimePower) -> CharVector {
        match self {
            Expr::Terms(t) => CharVector::of_terms(pp, t),
            Expr::Rep(v) => char_vrep(v),
        }
    }
}

/// Whether two virtual characters agree on every regular class.
pub fn char_equal<'a, 'b>(pp: PrimePower, x: impl Into<Expr<'a>>, y: impl Into<Expr<'b>>) -> bool {
    x.into().torus_image(pp) == y.into().torus_image(pp)
}

/// The same decision made class by class with cyclotomic arithmetic.
pub fn char_equal_by_classes<'a, 'b>(pp: PrimePower, x: impl Into<Expr<'a>>, y: impl Into<Expr<'b>>) -> bool {
    x.into().char_vector(pp) == y.into().char_vector(pp)
}
