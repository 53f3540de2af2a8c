//! Exact arithmetic in `ℤ[ζ_M] = ℤ[x]/(Φ_M(x))`.
//!
//! Elements are stored as canonical remainders modulo `Φ_M` with big-integer
//! coefficients, so equality of values is equality of coefficient vectors.
//! Working modulo `x^M - 1` instead would not decide equality in `ℤ[ζ_M]`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("operands live in different rings: ζ_{0} vs ζ_{1}")]
    MixedModulus(u64, u64),
}

/// `Φ_M` with its sparse tail, shared by all elements of `ℤ[ζ_M]`.
#[derive(Debug)]
pub struct CycloRing {
    modulus: u64,
    degree: usize,
    /// Dense coefficients of `Φ_M`, low to high, leading 1 included.
    phi: Vec<i64>,
    /// Nonzero `(i, c_i)` for `i < degree`.
    tail: Vec<(usize, i64)>,
}

fn ring_cache() -> &'static Mutex<HashMap<u64, Arc<CycloRing>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<CycloRing>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn divisors(m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=m).take_while(|d| d * d <= m).filter(|d| m % d == 0).collect();
    let mut big: Vec<u64> = out.iter().map(|d| m / d).filter(|d| d * d != m).collect();
    big.reverse();
    out.extend(big);
    out
}

/// Exact division of `num` by a monic `den`; panics if the remainder is
/// nonzero or a coefficient leaves the `i64` range.
fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = den.len() - 1;
    let mut r = num.to_vec();
    let mut quot = vec![0i64; r.len() - dn];
    let tail: Vec<(usize, i64)> =
        den[..dn].iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect();
    for d in (dn..r.len()).rev() {
        let c = r[d];
        if c == 0 {
            continue;
        }
        quot[d - dn] = c;
        r[d] = 0;
        for &(i, ci) in &tail {
            let slot = &mut r[d - dn + i];
            *slot = slot
                .checked_sub(c.checked_mul(ci).expect("cyclotomic coefficient overflow"))
                .expect("cyclotomic coefficient overflow");
        }
    }
    assert!(r.iter().all(|c| *c == 0), "inexact cyclotomic division");
    quot
}

fn phi_dense(m: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(v) = memo.get(&m) {
        return v.clone();
    }
    let mut poly = vec![0i64; m as usize + 1];
    poly[0] = -1;
    poly[m as usize] = 1;
    for d in divisors(m) {
        if d < m {
            let phi_d = phi_dense(d, memo);
            poly = exact_div(&poly, &phi_d);
        }
    }
    memo.insert(m, poly.clone());
    poly
}

impl CycloRing {
    /// The shared ring `ℤ[ζ_M]`.
    pub fn get(modulus: u64) -> Arc<CycloRing> {
        assert!(modulus >= 1, "cyclotomic modulus must be positive");
        let mut cache = ring_cache().lock().unwrap_or_else(|e| e.into_inner());
        if let Some(r) = cache.get(&modulus) {
            return r.clone();
        }
        let phi = phi_dense(modulus, &mut HashMap::new());
        let degree = phi.len() - 1;
        let tail =
            phi[..degree].iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect();
        let ring = Arc::new(CycloRing { modulus, degree, phi, tail });
        cache.insert(modulus, ring.clone());
        ring
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `φ(M)`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    fn reduce_i64(&self, mut v: Vec<i64>) -> Option<Vec<i64>> {
        let n = self.degree;
        for d in (n..v.len()).rev() {
            let c = v[d];
            if c == 0 {
                continue;
            }
            v[d] = 0;
            for &(i, ci) in &self.tail {
                let slot = &mut v[d - n + i];
                *slot = slot.checked_sub(c.checked_mul(ci)?)?;
            }
        }
        v.resize(n, 0);
        Some(v)
    }

    fn reduce_big(&self, mut v: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.degree;
        for d in (n..v.len()).rev() {
            if v[d].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[d]);
            for &(i, ci) in &self.tail {
                v[d - n + i] -= &c * ci;
            }
        }
        v.resize(n, BigInt::zero());
        v
    }
}

/// `Φ_M` as a dense integer polynomial, low degree first.
pub fn cyclotomic_poly(modulus: u64) -> Vec<BigInt> {
    CycloRing::get(modulus).phi.iter().map(|c| BigInt::from(*c)).collect()
}

/// An element of `ℤ[ζ_M]`.
#[derive(Clone)]
pub struct CycloInt {
    ring: Arc<CycloRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for CycloInt {
    fn eq(&self, other: &Self) -> bool {
        self.ring.modulus == other.ring.modulus && self.coeffs == other.coeffs
    }
}

impl Eq for CycloInt {}

impl std::hash::Hash for CycloInt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ring.modulus.hash(state);
        self.coeffs.hash(state);
    }
}

impl CycloInt {
    pub fn zero(modulus: u64) -> Self {
        let ring = CycloRing::get(modulus);
        let coeffs = vec![BigInt::zero(); ring.degree];
        CycloInt { ring, coeffs }
    }

    pub fn from_int(modulus: u64, n: impl Into<BigInt>) -> Self {
        let mut z = Self::zero(modulus);
        if z.ring.degree > 0 {
            z.coeffs[0] = n.into();
        }
        z
    }

    pub fn one(modulus: u64) -> Self {
        Self::from_int(modulus, 1)
    }

    /// `ζ^e`, with `e` reduced modulo `M`.
    pub fn zeta_pow(modulus: u64, e: i64) -> Self {
        Self::from_exponents(modulus, [(e, 1)])
    }

    /// `Σ c·ζ^e` over the given `(e, c)` pairs.
    pub fn from_exponents(modulus: u64, terms: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let ring = CycloRing::get(modulus);
        let m = modulus as i64;
        let mut dense = vec![0i64; modulus as usize];
        let mut exact = true;
        let mut overflow: Vec<(usize, i64)> = Vec::new();
        for (e, c) in terms {
            let i = e.rem_euclid(m) as usize;
            match dense[i].checked_add(c) {
                Some(v) => dense[i] = v,
                None => {
                    exact = false;
                    overflow.push((i, c));
                }
            }
        }
        if exact {
            if let Some(v) = ring.reduce_i64(dense.clone()) {
                let coeffs = v.into_iter().map(BigInt::from).collect();
                return CycloInt { ring, coeffs };
            }
        }
        let mut big: Vec<BigInt> = dense.into_iter().map(BigInt::from).collect();
        for (i, c) in overflow {
            big[i] += c;
        }
        let coeffs = ring.reduce_big(big);
        CycloInt { ring, coeffs }
    }

    /// Builds an element from coefficients of `1, x, x², ...` of any length.
    pub fn from_poly(modulus: u64, poly: Vec<BigInt>) -> Self {
        let ring = CycloRing::get(modulus);
        let mut poly = poly;
        if poly.len() < ring.degree {
            poly.resize(ring.degree, BigInt::zero());
        }
        let coeffs = ring.reduce_big(poly);
        CycloInt { ring, coeffs }
    }

    pub fn modulus(&self) -> u64 {
        self.ring.modulus
    }

    /// Canonical coefficients (length `φ(M)`).
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// The integer value if the element lies in `ℤ`.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.coeffs.iter().skip(1).all(Zero::is_zero) {
            Some(self.coeffs.first().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), CycloError> {
        if self.ring.modulus != other.ring.modulus {
            Err(CycloError::MixedModulus(self.ring.modulus, other.ring.modulus))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloInt { ring: self.ring.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloInt { ring: self.ring.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check(other)?;
        let n = self.ring.degree;
        let mut prod = vec![BigInt::zero(); (2 * n).saturating_sub(1).max(n)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let coeffs = self.ring.reduce_big(prod);
        Ok(CycloInt { ring: self.ring.clone(), coeffs })
    }

    /// `c·self` for an integer `c`.
    pub fn scale(&self, c: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        CycloInt { ring: self.ring.clone(), coeffs }
    }

    /// `self + c·ζ^e` without a full multiplication.
    pub fn add_scaled(&mut self, other: &Self, c: &BigInt) -> Result<(), CycloError> {
        self.check(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * c;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "ζ".to_string(),
                (1, false) => format!("{mag}ζ"),
                (_, true) => format!("ζ^{i}"),
                (_, false) => format!("{mag}ζ^{i}"),
            };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &CycloInt {
    type Output = CycloInt;
    fn add(self, rhs: &CycloInt) -> CycloInt {
        self.checked_add(rhs).expect("mixed cyclotomic moduli")
    }
}

impl Sub for &CycloInt {
    type Output = CycloInt;
    fn sub(self, rhs: &CycloInt) -> CycloInt {
        self.checked_sub(rhs).expect("mixed cyclotomic moduli")
    }
}

impl Mul for &CycloInt {
    type Output = CycloInt;
    fn mul(self, rhs: &CycloInt) -> CycloInt {
        self.checked_mul(rhs).expect("mixed cyclotomic moduli")
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;
    fn neg(self) -> CycloInt {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        CycloInt { ring: self.ring.clone(), coeffs }
    }
}

/// Small-integer view of the coefficients, for serialization.
pub fn coeffs_as_i64(x: &CycloInt) -> Option<Vec<i64>> {
    x.coeffs.iter().map(ToPrimitive::to_i64).collect()
}
