//! Arithmetic in `F_q` and `F_{q^2}` for `q = p^g`.
//!
//! Both fields live inside a single table-driven context: every nonzero
//! element of `F_{q^2}` is stored as its discrete logarithm with respect to a
//! fixed generator `γ₂`, and addition goes through a Zech-logarithm table.
//! `F_q^×` is the subgroup of logarithms divisible by `q + 1`.
//!
//! The defining polynomials are the lexicographically smallest monic
//! irreducibles: `t^g + c_{g-1} t^{g-1} + ... + c_0` over `F_p`, compared on
//! `(c_{g-1}, ..., c_0)`, and `θ² + bθ + c` over `F_q`, compared on `(b, c)`
//! with `F_q` elements ordered by their integer code. The generator is the
//! element of `F_{q^2}` of multiplicative order `q² - 1` with the smallest
//! integer code.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported `q²`; the log/Zech tables are dense.
const MAX_Q_SQUARED: u64 = 1 << 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the exponent g must be at least 1")]
    ZeroExponent,
    #[error("q^2 = {p}^(2*{g}) exceeds the supported table size 2^24")]
    TooLarge { p: u64, g: u32 },
    #[error("zero is not in the multiplicative group")]
    ZeroElement,
}

/// `q = p^g` together with the cached values `q` and `M = q² - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimePower {
    p: u64,
    g: u32,
    q: u64,
    unit_order: u64,
}

impl PrimePower {
    pub fn new(p: u64, g: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if g == 0 {
            return Err(FieldError::ZeroExponent);
        }
        let q = p
            .checked_pow(g)
            .filter(|q| q.checked_mul(*q).is_some_and(|q2| q2 <= MAX_Q_SQUARED))
            .ok_or(FieldError::TooLarge { p, g })?;
        Ok(PrimePower { p, g, q, unit_order: q * q - 1 })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `M = q² - 1`, the order of `F_{q^2}^×`.
    pub fn unit_order(&self) -> u64 {
        self.unit_order
    }

    /// `p^n` for `0 <= n` (not reduced).
    pub fn p_pow(&self, n: u32) -> u64 {
        self.p.pow(n)
    }

    /// `p^n mod (q - 1)` for any integer `n`, using `p^g ≡ 1`.
    pub fn p_pow_mod_q1(&self, n: i64) -> u64 {
        let n = n.rem_euclid(self.g as i64) as u32;
        let q1 = self.q - 1;
        if q1 == 1 {
            return 0;
        }
        self.p.pow(n) % q1
    }

    /// Reduces a twist index modulo `g`.
    pub fn twist(&self, n: i64) -> u32 {
        n.rem_euclid(self.g as i64) as u32
    }
}

impl fmt::Display for PrimePower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q = {}^{} = {}", self.p, self.g, self.q)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// An element of `F_{q^2}`: the discrete log base `γ₂`, or the zero marker.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(u32::MAX);
    pub const ONE: Elem = Elem(0);

    pub fn is_zero(self) -> bool {
        self == Elem::ZERO
    }

    /// Discrete logarithm base `γ₂`, `None` for zero.
    pub fn log(self) -> Option<u64> {
        (!self.is_zero()).then_some(self.0 as u64)
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(0) => write!(f, "1"),
            Some(e) => write!(f, "γ^{e}"),
        }
    }
}

/// A 2×2 matrix over `F_q` acting on column vectors, so that
/// `(a b; c d)·X = aX + cY` and `(a b; c d)·Y = bX + dY`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl Mat2 {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ONE)
    }

    pub fn diag(a: Elem, d: Elem) -> Self {
        Mat2::new(a, Elem::ZERO, Elem::ZERO, d)
    }

    pub fn det(&self, f: &FieldCtx) -> Elem {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn trace(&self, f: &FieldCtx) -> Elem {
        f.add(self.a, self.d)
    }

    pub fn is_invertible(&self, f: &FieldCtx) -> bool {
        !self.det(f).is_zero()
    }

    pub fn mul(&self, other: &Mat2, f: &FieldCtx) -> Mat2 {
        Mat2 {
            a: f.add(f.mul(self.a, other.a), f.mul(self.b, other.c)),
            b: f.add(f.mul(self.a, other.b), f.mul(self.b, other.d)),
            c: f.add(f.mul(self.c, other.a), f.mul(self.d, other.c)),
            d: f.add(f.mul(self.c, other.b), f.mul(self.d, other.d)),
        }
    }

    pub fn inverse(&self, f: &FieldCtx) -> Option<Mat2> {
        let det = self.det(f);
        let inv = f.inv(det).ok()?;
        Some(Mat2 {
            a: f.mul(self.d, inv),
            b: f.mul(f.neg(self.b), inv),
            c: f.mul(f.neg(self.c), inv),
            d: f.mul(self.a, inv),
        })
    }

    /// Entrywise `x ↦ x^{p^n}`.
    pub fn frobenius(&self, n: i64, f: &FieldCtx) -> Mat2 {
        Mat2 {
            a: f.frobenius(self.a, n),
            b: f.frobenius(self.b, n),
            c: f.frobenius(self.c, n),
            d: f.frobenius(self.d, n),
        }
    }

    /// Applies the matrix to a column vector `(x, y)`.
    pub fn apply(&self, v: (Elem, Elem), f: &FieldCtx) -> (Elem, Elem) {
        (
            f.add(f.mul(self.a, v.0), f.mul(self.b, v.1)),
            f.add(f.mul(self.c, v.0), f.mul(self.d, v.1)),
        )
    }
}

/// Table-driven `F_q ⊂ F_{q^2}`. Immutable after construction.
pub struct FieldCtx {
    pp: PrimePower,
    /// `c_0, ..., c_{g-1}` of the monic defining polynomial of `F_q / F_p`.
    base_poly: Vec<u64>,
    /// Integer codes of `(b, c)` in `θ² + bθ + c`.
    quad_poly: (u64, u64),
    generator_code: u64,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: Elem,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("pp", &self.pp)
            .field("base_poly", &self.base_poly)
            .field("quad_poly", &self.quad_poly)
            .field("generator_code", &self.generator_code)
            .finish()
    }
}

/// Slow tower arithmetic used only while building the tables. `F_q` elements
/// are coefficient vectors of length `g`; `F_{q^2}` elements are pairs.
struct Tower<'a> {
    p: u64,
    g: usize,
    base: &'a [u64],
    quad: (Vec<u64>, Vec<u64>),
}

impl Tower<'_> {
    fn fq_add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter().zip(y).map(|(a, b)| (a + b) % self.p).collect()
    }

    fn fq_neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().map(|a| (self.p - a) % self.p).collect()
    }

    fn fq_mul(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let (p, g) = (self.p, self.g);
        let mut prod = vec![0u64; 2 * g];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % p;
            }
        }
        // t^g = -(c_0 + ... + c_{g-1} t^{g-1})
        for d in (g..2 * g).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, bc) in self.base.iter().enumerate() {
                prod[d - g + i] = (prod[d - g + i] + (p - c) * bc) % p;
            }
        }
        prod.truncate(g);
        prod
    }

    fn fq2_mul(&self, x: &(Vec<u64>, Vec<u64>), y: &(Vec<u64>, Vec<u64>)) -> (Vec<u64>, Vec<u64>) {
        let (b, c) = &self.quad;
        let a0b0 = self.fq_mul(&x.0, &y.0);
        let a1b1 = self.fq_mul(&x.1, &y.1);
        let cross = self.fq_add(&self.fq_mul(&x.0, &y.1), &self.fq_mul(&x.1, &y.0));
        // θ² = -bθ - c
        let re = self.fq_add(&a0b0, &self.fq_neg(&self.fq_mul(c, &a1b1)));
        let im = self.fq_add(&cross, &self.fq_neg(&self.fq_mul(b, &a1b1)));
        (re, im)
    }

    fn fq2_pow(&self, x: &(Vec<u64>, Vec<u64>), mut e: u64) -> (Vec<u64>, Vec<u64>) {
        let mut acc = self.fq2_one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fq2_mul(&acc, &base);
            }
            base = self.fq2_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn fq2_one(&self) -> (Vec<u64>, Vec<u64>) {
        let mut one = vec![0; self.g];
        one[0] = 1;
        (one, vec![0; self.g])
    }

    fn fq_code(&self, x: &[u64]) -> u64 {
        x.iter().rev().fold(0, |acc, d| acc * self.p + d)
    }

    fn fq_from_code(&self, mut code: u64) -> Vec<u64> {
        (0..self.g)
            .map(|_| {
                let d = code % self.p;
                code /= self.p;
                d
            })
            .collect()
    }

    fn fq2_code(&self, x: &(Vec<u64>, Vec<u64>)) -> u64 {
        let q = self.p.pow(self.g as u32);
        self.fq_code(&x.0) + q * self.fq_code(&x.1)
    }
}

fn poly_rem_fp(num: &[u64], den: &[u64], p: u64) -> Vec<u64> {
    // den monic, coefficients low to high
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, c) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c) % p;
            }
        }
        r.pop();
    }
    r
}

fn monic_from_code(code: u64, deg: usize, p: u64) -> Vec<u64> {
    let mut c = code;
    let mut out: Vec<u64> = (0..deg)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect();
    out.push(1);
    out
}

fn is_irreducible_fp(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    for d in 1..=n / 2 {
        for code in 0..p.pow(d as u32) {
            let h = monic_from_code(code, d, p);
            if poly_rem_fp(f, &h, p).iter().all(|c| *c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldCtx {
    /// Builds `F_q` and `F_{q^2}` for `q = p^g`.
    pub fn new(p: u64, g: u32) -> Result<Arc<Self>, FieldError> {
        let pp = PrimePower::new(p, g)?;
        Ok(Arc::new(Self::build(pp)))
    }

    pub fn from_prime_power(pp: PrimePower) -> Arc<Self> {
        Arc::new(Self::build(pp))
    }

    fn build(pp: PrimePower) -> Self {
        let (p, g, q, m) = (pp.p, pp.g as usize, pp.q, pp.unit_order);

        let base_poly = (0..p.pow(g as u32))
            .map(|code| monic_from_code(code, g, p))
            .find(|f| is_irreducible_fp(f, p))
            .expect("an irreducible polynomial of every degree exists");
        let base: Vec<u64> = base_poly[..g].to_vec();

        let mut tower = Tower { p, g, base: &base, quad: (vec![0; g], vec![0; g]) };
        let fq_elems: Vec<Vec<u64>> = (0..q).map(|c| tower.fq_from_code(c)).collect();
        let quad_poly = (0..q * q)
            .map(|n| (n / q, n % q))
            .find(|&(b, c)| {
                let (bv, cv) = (&fq_elems[b as usize], &fq_elems[c as usize]);
                fq_elems.iter().all(|x| {
                    let val =
                        tower.fq_add(&tower.fq_add(&tower.fq_mul(x, x), &tower.fq_mul(bv, x)), cv);
                    val.iter().any(|d| *d != 0)
                })
            })
            .expect("an irreducible quadratic exists over every finite field");
        tower.quad = (fq_elems[quad_poly.0 as usize].clone(), fq_elems[quad_poly.1 as usize].clone());

        let factors = prime_factors(m);
        let one = tower.fq2_one();
        let decode = |code: u64| (tower.fq_from_code(code % q), tower.fq_from_code(code / q));
        let generator_code = (1..q * q)
            .find(|&code| {
                let x = decode(code);
                factors.iter().all(|l| tower.fq2_pow(&x, m / l) != one)
            })
            .expect("F_{q^2}^× is cyclic");
        let gen = decode(generator_code);

        let mut exp = Vec::with_capacity(m as usize);
        let mut log = vec![u32::MAX; (q * q) as usize];
        let mut cur = one.clone();
        for i in 0..m {
            let code = tower.fq2_code(&cur);
            exp.push(code as u32);
            log[code as usize] = i as u32;
            cur = tower.fq2_mul(&cur, &gen);
        }
        debug_assert_eq!(cur, one);

        let mut ctx = FieldCtx {
            pp,
            base_poly: base,
            quad_poly,
            generator_code,
            exp,
            log,
            zech: Vec::new(),
            neg_one: Elem::ONE,
        };
        ctx.zech = (0..m)
            .map(|n| {
                let code = ctx.add_codes(1, ctx.exp[n as usize] as u64);
                ctx.log[code as usize]
            })
            .collect();
        ctx.neg_one = if p == 2 { Elem::ONE } else { Elem((m / 2) as u32) };
        ctx
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn p(&self) -> u64 {
        self.pp.p
    }

    pub fn g(&self) -> u32 {
        self.pp.g
    }

    pub fn q(&self) -> u64 {
        self.pp.q
    }

    pub fn unit_order(&self) -> u64 {
        self.pp.unit_order
    }

    /// Coefficients `c_0..c_{g-1}` of the defining polynomial of `F_q`.
    pub fn base_polynomial(&self) -> &[u64] {
        &self.base_poly
    }

    /// `(b, c)` with `θ² + bθ + c` the defining polynomial of `F_{q^2}/F_q`.
    pub fn quadratic_polynomial(&self) -> (Elem, Elem) {
        (self.from_code(self.quad_poly.0), self.from_code(self.quad_poly.1))
    }

    pub fn generator(&self) -> Elem {
        Elem(1 % self.pp.unit_order as u32)
    }

    /// `γ₂^{q+1}`, a generator of `F_q^×`.
    pub fn fq_generator(&self) -> Elem {
        self.gen_pow((self.q() + 1) as i64)
    }

    pub fn theta(&self) -> Elem {
        self.from_code(self.q())
    }

    fn add_codes(&self, x: u64, y: u64) -> u64 {
        let p = self.pp.p;
        let (mut x, mut y) = (x, y);
        let mut out = 0;
        let mut place = 1;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        out
    }

    /// Integer code `Σ c_i p^i` of the coordinates of `x` in the basis
    /// `t^0..t^{g-1}, θ t^0..θ t^{g-1}`. Elements of `F_p` get codes `0..p`.
    pub fn code(&self, x: Elem) -> u64 {
        match x.log() {
            None => 0,
            Some(e) => self.exp[e as usize] as u64,
        }
    }

    pub fn from_code(&self, code: u64) -> Elem {
        Elem(self.log[code as usize])
    }

    /// The image of an integer in the prime field.
    pub fn from_int(&self, n: i64) -> Elem {
        self.from_code(n.rem_euclid(self.pp.p as i64) as u64)
    }

    /// The integer in `0..p` representing `x`, if `x` lies in `F_p`.
    pub fn to_prime_field(&self, x: Elem) -> Option<u64> {
        let c = self.code(x);
        (c < self.pp.p).then_some(c)
    }

    pub fn gen_pow(&self, e: i64) -> Elem {
        Elem(e.rem_euclid(self.pp.unit_order as i64) as u32)
    }

    pub fn dlog(&self, x: Elem) -> Result<u64, FieldError> {
        x.log().ok_or(FieldError::ZeroElement)
    }

    pub fn is_in_fq(&self, x: Elem) -> bool {
        x.log().is_none_or(|e| e % (self.q() + 1) == 0)
    }

    pub fn mul(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() || y.is_zero() {
            return Elem::ZERO;
        }
        let m = self.pp.unit_order;
        Elem(((x.0 as u64 + y.0 as u64) % m) as u32)
    }

    pub fn add(&self, x: Elem, y: Elem) -> Elem {
        if x.is_zero() {
            return y;
        }
        if y.is_zero() {
            return x;
        }
        let m = self.pp.unit_order;
        let n = (y.0 as u64 + m - x.0 as u64) % m;
        let z = self.zech[n as usize];
        if z == u32::MAX {
            Elem::ZERO
        } else {
            Elem(((x.0 as u64 + z as u64) % m) as u32)
        }
    }

    pub fn neg(&self, x: Elem) -> Elem {
        self.mul(x, self.neg_one)
    }

    pub fn sub(&self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    pub fn inv(&self, x: Elem) -> Result<Elem, FieldError> {
        let e = self.dlog(x)?;
        Ok(self.gen_pow(-(e as i64)))
    }

    pub fn pow(&self, x: Elem, n: i64) -> Elem {
        match x.log() {
            None if n == 0 => Elem::ONE,
            None => Elem::ZERO,
            Some(e) => {
                let m = self.pp.unit_order as i128;
                Elem(((e as i128 * n as i128).rem_euclid(m)) as u32)
            }
        }
    }

    /// Scales by an integer (the image of `n` in `F_p`).
    pub fn scale(&self, x: Elem, n: i64) -> Elem {
        self.mul(x, self.from_int(n))
    }

    /// `x^{p^n}`, with `n` reduced modulo `2g`.
    pub fn frobenius(&self, x: Elem, n: i64) -> Elem {
        match x.log() {
            None => Elem::ZERO,
            Some(e) => {
                let k = n.rem_euclid(2 * self.pp.g as i64) as u32;
                let m = self.pp.unit_order;
                let mut out = e % m;
                for _ in 0..k {
                    out = out * self.pp.p % m;
                }
                Elem(out as u32)
            }
        }
    }

    /// The regular representation of `c ∈ F_{q^2}^×` on the `F_q`-basis
    /// `{1, θ}`: the columns of `ι(c)` are the coordinates of `c` and `cθ`.
    pub fn embed_iota(&self, c: Elem) -> Result<Mat2, FieldError> {
        if c.is_zero() {
            return Err(FieldError::ZeroElement);
        }
        let q = self.q();
        let code = self.code(c);
        let a0 = self.from_code(code % q);
        let a1 = self.from_code(code / q);
        let (b, cc) = self.quadratic_polynomial();
        // c·θ = a0 θ + a1 θ² = -cc·a1 + (a0 - b·a1) θ
        Ok(Mat2 {
            a: a0,
            b: self.neg(self.mul(cc, a1)),
            c: a1,
            d: self.sub(a0, self.mul(b, a1)),
        })
    }

    /// All elements of `F_q`, zero first, then `γ_q^0, γ_q^1, ...`.
    pub fn fq_elements(&self) -> Vec<Elem> {
        let step = (self.q() + 1) as i64;
        std::iter::once(Elem::ZERO)
            .chain((0..self.q() as i64 - 1).map(|i| self.gen_pow(i * step)))
            .collect()
    }

    /// All elements of `F_{q^2}`, zero first.
    pub fn fq2_elements(&self) -> Vec<Elem> {
        std::iter::once(Elem::ZERO)
            .chain((0..self.unit_order() as i64).map(|i| self.gen_pow(i)))
            .collect()
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: Elem) -> Result<u64, FieldError> {
        let e = self.dlog(x)?;
        let m = self.unit_order();
        Ok(m / gcd(e, m))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_small_fields() {
        for (p, g, q, m) in [(3, 1, 3, 8), (3, 2, 9, 80), (2, 1, 2, 3), (5, 1, 5, 24)] {
            let f = FieldCtx::new(p, g).unwrap();
            assert_eq!(f.q(), q);
            assert_eq!(f.unit_order(), m);
            assert_eq!(f.order(f.generator()).unwrap(), m);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(PrimePower::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(PrimePower::new(3, 0), Err(FieldError::ZeroExponent));
        assert!(matches!(PrimePower::new(3, 40), Err(FieldError::TooLarge { .. })));
        assert!(matches!(PrimePower::new(5, 11), Err(FieldError::TooLarge { .. })));
    }

    #[test]
    fn defining_polynomials_are_pinned() {
        // t^2 + 1 is the first irreducible in (c_1, c_0) order over F_3.
        let f = FieldCtx::new(3, 2).unwrap();
        assert_eq!(f.base_polynomial(), &[1, 0]);
        let f = FieldCtx::new(3, 1).unwrap();
        // θ² + 1 over F_3
        let (b, c) = f.quadratic_polynomial();
        assert!(b.is_zero());
        assert_eq!(f.to_prime_field(c), Some(1));
    }

    #[test]
    fn dlog_is_a_homomorphism() {
        let f = FieldCtx::new(3, 2).unwrap();
        let m = f.unit_order();
        for x in f.fq2_elements().into_iter().skip(1) {
            for y in f.fq2_elements().into_iter().skip(1).step_by(7) {
                let lhs = f.dlog(f.mul(x, y)).unwrap();
                assert_eq!(lhs, (f.dlog(x).unwrap() + f.dlog(y).unwrap()) % m);
            }
        }
    }

    #[test]
    fn addition_matches_code_arithmetic() {
        let f = FieldCtx::new(5, 1).unwrap();
        for x in f.fq2_elements() {
            for y in f.fq2_elements() {
                let s = f.add(x, y);
                assert_eq!(f.code(s), f.add_codes(f.code(x), f.code(y)));
            }
            assert!(f.add(x, f.neg(x)).is_zero());
        }
    }

    #[test]
    fn frobenius_examples() {
        let f = FieldCtx::new(3, 2).unwrap();
        let gamma = f.generator();
        assert_eq!(f.frobenius(gamma, 0), gamma);
        assert_eq!(f.frobenius(gamma, 4), gamma);
        assert_eq!(f.dlog(f.frobenius(gamma, 1)).unwrap(), 3);
        for x in f.fq_elements() {
            assert_eq!(f.frobenius(x, 2), x);
        }
        // Frobenius is additive.
        for x in f.fq2_elements().into_iter().step_by(3) {
            for y in f.fq2_elements().into_iter().step_by(5) {
                assert_eq!(f.frobenius(f.add(x, y), 1), f.add(f.frobenius(x, 1), f.frobenius(y, 1)));
            }
        }
    }

    #[test]
    fn fq_is_the_subgroup_of_order_q_minus_one() {
        let f = FieldCtx::new(3, 2).unwrap();
        let elems = f.fq_elements();
        assert_eq!(elems.len(), 9);
        for x in &elems {
            assert!(f.is_in_fq(*x));
            for y in &elems {
                assert!(f.is_in_fq(f.add(*x, *y)));
            }
        }
        assert!(!f.is_in_fq(f.theta()));
    }

    #[test]
    fn iota_is_a_ring_embedding() {
        for (p, g) in [(2, 1), (3, 1), (5, 1), (3, 2), (2, 2), (7, 1)] {
            let f = FieldCtx::new(p, g).unwrap();
            let q = f.q() as i64;
            assert_eq!(f.embed_iota(Elem::ONE).unwrap(), Mat2::identity());
            assert_eq!(f.embed_iota(Elem::ZERO), Err(FieldError::ZeroElement));
            let units: Vec<Elem> = f.fq2_elements().into_iter().skip(1).collect();
            for &c in &units {
                let ic = f.embed_iota(c).unwrap();
                for x in [ic.a, ic.b, ic.c, ic.d] {
                    assert!(f.is_in_fq(x));
                }
                assert_eq!(ic.det(&f), f.pow(c, 1 + q));
                assert_eq!(ic.trace(&f), f.add(c, f.pow(c, q)));
                for &d in &units {
                    let prod = ic.mul(&f.embed_iota(d).unwrap(), &f);
                    assert_eq!(prod, f.embed_iota(f.mul(c, d)).unwrap());
                }
            }
        }
    }

    #[test]
    fn mat2_inverse() {
        let f = FieldCtx::new(5, 1).unwrap();
        let m = Mat2::new(f.from_int(2), f.from_int(1), f.from_int(1), f.from_int(1));
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Mat2::identity());
        let sing = Mat2::new(f.from_int(1), f.from_int(2), f.from_int(2), f.from_int(4));
        assert!(sing.inverse(&f).is_none());
    }
}
