//! The identity families of `K₀(G)`, checked two ways: both sides must reach
//! the same standard form, and both sides must have the same Brauer character.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::{K0Ring, RawTerm, VirtualRep};
use crate::brauer::char_equal;

/// One instance of an identity family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "identity", rename_all = "snake_case")]
pub enum Identity {
    /// `M_k = -e^{1+k} M_{-k-2}`.
    Delta { k: i64 },
    /// `M_k - e M_{k-(q+1)} = M_{k-(q-1)} - e M_{k-2q}`.
    Sigma { k: i64 },
    /// `M_n M_m = M_{n+m} + e M_{n-1} M_{m-1}`.
    Pi { n: i64, m: i64 },
    /// `M_k = M_{k-p} M_1^{[1]} - e^p M_{k-2p}`.
    Phi { k: i64 },
    /// `M_k M_h^{[1]} - e^p M_{k-p} M_{h-1}^{[1]} = M_{k-p} M_{h+1}^{[1]} - e^p M_{k-2p} M_h^{[1]}`.
    PhiPrime { k: i64, h: i64 },
    /// The previous identity twisted by `i`, with `e^p` replaced by `e^{p^{i+1}}`.
    Inttt { k: i64, h: i64, i: u32 },
}

/// Family names, as accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityKind {
    Delta,
    Sigma,
    Pi,
    Phi,
    PhiPrime,
    Inttt,
}

impl IdentityKind {
    pub const ALL: [IdentityKind; 6] = [
        IdentityKind::Delta,
        IdentityKind::Sigma,
        IdentityKind::Pi,
        IdentityKind::Phi,
        IdentityKind::PhiPrime,
        IdentityKind::Inttt,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityKind::Delta => "delta",
            IdentityKind::Sigma => "sigma",
            IdentityKind::Pi => "pi",
            IdentityKind::Phi => "phi",
            IdentityKind::PhiPrime => "phi-prime",
            IdentityKind::Inttt => "inttt",
        }
    }
}

impl fmt::Display for IdentityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        IdentityKind::ALL
            .into_iter()
            .find(|k| k.name() == norm || (norm == "phiprime" && *k == IdentityKind::PhiPrime))
            .ok_or_else(|| format!("unknown identity '{s}' (expected delta, sigma, pi, phi, phi-prime, inttt)"))
    }
}

impl Identity {
    pub fn kind(&self) -> IdentityKind {
        match self {
            Identity::Delta { .. } => IdentityKind::Delta,
            Identity::Sigma { .. } => IdentityKind::Sigma,
            Identity::Pi { .. } => IdentityKind::Pi,
            Identity::Phi { .. } => IdentityKind::Phi,
            Identity::PhiPrime { .. } => IdentityKind::PhiPrime,
            Identity::Inttt { .. } => IdentityKind::Inttt,
        }
    }

    /// Left and right sides as sums of raw monomials.
    pub fn sides(&self, ring: &K0Ring) -> (Vec<RawTerm>, Vec<RawTerm>) {
        let pp = ring.prime_power();
        let (p, q) = (pp.p() as i64, pp.q() as i64);
        let one = pp.twist(1);
        let mono = |c: i64, m: i64, f: Vec<(i64, u32)>| RawTerm::new(c, m, f);
        match *self {
            Identity::Delta { k } => (vec![mono(1, 0, vec![(k, 0)])], vec![mono(-1, 1 + k, vec![(-k - 2, 0)])]),
            Identity::Sigma { k } => (
                vec![mono(1, 0, vec![(k, 0)]), mono(-1, 1, vec![(k - (q + 1), 0)])],
                vec![mono(1, 0, vec![(k - (q - 1), 0)]), mono(-1, 1, vec![(k - 2 * q, 0)])],
            ),
            Identity::Pi { n, m } => (
                vec![mono(1, 0, vec![(n, 0), (m, 0)])],
                vec![mono(1, 0, vec![(n + m, 0)]), mono(1, 1, vec![(n - 1, 0), (m - 1, 0)])],
            ),
            Identity::Phi { k } => (
                vec![mono(1, 0, vec![(k, 0)])],
                vec![mono(1, 0, vec![(k - p, 0), (1, one)]), mono(-1, p, vec![(k - 2 * p, 0)])],
            ),
            Identity::PhiPrime { k, h } => Identity::Inttt { k, h, i: 0 }.sides(ring),
            Identity::Inttt { k, h, i } => {
                let i0 = pp.twist(i as i64);
                let i1 = pp.twist(i as i64 + 1);
                let e = pp.p_pow_mod_q1(i as i64 + 1) as i64;
                (
                    vec![mono(1, 0, vec![(k, i0), (h, i1)]), mono(-1, e, vec![(k - p, i0), (h - 1, i1)])],
                    vec![mono(1, 0, vec![(k - p, i0), (h + 1, i1)]), mono(-1, e, vec![(k - 2 * p, i0), (h, i1)])],
                )
            }
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Identity::Delta { k } => write!(f, "delta(k={k})"),
            Identity::Sigma { k } => write!(f, "sigma(k={k})"),
            Identity::Pi { n, m } => write!(f, "pi(n={n}, m={m})"),
            Identity::Phi { k } => write!(f, "phi(k={k})"),
            Identity::PhiPrime { k, h } => write!(f, "phi-prime(k={k}, h={h})"),
            Identity::Inttt { k, h, i } => write!(f, "inttt(k={k}, h={h}, i={i})"),
        }
    }
}

/// Outcome of checking one identity instance.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: Identity,
    pub normal_forms_equal: bool,
    pub characters_equal: bool,
    /// The standard form of each side has the character of the raw side.
    pub normal_form_faithful: bool,
    pub lhs: VirtualRep,
    pub rhs: VirtualRep,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.normal_forms_equal && self.characters_equal && self.normal_form_faithful
    }
}

pub fn verify_identity(ring: &K0Ring, identity: Identity) -> IdentityReport {
    let pp = ring.prime_power();
    let (l, r) = identity.sides(ring);
    let lhs = ring.normalize(&l);
    let rhs = ring.normalize(&r);
    let characters_equal = char_equal(pp, &l, &r);
    let normal_form_faithful = char_equal(pp, &lhs, &l) && char_equal(pp, &rhs, &r);
    IdentityReport {
        identity,
        normal_forms_equal: lhs == rhs,
        characters_equal,
        normal_form_faithful,
        lhs,
        rhs,
    }
}
