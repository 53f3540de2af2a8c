//! Explicit modules `det^m ⊗ ⊗ M_{k_i}^{[i]}` and intertwining operators.
//!
//! A module has the monomial basis `⊗ X^{k_i - j_i} Y^{j_i}`, `j_i` ascending,
//! indexed row-major with the last factor varying fastest. `γ = (a b; c d)`
//! acts by `X ↦ aX + cY`, `Y ↦ bX + dY`, with entries raised to `p^i` on a
//! factor twisted by `[i]`, and by `det(γ)^m` on the determinant part.
//!
//! Operators carry a determinant twist `δ`: a map `A` is equivariant when
//! `ρ_dst(γ) A = det(γ)^δ A ρ_src(γ)` for all `γ`, i.e. `A` is a `G`-map from
//! `det^δ ⊗ src` to `dst`.

use std::collections::HashSet;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::brauer::{regular_classes, CharVector, ConjClass};
use crate::cyclo::CycloInt;
use crate::field::{Elem, FieldCtx, FieldError, Mat2, PrimePower};
use crate::k0::RawTerm;
use crate::linalg::{sparse_from_pairs, sparse_rank, Matrix, SparseVec};

/// Default cap on the side length of dense matrices.
pub const DEFAULT_MAX_DIM: usize = 2048;

/// The dense-matrix budget: `GL2MODREP_MAX_DIM` or [`DEFAULT_MAX_DIM`].
pub fn max_dim() -> usize {
    std::env::var("GL2MODREP_MAX_DIM").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModRepError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension {dim} exceeds the dense-matrix budget {max} (set GL2MODREP_MAX_DIM)")]
    TooLarge { dim: usize, max: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

fn budget(dim: usize) -> Result<(), ModRepError> {
    let max = max_dim();
    if dim > max {
        Err(ModRepError::TooLarge { dim, max })
    } else {
        Ok(())
    }
}

/// `det^m ⊗ ⊗ M_{k}^{[i]}` over the listed `(k, i)` factors. Degree `-1`
/// denotes the zero module.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ModuleSpec {
    #[serde(skip)]
    pp: PrimePower,
    det_power: u64,
    factors: Vec<(i64, u32)>,
}

impl ModuleSpec {
    pub fn new(pp: PrimePower, det_power: i64, factors: Vec<(i64, u32)>) -> Result<Self, ModRepError> {
        if let Some(f) = factors.iter().find(|f| f.0 < -1 || f.1 >= pp.g()) {
            return Err(ModRepError::BadParameter(format!("factor {f:?} (degree >= -1, twist < g)")));
        }
        if factors.windows(2).any(|w| w[0].1 > w[1].1) {
            return Err(ModRepError::BadParameter("factors must be listed in twist order".into()));
        }
        let det_power = det_power.rem_euclid((pp.q() - 1).max(1) as i64) as u64;
        Ok(ModuleSpec { pp, det_power, factors })
    }

    /// One factor per twist, `ks[i]` at twist `i`.
    pub fn standard(pp: PrimePower, det_power: i64, ks: &[i64]) -> Result<Self, ModRepError> {
        if ks.len() != pp.g() as usize {
            return Err(ModRepError::BadParameter(format!("expected {} degrees, got {}", pp.g(), ks.len())));
        }
        Self::new(pp, det_power, ks.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect())
    }

    pub fn prime_power(&self) -> PrimePower {
        self.pp
    }

    pub fn det_power(&self) -> u64 {
        self.det_power
    }

    pub fn factors(&self) -> &[(i64, u32)] {
        &self.factors
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.0).collect()
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|f| (f.0 + 1) as usize).product()
    }

    pub fn with_det_power(&self, m: i64) -> Self {
        let mut s = self.clone();
        s.det_power = m.rem_euclid((self.pp.q() - 1).max(1) as i64) as u64;
        s
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.factors.len()];
        for i in (0..self.factors.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * (self.factors[i + 1].0 + 1) as usize;
        }
        s
    }

    pub fn index_of(&self, js: &[usize]) -> usize {
        js.iter().zip(self.strides()).map(|(j, s)| j * s).sum()
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut js = vec![0; self.factors.len()];
        for (n, f) in self.factors.iter().enumerate().rev() {
            let size = (f.0 + 1) as usize;
            js[n] = idx % size;
            idx /= size;
        }
        js
    }

    /// The class `e^m ∏ M_k^{[i]}` in `K₀`.
    pub fn to_term(&self) -> RawTerm {
        RawTerm::new(1, self.det_power as i64, self.factors.clone())
    }

    /// Per-factor action matrices and the determinant scalar for `γ`.
    fn local_action(&self, f: &FieldCtx, gamma: &Mat2) -> Result<(Vec<Vec<SparseVec>>, Elem), ModRepError> {
        let det = gamma.det(f);
        if det.is_zero() {
            return Err(ModRepError::Singular);
        }
        let mats = self.factors.iter().map(|&(k, i)| sym_power_columns(f, k, &gamma.frobenius(i as i64, f))).collect();
        Ok((mats, f.pow(det, self.det_power as i64)))
    }

    /// `ρ(γ)v` for a sparse vector `v`.
    pub fn apply(&self, f: &FieldCtx, gamma: &Mat2, v: &SparseVec) -> Result<SparseVec, ModRepError> {
        let (mats, det) = self.local_action(f, gamma)?;
        Ok(self.apply_with(f, &mats, det, v))
    }

    fn apply_with(&self, f: &FieldCtx, mats: &[Vec<SparseVec>], det: Elem, v: &SparseVec) -> SparseVec {
        let strides = self.strides();
        let mut out = Vec::new();
        for &(idx, val) in v {
            let js = self.multi_index(idx);
            // cartesian expansion of the tensor product of factor columns
            let mut partial: Vec<(usize, Elem)> = vec![(0, f.mul(val, det))];
            for (n, j) in js.iter().enumerate() {
                let col = &mats[n][*j];
                let mut next = Vec::with_capacity(partial.len() * col.len());
                for &(base, x) in &partial {
                    for &(r, y) in col {
                        next.push((base + r * strides[n], f.mul(x, y)));
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        sparse_from_pairs(out, f)
    }

    /// Dense `ρ(γ)`.
    pub fn action_matrix(&self, f: &FieldCtx, gamma: &Mat2) -> Result<Matrix, ModRepError> {
        let n = self.dim();
        budget(n)?;
        let (mats, det) = self.local_action(f, gamma)?;
        let mut m = Matrix::zeros(n, n);
        for c in 0..n {
            for (r, x) in self.apply_with(f, &mats, det, &vec![(c, Elem::ONE)]) {
                m.set(r, c, x);
            }
        }
        Ok(m)
    }
}

/// Columns of `γ` on `Sym^k`: column `j` holds `(a + cY)^{k-j} (b + dY)^j`
/// written in the basis `X^{k-l} Y^l`.
fn sym_power_columns(f: &FieldCtx, k: i64, g: &Mat2) -> Vec<SparseVec> {
    if k < 0 {
        return Vec::new();
    }
    let k = k as usize;
    let pow = |a: Elem, c: Elem, n: usize| -> Vec<Elem> {
        let mut out = vec![Elem::ONE];
        for _ in 0..n {
            let mut next = vec![Elem::ZERO; out.len() + 1];
            for (l, x) in out.iter().enumerate() {
                next[l] = f.add(next[l], f.mul(*x, a));
                next[l + 1] = f.add(next[l + 1], f.mul(*x, c));
            }
            out = next;
        }
        out
    };
    // powers are shared across columns
    let first: Vec<Vec<Elem>> = (0..=k).map(|n| pow(g.a, g.c, n)).collect();
    let second: Vec<Vec<Elem>> = (0..=k).map(|n| pow(g.b, g.d, n)).collect();
    (0..=k)
        .map(|j| {
            let (u, v) = (&first[k - j], &second[j]);
            let mut col = vec![Elem::ZERO; k + 1];
            for (s, x) in u.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (t, y) in v.iter().enumerate() {
                    col[s + t] = f.add(col[s + t], f.mul(*x, *y));
                }
            }
            col.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect()
        })
        .collect()
}

/// A linear map between explicit modules, stored by sparse columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinMap {
    pub src: ModuleSpec,
    pub dst: ModuleSpec,
    pub cols: Vec<SparseVec>,
    pub det_twist: u64,
}

/// Where a basis monomial goes: `(destination multi-index, integer coefficient)`.
type MonomialRule<'a> = dyn Fn(&[usize]) -> Vec<(Vec<i64>, i64)> + 'a;

fn build_map(f: &FieldCtx, src: ModuleSpec, dst: ModuleSpec, det_twist: u64, rule: &MonomialRule) -> LinMap {
    let dst_sizes: Vec<i64> = dst.factors.iter().map(|x| x.0 + 1).collect();
    let cols = (0..src.dim())
        .map(|c| {
            let js = src.multi_index(c);
            let pairs = rule(&js)
                .into_iter()
                .filter(|(_, coeff)| coeff.rem_euclid(f.p() as i64) != 0)
                .map(|(t, coeff)| {
                    debug_assert!(t.iter().zip(&dst_sizes).all(|(j, s)| *j >= 0 && j < s), "{t:?}");
                    let t: Vec<usize> = t.iter().map(|j| *j as usize).collect();
                    (dst.index_of(&t), f.from_int(coeff))
                })
                .collect();
            sparse_from_pairs(pairs, f)
        })
        .collect();
    LinMap { src, dst, cols, det_twist }
}

fn check_ks(pp: PrimePower, ks: &[i64]) -> Result<(), ModRepError> {
    if ks.len() != pp.g() as usize {
        return Err(ModRepError::BadParameter(format!("expected {} degrees, got {}", pp.g(), ks.len())));
    }
    if ks.iter().any(|k| *k < 0) {
        return Err(ModRepError::BadParameter(format!("source degrees must be >= 0: {ks:?}")));
    }
    Ok(())
}

fn check_alpha_beta(pp: PrimePower, alpha: u32, beta: Option<u32>) -> Result<(), ModRepError> {
    if alpha >= pp.g() {
        return Err(ModRepError::BadParameter(format!("α = {alpha} must be < g = {}", pp.g())));
    }
    if let Some(b) = beta {
        if b == 0 || b >= pp.g() {
            return Err(ModRepError::BadParameter(format!("β = {b} must lie in 1..g-1 (g = {})", pp.g())));
        }
    }
    Ok(())
}

fn with_js(js: &[usize], changes: &[(usize, i64)]) -> Vec<i64> {
    let mut t: Vec<i64> = js.iter().map(|j| *j as i64).collect();
    for &(n, d) in changes {
        t[n] += d;
    }
    t
}

/// `Θ_β^{[α]} = X⊗Y^P - Y⊗X^P` on factors `α` and `α+β`, `P = p^{g-β}`.
pub fn theta_op(f: &FieldCtx, ks: &[i64], m: i64, alpha: u32, beta: u32) -> Result<LinMap, ModRepError> {
    let pp = f.prime_power();
    check_ks(pp, ks)?;
    check_alpha_beta(pp, alpha, Some(beta))?;
    let a = alpha as usize;
    let b = ((alpha + beta) % pp.g()) as usize;
    let pw = pp.p_pow(pp.g() - beta) as i64;
    let src = ModuleSpec::standard(pp, m, ks)?;
    let mut dk = ks.to_vec();
    dk[a] += 1;
    dk[b] += pw;
    let dst = ModuleSpec::standard(pp, m, &dk)?;
    let rule = move |js: &[usize]| vec![(with_js(js, &[(b, pw)]), 1), (with_js(js, &[(a, 1)]), -1)];
    Ok(build_map(f, src, dst, pp.p_pow(alpha), &rule))
}

/// `Θ^{[α]}`: multiplication by `XY^q - YX^q` on factor `α`.
pub fn dickson_op(f: &FieldCtx, ks: &[i64], m: i64, alpha: u32) -> Result<LinMap, ModRepError> {
    let pp = f.prime_power();
    check_ks(pp, ks)?;
    check_alpha_beta(pp, alpha, None)?;
    let a = alpha as usize;
    let q = pp.q() as i64;
    let src = ModuleSpec::standard(pp, m, ks)?;
    let mut dk = ks.to_vec();
    dk[a] += q + 1;
    let dst = ModuleSpec::standard(pp, m, &dk)?;
    let rule = move |js: &[usize]| vec![(with_js(js, &[(a, q)]), 1), (with_js(js, &[(a, 1)]), -1)];
    Ok(build_map(f, src, dst, pp.p_pow(alpha), &rule))
}

/// `D_β^{[α]} = ∂_X⊗X^P + ∂_Y⊗Y^P` on factors `α` and `α+β`, `P = p^{g-β}`.
pub fn d_op(f: &FieldCtx, ks: &[i64], m: i64, alpha: u32, beta: u32) -> Result<LinMap, ModRepError> {
    let pp = f.prime_power();
    check_ks(pp, ks)?;
    check_alpha_beta(pp, alpha, Some(beta))?;
    let a = alpha as usize;
    let b = ((alpha + beta) % pp.g()) as usize;
    let pw = pp.p_pow(pp.g() - beta) as i64;
    let k = ks[a];
    let src = ModuleSpec::standard(pp, m, ks)?;
    let mut dk = ks.to_vec();
    dk[a] -= 1;
    dk[b] += pw;
    let dst = ModuleSpec::standard(pp, m, &dk)?;
    if k == 0 {
        return Ok(LinMap { cols: vec![Vec::new(); src.dim()], src, dst, det_twist: 0 });
    }
    let rule = move |js: &[usize]| {
        let j = js[a] as i64;
        vec![(with_js(js, &[]), k - j), (with_js(js, &[(a, -1), (b, pw)]), j)]
    };
    Ok(build_map(f, src, dst, 0, &rule))
}

/// The derivation `X^q ∂_X + Y^q ∂_Y` on factor `α`.
pub fn serre_d_op(f: &FieldCtx, ks: &[i64], m: i64, alpha: u32) -> Result<LinMap, ModRepError> {
    let pp = f.prime_power();
    check_ks(pp, ks)?;
    check_alpha_beta(pp, alpha, None)?;
    let a = alpha as usize;
    let q = pp.q() as i64;
    let k = ks[a];
    let src = ModuleSpec::standard(pp, m, ks)?;
    let mut dk = ks.to_vec();
    dk[a] += q - 1;
    let dst = ModuleSpec::standard(pp, m, &dk)?;
    let rule = move |js: &[usize]| {
        let j = js[a] as i64;
        vec![(with_js(js, &[]), k - j), (with_js(js, &[(a, q - 1)]), j)]
    };
    // X^{k-j}Y^j ↦ (k-j) X^{k-j-1+q} Y^j + j X^{k-j} Y^{j-1+q}
    Ok(build_map(f, src, dst, 0, &rule))
}

/// `u⊗v ↦ uX⊗vY - uY⊗vX` from `M_{n-1}⊗M_{m-1}` to `M_n⊗M_m` (all untwisted).
pub fn glover_op(f: &FieldCtx, n: i64, m: i64) -> Result<LinMap, ModRepError> {
    let pp = f.prime_power();
    if n < 0 || m < 0 {
        return Err(ModRepError::BadParameter("degrees must be >= 0".into()));
    }
    let src = ModuleSpec::new(pp, 0, vec![(n - 1, 0), (m - 1, 0)])?;
    let dst = ModuleSpec::new(pp, 0, vec![(n, 0), (m, 0)])?;
    let rule = |js: &[usize]| vec![(with_js(js, &[(1, 1)]), 1), (with_js(js, &[(0, 1)]), -1)];
    Ok(build_map(f, src, dst, 1, &rule))
}

/// The identification of a module with its factors permuted: new factor `t`
/// is old factor `perm[t]`. Factors must stay in twist order.
pub fn reorder_map(f: &FieldCtx, spec: &ModuleSpec, perm: &[usize]) -> Result<LinMap, ModRepError> {
    let n = spec.factors.len();
    let mut seen = perm.to_vec();
    seen.sort_unstable();
    if seen != (0..n).collect::<Vec<_>>() {
        return Err(ModRepError::BadParameter(format!("{perm:?} is not a permutation of 0..{n}")));
    }
    let factors = perm.iter().map(|&o| spec.factors[o]).collect();
    let dst = ModuleSpec::new(spec.pp, spec.det_power as i64, factors)?;
    let rule = |js: &[usize]| vec![(perm.iter().map(|&o| js[o] as i64).collect(), 1)];
    Ok(build_map(f, spec.clone(), dst, 0, &rule))
}

impl LinMap {
    pub fn rank(&self, f: &FieldCtx) -> usize {
        sparse_rank(&self.cols, f)
    }

    pub fn kernel_dim(&self, f: &FieldCtx) -> usize {
        self.src.dim() - self.rank(f)
    }

    pub fn coker_dim(&self, f: &FieldCtx) -> usize {
        self.dst.dim() - self.rank(f)
    }

    pub fn is_injective(&self, f: &FieldCtx) -> bool {
        self.kernel_dim(f) == 0
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &LinMap, f: &FieldCtx) -> Result<LinMap, ModRepError> {
        if first.dst != self.src {
            return Err(ModRepError::ShapeMismatch(format!(
                "cannot compose: {:?} vs {:?}",
                first.dst.factors, self.src.factors
            )));
        }
        let cols = first
            .cols
            .iter()
            .map(|c| {
                let mut pairs = Vec::new();
                for &(r, x) in c {
                    pairs.extend(self.cols[r].iter().map(|&(i, y)| (i, f.mul(x, y))));
                }
                sparse_from_pairs(pairs, f)
            })
            .collect();
        Ok(LinMap {
            src: first.src.clone(),
            dst: self.dst.clone(),
            cols,
            det_twist: self.det_twist + first.det_twist,
        })
    }

    /// Dense copy, subject to the budget.
    pub fn to_dense(&self) -> Result<Matrix, ModRepError> {
        budget(self.dst.dim())?;
        budget(self.src.dim())?;
        let mut m = Matrix::zeros(self.dst.dim(), self.src.dim());
        for (c, col) in self.cols.iter().enumerate() {
            for &(r, x) in col {
                m.set(r, c, x);
            }
        }
        Ok(m)
    }

    /// `{p, g, src, dst, det_twist, rows}` with entries as field codes
    /// (integers in `0..p` for prime-field entries).
    pub fn to_dump_json(&self, f: &FieldCtx) -> Result<serde_json::Value, ModRepError> {
        let m = self.to_dense()?;
        let rows: Vec<Vec<u64>> =
            (0..m.rows).map(|r| (0..m.cols).map(|c| f.code(m.get(r, c))).collect()).collect();
        Ok(serde_json::json!({
            "p": f.p(),
            "g": f.g(),
            "src": self.src,
            "dst": self.dst,
            "det_twist": self.det_twist,
            "rows": rows,
        }))
    }
}

/// `diag(γ_q, 1)`, `(1 1; 0 1)` and `(0 1; 1 0)`.
pub fn standard_generators(f: &FieldCtx) -> Vec<Mat2> {
    let one = Elem::ONE;
    let zero = Elem::ZERO;
    vec![
        Mat2::diag(f.fq_generator(), one),
        Mat2::new(one, one, zero, one),
        Mat2::new(zero, one, one, zero),
    ]
}

/// Largest group order for which generation is checked by closure.
const CLOSURE_LIMIT: u64 = 100_000;

/// [`standard_generators`], after confirming they generate `GL₂(F_q)`.
///
/// Conjugating `(1 1; 0 1)` by powers of `diag(γ_q, 1)` gives every
/// `(1 x; 0 1)`; with the Weyl element these generate `SL₂`, and the
/// diagonal element has determinant of order `q - 1`. Small groups are
/// checked by closure, larger ones by the order of `γ_q`.
pub fn generators(f: &FieldCtx) -> Result<Vec<Mat2>, ModRepError> {
    static VERIFIED: OnceLock<Mutex<HashSet<(u64, u32)>>> = OnceLock::new();
    let key = (f.p(), f.g());
    let verified = VERIFIED.get_or_init(|| Mutex::new(HashSet::new()));
    let gens = standard_generators(f);
    if verified.lock().unwrap_or_else(|e| e.into_inner()).contains(&key) {
        return Ok(gens);
    }
    let q = f.q();
    let order = (q * q - 1) * (q * q - q);
    let ok = if order <= CLOSURE_LIMIT {
        closure_size(f, &gens) == order
    } else {
        f.order(f.fq_generator())? == q - 1
    };
    if !ok {
        return Err(ModRepError::BadParameter("standard generators do not generate GL2".into()));
    }
    verified.lock().unwrap_or_else(|e| e.into_inner()).insert(key);
    Ok(gens)
}

fn closure_size(f: &FieldCtx, gens: &[Mat2]) -> u64 {
    let mut seen: HashSet<Mat2> = HashSet::new();
    let mut frontier = vec![Mat2::identity()];
    seen.insert(Mat2::identity());
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = x.mul(g, f);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    seen.len() as u64
}

/// Whether `ρ_dst(γ) A = det(γ)^δ A ρ_src(γ)` for every given `γ`.
pub fn check_equivariance(f: &FieldCtx, map: &LinMap, gens: &[Mat2]) -> Result<bool, ModRepError> {
    if map.cols.len() != map.src.dim() {
        return Err(ModRepError::ShapeMismatch(format!("{} columns for source dimension {}", map.cols.len(), map.src.dim())));
    }
    if let Some(bad) = map.cols.iter().flatten().find(|(r, _)| *r >= map.dst.dim()) {
        return Err(ModRepError::ShapeMismatch(format!("row {} outside destination dimension {}", bad.0, map.dst.dim())));
    }
    for gamma in gens {
        let (dmats, ddet) = map.dst.local_action(f, gamma)?;
        let (smats, sdet) = map.src.local_action(f, gamma)?;
        let scalar = f.pow(gamma.det(f), map.det_twist as i64);
        for c in 0..map.src.dim() {
            let lhs = map.dst.apply_with(f, &dmats, ddet, &map.cols[c]);
            let image = map.src.apply_with(f, &smats, sdet, &vec![(c, Elem::ONE)]);
            let mut pairs = Vec::new();
            for (r, x) in image {
                pairs.extend(map.cols[r].iter().map(|&(i, y)| (i, f.mul(f.mul(x, y), scalar))));
            }
            if lhs != sparse_from_pairs(pairs, f) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dimension of `{A : ρ_dst(γ) A = det(γ)^s A ρ_src(γ) for all generators}`.
pub fn hom_space_dim(f: &FieldCtx, src: &ModuleSpec, dst: &ModuleSpec, s: i64) -> Result<usize, ModRepError> {
    let (ns, nd) = (src.dim(), dst.dim());
    if ns == 0 || nd == 0 {
        return Ok(0);
    }
    let unknowns = ns * nd;
    budget(unknowns)?;
    let gens = generators(f)?;
    let mut sys = Matrix::zeros(gens.len() * unknowns, unknowns);
    for (gi, gamma) in gens.iter().enumerate() {
        let rd = dst.action_matrix(f, gamma)?;
        let rs = src.action_matrix(f, gamma)?;
        let lam = f.pow(gamma.det(f), s);
        // unknown A[r][c] sits at r * ns + c
        for r in 0..nd {
            for c in 0..ns {
                let row = gi * unknowns + r * ns + c;
                for t in 0..nd {
                    let x = rd.get(r, t);
                    if !x.is_zero() {
                        let col = t * ns + c;
                        sys.set(row, col, f.add(sys.get(row, col), x));
                    }
                }
                for u in 0..ns {
                    let y = rs.get(u, c);
                    if !y.is_zero() {
                        let col = r * ns + u;
                        sys.set(row, col, f.sub(sys.get(row, col), f.mul(lam, y)));
                    }
                }
            }
        }
    }
    Ok(sys.nullity(f))
}

/// Brauer character of `dst / im(A)` computed from the matrices alone:
/// the quotient action of each class representative, its eigenvalues over
/// `F_{q^2}`, and their Teichmüller lifts.
pub fn coker_char(f: &FieldCtx, map: &LinMap) -> Result<CharVector, ModRepError> {
    let pp = f.prime_power();
    let nd = map.dst.dim();
    budget(nd)?;
    let mut basis = map.to_dense()?.transpose();
    let pivots = basis.rref(f);
    let pivot_set: HashSet<usize> = pivots.iter().copied().collect();
    let quotient: Vec<usize> = (0..nd).filter(|i| !pivot_set.contains(i)).collect();
    let project = |v: &[Elem]| -> Vec<Elem> {
        let mut v = v.to_vec();
        for (r, &pc) in pivots.iter().enumerate() {
            let x = v[pc];
            if x.is_zero() {
                continue;
            }
            for j in 0..nd {
                let b = basis.get(r, j);
                if !b.is_zero() {
                    v[j] = f.sub(v[j], f.mul(x, b));
                }
            }
        }
        quotient.iter().map(|&i| v[i]).collect()
    };
    let dq = quotient.len();
    let classes = regular_classes(pp);
    let mut values = Vec::with_capacity(classes.len());
    for class in &classes {
        let rep = class.representative(f);
        let rho = map.dst.action_matrix(f, &rep)?;
        let mut gbar = Matrix::zeros(dq, dq);
        for (n, &i) in quotient.iter().enumerate() {
            let col: Vec<Elem> = (0..nd).map(|r| rho.get(r, i)).collect();
            for (r, x) in project(&col).into_iter().enumerate() {
                gbar.set(r, n, x);
            }
        }
        let mut terms = Vec::new();
        let mut total = 0;
        for e in eigen_candidates(pp, &map.dst, class) {
            let lam = f.gen_pow(e as i64);
            let mut shifted = gbar.clone();
            for i in 0..dq {
                shifted.set(i, i, f.sub(shifted.get(i, i), lam));
            }
            let mult = shifted.nullity(f);
            total += mult;
            if mult > 0 {
                terms.push((e as i64, mult as i64));
            }
        }
        if total != dq {
            return Err(ModRepError::BadParameter(format!("quotient action at {class:?} is not diagonalizable")));
        }
        values.push(CycloInt::from_exponents(pp.unit_order(), terms));
    }
    Ok(CharVector { classes, values })
}

/// Possible eigenvalue logs of a class representative on a module.
fn eigen_candidates(pp: PrimePower, spec: &ModuleSpec, class: &ConjClass) -> Vec<u64> {
    let m = pp.unit_order();
    let (u, v) = class.eigen_exponents(pp);
    let mut set: HashSet<u64> = HashSet::new();
    set.insert(spec.det_power * ((u + v) % m) % m);
    for &(k, i) in &spec.factors {
        let pi = (0..i).fold(1u64, |acc, _| acc * pp.p() % m);
        let (ut, vt) = (u * pi % m, v * pi % m);
        let k = k.max(0) as u64;
        let mut next = HashSet::new();
        for s in &set {
            for j in 0..=k {
                next.insert((s + ut * (k - j) % m + vt * j % m) % m);
            }
        }
        set = next;
    }
    let mut out: Vec<u64> = set.into_iter().collect();
    out.sort_unstable();
    out
}

/// The permutation module `F[P¹(F_q)]`, `(uφ)(P) = φ(u⁻¹P)`.
pub struct PermModuleP1 {
    points: Vec<(Elem, Elem)>,
}

impl PermModuleP1 {
    /// Points `[x : 1]` for `x ∈ F_q` in [`FieldCtx::fq_elements`] order, then `[1 : 0]`.
    pub fn new(f: &FieldCtx) -> Self {
        let mut points: Vec<(Elem, Elem)> = f.fq_elements().into_iter().map(|x| (x, Elem::ONE)).collect();
        points.push((Elem::ONE, Elem::ZERO));
        PermModuleP1 { points }
    }

    pub fn dim(&self) -> usize {
        self.points.len()
    }

    fn normalize(f: &FieldCtx, v: (Elem, Elem)) -> (Elem, Elem) {
        if v.1.is_zero() {
            (Elem::ONE, Elem::ZERO)
        } else {
            (f.mul(v.0, f.inv(v.1).expect("nonzero")), Elem::ONE)
        }
    }

    fn index(&self, pt: (Elem, Elem)) -> usize {
        self.points.iter().position(|x| *x == pt).expect("point of P¹")
    }

    /// Permutation matrix: `e_P ↦ e_{γP}`.
    pub fn action_matrix(&self, f: &FieldCtx, gamma: &Mat2) -> Result<Matrix, ModRepError> {
        if !gamma.is_invertible(f) {
            return Err(ModRepError::Singular);
        }
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for (c, &pt) in self.points.iter().enumerate() {
            let r = self.index(Self::normalize(f, gamma.apply(pt, f)));
            m.set(r, c, Elem::ONE);
        }
        Ok(m)
    }

    pub fn fixed_points(&self, f: &FieldCtx, gamma: &Mat2) -> usize {
        self.points.iter().filter(|&&pt| Self::normalize(f, gamma.apply(pt, f)) == pt).count()
    }

    /// The permutation character: number of fixed points of each class.
    pub fn brauer_character(&self, f: &FieldCtx) -> CharVector {
        let pp = f.prime_power();
        let classes = regular_classes(pp);
        let values = classes
            .iter()
            .map(|c| CycloInt::from_int(pp.unit_order(), self.fixed_points(f, &c.representative(f)) as i64))
            .collect();
        CharVector { classes, values }
    }
}

/// Whether `F[P¹(F_q)]` has the Brauer character of `M_0 + M_{q-1}`.
pub fn perm_module_matches(f: &FieldCtx) -> bool {
    let pp = f.prime_power();
    let expect = CharVector::of_terms(pp, &[RawTerm::sym(0, 0), RawTerm::sym(pp.q() as i64 - 1, 0)]);
    PermModuleP1::new(f).brauer_character(f) == expect
}

/// Brauer character of `Ind_B^G(η^k)` at a class, `η(a *; 0 d) = a`: the sum
/// of `η̃^k` over the lines fixed by the representative.
pub fn induced_char(f: &FieldCtx, k: i64, class: &ConjClass) -> CycloInt {
    let pp = f.prime_power();
    let rep = class.representative(f);
    let perm = PermModuleP1::new(f);
    let terms: Vec<(i64, i64)> = perm
        .points
        .iter()
        .filter_map(|&pt| {
            let img = rep.apply(pt, f);
            // eigenvalue on the line, if the line is fixed
            let lam = if pt.1.is_zero() {
                img.1.is_zero().then_some(img.0)
            } else {
                let lam = f.mul(img.1, f.inv(pt.1).ok()?);
                (f.mul(lam, pt.0) == img.0).then_some(lam)
            }?;
            Some((k * f.dlog(lam).ok()? as i64, 1))
        })
        .collect();
    CycloInt::from_exponents(pp.unit_order(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brauer::{char_equal, char_equal_by_classes};
    use crate::k0::K0Ring;

    fn ctx(p: u64, g: u32) -> std::sync::Arc<FieldCtx> {
        FieldCtx::new(p, g).unwrap()
    }

    #[test]
    fn m1_action_matches_convention() {
        let f = ctx(5, 1);
        let spec = ModuleSpec::standard(f.prime_power(), 0, &[1]).unwrap();
        let g = Mat2::new(f.from_int(2), f.from_int(3), f.from_int(1), f.from_int(3));
        let m = spec.action_matrix(&f, &g).unwrap();
        // columns: X ↦ aX + cY, Y ↦ bX + dY
        assert_eq!((m.get(0, 0), m.get(1, 0)), (g.a, g.c));
        assert_eq!((m.get(0, 1), m.get(1, 1)), (g.b, g.d));
        let det_spec = ModuleSpec::standard(f.prime_power(), 3, &[0]).unwrap();
        let dm = det_spec.action_matrix(&f, &g).unwrap();
        assert_eq!(dm.data, vec![f.pow(g.det(&f), 3)]);
        let sing = Mat2::new(f.from_int(1), f.from_int(2), f.from_int(2), f.from_int(4));
        assert_eq!(spec.action_matrix(&f, &sing), Err(ModRepError::Singular));
    }

    #[test]
    fn twisted_factor_uses_frobenius() {
        let f = ctx(3, 2);
        let pp = f.prime_power();
        let g = Mat2::new(f.fq_generator(), f.fq_generator(), Elem::ZERO, Elem::ONE);
        let tw = ModuleSpec::standard(pp, 0, &[0, 1]).unwrap().action_matrix(&f, &g).unwrap();
        let plain = ModuleSpec::standard(pp, 0, &[1, 0]).unwrap().action_matrix(&f, &g.frobenius(1, &f)).unwrap();
        assert_eq!(tw, plain);
    }

    #[test]
    fn action_is_a_homomorphism() {
        let f = ctx(3, 2);
        let pp = f.prime_power();
        let spec = ModuleSpec::new(pp, 2, vec![(2, 0), (1, 0), (3, 1)]).unwrap();
        let gens = standard_generators(&f);
        for x in &gens {
            for y in &gens {
                let lhs = spec.action_matrix(&f, &x.mul(y, &f)).unwrap();
                let rhs = spec.action_matrix(&f, x).unwrap().mul(&spec.action_matrix(&f, y).unwrap(), &f);
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(spec.action_matrix(&f, &Mat2::identity()).unwrap(), Matrix::identity(spec.dim()));
    }

    #[test]
    fn generators_generate() {
        for (p, g) in [(2, 1), (3, 1), (5, 1), (3, 2), (7, 1), (2, 3)] {
            assert!(generators(&ctx(p, g)).is_ok());
        }
    }

    #[test]
    fn theta_on_a_line() {
        let f = ctx(3, 2);
        let op = theta_op(&f, &[0, 0], 0, 0, 1).unwrap();
        assert_eq!(op.src.dim(), 1);
        assert_eq!(op.dst.degrees(), vec![1, 3]);
        // X⊗Y^3 - Y⊗X^3: (j0, j1) = (0, 3) with +1 and (1, 0) with -1
        assert_eq!(op.cols[0], vec![(3, Elem::ONE), (4, f.from_int(-1))]);
        assert_eq!(op.rank(&f), 1);
        assert!(check_equivariance(&f, &op, &standard_generators(&f)).unwrap());
    }

    #[test]
    fn operators_are_equivariant() {
        let f = ctx(3, 2);
        let gens = generators(&f).unwrap();
        for ks in [[0, 0], [1, 1], [2, 0], [1, 2]] {
            for alpha in 0..2 {
                let ops = [
                    theta_op(&f, &ks, 1, alpha, 1).unwrap(),
                    dickson_op(&f, &ks, 1, alpha).unwrap(),
                    d_op(&f, &ks, 1, alpha, 1).unwrap(),
                    serre_d_op(&f, &ks, 1, alpha).unwrap(),
                ];
                for op in &ops {
                    assert!(check_equivariance(&f, op, &gens).unwrap(), "{ks:?} α={alpha} {:?}", op.dst);
                }
            }
        }
    }

    #[test]
    fn corrupted_map_is_detected() {
        let f = ctx(3, 2);
        let gens = generators(&f).unwrap();
        let mut op = theta_op(&f, &[1, 1], 0, 0, 1).unwrap();
        op.cols[1][0].1 = f.add(op.cols[1][0].1, Elem::ONE);
        assert!(!check_equivariance(&f, &op, &gens).unwrap());
        let zero = LinMap { cols: vec![Vec::new(); op.src.dim()], ..op.clone() };
        assert!(check_equivariance(&f, &zero, &gens).unwrap());
        let mut wrong_twist = theta_op(&f, &[1, 1], 0, 0, 1).unwrap();
        wrong_twist.det_twist = 0;
        assert!(!check_equivariance(&f, &wrong_twist, &gens).unwrap());
        let bad_shape = LinMap { cols: vec![], ..op };
        assert!(check_equivariance(&f, &bad_shape, &gens).is_err());
    }

    #[test]
    fn dickson_classical_cokernels() {
        let f = ctx(5, 1);
        let op = dickson_op(&f, &[2], 0, 0).unwrap();
        assert_eq!(op.coker_dim(&f), 6);
        assert!(op.is_injective(&f));
        let f3 = ctx(3, 1);
        assert_eq!(dickson_op(&f3, &[0], 0, 0).unwrap().coker_dim(&f3), 4);
    }

    #[test]
    fn derivations_vanish_on_trivial_factor() {
        let f = ctx(3, 2);
        let d = d_op(&f, &[0, 1], 0, 0, 1).unwrap();
        assert_eq!(d.dst.dim(), 0);
        assert_eq!(d.rank(&f), 0);
        let s = serre_d_op(&f, &[0, 1], 0, 0).unwrap();
        assert!(s.is_zero());
        // X^p ↦ p X^{p-1} ⊗ ... = 0
        let dp = d_op(&f, &[3, 0], 0, 0, 1).unwrap();
        assert!(dp.kernel_dim(&f) > 0);
    }

    #[test]
    fn serre_d_on_monomial() {
        let f = ctx(5, 1);
        let op = serre_d_op(&f, &[3], 0, 0).unwrap();
        // X^3 ↦ 3 X^{3+4}
        assert_eq!(op.cols[0], vec![(0, f.from_int(3))]);
        assert_eq!(op.coker_dim(&f), 4);
    }

    #[test]
    fn hom_spaces() {
        let f = ctx(3, 1);
        let pp = f.prime_power();
        for k in 0..3 {
            let s = ModuleSpec::standard(pp, 0, &[k]).unwrap();
            assert_eq!(hom_space_dim(&f, &s, &s, 0).unwrap(), 1);
        }
        let a = ModuleSpec::standard(pp, 0, &[1]).unwrap();
        let b = ModuleSpec::standard(pp, 1, &[1]).unwrap();
        assert_eq!(hom_space_dim(&f, &a, &b, 0).unwrap(), 0);
        assert_eq!(hom_space_dim(&f, &a, &b, 1).unwrap(), 1);
    }

    #[test]
    fn dense_budget_is_enforced() {
        let f = ctx(3, 1);
        let pp = f.prime_power();
        let big = ModuleSpec::new(pp, 0, vec![(60, 0), (60, 0)]).unwrap();
        assert!(matches!(big.action_matrix(&f, &Mat2::identity()), Err(ModRepError::TooLarge { .. })));
    }

    #[test]
    fn glover_sequence() {
        let f = ctx(5, 1);
        let gens = generators(&f).unwrap();
        for (n, m) in [(1, 1), (2, 3), (4, 2), (6, 3)] {
            let op = glover_op(&f, n, m).unwrap();
            assert!(check_equivariance(&f, &op, &gens).unwrap());
            assert!(op.is_injective(&f));
            assert_eq!(op.coker_dim(&f) as i64, n + m + 1);
        }
    }

    #[test]
    fn reorder_is_equivariant() {
        let f = ctx(3, 2);
        let spec = ModuleSpec::new(f.prime_power(), 0, vec![(1, 0), (2, 0), (1, 1)]).unwrap();
        let r = reorder_map(&f, &spec, &[1, 0, 2]).unwrap();
        assert!(check_equivariance(&f, &r, &generators(&f).unwrap()).unwrap());
        assert_eq!(r.rank(&f), spec.dim());
        assert!(reorder_map(&f, &spec, &[2, 0, 1]).is_err());
    }

    #[test]
    fn cokernel_character_matches_k0() {
        let f = ctx(3, 2);
        let pp = f.prime_power();
        let ring = K0Ring::new(pp);
        for op in [theta_op(&f, &[1, 0], 0, 0, 1).unwrap(), dickson_op(&f, &[1, 1], 0, 1).unwrap()] {
            let cc = coker_char(&f, &op).unwrap();
            let mut src = op.src.to_term();
            src.m += op.det_twist as i64;
            let raw = vec![op.dst.to_term(), src.negated()];
            let class = ring.normalize(&raw);
            assert!(char_equal(pp, &class, &raw));
            assert_eq!(cc, crate::brauer::char_vrep(&class));
        }
    }

    #[test]
    fn permutation_module() {
        for (p, g) in [(3, 1), (5, 1), (3, 2)] {
            let f = ctx(p, g);
            let perm = PermModuleP1::new(&f);
            assert_eq!(perm.dim() as u64, f.q() + 1);
            assert!(perm_module_matches(&f));
            let gens = standard_generators(&f);
            let lhs = perm.action_matrix(&f, &gens[0].mul(&gens[1], &f)).unwrap();
            let rhs = perm.action_matrix(&f, &gens[0]).unwrap().mul(&perm.action_matrix(&f, &gens[1]).unwrap(), &f);
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn induced_character() {
        let f = ctx(5, 1);
        let pp = f.prime_power();
        let id = ConjClass::Central { e: 0 };
        assert_eq!(induced_char(&f, 3, &id), CycloInt::from_int(pp.unit_order(), 6));
        for c in regular_classes(pp) {
            if matches!(c, ConjClass::NonSplit { .. }) {
                assert!(induced_char(&f, 2, &c).is_zero());
            }
        }
        let q = pp.q() as i64;
        let k = q + 2;
        let expect = CharVector {
            classes: regular_classes(pp),
            values: regular_classes(pp).iter().map(|c| induced_char(&f, k, c)).collect(),
        };
        let raw = vec![RawTerm::sym(k, 0), RawTerm::new(-1, 1, vec![(k - q - 1, 0)])];
        assert_eq!(CharVector::of_terms(pp, &raw), expect);
        assert!(char_equal_by_classes(pp, &raw, &raw));
    }
}
