//! The polynomials `D_i(s) = Σ_{j=0}^{p-i-1} C(p-j-1, i) s^j`, their action in
//! the group ring `Z[C_p]`, and linear independence of nilpotent orbits over `F_p`.
//!
//! Multiplicative identities among Kummer radicals are written additively:
//! `σ` acts on the free rank-one `Z[C_p]`-module spanned by `α`, so
//! `A_i = D_i(σ)·α` and identities with exponents `e/p` are multiplied by `p`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{binomial, ensure_prime};
use crate::error::{Error, Result};

/// Integer polynomial, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    /// `s^j`.
    pub fn monomial(j: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); j + 1];
        coeffs[j] = BigInt::one();
        IntPoly { coeffs }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|j| self.coeff(j) + other.coeff(j)).collect())
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|j| self.coeff(j) - other.coeff(j)).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Image in `Z[C_p]` under `s ↦ σ`, reducing exponents mod `p`.
    pub fn eval_at_sigma(&self, p: u64) -> GroupRingElem {
        let mut out = vec![BigInt::zero(); p as usize];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j % p as usize] += c;
        }
        GroupRingElem { p, coeffs: out }
    }
}

/// `Σ c_t σ^t` in `Z[C_p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElem {
    p: u64,
    coeffs: Vec<BigInt>,
}

impl GroupRingElem {
    /// Coefficients are folded mod `p` in the exponent.
    pub fn new(p: u64, coeffs: Vec<BigInt>) -> Self {
        let mut out = vec![BigInt::zero(); p as usize];
        for (t, c) in coeffs.into_iter().enumerate() {
            out[t % p as usize] += c;
        }
        GroupRingElem { p, coeffs: out }
    }

    pub fn zero(p: u64) -> Self {
        GroupRingElem {
            p,
            coeffs: vec![BigInt::zero(); p as usize],
        }
    }

    /// `c σ^t`.
    pub fn term(p: u64, t: u64, c: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[(t % p) as usize] = c.into();
        e
    }

    pub fn one(p: u64) -> Self {
        Self::term(p, 0, 1)
    }

    pub fn sigma(p: u64) -> Self {
        Self::term(p, 1, 1)
    }

    /// The norm element `1 + σ + ... + σ^{p-1}`.
    pub fn norm(p: u64) -> Self {
        GroupRingElem {
            p,
            coeffs: vec![BigInt::one(); p as usize],
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.p, other.p);
        GroupRingElem {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.p, other.p);
        GroupRingElem {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> GroupRingElem {
        GroupRingElem {
            p: self.p,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Cyclic convolution.
    pub fn mul(&self, other: &GroupRingElem) -> GroupRingElem {
        assert_eq!(self.p, other.p);
        let p = self.p as usize;
        let mut out = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[(i + j) % p] += a * b;
            }
        }
        GroupRingElem {
            p: self.p,
            coeffs: out,
        }
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod_p(&self) -> Vec<u64> {
        let p = BigInt::from(self.p);
        self.coeffs
            .iter()
            .map(|c| {
                let r = ((c % &p) + &p) % &p;
                r.try_into().expect("residue fits")
            })
            .collect()
    }
}

fn strings(cs: &[BigInt]) -> Vec<String> {
    cs.iter().map(BigInt::to_string).collect()
}

/// `D_i(s)` for `0 <= i <= p - 1`.
pub fn d_poly(p: u64, i: u64) -> Result<IntPoly> {
    ensure_prime(p)?;
    if i >= p {
        return Err(Error::invalid(format!(
            "i = {i} must be at most p - 1 = {}",
            p - 1
        )));
    }
    let (p, i) = (p as i64, i as i64);
    Ok(IntPoly::new(
        (0..p - i).map(|j| binomial(p - j - 1, i)).collect(),
    ))
}

/// One identity with both sides' coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
    pub passed: bool,
}

impl IdentityCheck {
    fn poly(name: String, lhs: &IntPoly, rhs: &IntPoly) -> Self {
        IdentityCheck {
            name,
            lhs: strings(lhs.coeffs()),
            rhs: strings(rhs.coeffs()),
            passed: lhs == rhs,
        }
    }

    fn ring(name: String, lhs: &GroupRingElem, rhs: &GroupRingElem) -> Self {
        IdentityCheck {
            name,
            lhs: strings(lhs.coeffs()),
            rhs: strings(rhs.coeffs()),
            passed: lhs == rhs,
        }
    }

    fn residues(name: String, lhs: Vec<u64>, rhs: Vec<u64>) -> Self {
        IdentityCheck {
            name,
            passed: lhs == rhs,
            lhs: lhs.iter().map(u64::to_string).collect(),
            rhs: rhs.iter().map(u64::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub p: u64,
    pub identities: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.passed)
    }
}

/// `(s - 1) D_i(s) = D_{i-1}(s) - C(p, i)` for `1 <= i <= p - 1`, plus
/// `D_0 = 1 + s + ... + s^{p-1}`.
pub fn d_poly_recurrence_check(p: u64) -> Result<IdentityReport> {
    ensure_prime(p)?;
    let s_minus_1 = IntPoly::from_i64(&[-1, 1]);
    let mut identities = Vec::new();
    let norm = IntPoly::new(vec![BigInt::one(); p as usize]);
    identities.push(IdentityCheck::poly(
        "D_0 = 1 + s + ... + s^(p-1)".into(),
        &d_poly(p, 0)?,
        &norm,
    ));
    for i in 1..p {
        let lhs = s_minus_1.mul(&d_poly(p, i)?);
        let rhs = d_poly(p, i - 1)?.sub(&IntPoly::constant(binomial(p as i64, i as i64)));
        identities.push(IdentityCheck::poly(
            format!("(s-1) D_{i} = D_{} - C(p,{i})", i - 1),
            &lhs,
            &rhs,
        ));
    }
    Ok(IdentityReport { p, identities })
}

/// `A_i = D_i(σ)·α` in `Z[C_p]`.
pub fn a_elem(p: u64, i: u64) -> Result<GroupRingElem> {
    Ok(d_poly(p, i)?.eval_at_sigma(p))
}

/// `(σ - 1) A_i = A_{i-1} - C(p, i) α` for `1 <= i <= p - 1`, its reduction
/// mod `p`, `A_0 = N(α)`, and agreement of `D_i(σ)` with the polynomial image.
pub fn module_recurrence_check(p: u64) -> Result<IdentityReport> {
    ensure_prime(p)?;
    let one = GroupRingElem::one(p);
    let sigma_minus_1 = GroupRingElem::sigma(p).sub(&one);
    let mut identities = vec![IdentityCheck::ring(
        "A_0 = N(alpha)".into(),
        &a_elem(p, 0)?,
        &GroupRingElem::norm(p),
    )];
    for i in 1..p {
        let a_i = a_elem(p, i)?;
        let a_prev = a_elem(p, i - 1)?;
        let c = binomial(p as i64, i as i64);
        let lhs = sigma_minus_1.mul(&a_i);
        let rhs = a_prev.sub(&one.scale(&c));
        identities.push(IdentityCheck::ring(
            format!("(sigma-1) A_{i} = A_{} - C(p,{i}) alpha", i - 1),
            &lhs,
            &rhs,
        ));
        identities.push(IdentityCheck::residues(
            format!("(sigma-1) A_{i} = A_{} mod p", i - 1),
            lhs.reduce_mod_p(),
            a_prev.reduce_mod_p(),
        ));
        // Reducing s^p -> 1 after multiplying agrees with multiplying in Z[C_p].
        let via_poly = IntPoly::from_i64(&[-1, 1])
            .mul(&d_poly(p, i)?)
            .eval_at_sigma(p);
        identities.push(IdentityCheck::ring(
            format!("substitution D_{i}"),
            &via_poly,
            &lhs,
        ));
    }
    Ok(IdentityReport { p, identities })
}

/// `c_{n,t,i} = Σ_{l=0}^{i-1} C(n-1-t, l) C(p, i-l)`.
pub fn correction_coefficient(p: u64, n: u64, t: u64, i: u64) -> BigInt {
    let top = n as i64 - 1 - t as i64;
    (0..i as i64)
        .map(|l| binomial(top, l) * binomial(p as i64, i as i64 - l))
        .sum()
}

/// `σ^n D_i(σ) = Σ_{j=0}^{i} C(n,j) D_{i-j}(σ) - Σ_{t=0}^{n-1} c_{n,t,i} σ^t`,
/// and at `n = p` the cancellation `Σ_{j=1}^{i} C(p,j) D_{i-j}(σ) = Σ_t c_{p,t,i} σ^t`.
pub fn tower_induction_check(p: u64, i: u64, n: u64) -> Result<IdentityReport> {
    ensure_prime(p)?;
    if i == 0 || i >= p {
        return Err(Error::invalid(format!(
            "i = {i} must satisfy 1 <= i <= p - 1"
        )));
    }
    if n == 0 || n > p {
        return Err(Error::invalid(format!("n = {n} must satisfy 1 <= n <= p")));
    }
    let sigma_n = GroupRingElem::term(p, n, 1);
    let lhs = sigma_n.mul(&a_elem(p, i)?);
    let mut binomial_part = GroupRingElem::zero(p);
    for j in 0..=i {
        binomial_part = binomial_part.add(&a_elem(p, i - j)?.scale(&binomial(n as i64, j as i64)));
    }
    let mut correction = GroupRingElem::zero(p);
    for t in 0..n {
        correction = correction.add(&GroupRingElem::term(
            p,
            t,
            correction_coefficient(p, n, t, i),
        ));
    }
    let rhs = binomial_part.sub(&correction);
    let mut identities = vec![IdentityCheck::ring(format!("sigma^{n} A_{i}"), &lhs, &rhs)];
    if n == p {
        let cancel_lhs = binomial_part.sub(&a_elem(p, i)?);
        identities.push(IdentityCheck::ring(
            format!("sigma^p fixes A_{i}"),
            &cancel_lhs,
            &correction,
        ));
    }
    Ok(IdentityReport { p, identities })
}

/// A `d × d` matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FpLinearMap {
    dim: usize,
    p: u64,
    entries: Vec<u64>,
}

impl FpLinearMap {
    pub fn new(p: u64, dim: usize, entries: Vec<u64>) -> Result<Self> {
        ensure_prime(p)?;
        if entries.len() != dim * dim {
            return Err(Error::invalid(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(FpLinearMap {
            dim,
            p,
            entries: entries.into_iter().map(|e| e % p).collect(),
        })
    }

    pub fn zero(p: u64, dim: usize) -> Result<Self> {
        Self::new(p, dim, vec![0; dim * dim])
    }

    pub fn identity(p: u64, dim: usize) -> Result<Self> {
        let mut m = Self::zero(p, dim)?;
        for i in 0..dim {
            m.entries[i * dim + i] = 1 % p;
        }
        Ok(m)
    }

    /// Single nilpotent Jordan block: `e_{j} ↦ e_{j-1}`, `e_0 ↦ 0`.
    pub fn jordan_block(p: u64, dim: usize) -> Result<Self> {
        let mut m = Self::zero(p, dim)?;
        for i in 0..dim.saturating_sub(1) {
            m.entries[i * dim + i + 1] = 1;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn entry(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.dim + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let d = self.dim;
        (0..d)
            .map(|r| {
                let s: u128 = (0..d)
                    .map(|c| self.entries[r * d + c] as u128 * v[c] as u128)
                    .sum();
                (s % self.p as u128) as u64
            })
            .collect()
    }

    pub fn compose(&self, other: &FpLinearMap) -> FpLinearMap {
        let d = self.dim;
        let mut entries = vec![0; d * d];
        for r in 0..d {
            for c in 0..d {
                let s: u128 = (0..d)
                    .map(|t| self.entries[r * d + t] as u128 * other.entries[t * d + c] as u128)
                    .sum();
                entries[r * d + c] = (s % self.p as u128) as u64;
            }
        }
        FpLinearMap {
            dim: d,
            p: self.p,
            entries,
        }
    }

    /// `N^d = 0`.
    pub fn is_nilpotent(&self) -> bool {
        let mut power = FpLinearMap::identity(self.p, self.dim).expect("prime already checked");
        for _ in 0..self.dim {
            power = power.compose(self);
            if power.is_zero() {
                return true;
            }
        }
        power.is_zero()
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<FpLinearMap> {
        let d = self.dim;
        let p = self.p;
        let mut a = self.entries.clone();
        let mut inv = FpLinearMap::identity(p, d).ok()?.entries;
        for col in 0..d {
            let pivot = (col..d).find(|&r| a[r * d + col] != 0)?;
            for c in 0..d {
                a.swap(col * d + c, pivot * d + c);
                inv.swap(col * d + c, pivot * d + c);
            }
            let scale = inv_mod(a[col * d + col], p);
            for c in 0..d {
                a[col * d + c] = a[col * d + c] * scale % p;
                inv[col * d + c] = inv[col * d + c] * scale % p;
            }
            for r in 0..d {
                let f = a[r * d + col];
                if r == col || f == 0 {
                    continue;
                }
                for c in 0..d {
                    a[r * d + c] = (a[r * d + c] + (p - f) * a[col * d + c]) % p;
                    inv[r * d + c] = (inv[r * d + c] + (p - f) * inv[col * d + c]) % p;
                }
            }
        }
        Some(FpLinearMap {
            dim: d,
            p,
            entries: inv,
        })
    }

    /// `P U P^{-1}` with `U` strictly upper triangular and `P` invertible, both uniform.
    pub fn random_nilpotent(p: u64, dim: usize, rng: &mut impl Rng) -> Result<Self> {
        let mut u = Self::zero(p, dim)?;
        for r in 0..dim {
            for c in r + 1..dim {
                u.entries[r * dim + c] = rng.gen_range(0..p);
            }
        }
        loop {
            let mut q = Self::zero(p, dim)?;
            for e in q.entries.iter_mut() {
                *e = rng.gen_range(0..p);
            }
            if let Some(q_inv) = q.inverse() {
                return Ok(q.compose(&u).compose(&q_inv));
            }
        }
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::arith::pow_mod(a, p - 2, p)
}

/// Whether `{v, Nv, ..., N^k v}` is linearly independent over `F_p`.
///
/// Errors when `N` is not nilpotent or `N^k v = 0`.
pub fn nilpotent_independence_check(n: &FpLinearMap, v: &[u64], k: usize) -> Result<bool> {
    if v.len() != n.dim {
        return Err(Error::invalid(format!(
            "vector has length {}, map has dimension {}",
            v.len(),
            n.dim
        )));
    }
    if !n.is_nilpotent() {
        return Err(Error::domain("N is not nilpotent"));
    }
    let p = n.p;
    let mut orbit = Vec::with_capacity(k + 1);
    let mut w: Vec<u64> = v.iter().map(|x| x % p).collect();
    for _ in 0..=k {
        orbit.push(w.clone());
        w = n.apply(&w);
    }
    if orbit[k].iter().all(|&x| x == 0) {
        return Err(Error::domain(format!("N^{k} v is zero")));
    }
    // Incremental echelon basis keyed by pivot column.
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    for mut vec in orbit {
        for (pivot, row) in &basis {
            let f = vec[*pivot];
            if f != 0 {
                for (x, y) in vec.iter_mut().zip(row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        match vec.iter().position(|&x| x != 0) {
            None => return Ok(false),
            Some(pivot) => {
                let scale = inv_mod(vec[pivot], p);
                for x in vec.iter_mut() {
                    *x = *x * scale % p;
                }
                basis.push((pivot, vec));
            }
        }
    }
    Ok(true)
}

/// Rank over `F_p` of a list of vectors, by full row reduction.
pub fn rank_mod_p(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let scale = inv_mod(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * scale % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, Serialize)]
pub struct IndependenceSuiteReport {
    pub p: u64,
    pub max_dim: usize,
    pub seed: u64,
    pub instances: usize,
    pub independent: usize,
    pub rank_agreement: usize,
    pub passed: bool,
}

/// Random nilpotent `N` of dimension `1..=max_dim`, random `v` and the
/// largest `k` with `N^k v != 0`; every orbit must be independent and the
/// row-reduction rank must equal `k + 1`.
pub fn nilpotent_independence_suite(
    p: u64,
    max_dim: usize,
    instances: usize,
    seed: u64,
) -> Result<IndependenceSuiteReport> {
    ensure_prime(p)?;
    if max_dim == 0 {
        return Err(Error::invalid("max_dim must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut independent = 0;
    let mut agreement = 0;
    for _ in 0..instances {
        let d = rng.gen_range(1..=max_dim);
        let n = FpLinearMap::random_nilpotent(p, d, &mut rng)?;
        let v = loop {
            let v: Vec<u64> = (0..d).map(|_| rng.gen_range(0..p)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let mut orbit = vec![v.clone()];
        loop {
            let next = n.apply(orbit.last().expect("nonempty"));
            if next.iter().all(|&x| x == 0) {
                break;
            }
            orbit.push(next);
        }
        let k = orbit.len() - 1;
        let ok = nilpotent_independence_check(&n, &v, k)?;
        if ok {
            independent += 1;
        }
        if ok == (rank_mod_p(&orbit, p) == k + 1) {
            agreement += 1;
        }
    }
    Ok(IndependenceSuiteReport {
        p,
        max_dim,
        seed,
        instances,
        independent,
        rank_agreement: agreement,
        passed: independent == instances && agreement == instances,
    })
}
