//! Unit upper-triangular matrices over `Z/p` and the two-generator witness
//! group `<X, Y>` inside `U_{k+2}(Z/p)`, with
//! `X = I + E_{1,2} + ... + E_{k,k+1}` and `Y = I + E_{k+1,k+2}`.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::arith::ensure_prime;
use crate::error::{Error, Result};
use crate::groups::{closure, lower_central_series, Group, Limits, Subgroup};
use crate::report::Checklist;

/// An element of `U_n(Z/p)`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnipotentMatrix {
    n: usize,
    p: u64,
    entries: Vec<u64>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize, p: u64) -> Self {
        let mut entries = vec![0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        UnipotentMatrix { n, p, entries }
    }

    /// `I + E_{i,j}` with 1-based indices, `i < j`.
    pub fn elementary(n: usize, p: u64, i: usize, j: usize) -> Self {
        assert!(
            1 <= i && i < j && j <= n,
            "E_{{{i},{j}}} is not strictly upper triangular in size {n}"
        );
        let mut m = Self::identity(n, p);
        m.entries[(i - 1) * n + (j - 1)] = 1 % p;
        m
    }

    /// Builds from rows, rejecting anything that is not unit upper triangular mod `p`.
    pub fn from_rows(p: u64, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if n < 2 {
            return Err(Error::invalid("matrix size must be at least 2"));
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::invalid("matrix is not square"));
            }
            for (c, &v) in row.iter().enumerate() {
                let v = v.rem_euclid(p as i64) as u64;
                let ok = match r.cmp(&c) {
                    std::cmp::Ordering::Greater => v == 0,
                    std::cmp::Ordering::Equal => v == 1 % p,
                    std::cmp::Ordering::Less => true,
                };
                if !ok {
                    return Err(Error::domain(format!(
                        "entry ({}, {}) breaks unit upper triangularity",
                        r + 1,
                        c + 1
                    )));
                }
                entries.push(v);
            }
        }
        Ok(UnipotentMatrix { n, p, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// 1-based entry access.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n, self.p)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.p), (other.n, other.p), "matrix shapes differ");
        let n = self.n;
        let p = self.p;
        let mut entries = vec![0; n * n];
        for i in 0..n {
            for j in i..n {
                let mut s: u128 = 0;
                for t in i..=j {
                    s += self.entries[i * n + t] as u128 * other.entries[t * n + j] as u128;
                }
                entries[i * n + j] = (s % p as u128) as u64;
            }
        }
        UnipotentMatrix { n, p, entries }
    }

    /// Solves `self · B = I` column by column by back-substitution.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let p = self.p;
        let mut inv = vec![0u64; n * n];
        for j in 0..n {
            inv[j * n + j] = 1 % p;
            for i in (0..j).rev() {
                let mut s: u128 = 0;
                for t in i + 1..=j {
                    s += self.entries[i * n + t] as u128 * inv[t * n + j] as u128;
                }
                let s = (s % p as u128) as u64;
                inv[i * n + j] = (p - s) % p;
            }
        }
        UnipotentMatrix { n, p, entries: inv }
    }

    /// Smallest `d >= 1` such that some entry on the `d`-th superdiagonal is
    /// nonzero, or `n` for the identity.
    pub fn level(&self) -> usize {
        let n = self.n;
        (1..n)
            .find(|&d| (0..n - d).any(|i| self.entries[i * n + i + d] != 0))
            .unwrap_or(n)
    }
}

#[derive(Serialize)]
struct MatrixJson {
    n: usize,
    p: u64,
    rows: Vec<Vec<u64>>,
}

impl Serialize for UnipotentMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            n: self.n,
            p: self.p,
            rows: self.rows(),
        }
        .serialize(s)
    }
}

/// `U_n(Z/p)` as a [`Group`] carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UnipotentGroup {
    n: usize,
    p: u64,
}

impl UnipotentGroup {
    pub fn new(n: usize, p: u64) -> Result<Self> {
        ensure_prime(p)?;
        if n < 2 {
            return Err(Error::invalid("matrix size must be at least 2"));
        }
        Ok(UnipotentGroup { n, p })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// `I + E_{i,i+1}` for `i = 1..n-1`.
    pub fn standard_generators(&self) -> Vec<UnipotentMatrix> {
        (1..self.n)
            .map(|i| UnipotentMatrix::elementary(self.n, self.p, i, i + 1))
            .collect()
    }

    /// `p^{n(n-1)/2}`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow((self.n * (self.n - 1) / 2) as u32)
    }

    pub fn random_element(&self, rng: &mut impl rand::Rng) -> UnipotentMatrix {
        let mut m = UnipotentMatrix::identity(self.n, self.p);
        for i in 0..self.n {
            for j in i + 1..self.n {
                m.entries[i * self.n + j] = rng.gen_range(0..self.p);
            }
        }
        m
    }
}

impl Group for UnipotentGroup {
    type Elem = UnipotentMatrix;

    fn identity(&self) -> UnipotentMatrix {
        UnipotentMatrix::identity(self.n, self.p)
    }

    fn mul(&self, a: &UnipotentMatrix, b: &UnipotentMatrix) -> UnipotentMatrix {
        a.mul(b)
    }

    fn inv(&self, a: &UnipotentMatrix) -> UnipotentMatrix {
        a.inverse()
    }

    fn encode(&self, a: &UnipotentMatrix) -> Vec<u8> {
        a.entries.iter().flat_map(|e| e.to_be_bytes()).collect()
    }

    fn describe(&self, a: &UnipotentMatrix) -> String {
        let rows: Vec<String> = a
            .rows()
            .iter()
            .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        format!("[{}]", rows.join("; "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessGroupSpec {
    p: u64,
    k: usize,
}

impl WitnessGroupSpec {
    /// Requires `p` prime and `1 <= k <= p - 1`.
    pub fn new(p: u64, k: usize) -> Result<Self> {
        ensure_prime(p)?;
        if k == 0 || k as u64 >= p {
            return Err(Error::invalid(format!(
                "k = {k} must satisfy 1 <= k <= p - 1 = {}",
                p - 1
            )));
        }
        Ok(WitnessGroupSpec { p, k })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Matrix size `k + 2`.
    pub fn size(&self) -> usize {
        self.k + 2
    }

    pub fn carrier(&self) -> UnipotentGroup {
        UnipotentGroup {
            n: self.size(),
            p: self.p,
        }
    }

    /// `p^{k+2}`, or `None` on overflow.
    pub fn expected_order(&self) -> Option<u64> {
        self.p.checked_pow(self.k as u32 + 2)
    }
}

pub fn build_generators(spec: &WitnessGroupSpec) -> (UnipotentMatrix, UnipotentMatrix) {
    let n = spec.size();
    let p = spec.p;
    let mut x = UnipotentMatrix::identity(n, p);
    for i in 1..=spec.k {
        x.entries[(i - 1) * n + i] = 1;
    }
    let y = UnipotentMatrix::elementary(n, p, spec.k + 1, spec.k + 2);
    (x, y)
}

/// `[X^{(i)}, Y] = [X, [X^{(i-1)}, Y]]` with `[X^{(0)}, Y] = Y`.
pub fn iterated_matrix_commutator(
    x: &UnipotentMatrix,
    y: &UnipotentMatrix,
    i: usize,
) -> UnipotentMatrix {
    let g = UnipotentGroup { n: x.n, p: x.p };
    g.iterated_commutator(x, y, i)
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub p: u64,
    pub k: usize,
    pub x: UnipotentMatrix,
    pub y: UnipotentMatrix,
    pub order: usize,
    pub lcs_orders: Vec<usize>,
    pub assertions: Checklist,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.assertions.all_passed()
    }
}

/// Order, defining relations, commutator shapes, lower central series and
/// normal-form bijection for `<X, Y>`.
pub fn witness_group_check(spec: &WitnessGroupSpec, limits: &Limits) -> Result<WitnessReport> {
    let expected = spec
        .expected_order()
        .filter(|o| *o <= limits.max_order as u64)
        .ok_or(Error::ResourceLimit {
            what: format!("p^(k+2) for p = {}, k = {}", spec.p, spec.k),
            bound: limits.max_order,
        })? as usize;
    let g = spec.carrier();
    let (x, y) = build_generators(spec);
    let (p, k, n) = (spec.p, spec.k, spec.size());
    let h = closure(&g, [&x, &y], limits)?;
    let mut checks = Checklist::new();
    checks.check(
        "order",
        "|<X,Y>| = p^(k+2)",
        h.order() == expected,
        format!("enumerated {}, expected {expected}", h.order()),
    );

    let pi = p as i64;
    checks.check("x^p", "X^p = I", g.pow(&x, pi).is_identity(), "");
    checks.check("y^p", "Y^p = I", g.pow(&y, pi).is_identity(), "");
    for i in 1..=k {
        let c = iterated_matrix_commutator(&x, &y, i);
        checks.check(
            format!("[x^({i}),y]^p"),
            format!("[X^({i}),Y]^p = I"),
            g.pow(&c, pi).is_identity(),
            "",
        );
        checks.check(
            format!("[[x^({i}),y],y]"),
            format!("[[X^({i}),Y],Y] = I"),
            g.commutator(&c, &y).is_identity(),
            "",
        );
    }
    checks.check(
        format!("[x^({}),y]", k + 1),
        format!("[X^({}),Y] = I", k + 1),
        iterated_matrix_commutator(&x, &y, k + 1).is_identity(),
        "",
    );

    for i in 0..=k {
        let c = iterated_matrix_commutator(&x, &y, i);
        let target = UnipotentMatrix::elementary(n, p, k + 1 - i, k + 2);
        checks.check(
            format!("commutator_shape_{i}"),
            format!("[X^({i}),Y] = I + E_({},{})", k + 1 - i, k + 2),
            c == target,
            g.describe(&c),
        );
    }
    let top = iterated_matrix_commutator(&x, &y, k);
    checks.check(
        "top_commutator_nontrivial",
        format!("[X^({k}),Y] != I"),
        !top.is_identity(),
        g.describe(&top),
    );

    let lcs = lower_central_series(&g, &h, limits)?;
    let first_trivial = lcs.first_trivial();
    checks.check(
        "lcs_vanishing",
        "the lower central series of <X,Y> first vanishes at step k+2",
        first_trivial == Some(k + 2),
        format!("orders {:?}", lcs.orders()),
    );

    let table = NormalFormTable::build(spec)?;
    let bijective =
        table.len() == h.order() && h.elements().iter().all(|e| table.decompose(e).is_ok());
    checks.check(
        "normal_form_bijection",
        "the p^(k+2) normal-form tuples give each element of <X,Y> exactly once",
        bijective,
        format!("{} distinct products of {} tuples", table.len(), expected),
    );

    Ok(WitnessReport {
        p,
        k,
        x,
        y,
        order: h.order(),
        lcs_orders: lcs.orders(),
        assertions: checks,
    })
}

/// Lookup table from matrices to tuples `(e_k, ..., e_1, e_0, e_{-1})` with
/// `g = [x^(k),y]^{e_k} ... [x,y]^{e_1} y^{e_0} x^{e_{-1}}`.
#[derive(Clone, Debug)]
pub struct NormalFormTable {
    spec: WitnessGroupSpec,
    factors: Vec<UnipotentMatrix>,
    lookup: HashMap<UnipotentMatrix, Vec<u64>>,
}

impl NormalFormTable {
    pub fn build(spec: &WitnessGroupSpec) -> Result<Self> {
        let (x, y) = build_generators(spec);
        let k = spec.k;
        let mut factors: Vec<UnipotentMatrix> = (1..=k)
            .rev()
            .map(|i| iterated_matrix_commutator(&x, &y, i))
            .collect();
        factors.push(y);
        factors.push(x);
        let mut table = NormalFormTable {
            spec: *spec,
            factors,
            lookup: HashMap::new(),
        };
        let total = spec
            .expected_order()
            .ok_or_else(|| Error::invalid("normal-form table too large"))?;
        let len = k + 2;
        let mut tuple = vec![0u64; len];
        for _ in 0..total {
            let g = table.compose(&tuple)?;
            table.lookup.entry(g).or_insert_with(|| tuple.clone());
            for slot in tuple.iter_mut().rev() {
                *slot += 1;
                if *slot < spec.p {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(table)
    }

    /// Number of distinct matrices produced by the tuples.
    pub fn len(&self) -> usize {
        self.lookup.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lookup.is_empty()
    }

    pub fn compose(&self, tuple: &[u64]) -> Result<UnipotentMatrix> {
        if tuple.len() != self.factors.len() {
            return Err(Error::invalid(format!(
                "normal form needs {} exponents, got {}",
                self.factors.len(),
                tuple.len()
            )));
        }
        let g = self.spec.carrier();
        Ok(self
            .factors
            .iter()
            .zip(tuple)
            .fold(g.identity(), |acc, (f, &e)| {
                g.mul(&acc, &g.pow(f, e as i64))
            }))
    }

    pub fn decompose(&self, g: &UnipotentMatrix) -> Result<Vec<u64>> {
        self.lookup
            .get(g)
            .cloned()
            .ok_or_else(|| Error::Membership(format!("{:?} is not in <X,Y>", g.rows())))
    }
}

/// One-shot decomposition; builds the table each call.
pub fn normal_form_decompose(g: &UnipotentMatrix, spec: &WitnessGroupSpec) -> Result<Vec<u64>> {
    NormalFormTable::build(spec)?.decompose(g)
}

/// Pairs `(γ, δ)` are enumerated exhaustively up to this many.
pub const EXHAUSTIVE_PAIRS: usize = 10_000;
/// Number of seeded pairs drawn otherwise.
pub const SAMPLED_PAIRS: usize = 1_000;

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub k: usize,
    pub order: usize,
    pub frattini_order: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub pairs_checked: usize,
    pub counterexamples: Vec<String>,
    pub assertions: Checklist,
}

impl CongruenceReport {
    pub fn passed(&self) -> bool {
        self.assertions.all_passed()
    }
}

/// With `H = <X,Y>` at `k = p - 1`, `σ = Xγ` and `τ = Yδ` for `γ, δ ∈ H_2`:
/// `[σ^(i),τ] [X^(i),Y]^{-1} ∈ H_{i+2}` for `1 <= i <= p-1`, and
/// `[σ^(p-1),τ] = [X^(p-1),Y] != I`.
pub fn congruence_check(p: u64, seed: u64, limits: &Limits) -> Result<CongruenceReport> {
    ensure_prime(p)?;
    if p == 2 {
        return Err(Error::invalid("p must be odd"));
    }
    let spec = WitnessGroupSpec::new(p, (p - 1) as usize)?;
    let k = spec.k;
    let g = spec.carrier();
    let (x, y) = build_generators(&spec);
    let h = closure(&g, [&x, &y], limits)?;
    let lcs = lower_central_series(&g, &h, limits)?;
    let h2 = lcs.term(2);
    let frattini = crate::groups::product(
        &g,
        &[
            h2,
            &crate::groups::power_subgroup(&g, &h, p as i64, limits)?,
        ],
        limits,
    )?;

    let mut checks = Checklist::new();
    checks.check(
        "frattini",
        "Frattini subgroup of H equals [H,H] = H_2",
        frattini.same_elements(h2),
        format!("|H_2| = {}, |Phi(H)| = {}", h2.order(), frattini.order()),
    );

    let targets: Vec<UnipotentMatrix> = (0..=k)
        .map(|i| iterated_matrix_commutator(&x, &y, i))
        .collect();
    let elems = h2.elements();
    let pair_count = elems.len().saturating_mul(elems.len());
    let exhaustive = pair_count <= EXHAUSTIVE_PAIRS;
    let pairs: Vec<(&UnipotentMatrix, &UnipotentMatrix)> = if exhaustive {
        elems
            .iter()
            .flat_map(|a| elems.iter().map(move |b| (a, b)))
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_PAIRS)
            .map(|_| {
                let a = elems.choose(&mut rng).expect("H_2 is nonempty");
                let b = elems.choose(&mut rng).expect("H_2 is nonempty");
                (a, b)
            })
            .collect()
    };

    let mut counterexamples = Vec::new();
    let mut congruence_ok = true;
    let mut top_ok = true;
    for (gamma, delta) in &pairs {
        let sigma = g.mul(&x, gamma);
        let tau = g.mul(&y, delta);
        let mut c = tau.clone();
        for (i, target) in targets.iter().enumerate().take(k + 1).skip(1) {
            c = g.commutator(&sigma, &c);
            let quotient = g.mul(&c, &g.inv(target));
            if !lcs.term(i + 2).contains(&quotient) {
                congruence_ok = false;
                counterexamples.push(format!(
                    "i = {i}, gamma = {}, delta = {}",
                    g.describe(gamma),
                    g.describe(delta)
                ));
            }
        }
        if c != targets[k] || c.is_identity() {
            top_ok = false;
            counterexamples.push(format!(
                "top: gamma = {}, delta = {}",
                g.describe(gamma),
                g.describe(delta)
            ));
        }
    }
    checks.check(
        "congruence",
        "[sigma^(i),tau] = [X^(i),Y] mod H_(i+2) for 1 <= i <= p-1",
        congruence_ok,
        format!("{} pairs", pairs.len()),
    );
    checks.check(
        "top_equality",
        "[sigma^(p-1),tau] = [X^(p-1),Y] and it is not I",
        top_ok,
        g.describe(&targets[k]),
    );
    Ok(CongruenceReport {
        p,
        k,
        order: h.order(),
        frattini_order: frattini.order(),
        exhaustive,
        seed,
        pairs_checked: pairs.len(),
        counterexamples,
        assertions: checks,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct LcsVanishingReport {
    pub n: usize,
    pub p: u64,
    /// `enumeration` or `level-sampling`.
    pub method: String,
    pub lcs_orders: Vec<usize>,
    pub samples: usize,
    pub passed: bool,
}

/// Checks that the lower central series of `U_n(Z/p)` reaches `1` at step `n`.
///
/// Groups of order at most `limits.max_order` are enumerated and the series
/// is computed outright; it must have `γ_i` equal to the matrices vanishing
/// on the first `i - 1` superdiagonals. Larger groups are checked through
/// `level([g,h]) >= level(g) + level(h)` on `samples` seeded random pairs
/// drawn at every pair of levels.
pub fn lcs_vanishing_check(
    n: usize,
    p: u64,
    seed: u64,
    samples: usize,
    limits: &Limits,
) -> Result<LcsVanishingReport> {
    let g = UnipotentGroup::new(n, p)?;
    let small = g.order().is_some_and(|o| o <= limits.max_order as u64);
    if small {
        let gens = g.standard_generators();
        let whole: Subgroup<UnipotentMatrix> = closure(&g, gens.iter(), limits)?;
        let lcs = lower_central_series(&g, &whole, limits)?;
        let by_level = (1..=n).all(|i| {
            let term = lcs.term(i);
            let expected = p.pow(((n - i) * (n - i + 1) / 2) as u32) as usize;
            term.order() == expected && term.elements().iter().all(|e| e.level() >= i)
        });
        let passed =
            Some(whole.order() as u64) == g.order() && lcs.first_trivial() == Some(n) && by_level;
        return Ok(LcsVanishingReport {
            n,
            p,
            method: "enumeration".into(),
            lcs_orders: lcs.orders(),
            samples: 0,
            passed,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = true;
    let mut count = 0;
    for a in 1..n {
        for b in 1..n {
            for _ in 0..samples {
                let x = random_at_level(&g, a, &mut rng);
                let y = random_at_level(&g, b, &mut rng);
                count += 1;
                if g.commutator(&x, &y).level() < (a + b).min(n) {
                    passed = false;
                }
            }
        }
    }
    Ok(LcsVanishingReport {
        n,
        p,
        method: "level-sampling".into(),
        lcs_orders: Vec::new(),
        samples: count,
        passed,
    })
}

fn random_at_level(g: &UnipotentGroup, level: usize, rng: &mut impl rand::Rng) -> UnipotentMatrix {
    let mut m = g.random_element(rng);
    let n = g.n;
    for i in 0..n {
        for j in i + 1..n.min(i + level) {
            m.entries[i * n + j] = 0;
        }
    }
    m
}
