//! The metacyclic group `G(a,m) = <σ, τ | τ^{p^m} = σ^{p^{m-k}} = 1, στσ^{-1} = τ^{p^k+1}>`,
//! its action on the Kummer symbols `ζ_{p^m}` and `ᵖᵐ√a`, and the finite
//! quotients `(Z/p^M)^I ⋊ Z/p^{M-k}` of the cyclotomic radical presentation.
//!
//! Elements are kept in the normal form `τ^a σ^b` with `0 <= a < p^m` and
//! `0 <= b < p^{m-k}`. Moving `σ^b` past `τ^c` uses
//! `σ^b τ^c σ^{-b} = τ^{c(1+p^k)^b}`, giving
//! `(τ^{a1} σ^{b1})(τ^{a2} σ^{b2}) = τ^{a1 + a2(1+p^k)^{b1}} σ^{b1+b2}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{ensure_prime, pow_mod};
use crate::error::{Error, Result};
use crate::groups::{
    closure, exponent, is_powerful, lower_central_series, p_descending_series, power_subgroup,
    zassenhaus_filtration, zassenhaus_inside_p_descending, zassenhaus_lazard, Group, Limits,
};
use crate::report::Checklist;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MetacyclicParams {
    p: u64,
    k: u32,
    m: u32,
}

impl MetacyclicParams {
    /// Requires `p` prime, `k >= 1` (`k >= 2` for `p = 2`) and `m >= k`.
    pub fn new(p: u64, k: u32, m: u32) -> Result<Self> {
        ensure_prime(p)?;
        let min_k = if p == 2 { 2 } else { 1 };
        if k < min_k {
            return Err(Error::invalid(format!(
                "k = {k} must be at least {min_k} for p = {p}"
            )));
        }
        if m < k {
            return Err(Error::invalid(format!("m = {m} must be at least k = {k}")));
        }
        let order = (p as u128).checked_pow(2 * m - k);
        if order.is_none_or(|o| o > u64::MAX as u128 / 4) {
            return Err(Error::invalid("group order does not fit in 64 bits"));
        }
        Ok(MetacyclicParams { p, k, m })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `p^m`, the order of τ.
    pub fn tau_order(&self) -> u64 {
        self.p.pow(self.m)
    }

    /// `p^{m-k}`, the order of σ.
    pub fn sigma_order(&self) -> u64 {
        self.p.pow(self.m - self.k)
    }

    pub fn order(&self) -> u64 {
        self.tau_order() * self.sigma_order()
    }

    /// `1 + p^k mod p^m`, the exponent by which σ acts on τ and on `ζ_{p^m}`.
    pub fn cyclotomic_unit(&self) -> u64 {
        (1 + self.p.pow(self.k)) % self.tau_order()
    }

    /// `m = k`: σ is trivial and the group is cyclic of order `p^m`.
    pub fn is_degenerate(&self) -> bool {
        self.m == self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct MetacyclicElement {
    params: MetacyclicParams,
    /// τ-exponent, reduced mod `p^m`.
    a: u64,
    /// σ-exponent, reduced mod `p^{m-k}`.
    b: u64,
}

impl MetacyclicElement {
    pub fn new(params: MetacyclicParams, a: i128, b: i128) -> Self {
        MetacyclicElement {
            params,
            a: a.rem_euclid(params.tau_order() as i128) as u64,
            b: b.rem_euclid(params.sigma_order() as i128) as u64,
        }
    }

    pub fn params(&self) -> MetacyclicParams {
        self.params
    }

    pub fn tau_exponent(&self) -> u64 {
        self.a
    }

    pub fn sigma_exponent(&self) -> u64 {
        self.b
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

pub fn mc_mul(g: &MetacyclicElement, h: &MetacyclicElement) -> Result<MetacyclicElement> {
    if g.params != h.params {
        return Err(Error::invalid("elements belong to different G(a,m)"));
    }
    let params = g.params;
    let n = params.tau_order();
    let twist = pow_mod(params.cyclotomic_unit(), g.b, n);
    let a = (g.a as u128 + h.a as u128 * twist as u128) % n as u128;
    let b = (g.b + h.b) % params.sigma_order();
    Ok(MetacyclicElement {
        params,
        a: a as u64,
        b,
    })
}

pub fn mc_inverse(g: &MetacyclicElement) -> MetacyclicElement {
    // (τ^a σ^b)^{-1} = σ^{-b} τ^{-a} = τ^{-a(1+p^k)^{-b}} σ^{-b}.
    let params = g.params;
    let n = params.tau_order();
    let s = params.sigma_order();
    let neg_b = (s - g.b % s) % s;
    // (1+p^k) has multiplicative order dividing p^{m-k} mod p^m.
    let twist = pow_mod(params.cyclotomic_unit(), neg_b, n);
    let a = (n as u128 - (g.a as u128 * twist as u128) % n as u128) % n as u128;
    MetacyclicElement {
        params,
        a: a as u64,
        b: neg_b,
    }
}

/// `g^e` by square-and-multiply on the bits of `|e|`.
pub fn mc_power(g: &MetacyclicElement, e: &BigInt) -> MetacyclicElement {
    let mut base = if e.is_negative() { mc_inverse(g) } else { *g };
    let mut n = e.abs();
    let mut acc = MetacyclicElement::new(g.params, 0, 0);
    let two = BigInt::from(2);
    while !n.is_zero() {
        let (q, r) = n.div_rem(&two);
        if !r.is_zero() {
            acc = mc_mul(&acc, &base).expect("same params");
        }
        n = q;
        if !n.is_zero() {
            base = mc_mul(&base, &base).expect("same params");
        }
    }
    acc
}

/// Action of an element on the Kummer symbols, as exponents of `ζ = ζ_{p^m}`:
/// the element sends `ᵖᵐ√a ↦ ζ^root · ᵖᵐ√a` and `ζ ↦ ζ^zeta`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KummerAction {
    pub root: u64,
    pub zeta: u64,
}

impl KummerAction {
    pub fn identity() -> Self {
        KummerAction { root: 0, zeta: 1 }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &KummerAction, modulus: u64) -> KummerAction {
        let m = modulus as u128;
        KummerAction {
            root: ((self.root as u128 + self.zeta as u128 * other.root as u128) % m) as u64,
            zeta: ((self.zeta as u128 * other.zeta as u128) % m) as u64,
        }
    }

    fn power(&self, mut e: u64, modulus: u64) -> KummerAction {
        let mut acc = KummerAction::identity();
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base, modulus);
            }
            base = base.compose(&base, modulus);
            e >>= 1;
        }
        acc
    }
}

/// Composes the generator actions `τ: (root 1, ζ fixed)` and
/// `σ: (root fixed, ζ ↦ ζ^{1+p^k})` along the normal form `τ^a σ^b`.
pub fn kummer_action(g: &MetacyclicElement) -> KummerAction {
    let params = g.params;
    let n = params.tau_order();
    let tau = KummerAction {
        root: 1 % n,
        zeta: 1 % n,
    };
    let sigma = KummerAction {
        root: 0,
        zeta: params.cyclotomic_unit(),
    };
    tau.power(g.a, n).compose(&sigma.power(g.b, n), n)
}

/// Exponent `c` with `g(ᵖᵐ√a) = ζ^c · ᵖᵐ√a`.
pub fn act_on_root(g: &MetacyclicElement) -> u64 {
    kummer_action(g).root
}

/// Unit `u` with `g(ζ) = ζ^u`.
pub fn act_on_zeta(g: &MetacyclicElement) -> u64 {
    kummer_action(g).zeta
}

/// `G(a,m)` as a [`Group`] carrier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetacyclicGroup {
    params: MetacyclicParams,
}

impl MetacyclicGroup {
    pub fn new(params: MetacyclicParams) -> Self {
        MetacyclicGroup { params }
    }

    pub fn params(&self) -> MetacyclicParams {
        self.params
    }

    pub fn tau(&self) -> MetacyclicElement {
        self.element(1, 0)
    }

    pub fn sigma(&self) -> MetacyclicElement {
        self.element(0, 1)
    }

    /// `τ^a σ^b`.
    pub fn element(&self, a: i128, b: i128) -> MetacyclicElement {
        MetacyclicElement::new(self.params, a, b)
    }

    pub fn elements(&self) -> Vec<MetacyclicElement> {
        let mut out = Vec::with_capacity(self.params.order() as usize);
        for a in 0..self.params.tau_order() {
            for b in 0..self.params.sigma_order() {
                out.push(self.element(a as i128, b as i128));
            }
        }
        out
    }
}

impl Group for MetacyclicGroup {
    type Elem = MetacyclicElement;

    fn identity(&self) -> MetacyclicElement {
        self.element(0, 0)
    }

    fn mul(&self, a: &MetacyclicElement, b: &MetacyclicElement) -> MetacyclicElement {
        mc_mul(a, b).expect("elements of one carrier share params")
    }

    fn inv(&self, a: &MetacyclicElement) -> MetacyclicElement {
        mc_inverse(a)
    }

    fn encode(&self, a: &MetacyclicElement) -> Vec<u8> {
        let mut out = a.a.to_be_bytes().to_vec();
        out.extend_from_slice(&a.b.to_be_bytes());
        out
    }

    fn describe(&self, a: &MetacyclicElement) -> String {
        format!("tau^{} sigma^{}", a.a, a.b)
    }

    fn pow(&self, a: &MetacyclicElement, e: i64) -> MetacyclicElement {
        mc_power(a, &BigInt::from(e))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub p: u64,
    pub k: u32,
    pub m: u32,
    pub degenerate: bool,
    pub order: usize,
    pub exponent: u64,
    pub lcs_orders: Vec<usize>,
    pub pds_orders: Vec<usize>,
    pub zassenhaus_orders: Vec<usize>,
    pub lazard_orders: Vec<usize>,
    pub powerful: bool,
    pub n0: Option<usize>,
    pub m0: Option<usize>,
    pub assertions: Checklist,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.assertions.all_passed()
    }
}

/// Enumerates `G(a,m)` through the generic engine and checks the
/// closed-form descriptions of its order, filtrations and exponent.
pub fn verify_metacyclic_structure(
    params: MetacyclicParams,
    limits: &Limits,
) -> Result<StructureReport> {
    if params.order() > limits.max_order as u64 {
        return Err(Error::ResourceLimit {
            what: format!("|G(a,m)| = {}", params.order()),
            bound: limits.max_order,
        });
    }
    let (p, k, m) = (params.p, params.k, params.m);
    let g = MetacyclicGroup::new(params);
    let whole = closure(&g, [&g.tau(), &g.sigma()], limits)?;
    let lcs = lower_central_series(&g, &whole, limits)?;
    let pds = p_descending_series(&g, &whole, p, limits)?;
    let zas = zassenhaus_filtration(&g, &whole, p, limits)?;
    let laz = zassenhaus_lazard(&g, &whole, p, limits)?;
    let powerful = is_powerful(&g, &whole, p, limits)?;
    let exp = exponent(&g, &whole)?;
    let n0 = pds.first_trivial();
    let m0 = zas.first_trivial();

    let mut checks = Checklist::new();
    let expected_order = params.order() as usize;
    checks.check(
        "order",
        "|G(a,m)| = p^(2m-k)",
        whole.order() == expected_order,
        format!(
            "enumerated {} elements, expected {expected_order}",
            whole.order()
        ),
    );

    // G_{i+1} = <τ^{p^{ki}}>; checked one index past the end of the chain.
    let mut lcs_ok = true;
    let mut lcs_detail = String::new();
    for i in 1..=lcs.len() {
        let e = p.checked_pow(k * i as u32).unwrap_or(0) as i128;
        let expected = closure(&g, [&g.element(e, 0)], limits)?;
        let actual = lcs.term(i + 1);
        if !actual.same_elements(&expected) {
            lcs_ok = false;
            lcs_detail = format!(
                "G_{} has order {}, <tau^(p^{})> has order {}",
                i + 1,
                actual.order(),
                k * i as u32,
                expected.order()
            );
            break;
        }
    }
    checks.check(
        "lower_central_series",
        "G_{i+1} = <tau^(p^(k i))> for all i >= 1",
        lcs_ok,
        if lcs_ok {
            format!("orders {:?}", lcs.orders())
        } else {
            lcs_detail
        },
    );

    checks.check(
        "powerful",
        "[G,G] lies in G^p (G^4 when p = 2)",
        powerful,
        format!("powerful = {powerful}"),
    );

    let mut zas_ok = true;
    let mut zas_detail = format!("orders {:?}", zas.orders());
    for n in 1..=zas.len() {
        // s with p^{s-1} < n <= p^s
        let mut s = 0u32;
        while p.pow(s) < n as u64 {
            s += 1;
        }
        let closed_form = power_subgroup(&g, &whole, p.pow(s) as i64, limits)?;
        if !zas.term(n).same_elements(&closed_form) {
            zas_ok = false;
            zas_detail = format!(
                "G_({n}) has order {}, G^(p^{s}) has order {}",
                zas.term(n).order(),
                closed_form.order()
            );
            break;
        }
    }
    checks.check(
        "zassenhaus_closed_form",
        "G_(n) = G^(p^s) with p^(s-1) < n <= p^s",
        zas_ok,
        zas_detail,
    );

    let lazard_ok =
        zas.len() == laz.len() && (1..=zas.len()).all(|n| zas.term(n).same_elements(laz.term(n)));
    checks.check(
        "zassenhaus_lazard",
        "G_(n) = prod over i p^h >= n of G_i^(p^h)",
        lazard_ok,
        format!("recursive {:?}, Lazard {:?}", zas.orders(), laz.orders()),
    );

    let expected_exp = params.tau_order();
    checks.check(
        "exponent",
        "exponent of G(a,m) is p^m",
        exp == expected_exp,
        format!("exponent {exp}, expected {expected_exp}"),
    );
    checks.check(
        "n0",
        "smallest n0 with G^(n0) = 1 is m + 1",
        n0 == Some(m as usize + 1),
        format!("n0 = {n0:?}, expected {}", m + 1),
    );
    let expected_m0 = p.pow(m - 1) as usize + 1;
    checks.check(
        "m0",
        "smallest m0 with G_(m0) = 1 is p^(m-1) + 1",
        m0 == Some(expected_m0),
        format!("m0 = {m0:?}, expected {expected_m0}"),
    );
    for l in [2u32, 3] {
        checks.check(
            format!("zassenhaus_in_p_descending_l{l}"),
            format!("G_(p^{} + 1) lies in G^({})", l - 1, l + 1),
            zassenhaus_inside_p_descending(&zas, &pds, p, l),
            "",
        );
    }

    Ok(StructureReport {
        p,
        k,
        m,
        degenerate: params.is_degenerate(),
        order: whole.order(),
        exponent: exp,
        lcs_orders: lcs.orders(),
        pds_orders: pds.orders(),
        zassenhaus_orders: zas.orders(),
        lazard_orders: laz.orders(),
        powerful,
        n0,
        m0,
        assertions: checks,
    })
}

/// Checks `[σ^μ τ^ν, τ^λ] = τ^{λ((1+p^k)^μ - 1)}` in `G(a,m)`.
pub fn cyclotomic_commutator_identity(
    params: MetacyclicParams,
    mu: u64,
    nu: u64,
    lambda: u64,
) -> bool {
    let g = MetacyclicGroup::new(params);
    let n = params.tau_order();
    let lhs = {
        let s = g.pow(&g.sigma(), mu as i64);
        let t = g.pow(&g.tau(), nu as i64);
        g.commutator(&g.mul(&s, &t), &g.pow(&g.tau(), lambda as i64))
    };
    let unit_power = pow_mod(params.cyclotomic_unit(), mu, n) as i128;
    let rhs = g.element(lambda as i128 * (unit_power - 1), 0);
    lhs == rhs
}

/// Parameters of the finite quotient `<σ, τ_1..τ_r>` with `τ_i` of order
/// `p^M`, σ of order `p^{M-k}`, `[τ_i, τ_j] = 1` and `[σ, τ_i] = τ_i^{p^k}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CrParams {
    p: u64,
    k: u32,
    precision: u32,
    rank: usize,
}

impl CrParams {
    pub fn new(p: u64, k: u32, precision: u32, rank: usize) -> Result<Self> {
        // Same constraints as G(a,M).
        MetacyclicParams::new(p, k, precision)?;
        if rank == 0 {
            return Err(Error::invalid("the index set must be nonempty"));
        }
        Ok(CrParams {
            p,
            k,
            precision,
            rank,
        })
    }

    pub fn tau_order(&self) -> u64 {
        self.p.pow(self.precision)
    }

    pub fn sigma_order(&self) -> u64 {
        self.p.pow(self.precision - self.k)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `p^{M|I|} · p^{M-k}`, or `None` on overflow.
    pub fn order(&self) -> Option<u64> {
        self.tau_order()
            .checked_pow(self.rank as u32)?
            .checked_mul(self.sigma_order())
    }

    fn unit(&self) -> u64 {
        (1 + self.p.pow(self.k)) % self.tau_order()
    }
}

/// `(Π τ_i^{a_i}) σ^b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CrElement {
    a: Vec<u64>,
    b: u64,
}

impl CrElement {
    pub fn tau_exponents(&self) -> &[u64] {
        &self.a
    }

    pub fn sigma_exponent(&self) -> u64 {
        self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrQuotient {
    params: CrParams,
}

impl CrQuotient {
    pub fn new(params: CrParams) -> Self {
        CrQuotient { params }
    }

    pub fn params(&self) -> CrParams {
        self.params
    }

    pub fn element(&self, a: &[i128], b: i128) -> CrElement {
        assert_eq!(a.len(), self.params.rank, "one τ-exponent per index");
        let n = self.params.tau_order() as i128;
        CrElement {
            a: a.iter().map(|x| x.rem_euclid(n) as u64).collect(),
            b: b.rem_euclid(self.params.sigma_order() as i128) as u64,
        }
    }

    pub fn sigma(&self) -> CrElement {
        self.element(&vec![0; self.params.rank], 1)
    }

    pub fn tau(&self, i: usize) -> CrElement {
        let mut a = vec![0; self.params.rank];
        a[i] = 1;
        self.element(&a, 0)
    }
}

impl Group for CrQuotient {
    type Elem = CrElement;

    fn identity(&self) -> CrElement {
        self.element(&vec![0; self.params.rank], 0)
    }

    fn mul(&self, g: &CrElement, h: &CrElement) -> CrElement {
        let n = self.params.tau_order() as u128;
        let twist = pow_mod(self.params.unit(), g.b, n as u64) as u128;
        CrElement {
            a: g.a
                .iter()
                .zip(&h.a)
                .map(|(x, y)| ((*x as u128 + *y as u128 * twist) % n) as u64)
                .collect(),
            b: (g.b + h.b) % self.params.sigma_order(),
        }
    }

    fn inv(&self, g: &CrElement) -> CrElement {
        let n = self.params.tau_order() as u128;
        let s = self.params.sigma_order();
        let neg_b = (s - g.b % s) % s;
        let twist = pow_mod(self.params.unit(), neg_b, n as u64) as u128;
        CrElement {
            a: g.a
                .iter()
                .map(|x| ((n - (*x as u128 * twist) % n) % n) as u64)
                .collect(),
            b: neg_b,
        }
    }

    fn encode(&self, g: &CrElement) -> Vec<u8> {
        g.a.iter()
            .chain(std::iter::once(&g.b))
            .flat_map(|x| x.to_be_bytes())
            .collect()
    }

    fn describe(&self, g: &CrElement) -> String {
        let taus: Vec<String> =
            g.a.iter()
                .enumerate()
                .map(|(i, e)| format!("tau{}^{e}", i + 1))
                .collect();
        format!("{} sigma^{}", taus.join(" "), g.b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrReport {
    pub p: u64,
    pub k: u32,
    pub precision: u32,
    pub rank: usize,
    pub order: usize,
    pub assertions: Checklist,
}

impl CrReport {
    pub fn passed(&self) -> bool {
        self.assertions.all_passed()
    }
}

/// Checks the three relation families and the order of the finite quotient.
pub fn cr_quotient_check(
    p: u64,
    k: u32,
    precision: u32,
    rank: usize,
    limits: &Limits,
) -> Result<CrReport> {
    let params = CrParams::new(p, k, precision, rank)?;
    let expected = params
        .order()
        .filter(|o| *o <= limits.max_order as u64)
        .ok_or(Error::ResourceLimit {
            what: "CR quotient order".into(),
            bound: limits.max_order,
        })?;
    let q = CrQuotient::new(params);
    let sigma = q.sigma();
    let taus: Vec<CrElement> = (0..rank).map(|i| q.tau(i)).collect();
    let mut gens = vec![&sigma];
    gens.extend(taus.iter());
    let whole = closure(&q, gens, limits)?;

    let mut checks = Checklist::new();
    checks.check(
        "order",
        "|quotient| = p^(M|I|) p^(M-k)",
        whole.order() as u64 == expected,
        format!("enumerated {}, expected {expected}", whole.order()),
    );
    let commuting = taus
        .iter()
        .all(|a| taus.iter().all(|b| q.is_identity(&q.commutator(a, b))));
    checks.check(
        "tau_commute",
        "[tau_i, tau_j] = 1 for all i, j",
        commuting,
        "",
    );
    let pk = p.pow(k) as i64;
    let twisted = taus.iter().all(|t| q.commutator(&sigma, t) == q.pow(t, pk));
    checks.check(
        "sigma_tau",
        "[sigma, tau_i] = tau_i^(p^k) for all i",
        twisted,
        "",
    );
    let orders_ok = taus
        .iter()
        .all(|t| q.is_identity(&q.pow(t, params.tau_order() as i64)))
        && q.is_identity(&q.pow(&sigma, params.sigma_order() as i64));
    checks.check(
        "generator_orders",
        "tau_i^(p^M) = 1 and sigma^(p^(M-k)) = 1",
        orders_ok,
        "",
    );
    let tau_sub = closure(&q, taus.iter(), limits)?;
    let abelian = if tau_sub.order().saturating_pow(2) <= limits.pair_validation {
        tau_sub.elements().iter().all(|a| {
            tau_sub
                .elements()
                .iter()
                .all(|b| q.is_identity(&q.commutator(a, b)))
        })
    } else {
        commuting
    };
    checks.check(
        "tau_subgroup_abelian",
        "<tau_i : i in I> is abelian of order p^(M|I|)",
        abelian && tau_sub.order() as u64 == params.tau_order().pow(rank as u32),
        format!("|<tau_i>| = {}", tau_sub.order()),
    );
    Ok(CrReport {
        p,
        k,
        precision,
        rank,
        order: whole.order(),
        assertions: checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g327() -> MetacyclicGroup {
        MetacyclicGroup::new(MetacyclicParams::new(3, 1, 2).unwrap())
    }

    #[test]
    fn params_validation() {
        assert!(MetacyclicParams::new(4, 1, 2).is_err());
        assert!(MetacyclicParams::new(2, 1, 2).is_err());
        assert!(MetacyclicParams::new(3, 2, 1).is_err());
        assert!(MetacyclicParams::new(2, 2, 3).is_ok());
        assert!(MetacyclicParams::new(3, 1, 1).unwrap().is_degenerate());
    }

    #[test]
    fn mul_examples() {
        let g = g327();
        let ts = g.mul(&g.tau(), &g.sigma());
        assert_eq!(g.mul(&ts, &g.tau()), g.element(5, 1));
        assert_eq!(g.mul(&ts, &g.identity()), ts);
        let conj = g.mul(&g.mul(&g.sigma(), &g.tau()), &g.inv(&g.sigma()));
        assert_eq!(conj, g.element(4, 0));
    }

    #[test]
    fn mul_rejects_mixed_params() {
        let a = MetacyclicGroup::new(MetacyclicParams::new(3, 1, 2).unwrap()).tau();
        let b = MetacyclicGroup::new(MetacyclicParams::new(3, 1, 3).unwrap()).tau();
        assert!(matches!(mc_mul(&a, &b), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn power_examples() {
        let g = g327();
        let ts = g.mul(&g.tau(), &g.sigma());
        assert_eq!(mc_power(&ts, &BigInt::from(3)), g.element(3, 0));
        assert_eq!(mc_power(&g.tau(), &BigInt::from(9)), g.identity());
        assert_eq!(mc_inverse(&g.identity()), g.identity());
        assert_eq!(mc_power(&ts, &BigInt::from(-1)), mc_inverse(&ts));
    }

    #[test]
    fn inverse_is_two_sided() {
        let g = MetacyclicGroup::new(MetacyclicParams::new(5, 1, 3).unwrap());
        for x in g.elements() {
            assert_eq!(g.mul(&x, &mc_inverse(&x)), g.identity());
            assert_eq!(g.mul(&mc_inverse(&x), &x), g.identity());
        }
    }

    #[test]
    fn kummer_action_on_generators() {
        let g = g327();
        assert_eq!(act_on_root(&g.tau()), 1);
        assert_eq!(act_on_zeta(&g.tau()), 1);
        assert_eq!(act_on_root(&g.sigma()), 0);
        assert_eq!(act_on_zeta(&g.sigma()), 4);
    }

    #[test]
    fn geometric_sum_in_powers() {
        // τ-exponent of (τσ^w)^n is Σ_{j<n} (1+p^k)^{wj} mod p^m.
        let params = MetacyclicParams::new(3, 1, 3).unwrap();
        let g = MetacyclicGroup::new(params);
        for w in 0..9 {
            let x = g.element(1, w);
            for n in 0..40u64 {
                let expected =
                    (0..n).fold(0u64, |acc, j| (acc + pow_mod(4, w as u64 * j, 27)) % 27);
                assert_eq!(mc_power(&x, &BigInt::from(n)).tau_exponent(), expected);
            }
        }
    }

    #[test]
    fn cyclotomic_identity_examples() {
        let p32 = MetacyclicParams::new(3, 1, 2).unwrap();
        let p33 = MetacyclicParams::new(3, 1, 3).unwrap();
        assert!(cyclotomic_commutator_identity(p32, 0, 2, 5));
        assert!(cyclotomic_commutator_identity(p32, 1, 0, 1));
        let g = g327();
        assert_eq!(g.commutator(&g.sigma(), &g.tau()), g.element(3, 0));
        assert!(cyclotomic_commutator_identity(p33, 2, 1, 2));
        let g33 = MetacyclicGroup::new(p33);
        let lhs = g33.commutator(
            &g33.mul(&g33.pow(&g33.sigma(), 2), &g33.tau()),
            &g33.pow(&g33.tau(), 2),
        );
        assert_eq!(lhs, g33.element(3, 0));
    }

    #[test]
    fn structure_report_p3_m2() {
        let r = verify_metacyclic_structure(
            MetacyclicParams::new(3, 1, 2).unwrap(),
            &Limits::default(),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert_eq!(r.order, 27);
        assert_eq!(r.exponent, 9);
        assert_eq!(r.n0, Some(3));
        assert_eq!(r.m0, Some(4));
        assert_eq!(r.lcs_orders, vec![27, 3, 1]);
        assert_eq!(r.zassenhaus_orders, vec![27, 3, 3, 1]);
        assert_eq!(r.pds_orders, vec![27, 3, 1]);
    }

    #[test]
    fn structure_report_degenerate() {
        let r = verify_metacyclic_structure(
            MetacyclicParams::new(3, 1, 1).unwrap(),
            &Limits::default(),
        )
        .unwrap();
        assert!(r.degenerate);
        assert!(r.passed());
        assert_eq!(r.lcs_orders.len(), 2);
    }

    #[test]
    fn structure_report_p5() {
        let r = verify_metacyclic_structure(
            MetacyclicParams::new(5, 1, 2).unwrap(),
            &Limits::default(),
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!((r.order, r.exponent, r.m0), (125, 25, Some(6)));
    }

    #[test]
    fn structure_report_respects_bound() {
        let err = verify_metacyclic_structure(
            MetacyclicParams::new(5, 1, 3).unwrap(),
            &Limits::with_max_order(100),
        )
        .unwrap_err();
        assert!(matches!(err, Error::ResourceLimit { .. }));
    }

    #[test]
    fn cr_quotient_examples() {
        let r = cr_quotient_check(3, 1, 2, 2, &Limits::default()).unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert_eq!(r.order, 243);
    }

    #[test]
    fn cr_rank_one_is_metacyclic() {
        let params = MetacyclicParams::new(3, 1, 3).unwrap();
        let g = MetacyclicGroup::new(params);
        let q = CrQuotient::new(CrParams::new(3, 1, 3, 1).unwrap());
        for x in g.elements() {
            for y in g.elements() {
                let xy = g.mul(&x, &y);
                let qx = q.element(&[x.tau_exponent() as i128], x.sigma_exponent() as i128);
                let qy = q.element(&[y.tau_exponent() as i128], y.sigma_exponent() as i128);
                let qxy = q.mul(&qx, &qy);
                assert_eq!(
                    (qxy.tau_exponents()[0], qxy.sigma_exponent()),
                    (xy.tau_exponent(), xy.sigma_exponent())
                );
            }
        }
    }
}
