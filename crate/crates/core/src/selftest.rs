//! The acceptance grid: eight exact checks, each reported as one result.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{solve_power_exponent, unit_power_valuation, vp_u64, PadicInt, Valuation};
use crate::dpoly::{
    d_poly_recurrence_check, module_recurrence_check, nilpotent_independence_suite,
    tower_induction_check,
};
use crate::error::Result;
use crate::groups::{closure, filtration_cross_check, Limits};
use crate::metacyclic::{mc_power, verify_metacyclic_structure, MetacyclicGroup, MetacyclicParams};
use crate::obstruction::{geometric_n, sweep, GridSpec, Outcome, SweepPoint, Theorem};
use crate::unipotent::{
    build_generators, congruence_check, lcs_vanishing_check, witness_group_check, WitnessGroupSpec,
};
use crate::words::{all_triples, commutator_identities_check};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn absorb<T>(&mut self, r: Result<T>, context: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.checks += 1;
                self.failures.push(format!("{}: {e}", context()));
                None
            }
        }
    }

    fn finish(self, id: u8, title: &str) -> CriterionResult {
        CriterionResult {
            id,
            title: title.into(),
            passed: self.failures.is_empty(),
            checks: self.checks,
            failures: self.failures,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub criteria: Vec<CriterionResult>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }
}

pub fn run_all(seed: u64, limits: &Limits) -> SelftestReport {
    SelftestReport {
        seed,
        criteria: vec![
            metacyclic_grid(limits),
            unipotent_grid(limits),
            obstruction_sweep(seed, limits),
            valuation_identity(seed),
            power_exponent_solving(),
            polynomial_suite(seed),
            congruence(seed, limits),
            cross_cutting(limits),
        ],
    }
}

/// `(p, k, m)` with `p ∈ {3,5}`, `k ∈ {1,2}`, `k <= m <= 3` and `p^(2m-k) <= 10^6`.
pub fn metacyclic_grid_points() -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for p in [3u64, 5] {
        for k in [1u32, 2] {
            for m in k..=3 {
                if p.pow(2 * m - k) <= 1_000_000 {
                    out.push((p, k, m));
                }
            }
        }
    }
    out
}

pub const WITNESS_GRID: [(u64, usize); 7] =
    [(3, 1), (3, 2), (5, 1), (5, 2), (5, 3), (7, 1), (7, 2)];

pub fn metacyclic_grid(limits: &Limits) -> CriterionResult {
    let mut t = Tally::default();
    for (p, k, m) in metacyclic_grid_points() {
        let ctx = || format!("G(a,m) p={p} k={k} m={m}");
        let Some(params) = t.absorb(MetacyclicParams::new(p, k, m), ctx) else {
            continue;
        };
        let Some(report) = t.absorb(verify_metacyclic_structure(params, limits), ctx) else {
            continue;
        };
        for a in report.assertions.assertions() {
            t.check(a.passed, || {
                format!("{}: {} ({}): {}", ctx(), a.name, a.reference, a.detail)
            });
        }
    }
    t.finish(1, "metacyclic structure grid")
}

pub fn unipotent_grid(limits: &Limits) -> CriterionResult {
    let mut t = Tally::default();
    for (p, k) in WITNESS_GRID {
        let ctx = || format!("<X,Y> p={p} k={k}");
        let Some(spec) = t.absorb(WitnessGroupSpec::new(p, k), ctx) else {
            continue;
        };
        let Some(report) = t.absorb(witness_group_check(&spec, limits), ctx) else {
            continue;
        };
        for a in report.assertions.assertions() {
            t.check(a.passed, || {
                format!("{}: {} ({}): {}", ctx(), a.name, a.reference, a.detail)
            });
        }
    }
    for p in [3u64, 5] {
        for n in 2..=6 {
            let ctx = || format!("U_{n}(Z/{p})");
            if let Some(r) = t.absorb(lcs_vanishing_check(n, p, 0, 50, limits), ctx) {
                t.check(r.passed, || {
                    format!(
                        "{}: lower central series does not vanish at step {n} ({})",
                        ctx(),
                        r.method
                    )
                });
            }
        }
    }
    t.finish(2, "unipotent witness grid")
}

fn hypotheses_hold(pt: &SweepPoint) -> bool {
    let prm = &pt.parameters;
    let l = prm.l;
    match pt.theorem {
        Theorem::LessThanM => {
            let m = prm.m.unwrap_or(0);
            m >= 2 && l < m
        }
        Theorem::One => prm.m.unwrap_or(0) > prm.k.unwrap_or(0).max(l),
        Theorem::T => prm.m.unwrap_or(0) > l,
        Theorem::Filtration => l >= 2,
    }
}

fn expected_image_order(pt: &SweepPoint) -> u64 {
    let prm = &pt.parameters;
    match pt.theorem {
        Theorem::Filtration => prm.p,
        _ => prm.p.pow(prm.m.unwrap_or(0) - prm.l),
    }
}

/// The sweep grid for one prime: `u ∈ {1, 2, p+1}`, `w ∈ {0, 1, 2}`.
pub fn acceptance_grid(p: u64) -> GridSpec {
    GridSpec::parse(&format!(
        "thm=l<m,1,T,filtration;p={p};k=1,2;m=1..4;l=1..3;u=1,2,{};w=0,1,2",
        p + 1
    ))
    .expect("grid text is well formed")
}

pub fn obstruction_sweep(seed: u64, limits: &Limits) -> CriterionResult {
    let mut t = Tally::default();
    for p in [3u64, 5] {
        let report = sweep(&acceptance_grid(p), seed, limits);
        for pt in &report.points {
            let ctx = || format!("{} {:?}", pt.theorem, pt.parameters);
            match pt.outcome {
                Outcome::Obstructed => {
                    t.check(hypotheses_hold(pt), || {
                        format!("{}: obstructed outside the hypotheses", ctx())
                    });
                    let want = expected_image_order(pt);
                    t.check(pt.image_order == Some(want), || {
                        format!(
                            "{}: image order {:?}, expected {want}",
                            ctx(),
                            pt.image_order
                        )
                    });
                }
                Outcome::HypothesisViolation => {
                    t.check(!hypotheses_hold(pt), || {
                        format!(
                            "{}: rejected although hypotheses hold: {}",
                            ctx(),
                            pt.detail
                        )
                    });
                }
                Outcome::Skipped => {
                    // Only case 2 of the T theorem may be absent.
                    t.check(
                        pt.theorem == Theorem::T && pt.parameters.w.is_some(),
                        || format!("{}: skipped: {}", ctx(), pt.detail),
                    );
                }
                Outcome::Failure => t.check(false, || format!("{}: {}", ctx(), pt.detail)),
            }
            if pt.theorem == Theorem::T && pt.outcome == Outcome::Obstructed {
                if let (Some(w), Some(k), Some(m)) =
                    (pt.parameters.w, pt.parameters.k, pt.parameters.m)
                {
                    let n = pt.parameters.p.pow(pt.parameters.l) * pt.parameters.u as u64;
                    let modulus = pt.parameters.p.pow(m);
                    let big = geometric_n(pt.parameters.p, k, w, n) % BigInt::from(modulus);
                    let params = MetacyclicParams::new(pt.parameters.p, k, m)
                        .expect("point already checked");
                    let g = MetacyclicGroup::new(params);
                    let via_power =
                        mc_power(&g.element(1, w as i128), &BigInt::from(n)).tau_exponent();
                    t.check(big.to_u64() == Some(via_power), || {
                        format!("{}: N mod p^m = {big}, power gives {via_power}", ctx())
                    });
                }
            }
        }
    }
    t.finish(3, "obstruction sweep")
}

pub fn valuation_identity(seed: u64) -> CriterionResult {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = [2u64, 3, 5, 7];
    for _ in 0..1000 {
        let p = primes[rng.gen_range(0..primes.len())];
        let min_v = if p == 2 { 2 } else { 1 };
        let v = rng.gen_range(min_v..=min_v + 4);
        let unit = loop {
            let c: i64 = rng.gen_range(1..10_000);
            if c % p as i64 != 0 {
                break if rng.gen_bool(0.5) { c } else { -c };
            }
        };
        let alpha = BigInt::from(p).pow(v) * unit;
        let n: u64 = rng.gen_range(1..=10_000);
        let expected = u64::from(v)
            + match vp_u64(n, p) {
                Valuation::Finite(e) => e,
                Valuation::Infinite => unreachable!("n is positive"),
            };
        match unit_power_valuation(p, &alpha, &BigInt::from(n)) {
            Ok(got) => t.check(got == expected, || {
                format!("p={p} alpha={alpha} n={n}: got {got}, expected {expected}")
            }),
            Err(e) => t.check(false, || format!("p={p} alpha={alpha} n={n}: {e}")),
        }
    }
    t.finish(4, "valuation identity")
}

pub const SOLVE_PRECISION: u32 = 12;

pub fn power_exponent_solving() -> CriterionResult {
    let mut t = Tally::default();
    let n = SOLVE_PRECISION;
    for p in [3u64, 5] {
        for k in [1u32, 2] {
            for u in 1..p {
                let ctx = || format!("p={p} k={k} u={u}");
                let Some(unit) = t.absorb(PadicInt::new(p, n, u), ctx) else {
                    continue;
                };
                let Some(sol) = t.absorb(solve_power_exponent(p, k, &unit, n), ctx) else {
                    continue;
                };
                let required = n - 2 * k;
                t.check(sol.verified_precision >= required, || {
                    format!(
                        "{}: verified precision {} below {required}",
                        ctx(),
                        sol.verified_precision
                    )
                });
                let modulus = BigInt::from(p).pow(sol.verified_precision);
                let pk = BigInt::from(p).pow(k);
                let base = BigInt::one() + &pk * u;
                let lhs = base.modpow(&sol.exponent.residue_int(), &modulus);
                let rhs = (BigInt::one() + &pk) % &modulus;
                t.check(lhs == rhs, || {
                    format!(
                        "{}: (1+p^k u)^v = {lhs}, expected {rhs} mod p^{}",
                        ctx(),
                        sol.verified_precision
                    )
                });
            }
        }
    }
    t.finish(5, "p-adic exponent solving")
}

pub fn polynomial_suite(seed: u64) -> CriterionResult {
    let mut t = Tally::default();
    for p in (2u64..=50).filter(|&p| crate::arith::is_prime(p)) {
        if let Some(r) = t.absorb(d_poly_recurrence_check(p), || {
            format!("D_i recurrence p={p}")
        }) {
            t.check(r.passed(), || format!("D_i recurrence fails at p={p}"));
        }
    }
    for p in [3u64, 5, 7] {
        if let Some(r) = t.absorb(module_recurrence_check(p), || format!("module p={p}")) {
            t.check(r.passed(), || format!("module recurrence fails at p={p}"));
        }
        for i in 1..p {
            for n in 1..=p {
                if let Some(r) = t.absorb(tower_induction_check(p, i, n), || {
                    format!("tower p={p} i={i} n={n}")
                }) {
                    t.check(r.passed(), || {
                        format!("tower identity fails at p={p} i={i} n={n}")
                    });
                    if n == p {
                        t.check(r.identities.len() == 2, || {
                            format!("missing cancellation at p={p} i={i}")
                        });
                    }
                }
            }
        }
    }
    for (offset, p) in [3u64, 5].into_iter().enumerate() {
        let s = seed.wrapping_add(offset as u64);
        if let Some(r) = t.absorb(nilpotent_independence_suite(p, 20, 500, s), || {
            format!("independence p={p}")
        }) {
            t.check(r.passed, || format!("independence p={p}: {r:?}"));
        }
    }
    t.finish(6, "polynomial and group-ring suite")
}

pub fn congruence(seed: u64, limits: &Limits) -> CriterionResult {
    let mut t = Tally::default();
    for p in [3u64, 5] {
        if let Some(r) = t.absorb(congruence_check(p, seed, limits), || format!("p={p}")) {
            let expected_pairs = if p == 3 { 81 } else { 1000 };
            t.check(r.pairs_checked == expected_pairs, || {
                format!("p={p}: {} pairs", r.pairs_checked)
            });
            t.check(r.exhaustive == (p == 3), || {
                format!("p={p}: exhaustive = {}", r.exhaustive)
            });
            for a in r.assertions.assertions() {
                t.check(a.passed, || {
                    format!("p={p}: {} ({}): {}", a.name, a.reference, a.detail)
                });
            }
        }
    }
    t.finish(7, "congruence in the witness group")
}

pub fn cross_cutting(limits: &Limits) -> CriterionResult {
    let mut t = Tally::default();
    for (p, k, m) in metacyclic_grid_points() {
        let ctx = || format!("G(a,m) p={p} k={k} m={m}");
        let params = MetacyclicParams::new(p, k, m).expect("grid point is valid");
        let g = MetacyclicGroup::new(params);
        let Some(whole) = t.absorb(closure(&g, [&g.tau(), &g.sigma()], limits), ctx) else {
            continue;
        };
        if let Some(c) = t.absorb(filtration_cross_check(&g, &whole, p, limits), ctx) {
            t.check(c.passed(), || format!("{}: {c:?}", ctx()));
        }
    }
    let witness_groups = WITNESS_GRID.iter().copied().chain([(3, 2), (5, 4)]);
    for (p, k) in witness_groups {
        let ctx = || format!("<X,Y> p={p} k={k}");
        let spec = WitnessGroupSpec::new(p, k).expect("grid point is valid");
        let g = spec.carrier();
        let (x, y) = build_generators(&spec);
        let Some(h) = t.absorb(closure(&g, [&x, &y], limits), ctx) else {
            continue;
        };
        if let Some(c) = t.absorb(filtration_cross_check(&g, &h, p, limits), ctx) {
            t.check(c.passed(), || format!("{}: {c:?}", ctx()));
        }
    }

    let params = MetacyclicParams::new(3, 1, 2).expect("valid");
    let g = MetacyclicGroup::new(params);
    let elems = g.elements();
    let r = commutator_identities_check(&g, all_triples(&elems));
    t.check(r.passed() && r.triples_checked == 27 * 27 * 27, || {
        format!("G(a,2) p=3: {:?}", r.counterexamples)
    });

    let spec = WitnessGroupSpec::new(3, 1).expect("valid");
    let u = spec.carrier();
    let (x, y) = build_generators(&spec);
    if let Some(h) = t.absorb(closure(&u, [&x, &y], limits), || "<X,Y> p=3 k=1".into()) {
        let r = commutator_identities_check(&u, all_triples(h.elements()));
        t.check(r.passed() && r.triples_checked == 27 * 27 * 27, || {
            format!("<X,Y> p=3: {:?}", r.counterexamples)
        });
    }
    t.finish(8, "cross-cutting filtration and identity checks")
}
