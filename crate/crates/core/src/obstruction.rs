//! Witnesses that a relation `x^{p^l u} s` cannot hold in a maximal pro-p
//! Galois group: each checker maps the free generators into an explicit
//! finite quotient and shows the relation's image is not the identity.
//!
//! What is verified is the inequality at the end of each argument. The
//! existence of a Kummer generator `a` with the prescribed action is taken
//! as given by the construction of the quotient.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::arith::{ensure_prime, unit_power_valuation, vp_unchecked, Valuation};
use crate::error::{Error, Result};
use crate::groups::{closure, p_descending_series, CyclicGroup, Group, Limits};
use crate::metacyclic::{
    act_on_root, mc_power, MetacyclicElement, MetacyclicGroup, MetacyclicParams,
};
use crate::report::Checklist;
use crate::words::{appearing_pairs, evaluate, parse_word, Alphabet, Atom, Word};

/// Number of extra seeded `y`-assignments tried per check.
pub const ASSIGNMENT_SAMPLES: usize = 3;

const NOTE: &str = "the witness is the image of the relation in the stated finite quotient; \
                    the existence of a Kummer generator with the assigned action is assumed";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Theorem {
    /// Cyclic quotient `C_{p^m}` when `ζ_{p^m}` is present.
    LessThanM,
    /// Tail is a commutator expression whose pairs avoid `x^{±1}`.
    One,
    /// Tail lies in the subgroup generated by the `y_i`.
    T,
    /// Leading exponent `p^{l-1}u`, tail `s t` with `t` deep in the p-descending series.
    Filtration,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::LessThanM,
        Theorem::One,
        Theorem::T,
        Theorem::Filtration,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Theorem::LessThanM => "l<m",
            Theorem::One => "1",
            Theorem::T => "T",
            Theorem::Filtration => "filtration",
        }
    }

    /// The tail classification each theorem works with.
    pub fn tag(&self) -> TailTag {
        match self {
            Theorem::LessThanM => TailTag::InSSt,
            Theorem::One => TailTag::CommutatorAvoidingX,
            Theorem::T => TailTag::InT,
            Theorem::Filtration => TailTag::InTTWithT,
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s
            .strip_prefix("thm:")
            .or_else(|| s.strip_prefix("thm"))
            .unwrap_or(s);
        Theorem::ALL
            .into_iter()
            .find(|t| t.id().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown theorem `{s}`; expected one of l<m, 1, T, filtration"
                ))
            })
    }
}

impl Serialize for Theorem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TailTag {
    #[serde(rename = "in-[S,S]T")]
    InSSt,
    #[serde(rename = "commutator-expr-avoiding-x")]
    CommutatorAvoidingX,
    #[serde(rename = "in-T")]
    InT,
    #[serde(rename = "in-[T,T]-with-t")]
    InTTWithT,
}

/// `x^{p^l u} s` (or `x^{p^{l-1} u} s t` for the filtration shape).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationShape {
    alphabet: Alphabet,
    l: u32,
    u: i64,
    tail: Option<Word>,
    t: Option<Word>,
    tag: TailTag,
}

impl RelationShape {
    pub fn new(
        alphabet: Alphabet,
        l: u32,
        u: i64,
        tail: Option<Word>,
        tag: TailTag,
    ) -> Result<Self> {
        if l == 0 {
            return Err(Error::hypothesis("l must be at least 1"));
        }
        if u == 0 {
            return Err(Error::invalid("u must be nonzero"));
        }
        if let Some(w) = &tail {
            check_letters(w, &alphabet)?;
        }
        Ok(RelationShape {
            alphabet,
            l,
            u,
            tail,
            t: None,
            tag,
        })
    }

    /// Appends the deep factor `t` of the filtration shape.
    pub fn with_t(mut self, t: Word) -> Result<Self> {
        check_letters(&t, &self.alphabet)?;
        self.t = Some(t);
        Ok(self)
    }

    /// Reads `x^e s` from text, splitting `e = p^v u` with `p ∤ u`. The shape
    /// has `l = v`, or `l = v + 1` for the filtration theorem whose leading
    /// exponent is `p^{l-1} u`. The whole tail becomes `s`.
    pub fn parse(text: &str, alphabet: &Alphabet, p: u64, theorem: Theorem) -> Result<Self> {
        ensure_prime(p)?;
        let word = parse_word(text, alphabet)?;
        let (head, tail) = word.split_first();
        let term = &head.terms()[0];
        let e = match &term.atom {
            Atom::Gen(name) if name == alphabet.x() => term.exp,
            _ => {
                return Err(Error::hypothesis(format!(
                    "relation must start with a power of {}",
                    alphabet.x()
                )))
            }
        };
        let mut u = e;
        let mut v = 0u32;
        while u % p as i64 == 0 {
            u /= p as i64;
            v += 1;
        }
        let l = if theorem == Theorem::Filtration {
            v + 1
        } else {
            v
        };
        if l == 0 {
            return Err(Error::hypothesis(format!(
                "leading exponent {e} is not divisible by p = {p}"
            )));
        }
        RelationShape::new(alphabet.clone(), l, u, tail, theorem.tag())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn u(&self) -> i64 {
        self.u
    }

    pub fn tail(&self) -> Option<&Word> {
        self.tail.as_ref()
    }

    pub fn t(&self) -> Option<&Word> {
        self.t.as_ref()
    }

    pub fn tag(&self) -> TailTag {
        self.tag
    }

    /// `p^l u`, or `p^{l-1} u` for the filtration theorem.
    pub fn leading_exponent(&self, p: u64, theorem: Theorem) -> Result<i64> {
        let shift = if theorem == Theorem::Filtration {
            self.l - 1
        } else {
            self.l
        };
        (p as i64)
            .checked_pow(shift)
            .and_then(|q| q.checked_mul(self.u))
            .ok_or_else(|| Error::invalid("leading exponent overflows 64 bits"))
    }

    pub fn relation(&self, p: u64, theorem: Theorem) -> Result<Word> {
        let mut w = Word::gen_power(self.alphabet.x(), self.leading_exponent(p, theorem)?)?;
        for part in [&self.tail, &self.t].into_iter().flatten() {
            w = w.concat(part);
        }
        Ok(w)
    }
}

fn check_letters(w: &Word, alphabet: &Alphabet) -> Result<()> {
    match w.generators().into_iter().find(|g| !alphabet.contains(g)) {
        Some(name) => Err(Error::UnknownGenerator { name, pos: 0 }),
        None => Ok(()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    NotObstructed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Parameters {
    pub p: u64,
    pub k: Option<u32>,
    pub m: Option<u32>,
    pub l: u32,
    pub u: i64,
    pub w: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub theorem: Theorem,
    pub parameters: Parameters,
    pub quotient: String,
    pub relation: String,
    pub tag: TailTag,
    pub assignment: BTreeMap<String, String>,
    pub image: String,
    /// Order of the obstructing coordinate of the image.
    pub image_order: u64,
    /// Order of the image as a group element.
    pub element_order: u64,
    pub verdict: Verdict,
    pub assertions: Checklist,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Obstructed && self.assertions.all_passed()
    }
}

fn validate(p: u64, shape: &RelationShape, theorem: Theorem) -> Result<()> {
    ensure_prime(p)?;
    if shape.tag != theorem.tag() {
        return Err(Error::hypothesis(format!(
            "tail tag {:?} does not match theorem {theorem}, which needs {:?}",
            shape.tag,
            theorem.tag()
        )));
    }
    if shape.u % p as i64 == 0 {
        return Err(Error::hypothesis(format!(
            "gcd(p, u) != 1 for u = {}",
            shape.u
        )));
    }
    Ok(())
}

fn pow_u64(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| Error::invalid(format!("{p}^{e} overflows 64 bits")))
}

/// Default exponents `c_i` for `y_i ↦ σ^{c_i}`: the nonzero residues mod
/// `p^{m-k}` in order, cycling; all zero when σ is trivial.
pub fn default_y_exponents(count: usize, sigma_order: u64) -> Vec<u64> {
    if sigma_order <= 1 {
        return vec![0; count];
    }
    (0..count as u64)
        .map(|i| i % (sigma_order - 1) + 1)
        .collect()
}

/// How the `y_i` are sent into `<σ>`: explicit exponents `c_i` (the
/// defaults when absent) and the seed for the extra sampled assignments.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct YAssignment {
    pub exponents: Option<Vec<u64>>,
    pub seed: u64,
}

fn metacyclic_assignment(
    g: &MetacyclicGroup,
    alphabet: &Alphabet,
    x_image: MetacyclicElement,
    ys: &[u64],
) -> Result<BTreeMap<String, MetacyclicElement>> {
    if ys.len() != alphabet.ys().len() {
        return Err(Error::invalid(format!(
            "{} y-exponents given for {} generators",
            ys.len(),
            alphabet.ys().len()
        )));
    }
    let mut map = BTreeMap::from([(alphabet.x().to_string(), x_image)]);
    for (name, c) in alphabet.ys().iter().zip(ys) {
        map.insert(name.clone(), g.element(0, *c as i128));
    }
    Ok(map)
}

fn describe_assignment<G: Group>(
    g: &G,
    map: &BTreeMap<String, G::Elem>,
) -> BTreeMap<String, String> {
    map.iter()
        .map(|(k, v)| (k.clone(), g.describe(v)))
        .collect()
}

fn sampled_y_exponents(count: usize, sigma_order: u64, seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..ASSIGNMENT_SAMPLES)
        .map(|_| {
            (0..count)
                .map(|_| rng.gen_range(0..sigma_order.max(1)))
                .collect()
        })
        .collect()
}

/// Order of an element of `G(a,m)`; always a power of `p` at most `p^m`.
pub fn metacyclic_order(g: &MetacyclicElement) -> u64 {
    let p = g.params().p();
    let mut x = *g;
    let mut order = 1;
    while !x.is_identity() {
        x = mc_power(&x, &BigInt::from(p));
        order *= p;
    }
    order
}

fn cyclic_order(modulus: u64, a: u64) -> u64 {
    modulus / a.gcd(&modulus)
}

fn verdict(identity: bool) -> Verdict {
    if identity {
        Verdict::NotObstructed
    } else {
        Verdict::Obstructed
    }
}

/// Quotient `C_{p^m}` with `x ↦ 1` and `y_i ↦ 0`; the image is `p^l u mod p^m`,
/// of order `p^{m-l}`. Requires `m >= 2` and `1 <= l < m`; the tail must lie
/// in `[S,S]T`, which for a word means its `x`-exponent sum is zero.
pub fn check_thm_l_less_m(p: u64, m: u32, shape: &RelationShape) -> Result<WitnessReport> {
    let theorem = Theorem::LessThanM;
    validate(p, shape, theorem)?;
    let l = shape.l;
    if m < 2 {
        return Err(Error::hypothesis(format!("m = {m} must be at least 2")));
    }
    if l >= m {
        return Err(Error::hypothesis(format!(
            "l = {l} must be less than m = {m}"
        )));
    }
    let x = shape.alphabet.x();
    for part in [&shape.tail, &shape.t].into_iter().flatten() {
        let sum = part.exponent_sum(x);
        if sum != 0 {
            return Err(Error::hypothesis(format!(
                "tail `{part}` is not in [S,S]T: exponent sum of {x} is {sum}"
            )));
        }
    }
    let modulus = pow_u64(p, m)?;
    let c = CyclicGroup::new(modulus);
    let mut assignment = BTreeMap::from([(x.to_string(), c.generator())]);
    for y in shape.alphabet.ys() {
        assignment.insert(y.clone(), 0);
    }
    let relation = shape.relation(p, theorem)?;
    let image = evaluate(&relation, &assignment, &c)?;
    let e = shape.leading_exponent(p, theorem)?;
    let expected = c.element(e as i128);
    let order = cyclic_order(modulus, image);
    let expected_order = pow_u64(p, m - l)?;

    let mut checks = Checklist::new();
    if let Some(tail) = &shape.tail {
        let t_img = evaluate(tail, &assignment, &c)?;
        checks.check(
            "tail_trivial",
            "the tail maps to 0 in C_(p^m)",
            t_img == 0,
            format!("tail image {t_img}"),
        );
    }
    checks.check(
        "image",
        "image of the relation is g^(p^l u)",
        image == expected,
        format!("image {image}, expected {expected}"),
    );
    checks.check(
        "image_order",
        "the image has order p^(m-l) > 1",
        order == expected_order && order > 1,
        format!("order {order}, expected {expected_order}"),
    );
    Ok(WitnessReport {
        theorem,
        parameters: Parameters {
            p,
            k: None,
            m: Some(m),
            l,
            u: shape.u,
            w: None,
        },
        quotient: format!("C_{modulus}"),
        relation: relation.to_string(),
        tag: shape.tag,
        assignment: describe_assignment(&c, &assignment),
        image: format!("g^{image}"),
        image_order: order,
        element_order: order,
        verdict: verdict(image == 0),
        assertions: checks,
        notes: vec![NOTE.into()],
    })
}

/// Quotient `G(a,m)` with `m > max(k, l)`, `x ↦ τ`, `y_i ↦ σ^{c_i}`. The tail
/// must be a commutator expression none of whose two-letter commutators
/// involves `x^{±1}`; it then dies and the image is `τ^{p^l u}`, of order `p^{m-l}`.
pub fn check_thm_1(
    p: u64,
    k: u32,
    m: u32,
    shape: &RelationShape,
    assign: &YAssignment,
) -> Result<WitnessReport> {
    let theorem = Theorem::One;
    validate(p, shape, theorem)?;
    let l = shape.l;
    if m <= k.max(l) {
        return Err(Error::hypothesis(format!(
            "m = {m} must exceed max(k, l) = {}",
            k.max(l)
        )));
    }
    let x = shape.alphabet.x();
    if let Some(tail) = &shape.tail {
        if !tail.is_commutator_expression() {
            return Err(Error::hypothesis(format!(
                "tail `{tail}` is not a commutator expression"
            )));
        }
        if let Some((a, b)) = appearing_pairs(tail)
            .into_iter()
            .find(|(a, b)| a.name == x || b.name == x)
        {
            return Err(Error::hypothesis(format!(
                "the commutator [{a},{b}] appears in the tail"
            )));
        }
    }
    let params = MetacyclicParams::new(p, k, m)?;
    let g = MetacyclicGroup::new(params);
    let default_ys = default_y_exponents(shape.alphabet.ys().len(), params.sigma_order());
    let ys = assign.exponents.as_deref().unwrap_or(&default_ys);
    let assignment = metacyclic_assignment(&g, &shape.alphabet, g.tau(), ys)?;
    let relation = shape.relation(p, theorem)?;
    let image = evaluate(&relation, &assignment, &g)?;
    let e = shape.leading_exponent(p, theorem)?;
    let expected = g.element(e as i128, 0);
    let order = metacyclic_order(&image);
    let expected_order = pow_u64(p, m - l)?;

    let mut checks = Checklist::new();
    if let Some(tail) = &shape.tail {
        let t_img = evaluate(tail, &assignment, &g)?;
        checks.check(
            "tail_trivial",
            "commutators of elements of <sigma> vanish, so the tail maps to 1",
            t_img.is_identity(),
            g.describe(&t_img),
        );
    }
    checks.check(
        "image",
        "image of the relation is tau^(p^l u)",
        image == expected,
        format!(
            "image {}, expected {}",
            g.describe(&image),
            g.describe(&expected)
        ),
    );
    checks.check(
        "image_order",
        "the image has order p^(m-l) > 1",
        order == expected_order && order > 1,
        format!("order {order}, expected {expected_order}"),
    );
    let mut invariant = true;
    for sample in sampled_y_exponents(ys.len(), params.sigma_order(), assign.seed) {
        let other = metacyclic_assignment(&g, &shape.alphabet, g.tau(), &sample)?;
        invariant &= evaluate(&relation, &other, &g)? == image;
    }
    checks.check(
        "assignment_invariance",
        "the image does not depend on the exponents c_i",
        invariant,
        format!("{ASSIGNMENT_SAMPLES} seeded assignments"),
    );
    Ok(WitnessReport {
        theorem,
        parameters: Parameters {
            p,
            k: Some(k),
            m: Some(m),
            l,
            u: shape.u,
            w: None,
        },
        quotient: format!(
            "G(a,m) with p = {p}, k = {k}, m = {m}, order {}",
            params.order()
        ),
        relation: relation.to_string(),
        tag: shape.tag,
        assignment: describe_assignment(&g, &assignment),
        image: g.describe(&image),
        image_order: order,
        element_order: order,
        verdict: verdict(image.is_identity()),
        assertions: checks,
        notes: vec![NOTE.into()],
    })
}

/// `((1+p^k)^{w n} - 1) / ((1+p^k)^w - 1) = Σ_{j<n} (1+p^k)^{wj}`.
pub fn geometric_n(p: u64, k: u32, w: u64, n: u64) -> BigInt {
    let q = num_traits::pow(BigInt::one() + BigInt::from(p).pow(k), w as usize);
    let n = n as usize;
    (num_traits::pow(q.clone(), n) - BigInt::one()) / (q - BigInt::one())
}

/// Quotient `G(a,m)` with `m > l`. Case 1 sends `x ↦ τ`; case 2 sends
/// `x ↦ τσ^w` with `w ≢ 0 mod p^{m-k}`. The tail lies in `<y_i>`, maps into
/// `<σ>` and fixes the root, so the root-action exponent of the image is that
/// of `x^{p^l u}`: `p^l u` in case 1 and `N` with `v_p(N) = l` in case 2.
///
/// When `m < k` the quotient is cyclic and only case 1 applies.
pub fn check_thm_t(
    p: u64,
    k: u32,
    m: u32,
    shape: &RelationShape,
    case2_w: Option<u64>,
    assign: &YAssignment,
) -> Result<WitnessReport> {
    let theorem = Theorem::T;
    validate(p, shape, theorem)?;
    let l = shape.l;
    if m <= l {
        return Err(Error::hypothesis(format!("m = {m} must exceed l = {l}")));
    }
    for part in [&shape.tail, &shape.t].into_iter().flatten() {
        if let Some(name) = part
            .generators()
            .into_iter()
            .find(|g| g == shape.alphabet.x())
        {
            return Err(Error::hypothesis(format!(
                "tail `{part}` uses {name}, so it is not a word in the y_i"
            )));
        }
    }
    let mut notes = vec![NOTE.to_string()];
    let k_eff = k.min(m);
    if k_eff != k {
        notes.push(format!(
            "m = {m} < k = {k}: zeta_(p^m) is rational, the quotient is cyclic of order p^m"
        ));
    }
    let params = MetacyclicParams::new(p, k_eff, m)?;
    let g = MetacyclicGroup::new(params);
    let x_image = match case2_w {
        None => g.tau(),
        Some(w) => {
            if params.is_degenerate() || w % params.sigma_order() == 0 {
                return Err(Error::invalid(format!(
                    "case 2 needs m > k and w = {w} not divisible by p^(m-k)"
                )));
            }
            notes.push(format!(
                "x acts on zeta_(p^m) through (1+p^k)^{w}, the unit available in the quotient"
            ));
            g.element(1, w as i128)
        }
    };
    let default_ys = default_y_exponents(shape.alphabet.ys().len(), params.sigma_order());
    let ys = assign.exponents.as_deref().unwrap_or(&default_ys);
    let assignment = metacyclic_assignment(&g, &shape.alphabet, x_image, ys)?;
    let relation = shape.relation(p, theorem)?;
    let image = evaluate(&relation, &assignment, &g)?;
    let e = shape.leading_exponent(p, theorem)?;
    let modulus = params.tau_order();
    let root = act_on_root(&image);
    let root_val = match crate::arith::vp_u64(root, p) {
        Valuation::Finite(v) => v,
        Valuation::Infinite => u64::from(m),
    };
    let image_order = pow_u64(p, m - root_val.min(u64::from(m)) as u32)?;

    let mut checks = Checklist::new();
    if let Some(tail) = &shape.tail {
        let t_img = evaluate(tail, &assignment, &g)?;
        checks.check(
            "tail_fixes_root",
            "the tail maps into <sigma> and fixes the root",
            t_img.tau_exponent() == 0 && act_on_root(&t_img) == 0,
            g.describe(&t_img),
        );
    }
    match case2_w {
        None => {
            let expected = e.rem_euclid(modulus as i64) as u64;
            checks.check(
                "root_exponent",
                "case 1: the image moves the root by zeta^(p^l u)",
                root == expected && root != 0,
                format!("root exponent {root}, expected {expected} mod {modulus}"),
            );
        }
        Some(w) => {
            let n = e.unsigned_abs();
            let big_n = geometric_n(p, k_eff, w, n);
            let v_direct = vp_unchecked(&big_n, p).finite().unwrap_or(u64::MAX);
            let alpha = num_traits::pow(BigInt::one() + BigInt::from(p).pow(k_eff), w as usize)
                - BigInt::one();
            let v_alpha = vp_unchecked(&alpha, p).finite().unwrap_or(0);
            let v_identity = unit_power_valuation(p, &alpha, &BigInt::from(n))? - v_alpha;
            checks.check(
                "valuation",
                "v_p(N) = v_p(alpha) + v_p(p^l u) - v_p(alpha) = l",
                v_direct == u64::from(l) && v_identity == u64::from(l),
                format!("v_p(N) = {v_direct} by division, {v_identity} by the valuation identity"),
            );
            let n_mod = (&big_n % BigInt::from(modulus))
                .to_u64()
                .expect("residue fits");
            let via_power = mc_power(&x_image, &BigInt::from(n)).tau_exponent();
            checks.check(
                "geometric_sum",
                "N mod p^m equals the tau-exponent of (tau sigma^w)^(p^l u)",
                n_mod == via_power,
                format!("N mod p^m = {n_mod}, power gives {via_power}"),
            );
            checks.check(
                "root_exponent",
                "case 2: the root exponent of the image has valuation l < m",
                root != 0 && root_val == u64::from(l),
                format!("root exponent {root} mod {modulus}"),
            );
        }
    }
    let expected_order = pow_u64(p, m - l)?;
    checks.check(
        "image_order",
        "the root action of the image has order p^(m-l) > 1",
        image_order == expected_order && image_order > 1,
        format!("order {image_order}, expected {expected_order}"),
    );
    Ok(WitnessReport {
        theorem,
        parameters: Parameters {
            p,
            k: Some(k),
            m: Some(m),
            l,
            u: shape.u,
            w: case2_w,
        },
        quotient: format!(
            "G(a,m) with p = {p}, k = {k_eff}, m = {m}, order {}",
            params.order()
        ),
        relation: relation.to_string(),
        tag: shape.tag,
        assignment: describe_assignment(&g, &assignment),
        image: g.describe(&image),
        image_order,
        element_order: metacyclic_order(&image),
        verdict: verdict(image.is_identity()),
        assertions: checks,
        notes,
    })
}

/// Quotient `G(a,l)` with `l >= 2`, `x ↦ τ`, `y_i ↦ σ^{c_i}`. The
/// p-descending series reaches 1 at step `l + 1`, so `t` dies; `s ∈ [T,T]`
/// dies in the abelian `<σ>`; the image `τ^{p^{l-1} u}` has order `p`.
///
/// When `l < k` the quotient is cyclic of order `p^l`.
pub fn check_thm_filtration(
    p: u64,
    k: u32,
    shape: &RelationShape,
    assign: &YAssignment,
    limits: &Limits,
) -> Result<WitnessReport> {
    let theorem = Theorem::Filtration;
    validate(p, shape, theorem)?;
    let l = shape.l;
    if l < 2 {
        return Err(Error::hypothesis(format!("l = {l} must be at least 2")));
    }
    let x = shape.alphabet.x();
    if let Some(s) = &shape.tail {
        if !s.is_commutator_expression() || s.generators().contains(x) {
            return Err(Error::hypothesis(format!(
                "s = `{s}` is not a commutator expression in the y_i"
            )));
        }
    }
    if let Some(t) = &shape.t {
        if let Some(name) = t.generators().into_iter().find(|g| t.exponent_sum(g) != 0) {
            return Err(Error::hypothesis(format!(
                "t = `{t}` is not in [S,S]: exponent sum of {name} is nonzero"
            )));
        }
    }
    let mut notes = vec![NOTE.to_string()];
    let k_eff = k.min(l);
    if k_eff != k {
        notes.push(format!(
            "l = {l} < k = {k}: the quotient is cyclic of order p^l"
        ));
    }
    let params = MetacyclicParams::new(p, k_eff, l)?;
    if params.order() > limits.max_order as u64 {
        return Err(Error::ResourceLimit {
            what: format!("|G(a,l)| = {}", params.order()),
            bound: limits.max_order,
        });
    }
    let g = MetacyclicGroup::new(params);
    let whole = closure(&g, [&g.tau(), &g.sigma()], limits)?;
    let pds = p_descending_series(&g, &whole, p, limits)?;
    let deep = pds.term(l as usize + 1);

    let default_ys = default_y_exponents(shape.alphabet.ys().len(), params.sigma_order());
    let ys = assign.exponents.as_deref().unwrap_or(&default_ys);
    let assignment = metacyclic_assignment(&g, &shape.alphabet, g.tau(), ys)?;
    let relation = shape.relation(p, theorem)?;
    let image = evaluate(&relation, &assignment, &g)?;
    let e = shape.leading_exponent(p, theorem)?;
    let expected = g.element(e as i128, 0);
    let order = metacyclic_order(&image);

    let mut checks = Checklist::new();
    checks.check(
        "p_descending_vanishes",
        "G(a,l)^(l+1) = 1",
        deep.is_trivial(),
        format!("orders {:?}", pds.orders()),
    );
    checks.check(
        "deep_elements_trivial",
        "every element of G(a,l)^(l+1) is the identity",
        deep.elements().iter().all(|e| e.is_identity()),
        format!("{} elements", deep.order()),
    );
    if let Some(s) = &shape.tail {
        let s_img = evaluate(s, &assignment, &g)?;
        checks.check(
            "s_trivial",
            "s in [T,T] maps to 1",
            s_img.is_identity(),
            g.describe(&s_img),
        );
    }
    if let Some(t) = &shape.t {
        let t_img = evaluate(t, &assignment, &g)?;
        checks.check(
            "t_trivial",
            "t maps into G(a,l)^(l+1) = 1",
            deep.contains(&t_img) && t_img.is_identity(),
            g.describe(&t_img),
        );
    }
    checks.check(
        "image",
        "image of the relation is tau^(p^(l-1) u)",
        image == expected,
        format!(
            "image {}, expected {}",
            g.describe(&image),
            g.describe(&expected)
        ),
    );
    checks.check(
        "image_order",
        "the image has order p",
        order == p,
        format!("order {order}"),
    );
    Ok(WitnessReport {
        theorem,
        parameters: Parameters {
            p,
            k: Some(k),
            m: None,
            l,
            u: shape.u,
            w: None,
        },
        quotient: format!(
            "G(a,l) with p = {p}, k = {k_eff}, l = {l}, order {}",
            params.order()
        ),
        relation: relation.to_string(),
        tag: shape.tag,
        assignment: describe_assignment(&g, &assignment),
        image: g.describe(&image),
        image_order: order,
        element_order: order,
        verdict: verdict(image.is_identity()),
        assertions: checks,
        notes,
    })
}

/// Grids larger than this many points are refused.
pub const MAX_GRID_POINTS: usize = 100_000;
/// Longest value list accepted for one key.
pub const MAX_LIST_LEN: usize = 10_000;

/// A finite grid over `(theorem, p, k, m, l, u, w)`.
///
/// Text form: `;`-separated `key=values` entries, values a `,`-separated
/// list of integers or inclusive ranges `a..b`, for example
/// `thm=1,T;p=3,5;k=1;m=2..4;l=1..3;u=1,2;w=0,1`. Missing keys take
/// `thm=l<m,1,T,filtration`, `p=3`, `k=1`, `m=2`, `l=1`, `u=1`, `w=0`.
/// `w = 0` means case 1 of the `T` theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridSpec {
    pub theorems: Vec<Theorem>,
    pub p: Vec<u64>,
    pub k: Vec<u32>,
    pub m: Vec<u32>,
    pub l: Vec<u32>,
    pub u: Vec<i64>,
    pub w: Vec<u64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            theorems: Theorem::ALL.to_vec(),
            p: vec![3],
            k: vec![1],
            m: vec![2],
            l: vec![1],
            u: vec![1],
            w: vec![0],
        }
    }
}

fn parse_list<T: TryFrom<i64>>(key: &str, text: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (lo, hi) = match item.split_once("..") {
            Some((a, b)) => (parse_int(key, a)?, parse_int(key, b)?),
            None => {
                let v = parse_int(key, item)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(Error::invalid(format!("{key}: empty range {item}")));
        }
        if (hi - lo) as u128 + out.len() as u128 >= MAX_LIST_LEN as u128 {
            return Err(Error::ResourceLimit {
                what: format!("values for {key}"),
                bound: MAX_LIST_LEN,
            });
        }
        for v in lo..=hi {
            out.push(
                T::try_from(v)
                    .map_err(|_| Error::invalid(format!("{key}: value {v} out of range")))?,
            );
        }
    }
    Ok(out)
}

fn parse_int(key: &str, s: &str) -> Result<i64> {
    s.trim()
        .parse::<i64>()
        .map_err(|_| Error::invalid(format!("{key}: `{}` is not an integer", s.trim())))
}

impl GridSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut grid = GridSpec::default();
        let mut seen = HashSet::new();
        for entry in text.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, values) = entry
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("`{entry}` is not key=values")))?;
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(Error::invalid(format!("key {key} given twice")));
            }
            match key {
                "thm" => {
                    grid.theorems = values
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(Theorem::from_str)
                        .collect::<Result<_>>()?
                }
                "p" => grid.p = parse_list(key, values)?,
                "k" => grid.k = parse_list(key, values)?,
                "m" => grid.m = parse_list(key, values)?,
                "l" => grid.l = parse_list(key, values)?,
                "u" => grid.u = parse_list(key, values)?,
                "w" => grid.w = parse_list(key, values)?,
                _ => return Err(Error::invalid(format!("unknown key `{key}`"))),
            }
        }
        let size = [
            grid.theorems.len(),
            grid.p.len(),
            grid.k.len(),
            grid.m.len(),
            grid.l.len(),
            grid.u.len(),
            grid.w.len(),
        ]
        .iter()
        .try_fold(1usize, |acc, n| acc.checked_mul(*n))
        .filter(|n| *n <= MAX_GRID_POINTS);
        if size.is_none() {
            return Err(Error::ResourceLimit {
                what: "grid points".into(),
                bound: MAX_GRID_POINTS,
            });
        }
        Ok(grid)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Obstructed,
    HypothesisViolation,
    /// The quotient exceeded the enumeration bound.
    Skipped,
    Failure,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub theorem: Theorem,
    pub parameters: Parameters,
    pub outcome: Outcome,
    pub image_order: Option<u64>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SweepCounts {
    pub obstructed: usize,
    pub hypothesis_violation: usize,
    pub skipped: usize,
    pub failure: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub grid: GridSpec,
    pub counts: SweepCounts,
    pub points: Vec<SweepPoint>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.counts.failure == 0
    }
}

/// The tail used for each theorem in a sweep, over `x, y1, y2`.
pub fn sweep_tail(theorem: Theorem) -> &'static str {
    match theorem {
        Theorem::LessThanM => "[x,y1] y2",
        Theorem::One => "[y1,y2]",
        Theorem::T => "y1 y2^2",
        Theorem::Filtration => "[y1,y2]",
    }
}

fn run_point(
    theorem: Theorem,
    params: &Parameters,
    assign: &YAssignment,
    limits: &Limits,
) -> Result<WitnessReport> {
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| Error::invalid(format!("grid point lacks {name}")))
    };
    let alphabet = Alphabet::standard(2);
    let tail = parse_word(sweep_tail(theorem), &alphabet)?;
    let shape = RelationShape::new(alphabet, params.l, params.u, Some(tail), theorem.tag())?;
    let p = params.p;
    match theorem {
        Theorem::LessThanM => check_thm_l_less_m(p, need(params.m, "m")?, &shape),
        Theorem::One => check_thm_1(
            p,
            need(params.k, "k")?,
            need(params.m, "m")?,
            &shape,
            assign,
        ),
        Theorem::T => check_thm_t(
            p,
            need(params.k, "k")?,
            need(params.m, "m")?,
            &shape,
            params.w.filter(|w| *w != 0),
            assign,
        ),
        Theorem::Filtration => {
            check_thm_filtration(p, need(params.k, "k")?, &shape, assign, limits)
        }
    }
}

/// Runs the matching checker at every grid point in a fixed order. `k` is
/// ignored for `l<m`, `m` for the filtration theorem and `w` outside `T`;
/// the resulting duplicate points are dropped. `seed` drives the sampled
/// assignments.
pub fn sweep(grid: &GridSpec, seed: u64, limits: &Limits) -> SweepReport {
    let assign = YAssignment {
        exponents: None,
        seed,
    };
    let mut seen = HashSet::new();
    let mut points = Vec::new();
    let mut counts = SweepCounts::default();
    for &theorem in &grid.theorems {
        for &p in &grid.p {
            for &k in &grid.k {
                for &m in &grid.m {
                    for &l in &grid.l {
                        for &u in &grid.u {
                            for &w in &grid.w {
                                let key_k = (theorem != Theorem::LessThanM).then_some(k);
                                let key_m = (theorem != Theorem::Filtration).then_some(m);
                                let key_w = (theorem == Theorem::T).then_some(w);
                                if !seen.insert((theorem, p, key_k, key_m, l, u, key_w)) {
                                    continue;
                                }
                                let parameters = Parameters {
                                    p,
                                    k: key_k,
                                    m: key_m,
                                    l,
                                    u,
                                    w: key_w.filter(|w| *w != 0),
                                };
                                let case2_absent = theorem == Theorem::T
                                    && w != 0
                                    && (m <= k || p.checked_pow(m - k).is_some_and(|s| w % s == 0));
                                let (outcome, image_order, detail) = match (!case2_absent).then(|| run_point(theorem, &parameters, &assign, limits)) {
                                    None => (
                                        Outcome::Skipped,
                                        None,
                                        "x cannot act through sigma^w here, so case 2 does not arise".to_string(),
                                    ),
                                    Some(Ok(r)) if r.passed() => (Outcome::Obstructed, Some(r.image_order), r.image),
                                    Some(Ok(r)) => {
                                        let failed: Vec<String> = r.assertions.failures().map(|a| a.name.clone()).collect();
                                        (Outcome::Failure, Some(r.image_order), format!("failed: {}", failed.join(", ")))
                                    }
                                    Some(Err(e @ Error::HypothesisViolation(_))) => (Outcome::HypothesisViolation, None, e.to_string()),
                                    Some(Err(e @ Error::ResourceLimit { .. })) => (Outcome::Skipped, None, e.to_string()),
                                    Some(Err(e)) => (Outcome::Failure, None, e.to_string()),
                                };
                                match outcome {
                                    Outcome::Obstructed => counts.obstructed += 1,
                                    Outcome::HypothesisViolation => {
                                        counts.hypothesis_violation += 1
                                    }
                                    Outcome::Skipped => counts.skipped += 1,
                                    Outcome::Failure => counts.failure += 1,
                                }
                                points.push(SweepPoint {
                                    theorem,
                                    parameters,
                                    outcome,
                                    image_order,
                                    detail,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    SweepReport {
        grid: grid.clone(),
        counts,
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(theorem: Theorem, l: u32, u: i64, tail: &str, n: usize) -> RelationShape {
        let alphabet = Alphabet::standard(n);
        let tail = parse_word(tail, &alphabet).unwrap();
        RelationShape::new(alphabet, l, u, Some(tail), theorem.tag()).unwrap()
    }

    #[test]
    fn l_less_m_examples() {
        let r = check_thm_l_less_m(3, 2, &shape(Theorem::LessThanM, 1, 1, "[y1,y2]", 2)).unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert_eq!((r.image.as_str(), r.image_order), ("g^3", 3));
        let r = check_thm_l_less_m(3, 3, &shape(Theorem::LessThanM, 2, 2, "[x,y1] y2", 2)).unwrap();
        assert!(r.passed());
        assert_eq!((r.image.as_str(), r.image_order), ("g^18", 3));
        let e =
            check_thm_l_less_m(3, 2, &shape(Theorem::LessThanM, 2, 1, "[y1,y2]", 2)).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation(_)));
    }

    #[test]
    fn l_less_m_rejects_tail_outside() {
        let e = check_thm_l_less_m(3, 3, &shape(Theorem::LessThanM, 1, 1, "x y1", 1)).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation(_)));
    }

    #[test]
    fn thm1_examples() {
        let r = check_thm_1(
            3,
            1,
            2,
            &shape(Theorem::One, 1, 1, "[y1,y2]", 2),
            &YAssignment::default(),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert_eq!(r.image, "tau^3 sigma^0");
        let s = RelationShape::parse(
            "x^9 [y1,y2][y3,y4]",
            &Alphabet::standard(4),
            3,
            Theorem::One,
        )
        .unwrap();
        let r = check_thm_1(3, 1, 3, &s, &YAssignment::default()).unwrap();
        assert!(r.passed());
        assert_eq!((r.image.as_str(), r.image_order), ("tau^9 sigma^0", 3));
    }

    #[test]
    fn thm1_names_offending_pair() {
        let s =
            RelationShape::parse("x^3 [x,y1]", &Alphabet::standard(1), 3, Theorem::One).unwrap();
        match check_thm_1(3, 1, 2, &s, &YAssignment::default()).unwrap_err() {
            Error::HypothesisViolation(msg) => assert!(msg.contains("[x,y1]"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn thm1_range() {
        let s = shape(Theorem::One, 2, 1, "[y1,y2]", 2);
        assert!(matches!(
            check_thm_1(3, 1, 2, &s, &YAssignment::default()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn tag_mismatch() {
        let s = shape(Theorem::T, 1, 1, "y1", 1);
        assert!(matches!(
            check_thm_1(3, 1, 2, &s, &YAssignment::default()),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn thm_t_case2_examples() {
        assert_eq!(geometric_n(3, 1, 1, 3), BigInt::from(21));
        let expected = (num_traits::pow(BigInt::from(4), 18) - 1) / BigInt::from(15);
        assert_eq!(geometric_n(3, 1, 2, 9), expected);
        assert_eq!(vp_unchecked(&expected, 3), Valuation::Finite(2));

        let r = check_thm_t(
            3,
            1,
            2,
            &shape(Theorem::T, 1, 1, "y1", 1),
            Some(1),
            &YAssignment::default(),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        let r = check_thm_t(
            3,
            1,
            3,
            &shape(Theorem::T, 2, 1, "y1 y2^2", 2),
            Some(2),
            &YAssignment::default(),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert_eq!(r.image_order, 3);
    }

    #[test]
    fn thm_t_case1() {
        let r = check_thm_t(
            3,
            1,
            2,
            &shape(Theorem::T, 1, 2, "y1", 1),
            None,
            &YAssignment::default(),
        )
        .unwrap();
        assert!(r.passed());
        assert_eq!(r.image_order, 3);
        assert!(r
            .assertions
            .assertions()
            .iter()
            .any(|a| a.detail.starts_with("root exponent 6")));
    }

    #[test]
    fn thm_t_rejects() {
        let s = shape(Theorem::T, 2, 1, "y1", 1);
        assert!(matches!(
            check_thm_t(3, 1, 2, &s, None, &YAssignment::default()),
            Err(Error::HypothesisViolation(_))
        ));
        let s = shape(Theorem::T, 1, 1, "[x,y1]", 1);
        assert!(matches!(
            check_thm_t(3, 1, 2, &s, None, &YAssignment::default()),
            Err(Error::HypothesisViolation(_))
        ));
        let s = shape(Theorem::T, 1, 1, "y1", 1);
        assert!(matches!(
            check_thm_t(3, 1, 2, &s, Some(3), &YAssignment::default()),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn filtration_examples() {
        let lim = Limits::default();
        let r = check_thm_filtration(
            3,
            1,
            &shape(Theorem::Filtration, 2, 1, "[y1,y2]", 2),
            &YAssignment::default(),
            &lim,
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
        assert_eq!((r.image.as_str(), r.image_order), ("tau^3 sigma^0", 3));
        let r = check_thm_filtration(
            5,
            1,
            &shape(Theorem::Filtration, 2, 3, "[y1,y2]", 2),
            &YAssignment::default(),
            &lim,
        )
        .unwrap();
        assert_eq!((r.image.as_str(), r.image_order), ("tau^15 sigma^0", 5));
        let e = check_thm_filtration(
            3,
            1,
            &shape(Theorem::Filtration, 1, 1, "[y1,y2]", 2),
            &YAssignment::default(),
            &lim,
        )
        .unwrap_err();
        assert!(matches!(e, Error::HypothesisViolation(_)));
    }

    #[test]
    fn filtration_with_t() {
        let alphabet = Alphabet::standard(2);
        let s = parse_word("[y1,y2]", &alphabet).unwrap();
        let t = parse_word("[x,[x,[x,y1]]]", &alphabet).unwrap();
        let shape = RelationShape::new(alphabet, 2, 1, Some(s), TailTag::InTTWithT)
            .unwrap()
            .with_t(t)
            .unwrap();
        let r = check_thm_filtration(3, 1, &shape, &YAssignment::default(), &Limits::default())
            .unwrap();
        assert!(r.passed(), "{:?}", r.assertions);
    }

    #[test]
    fn parse_relation_shape() {
        let s =
            RelationShape::parse("x^18 [y1,y2]", &Alphabet::standard(2), 3, Theorem::One).unwrap();
        assert_eq!((s.l(), s.u()), (2, 2));
        let s = RelationShape::parse(
            "x^3 [y1,y2]",
            &Alphabet::standard(2),
            3,
            Theorem::Filtration,
        )
        .unwrap();
        assert_eq!((s.l(), s.u()), (2, 1));
        assert!(RelationShape::parse("y1 x^3", &Alphabet::standard(2), 3, Theorem::One).is_err());
        assert!(RelationShape::parse("x^2", &Alphabet::standard(2), 3, Theorem::One).is_err());
    }

    #[test]
    fn grid_parse() {
        let g = GridSpec::parse("thm=l<m,1;p=3,5;k=1;m=1..3;l=1..2;u=1,2").unwrap();
        assert_eq!(g.theorems, vec![Theorem::LessThanM, Theorem::One]);
        assert_eq!(g.m, vec![1, 2, 3]);
        assert_eq!(GridSpec::parse("").unwrap(), GridSpec::default());
        assert!(GridSpec::parse("p=3;p=5").is_err());
        assert!(GridSpec::parse("q=3").is_err());
        assert!(GridSpec::parse("m=3..1").is_err());
        assert!(GridSpec::parse("m=0..100000000").is_err());
        assert!(GridSpec::parse("thm=Z").is_err());
        assert!(GridSpec::parse("p=-1").is_err());
    }

    #[test]
    fn sweep_thm1_grid() {
        let g = GridSpec::parse("thm=1;p=3,5;k=1;m=1..3;l=1..2;u=1,2").unwrap();
        let r = sweep(&g, 0, &Limits::default());
        assert!(r.passed());
        for pt in &r.points {
            let (m, l) = (pt.parameters.m.unwrap(), pt.parameters.l);
            if l < m {
                assert_eq!(pt.outcome, Outcome::Obstructed);
                assert_eq!(pt.image_order, Some(pt.parameters.p.pow(m - l)));
            } else {
                assert_eq!(pt.outcome, Outcome::HypothesisViolation);
            }
        }
    }

    #[test]
    fn sweep_empty() {
        let r = sweep(&GridSpec::parse("thm=").unwrap(), 0, &Limits::default());
        assert!(r.points.is_empty());
        assert!(r.passed());
    }

    #[test]
    fn sweep_all_theorems() {
        let g = GridSpec::parse("p=3,5;k=1,2;m=1..4;l=1..3;u=1,2,4;w=0,1").unwrap();
        let r = sweep(&g, 0, &Limits::default());
        assert!(
            r.passed(),
            "{:?}",
            r.points
                .iter()
                .filter(|p| p.outcome == Outcome::Failure)
                .collect::<Vec<_>>()
        );
        assert!(r.counts.obstructed > 0);
    }
}
