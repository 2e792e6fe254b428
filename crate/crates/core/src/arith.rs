//! Exact integer helpers, p-adic valuations and truncated p-adic log/exp.
//!
//! All integers are [`num_bigint::BigInt`]. A [`PadicInt`] is a residue
//! modulo `p^N` that carries its precision `N` through every operation; the
//! precision of a result is never larger than the precision of its inputs.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::report::Checklist;

pub type ExactInt = BigInt;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{p} is not prime")))
    }
}

/// p-adic valuation of an integer. `Infinite` is the valuation of zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Valuation::Finite(v) => s.serialize_u64(*v),
            Valuation::Infinite => s.serialize_str("infinite"),
        }
    }
}

/// Largest `e` with `p^e | n`.
pub fn vp(n: &BigInt, p: u64) -> Result<Valuation> {
    ensure_prime(p)?;
    Ok(vp_unchecked(n, p))
}

pub(crate) fn vp_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut e = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Valuation::Finite(e);
        }
        n = q;
        e += 1;
    }
}

/// Valuation of a machine integer; `p` is assumed prime.
pub fn vp_u64(mut n: u64, p: u64) -> Valuation {
    if n == 0 {
        return Valuation::Infinite;
    }
    let mut e = 0;
    while n.is_multiple_of(p) {
        n /= p;
        e += 1;
    }
    Valuation::Finite(e)
}

/// `v_p((1 + alpha)^n - 1)`, computed by exact expansion.
///
/// The precondition `v_p(alpha) >= 1` (`>= 2` when `p = 2`) is the domain on
/// which this value equals `v_p(alpha) + v_p(n)`; outside it the call fails.
pub fn unit_power_valuation(p: u64, alpha: &BigInt, n: &BigInt) -> Result<u64> {
    ensure_prime(p)?;
    let min_val = if p == 2 { 2 } else { 1 };
    match vp_unchecked(alpha, p) {
        Valuation::Finite(v) if v >= min_val => {}
        Valuation::Finite(v) => {
            return Err(Error::domain(format!(
                "v_{p}(alpha) = {v} is below the required {min_val}"
            )))
        }
        Valuation::Infinite => return Err(Error::domain("alpha must be nonzero")),
    }
    if !n.is_positive() {
        return Err(Error::domain("n must be positive"));
    }
    let exp = n
        .to_u32()
        .ok_or_else(|| Error::invalid("exponent n does not fit in 32 bits"))?;
    let value = num_traits::pow(BigInt::one() + alpha, exp as usize) - BigInt::one();
    Ok(vp_unchecked(&value, p)
        .finite()
        .expect("(1+alpha)^n - 1 is nonzero for alpha != 0 in pZ"))
}

/// Binomial coefficient with `C(n, k) = 0` whenever `k < 0`, `n < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k) as usize;
    // Pascal row up to column k.
    let mut row = vec![BigInt::zero(); k + 1];
    row[0] = BigInt::one();
    for i in 1..=n as usize {
        for j in (1..=k.min(i)).rev() {
            let prev = row[j - 1].clone();
            row[j] += prev;
        }
    }
    row[k].clone()
}

/// `base^exp mod modulus` on machine integers.
pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// A p-adic integer known modulo `p^precision`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicInt {
    p: u64,
    precision: u32,
    residue: BigUint,
}

impl PadicInt {
    pub fn new(p: u64, precision: u32, value: impl Into<BigInt>) -> Result<Self> {
        ensure_prime(p)?;
        if precision == 0 {
            return Err(Error::invalid("precision must be at least 1"));
        }
        let modulus = BigInt::from(p).pow(precision);
        let residue = value.into().mod_floor(&modulus);
        Ok(PadicInt {
            p,
            precision,
            residue: residue.to_biguint().expect("mod_floor is nonnegative"),
        })
    }

    pub fn zero(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, precision, 0)
    }

    pub fn one(p: u64, precision: u32) -> Result<Self> {
        Self::new(p, precision, 1)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn residue(&self) -> &BigUint {
        &self.residue
    }

    pub fn residue_int(&self) -> BigInt {
        BigInt::from_biguint(Sign::Plus, self.residue.clone())
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        !(&self.residue % self.p).is_zero()
    }

    /// Valuation of the residue, or `None` when it is zero at this precision
    /// (the true valuation is then only known to be `>= precision`).
    pub fn valuation(&self) -> Option<u32> {
        vp_unchecked(&self.residue_int(), self.p)
            .finite()
            .map(|v| v as u32)
    }

    /// Drops digits so that the result is known modulo `p^precision`.
    pub fn truncate(&self, precision: u32) -> Result<Self> {
        if precision == 0 || precision > self.precision {
            return Err(Error::invalid(format!(
                "cannot truncate precision {} to {precision}",
                self.precision
            )));
        }
        Self::new(self.p, precision, self.residue_int())
    }

    /// True when `self ≡ other (mod p^digits)`; `digits` may not exceed either precision.
    pub fn congruent(&self, other: &PadicInt, digits: u32) -> bool {
        if self.p != other.p || digits > self.precision || digits > other.precision {
            return false;
        }
        let m = BigUint::from(self.p).pow(digits);
        &self.residue % &m == &other.residue % &m
    }

    fn check_same_prime(&self, other: &PadicInt) -> Result<()> {
        if self.p != other.p {
            return Err(Error::invalid(format!(
                "p-adic primes differ: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &PadicInt, value: BigInt) -> PadicInt {
        let precision = self.precision.min(other.precision);
        PadicInt::new(self.p, precision, value).expect("prime and precision already validated")
    }

    pub fn add(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_same_prime(other)?;
        Ok(self.combine(other, self.residue_int() + other.residue_int()))
    }

    pub fn sub(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_same_prime(other)?;
        Ok(self.combine(other, self.residue_int() - other.residue_int()))
    }

    pub fn mul(&self, other: &PadicInt) -> Result<PadicInt> {
        self.check_same_prime(other)?;
        Ok(self.combine(other, self.residue_int() * other.residue_int()))
    }

    pub fn pow(&self, exp: &BigUint) -> PadicInt {
        let modulus = self.modulus();
        PadicInt {
            p: self.p,
            precision: self.precision,
            residue: self.residue.modpow(exp, &modulus),
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn inverse(&self) -> Result<PadicInt> {
        if !self.is_unit() {
            return Err(Error::domain("only p-adic units are invertible"));
        }
        let inv = mod_inverse(&self.residue_int(), &BigInt::from(self.modulus()))
            .expect("units are invertible");
        Ok(PadicInt::new(self.p, self.precision, inv).expect("validated"))
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}

impl Serialize for PadicInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("PadicInt", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("precision", &self.precision)?;
        st.serialize_field("residue", &self.residue.to_string())?;
        st.end()
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Smallest valuation of `u - 1` (resp. `x`) for which log (resp. exp) converges.
fn convergence_floor(p: u64) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

/// `x^i / d mod p^N` where `d = p^e * unit` exactly divides `x^i` as a p-adic number.
///
/// The numerator is computed modulo `p^(N+e)` so that the exact division by
/// `p^e` leaves a residue correct modulo `p^N`.
fn series_term(x: &BigInt, i: u32, denom: &BigInt, p: u64, precision: u32) -> BigInt {
    let e = vp_unchecked(denom, p)
        .finite()
        .expect("denominator is nonzero") as u32;
    let pe = BigInt::from(p).pow(e);
    let unit = denom / &pe;
    let wide = BigInt::from(p).pow(precision + e);
    let numer = x.modpow(&BigInt::from(i), &wide);
    debug_assert!((&numer % &pe).is_zero());
    let modulus = BigInt::from(p).pow(precision);
    let inv = mod_inverse(&unit.mod_floor(&modulus), &modulus).expect("unit part is invertible");
    ((numer / pe) * inv).mod_floor(&modulus)
}

/// Truncated p-adic logarithm `Σ (-1)^(i+1) (u-1)^i / i` on `1 + p^n Z_p`,
/// `n >= 1` (`n >= 2` for `p = 2`).
///
/// On this domain every term `(u-1)^i / i` is determined modulo `p^N` by
/// `u mod p^N`, so the result has the input's precision. Terms are summed
/// until `i*n - floor(log_p i) >= N`, past which every term vanishes.
pub fn padic_log(u: &PadicInt) -> Result<PadicInt> {
    let p = u.p;
    let precision = u.precision;
    let x = u.residue_int() - BigInt::one();
    let x = x.mod_floor(&BigInt::from(u.modulus()));
    if x.is_zero() {
        return PadicInt::zero(p, precision);
    }
    let n = vp_unchecked(&x, p).finite().expect("x is nonzero") as u32;
    let floor = convergence_floor(p);
    if n < floor {
        return Err(Error::domain(format!(
            "log needs u ≡ 1 mod {p}^{floor}, got v_{p}(u-1) = {n}"
        )));
    }
    let mut sum = BigInt::zero();
    let mut i: u32 = 1;
    loop {
        let log_floor = ilog(i as u64, p);
        if (i as u64) * (n as u64) >= precision as u64 + log_floor as u64 && i > 1 {
            break;
        }
        let term = series_term(&x, i, &BigInt::from(i), p, precision);
        if i % 2 == 1 {
            sum += term;
        } else {
            sum -= term;
        }
        i += 1;
    }
    PadicInt::new(p, precision, sum)
}

/// Truncated p-adic exponential `Σ x^i / i!` on `p^n Z_p`, `n >= 1`
/// (`n >= 2` for `p = 2`). Terms are summed until
/// `i*n - floor((i-1)/(p-1)) >= N`, which bounds every omitted term using
/// `v_p(i!) <= (i-1)/(p-1)`.
pub fn padic_exp(x: &PadicInt) -> Result<PadicInt> {
    let p = x.p;
    let precision = x.precision;
    let xv = x.residue_int();
    if xv.is_zero() {
        return PadicInt::one(p, precision);
    }
    let n = vp_unchecked(&xv, p).finite().expect("x is nonzero") as u32;
    let floor = convergence_floor(p);
    if n < floor {
        return Err(Error::domain(format!(
            "exp needs x ∈ {p}^{floor} Z_{p}, got v_{p}(x) = {n}"
        )));
    }
    let mut sum = BigInt::one();
    let mut factorial = BigInt::one();
    let mut i: u32 = 1;
    loop {
        let bound = (i as u64 - 1) / (p - 1);
        if (i as u64) * (n as u64) >= precision as u64 + bound && i > 1 {
            break;
        }
        factorial *= i;
        sum += series_term(&xv, i, &factorial, p, precision);
        i += 1;
    }
    PadicInt::new(p, precision, sum)
}

/// floor(log_p(i)) for i >= 1.
fn ilog(mut i: u64, p: u64) -> u32 {
    let mut e = 0;
    while i >= p {
        i /= p;
        e += 1;
    }
    e
}

/// `base^exponent` where the exponent is itself a truncated p-adic integer.
///
/// The power is taken on the exponent's residue. When `base ≡ 1 mod p^j`
/// and the exponent is known modulo `p^M`, the result is determined modulo
/// `p^(M+j)`; the returned precision is `min(base precision, M + j)`.
pub fn pow_padic_exponent(base: &PadicInt, exponent: &PadicInt) -> Result<PadicInt> {
    base.check_same_prime(exponent)?;
    let p = base.p;
    let dist = base.sub(&PadicInt::one(p, base.precision)?)?;
    let j = match dist.valuation() {
        None => base.precision,
        Some(j) => j,
    };
    if j < convergence_floor(p) {
        return Err(Error::domain(format!(
            "base must lie in 1 + {p}^{} Z_{p}",
            convergence_floor(p)
        )));
    }
    let precision = base.precision.min(exponent.precision + j);
    let raised = base.pow(exponent.residue());
    raised.truncate(precision)
}

/// Exponent `v` with `(1 + p^k u)^v = 1 + p^k`, computed as
/// `log(1 + p^k) / log(1 + p^k u)`.
#[derive(Clone, Debug, Serialize)]
pub struct PowerExponent {
    /// `v`, known modulo `p^(N-k)`: both logarithms have valuation exactly `k`,
    /// so the quotient loses `k` digits.
    pub exponent: PadicInt,
    pub log_target: PadicInt,
    pub log_base: PadicInt,
    /// Precision to which `(1 + p^k u)^v ≡ 1 + p^k` is guaranteed (equal to `N`).
    pub verified_precision: u32,
}

pub fn solve_power_exponent(p: u64, k: u32, u: &PadicInt, precision: u32) -> Result<PowerExponent> {
    ensure_prime(p)?;
    if u.p != p {
        return Err(Error::invalid("u has a different prime"));
    }
    if k < convergence_floor(p) {
        return Err(Error::domain(format!(
            "k = {k} violates k > 1/(p-1) for p = {p}"
        )));
    }
    if precision <= k {
        return Err(Error::invalid(format!(
            "precision {precision} must exceed k = {k}"
        )));
    }
    if !u.is_unit() {
        return Err(Error::domain("u must be a p-adic unit"));
    }
    if u.precision < precision {
        return Err(Error::invalid(format!(
            "u is only known to precision {}, below {precision}",
            u.precision
        )));
    }
    let pk = BigInt::from(p).pow(k);
    let target = PadicInt::new(p, precision, BigInt::one() + &pk)?;
    let base = PadicInt::new(p, precision, BigInt::one() + &pk * u.residue_int())?;
    let log_target = padic_log(&target)?;
    let log_base = padic_log(&base)?;
    for (name, l) in [("log(1+p^k)", &log_target), ("log(1+p^k u)", &log_base)] {
        if l.valuation() != Some(k) {
            return Err(Error::domain(format!(
                "{name} should have valuation exactly {k}, got {:?}",
                l.valuation()
            )));
        }
    }
    let out = precision - k;
    let strip = |l: &PadicInt| -> Result<PadicInt> { PadicInt::new(p, out, l.residue_int() / &pk) };
    let exponent = strip(&log_target)?.mul(&strip(&log_base)?.inverse()?)?;
    Ok(PowerExponent {
        exponent,
        log_target,
        log_base,
        verified_precision: precision,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerExponentReport {
    pub p: u64,
    pub k: u32,
    pub u: String,
    pub precision: u32,
    pub solution: PowerExponent,
    pub assertions: Checklist,
}

impl PowerExponentReport {
    pub fn passed(&self) -> bool {
        self.assertions.all_passed()
    }
}

/// Solves `(1 + p^k u)^v = 1 + p^k` and re-checks the answer by exact
/// modular powering, by the log/exp round trip and by the valuation formula.
pub fn power_exponent_report(
    p: u64,
    k: u32,
    u: i64,
    precision: u32,
) -> Result<PowerExponentReport> {
    let unit = PadicInt::new(p, precision, u)?;
    let solution = solve_power_exponent(p, k, &unit, precision)?;
    let mut assertions = Checklist::new();
    let pk = BigInt::from(p).pow(k);
    let modulus = BigInt::from(p).pow(solution.verified_precision);
    let base = BigInt::one() + &pk * BigInt::from(u);
    let target = (BigInt::one() + &pk).mod_floor(&modulus);
    let lhs = base.modpow(&solution.exponent.residue_int(), &modulus);
    assertions.check(
        "power",
        "(1 + p^k u)^v ≡ 1 + p^k mod p^N",
        lhs == target,
        format!(
            "lhs {lhs}, rhs {target}, N = {}",
            solution.verified_precision
        ),
    );
    let raised = pow_padic_exponent(
        &PadicInt::new(p, precision, base.clone())?,
        &solution.exponent,
    )?;
    assertions.check(
        "padic-power",
        "base^v through the p-adic exponent agrees to its precision",
        raised.congruent(
            &PadicInt::new(p, precision, target.clone())?,
            raised.precision(),
        ),
        format!("{} mod p^{}", raised.residue(), raised.precision()),
    );
    let round_trip = padic_exp(&solution.log_target)?;
    assertions.check(
        "log-exp",
        "exp(log(1 + p^k)) = 1 + p^k",
        round_trip.residue_int() == target.mod_floor(&BigInt::from(round_trip.modulus())),
        round_trip.residue().to_string(),
    );
    let expected = k as u64 + 1;
    let got = unit_power_valuation(p, &(&pk * BigInt::from(u)), &BigInt::from(p))?;
    assertions.check(
        "valuation",
        "v_p((1 + p^k u)^p - 1) = k + 1",
        got == expected,
        format!("got {got}, expected {expected}"),
    );
    Ok(PowerExponentReport {
        p,
        k,
        u: u.to_string(),
        precision,
        solution,
        assertions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(vp(&big(63), 3).unwrap(), Valuation::Finite(2));
        assert_eq!(vp(&big(1), 5).unwrap(), Valuation::Finite(0));
        assert_eq!(vp(&big(0), 3).unwrap(), Valuation::Infinite);
        assert_eq!(vp(&big(-48), 2).unwrap(), Valuation::Finite(4));
        assert!(matches!(vp(&big(10), 4), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn unit_power_valuation_examples() {
        assert_eq!(unit_power_valuation(3, &big(3), &big(3)).unwrap(), 2);
        assert_eq!(unit_power_valuation(3, &big(3), &big(1)).unwrap(), 1);
        assert_eq!(unit_power_valuation(2, &big(4), &big(2)).unwrap(), 3);
    }

    #[test]
    fn unit_power_valuation_rejects_out_of_domain() {
        assert!(matches!(
            unit_power_valuation(2, &big(2), &big(2)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            unit_power_valuation(3, &big(4), &big(2)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            unit_power_valuation(3, &big(3), &big(0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn binomial_edges() {
        assert_eq!(binomial(5, 2), big(10));
        assert_eq!(binomial(0, 0), big(1));
        assert_eq!(binomial(2, 3), big(0));
        assert_eq!(binomial(-1, 0), big(0));
        assert_eq!(binomial(4, -1), big(0));
        assert_eq!(
            binomial(50, 25),
            "126410606437752".parse::<BigInt>().unwrap()
        );
    }

    #[test]
    fn pow_mod_matches_naive() {
        for b in 0..20u64 {
            for e in 0..12u64 {
                let naive = (0..e).fold(1u64, |acc, _| acc * b % 81);
                assert_eq!(pow_mod(b, e, 81), naive);
            }
        }
        assert_eq!(pow_mod(7, 3, 1), 0);
    }

    #[test]
    fn log_of_one_is_zero() {
        for p in [2, 3, 5] {
            let one = PadicInt::one(p, 7).unwrap();
            assert!(padic_log(&one).unwrap().is_zero());
        }
    }

    #[test]
    fn exp_of_zero_is_one() {
        let z = PadicInt::zero(3, 6).unwrap();
        assert_eq!(padic_exp(&z).unwrap(), PadicInt::one(3, 6).unwrap());
    }

    #[test]
    fn log_rejects_non_principal_units() {
        let u = PadicInt::new(3, 6, 2).unwrap();
        assert!(matches!(padic_log(&u), Err(Error::Domain(_))));
        let u = PadicInt::new(2, 6, 3).unwrap();
        assert!(matches!(padic_log(&u), Err(Error::Domain(_))));
    }

    #[test]
    fn exp_rejects_outside_disc() {
        let x = PadicInt::new(3, 6, 1).unwrap();
        assert!(matches!(padic_exp(&x), Err(Error::Domain(_))));
        let x = PadicInt::new(2, 6, 2).unwrap();
        assert!(matches!(padic_exp(&x), Err(Error::Domain(_))));
    }

    #[test]
    fn log_exp_roundtrip_examples() {
        let four = PadicInt::new(3, 6, 4).unwrap();
        let l = padic_log(&four).unwrap();
        assert_eq!(padic_exp(&l).unwrap(), four);

        let seven = PadicInt::new(3, 6, 7).unwrap();
        assert_eq!(padic_exp(&padic_log(&seven).unwrap()).unwrap(), seven);

        let five = PadicInt::new(5, 8, 5).unwrap();
        assert_eq!(padic_log(&padic_exp(&five).unwrap()).unwrap(), five);
    }

    #[test]
    fn log_is_a_homomorphism() {
        let a = PadicInt::new(3, 6, 4).unwrap();
        let b = PadicInt::new(3, 6, 7).unwrap();
        let lhs = padic_log(&a.mul(&b).unwrap()).unwrap();
        let rhs = padic_log(&a).unwrap().add(&padic_log(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn solve_power_exponent_trivial_case() {
        let u = PadicInt::one(3, 8).unwrap();
        let sol = solve_power_exponent(3, 1, &u, 8).unwrap();
        assert_eq!(sol.exponent, PadicInt::one(3, 7).unwrap());
    }

    #[test]
    fn solve_power_exponent_rejects_bad_k() {
        let u = PadicInt::one(2, 8).unwrap();
        assert!(matches!(
            solve_power_exponent(2, 1, &u, 8),
            Err(Error::Domain(_))
        ));
        let u = PadicInt::new(3, 8, 3).unwrap();
        assert!(matches!(
            solve_power_exponent(3, 1, &u, 8),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn padic_precision_never_grows() {
        let a = PadicInt::new(5, 4, 17).unwrap();
        let b = PadicInt::new(5, 9, 3).unwrap();
        assert_eq!(a.mul(&b).unwrap().precision(), 4);
        assert_eq!(a.add(&b).unwrap().precision(), 4);
        assert!(a.truncate(5).is_err());
    }

    #[test]
    fn power_exponent_report_passes() {
        for (p, k, u) in [(3, 1, 2), (5, 2, 3), (7, 1, 1), (2, 2, 1)] {
            let r = power_exponent_report(p, k, u, 12).unwrap();
            assert!(r.passed(), "{p} {k} {u}: {:?}", r.assertions);
        }
        assert!(power_exponent_report(3, 1, 3, 12).is_err());
    }
}
