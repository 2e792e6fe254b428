//! Carrier-independent finite group engine.
//!
//! A [`Group`] supplies identity, multiplication and inversion on a concrete
//! element type whose values are already in normal form, so structural
//! equality is group equality. Everything else (subgroup closure,
//! commutator and power subgroups, the three filtrations) is written once
//! against that trait.

mod cyclic;
mod series;
mod subgroup;

use std::fmt::Debug;
use std::hash::Hash;

pub use cyclic::CyclicGroup;
pub use series::{
    element_order, exponent, filtration_cross_check, is_powerful, lower_central_series,
    p_descending_series, zassenhaus_filtration, zassenhaus_inside_p_descending, zassenhaus_lazard,
    Chain, FiltrationCrossCheck,
};
pub use subgroup::{
    closure, commutator_subgroup, power_subgroup, product, trivial_subgroup, Limits, Subgroup,
};

pub trait Group {
    type Elem: Clone + Eq + Hash + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// Injective byte encoding of an element.
    fn encode(&self, a: &Self::Elem) -> Vec<u8>;

    /// Human-readable rendering for reports.
    fn describe(&self, a: &Self::Elem) -> String;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a^e` by square-and-multiply; negative exponents go through the inverse.
    fn pow(&self, a: &Self::Elem, e: i64) -> Self::Elem {
        let (mut base, mut n) = if e < 0 {
            (self.inv(a), e.unsigned_abs())
        } else {
            (a.clone(), e as u64)
        };
        let mut acc = self.identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `[a, b] = a b a^-1 b^-1`.
    fn commutator(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let ab = self.mul(a, b);
        let ab_ainv = self.mul(&ab, &self.inv(a));
        self.mul(&ab_ainv, &self.inv(b))
    }

    /// `c a c^-1`.
    fn conjugate(&self, c: &Self::Elem, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.mul(c, a), &self.inv(c))
    }

    /// Left-nested iterated commutator `[x^(i), y] = [x, [x^(i-1), y]]`.
    fn iterated_commutator(&self, x: &Self::Elem, y: &Self::Elem, i: usize) -> Self::Elem {
        (0..i).fold(y.clone(), |acc, _| self.commutator(x, &acc))
    }
}
