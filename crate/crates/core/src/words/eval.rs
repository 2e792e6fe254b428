use std::collections::BTreeMap;

use serde::Serialize;

use super::ast::{Atom, Word};
use crate::error::{Error, Result};
use crate::groups::Group;

/// Image of `w` under the homomorphism fixed by `assignment`.
pub fn evaluate<G: Group>(
    w: &Word,
    assignment: &BTreeMap<String, G::Elem>,
    group: &G,
) -> Result<G::Elem> {
    w.terms().iter().try_fold(group.identity(), |acc, t| {
        let base = match &t.atom {
            Atom::Gen(name) => assignment
                .get(name)
                .cloned()
                .ok_or_else(|| Error::MissingAssignment(name.clone()))?,
            Atom::Comm(a, b) => {
                let ga = evaluate(a, assignment, group)?;
                let gb = evaluate(b, assignment, group)?;
                group.commutator(&ga, &gb)
            }
        };
        Ok(group.mul(&acc, &group.pow(&base, t.exp)))
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub triples_checked: usize,
    /// Rendered triples on which one of the identities failed.
    pub counterexamples: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Checks `[xy, z] = [x, [y, z]] [y, z] [x, z]` and
/// `[x, yz] = [x, y] [y, [x, z]] [x, z]` on every sampled triple.
pub fn commutator_identities_check<'a, G: Group + 'a>(
    group: &G,
    samples: impl IntoIterator<Item = (&'a G::Elem, &'a G::Elem, &'a G::Elem)>,
) -> IdentityReport
where
    G::Elem: 'a,
{
    let mut checked = 0;
    let mut counterexamples = Vec::new();
    for (x, y, z) in samples {
        checked += 1;
        let c = |a: &G::Elem, b: &G::Elem| group.commutator(a, b);
        let left_lhs = c(&group.mul(x, y), z);
        let left_rhs = group.mul(&group.mul(&c(x, &c(y, z)), &c(y, z)), &c(x, z));
        let right_lhs = c(x, &group.mul(y, z));
        let right_rhs = group.mul(&group.mul(&c(x, y), &c(y, &c(x, z))), &c(x, z));
        if left_lhs != left_rhs || right_lhs != right_rhs {
            counterexamples.push(format!(
                "({}, {}, {})",
                group.describe(x),
                group.describe(y),
                group.describe(z)
            ));
        }
    }
    IdentityReport {
        triples_checked: checked,
        counterexamples,
    }
}

/// Every ordered triple drawn from `elems`.
pub fn all_triples<E>(elems: &[E]) -> Vec<(&E, &E, &E)> {
    let mut out = Vec::with_capacity(elems.len().pow(3));
    for a in elems {
        for b in elems {
            for c in elems {
                out.push((a, b, c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::CyclicGroup;
    use crate::words::{parse_word, Alphabet};

    #[test]
    fn missing_assignment_is_reported() {
        let c = CyclicGroup::new(9);
        let w = parse_word("x y1", &Alphabet::standard(1)).unwrap();
        let assignment = BTreeMap::from([("x".to_string(), 1u64)]);
        assert_eq!(
            evaluate(&w, &assignment, &c).unwrap_err(),
            Error::MissingAssignment("y1".into())
        );
    }

    #[test]
    fn abelian_images() {
        let c = CyclicGroup::new(27);
        let w = parse_word("x^9 [x,y1]^4 y1^-2", &Alphabet::standard(1)).unwrap();
        let assignment = BTreeMap::from([("x".to_string(), 2u64), ("y1".to_string(), 5u64)]);
        assert_eq!(evaluate(&w, &assignment, &c).unwrap(), (18 + 27 - 10) % 27);
    }

    #[test]
    fn identities_hold_in_abelian_group() {
        let c = CyclicGroup::new(6);
        let elems: Vec<u64> = (0..6).collect();
        let report = commutator_identities_check(&c, all_triples(&elems));
        assert_eq!(report.triples_checked, 216);
        assert!(report.passed());
    }
}
