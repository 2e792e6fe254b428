use std::collections::{HashSet, VecDeque};

use super::Group;
use crate::error::{Error, Result};

/// Enumeration bounds shared by the closure engine and the series built on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest subgroup the closure engine will enumerate.
    pub max_order: usize,
    /// `[H, K]` is re-derived from all element pairs when `|H|·|K|` is at most this.
    pub pair_validation: usize,
    /// Longest filtration that will be computed before giving up.
    pub max_terms: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: 1_000_000,
            pair_validation: 1_000_000,
            max_terms: 10_000,
        }
    }
}

impl Limits {
    pub fn with_max_order(max_order: usize) -> Self {
        Limits {
            max_order,
            ..Limits::default()
        }
    }
}

/// A fully enumerated subgroup together with a small generating set.
#[derive(Clone, Debug)]
pub struct Subgroup<E> {
    gens: Vec<E>,
    elements: Vec<E>,
    members: HashSet<E>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord> Subgroup<E> {
    pub fn gens(&self) -> &[E] {
        &self.gens
    }

    /// Elements in ascending order.
    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.members.contains(e)
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup<E>) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|e| other.contains(e))
    }

    pub fn same_elements(&self, other: &Subgroup<E>) -> bool {
        self.order() == other.order() && self.is_subgroup_of(other)
    }
}

impl<E: PartialEq> PartialEq for Subgroup<E> {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl<E: Eq> Eq for Subgroup<E> {}

pub fn trivial_subgroup<G: Group>(group: &G) -> Subgroup<G::Elem> {
    let id = group.identity();
    Subgroup {
        gens: Vec::new(),
        elements: vec![id.clone()],
        members: HashSet::from([id]),
    }
}

struct Builder<'a, G: Group> {
    group: &'a G,
    gens: Vec<G::Elem>,
    members: HashSet<G::Elem>,
    order_bound: usize,
}

impl<'a, G: Group> Builder<'a, G> {
    fn new(group: &'a G, order_bound: usize) -> Self {
        Builder {
            group,
            gens: Vec::new(),
            members: HashSet::from([group.identity()]),
            order_bound,
        }
    }

    fn from_subgroup(group: &'a G, h: &Subgroup<G::Elem>, order_bound: usize) -> Self {
        Builder {
            group,
            gens: h.gens.clone(),
            members: h.members.clone(),
            order_bound,
        }
    }

    /// Adds `g` and re-closes. Elements already present are skipped, so the
    /// kept generating set grows only when the order strictly increases.
    fn add(&mut self, g: &G::Elem) -> Result<bool> {
        if self.members.contains(g) {
            return Ok(false);
        }
        let group = self.group;
        self.gens.push(g.clone());
        let ginv = group.inv(g);
        let mut queue: VecDeque<G::Elem> = VecDeque::new();
        // Old elements are closed under the old generators, so they only need
        // the new generator (and its inverse) applied.
        let old: Vec<G::Elem> = self.members.iter().cloned().collect();
        for e in &old {
            for s in [g, &ginv] {
                let h = group.mul(e, s);
                if self.insert(h.clone())? {
                    queue.push_back(h);
                }
            }
        }
        let step: Vec<G::Elem> = self
            .gens
            .iter()
            .flat_map(|s| [s.clone(), group.inv(s)])
            .collect();
        while let Some(e) = queue.pop_front() {
            for s in &step {
                let h = group.mul(&e, s);
                if self.insert(h.clone())? {
                    queue.push_back(h);
                }
            }
        }
        Ok(true)
    }

    fn insert(&mut self, e: G::Elem) -> Result<bool> {
        if self.members.contains(&e) {
            return Ok(false);
        }
        if self.members.len() >= self.order_bound {
            return Err(Error::ResourceLimit {
                what: "subgroup order".into(),
                bound: self.order_bound,
            });
        }
        self.members.insert(e);
        Ok(true)
    }

    fn finish(self) -> Subgroup<G::Elem> {
        let mut elements: Vec<G::Elem> = self.members.iter().cloned().collect();
        elements.sort();
        Subgroup {
            gens: self.gens,
            elements,
            members: self.members,
        }
    }
}

/// Subgroup generated by `gens`, enumerated breadth-first under right
/// multiplication by the generators and their inverses.
pub fn closure<'a, G: Group>(
    group: &G,
    gens: impl IntoIterator<Item = &'a G::Elem>,
    limits: &Limits,
) -> Result<Subgroup<G::Elem>>
where
    G::Elem: 'a,
{
    if limits.max_order == 0 {
        return Err(Error::invalid("max_order must be at least 1"));
    }
    let mut b = Builder::new(group, limits.max_order);
    for g in gens {
        b.add(g)?;
    }
    Ok(b.finish())
}

/// Subgroup generated by the union of the given subgroups.
pub fn product<G: Group>(
    group: &G,
    parts: &[&Subgroup<G::Elem>],
    limits: &Limits,
) -> Result<Subgroup<G::Elem>> {
    let Some(first) = parts.iter().max_by_key(|h| h.order()) else {
        return Ok(trivial_subgroup(group));
    };
    let mut b = Builder::from_subgroup(group, first, limits.max_order);
    for h in parts {
        for g in &h.gens {
            b.add(g)?;
        }
    }
    Ok(b.finish())
}

/// `H^e`: the subgroup generated by all `e`-th powers of elements of `H`.
pub fn power_subgroup<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    e: i64,
    limits: &Limits,
) -> Result<Subgroup<G::Elem>> {
    let mut b = Builder::new(group, limits.max_order);
    for x in &h.elements {
        b.add(&group.pow(x, e))?;
    }
    Ok(b.finish())
}

/// `[H, K]`: the normal closure in `<H, K>` of the commutators of generator
/// pairs. When `|H|·|K| <= limits.pair_validation` the result is compared
/// against the subgroup generated by all element-pair commutators.
pub fn commutator_subgroup<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    k: &Subgroup<G::Elem>,
    limits: &Limits,
) -> Result<Subgroup<G::Elem>> {
    let mut b = Builder::new(group, limits.max_order);
    for x in &h.gens {
        for y in &k.gens {
            b.add(&group.commutator(x, y))?;
        }
    }
    let conjugators: Vec<G::Elem> = h.gens.iter().chain(k.gens.iter()).cloned().collect();
    loop {
        let mut grew = false;
        let current = b.gens.clone();
        for s in &current {
            for c in &conjugators {
                grew |= b.add(&group.conjugate(c, s))?;
            }
        }
        if !grew {
            break;
        }
    }
    let result = b.finish();

    if h.order().saturating_mul(k.order()) <= limits.pair_validation {
        let mut full = Builder::new(group, limits.max_order);
        for x in &h.elements {
            for y in &k.elements {
                full.add(&group.commutator(x, y))?;
            }
        }
        let full = full.finish();
        assert!(
            full.same_elements(&result),
            "generator-pair [H,K] (order {}) disagrees with element-pair [H,K] (order {})",
            result.order(),
            full.order()
        );
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::CyclicGroup;

    #[test]
    fn closure_of_identity_is_trivial() {
        let c = CyclicGroup::new(9);
        let h = closure(&c, [&0u64], &Limits::default()).unwrap();
        assert_eq!(h.order(), 1);
        assert!(h.is_trivial());
        assert!(h.gens().is_empty());
    }

    #[test]
    fn closure_in_cyclic_group() {
        let c = CyclicGroup::new(27);
        assert_eq!(closure(&c, [&3u64], &Limits::default()).unwrap().order(), 9);
        assert_eq!(
            closure(&c, [&9u64, &6], &Limits::default())
                .unwrap()
                .order(),
            9
        );
        assert_eq!(
            closure(&c, [&1u64], &Limits::default()).unwrap().order(),
            27
        );
    }

    #[test]
    fn closure_reports_resource_limit() {
        let c = CyclicGroup::new(100);
        let err = closure(&c, [&1u64], &Limits::with_max_order(10)).unwrap_err();
        assert_eq!(
            err,
            Error::ResourceLimit {
                what: "subgroup order".into(),
                bound: 10
            }
        );
        assert!(closure(&c, [&1u64], &Limits::with_max_order(0)).is_err());
    }

    #[test]
    fn power_and_product() {
        let c = CyclicGroup::new(27);
        let lim = Limits::default();
        let g = closure(&c, [&1u64], &lim).unwrap();
        let g3 = power_subgroup(&c, &g, 3, &lim).unwrap();
        assert_eq!(g3.order(), 9);
        let a = closure(&c, [&9u64], &lim).unwrap();
        let b = closure(&c, [&3u64], &lim).unwrap();
        let ab = product(&c, &[&a, &b], &lim).unwrap();
        assert_eq!(ab, b);
        assert_eq!(product(&c, &[], &lim).unwrap().order(), 1);
    }
}
