use std::collections::hash_map::Entry;
use std::collections::HashMap;

use num_integer::Integer;
use serde::Serialize;

use super::subgroup::{commutator_subgroup, power_subgroup, product, Limits, Subgroup};
use super::Group;
use crate::error::{Error, Result};

/// A descending chain of subgroups; `term(1)` is the whole group.
#[derive(Clone, Debug)]
pub struct Chain<E> {
    terms: Vec<Subgroup<E>>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord> Chain<E> {
    pub fn terms(&self) -> &[Subgroup<E>] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// 1-based access. Indices past the end return the last term, which is
    /// where the chain stabilized.
    pub fn term(&self, n: usize) -> &Subgroup<E> {
        assert!(n >= 1, "chains are indexed from 1");
        let idx = (n - 1).min(self.terms.len() - 1);
        &self.terms[idx]
    }

    pub fn orders(&self) -> Vec<usize> {
        self.terms.iter().map(Subgroup::order).collect()
    }

    /// Smallest `n` with a trivial `n`-th term, if the chain reaches 1.
    pub fn first_trivial(&self) -> Option<usize> {
        self.terms
            .iter()
            .position(Subgroup::is_trivial)
            .map(|i| i + 1)
    }

    pub fn is_descending(&self) -> bool {
        self.terms.windows(2).all(|w| w[1].is_subgroup_of(&w[0]))
    }
}

/// Runs a recursion `next = f(current)` until it reaches the trivial group
/// or repeats a term.
fn iterate_to_fixpoint<E, F>(start: Subgroup<E>, limits: &Limits, mut step: F) -> Result<Chain<E>>
where
    E: Clone + Eq + std::hash::Hash + Ord,
    F: FnMut(&Subgroup<E>) -> Result<Subgroup<E>>,
{
    let mut terms = vec![start];
    loop {
        let last = terms.last().expect("nonempty");
        if last.is_trivial() {
            break;
        }
        let next = step(last)?;
        if next.same_elements(last) {
            break;
        }
        terms.push(next);
        if terms.len() > limits.max_terms {
            return Err(Error::ResourceLimit {
                what: "series length".into(),
                bound: limits.max_terms,
            });
        }
    }
    Ok(Chain { terms })
}

/// `G_1 = H`, `G_{i+1} = [G_i, H]`.
pub fn lower_central_series<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    limits: &Limits,
) -> Result<Chain<G::Elem>> {
    iterate_to_fixpoint(h.clone(), limits, |gi| {
        commutator_subgroup(group, gi, h, limits)
    })
}

/// `G^(1) = H`, `G^(i+1) = (G^(i))^p [G^(i), H]`.
pub fn p_descending_series<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    p: u64,
    limits: &Limits,
) -> Result<Chain<G::Elem>> {
    iterate_to_fixpoint(h.clone(), limits, |gi| {
        let pw = power_subgroup(group, gi, p as i64, limits)?;
        let cm = commutator_subgroup(group, gi, h, limits)?;
        product(group, &[&pw, &cm], limits)
    })
}

/// Interns subgroups so that repeated terms share one id.
struct Interner<E> {
    distinct: Vec<Subgroup<E>>,
}

impl<E: Clone + Eq + std::hash::Hash + Ord> Interner<E> {
    fn id(&mut self, s: &Subgroup<E>) -> usize {
        if let Some(i) = self.distinct.iter().position(|d| d.same_elements(s)) {
            return i;
        }
        self.distinct.push(s.clone());
        self.distinct.len() - 1
    }
}

/// `G_(1) = H`, `G_(n) = G_(⌈n/p⌉)^p · Π_{i+j=n} [G_(i), G_(j)]`.
///
/// Terms of this filtration can repeat and later drop, so the chain is
/// only cut once it reaches the trivial group; `limits.max_terms` bounds
/// the length otherwise.
pub fn zassenhaus_filtration<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    p: u64,
    limits: &Limits,
) -> Result<Chain<G::Elem>> {
    let mut interner = Interner {
        distinct: Vec::new(),
    };
    let mut ids = vec![usize::MAX, interner.id(h)];
    let mut terms = vec![h.clone()];
    let mut powers: HashMap<usize, Subgroup<G::Elem>> = HashMap::new();
    let mut comms: HashMap<(usize, usize), Subgroup<G::Elem>> = HashMap::new();

    let mut n = 1;
    while !terms.last().expect("nonempty").is_trivial() {
        n += 1;
        if n > limits.max_terms {
            return Err(Error::ResourceLimit {
                what: "Zassenhaus filtration length".into(),
                bound: limits.max_terms,
            });
        }
        let base_id = ids[n.div_ceil(p as usize)];
        if let Entry::Vacant(slot) = powers.entry(base_id) {
            slot.insert(power_subgroup(
                group,
                &interner.distinct[base_id],
                p as i64,
                limits,
            )?);
        }
        let mut parts_ids = vec![];
        for i in 1..=n / 2 {
            let j = n - i;
            let key = (ids[i].min(ids[j]), ids[i].max(ids[j]));
            if let Entry::Vacant(slot) = comms.entry(key) {
                slot.insert(commutator_subgroup(
                    group,
                    &interner.distinct[key.0],
                    &interner.distinct[key.1],
                    limits,
                )?);
            }
            parts_ids.push(key);
        }
        let mut parts: Vec<&Subgroup<G::Elem>> = vec![&powers[&base_id]];
        parts.extend(parts_ids.iter().map(|k| &comms[k]));
        let term = product(group, &parts, limits)?;
        ids.push(interner.id(&term));
        terms.push(term);
    }
    Ok(Chain { terms })
}

/// `G_(n) = Π_{i·p^h >= n} G_i^{p^h}`, with `G_i` the lower central series of `H`.
pub fn zassenhaus_lazard<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    p: u64,
    limits: &Limits,
) -> Result<Chain<G::Elem>> {
    let lcs = lower_central_series(group, h, limits)?;
    // Only nontrivial LCS terms contribute.
    let nontrivial: Vec<&Subgroup<G::Elem>> =
        lcs.terms().iter().filter(|t| !t.is_trivial()).collect();
    let mut powers: HashMap<(usize, u32), Subgroup<G::Elem>> = HashMap::new();
    let mut terms = vec![h.clone()];
    let mut n: u64 = 1;
    while !terms.last().expect("nonempty").is_trivial() {
        n += 1;
        if n as usize > limits.max_terms {
            return Err(Error::ResourceLimit {
                what: "Lazard filtration length".into(),
                bound: limits.max_terms,
            });
        }
        let mut keys = Vec::new();
        for (idx, gi) in nontrivial.iter().enumerate() {
            let i = idx as u64 + 1;
            // Smallest h with i·p^h >= n; larger h give subgroups of this one.
            let mut hexp = 0u32;
            let mut reach = i;
            while reach < n {
                reach *= p;
                hexp += 1;
            }
            let key = (idx, hexp);
            if let Entry::Vacant(slot) = powers.entry(key) {
                slot.insert(power_subgroup(group, gi, (p as i64).pow(hexp), limits)?);
            }
            keys.push(key);
        }
        let parts: Vec<&Subgroup<G::Elem>> = keys.iter().map(|k| &powers[k]).collect();
        terms.push(product(group, &parts, limits)?);
    }
    Ok(Chain { terms })
}

/// `H_(p^(l-1)+1) ⊆ H^(l+1)`, read off a Zassenhaus and a p-descending chain of the same group.
pub fn zassenhaus_inside_p_descending<E: Clone + Eq + std::hash::Hash + Ord>(
    zassenhaus: &Chain<E>,
    p_descending: &Chain<E>,
    p: u64,
    l: u32,
) -> bool {
    let n = p.pow(l - 1) as usize + 1;
    zassenhaus
        .term(n)
        .is_subgroup_of(p_descending.term(l as usize + 1))
}

/// Agreement of the recursive and Lazard Zassenhaus chains, and the
/// inclusions `H_(p^(l-1)+1) ⊆ H^(l+1)` for `l = 2, 3`.
#[derive(Clone, Debug, Serialize)]
pub struct FiltrationCrossCheck {
    pub order: usize,
    pub zassenhaus_orders: Vec<usize>,
    pub lazard_orders: Vec<usize>,
    pub p_descending_orders: Vec<usize>,
    pub lazard_agrees: bool,
    pub inclusion_l2: bool,
    pub inclusion_l3: bool,
}

impl FiltrationCrossCheck {
    pub fn passed(&self) -> bool {
        self.lazard_agrees && self.inclusion_l2 && self.inclusion_l3
    }
}

pub fn filtration_cross_check<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    p: u64,
    limits: &Limits,
) -> Result<FiltrationCrossCheck> {
    let zas = zassenhaus_filtration(group, h, p, limits)?;
    let laz = zassenhaus_lazard(group, h, p, limits)?;
    let pds = p_descending_series(group, h, p, limits)?;
    let len = zas.len().max(laz.len());
    let lazard_agrees = (1..=len).all(|n| zas.term(n).same_elements(laz.term(n)));
    Ok(FiltrationCrossCheck {
        order: h.order(),
        zassenhaus_orders: zas.orders(),
        lazard_orders: laz.orders(),
        p_descending_orders: pds.orders(),
        lazard_agrees,
        inclusion_l2: zassenhaus_inside_p_descending(&zas, &pds, p, 2),
        inclusion_l3: zassenhaus_inside_p_descending(&zas, &pds, p, 3),
    })
}

/// Powerful: `[H,H] ⊆ H^p` for odd `p`, `[H,H] ⊆ H^4` for `p = 2`.
pub fn is_powerful<G: Group>(
    group: &G,
    h: &Subgroup<G::Elem>,
    p: u64,
    limits: &Limits,
) -> Result<bool> {
    let comm = commutator_subgroup(group, h, h, limits)?;
    let e = if p == 2 { 4 } else { p as i64 };
    let pw = power_subgroup(group, h, e, limits)?;
    Ok(comm.is_subgroup_of(&pw))
}

/// Order of `g`, found by repeated multiplication; fails past `bound`.
pub fn element_order<G: Group>(group: &G, g: &G::Elem, bound: usize) -> Result<u64> {
    let mut acc = g.clone();
    let mut n: u64 = 1;
    while !group.is_identity(&acc) {
        if n as usize >= bound {
            return Err(Error::ResourceLimit {
                what: "element order".into(),
                bound,
            });
        }
        acc = group.mul(&acc, g);
        n += 1;
    }
    Ok(n)
}

/// Least common multiple of the element orders of `H`.
pub fn exponent<G: Group>(group: &G, h: &Subgroup<G::Elem>) -> Result<u64> {
    let bound = h.order();
    h.elements()
        .iter()
        .try_fold(1u64, |acc, g| Ok(acc.lcm(&element_order(group, g, bound)?)))
}
