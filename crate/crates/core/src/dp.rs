//! Algebra on disjunctive paraconsistent relations: normalization,
//! reduction, information content, and the five operators (union,
//! intersection, selection, projection, natural join), plus the generic
//! choice/transversal machinery that the generalized layer reuses.
//!
//! Binary operators reduce their inputs first and return reduced outputs.
//! Inputs are expected normalized; every operator defensively normalizes
//! before reducing, which is a no-op on legal inputs.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{guard_cap, Error, Result};
use crate::formula::Formula;
use crate::model::{
    enumerate_tuple_space, extend_tuple, extend_tuple_set, project_tuple, DisjParaRelation,
    ParaRelation, Scheme, SchemeRef, Symbol, Tuple, TupleSet,
};

/// An ordered family of tuple sets to choose one tuple from. Order is
/// irrelevant to the result; members may repeat.
#[derive(Debug, Clone, Default)]
pub struct ChoiceFamily {
    members: Vec<TupleSet>,
}

impl ChoiceFamily {
    pub fn new(members: impl IntoIterator<Item = TupleSet>) -> ChoiceFamily {
        ChoiceFamily { members: members.into_iter().collect() }
    }

    pub fn members(&self) -> &[TupleSet] {
        &self.members
    }

    pub fn product_size(&self) -> u128 {
        self.members.iter().map(|m| m.len() as u128).product()
    }
}

/// Information content of a disjunctive paraconsistent relation: a set of
/// paraconsistent relations, canonical and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpRepResult {
    pub relations: BTreeSet<ParaRelation>,
}

fn pick_product(members: &[&BTreeSet<Tuple>], cap: usize) -> Result<BTreeSet<BTreeSet<Tuple>>> {
    let product: u128 = members.iter().map(|m| m.len() as u128).product();
    guard_cap(product, cap)?;
    let mut acc: BTreeSet<BTreeSet<Tuple>> = BTreeSet::from([BTreeSet::new()]);
    for member in members {
        let mut next = BTreeSet::new();
        for selection in &acc {
            for t in *member {
                let mut s = selection.clone();
                s.insert(t.clone());
                next.insert(s);
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// All sets formed by picking exactly one tuple from each family member.
/// Coinciding picks collapse, so selections can be smaller than the family.
/// The empty family yields one empty selection, which callers interpret per
/// their definition.
pub fn choices(family: &ChoiceFamily, cap: usize) -> Result<BTreeSet<BTreeSet<Tuple>>> {
    let refs: Vec<&BTreeSet<Tuple>> = family.members.iter().map(|m| m.tuples()).collect();
    pick_product(&refs, cap)
}

/// Transversals of a family of distinct sets: every set formed by drawing
/// one tuple from each member. An empty member (or an empty family) blanks
/// the output — no component fact can be asserted.
pub fn transversal_component(
    distinct: &BTreeSet<BTreeSet<Tuple>>,
    cap: usize,
) -> Result<BTreeSet<TupleSet>> {
    if distinct.is_empty() || distinct.iter().any(|s| s.is_empty()) {
        return Ok(BTreeSet::new());
    }
    let refs: Vec<&BTreeSet<Tuple>> = distinct.iter().collect();
    let picks = pick_product(&refs, cap)?;
    Ok(picks
        .into_iter()
        .map(|s| TupleSet::new(s).expect("picks from nonempty sets are nonempty"))
        .collect())
}

/// Keeps only the subset-minimal sets.
pub(crate) fn minimal_sets(sets: BTreeSet<BTreeSet<Tuple>>) -> BTreeSet<BTreeSet<Tuple>> {
    sets.iter()
        .filter(|w| !sets.iter().any(|other| other.len() < w.len() && other.is_subset(w)))
        .cloned()
        .collect()
}

/// Removes positive tuple sets wholly contained in the negative component,
/// together with the negative tuples that witnessed the containment.
pub fn dp_norm(r: &DisjParaRelation) -> DisjParaRelation {
    let bad_pos: Vec<&TupleSet> = r
        .positive
        .iter()
        .filter(|w| w.is_subset(&r.negative))
        .collect();
    let witnesses: BTreeSet<Tuple> = bad_pos.iter().flat_map(|w| w.iter().cloned()).collect();
    DisjParaRelation {
        scheme: r.scheme.clone(),
        positive: r
            .positive
            .iter()
            .filter(|w| !w.is_subset(&r.negative))
            .cloned()
            .collect(),
        negative: r
            .negative
            .iter()
            .filter(|t| !witnesses.contains(t))
            .cloned()
            .collect(),
    }
}

/// Subtracts the negative tuples from every positive set and keeps only the
/// subset-minimal results. Requires normalized input; an empty positive set
/// can only arise from inconsistent data.
pub fn dp_reduce(r: &DisjParaRelation) -> Result<DisjParaRelation> {
    let mut cut: BTreeSet<BTreeSet<Tuple>> = BTreeSet::new();
    for w in &r.positive {
        let remainder: BTreeSet<Tuple> = w
            .iter()
            .filter(|t| !r.negative.contains(*t))
            .cloned()
            .collect();
        if remainder.is_empty() {
            return Err(Error::InconsistentInput(
                "positive tuple set wholly negated; input is not normalized".into(),
            ));
        }
        cut.insert(remainder);
    }
    let positive = minimal_sets(cut)
        .into_iter()
        .map(|s| TupleSet::new(s).expect("nonempty by construction"))
        .collect();
    Ok(DisjParaRelation {
        scheme: r.scheme.clone(),
        positive,
        negative: r.negative.clone(),
    })
}

/// Drops members whose believed-true and believed-false parts overlap.
pub fn dp_normrep(u: &BTreeSet<ParaRelation>) -> BTreeSet<ParaRelation> {
    u.iter().filter(|r| !r.is_inconsistent()).cloned().collect()
}

/// Keeps only componentwise-minimal members.
pub fn dp_reducerep(u: &BTreeSet<ParaRelation>) -> BTreeSet<ParaRelation> {
    u.iter()
        .filter(|r| {
            !u.iter().any(|s| {
                *s != **r
                    && s.positive.is_subset(&r.positive)
                    && s.negative.is_subset(&r.negative)
            })
        })
        .cloned()
        .collect()
}

/// Information content: resolve every positive disjunction each possible
/// way, pair with the negative tuples, then drop inconsistent and
/// non-minimal members.
pub fn dp_rep(r: &DisjParaRelation, cap: usize) -> Result<DpRepResult> {
    let family = ChoiceFamily::new(r.positive.iter().cloned());
    let selections = choices(&family, cap)?;
    let members: BTreeSet<ParaRelation> = selections
        .into_iter()
        .map(|sel| ParaRelation {
            scheme: r.scheme.clone(),
            positive: sel,
            negative: r.negative.clone(),
        })
        .collect();
    Ok(DpRepResult {
        relations: dp_reducerep(&dp_normrep(&members)),
    })
}

fn normalize_reduce(r: &DisjParaRelation) -> Result<DisjParaRelation> {
    dp_reduce(&dp_norm(r))
}

fn check_same_scheme(r: &DisjParaRelation, s: &DisjParaRelation) -> Result<()> {
    if r.scheme.same_attributes(&s.scheme) {
        Ok(())
    } else {
        Err(Error::SchemeMismatch(format!(
            "operands on schemes '{}' and '{}' do not share attributes",
            r.scheme.name(),
            s.scheme.name()
        )))
    }
}

/// Union: positive disjunctions accumulate, negative tuples must be negated
/// on both sides.
pub fn dp_union(r: &DisjParaRelation, s: &DisjParaRelation, _cap: usize) -> Result<DisjParaRelation> {
    check_same_scheme(r, s)?;
    let rr = normalize_reduce(r)?;
    let ss = normalize_reduce(s)?;
    let t = DisjParaRelation {
        scheme: rr.scheme.clone(),
        positive: rr.positive.union(&ss.positive).cloned().collect(),
        negative: rr
            .negative
            .intersection(&ss.negative)
            .cloned()
            .collect(),
    };
    normalize_reduce(&t)
}

fn distinct_pairwise<F>(
    left: &BTreeSet<BTreeSet<Tuple>>,
    right: &BTreeSet<BTreeSet<Tuple>>,
    cap: usize,
    mut combine: F,
) -> Result<BTreeSet<BTreeSet<Tuple>>>
where
    F: FnMut(&BTreeSet<Tuple>, &BTreeSet<Tuple>) -> Result<BTreeSet<Tuple>>,
{
    guard_cap(left.len() as u128 * right.len() as u128, cap)?;
    let mut out = BTreeSet::new();
    for e in left {
        for f in right {
            out.insert(combine(e, f)?);
        }
    }
    Ok(out)
}

/// Intersection: transversals over the distinct pairwise intersections of
/// positive choice selections; negatives accumulate.
pub fn dp_intersect(
    r: &DisjParaRelation,
    s: &DisjParaRelation,
    cap: usize,
) -> Result<DisjParaRelation> {
    check_same_scheme(r, s)?;
    let rr = normalize_reduce(r)?;
    let ss = normalize_reduce(s)?;
    let e = choices(&ChoiceFamily::new(rr.positive.iter().cloned()), cap)?;
    let f = choices(&ChoiceFamily::new(ss.positive.iter().cloned()), cap)?;
    let distinct = distinct_pairwise(&e, &f, cap, |a, b| {
        Ok(a.intersection(b).cloned().collect())
    })?;
    let positive = transversal_component(&distinct, cap)?;
    let t = DisjParaRelation {
        scheme: rr.scheme.clone(),
        positive,
        negative: rr.negative.union(&ss.negative).cloned().collect(),
    };
    normalize_reduce(&t)
}

/// Selection: a disjunction survives only if every member satisfies the
/// formula; every scheme tuple failing the formula becomes definitely
/// negative.
pub fn dp_select(r: &DisjParaRelation, f: &Formula, cap: usize) -> Result<DisjParaRelation> {
    f.check_scheme(&r.scheme)?;
    let rr = normalize_reduce(r)?;
    let positive: BTreeSet<TupleSet> = rr
        .positive
        .iter()
        .filter(|w| w.iter().all(|t| f.eval(t)))
        .cloned()
        .collect();
    let space = enumerate_tuple_space(&rr.scheme, cap)?;
    let mut negative = rr.negative.clone();
    negative.extend(space.into_iter().filter(|t| !f.eval(t)));
    let t = DisjParaRelation { scheme: rr.scheme.clone(), positive, negative };
    normalize_reduce(&t)
}

/// Projection onto Δ ⊆ Σ: positive sets project memberwise; a Δ-tuple is
/// negative when every extension of it is negative.
pub fn dp_project(
    r: &DisjParaRelation,
    target: &SchemeRef,
    cap: usize,
) -> Result<DisjParaRelation> {
    if !target.sub_scheme_of(&r.scheme) {
        return Err(Error::SchemeMismatch(format!(
            "'{}' is not a sub-scheme of '{}'",
            target.name(),
            r.scheme.name()
        )));
    }
    let rr = normalize_reduce(r)?;
    let mut positive: BTreeSet<TupleSet> = BTreeSet::new();
    for w in &rr.positive {
        let projected: Result<BTreeSet<Tuple>> =
            w.iter().map(|t| project_tuple(t, target)).collect();
        positive.insert(TupleSet::new(projected?).expect("projection preserves nonemptiness"));
    }
    let negative = project_negative_tuples(&rr.negative, &rr.scheme, target, cap)?;
    let t = DisjParaRelation { scheme: target.clone(), positive, negative };
    normalize_reduce(&t)
}

/// Tuples on Δ all of whose Σ-extensions belong to `negatives`.
pub(crate) fn project_negative_tuples(
    negatives: &BTreeSet<Tuple>,
    source: &SchemeRef,
    target: &SchemeRef,
    cap: usize,
) -> Result<BTreeSet<Tuple>> {
    let mut out = BTreeSet::new();
    for t in enumerate_tuple_space(target, cap)? {
        let extensions = extend_tuple(&t, target, source, cap)?;
        if !extensions.is_empty() && extensions.iter().all(|e| negatives.contains(e)) {
            out.insert(t);
        }
    }
    Ok(out)
}

pub(crate) fn join_tuples(a: &Tuple, b: &Tuple, joined: &Scheme) -> Option<Tuple> {
    let mut pairs: BTreeMap<Symbol, Symbol> = a.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    for (k, v) in b.iter() {
        match pairs.get(k.as_str()) {
            Some(existing) if existing != v => return None,
            Some(_) => {}
            None => {
                pairs.insert(k.clone(), v.clone());
            }
        }
    }
    Some(Tuple::new(joined, pairs).expect("merged tuple conforms to joined scheme"))
}

pub(crate) fn join_tuple_sets(
    a: &BTreeSet<Tuple>,
    b: &BTreeSet<Tuple>,
    joined: &Scheme,
    cap: usize,
) -> Result<BTreeSet<Tuple>> {
    guard_cap(a.len() as u128 * b.len() as u128, cap)?;
    let mut out = BTreeSet::new();
    for ta in a {
        for tb in b {
            if let Some(t) = join_tuples(ta, tb, joined) {
                out.insert(t);
            }
        }
    }
    Ok(out)
}

/// Natural join: transversals over the distinct pairwise joins of positive
/// choice selections; negatives extend to the joined scheme and accumulate.
pub fn dp_join(r: &DisjParaRelation, s: &DisjParaRelation, cap: usize) -> Result<DisjParaRelation> {
    let joined = r.scheme.join(
        &s.scheme,
        format!("{}_{}", r.scheme.name(), s.scheme.name()),
    )?;
    let rr = normalize_reduce(r)?;
    let ss = normalize_reduce(s)?;
    let e = choices(&ChoiceFamily::new(rr.positive.iter().cloned()), cap)?;
    let f = choices(&ChoiceFamily::new(ss.positive.iter().cloned()), cap)?;
    let distinct = distinct_pairwise(&e, &f, cap, |a, b| join_tuple_sets(a, b, &joined, cap))?;
    let positive = transversal_component(&distinct, cap)?;
    let mut negative = extend_tuple_set(rr.negative.iter(), &rr.scheme, &joined, cap)?;
    negative.extend(extend_tuple_set(ss.negative.iter(), &ss.scheme, &joined, cap)?);
    let t = DisjParaRelation { scheme: joined, positive, negative };
    normalize_reduce(&t)
}
