//! Algebra on generalized disjunctive paraconsistent relations: the
//! normalization and redundancy-removal operators, the information-content
//! mapping onto disjunctive paraconsistent relations, and the six operators
//! (union, intersection, complement, selection, projection, natural join).
//!
//! `g_reduce` runs the single-pass reduction to a fixpoint with `g_norm`
//! interleaved. Cascades are real: removing a redundant tuple can mint a new
//! singleton which exposes further redundancy, and a cascade can surface an
//! inconsistency that only the normalization rules resolve.

use std::collections::BTreeSet;

use crate::dp::{
    choices, dp_norm, dp_reduce, join_tuple_sets, minimal_sets, project_negative_tuples,
    transversal_component, ChoiceFamily,
};
use crate::error::{guard_cap, Error, Result};
use crate::formula::Formula;
use crate::model::{
    enumerate_tuple_space, extend_tuple_set, project_tuple, DisjParaRelation,
    GenDisjParaRelation, SchemeRef, Tuple, TupleSet,
};

fn singleton_union(side: &BTreeSet<TupleSet>) -> BTreeSet<Tuple> {
    side.iter()
        .filter(|s| s.len() == 1)
        .flat_map(|s| s.iter().cloned())
        .collect()
}

/// Removes both flavors of containment inconsistency, computed against the
/// input and applied at once: a positive tuple set covered by negative
/// singletons goes, along with those singletons, and symmetrically for a
/// negative tuple set covered by positive singletons.
pub fn g_norm(r: &GenDisjParaRelation) -> GenDisjParaRelation {
    let neg_singletons = singleton_union(&r.negative);
    let pos_singletons = singleton_union(&r.positive);
    let bad_pos: BTreeSet<&TupleSet> = r
        .positive
        .iter()
        .filter(|w| w.iter().all(|t| neg_singletons.contains(t)))
        .collect();
    let bad_neg: BTreeSet<&TupleSet> = r
        .negative
        .iter()
        .filter(|u| u.iter().all(|t| pos_singletons.contains(t)))
        .collect();
    let bad_pos_tuples: BTreeSet<Tuple> =
        bad_pos.iter().flat_map(|w| w.iter().cloned()).collect();
    let bad_neg_tuples: BTreeSet<Tuple> =
        bad_neg.iter().flat_map(|u| u.iter().cloned()).collect();
    let positive = r
        .positive
        .iter()
        .filter(|w| !bad_pos.contains(*w))
        .filter(|w| !(w.len() == 1 && w.iter().all(|t| bad_neg_tuples.contains(t))))
        .cloned()
        .collect();
    let negative = r
        .negative
        .iter()
        .filter(|u| !bad_neg.contains(*u))
        .filter(|u| !(u.len() == 1 && u.iter().all(|t| bad_pos_tuples.contains(t))))
        .cloned()
        .collect();
    GenDisjParaRelation { scheme: r.scheme.clone(), positive, negative }
}

/// True when the relation carries none of the containment inconsistencies.
pub fn g_is_normalized(r: &GenDisjParaRelation) -> bool {
    g_norm(r) == *r
}

/// One simultaneous reduction pass: subtract the opposite side's singleton
/// tuples from every set, keep subset-minimal sets. Input must be
/// normalized, which guarantees no set is wholly subtracted away.
fn reduce_pass(r: &GenDisjParaRelation) -> GenDisjParaRelation {
    let neg_singletons = singleton_union(&r.negative);
    let pos_singletons = singleton_union(&r.positive);
    let cut = |side: &BTreeSet<TupleSet>, subtract: &BTreeSet<Tuple>| -> BTreeSet<TupleSet> {
        let remainders: BTreeSet<BTreeSet<Tuple>> = side
            .iter()
            .map(|w| {
                w.iter()
                    .filter(|t| !subtract.contains(*t))
                    .cloned()
                    .collect()
            })
            .collect();
        minimal_sets(remainders)
            .into_iter()
            .map(|s| TupleSet::new(s).expect("normalized input leaves every set nonempty"))
            .collect()
    };
    GenDisjParaRelation {
        scheme: r.scheme.clone(),
        positive: cut(&r.positive, &neg_singletons),
        negative: cut(&r.negative, &pos_singletons),
    }
}

/// Runs reduction to a fixpoint with normalization interleaved. The result
/// exhibits no subsumption inside a component, no tuple shared between a set
/// and an opposite-side singleton, and no containment inconsistency.
pub fn g_reduce(r: &GenDisjParaRelation) -> GenDisjParaRelation {
    let mut cur = g_norm(r);
    loop {
        let next = g_norm(&reduce_pass(&cur));
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Drops members with a positive tuple set wholly inside the negative tuples.
pub fn g_normrep(u: &BTreeSet<DisjParaRelation>) -> BTreeSet<DisjParaRelation> {
    u.iter()
        .filter(|r| !r.positive.iter().any(|w| w.is_subset(&r.negative)))
        .cloned()
        .collect()
}

/// Keeps only componentwise-minimal members.
pub fn g_reducerep(u: &BTreeSet<DisjParaRelation>) -> BTreeSet<DisjParaRelation> {
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

/// Information content: resolve every negative disjunction each possible
/// way, pair each selection with the positive component, then drop
/// inconsistent and non-minimal members.
pub fn g_rep(r: &GenDisjParaRelation, cap: usize) -> Result<BTreeSet<DisjParaRelation>> {
    let selections = choices(&ChoiceFamily::new(r.negative.iter().cloned()), cap)?;
    let members: BTreeSet<DisjParaRelation> = selections
        .into_iter()
        .map(|sel| DisjParaRelation {
            scheme: r.scheme.clone(),
            positive: r.positive.clone(),
            negative: sel,
        })
        .collect();
    Ok(g_reducerep(&g_normrep(&members)))
}

fn check_same_scheme(r: &GenDisjParaRelation, s: &GenDisjParaRelation) -> Result<()> {
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

fn negative_choices(r: &GenDisjParaRelation, cap: usize) -> Result<BTreeSet<BTreeSet<Tuple>>> {
    choices(&ChoiceFamily::new(r.negative.iter().cloned()), cap)
}

fn positive_choices(r: &GenDisjParaRelation, cap: usize) -> Result<BTreeSet<BTreeSet<Tuple>>> {
    choices(&ChoiceFamily::new(r.positive.iter().cloned()), cap)
}

/// Union: positive disjunctions accumulate; the negative side is rebuilt
/// from transversals over intersections of negative choice selections, so a
/// negative disjunction survives only if both operands force one.
pub fn g_union(
    r: &GenDisjParaRelation,
    s: &GenDisjParaRelation,
    cap: usize,
) -> Result<GenDisjParaRelation> {
    check_same_scheme(r, s)?;
    let rr = g_reduce(r);
    let ss = g_reduce(s);
    let e = negative_choices(&rr, cap)?;
    let f = negative_choices(&ss, cap)?;
    let distinct = distinct_pairwise(&e, &f, cap, |a, b| {
        Ok(a.intersection(b).cloned().collect())
    })?;
    let negative = transversal_component(&distinct, cap)?;
    let t = GenDisjParaRelation {
        scheme: rr.scheme.clone(),
        positive: rr.positive.union(&ss.positive).cloned().collect(),
        negative,
    };
    Ok(g_reduce(&t))
}

/// Intersection: dual of union — transversals over intersections of
/// positive choice selections; negative disjunctions accumulate.
pub fn g_intersect(
    r: &GenDisjParaRelation,
    s: &GenDisjParaRelation,
    cap: usize,
) -> Result<GenDisjParaRelation> {
    check_same_scheme(r, s)?;
    let rr = g_reduce(r);
    let ss = g_reduce(s);
    let e = positive_choices(&rr, cap)?;
    let f = positive_choices(&ss, cap)?;
    let distinct = distinct_pairwise(&e, &f, cap, |a, b| {
        Ok(a.intersection(b).cloned().collect())
    })?;
    let positive = transversal_component(&distinct, cap)?;
    let t = GenDisjParaRelation {
        scheme: rr.scheme.clone(),
        positive,
        negative: rr.negative.union(&ss.negative).cloned().collect(),
    };
    Ok(g_reduce(&t))
}

/// Complement: swaps the components of the reduced relation. This is
/// explicit negation of stored facts, not closed-world negation.
pub fn g_complement(r: &GenDisjParaRelation) -> GenDisjParaRelation {
    let rr = g_reduce(r);
    GenDisjParaRelation {
        scheme: rr.scheme,
        positive: rr.negative,
        negative: rr.positive,
    }
}

/// Selection: a positive disjunction is selected as a whole or not at all;
/// every scheme tuple failing the formula becomes a definite negative
/// singleton.
pub fn g_select(
    r: &GenDisjParaRelation,
    f: &Formula,
    cap: usize,
) -> Result<GenDisjParaRelation> {
    f.check_scheme(&r.scheme)?;
    let rr = g_reduce(r);
    let positive: BTreeSet<TupleSet> = rr
        .positive
        .iter()
        .filter(|w| w.iter().all(|t| f.eval(t)))
        .cloned()
        .collect();
    let mut negative = rr.negative.clone();
    for t in enumerate_tuple_space(&rr.scheme, cap)? {
        if !f.eval(&t) {
            negative.insert(TupleSet::singleton(t));
        }
    }
    let t = GenDisjParaRelation { scheme: rr.scheme.clone(), positive, negative };
    Ok(g_reduce(&t))
}

/// Projection onto Δ ⊆ Σ: positive sets project memberwise; the negative
/// side is rebuilt from transversals over the per-selection sets of Δ-tuples
/// whose extensions are all negated in that selection.
pub fn g_project(
    r: &GenDisjParaRelation,
    target: &SchemeRef,
    cap: usize,
) -> Result<GenDisjParaRelation> {
    if !target.sub_scheme_of(&r.scheme) {
        return Err(Error::SchemeMismatch(format!(
            "'{}' is not a sub-scheme of '{}'",
            target.name(),
            r.scheme.name()
        )));
    }
    let rr = g_reduce(r);
    let mut positive: BTreeSet<TupleSet> = BTreeSet::new();
    for w in &rr.positive {
        let projected: Result<BTreeSet<Tuple>> =
            w.iter().map(|t| project_tuple(t, target)).collect();
        positive.insert(TupleSet::new(projected?).expect("projection preserves nonemptiness"));
    }
    let selections = negative_choices(&rr, cap)?;
    guard_cap(selections.len() as u128, cap)?;
    let mut covered: BTreeSet<BTreeSet<Tuple>> = BTreeSet::new();
    for selection in &selections {
        covered.insert(project_negative_tuples(selection, &rr.scheme, target, cap)?);
    }
    let negative = transversal_component(&covered, cap)?;
    let t = GenDisjParaRelation { scheme: target.clone(), positive, negative };
    Ok(g_reduce(&t))
}

/// Natural join: transversals over pairwise joins of positive choice
/// selections, and over pairwise unions of extended negative choice
/// selections.
pub fn g_join(
    r: &GenDisjParaRelation,
    s: &GenDisjParaRelation,
    cap: usize,
) -> Result<GenDisjParaRelation> {
    let joined = r.scheme.join(
        &s.scheme,
        format!("{}_{}", r.scheme.name(), s.scheme.name()),
    )?;
    let rr = g_reduce(r);
    let ss = g_reduce(s);

    let e = positive_choices(&rr, cap)?;
    let f = positive_choices(&ss, cap)?;
    let distinct = distinct_pairwise(&e, &f, cap, |a, b| join_tuple_sets(a, b, &joined, cap))?;
    let positive = transversal_component(&distinct, cap)?;

    let g = negative_choices(&rr, cap)?;
    let h = negative_choices(&ss, cap)?;
    let distinct_neg = distinct_pairwise(&g, &h, cap, |a, b| {
        let mut ext = extend_tuple_set(a.iter(), &rr.scheme, &joined, cap)?;
        ext.extend(extend_tuple_set(b.iter(), &ss.scheme, &joined, cap)?);
        Ok(ext)
    })?;
    let negative = transversal_component(&distinct_neg, cap)?;

    let t = GenDisjParaRelation { scheme: joined, positive, negative };
    Ok(g_reduce(&t))
}

/// S(Θ) for a unary operator: the set of Θ-images of all members.
pub fn lift_unary<F>(
    op: F,
    args: &BTreeSet<DisjParaRelation>,
    cap: usize,
) -> Result<BTreeSet<DisjParaRelation>>
where
    F: Fn(&DisjParaRelation) -> Result<DisjParaRelation>,
{
    guard_cap(args.len() as u128, cap)?;
    args.iter().map(op).collect()
}

/// S(Θ) for a binary operator: Θ-images over the cartesian product of the
/// two argument sets.
pub fn lift_binary<F>(
    op: F,
    left: &BTreeSet<DisjParaRelation>,
    right: &BTreeSet<DisjParaRelation>,
    cap: usize,
) -> Result<BTreeSet<DisjParaRelation>>
where
    F: Fn(&DisjParaRelation, &DisjParaRelation) -> Result<DisjParaRelation>,
{
    guard_cap(left.len() as u128 * right.len() as u128, cap)?;
    let mut out = BTreeSet::new();
    for l in left {
        for r in right {
            out.insert(op(l, r)?);
        }
    }
    Ok(out)
}

/// Canonical closure used when comparing two sets of disjunctive
/// paraconsistent relations for information-content equality: normalize and
/// reduce every member, drop inconsistent members, keep only
/// componentwise-minimal members.
pub fn canonical_closure(
    members: &BTreeSet<DisjParaRelation>,
) -> Result<BTreeSet<DisjParaRelation>> {
    let mut cleaned: BTreeSet<DisjParaRelation> = BTreeSet::new();
    for m in members {
        cleaned.insert(dp_reduce(&dp_norm(m))?);
    }
    Ok(g_reducerep(&g_normrep(&cleaned)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse_formula;
    use crate::model::{Scheme, Symbol};

    fn letters() -> SchemeRef {
        Scheme::new("item", [("VAL", vec!["a", "b", "c", "d", "e", "f", "g", "i"])]).unwrap()
    }

    fn tup(s: &SchemeRef, v: &str) -> Tuple {
        Tuple::from_values(s, [v]).unwrap()
    }

    fn tset(s: &SchemeRef, vs: &[&str]) -> TupleSet {
        TupleSet::new(vs.iter().map(|v| tup(s, v))).unwrap()
    }

    fn gdp(s: &SchemeRef, pos: &[&[&str]], neg: &[&[&str]]) -> GenDisjParaRelation {
        GenDisjParaRelation::new(
            s.clone(),
            pos.iter().map(|vs| tset(s, vs)),
            neg.iter().map(|vs| tset(s, vs)),
        )
        .unwrap()
    }

    fn dpr(s: &SchemeRef, pos: &[&[&str]], neg: &[&str]) -> DisjParaRelation {
        DisjParaRelation::new(
            s.clone(),
            pos.iter().map(|vs| tset(s, vs)),
            neg.iter().map(|v| tup(s, v)),
        )
        .unwrap()
    }

    fn supply_scheme() -> SchemeRef {
        Scheme::new(
            "supply",
            [
                ("SNUM", vec!["s1", "s2", "s3"]),
                ("PNUM", vec!["p1", "p2", "p3", "p4"]),
            ],
        )
        .unwrap()
    }

    fn supply_relation() -> GenDisjParaRelation {
        let s = supply_scheme();
        let t = |a: &str, b: &str| Tuple::from_values(&s, [a, b]).unwrap();
        GenDisjParaRelation::new(
            s.clone(),
            [
                TupleSet::singleton(t("s1", "p1")),
                TupleSet::new([t("s2", "p1"), t("s2", "p2")]).unwrap(),
                TupleSet::new([t("s3", "p3"), t("s3", "p4")]).unwrap(),
            ],
            [
                TupleSet::singleton(t("s1", "p2")),
                TupleSet::singleton(t("s1", "p3")),
                TupleSet::new([t("s2", "p3"), t("s2", "p4")]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn norm_resolves_negative_set_covered_by_positive_singletons() {
        let s = letters();
        let r = gdp(&s, &[&["b"], &["c"], &["a", "d"]], &[&["b", "c"]]);
        assert_eq!(g_norm(&r), gdp(&s, &[&["a", "d"]], &[]));
    }

    #[test]
    fn norm_resolves_positive_set_covered_by_negative_singletons() {
        let s = letters();
        let r = gdp(&s, &[&["b", "c"]], &[&["b"], &["c"], &["e"]]);
        assert_eq!(g_norm(&r), gdp(&s, &[], &[&["e"]]));
    }

    #[test]
    fn norm_leaves_consistent_supply_unchanged() {
        let r = supply_relation();
        assert_eq!(g_norm(&r), r);
        assert!(g_is_normalized(&r));
    }

    #[test]
    fn reduce_reproduces_published_cascade() {
        let s = letters();
        let r = gdp(
            &s,
            &[&["a"], &["b", "c"], &["c", "d"], &["a", "e"], &["f", "g"]],
            &[&["b"], &["c", "e"], &["i"], &["d", "e", "f"]],
        );
        let got = g_reduce(&r);
        assert_eq!(
            got,
            gdp(&s, &[&["a"], &["c"], &["f", "g"]], &[&["b"], &["e"], &["i"]])
        );
        assert_eq!(g_reduce(&got), got);
    }

    #[test]
    fn reduce_leaves_antichains_alone() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"], &["c", "d"]], &[&["e", "f"]]);
        assert_eq!(g_reduce(&r), r);
    }

    #[test]
    fn reduce_resolves_late_emerging_inconsistency() {
        // Reducing {b,c} against the negative singleton {b} yields the
        // positive singleton {c}; in the same pass {c,d} loses d to the
        // positive singleton {d}, leaving negative {c} against positive {c},
        // which the interleaved normalization removes.
        let s = letters();
        let r = gdp(&s, &[&["b", "c"], &["d"]], &[&["b"], &["c", "d"]]);
        let got = g_reduce(&r);
        assert_eq!(got, gdp(&s, &[&["d"]], &[&["b"]]));
        assert_eq!(got, fixpoint_oracle(&r));
    }

    /// Independent reimplementation of the reduction recurrence for
    /// cross-checking: recompute singleton unions from scratch each round,
    /// subtract, drop proper supersets, then strip containment
    /// inconsistencies, until nothing changes.
    fn fixpoint_oracle(r: &GenDisjParaRelation) -> GenDisjParaRelation {
        let mut pos: Vec<BTreeSet<Tuple>> =
            r.positive.iter().map(|w| w.tuples().clone()).collect();
        let mut neg: Vec<BTreeSet<Tuple>> =
            r.negative.iter().map(|u| u.tuples().clone()).collect();
        loop {
            let before = (pos.clone(), neg.clone());
            let neg_single: BTreeSet<Tuple> = neg
                .iter()
                .filter(|u| u.len() == 1)
                .flatten()
                .cloned()
                .collect();
            let pos_single: BTreeSet<Tuple> = pos
                .iter()
                .filter(|w| w.len() == 1)
                .flatten()
                .cloned()
                .collect();
            // containment inconsistencies, both sides against the unions
            let dead_pos: Vec<BTreeSet<Tuple>> = pos
                .iter()
                .filter(|w| w.iter().all(|t| neg_single.contains(t)))
                .cloned()
                .collect();
            let dead_neg: Vec<BTreeSet<Tuple>> = neg
                .iter()
                .filter(|u| u.iter().all(|t| pos_single.contains(t)))
                .cloned()
                .collect();
            let dead_pos_tuples: BTreeSet<Tuple> = dead_pos.iter().flatten().cloned().collect();
            let dead_neg_tuples: BTreeSet<Tuple> = dead_neg.iter().flatten().cloned().collect();
            pos.retain(|w| {
                !dead_pos.contains(w) && !(w.len() == 1 && w.iter().all(|t| dead_neg_tuples.contains(t)))
            });
            neg.retain(|u| {
                !dead_neg.contains(u) && !(u.len() == 1 && u.iter().all(|t| dead_pos_tuples.contains(t)))
            });
            // subtract opposite singletons, computed before this round's cuts
            let neg_single: BTreeSet<Tuple> = neg
                .iter()
                .filter(|u| u.len() == 1)
                .flatten()
                .cloned()
                .collect();
            let pos_single: BTreeSet<Tuple> = pos
                .iter()
                .filter(|w| w.len() == 1)
                .flatten()
                .cloned()
                .collect();
            pos = pos
                .iter()
                .map(|w| w.difference(&neg_single).cloned().collect())
                .collect();
            neg = neg
                .iter()
                .map(|u| u.difference(&pos_single).cloned().collect())
                .collect();
            // drop duplicates and proper supersets
            let strip = |side: &Vec<BTreeSet<Tuple>>| -> Vec<BTreeSet<Tuple>> {
                let dedup: BTreeSet<BTreeSet<Tuple>> = side.iter().cloned().collect();
                dedup
                    .iter()
                    .filter(|w| !dedup.iter().any(|o| o.len() < w.len() && o.is_subset(w)))
                    .cloned()
                    .collect()
            };
            pos = strip(&pos);
            neg = strip(&neg);
            if (pos.clone(), neg.clone()) == before {
                break;
            }
        }
        GenDisjParaRelation::new(
            r.scheme.clone(),
            pos.into_iter().map(|w| TupleSet::new(w).unwrap()),
            neg.into_iter().map(|u| TupleSet::new(u).unwrap()),
        )
        .unwrap()
    }

    #[test]
    fn reduce_matches_independent_fixpoint_oracle() {
        let s = letters();
        for r in [
            gdp(
                &s,
                &[&["a"], &["b", "c"], &["c", "d"], &["a", "e"], &["f", "g"]],
                &[&["b"], &["c", "e"], &["i"], &["d", "e", "f"]],
            ),
            gdp(&s, &[&["a", "b"]], &[&["b"], &["c"]]),
            gdp(&s, &[&["a"], &["a", "b"]], &[]),
            gdp(&s, &[], &[&["a", "b"], &["b"]]),
            gdp(&s, &[], &[]),
        ] {
            assert_eq!(g_reduce(&r), fixpoint_oracle(&r), "mismatch on {r:?}");
        }
    }

    fn example3_relation() -> GenDisjParaRelation {
        let s = letters();
        gdp(
            &s,
            &[&["b", "e"], &["c", "d"], &["e", "g"]],
            &[&["b"], &["c", "e"], &["c", "d", "g"]],
        )
    }

    #[test]
    fn normrep_filters_expanded_members() {
        let s = letters();
        let r = example3_relation();
        let selections = choices(&ChoiceFamily::new(r.negative.iter().cloned()), 1000).unwrap();
        assert_eq!(selections.len(), 6);
        let members: BTreeSet<DisjParaRelation> = selections
            .into_iter()
            .map(|sel| DisjParaRelation {
                scheme: s.clone(),
                positive: r.positive.clone(),
                negative: sel,
            })
            .collect();
        let kept = g_normrep(&members);
        assert_eq!(kept.len(), 2);
        let negatives: BTreeSet<BTreeSet<Tuple>> =
            kept.iter().map(|m| m.negative.clone()).collect();
        let want: BTreeSet<BTreeSet<Tuple>> = [
            ["b", "c"].iter().map(|v| tup(&s, v)).collect(),
            ["b", "c", "g"].iter().map(|v| tup(&s, v)).collect(),
        ]
        .into();
        assert_eq!(negatives, want);

        assert!(g_normrep(&BTreeSet::new()).is_empty());
        let bad: BTreeSet<DisjParaRelation> = [dpr(&s, &[&["b", "e"]], &["b", "e", "d"])].into();
        assert!(g_normrep(&bad).is_empty());
    }

    #[test]
    fn reducerep_keeps_minimal_members() {
        let s = letters();
        let p: &[&[&str]] = &[&["b", "e"], &["c", "d"], &["e", "g"]];
        let u: BTreeSet<DisjParaRelation> =
            [dpr(&s, p, &["b", "c"]), dpr(&s, p, &["b", "c", "g"])].into();
        assert_eq!(
            g_reducerep(&u),
            BTreeSet::from([dpr(&s, p, &["b", "c"])])
        );

        let antichain: BTreeSet<DisjParaRelation> =
            [dpr(&s, &[&["a"]], &["b"]), dpr(&s, &[&["b"]], &["a"])].into();
        assert_eq!(g_reducerep(&antichain), antichain);
    }

    #[test]
    fn rep_of_example3_is_single_member() {
        let s = letters();
        let r = example3_relation();
        let got = g_rep(&r, 1000).unwrap();
        let want: BTreeSet<DisjParaRelation> = [dpr(
            &s,
            &[&["b", "e"], &["c", "d"], &["e", "g"]],
            &["b", "c"],
        )]
        .into();
        assert_eq!(got, want);
    }

    #[test]
    fn rep_trivial_shapes() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"]], &[]);
        assert_eq!(
            g_rep(&r, 1000).unwrap(),
            BTreeSet::from([dpr(&s, &[&["a", "b"]], &[])])
        );

        let r = gdp(&s, &[], &[&["a", "b"]]);
        assert_eq!(
            g_rep(&r, 1000).unwrap(),
            BTreeSet::from([dpr(&s, &[], &["a"]), dpr(&s, &[], &["b"])])
        );
    }

    #[test]
    fn union_intersects_negative_information() {
        let s = letters();
        let r = gdp(&s, &[&["a"]], &[&["b"], &["c"]]);
        let q = gdp(&s, &[&["b"]], &[&["c"], &["d"]]);
        let got = g_union(&r, &q, 10_000).unwrap();
        assert_eq!(got, gdp(&s, &[&["a"], &["b"]], &[&["c"]]));
    }

    #[test]
    fn union_with_empty_relation_blanks_negatives() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"], &["a"]], &[&["c", "d"]]);
        let empty = GenDisjParaRelation::empty(s.clone());
        let got = g_union(&r, &empty, 10_000).unwrap();
        assert_eq!(got, gdp(&s, &[&["a"]], &[]));
    }

    #[test]
    fn union_with_self_agrees_with_lifted_rep_image() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"]], &[&["c", "d"], &["e"]]);
        let lhs = canonical_closure(&g_rep(&g_union(&r, &r, 10_000).unwrap(), 10_000).unwrap())
            .unwrap();
        let rep = g_rep(&r, 10_000).unwrap();
        let image = lift_binary(
            |a, b| crate::dp::dp_union(a, b, 10_000),
            &rep,
            &rep,
            10_000,
        )
        .unwrap();
        let rhs = canonical_closure(&image).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn intersect_blanks_on_conflicting_disjunctions() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"]], &[]);
        let q = gdp(&s, &[&["b", "c"]], &[]);
        let got = g_intersect(&r, &q, 10_000).unwrap();
        assert_eq!(got, gdp(&s, &[], &[]));
    }

    #[test]
    fn intersect_accumulates_negatives() {
        let s = letters();
        let r = gdp(&s, &[&["b"]], &[&["e"]]);
        let q = gdp(&s, &[&["b"]], &[&["f"]]);
        let got = g_intersect(&r, &q, 10_000).unwrap();
        assert_eq!(got, gdp(&s, &[&["b"]], &[&["e"], &["f"]]));

        let definite = gdp(&s, &[&["b"]], &[&["c"]]);
        assert_eq!(g_intersect(&definite, &definite, 10_000).unwrap(), definite);
    }

    #[test]
    fn complement_swaps_components() {
        let s = letters();
        let r = gdp(&s, &[&["a"]], &[&["b"]]);
        assert_eq!(g_complement(&r), gdp(&s, &[&["b"]], &[&["a"]]));
        assert_eq!(g_complement(&g_complement(&r)), g_reduce(&r));

        let example2_reduced = gdp(&s, &[&["a"], &["c"], &["f", "g"]], &[&["b"], &["e"], &["i"]]);
        assert_eq!(
            g_complement(&example2_reduced),
            gdp(&s, &[&["b"], &["e"], &["i"]], &[&["a"], &["c"], &["f", "g"]])
        );
    }

    #[test]
    fn select_on_supply_keeps_matching_disjunctions_whole() {
        let s = supply_scheme();
        let supply = supply_relation();
        let f = parse_formula("PNUM=p1", &s).unwrap();
        let got = g_select(&supply, &f, 10_000).unwrap();

        let t = |a: &str, b: &str| Tuple::from_values(&s, [a, b]).unwrap();
        assert_eq!(
            got.positive,
            BTreeSet::from([TupleSet::singleton(t("s1", "p1"))])
        );
        // every tuple with PNUM != p1 is a negative singleton; the stored
        // negative sets are subsumed by those singletons
        let expected_negative: BTreeSet<TupleSet> = enumerate_tuple_space(&s, 10_000)
            .unwrap()
            .into_iter()
            .filter(|t| t.get("PNUM").unwrap().as_str() != "p1")
            .map(TupleSet::singleton)
            .collect();
        assert_eq!(got.negative, expected_negative);
        assert_eq!(expected_negative.len(), 9);
    }

    #[test]
    fn select_true_and_false_degenerate() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"], &["a"]], &[&["c", "d"]]);
        let yes = parse_formula("true", &s).unwrap();
        assert_eq!(g_select(&r, &yes, 10_000).unwrap(), g_reduce(&r));

        let no = parse_formula("false", &s).unwrap();
        let got = g_select(&r, &no, 10_000).unwrap();
        assert!(got.positive.is_empty());
        let all_singletons: BTreeSet<TupleSet> = enumerate_tuple_space(&s, 10_000)
            .unwrap()
            .into_iter()
            .map(TupleSet::singleton)
            .collect();
        assert_eq!(got.negative, all_singletons);
    }

    fn ab_scheme() -> SchemeRef {
        Scheme::new("ab", [("A", vec!["a1", "a2"]), ("B", vec!["b1", "b2"])]).unwrap()
    }

    #[test]
    fn project_covers_negative_extensions_per_selection() {
        let s = ab_scheme();
        let a_only = s.project(&BTreeSet::from([Symbol::from("A")]), "a_only").unwrap();
        let t = |a: &str, b: &str| Tuple::from_values(&s, [a, b]).unwrap();
        let r = GenDisjParaRelation::new(
            s.clone(),
            [TupleSet::singleton(t("a2", "b1"))],
            [
                TupleSet::singleton(t("a1", "b1")),
                TupleSet::singleton(t("a1", "b2")),
            ],
        )
        .unwrap();
        let got = g_project(&r, &a_only, 10_000).unwrap();
        let want = GenDisjParaRelation::new(
            a_only.clone(),
            [TupleSet::singleton(Tuple::from_values(&a_only, ["a2"]).unwrap())],
            [TupleSet::singleton(Tuple::from_values(&a_only, ["a1"]).unwrap())],
        )
        .unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn project_onto_same_scheme_preserves_reduced_relation() {
        let s = ab_scheme();
        let t = |a: &str, b: &str| Tuple::from_values(&s, [a, b]).unwrap();
        let r = GenDisjParaRelation::new(
            s.clone(),
            [TupleSet::new([t("a1", "b1"), t("a2", "b2")]).unwrap()],
            [TupleSet::singleton(t("a1", "b2"))],
        )
        .unwrap();
        let got = g_project(&r, &s, 10_000).unwrap();
        assert_eq!(got, g_reduce(&r));
    }

    #[test]
    fn project_without_full_cover_blanks_negatives() {
        let s = ab_scheme();
        let a_only = s.project(&BTreeSet::from([Symbol::from("A")]), "a_only").unwrap();
        let t = |a: &str, b: &str| Tuple::from_values(&s, [a, b]).unwrap();
        let r = GenDisjParaRelation::new(s.clone(), [], [TupleSet::singleton(t("a1", "b1"))])
            .unwrap();
        let got = g_project(&r, &a_only, 10_000).unwrap();
        assert!(got.negative.is_empty());
    }

    fn bc_scheme() -> SchemeRef {
        Scheme::new("bc", [("B", vec!["b1", "b2"]), ("C", vec!["c1"])]).unwrap()
    }

    #[test]
    fn join_definite_and_blanking_cases() {
        let ab = ab_scheme();
        let bc = bc_scheme();
        let tab = |a: &str, b: &str| Tuple::from_values(&ab, [a, b]).unwrap();
        let tbc = |b: &str, c: &str| Tuple::from_values(&bc, [b, c]).unwrap();

        let r = GenDisjParaRelation::new(ab.clone(), [TupleSet::singleton(tab("a1", "b1"))], [])
            .unwrap();
        let s = GenDisjParaRelation::new(bc.clone(), [TupleSet::singleton(tbc("b1", "c1"))], [])
            .unwrap();
        let got = g_join(&r, &s, 10_000).unwrap();
        let joined = ab.join(&bc, "ab_bc").unwrap();
        assert_eq!(
            got.positive,
            BTreeSet::from([TupleSet::singleton(
                Tuple::from_values(&joined, ["a1", "b1", "c1"]).unwrap()
            )])
        );
        assert!(got.negative.is_empty());

        let r2 = GenDisjParaRelation::new(
            ab.clone(),
            [TupleSet::new([tab("a1", "b1"), tab("a1", "b2")]).unwrap()],
            [],
        )
        .unwrap();
        let got = g_join(&r2, &s, 10_000).unwrap();
        assert!(got.positive.is_empty());
    }

    #[test]
    fn join_extends_negative_selections() {
        let ab = ab_scheme();
        let bc = bc_scheme();
        let tab = |a: &str, b: &str| Tuple::from_values(&ab, [a, b]).unwrap();
        let r = GenDisjParaRelation::new(ab.clone(), [], [TupleSet::singleton(tab("a1", "b1"))])
            .unwrap();
        let s = GenDisjParaRelation::empty(bc.clone());
        let got = g_join(&r, &s, 10_000).unwrap();
        let joined = ab.join(&bc, "ab_bc").unwrap();
        assert_eq!(
            got.negative,
            BTreeSet::from([TupleSet::singleton(
                Tuple::from_values(&joined, ["a1", "b1", "c1"]).unwrap()
            )])
        );
    }

    #[test]
    fn lift_applies_memberwise() {
        let s = letters();
        let p = dpr(&s, &[&["a"]], &["b"]);
        let q = dpr(&s, &[&["c"]], &["b"]);
        let left: BTreeSet<DisjParaRelation> = [p.clone()].into();
        let right: BTreeSet<DisjParaRelation> = [q.clone()].into();
        let got = lift_binary(|a, b| crate::dp::dp_union(a, b, 1000), &left, &right, 1000)
            .unwrap();
        assert_eq!(got, [crate::dp::dp_union(&p, &q, 1000).unwrap()].into());

        let many: BTreeSet<DisjParaRelation> =
            [p.clone(), q.clone(), dpr(&s, &[&["e"]], &["f"])].into();
        let image = lift_binary(|a, b| crate::dp::dp_union(a, b, 1000), &many, &many, 1000)
            .unwrap();
        assert!(image.len() <= many.len() * many.len());

        // images are sets: the two members whose positives fail the formula
        // map to the same relation and collapse
        let selected = lift_unary(
            |d| crate::dp::dp_select(d, &parse_formula("VAL=a", &s).unwrap(), 10_000),
            &many,
            10_000,
        )
        .unwrap();
        assert_eq!(selected.len(), 2);
        assert!(selected
            .iter()
            .any(|d| d.positive == BTreeSet::from([tset(&s, &["a"])])));
    }

    #[test]
    fn operators_preserve_normalization() {
        let s = letters();
        let r = gdp(&s, &[&["a", "b"]], &[&["c", "d"], &["e"]]);
        let q = gdp(&s, &[&["b", "c"]], &[&["a"], &["f", "g"]]);
        for out in [
            g_union(&r, &q, 10_000).unwrap(),
            g_intersect(&r, &q, 10_000).unwrap(),
            g_complement(&r),
            g_select(&r, &parse_formula("VAL=a | VAL=b", &s).unwrap(), 10_000).unwrap(),
        ] {
            assert!(g_is_normalized(&out), "not normalized: {out:?}");
        }
    }
}
