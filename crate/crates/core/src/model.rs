//! Value types for schemes, tuples, tuple sets, and the three relation levels,
//! plus the tuple-space enumeration and extension/projection primitives that
//! every algebra operator builds on.
//!
//! All types are immutable values after construction and all operations are
//! pure functions, so values can be shared freely across threads. Every
//! set-valued component is kept in a B-tree, which makes the in-memory form
//! canonical: structural equality coincides with semantic set equality, and
//! iteration order is the canonical order used by renderers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{guard_cap, Error, Result};

/// Default combinatorial cap: maximum number of generated objects per
/// operator step. Overridable per call and, in the CLI, via
/// `GDPR_MAX_WORLDS` or `--cap`.
pub const DEFAULT_CAP: usize = 1_000_000;

/// An interned symbol: attribute names and domain values are opaque symbols
/// compared by equality only.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol(Arc::from(s))
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol(Arc::from(s.as_str()))
    }
}

impl std::borrow::Borrow<str> for Symbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

/// A named attribute with its declared finite value domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Attribute {
    pub name: Symbol,
    pub domain: BTreeSet<Symbol>,
}

/// A relation scheme: an ordered list of attributes, each with a nonempty
/// finite domain. Attribute order is part of the scheme's identity and fixes
/// the tuple literal syntax `(v1,v2,...)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Scheme {
    name: Symbol,
    attributes: Vec<Attribute>,
}

/// Schemes are shared, not copied: every tuple-producing operation takes one
/// of these.
pub type SchemeRef = Arc<Scheme>;

impl Scheme {
    pub fn new(
        name: impl Into<Symbol>,
        attributes: impl IntoIterator<Item = (impl Into<Symbol>, impl IntoIterator<Item = impl Into<Symbol>>)>,
    ) -> Result<SchemeRef> {
        let name = name.into();
        let mut attrs: Vec<Attribute> = Vec::new();
        for (attr_name, domain) in attributes {
            let attr_name = attr_name.into();
            if attrs.iter().any(|a| a.name == attr_name) {
                return Err(Error::Validation(format!(
                    "duplicate attribute '{}' in scheme '{}'",
                    attr_name, name
                )));
            }
            let domain: BTreeSet<Symbol> = domain.into_iter().map(Into::into).collect();
            if domain.is_empty() {
                return Err(Error::Validation(format!(
                    "attribute '{}' in scheme '{}' has an empty domain",
                    attr_name, name
                )));
            }
            attrs.push(Attribute { name: attr_name, domain });
        }
        Ok(Arc::new(Scheme { name, attributes: attrs }))
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, name: &str) -> Option<&Attribute> {
        self.attributes.iter().find(|a| a.name.as_str() == name)
    }

    pub fn has_attribute(&self, name: &str) -> bool {
        self.attribute(name).is_some()
    }

    pub fn domain(&self, name: &str) -> Option<&BTreeSet<Symbol>> {
        self.attribute(name).map(|a| &a.domain)
    }

    /// Number of tuples in τ(Σ): the product of the domain cardinalities.
    pub fn tuple_space_size(&self) -> u128 {
        self.attributes
            .iter()
            .map(|a| a.domain.len() as u128)
            .product()
    }

    /// True when the two schemes declare the same attribute set with the same
    /// domains, independent of declaration order and scheme name. This is the
    /// compatibility notion used by union and intersection.
    pub fn same_attributes(&self, other: &Scheme) -> bool {
        if self.attributes.len() != other.attributes.len() {
            return false;
        }
        self.attributes.iter().all(|a| {
            other
                .attribute(a.name.as_str())
                .is_some_and(|b| b.domain == a.domain)
        })
    }

    /// True when `self`'s attributes are a subset of `other`'s, with equal
    /// domains on the shared names.
    pub fn sub_scheme_of(&self, other: &Scheme) -> bool {
        self.attributes.iter().all(|a| {
            other
                .attribute(a.name.as_str())
                .is_some_and(|b| b.domain == a.domain)
        })
    }

    /// Restriction of this scheme to the named attributes, in this scheme's
    /// declared order.
    pub fn project(&self, keep: &BTreeSet<Symbol>, name: impl Into<Symbol>) -> Result<SchemeRef> {
        for attr in keep {
            if !self.has_attribute(attr.as_str()) {
                return Err(Error::Scope(format!(
                    "attribute '{}' is not in scheme '{}'",
                    attr, self.name
                )));
            }
        }
        let attributes = self
            .attributes
            .iter()
            .filter(|a| keep.contains(&a.name))
            .cloned()
            .collect();
        Ok(Arc::new(Scheme { name: name.into(), attributes }))
    }

    /// Σ ∪ Δ for natural join: `self`'s attributes followed by the attributes
    /// private to `other`. Shared attributes must carry identical domains.
    pub fn join(&self, other: &Scheme, name: impl Into<Symbol>) -> Result<SchemeRef> {
        let mut attributes = self.attributes.clone();
        for attr in &other.attributes {
            match self.attribute(attr.name.as_str()) {
                Some(existing) if existing.domain != attr.domain => {
                    return Err(Error::SchemeMismatch(format!(
                        "attribute '{}' has different domains in schemes '{}' and '{}'",
                        attr.name, self.name, other.name
                    )));
                }
                Some(_) => {}
                None => attributes.push(attr.clone()),
            }
        }
        Ok(Arc::new(Scheme { name: name.into(), attributes }))
    }
}

/// A tuple on a scheme: a total assignment of domain values to the scheme's
/// attributes. Construction validates totality and domain membership.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Tuple {
    assignment: BTreeMap<Symbol, Symbol>,
}

impl Tuple {
    pub fn new(
        scheme: &Scheme,
        pairs: impl IntoIterator<Item = (impl Into<Symbol>, impl Into<Symbol>)>,
    ) -> Result<Tuple> {
        let mut assignment: BTreeMap<Symbol, Symbol> = BTreeMap::new();
        for (attr, value) in pairs {
            let attr = attr.into();
            let value = value.into();
            match scheme.domain(attr.as_str()) {
                None => {
                    return Err(Error::Validation(format!(
                        "attribute '{}' is not in scheme '{}'",
                        attr,
                        scheme.name()
                    )));
                }
                Some(dom) if !dom.contains(value.as_str()) => {
                    return Err(Error::Validation(format!(
                        "value '{}' is not in the domain of attribute '{}' of scheme '{}'",
                        value,
                        attr,
                        scheme.name()
                    )));
                }
                Some(_) => {}
            }
            if assignment.insert(attr.clone(), value).is_some() {
                return Err(Error::Validation(format!(
                    "attribute '{}' assigned twice",
                    attr
                )));
            }
        }
        if assignment.len() != scheme.attributes().len() {
            return Err(Error::Validation(format!(
                "tuple assigns {} attributes but scheme '{}' has {}",
                assignment.len(),
                scheme.name(),
                scheme.attributes().len()
            )));
        }
        Ok(Tuple { assignment })
    }

    /// Builds a tuple from values listed in the scheme's attribute order.
    pub fn from_values(
        scheme: &Scheme,
        values: impl IntoIterator<Item = impl Into<Symbol>>,
    ) -> Result<Tuple> {
        let values: Vec<Symbol> = values.into_iter().map(Into::into).collect();
        if values.len() != scheme.attributes().len() {
            return Err(Error::Validation(format!(
                "tuple lists {} values but scheme '{}' has {} attributes",
                values.len(),
                scheme.name(),
                scheme.attributes().len()
            )));
        }
        Tuple::new(
            scheme,
            scheme
                .attributes()
                .iter()
                .map(|a| a.name.clone())
                .zip(values),
        )
    }

    pub fn get(&self, attr: &str) -> Option<&Symbol> {
        self.assignment.get(attr)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &Symbol)> {
        self.assignment.iter()
    }

    /// Values in the given scheme's attribute order.
    pub fn values_in_order<'a>(&'a self, scheme: &'a Scheme) -> impl Iterator<Item = &'a Symbol> {
        scheme
            .attributes()
            .iter()
            .map(move |a| &self.assignment[&a.name])
    }

    /// True when the assignment is total on `scheme` with in-domain values.
    pub fn conforms_to(&self, scheme: &Scheme) -> bool {
        self.assignment.len() == scheme.attributes().len()
            && self.assignment.iter().all(|(attr, value)| {
                scheme
                    .domain(attr.as_str())
                    .is_some_and(|d| d.contains(value.as_str()))
            })
    }
}

impl fmt::Display for Tuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // diagnostic form with attribute names; the storage renderer is the
        // authoritative scheme-ordered form
        write!(f, "(")?;
        for (i, (k, v)) in self.assignment.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

/// A nonempty set of tuples on one scheme, read as an exclusive disjunction.
/// An empty disjunction denotes falsity and is never stored.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TupleSet {
    tuples: BTreeSet<Tuple>,
}

impl TupleSet {
    pub fn new(tuples: impl IntoIterator<Item = Tuple>) -> Result<TupleSet> {
        let tuples: BTreeSet<Tuple> = tuples.into_iter().collect();
        if tuples.is_empty() {
            return Err(Error::Validation("empty tuple set".into()));
        }
        Ok(TupleSet { tuples })
    }

    pub fn singleton(tuple: Tuple) -> TupleSet {
        TupleSet {
            tuples: BTreeSet::from([tuple]),
        }
    }

    pub fn tuples(&self) -> &BTreeSet<Tuple> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: &Tuple) -> bool {
        self.tuples.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Tuple> {
        self.tuples.iter()
    }

    pub fn is_subset(&self, other: &BTreeSet<Tuple>) -> bool {
        self.tuples.iter().all(|t| other.contains(t))
    }
}

impl IntoIterator for TupleSet {
    type Item = Tuple;
    type IntoIter = std::collections::btree_set::IntoIter<Tuple>;
    fn into_iter(self) -> Self::IntoIter {
        self.tuples.into_iter()
    }
}

impl fmt::Display for TupleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tuples.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

fn check_on_scheme<'a>(
    scheme: &Scheme,
    tuples: impl IntoIterator<Item = &'a Tuple>,
    side: &str,
) -> Result<()> {
    for t in tuples {
        if !t.conforms_to(scheme) {
            return Err(Error::Validation(format!(
                "{side} tuple {:?} does not conform to scheme '{}'",
                t,
                scheme.name()
            )));
        }
    }
    Ok(())
}

/// A paraconsistent relation: believed-true and believed-false tuples, which
/// may overlap.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ParaRelation {
    pub scheme: SchemeRef,
    pub positive: BTreeSet<Tuple>,
    pub negative: BTreeSet<Tuple>,
}

impl ParaRelation {
    pub fn new(
        scheme: SchemeRef,
        positive: impl IntoIterator<Item = Tuple>,
        negative: impl IntoIterator<Item = Tuple>,
    ) -> Result<ParaRelation> {
        let positive: BTreeSet<Tuple> = positive.into_iter().collect();
        let negative: BTreeSet<Tuple> = negative.into_iter().collect();
        check_on_scheme(&scheme, &positive, "positive")?;
        check_on_scheme(&scheme, &negative, "negative")?;
        Ok(ParaRelation { scheme, positive, negative })
    }

    pub fn empty(scheme: SchemeRef) -> ParaRelation {
        ParaRelation {
            scheme,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        }
    }

    /// The stored form is already canonical; this is the explicit identity
    /// witnessing that.
    pub fn canonicalize(&self) -> ParaRelation {
        self.clone()
    }

    /// True when the believed-true and believed-false parts overlap.
    pub fn is_inconsistent(&self) -> bool {
        self.positive.iter().any(|t| self.negative.contains(t))
    }
}

/// A disjunctive paraconsistent relation: positive facts are exclusive
/// disjunctions (tuple sets), negative facts are definite tuples.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DisjParaRelation {
    pub scheme: SchemeRef,
    pub positive: BTreeSet<TupleSet>,
    pub negative: BTreeSet<Tuple>,
}

impl DisjParaRelation {
    pub fn new(
        scheme: SchemeRef,
        positive: impl IntoIterator<Item = TupleSet>,
        negative: impl IntoIterator<Item = Tuple>,
    ) -> Result<DisjParaRelation> {
        let positive: BTreeSet<TupleSet> = positive.into_iter().collect();
        let negative: BTreeSet<Tuple> = negative.into_iter().collect();
        for ts in &positive {
            check_on_scheme(&scheme, ts.iter(), "positive")?;
        }
        check_on_scheme(&scheme, &negative, "negative")?;
        Ok(DisjParaRelation { scheme, positive, negative })
    }

    pub fn empty(scheme: SchemeRef) -> DisjParaRelation {
        DisjParaRelation {
            scheme,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        }
    }

    pub fn canonicalize(&self) -> DisjParaRelation {
        self.clone()
    }
}

/// A generalized disjunctive paraconsistent relation: both components hold
/// exclusive disjunctions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GenDisjParaRelation {
    pub scheme: SchemeRef,
    pub positive: BTreeSet<TupleSet>,
    pub negative: BTreeSet<TupleSet>,
}

impl GenDisjParaRelation {
    pub fn new(
        scheme: SchemeRef,
        positive: impl IntoIterator<Item = TupleSet>,
        negative: impl IntoIterator<Item = TupleSet>,
    ) -> Result<GenDisjParaRelation> {
        let positive: BTreeSet<TupleSet> = positive.into_iter().collect();
        let negative: BTreeSet<TupleSet> = negative.into_iter().collect();
        for ts in positive.iter().chain(negative.iter()) {
            check_on_scheme(&scheme, ts.iter(), "component")?;
        }
        Ok(GenDisjParaRelation { scheme, positive, negative })
    }

    pub fn empty(scheme: SchemeRef) -> GenDisjParaRelation {
        GenDisjParaRelation {
            scheme,
            positive: BTreeSet::new(),
            negative: BTreeSet::new(),
        }
    }

    pub fn canonicalize(&self) -> GenDisjParaRelation {
        self.clone()
    }
}

/// A named collection of schemes and relations. Relations are stored
/// verbatim, inconsistencies included; normalization is explicit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Database {
    schemes: BTreeMap<Symbol, SchemeRef>,
    relations: BTreeMap<Symbol, GenDisjParaRelation>,
}

impl Database {
    pub fn new() -> Database {
        Database::default()
    }

    pub fn add_scheme(&mut self, scheme: SchemeRef) -> Result<()> {
        let name = scheme.name().clone();
        if self.schemes.contains_key(&name) {
            return Err(Error::Validation(format!("duplicate scheme '{}'", name)));
        }
        self.schemes.insert(name, scheme);
        Ok(())
    }

    pub fn add_relation(
        &mut self,
        name: impl Into<Symbol>,
        relation: GenDisjParaRelation,
    ) -> Result<()> {
        let name = name.into();
        if self.relations.contains_key(&name) {
            return Err(Error::Validation(format!("duplicate relation '{}'", name)));
        }
        let registered = self
            .schemes
            .get(relation.scheme.name())
            .ok_or_else(|| {
                Error::Validation(format!(
                    "relation '{}' references unregistered scheme '{}'",
                    name,
                    relation.scheme.name()
                ))
            })?;
        if **registered != *relation.scheme {
            return Err(Error::Validation(format!(
                "relation '{}' is bound to a scheme that differs from registered '{}'",
                name,
                relation.scheme.name()
            )));
        }
        self.relations.insert(name, relation);
        Ok(())
    }

    pub fn scheme(&self, name: &str) -> Option<&SchemeRef> {
        self.schemes.get(name)
    }

    pub fn relation(&self, name: &str) -> Option<&GenDisjParaRelation> {
        self.relations.get(name)
    }

    pub fn schemes(&self) -> impl Iterator<Item = (&Symbol, &SchemeRef)> {
        self.schemes.iter()
    }

    pub fn relations(&self) -> impl Iterator<Item = (&Symbol, &GenDisjParaRelation)> {
        self.relations.iter()
    }
}

/// Enumerates τ(Σ): every total assignment over the scheme's domains.
pub fn enumerate_tuple_space(scheme: &Scheme, cap: usize) -> Result<BTreeSet<Tuple>> {
    guard_cap(scheme.tuple_space_size(), cap)?;
    let mut out: BTreeSet<Tuple> = BTreeSet::new();
    let attrs = scheme.attributes();
    let mut stack: Vec<(usize, BTreeMap<Symbol, Symbol>)> = vec![(0, BTreeMap::new())];
    while let Some((idx, partial)) = stack.pop() {
        if idx == attrs.len() {
            out.insert(Tuple { assignment: partial });
            continue;
        }
        for value in &attrs[idx].domain {
            let mut next = partial.clone();
            next.insert(attrs[idx].name.clone(), value.clone());
            stack.push((idx + 1, next));
        }
    }
    Ok(out)
}

/// All extensions t^Δ of a tuple on Σ to a super-scheme Δ ⊇ Σ.
pub fn extend_tuple(t: &Tuple, source: &Scheme, target: &Scheme, cap: usize) -> Result<BTreeSet<Tuple>> {
    if !source.sub_scheme_of(target) {
        return Err(Error::SchemeMismatch(format!(
            "scheme '{}' is not a sub-scheme of '{}'",
            source.name(),
            target.name()
        )));
    }
    let free: Vec<&Attribute> = target
        .attributes()
        .iter()
        .filter(|a| !source.has_attribute(a.name.as_str()))
        .collect();
    let count: u128 = free.iter().map(|a| a.domain.len() as u128).product();
    guard_cap(count, cap)?;
    let mut out: BTreeSet<Tuple> = BTreeSet::new();
    let base: BTreeMap<Symbol, Symbol> = t.assignment.clone();
    let mut stack: Vec<(usize, BTreeMap<Symbol, Symbol>)> = vec![(0, base)];
    while let Some((idx, partial)) = stack.pop() {
        if idx == free.len() {
            out.insert(Tuple { assignment: partial });
            continue;
        }
        for value in &free[idx].domain {
            let mut next = partial.clone();
            next.insert(free[idx].name.clone(), value.clone());
            stack.push((idx + 1, next));
        }
    }
    Ok(out)
}

/// T^Δ: union of the member extensions of a set of tuples.
pub fn extend_tuple_set<'a>(
    tuples: impl IntoIterator<Item = &'a Tuple>,
    source: &Scheme,
    target: &Scheme,
    cap: usize,
) -> Result<BTreeSet<Tuple>> {
    let mut out = BTreeSet::new();
    for t in tuples {
        out.extend(extend_tuple(t, source, target, cap)?);
        guard_cap(out.len() as u128, cap)?;
    }
    Ok(out)
}

/// The usual projection of a tuple onto a sub-scheme Δ ⊆ Σ.
pub fn project_tuple(t: &Tuple, target: &Scheme) -> Result<Tuple> {
    let mut assignment = BTreeMap::new();
    for attr in target.attributes() {
        match t.get(attr.name.as_str()) {
            Some(v) => {
                assignment.insert(attr.name.clone(), v.clone());
            }
            None => {
                return Err(Error::SchemeMismatch(format!(
                    "tuple has no attribute '{}' to project onto",
                    attr.name
                )));
            }
        }
    }
    Ok(Tuple { assignment })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab_scheme() -> SchemeRef {
        Scheme::new("ab", [("A", vec!["a1", "a2"]), ("B", vec!["b1", "b2"])]).unwrap()
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

    #[test]
    fn enumerate_small_products() {
        let s = Scheme::new("s", [("A", vec!["a1", "a2"]), ("B", vec!["b1"])]).unwrap();
        let space = enumerate_tuple_space(&s, DEFAULT_CAP).unwrap();
        assert_eq!(space.len(), 2);
        assert!(space.contains(&Tuple::from_values(&s, ["a1", "b1"]).unwrap()));
        assert!(space.contains(&Tuple::from_values(&s, ["a2", "b1"]).unwrap()));

        let single = Scheme::new("one", [("A", vec!["a1"])]).unwrap();
        let space = enumerate_tuple_space(&single, DEFAULT_CAP).unwrap();
        assert_eq!(space.len(), 1);
    }

    #[test]
    fn enumerate_supply_space_counts() {
        // 3 supplier values x 4 part values
        let space = enumerate_tuple_space(&supply_scheme(), DEFAULT_CAP).unwrap();
        assert_eq!(space.len(), 12);
    }

    #[test]
    fn enumerate_respects_cap() {
        let err = enumerate_tuple_space(&supply_scheme(), 11).unwrap_err();
        assert!(matches!(err, Error::CombinatorialLimit { needed: 12, cap: 11 }));
    }

    #[test]
    fn extend_fills_free_attributes() {
        let small = Scheme::new("a_only", [("A", vec!["a1", "a2"])]).unwrap();
        let big = ab_scheme();
        let t = Tuple::from_values(&small, ["a1"]).unwrap();
        let ext = extend_tuple(&t, &small, &big, DEFAULT_CAP).unwrap();
        assert_eq!(ext.len(), 2);
        assert!(ext.contains(&Tuple::from_values(&big, ["a1", "b1"]).unwrap()));
        assert!(ext.contains(&Tuple::from_values(&big, ["a1", "b2"]).unwrap()));
    }

    #[test]
    fn extend_to_same_scheme_is_identity() {
        let s = ab_scheme();
        let t = Tuple::from_values(&s, ["a2", "b1"]).unwrap();
        let ext = extend_tuple(&t, &s, &s, DEFAULT_CAP).unwrap();
        assert_eq!(ext, BTreeSet::from([t]));
    }

    #[test]
    fn extend_set_unions_member_extensions() {
        let small = Scheme::new("a_only", [("A", vec!["a1", "a2"])]).unwrap();
        let big = Scheme::new("ab1", [("A", vec!["a1", "a2"]), ("B", vec!["b1"])]).unwrap();
        let t1 = Tuple::from_values(&small, ["a1"]).unwrap();
        let t2 = Tuple::from_values(&small, ["a2"]).unwrap();
        let ext = extend_tuple_set([&t1, &t2], &small, &big, DEFAULT_CAP).unwrap();
        let expected: BTreeSet<Tuple> = BTreeSet::from([
            Tuple::from_values(&big, ["a1", "b1"]).unwrap(),
            Tuple::from_values(&big, ["a2", "b1"]).unwrap(),
        ]);
        assert_eq!(ext, expected);
    }

    #[test]
    fn project_drops_attributes() {
        let s = supply_scheme();
        let snum_only = s.project(&BTreeSet::from([Symbol::from("SNUM")]), "snum").unwrap();
        let t = Tuple::from_values(&s, ["s1", "p1"]).unwrap();
        let p = project_tuple(&t, &snum_only).unwrap();
        assert_eq!(p, Tuple::from_values(&snum_only, ["s1"]).unwrap());
    }

    #[test]
    fn project_onto_full_scheme_is_identity() {
        let s = ab_scheme();
        let t = Tuple::from_values(&s, ["a1", "b2"]).unwrap();
        assert_eq!(project_tuple(&t, &s).unwrap(), t);

        let b_only = s.project(&BTreeSet::from([Symbol::from("B")]), "b_only").unwrap();
        let p = project_tuple(&t, &b_only).unwrap();
        assert_eq!(p, Tuple::from_values(&b_only, ["b2"]).unwrap());
    }

    #[test]
    fn constructors_reject_bad_values() {
        assert!(Scheme::new("s", [("A", Vec::<&str>::new())]).is_err());
        assert!(Scheme::new("s", [("A", vec!["x"]), ("A", vec!["y"])]).is_err());

        let s = ab_scheme();
        assert!(Tuple::from_values(&s, ["a1", "zz"]).is_err());
        assert!(Tuple::from_values(&s, ["a1"]).is_err());
        assert!(Tuple::new(&s, [("A", "a1"), ("C", "b1")]).is_err());
        assert!(TupleSet::new(Vec::new()).is_err());
    }

    #[test]
    fn database_rejects_duplicates_and_unknown_schemes() {
        let s = ab_scheme();
        let mut db = Database::new();
        db.add_scheme(s.clone()).unwrap();
        assert!(db.add_scheme(s.clone()).is_err());

        let rel = GenDisjParaRelation::empty(s.clone());
        db.add_relation("r", rel.clone()).unwrap();
        assert!(db.add_relation("r", rel).is_err());

        let unregistered = Scheme::new("ghost", [("A", vec!["a1"])]).unwrap();
        assert!(db
            .add_relation("q", GenDisjParaRelation::empty(unregistered))
            .is_err());
    }

    #[test]
    fn canonical_form_is_permutation_invariant() {
        let s = Scheme::new("item", [("VAL", vec!["a", "b", "c"])]).unwrap();
        let tup = |v: &str| Tuple::from_values(&s, [v]).unwrap();
        let set = |vs: &[&str]| TupleSet::new(vs.iter().map(|v| tup(v))).unwrap();

        let r1 = GenDisjParaRelation::new(
            s.clone(),
            [set(&["b"]), set(&["a"]), set(&["a", "c"])],
            [set(&["c"])],
        )
        .unwrap();
        let r2 = GenDisjParaRelation::new(
            s.clone(),
            [set(&["a", "c"]), set(&["a"]), set(&["b"])],
            [set(&["c"])],
        )
        .unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.canonicalize(), r1);
        assert_eq!(r1.canonicalize().canonicalize(), r1.canonicalize());

        let order: Vec<_> = r1.positive.iter().cloned().collect();
        assert_eq!(order[0], set(&["a"]));
        assert_eq!(order[1], set(&["a", "c"]));
        assert_eq!(order[2], set(&["b"]));
    }
}
