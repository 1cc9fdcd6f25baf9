//! Class taxonomy: a tree of classes rooted at `rdfs:Class`, numbered in
//! post-order so that every subtree occupies one contiguous ID range.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{self, Write};

use crate::ingest::{Term, Triple};

pub mod vocab {
    pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
    pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
    pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
    pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
    pub const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
}

/// Schema statements gathered from one pass over the data.
///
/// A predicate may carry several domain or range declarations; all of them
/// are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SchemaIndex {
    subclass_edges: BTreeSet<(Term, Term)>,
    domain_of: BTreeMap<Term, BTreeSet<Term>>,
    range_of: BTreeMap<Term, BTreeSet<Term>>,
    classes: BTreeSet<Term>,
    ignored_non_iri: u64,
}

impl SchemaIndex {
    pub fn new() -> Self {
        Self::default()
    }

    fn mention(&mut self, class: &Term) -> bool {
        if class.is_iri() {
            if !self.classes.contains(class) {
                self.classes.insert(class.clone());
            }
            true
        } else {
            self.ignored_non_iri += 1;
            false
        }
    }

    pub fn observe(&mut self, triple: &Triple) {
        let p = triple.predicate();
        let (s, o) = (triple.subject(), triple.object());
        match p.lexical() {
            vocab::RDF_TYPE if p.is_iri() => {
                self.mention(o);
            }
            vocab::RDFS_SUBCLASS_OF if p.is_iri() => {
                let sub = self.mention(s);
                let sup = self.mention(o);
                if sub && sup {
                    self.subclass_edges.insert((s.clone(), o.clone()));
                }
            }
            vocab::RDFS_DOMAIN if p.is_iri() && self.mention(o) => {
                self.domain_of.entry(s.clone()).or_default().insert(o.clone());
            }
            vocab::RDFS_RANGE if p.is_iri() && self.mention(o) => {
                self.range_of.entry(s.clone()).or_default().insert(o.clone());
            }
            _ => {}
        }
    }

    /// Union with another partial index.
    pub fn merge(&mut self, other: SchemaIndex) {
        self.subclass_edges.extend(other.subclass_edges);
        for (p, cs) in other.domain_of {
            self.domain_of.entry(p).or_default().extend(cs);
        }
        for (p, cs) in other.range_of {
            self.range_of.entry(p).or_default().extend(cs);
        }
        self.classes.extend(other.classes);
        self.ignored_non_iri += other.ignored_non_iri;
    }

    /// `(subclass, superclass)` pairs.
    pub fn subclass_edges(&self) -> &BTreeSet<(Term, Term)> {
        &self.subclass_edges
    }

    pub fn domains(&self, predicate: &Term) -> impl Iterator<Item = &Term> {
        self.domain_of.get(predicate).into_iter().flatten()
    }

    pub fn ranges(&self, predicate: &Term) -> impl Iterator<Item = &Term> {
        self.range_of.get(predicate).into_iter().flatten()
    }

    pub fn has_domain_or_range(&self, predicate: &Term) -> bool {
        self.domain_of.contains_key(predicate) || self.range_of.contains_key(predicate)
    }

    pub fn classes(&self) -> &BTreeSet<Term> {
        &self.classes
    }

    /// Literal or blank-node class positions that were skipped.
    pub fn ignored_non_iri(&self) -> u64 {
        self.ignored_non_iri
    }
}

pub fn collect_schema<'a>(triples: impl IntoIterator<Item = &'a Triple>) -> SchemaIndex {
    let mut schema = SchemaIndex::new();
    for t in triples {
        schema.observe(t);
    }
    schema
}

/// Spanning tree over the classes, before numbering.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTree {
    /// All vertices in lexical order; includes the root.
    vertices: Vec<Term>,
    root: usize,
    parent: Vec<Option<usize>>,
    /// Whether the edge to the parent is an original `subClassOf` edge.
    original: Vec<bool>,
}

impl ClassTree {
    pub fn root(&self) -> &Term {
        &self.vertices[self.root]
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn index_of(&self, class: &Term) -> Option<usize> {
        self.vertices.binary_search(class).ok()
    }

    pub fn parent_of(&self, class: &Term) -> Option<&Term> {
        let v = self.index_of(class)?;
        self.parent[v].map(|p| &self.vertices[p])
    }

    /// Number of tree edges that come from `subClassOf` statements.
    pub fn original_edge_count(&self) -> usize {
        self.original.iter().filter(|&&o| o).count()
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut children = vec![Vec::new(); self.vertices.len()];
        // Vertices are in lexical order, so children lists come out sorted.
        for (v, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(v);
            }
        }
        children
    }
}

/// Extracts a spanning tree rooted at `rdfs:Class`.
///
/// Every class implicitly has a fallback edge to the root. The traversal
/// first follows original `subClassOf` edges depth-first from the root,
/// children in lexical order, dropping edges to already visited classes
/// (this removes cycles and extra superclasses). Classes left unreached are
/// then attached to the root through their fallback edge, one group at a
/// time: starting from the lexically smallest unreached class, its chain of
/// lexically smallest superclasses is followed up to a class with no
/// superclass or to the first class seen twice on the chain, and that class
/// is attached, so the rest of its group can still hang off original edges.
pub fn build_taxonomy(schema: &SchemaIndex) -> ClassTree {
    let root_term = Term::iri(vocab::RDFS_CLASS);
    let mut set: BTreeSet<&Term> = schema.classes.iter().collect();
    set.insert(&root_term);
    let vertices: Vec<Term> = set.into_iter().cloned().collect();
    let index: HashMap<&Term, usize> = vertices.iter().enumerate().map(|(i, t)| (t, i)).collect();
    let root = index[&root_term];
    let n = vertices.len();

    let mut subs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut supers: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (sub, sup) in &schema.subclass_edges {
        let (c, p) = (index[sub], index[sup]);
        if c != p {
            subs[p].push(c);
            supers[c].push(p);
        }
    }
    for list in subs.iter_mut().chain(supers.iter_mut()) {
        list.sort_unstable();
    }

    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut original = vec![false; n];
    let mut visited = vec![false; n];

    let dfs = |start: usize, visited: &mut Vec<bool>, parent: &mut Vec<Option<usize>>, original: &mut Vec<bool>| {
        visited[start] = true;
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, next) = *top;
            if next == subs[v].len() {
                stack.pop();
                continue;
            }
            top.1 += 1;
            let c = subs[v][next];
            if !visited[c] {
                visited[c] = true;
                parent[c] = Some(v);
                original[c] = true;
                stack.push((c, 0));
            }
        }
    };

    dfs(root, &mut visited, &mut parent, &mut original);
    let mut on_chain = vec![false; n];
    for v in 0..n {
        if visited[v] {
            continue;
        }
        // Unvisited classes are closed under superclass: a visited
        // superclass would have reached them through the traversal.
        let mut chain = vec![v];
        on_chain[v] = true;
        let mut cur = v;
        let top = loop {
            match supers[cur].first() {
                None => break cur,
                Some(&s) if on_chain[s] => break s,
                Some(&s) => {
                    debug_assert!(!visited[s]);
                    on_chain[s] = true;
                    chain.push(s);
                    cur = s;
                }
            }
        };
        for c in chain {
            on_chain[c] = false;
        }
        parent[top] = Some(root);
        dfs(top, &mut visited, &mut parent, &mut original);
    }

    ClassTree {
        vertices,
        root,
        parent,
        original,
    }
}

/// Numbered taxonomy. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassTaxonomy {
    /// Class terms indexed by class ID.
    by_id: Vec<Term>,
    parent_id: Vec<Option<u64>>,
    ids: HashMap<Term, u64>,
}

/// Numbers the tree in post-order: children (in lexical order) before
/// their parent, so the root gets the largest ID.
pub fn assign_class_ids(tree: &ClassTree) -> ClassTaxonomy {
    let children = tree.children();
    let n = tree.vertices.len();
    let mut id_of_vertex = vec![0u64; n];
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = vec![(tree.root, 0)];
    while let Some(top) = stack.last_mut() {
        let (v, next) = *top;
        if next < children[v].len() {
            top.1 += 1;
            stack.push((children[v][next], 0));
        } else {
            id_of_vertex[v] = order.len() as u64;
            order.push(v);
            stack.pop();
        }
    }
    debug_assert_eq!(order.len(), n, "tree must span every vertex");

    let by_id: Vec<Term> = order.iter().map(|&v| tree.vertices[v].clone()).collect();
    let parent_id = order
        .iter()
        .map(|&v| tree.parent[v].map(|p| id_of_vertex[p]))
        .collect();
    let ids = by_id.iter().enumerate().map(|(i, t)| (t.clone(), i as u64)).collect();
    ClassTaxonomy {
        by_id,
        parent_id,
        ids,
    }
}

impl ClassTaxonomy {
    pub fn from_schema(schema: &SchemaIndex) -> Self {
        assign_class_ids(&build_taxonomy(schema))
    }

    /// Number of classes, root included.
    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn root(&self) -> &Term {
        self.by_id.last().expect("taxonomy always contains the root")
    }

    /// Sentinel greater than every class ID, used for terms without a class.
    pub fn max_sentinel(&self) -> u64 {
        self.by_id.len() as u64
    }

    /// The class ID, or the sentinel for terms that are not classes.
    pub fn class_id(&self, class: &Term) -> u64 {
        self.ids.get(class).copied().unwrap_or_else(|| self.max_sentinel())
    }

    pub fn class_of_id(&self, id: u64) -> Option<&Term> {
        self.by_id.get(usize::try_from(id).ok()?)
    }

    pub fn parent_id(&self, id: u64) -> Option<u64> {
        self.parent_id.get(usize::try_from(id).ok()?).copied().flatten()
    }

    /// Writes `classID<TAB>parentID<TAB>classIRI` lines in ID order; the
    /// root's parent is written as `-`.
    pub fn dump<W: Write + ?Sized>(&self, out: &mut W) -> io::Result<()> {
        for (id, (class, parent)) in self.by_id.iter().zip(&self.parent_id).enumerate() {
            match parent {
                Some(p) => writeln!(out, "{id}\t{p}\t{}", class.lexical())?,
                None => writeln!(out, "{id}\t-\t{}", class.lexical())?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iri(s: &str) -> Term {
        Term::iri(s)
    }

    fn triple(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(iri(s), iri(p), iri(o)).unwrap()
    }

    fn schema_of(edges: &[(&str, &str)], extra: &[&str]) -> SchemaIndex {
        let mut triples: Vec<Triple> = edges
            .iter()
            .map(|(a, b)| triple(a, vocab::RDFS_SUBCLASS_OF, b))
            .collect();
        triples.extend(extra.iter().map(|c| triple("x", vocab::RDF_TYPE, c)));
        collect_schema(&triples)
    }

    #[test]
    fn collects_subclass_edges() {
        let s = schema_of(&[("A", "B")], &[]);
        assert_eq!(
            s.subclass_edges().iter().cloned().collect::<Vec<_>>(),
            vec![(iri("A"), iri("B"))]
        );
        assert_eq!(s.classes().iter().cloned().collect::<Vec<_>>(), vec![iri("A"), iri("B")]);
    }

    #[test]
    fn collects_type_objects() {
        let s = schema_of(&[], &["C"]);
        assert!(s.subclass_edges().is_empty());
        assert_eq!(s.classes().iter().cloned().collect::<Vec<_>>(), vec![iri("C")]);
    }

    #[test]
    fn collects_domain_and_range() {
        let s = collect_schema(&[
            triple("p", vocab::RDFS_DOMAIN, "C"),
            triple("p", vocab::RDFS_RANGE, "D"),
        ]);
        assert_eq!(s.domains(&iri("p")).collect::<Vec<_>>(), vec![&iri("C")]);
        assert_eq!(s.ranges(&iri("p")).collect::<Vec<_>>(), vec![&iri("D")]);
        assert_eq!(s.classes().len(), 2);
    }

    #[test]
    fn non_iri_classes_are_counted_and_skipped() {
        let t = Triple::new(iri("x"), iri(vocab::RDF_TYPE), Term::literal("\"C\"")).unwrap();
        let u = Triple::new(iri("A"), iri(vocab::RDFS_SUBCLASS_OF), Term::blank("_:r")).unwrap();
        let s = collect_schema(&[t, u]);
        assert_eq!(s.ignored_non_iri(), 2);
        assert!(s.subclass_edges().is_empty());
        assert_eq!(s.classes().iter().cloned().collect::<Vec<_>>(), vec![iri("A")]);
    }

    #[test]
    fn superclass_chain_is_kept() {
        let tree = build_taxonomy(&schema_of(&[("A", "B")], &[]));
        assert_eq!(tree.parent_of(&iri("A")), Some(&iri("B")));
        assert_eq!(tree.parent_of(&iri("B")), Some(&iri(vocab::RDFS_CLASS)));
        assert_eq!(tree.original_edge_count(), 1);
    }

    #[test]
    fn two_cycle_keeps_edge_from_smaller_superclass() {
        let tree = build_taxonomy(&schema_of(&[("A", "B"), ("B", "A")], &[]));
        assert_eq!(tree.parent_of(&iri("A")), Some(&iri(vocab::RDFS_CLASS)));
        assert_eq!(tree.parent_of(&iri("B")), Some(&iri("A")));
    }

    #[test]
    fn unrelated_classes_hang_off_root() {
        let tax = ClassTaxonomy::from_schema(&schema_of(&[], &["C", "D"]));
        let root_id = tax.class_id(tax.root());
        assert_eq!(tax.parent_id(tax.class_id(&iri("C"))), Some(root_id));
        assert_eq!(tax.parent_id(tax.class_id(&iri("D"))), Some(root_id));
    }

    #[test]
    fn post_order_ids() {
        let tax = ClassTaxonomy::from_schema(&schema_of(&[("A1", "A")], &["B"]));
        let ids: Vec<(&str, u64)> = ["A1", "A", "B", vocab::RDFS_CLASS]
            .iter()
            .map(|c| (*c, tax.class_id(&iri(c))))
            .collect();
        assert_eq!(ids, vec![("A1", 0), ("A", 1), ("B", 2), (vocab::RDFS_CLASS, 3)]);
        assert_eq!(tax.max_sentinel(), 4);
    }

    #[test]
    fn single_and_empty() {
        let tax = ClassTaxonomy::from_schema(&schema_of(&[], &["C"]));
        assert_eq!(tax.class_id(&iri("C")), 0);
        assert_eq!(tax.class_id(tax.root()), 1);
        assert_eq!(tax.max_sentinel(), 2);
        let tax = ClassTaxonomy::from_schema(&SchemaIndex::new());
        assert_eq!(tax.len(), 1);
        assert_eq!(tax.class_id(&iri(vocab::RDFS_CLASS)), 0);
        assert_eq!(tax.max_sentinel(), 1);
        assert_eq!(tax.class_id(&iri("nope")), 1);
    }

    #[test]
    fn explicit_root_edges_and_self_loops() {
        let tax = ClassTaxonomy::from_schema(&schema_of(
            &[("A", vocab::RDFS_CLASS), ("A", "A"), (vocab::RDFS_CLASS, "Z")],
            &[],
        ));
        assert_eq!(tax.root(), &iri(vocab::RDFS_CLASS));
        assert_eq!(tax.len(), 3);
        let root_id = tax.class_id(tax.root());
        assert_eq!(root_id, 2);
        assert_eq!(tax.parent_id(tax.class_id(&iri("A"))), Some(root_id));
    }

    #[test]
    fn group_attaches_at_its_top() {
        // C -> Z, and Z <-> Y: C must stay under Z even though C sorts first.
        let tree = build_taxonomy(&schema_of(&[("C", "Z"), ("Z", "Y"), ("Y", "Z")], &[]));
        assert_eq!(tree.parent_of(&iri("C")), Some(&iri("Z")));
        assert_eq!(tree.original_edge_count(), 2);
    }

    #[test]
    fn dump_format() {
        let tax = ClassTaxonomy::from_schema(&schema_of(&[("A", "B")], &[]));
        let mut out = Vec::new();
        tax.dump(&mut out).unwrap();
        let expected = format!("0\t1\tA\n1\t2\tB\n2\t-\t{}\n", vocab::RDFS_CLASS);
        assert_eq!(String::from_utf8(out).unwrap(), expected);
    }

    fn arb_edges() -> impl Strategy<Value = Vec<(u8, u8)>> {
        prop::collection::vec((0u8..24, 0u8..24), 0..60)
    }

    fn schema_from_ids(edges: &[(u8, u8)]) -> SchemaIndex {
        let names: Vec<(String, String)> = edges
            .iter()
            .map(|(a, b)| (format!("c{a:02}"), format!("c{b:02}")))
            .collect();
        let pairs: Vec<(&str, &str)> = names.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        schema_of(&pairs, &[])
    }

    proptest! {
        #[test]
        fn subtrees_are_contiguous(edges in arb_edges()) {
            let tax = ClassTaxonomy::from_schema(&schema_from_ids(&edges));
            let n = tax.len() as u64;
            // Every ID reaches the root.
            let mut subtree: Vec<Vec<u64>> = vec![Vec::new(); n as usize];
            for id in 0..n {
                let mut cur = Some(id);
                let mut steps = 0;
                while let Some(c) = cur {
                    subtree[c as usize].push(id);
                    cur = tax.parent_id(c);
                    steps += 1;
                    prop_assert!(steps <= n, "cycle in taxonomy");
                }
            }
            prop_assert_eq!(subtree[(n - 1) as usize].len() as u64, n);
            for (c, members) in subtree.iter().enumerate() {
                let lo = *members.iter().min().unwrap();
                let hi = *members.iter().max().unwrap();
                prop_assert_eq!(hi, c as u64);
                prop_assert_eq!(hi - lo + 1, members.len() as u64);
            }
            // Consecutive siblings get adjacent ranges.
            for parent in 0..n {
                let kids: Vec<u64> = (0..n).filter(|&c| tax.parent_id(c) == Some(parent)).collect();
                for pair in kids.windows(2) {
                    let first_hi = pair[0];
                    let second_lo = *subtree[pair[1] as usize].iter().min().unwrap();
                    prop_assert_eq!(first_hi + 1, second_lo);
                }
            }
        }

        #[test]
        fn deterministic_and_spanning(edges in arb_edges()) {
            let schema = schema_from_ids(&edges);
            let a = build_taxonomy(&schema);
            let b = build_taxonomy(&schema);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(a.len(), schema.classes().len() + 1 - usize::from(schema.classes().contains(&iri(vocab::RDFS_CLASS))));
            // Tree edges marked original really are subClassOf edges.
            for (v, p) in a.parent.iter().enumerate() {
                if let Some(p) = p {
                    if a.original[v] {
                        prop_assert!(schema.subclass_edges().contains(&(a.vertices[v].clone(), a.vertices[*p].clone())));
                    } else {
                        prop_assert_eq!(*p, a.root);
                    }
                }
            }
        }
    }
}
