//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value as Json;

use tifsem::graph::{Graph, Iri, Literal, Term, Triple};
use tifsem::vocab;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

pub fn triple(s: Term, p: Iri, o: Term) -> Triple {
    Triple::new(s, p, o).unwrap()
}

// ---------------------------------------------------------------- geodesy

/// Great-circle distance by the atan2 (Vincenty, sphere) formulation.
pub fn great_circle_oracle(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (p1, p2) = (lat1.to_radians(), lat2.to_radians());
    let dl = (lon2 - lon1).to_radians();
    let y = ((p2.cos() * dl.sin()).powi(2) + (p1.cos() * p2.sin() - p1.sin() * p2.cos() * dl.cos()).powi(2)).sqrt();
    let x = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    6_371_000.0 * y.atan2(x)
}

pub fn relative_error(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

// ---------------------------------------------------------------- graphs

const AWKWARD: &[&str] = &[
    "plain",
    "with \"quotes\"",
    "back\\slash",
    "line\nbreak",
    "tab\there",
    "carriage\rreturn",
    "Hôtel été",
    "日本語",
    "emoji 🏨",
    "bell\u{7}",
    "",
    " spaced ",
];

/// Random term soup exercising escapes, languages, datatypes and blank nodes.
pub fn random_graph(rng: &mut ChaCha8Rng, max_triples: usize) -> Graph {
    let n = rng.random_range(0..=max_triples);
    let mut g = Graph::new();
    for _ in 0..n {
        let subject = if rng.random_bool(0.3) {
            Term::blank(format!("b{}", rng.random_range(0..10))).unwrap()
        } else {
            random_iri(rng).into()
        };
        let predicate = iri(&format!("http://example.org/p/{}", rng.random_range(0..8)));
        let object = match rng.random_range(0..6) {
            0 => random_iri(rng).into(),
            1 => Term::blank(format!("b{}", rng.random_range(0..10))).unwrap(),
            2 => Literal::string(*AWKWARD.choose(rng).unwrap()).into(),
            3 => Literal::lang(
                *AWKWARD.choose(rng).unwrap(),
                ["fr", "en-GB", "de-CH-1996"].choose(rng).unwrap(),
            )
            .unwrap()
            .into(),
            4 => Literal::typed(rng.random_range(-500..500).to_string(), vocab::xsd::integer()).into(),
            _ => Literal::typed(
                *AWKWARD.choose(rng).unwrap(),
                iri(&format!("http://example.org/dt/{}", rng.random_range(0..3))),
            )
            .into(),
        };
        g.insert(triple(subject, predicate, object));
    }
    g
}

fn random_iri(rng: &mut ChaCha8Rng) -> Iri {
    let local = ["a", "b", "é", "x-y", "q?v=1", "frag#ment", "%20", "日本"];
    iri(&format!(
        "http://example.org/r/{}{}",
        local.choose(rng).unwrap(),
        rng.random_range(0..5)
    ))
}

/// Triples rendered with blank nodes replaced by structural colors, sorted.
///
/// Two graphs that differ only by blank relabeling give the same result.
pub fn canonical_form(graph: &Graph) -> Vec<String> {
    let triples: Vec<&Triple> = graph.iter().collect();
    let blanks: BTreeSet<String> = triples
        .iter()
        .flat_map(|t| [t.subject(), t.object()])
        .filter_map(|t| match t {
            Term::Blank(b) => Some(b.clone()),
            _ => None,
        })
        .collect();
    let mut colors: HashMap<String, u64> = blanks.iter().map(|b| (b.clone(), 0)).collect();
    let render = |t: &Term, colors: &HashMap<String, u64>| match t {
        Term::Blank(b) => format!("_:c{}", colors[b]),
        other => other.to_string(),
    };
    for _ in 0..=blanks.len().min(32) {
        let mut signatures: HashMap<String, Vec<String>> = HashMap::new();
        for t in &triples {
            if let Term::Blank(b) = t.subject() {
                signatures.entry(b.clone()).or_default().push(format!(
                    "out {} {}",
                    t.predicate(),
                    render(t.object(), &colors)
                ));
            }
            if let Term::Blank(b) = t.object() {
                signatures.entry(b.clone()).or_default().push(format!(
                    "in {} {}",
                    render(t.subject(), &colors),
                    t.predicate()
                ));
            }
        }
        let next: HashMap<String, u64> = blanks
            .iter()
            .map(|b| {
                let mut sig = signatures.remove(b).unwrap_or_default();
                sig.sort();
                let mut h = DefaultHasher::new();
                colors[b].hash(&mut h);
                sig.hash(&mut h);
                (b.clone(), h.finish())
            })
            .collect();
        let distinct = |c: &HashMap<String, u64>| c.values().collect::<BTreeSet<_>>().len();
        let stable = distinct(&next) == distinct(&colors);
        colors = next;
        if stable {
            break;
        }
    }
    let mut out: Vec<String> = triples
        .iter()
        .map(|t| {
            format!(
                "{} <{}> {}",
                render(t.subject(), &colors),
                t.predicate(),
                render(t.object(), &colors)
            )
        })
        .collect();
    out.sort();
    out
}

/// The root's triples plus those of every blank node reachable from it through blank nodes.
pub fn blank_closure(graph: &Graph, root: &Term) -> Graph {
    let mut out = Graph::new();
    let mut stack = vec![root.clone()];
    let mut seen = BTreeSet::new();
    while let Some(node) = stack.pop() {
        if !seen.insert(node.to_string()) {
            continue;
        }
        for t in graph.iter().filter(|t| t.subject() == &node) {
            out.insert(t.clone());
            if let Term::Blank(_) = t.object() {
                stack.push(t.object().clone());
            }
        }
    }
    out
}

// ---------------------------------------------------------------- JSON-LD

/// Minimal JSON-LD expansion into triples for documents with a flat prefix context.
pub fn expand_jsonld(doc: &Json) -> Graph {
    let context: BTreeMap<String, String> = doc["@context"]
        .as_object()
        .expect("context object")
        .iter()
        .map(|(k, v)| (k.clone(), v.as_str().unwrap().to_owned()))
        .collect();
    let mut state = Expansion {
        context,
        graph: Graph::new(),
        fresh: 0,
    };
    state.node(doc);
    state.graph
}

struct Expansion {
    context: BTreeMap<String, String>,
    graph: Graph,
    fresh: usize,
}

impl Expansion {
    fn expand(&self, term: &str) -> String {
        match term.split_once(':') {
            Some((prefix, local)) if self.context.contains_key(prefix) && !local.starts_with("//") => {
                format!("{}{local}", self.context[prefix])
            }
            _ => term.to_owned(),
        }
    }

    fn reference(&mut self, id: Option<&str>) -> Term {
        match id {
            Some(id) if id.starts_with("_:") => Term::blank(format!("j{}", &id[2..])).unwrap(),
            Some(id) => iri(&self.expand(id)).into(),
            None => {
                self.fresh += 1;
                Term::blank(format!("anon{}", self.fresh)).unwrap()
            }
        }
    }

    fn node(&mut self, obj: &Json) -> Term {
        let obj = obj.as_object().expect("node object");
        let subject = self.reference(obj.get("@id").and_then(Json::as_str));
        for (key, value) in obj {
            match key.as_str() {
                "@context" | "@id" => {}
                "@type" => {
                    for ty in as_list(value) {
                        let class = iri(&self.expand(ty.as_str().unwrap()));
                        self.graph
                            .insert(triple(subject.clone(), vocab::rdf::type_(), class.into()));
                    }
                }
                _ => {
                    let predicate = iri(&self.expand(key));
                    for v in as_list(value) {
                        let object = self.value(v);
                        self.graph.insert(triple(subject.clone(), predicate.clone(), object));
                    }
                }
            }
        }
        subject
    }

    fn value(&mut self, v: &Json) -> Term {
        match v {
            Json::String(s) => Literal::string(s.clone()).into(),
            Json::Object(o) if o.contains_key("@value") => {
                let lexical = o["@value"].as_str().unwrap().to_owned();
                if let Some(lang) = o.get("@language") {
                    Literal::lang(lexical, lang.as_str().unwrap()).unwrap().into()
                } else {
                    let dt = o.get("@type").map(|t| self.expand(t.as_str().unwrap()));
                    match dt {
                        Some(dt) => Literal::typed(lexical, iri(&dt)).into(),
                        None => Literal::string(lexical).into(),
                    }
                }
            }
            Json::Object(o) if o.len() == 1 && o.contains_key("@id") => self.reference(o["@id"].as_str()),
            Json::Object(_) => self.node(v),
            other => panic!("unexpected JSON-LD value {other}"),
        }
    }
}

fn as_list(v: &Json) -> Vec<&Json> {
    match v {
        Json::Array(items) => items.iter().collect(),
        other => vec![other],
    }
}

// ---------------------------------------------------------------- queries

/// Small vocabulary for query cases, so exhaustive enumeration stays cheap.
pub struct QueryVocab {
    pub subjects: Vec<Term>,
    pub predicates: Vec<Iri>,
    pub objects: Vec<Term>,
}

impl QueryVocab {
    pub fn new() -> Self {
        let subjects: Vec<Term> = (0..5).map(|i| iri(&format!("http://ex.org/s{i}")).into()).collect();
        let predicates: Vec<Iri> = (0..3).map(|i| iri(&format!("http://ex.org/p{i}"))).collect();
        let mut objects = subjects.clone();
        for n in ["1", "2", "2.5", "10", "-3"] {
            let dt = if n.contains('.') {
                vocab::xsd::decimal()
            } else {
                vocab::xsd::integer()
            };
            objects.push(Literal::typed(n, dt).into());
        }
        objects.push(Literal::typed("2.0", vocab::xsd::decimal()).into());
        for s in ["apple", "banana", "Apple"] {
            objects.push(Literal::string(s).into());
        }
        objects.push(Literal::lang("pomme", "fr").unwrap().into());
        QueryVocab {
            subjects,
            predicates,
            objects,
        }
    }

    pub fn graph(&self, rng: &mut ChaCha8Rng, max_triples: usize) -> Graph {
        // mostly dense graphs, so that random patterns usually have solutions
        let n = if rng.random_bool(0.1) {
            rng.random_range(0..=max_triples)
        } else {
            rng.random_range(max_triples / 2..=max_triples)
        };
        // p0 only carries numbers and p1 only plain strings, so ordering filters
        // over those columns succeed; p2 links resources, with some of everything
        let numbers: Vec<&Term> = self.objects.iter().filter(|t| is_number(t)).collect();
        let strings: Vec<&Term> = self
            .objects
            .iter()
            .filter(|t| t.as_literal().is_some_and(|l| l.datatype() == &vocab::xsd::string()))
            .collect();
        (0..n)
            .map(|_| {
                let k = rng.random_range(0..self.predicates.len());
                let object = match k {
                    0 => (*numbers.choose(rng).unwrap()).clone(),
                    1 => (*strings.choose(rng).unwrap()).clone(),
                    _ if rng.random_bool(0.7) => self.subjects.choose(rng).unwrap().clone(),
                    _ => self.objects.choose(rng).unwrap().clone(),
                };
                triple(
                    self.subjects.choose(rng).unwrap().clone(),
                    self.predicates[k].clone(),
                    object,
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone)]
pub enum Slot {
    Var(&'static str),
    Term(Term),
}

#[derive(Debug, Clone)]
pub enum Cmp {
    Op(&'static str, Slot, Slot),
    Not(Box<Cmp>),
    And(Box<Cmp>, Box<Cmp>),
    Or(Box<Cmp>, Box<Cmp>),
}

#[derive(Debug, Clone)]
pub struct QueryCase {
    pub patterns: Vec<[Slot; 3]>,
    pub filter: Option<Cmp>,
    pub projection: Option<Vec<&'static str>>,
    pub distinct: bool,
}

const VARS: [&str; 3] = ["a", "b", "c"];

fn slot_text(s: &Slot) -> String {
    match s {
        Slot::Var(v) => format!("?{v}"),
        Slot::Term(t) => t.to_string(),
    }
}

fn cmp_text(c: &Cmp) -> String {
    match c {
        Cmp::Op(op, l, r) => format!("{} {op} {}", slot_text(l), slot_text(r)),
        Cmp::Not(inner) => format!("!({})", cmp_text(inner)),
        Cmp::And(a, b) => format!("({}) && ({})", cmp_text(a), cmp_text(b)),
        Cmp::Or(a, b) => format!("({}) || ({})", cmp_text(a), cmp_text(b)),
    }
}

impl QueryCase {
    pub fn random(rng: &mut ChaCha8Rng, vocab: &QueryVocab) -> Self {
        let n = rng.random_range(1..=3);
        let mut patterns = vec![];
        for _ in 0..n {
            let var = |rng: &mut ChaCha8Rng| Slot::Var(VARS[rng.random_range(0..3)]);
            let s = if rng.random_bool(0.85) {
                var(rng)
            } else {
                Slot::Term(vocab.subjects.choose(rng).unwrap().clone())
            };
            // predicates and resources never coincide, so predicate variables get their own name
            let p = if rng.random_bool(0.3) {
                Slot::Var("p")
            } else {
                Slot::Term(vocab.predicates.choose(rng).unwrap().clone().into())
            };
            let o = if rng.random_bool(0.8) {
                let mut o = var(rng);
                while matches!((&s, &o), (Slot::Var(a), Slot::Var(b)) if a == b) {
                    o = var(rng);
                }
                o
            } else {
                Slot::Term(vocab.objects.choose(rng).unwrap().clone())
            };
            patterns.push([s, p, o]);
        }
        let mut case = QueryCase {
            patterns,
            filter: None,
            projection: None,
            distinct: rng.random_bool(0.3),
        };
        let vars = case.variables();
        if vars.is_empty() {
            return case;
        }
        // variables only ever seen in object position can hold literals
        let literal_vars: Vec<&'static str> = vars
            .iter()
            .copied()
            .filter(|v| {
                case.patterns
                    .iter()
                    .all(|p| !matches!(p[0], Slot::Var(x) if x == *v) && !matches!(p[1], Slot::Var(x) if x == *v))
            })
            .collect();
        let operands = if literal_vars.is_empty() {
            vars.clone()
        } else {
            literal_vars
        };
        let literals: Vec<Term> = vocab
            .objects
            .iter()
            .filter(|t| t.as_literal().is_some())
            .cloned()
            .collect();
        if rng.random_bool(0.6) {
            let comparison = |rng: &mut ChaCha8Rng| {
                let op = ["=", "!=", "<", "<=", ">", ">="][rng.random_range(0..6)];
                let left = Slot::Var(operands.choose(rng).unwrap());
                let right = if rng.random_bool(0.25) {
                    Slot::Var(operands.choose(rng).unwrap())
                } else if op == "=" || op == "!=" {
                    Slot::Term(vocab.objects.choose(rng).unwrap().clone())
                } else {
                    Slot::Term(literals.choose(rng).unwrap().clone())
                };
                Cmp::Op(op, left, right)
            };
            let first = comparison(rng);
            case.filter = Some(match rng.random_range(0..5) {
                0 => Cmp::Not(Box::new(first)),
                1 => Cmp::And(Box::new(first), Box::new(comparison(rng))),
                2 => Cmp::Or(Box::new(first), Box::new(comparison(rng))),
                _ => first,
            });
        }
        if rng.random_bool(0.7) {
            let mut picked: Vec<&'static str> = vars.iter().copied().filter(|_| rng.random_bool(0.6)).collect();
            if picked.is_empty() {
                picked.push(vars[0]);
            }
            case.projection = Some(picked);
        }
        case
    }

    /// Distinct pattern variables in order of first appearance.
    pub fn variables(&self) -> Vec<&'static str> {
        let mut out = vec![];
        for p in &self.patterns {
            for s in p {
                if let Slot::Var(v) = s {
                    if !out.contains(v) {
                        out.push(*v);
                    }
                }
            }
        }
        out
    }

    pub fn columns(&self) -> Vec<&'static str> {
        self.projection.clone().unwrap_or_else(|| self.variables())
    }

    pub fn text(&self) -> String {
        let head = match &self.projection {
            None => "*".to_owned(),
            Some(vs) => vs.iter().map(|v| format!("?{v}")).collect::<Vec<_>>().join(" "),
        };
        let body: Vec<String> = self
            .patterns
            .iter()
            .map(|p| format!("{} {} {} .", slot_text(&p[0]), slot_text(&p[1]), slot_text(&p[2])))
            .collect();
        let filter = self
            .filter
            .as_ref()
            .map(|f| format!(" FILTER({})", cmp_text(f)))
            .unwrap_or_default();
        format!(
            "SELECT {}{head} WHERE {{ {}{filter} }}",
            if self.distinct { "DISTINCT " } else { "" },
            body.join(" ")
        )
    }

    /// Exhaustive enumeration of variable assignments over every term in the graph.
    ///
    /// Returns the rows rendered in N-Triples syntax, sorted, or `None` when some
    /// solution makes the filter compare incomparable terms.
    pub fn brute_force(&self, graph: &Graph) -> Option<Vec<Vec<String>>> {
        let mut domain: Vec<Term> = vec![];
        for t in graph.iter() {
            for term in [
                t.subject().clone(),
                Term::Iri(t.predicate().clone()),
                t.object().clone(),
            ] {
                if !domain.contains(&term) {
                    domain.push(term);
                }
            }
        }
        let vars = self.variables();
        let mut rows = vec![];
        let mut assignment = vec![0usize; vars.len()];
        if !domain.is_empty() || vars.is_empty() {
            loop {
                let value = |s: &Slot| -> Term {
                    match s {
                        Slot::Var(v) => domain[assignment[vars.iter().position(|x| x == v).unwrap()]].clone(),
                        Slot::Term(t) => t.clone(),
                    }
                };
                let matched = self.patterns.iter().all(|p| {
                    let (s, pr, o) = (value(&p[0]), value(&p[1]), value(&p[2]));
                    match (pr, &s) {
                        (Term::Iri(pr), Term::Iri(_) | Term::Blank(_)) => {
                            graph.contains(&Triple::new(s.clone(), pr, o).unwrap())
                        }
                        _ => false,
                    }
                });
                if matched {
                    let keep = match &self.filter {
                        None => true,
                        Some(f) => oracle_filter(f, &value)?,
                    };
                    if keep {
                        rows.push(
                            self.columns()
                                .iter()
                                .map(|v| value(&Slot::Var(v)).to_string())
                                .collect::<Vec<_>>(),
                        );
                    }
                }
                // odometer over the domain
                let mut i = 0;
                while i < assignment.len() {
                    assignment[i] += 1;
                    if assignment[i] < domain.len() {
                        break;
                    }
                    assignment[i] = 0;
                    i += 1;
                }
                if i == assignment.len() {
                    break;
                }
            }
        }
        rows.sort();
        if self.distinct {
            rows.dedup();
        }
        Some(rows)
    }
}

fn is_number(t: &Term) -> bool {
    oracle_number(t).is_some()
}

fn oracle_number(t: &Term) -> Option<f64> {
    let lit = t.as_literal()?;
    let dt = lit.datatype().as_str();
    if dt == format!("{}integer", vocab::XSD) || dt == format!("{}decimal", vocab::XSD) {
        lit.lexical().parse().ok()
    } else {
        None
    }
}

fn oracle_filter(c: &Cmp, value: &dyn Fn(&Slot) -> Term) -> Option<bool> {
    match c {
        Cmp::Not(inner) => oracle_filter(inner, value).map(|b| !b),
        Cmp::And(a, b) => {
            let (x, y) = (oracle_filter(a, value)?, oracle_filter(b, value)?);
            Some(x && y)
        }
        Cmp::Or(a, b) => {
            let (x, y) = (oracle_filter(a, value)?, oracle_filter(b, value)?);
            Some(x || y)
        }
        Cmp::Op(op, l, r) => {
            let (l, r) = (value(l), value(r));
            let ord = match (oracle_number(&l), oracle_number(&r)) {
                (Some(a), Some(b)) => a.partial_cmp(&b),
                _ => match (l.as_literal(), r.as_literal()) {
                    (Some(a), Some(b)) if a.datatype() == b.datatype() && a.language() == b.language() => {
                        Some(a.lexical().cmp(b.lexical()))
                    }
                    _ => None,
                },
            };
            let numeric = oracle_number(&l).is_some() && oracle_number(&r).is_some();
            use std::cmp::Ordering::*;
            match *op {
                "=" => Some(if numeric { ord == Some(Equal) } else { l == r }),
                "!=" => Some(if numeric { ord != Some(Equal) } else { l != r }),
                "<" => Some(ord? == Less),
                "<=" => Some(ord? != Greater),
                ">" => Some(ord? == Greater),
                ">=" => Some(ord? != Less),
                _ => unreachable!(),
            }
        }
    }
}

/// Rows of an evaluated table as sorted N-Triples strings, for comparison with the oracle.
pub fn table_rows(table: &tifsem::query::SolutionTable) -> Vec<Vec<String>> {
    let mut rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| r.iter().map(Term::to_string).collect())
        .collect();
    rows.sort();
    rows
}

// ---------------------------------------------------------------- mapping

/// Naive fixed point: apply every rule to every triple until nothing changes.
pub fn closure_oracle(graph: &Graph, rules: &[tifsem::mapping::MappingRule]) -> Graph {
    use tifsem::mapping::Relation;
    let type_ = vocab::rdf::type_();
    let mut current: Vec<Triple> = graph.iter().cloned().collect();
    let mut set: BTreeSet<String> = current.iter().map(|t| t.to_string()).collect();
    loop {
        let mut added = vec![];
        for t in &current {
            for r in rules {
                let mut candidates = vec![];
                let class_level = matches!(r.relation, Relation::EquivalentClass | Relation::SubClassOf);
                let symmetric = matches!(r.relation, Relation::EquivalentClass | Relation::EquivalentProperty);
                if class_level {
                    if t.predicate() == &type_ {
                        if t.object() == &Term::Iri(r.source.clone()) {
                            candidates.push(triple(t.subject().clone(), type_.clone(), r.target.clone().into()));
                        }
                        if symmetric && t.object() == &Term::Iri(r.target.clone()) {
                            candidates.push(triple(t.subject().clone(), type_.clone(), r.source.clone().into()));
                        }
                    }
                } else {
                    if t.predicate() == &r.source {
                        candidates.push(triple(t.subject().clone(), r.target.clone(), t.object().clone()));
                    }
                    if symmetric && t.predicate() == &r.target {
                        candidates.push(triple(t.subject().clone(), r.source.clone(), t.object().clone()));
                    }
                }
                for c in candidates {
                    if set.insert(c.to_string()) {
                        added.push(c);
                    }
                }
            }
        }
        if added.is_empty() {
            break;
        }
        current.extend(added);
    }
    current.into_iter().collect()
}

/// Random typed nodes and property assertions over a small class and property pool.
pub fn random_mapping_case(
    rng: &mut ChaCha8Rng,
    max_triples: usize,
    max_rules: usize,
) -> (Graph, Vec<tifsem::mapping::MappingRule>) {
    use tifsem::mapping::{MappingRule, Relation};
    let classes: Vec<Iri> = (0..8).map(|i| iri(&format!("http://ex.org/C{i}"))).collect();
    let props: Vec<Iri> = (0..6).map(|i| iri(&format!("http://ex.org/p{i}"))).collect();
    let nodes: Vec<Term> = (0..12).map(|i| iri(&format!("http://ex.org/n{i}")).into()).collect();
    let n = rng.random_range(0..=max_triples);
    let mut g = Graph::new();
    for _ in 0..n {
        let s = nodes.choose(rng).unwrap().clone();
        if rng.random_bool(0.5) {
            g.insert(triple(
                s,
                vocab::rdf::type_(),
                classes.choose(rng).unwrap().clone().into(),
            ));
        } else {
            let o = if rng.random_bool(0.5) {
                nodes.choose(rng).unwrap().clone()
            } else {
                Literal::string(format!("v{}", rng.random_range(0..5))).into()
            };
            g.insert(triple(s, props.choose(rng).unwrap().clone(), o));
        }
    }
    let r = rng.random_range(0..=max_rules);
    let mut rules = vec![];
    for _ in 0..r {
        let relation = [
            Relation::EquivalentClass,
            Relation::SubClassOf,
            Relation::EquivalentProperty,
            Relation::SubPropertyOf,
        ][rng.random_range(0..4)];
        let pool = if relation.is_class_level() { &classes } else { &props };
        rules.push(MappingRule::new(
            pool.choose(rng).unwrap().clone(),
            pool.choose(rng).unwrap().clone(),
            relation,
        ));
    }
    (g, rules)
}

// ---------------------------------------------------------------- XML

/// One child of the document root, as seen by a generic DOM walk.
#[derive(Debug, Clone, Default)]
pub struct WalkedResource {
    /// `(path relative to the resource, trimmed text)` for every element without element children.
    pub leaves: Vec<(String, String)>,
    /// Attributes on the resource and anything below it.
    pub attributes: usize,
}

impl WalkedResource {
    pub fn first(&self, path: &str) -> Option<&str> {
        self.leaves.iter().find(|(p, _)| p == path).map(|(_, v)| v.as_str())
    }
}

/// Walks the XML with a streaming reader, independent of the crate's parser.
pub fn walk_xml(xml: &str) -> Vec<WalkedResource> {
    use quick_xml::events::Event;
    use quick_xml::reader::Reader;

    let mut reader = Reader::from_str(xml);
    reader.config_mut().trim_text(true);
    let mut out: Vec<WalkedResource> = vec![];
    // (name, has element children, text)
    let mut stack: Vec<(String, bool, String)> = vec![];
    let path = |stack: &[(String, bool, String)]| {
        stack[2..]
            .iter()
            .map(|(n, _, _)| n.as_str())
            .collect::<Vec<_>>()
            .join("/")
    };
    loop {
        match reader.read_event().expect("well-formed fixture") {
            Event::Start(e) => {
                if let Some(parent) = stack.last_mut() {
                    parent.1 = true;
                }
                let name = String::from_utf8(e.name().as_ref().to_vec()).unwrap();
                if stack.len() == 1 {
                    out.push(WalkedResource::default());
                }
                if stack.len() >= 1 {
                    out.last_mut().unwrap().attributes += e.attributes().count();
                }
                stack.push((name, false, String::new()));
            }
            Event::Empty(e) => {
                if let Some(parent) = stack.last_mut() {
                    parent.1 = true;
                }
                let name = String::from_utf8(e.name().as_ref().to_vec()).unwrap();
                if stack.len() == 1 {
                    out.push(WalkedResource::default());
                }
                if stack.len() >= 1 {
                    out.last_mut().unwrap().attributes += e.attributes().count();
                }
                if stack.len() >= 2 {
                    stack.push((name, false, String::new()));
                    let p = path(&stack);
                    stack.pop();
                    out.last_mut().unwrap().leaves.push((p, String::new()));
                }
            }
            Event::Text(t) => {
                if let Some(top) = stack.last_mut() {
                    top.2.push_str(&t.unescape().unwrap());
                }
            }
            Event::End(_) => {
                if stack.len() >= 3 && !stack.last().unwrap().1 {
                    let p = path(&stack);
                    let text = stack.last().unwrap().2.trim().to_owned();
                    out.last_mut().unwrap().leaves.push((p, text));
                }
                stack.pop();
            }
            Event::Eof => break,
            _ => {}
        }
    }
    out
}

pub fn latin1(bytes: &[u8]) -> String {
    bytes.iter().map(|&b| b as char).collect()
}
