use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use super::ast::*;
use crate::geo::{filter_within, haversine};
use crate::graph::{Graph, Literal, Term, Triple};
use crate::vocab::{self, xsd};
use crate::GeoPoint;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("cannot compare {left} {op} {right}: incomparable types")]
    Incomparable {
        left: String,
        op: &'static str,
        right: String,
    },
}

/// Result rows; each row holds one term per column, in column order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SolutionTable {
    pub variables: Vec<Variable>,
    pub rows: Vec<Vec<Term>>,
}

impl SolutionTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of one column, if the table has it.
    pub fn column(&self, name: &str) -> Option<Vec<&Term>> {
        let idx = self.variables.iter().position(|v| v.name() == name)?;
        Some(self.rows.iter().map(|r| &r[idx]).collect())
    }

    /// Header of variable names, then one record per row with terms in N-Triples syntax.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(vec![]);
        writer
            .write_record(self.variables.iter().map(Variable::name))
            .expect("writing to memory");
        for row in &self.rows {
            writer
                .write_record(row.iter().map(Term::to_string))
                .expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushing memory")).expect("CSV of UTF-8 is UTF-8")
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let cells: Vec<Vec<String>> = std::iter::once(self.variables.iter().map(|v| v.to_string()).collect())
            .chain(self.rows.iter().map(|r| r.iter().map(display_term).collect()))
            .collect();
        let widths: Vec<usize> = (0..self.variables.len())
            .map(|i| cells.iter().map(|r| r[i].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for (n, row) in cells.iter().enumerate() {
            let line: Vec<String> = row.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            out.push_str(line.join(" | ").trim_end());
            out.push('\n');
            if n == 0 {
                let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
                out.push_str(&rule.join("-+-"));
                out.push('\n');
            }
        }
        out
    }
}

fn display_term(t: &Term) -> String {
    match t {
        Term::Iri(i) => vocab::compact(i.as_str()).unwrap_or_else(|| t.to_string()),
        Term::Literal(l) if l.datatype() == &xsd::string() => l.lexical().to_owned(),
        Term::Literal(l) if numeric(l).is_some() => l.lexical().to_owned(),
        _ => t.to_string(),
    }
}

const NUMERIC: &[&str] = &[
    "integer",
    "decimal",
    "double",
    "float",
    "int",
    "long",
    "short",
    "byte",
    "nonNegativeInteger",
    "positiveInteger",
    "negativeInteger",
    "nonPositiveInteger",
    "unsignedInt",
    "unsignedLong",
    "unsignedShort",
    "unsignedByte",
];

/// Numeric value of a literal with an XSD numeric datatype and a parsable lexical form.
pub fn numeric(lit: &Literal) -> Option<f64> {
    let local = lit.datatype().as_str().strip_prefix(vocab::XSD)?;
    if !NUMERIC.contains(&local) {
        return None;
    }
    lit.lexical().trim().parse::<f64>().ok().filter(|v| !v.is_nan())
}

/// Compares two terms under a filter operator.
///
/// `=` and `!=` never fail: numbers compare by value, everything else by term
/// identity. Ordering operators accept two numbers, two literals of the same
/// non-numeric datatype (and language), and fail otherwise.
pub fn compare_terms(left: &Term, op: CompareOp, right: &Term) -> Result<bool, EvalError> {
    let nums = match (left, right) {
        (Term::Literal(a), Term::Literal(b)) => numeric(a).zip(numeric(b)),
        _ => None,
    };
    let ordering = match (nums, left, right) {
        (Some((a, b)), _, _) => a.partial_cmp(&b),
        (None, Term::Literal(a), Term::Literal(b)) if a.datatype() == b.datatype() && a.language() == b.language() => {
            Some(a.lexical().cmp(b.lexical()))
        }
        _ => None,
    };
    match op {
        CompareOp::Eq => Ok(match ordering {
            Some(o) if nums.is_some() => o == Ordering::Equal,
            _ => left == right,
        }),
        CompareOp::Ne => Ok(match ordering {
            Some(o) if nums.is_some() => o != Ordering::Equal,
            _ => left != right,
        }),
        _ => {
            let o = ordering.ok_or_else(|| EvalError::Incomparable {
                left: left.to_string(),
                op: op.symbol(),
                right: right.to_string(),
            })?;
            Ok(match op {
                CompareOp::Lt => o == Ordering::Less,
                CompareOp::Le => o != Ordering::Greater,
                CompareOp::Ge => o != Ordering::Less,
                CompareOp::Gt => o == Ordering::Greater,
                CompareOp::Eq | CompareOp::Ne => unreachable!(),
            })
        }
    }
}

/// Coordinates of a node: the smallest numeric `tifsem:latitude`/`longitude`
/// values, falling back to the Schema.org properties.
pub fn node_point(graph: &Graph, node: &Term) -> Option<GeoPoint> {
    let first = |local: &str| {
        [vocab::tifsem(local), vocab::schema(local)].iter().find_map(|p| {
            graph
                .matches(Some(node), Some(p), None)
                .filter_map(|t| t.object().as_literal().and_then(numeric))
                .min_by(f64::total_cmp)
        })
    };
    GeoPoint::new(first("latitude")?, first("longitude")?).ok()
}

/// Total order used for sorting rows: numbers by value before everything
/// else, then terms by their N-Triples form.
pub fn order_terms(a: &Term, b: &Term) -> Ordering {
    let na = a.as_literal().and_then(numeric);
    let nb = b.as_literal().and_then(numeric);
    match (na, nb) {
        (Some(x), Some(y)) => x.total_cmp(&y).then_with(|| a.to_string().cmp(&b.to_string())),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.to_string().cmp(&b.to_string()),
    }
}

fn order_rows(a: &[Term], b: &[Term]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| order_terms(x, y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

struct Evaluator<'q, 'g> {
    graph: &'g Graph,
    query: &'q Query,
    slots: HashMap<&'q Variable, usize>,
}

type Binding = Vec<Option<Term>>;

impl Evaluator<'_, '_> {
    fn resolve<'b>(&self, pt: &'b PatternTerm, binding: &'b Binding) -> Option<&'b Term> {
        match pt {
            PatternTerm::Term(t) => Some(t),
            PatternTerm::Var(v) => binding[self.slots[v]].as_ref(),
        }
    }

    fn bound_count(&self, pattern: &TriplePattern, binding: &Binding) -> usize {
        pattern
            .positions()
            .iter()
            .filter(|p| self.resolve(p, binding).is_some())
            .count()
    }

    fn join(&self, remaining: &mut Vec<usize>, binding: &mut Binding, out: &mut Vec<Binding>) {
        if remaining.is_empty() {
            out.push(binding.clone());
            return;
        }
        // most constrained pattern first
        let pick = (0..remaining.len())
            .max_by_key(|&i| {
                (
                    self.bound_count(&self.query.patterns[remaining[i]], binding),
                    std::cmp::Reverse(remaining[i]),
                )
            })
            .expect("non-empty");
        let pattern_idx = remaining.swap_remove(pick);
        let pattern = &self.query.patterns[pattern_idx];

        let s = self.resolve(&pattern.subject, binding).cloned();
        let p = self.resolve(&pattern.predicate, binding).cloned();
        let o = self.resolve(&pattern.object, binding).cloned();
        let predicate_ok = p.as_ref().is_none_or(|t| t.as_iri().is_some());
        if predicate_ok {
            let p_iri = p.as_ref().and_then(Term::as_iri);
            let candidates: Vec<&Triple> = self.graph.matches(s.as_ref(), p_iri, o.as_ref()).collect();
            for triple in candidates {
                let mut assigned = vec![];
                let values = [
                    triple.subject().clone(),
                    Term::Iri(triple.predicate().clone()),
                    triple.object().clone(),
                ];
                let mut ok = true;
                for (pos, value) in pattern.positions().into_iter().zip(values) {
                    if let PatternTerm::Var(v) = pos {
                        let slot = self.slots[v];
                        match &binding[slot] {
                            Some(existing) if existing != &value => {
                                ok = false;
                                break;
                            }
                            Some(_) => {}
                            None => {
                                binding[slot] = Some(value);
                                assigned.push(slot);
                            }
                        }
                    }
                }
                if ok {
                    self.join(remaining, binding, out);
                }
                for slot in assigned {
                    binding[slot] = None;
                }
            }
        }
        remaining.push(pattern_idx);
        let last = remaining.len() - 1;
        remaining.swap(pick, last);
    }

    fn value<'b>(&self, e: &'b Expr, binding: &'b Binding) -> &'b Term {
        match e {
            Expr::Term(t) => t,
            Expr::Var(v) => binding[self.slots[v]]
                .as_ref()
                .expect("filter variables are bound by patterns"),
        }
    }

    fn point(&self, p: &PointExpr, binding: &Binding) -> Option<GeoPoint> {
        match p {
            PointExpr::Node(v) => {
                let node = binding[self.slots[v]].as_ref()?;
                node_point(self.graph, node)
            }
            PointExpr::Coordinates(lat, lon) => {
                let lat = self.value(lat, binding).as_literal().and_then(numeric)?;
                let lon = self.value(lon, binding).as_literal().and_then(numeric)?;
                GeoPoint::new(lat, lon).ok()
            }
        }
    }

    /// Both operands of `&&`/`||` are always evaluated, so errors surface
    /// regardless of operand order.
    fn test(&self, f: &FilterExpr, binding: &Binding) -> Result<bool, EvalError> {
        Ok(match f {
            FilterExpr::Compare(a, op, b) => compare_terms(self.value(a, binding), *op, self.value(b, binding))?,
            FilterExpr::DistanceWithin { a, b, threshold_m } => {
                match (self.point(a, binding), self.point(b, binding)) {
                    (Some(pa), Some(pb)) => filter_within(haversine(&pa, &pb), *threshold_m),
                    _ => false,
                }
            }
            FilterExpr::And(a, b) => {
                let (x, y) = (self.test(a, binding)?, self.test(b, binding)?);
                x && y
            }
            FilterExpr::Or(a, b) => {
                let (x, y) = (self.test(a, binding)?, self.test(b, binding)?);
                x || y
            }
            FilterExpr::Not(a) => !self.test(a, binding)?,
        })
    }
}

/// Evaluates the query: join of all patterns, then every filter, then
/// projection, optional DISTINCT or GROUP-COUNT, ordering, and limit.
///
/// Without ORDER BY, rows are sorted column by column; with it, the key
/// decides first and the same column-wise order breaks ties.
pub fn evaluate(query: &Query, graph: &Graph) -> Result<SolutionTable, EvalError> {
    let vars = query.pattern_variables();
    let slots: HashMap<&Variable, usize> = vars.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let evaluator = Evaluator { graph, query, slots };

    let mut solutions = vec![];
    if !query.patterns.is_empty() {
        let mut remaining: Vec<usize> = (0..query.patterns.len()).collect();
        let mut binding: Binding = vec![None; vars.len()];
        evaluator.join(&mut remaining, &mut binding, &mut solutions);
    }

    let columns = query.columns();
    // ORDER BY may name a pattern variable that is not projected; its value
    // rides along with the row until sorting is done
    let hidden_key = query
        .order_by
        .as_ref()
        .filter(|o| !columns.contains(&o.key))
        .map(|o| evaluator.slots[&o.key]);

    let mut rows: Vec<(Option<Term>, Vec<Term>)> = vec![];
    for solution in &solutions {
        let mut keep = true;
        for f in &query.filters {
            keep &= evaluator.test(f, solution)?;
        }
        if keep {
            let row = query
                .projection
                .iter()
                .map(|v| {
                    solution[evaluator.slots[v]]
                        .clone()
                        .expect("projected variables are bound")
                })
                .collect();
            rows.push((hidden_key.and_then(|slot| solution[slot].clone()), row));
        }
    }

    if query.group_count.is_some() {
        let mut groups: BTreeMap<Vec<Term>, usize> = BTreeMap::new();
        for (_, row) in rows {
            *groups.entry(row).or_default() += 1;
        }
        rows = groups
            .into_iter()
            .map(|(mut row, n)| {
                row.push(Term::Literal(Literal::typed(n.to_string(), xsd::integer())));
                (None, row)
            })
            .collect();
    } else if query.distinct {
        rows.sort();
        rows.dedup();
    }

    let key_column = query
        .order_by
        .as_ref()
        .and_then(|o| columns.iter().position(|c| c == &o.key));
    rows.sort_by(|(ka, a), (kb, b)| {
        let by_key = query.order_by.as_ref().map_or(Ordering::Equal, |order| {
            let o = match key_column {
                Some(i) => order_terms(&a[i], &b[i]),
                None => match (ka, kb) {
                    (Some(x), Some(y)) => order_terms(x, y),
                    _ => Ordering::Equal,
                },
            };
            if order.ascending {
                o
            } else {
                o.reverse()
            }
        });
        by_key.then_with(|| order_rows(a, b)).then_with(|| match (ka, kb) {
            (Some(x), Some(y)) => order_terms(x, y),
            _ => Ordering::Equal,
        })
    });
    let mut rows: Vec<Vec<Term>> = rows.into_iter().map(|(_, r)| r).collect();
    if let Some(limit) = query.limit {
        rows.truncate(limit);
    }
    Ok(SolutionTable {
        variables: columns,
        rows,
    })
}
