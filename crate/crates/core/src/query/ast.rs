use std::collections::BTreeSet;
use std::fmt;

use crate::graph::Term;

/// A query variable, stored without its leading `?`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(pub String);

impl Variable {
    pub fn new(name: impl Into<String>) -> Self {
        Variable(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    Var(Variable),
    Term(Term),
}

impl PatternTerm {
    pub fn var(&self) -> Option<&Variable> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Term(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn positions(&self) -> [&PatternTerm; 3] {
        [&self.subject, &self.predicate, &self.object]
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        self.positions().into_iter().filter_map(PatternTerm::var)
    }
}

/// Operand of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var(Variable),
    Term(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Eq => "=",
            CompareOp::Ne => "!=",
            CompareOp::Ge => ">=",
            CompareOp::Gt => ">",
        }
    }
}

/// Where a distance filter takes a coordinate pair from.
#[derive(Debug, Clone, PartialEq)]
pub enum PointExpr {
    /// A node whose `tifsem:latitude`/`tifsem:longitude` (or the Schema.org
    /// equivalents) give the coordinates.
    Node(Variable),
    /// `geo:point(latitude, longitude)`.
    Coordinates(Expr, Expr),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FilterExpr {
    Compare(Expr, CompareOp, Expr),
    /// `geo:distance(a, b) < threshold_m`, strict.
    DistanceWithin {
        a: PointExpr,
        b: PointExpr,
        threshold_m: f64,
    },
    And(Box<FilterExpr>, Box<FilterExpr>),
    Or(Box<FilterExpr>, Box<FilterExpr>),
    Not(Box<FilterExpr>),
}

impl FilterExpr {
    pub fn variables(&self) -> BTreeSet<&Variable> {
        fn expr<'a>(e: &'a Expr, out: &mut BTreeSet<&'a Variable>) {
            if let Expr::Var(v) = e {
                out.insert(v);
            }
        }
        fn point<'a>(p: &'a PointExpr, out: &mut BTreeSet<&'a Variable>) {
            match p {
                PointExpr::Node(v) => {
                    out.insert(v);
                }
                PointExpr::Coordinates(a, b) => {
                    expr(a, out);
                    expr(b, out);
                }
            }
        }
        fn walk<'a>(f: &'a FilterExpr, out: &mut BTreeSet<&'a Variable>) {
            match f {
                FilterExpr::Compare(a, _, b) => {
                    expr(a, out);
                    expr(b, out);
                }
                FilterExpr::DistanceWithin { a, b, .. } => {
                    point(a, out);
                    point(b, out);
                }
                FilterExpr::And(a, b) | FilterExpr::Or(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                FilterExpr::Not(a) => walk(a, out),
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut out);
        out
    }

    pub fn distance_filters(&self) -> usize {
        match self {
            FilterExpr::DistanceWithin { .. } => 1,
            FilterExpr::And(a, b) | FilterExpr::Or(a, b) => a.distance_filters() + b.distance_filters(),
            FilterExpr::Not(a) => a.distance_filters(),
            FilterExpr::Compare(..) => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderBy {
    pub key: Variable,
    pub ascending: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub distinct: bool,
    pub projection: Vec<Variable>,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<FilterExpr>,
    /// `GROUP-COUNT ?n`: collapse identical projected rows and bind their
    /// multiplicity to `?n` as an extra, last column.
    pub group_count: Option<Variable>,
    pub order_by: Option<OrderBy>,
    pub limit: Option<usize>,
}

impl Query {
    /// Variables of the triple patterns, in order of first appearance.
    pub fn pattern_variables(&self) -> Vec<Variable> {
        let mut seen = BTreeSet::new();
        self.patterns
            .iter()
            .flat_map(TriplePattern::variables)
            .filter(|v| seen.insert((*v).clone()))
            .cloned()
            .collect()
    }

    /// Column names of the result table.
    pub fn columns(&self) -> Vec<Variable> {
        let mut cols = self.projection.clone();
        cols.extend(self.group_count.clone());
        cols
    }
}
