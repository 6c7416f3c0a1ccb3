use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Propositional atom id as assigned by the grounder. Id 0 is reserved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An atom or its default negation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub atom: Atom,
    pub positive: bool,
}

impl Lit {
    pub fn pos(atom: Atom) -> Self {
        Lit { atom, positive: true }
    }

    pub fn neg(atom: Atom) -> Self {
        Lit { atom, positive: false }
    }

    pub fn negated(self) -> Self {
        Lit { atom: self.atom, positive: !self.positive }
    }

    pub fn from_aspif(v: i64) -> Option<Self> {
        let a = u32::try_from(v.unsigned_abs()).ok()?;
        if a == 0 {
            return None;
        }
        Some(Lit { atom: Atom(a), positive: v > 0 })
    }

    pub fn to_aspif(self) -> i64 {
        let a = i64::from(self.atom.0);
        if self.positive {
            a
        } else {
            -a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HeadKind {
    /// Empty list is a constraint rule, a singleton a normal rule.
    Disjunctive(Vec<Atom>),
    Choice(Vec<Atom>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BodyKind {
    Normal { pos: Vec<Atom>, neg: Vec<Atom> },
    /// Lower bound over weighted literals. Weights are non-negative after
    /// parse-time normalization.
    Weighted { bound: i64, terms: Vec<(Lit, i64)> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub head: HeadKind,
    pub body: BodyKind,
}

impl Rule {
    pub fn head_atoms(&self) -> &[Atom] {
        match &self.head {
            HeadKind::Disjunctive(a) | HeadKind::Choice(a) => a,
        }
    }

    pub fn is_choice(&self) -> bool {
        matches!(self.head, HeadKind::Choice(_))
    }

    pub fn is_constraint(&self) -> bool {
        matches!(&self.head, HeadKind::Disjunctive(a) if a.is_empty())
    }

    /// Atoms of the positive body, for either body kind.
    pub fn pos_body(&self) -> Vec<Atom> {
        match &self.body {
            BodyKind::Normal { pos, .. } => pos.clone(),
            BodyKind::Weighted { terms, .. } => {
                terms.iter().filter(|(l, _)| l.positive).map(|(l, _)| l.atom).collect()
            }
        }
    }

    pub fn neg_body(&self) -> Vec<Atom> {
        match &self.body {
            BodyKind::Normal { neg, .. } => neg.clone(),
            BodyKind::Weighted { terms, .. } => {
                terms.iter().filter(|(l, _)| !l.positive).map(|(l, _)| l.atom).collect()
            }
        }
    }
}

/// Minimize statement as a flat list of (literal, weight, priority) triples.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MinimizeStatement {
    pub terms: Vec<(Lit, i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompoundKind {
    /// Function application; the id names the symbolic term of the functor.
    Func(u32),
    Tuple,
    Set,
    List,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoryTerm {
    Num(i64),
    Sym(String),
    Compound { kind: CompoundKind, args: Vec<u32> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryElement {
    pub terms: Vec<u32>,
    pub condition: Vec<Lit>,
}

/// A `&name{elements} guard` statement; `atom` is `None` for directives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryAtomStmt {
    pub atom: Option<Atom>,
    pub name: u32,
    pub elements: Vec<u32>,
    /// (operator term, guard term)
    pub guard: Option<(u32, u32)>,
}

/// Raw theory statements, kept uninterpreted until the CASP layer runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TheoryData {
    pub terms: BTreeMap<u32, TheoryTerm>,
    pub elements: BTreeMap<u32, TheoryElement>,
    pub atoms: Vec<TheoryAtomStmt>,
}

impl TheoryData {
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Resolves the name string of a theory atom statement, without a
    /// leading `&` if one is stored.
    pub fn name_of(&self, stmt: &TheoryAtomStmt) -> Option<&str> {
        match self.terms.get(&stmt.name)? {
            TheoryTerm::Sym(s) => Some(s.strip_prefix('&').unwrap_or(s)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub atoms: BTreeSet<Atom>,
    pub rules: Vec<Rule>,
    pub minimize: Option<MinimizeStatement>,
    pub theory: TheoryData,
    pub shows: BTreeMap<Atom, String>,
    /// Output strings with empty condition; printed in every answer set.
    pub shown_facts: Vec<String>,
}

impl GroundProgram {
    /// Registers an atom id. Ids of fresh auxiliary atoms start above the
    /// largest registered id.
    pub fn register_atom(&mut self, a: Atom) {
        self.atoms.insert(a);
    }

    pub fn fresh_atom(&mut self) -> Atom {
        let next = self.atoms.iter().next_back().map_or(1, |a| a.0 + 1);
        let a = Atom(next);
        self.atoms.insert(a);
        a
    }

    /// Serializes back to canonical ASPIF text. Parsing the result yields a
    /// structurally identical program.
    pub fn to_aspif_text(&self) -> String {
        let mut out = String::from("asp 1 0 0\n");
        for r in &self.rules {
            let (h, atoms): (u32, &[Atom]) = match &r.head {
                HeadKind::Disjunctive(a) => (0, a),
                HeadKind::Choice(a) => (1, a),
            };
            let mut line = format!("1 {} {}", h, atoms.len());
            for a in atoms {
                line.push_str(&format!(" {}", a.0));
            }
            match &r.body {
                BodyKind::Normal { pos, neg } => {
                    line.push_str(&format!(" 0 {}", pos.len() + neg.len()));
                    for a in pos {
                        line.push_str(&format!(" {}", a.0));
                    }
                    for a in neg {
                        line.push_str(&format!(" -{}", a.0));
                    }
                }
                BodyKind::Weighted { bound, terms } => {
                    line.push_str(&format!(" 1 {} {}", bound, terms.len()));
                    for (l, w) in terms {
                        line.push_str(&format!(" {} {}", l.to_aspif(), w));
                    }
                }
            }
            out.push_str(&line);
            out.push('\n');
        }
        if let Some(min) = &self.minimize {
            let mut by_prio: BTreeMap<i64, Vec<(Lit, i64)>> = BTreeMap::new();
            for (l, w, p) in &min.terms {
                by_prio.entry(*p).or_default().push((*l, *w));
            }
            for (p, terms) in by_prio {
                let mut line = format!("2 {} {}", p, terms.len());
                for (l, w) in terms {
                    line.push_str(&format!(" {} {}", l.to_aspif(), w));
                }
                out.push_str(&line);
                out.push('\n');
            }
        }
        for (id, t) in &self.theory.terms {
            match t {
                TheoryTerm::Num(v) => out.push_str(&format!("9 0 {} {}\n", id, v)),
                TheoryTerm::Sym(s) => {
                    out.push_str(&format!("9 1 {} {} {}\n", id, s.len(), s))
                }
                TheoryTerm::Compound { kind, args } => {
                    let o = match kind {
                        CompoundKind::Func(f) => i64::from(*f),
                        CompoundKind::Tuple => -1,
                        CompoundKind::Set => -2,
                        CompoundKind::List => -3,
                    };
                    let mut line = format!("9 2 {} {} {}", id, o, args.len());
                    for a in args {
                        line.push_str(&format!(" {}", a));
                    }
                    out.push_str(&line);
                    out.push('\n');
                }
            }
        }
        for (id, e) in &self.theory.elements {
            let mut line = format!("9 4 {} {}", id, e.terms.len());
            for t in &e.terms {
                line.push_str(&format!(" {}", t));
            }
            line.push_str(&format!(" {}", e.condition.len()));
            for l in &e.condition {
                line.push_str(&format!(" {}", l.to_aspif()));
            }
            out.push_str(&line);
            out.push('\n');
        }
        for ta in &self.theory.atoms {
            let atom = ta.atom.map_or(0, |a| a.0);
            let (kind, guard) = match ta.guard {
                Some(g) => (6, Some(g)),
                None => (5, None),
            };
            let mut line = format!("9 {} {} {} {}", kind, atom, ta.name, ta.elements.len());
            for e in &ta.elements {
                line.push_str(&format!(" {}", e));
            }
            if let Some((op, term)) = guard {
                line.push_str(&format!(" {} {}", op, term));
            }
            out.push_str(&line);
            out.push('\n');
        }
        for (a, name) in &self.shows {
            out.push_str(&format!("4 {} {} 1 {}\n", name.len(), name, a.0));
        }
        for name in &self.shown_facts {
            out.push_str(&format!("4 {} {} 0\n", name.len(), name));
        }
        out.push_str("0\n");
        out
    }
}
