use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, Read};

use super::program::*;
use super::AspifError;

/// Parses an ASPIF 1.x document into a [`GroundProgram`].
///
/// Supported statements: rules (1), minimize (2), output (4), theory (9) and
/// comments (10). Externals, heuristics, edges, assumptions and projections
/// are rejected rather than silently dropped.
pub fn parse_aspif<R: Read>(input: R) -> Result<GroundProgram, AspifError> {
    let reader = BufReader::new(input);
    let mut program = GroundProgram::default();
    let mut minimize: BTreeMap<i64, Vec<(Lit, i64)>> = BTreeMap::new();
    let mut saw_header = false;
    let mut done = false;

    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| AspifError::Syntax { line: lineno, reason: e.to_string() })?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        if done {
            return Err(AspifError::Syntax {
                line: lineno,
                reason: "statement after terminating 0".into(),
            });
        }
        if !saw_header {
            let mut toks = line.split_whitespace();
            if toks.next() != Some("asp") {
                return Err(AspifError::Syntax {
                    line: lineno,
                    reason: format!("expected 'asp' header, got {:?}", line),
                });
            }
            if toks.next() != Some("1") {
                return Err(AspifError::Syntax {
                    line: lineno,
                    reason: "unsupported ASPIF major version".into(),
                });
            }
            saw_header = true;
            continue;
        }
        if line.trim() == "0" {
            done = true;
            continue;
        }
        parse_statement(line, lineno, &mut program, &mut minimize)?;
    }

    if !saw_header {
        return Err(AspifError::Syntax { line: 0, reason: "empty input, missing header".into() });
    }
    if !done {
        return Err(AspifError::Syntax { line: 0, reason: "missing terminating 0 line".into() });
    }

    let mut terms: Vec<(Lit, i64, i64)> = Vec::new();
    for (prio, ts) in minimize {
        let mut merged: BTreeMap<Lit, i64> = BTreeMap::new();
        for (l, w) in ts {
            *merged.entry(l).or_insert(0) += w;
        }
        for (l, w) in merged {
            if w != 0 {
                terms.push((l, w, prio));
            }
        }
    }
    if !terms.is_empty() {
        program.minimize = Some(MinimizeStatement { terms });
    }
    Ok(program)
}

struct Toks<'a> {
    rest: &'a str,
    line: usize,
}

impl<'a> Toks<'a> {
    fn new(s: &'a str, line: usize) -> Self {
        Toks { rest: s.trim_start(), line }
    }

    fn err(&self, reason: impl Into<String>) -> AspifError {
        AspifError::Syntax { line: self.line, reason: reason.into() }
    }

    fn next_int(&mut self) -> Result<i64, AspifError> {
        let tok = self.next_tok()?;
        tok.parse::<i64>().map_err(|_| self.err(format!("expected integer, got {:?}", tok)))
    }

    fn next_tok(&mut self) -> Result<&'a str, AspifError> {
        if self.rest.is_empty() {
            return Err(self.err("unexpected end of statement"));
        }
        let end = self.rest.find(char::is_whitespace).unwrap_or(self.rest.len());
        let (tok, rest) = self.rest.split_at(end);
        self.rest = rest.trim_start();
        Ok(tok)
    }

    /// Takes exactly `n` bytes as a string payload (ASPIF length-prefixed).
    fn next_bytes(&mut self, n: usize) -> Result<&'a str, AspifError> {
        if self.rest.len() < n {
            return Err(self.err("string payload shorter than declared length"));
        }
        let (s, rest) = self.rest.split_at(n);
        self.rest = rest.trim_start();
        Ok(s)
    }

    fn finish(&self) -> Result<(), AspifError> {
        if self.rest.is_empty() {
            Ok(())
        } else {
            Err(self.err(format!("trailing tokens: {:?}", self.rest)))
        }
    }

    fn next_atom(&mut self) -> Result<Atom, AspifError> {
        let v = self.next_int()?;
        let a = u32::try_from(v).ok().filter(|&a| a != 0);
        match a {
            Some(a) => Ok(Atom(a)),
            None => Err(self.err(format!("invalid atom id {}", v))),
        }
    }

    fn next_lit(&mut self) -> Result<Lit, AspifError> {
        let v = self.next_int()?;
        Lit::from_aspif(v).ok_or_else(|| self.err(format!("invalid literal {}", v)))
    }
}

fn parse_statement(
    line: &str,
    lineno: usize,
    program: &mut GroundProgram,
    minimize: &mut BTreeMap<i64, Vec<(Lit, i64)>>,
) -> Result<(), AspifError> {
    let mut t = Toks::new(line, lineno);
    let kind = t.next_int()?;
    match kind {
        1 => {
            let rule = parse_rule(&mut t)?;
            register_rule(program, &rule);
            program.rules.push(rule);
            t.finish()
        }
        2 => {
            let prio = t.next_int()?;
            let n = t.next_int()?;
            let entry = minimize.entry(prio).or_default();
            for _ in 0..n {
                let l = t.next_lit()?;
                let w = t.next_int()?;
                program.register_atom(l.atom);
                entry.push((l, w));
            }
            t.finish()
        }
        4 => {
            let len = t.next_int()?;
            let len = usize::try_from(len).map_err(|_| t.err("negative string length"))?;
            let name = t.next_bytes(len)?.to_string();
            let n = t.next_int()?;
            match n {
                0 => program.shown_facts.push(name),
                1 => {
                    let l = t.next_lit()?;
                    if !l.positive {
                        return Err(t.err("negative output condition literal"));
                    }
                    program.register_atom(l.atom);
                    program.shows.insert(l.atom, name);
                }
                _ => {
                    return Err(AspifError::Unsupported {
                        line: lineno,
                        what: "output statement with multi-literal condition".into(),
                    })
                }
            }
            t.finish()
        }
        9 => parse_theory(&mut t, lineno, program),
        10 => Ok(()), // comment
        3 => Err(AspifError::Unsupported { line: lineno, what: "projection directive".into() }),
        5 => Err(AspifError::Unsupported { line: lineno, what: "external directive".into() }),
        6 => Err(AspifError::Unsupported { line: lineno, what: "assumption directive".into() }),
        7 => Err(AspifError::Unsupported { line: lineno, what: "heuristic directive".into() }),
        8 => Err(AspifError::Unsupported { line: lineno, what: "edge directive".into() }),
        _ => Err(t.err(format!("unknown statement type {}", kind))),
    }
}

fn parse_rule(t: &mut Toks) -> Result<Rule, AspifError> {
    let h = t.next_int()?;
    let m = t.next_int()?;
    let mut head_atoms = Vec::new();
    for _ in 0..m {
        head_atoms.push(t.next_atom()?);
    }
    head_atoms.sort_unstable();
    head_atoms.dedup();
    let head = match h {
        0 => HeadKind::Disjunctive(head_atoms),
        1 => HeadKind::Choice(head_atoms),
        _ => return Err(t.err(format!("unknown head type {}", h))),
    };

    let b = t.next_int()?;
    let body = match b {
        0 => {
            let n = t.next_int()?;
            let mut pos = Vec::new();
            let mut neg = Vec::new();
            for _ in 0..n {
                let l = t.next_lit()?;
                if l.positive {
                    pos.push(l.atom);
                } else {
                    neg.push(l.atom);
                }
            }
            pos.sort_unstable();
            pos.dedup();
            neg.sort_unstable();
            neg.dedup();
            BodyKind::Normal { pos, neg }
        }
        1 => {
            let mut bound = t.next_int()?;
            let n = t.next_int()?;
            let mut merged: BTreeMap<Lit, i64> = BTreeMap::new();
            for _ in 0..n {
                let mut l = t.next_lit()?;
                let mut w = t.next_int()?;
                // l <= sum(w*lit): a negative weight flips the literal and
                // raises the bound, so stored weights are non-negative.
                if w < 0 {
                    l = l.negated();
                    bound += -w;
                    w = -w;
                }
                *merged.entry(l).or_insert(0) += w;
            }
            let terms: Vec<(Lit, i64)> =
                merged.into_iter().filter(|(_, w)| *w != 0).collect();
            BodyKind::Weighted { bound, terms }
        }
        _ => return Err(t.err(format!("unknown body type {}", b))),
    };

    let rule = Rule { head, body };
    let pos = rule.pos_body();
    for a in rule.head_atoms() {
        if pos.contains(a) {
            return Err(AspifError::Tautology { line: t.line, atom: a.0 });
        }
    }
    Ok(rule)
}

fn register_rule(program: &mut GroundProgram, rule: &Rule) {
    for a in rule.head_atoms() {
        program.register_atom(*a);
    }
    match &rule.body {
        BodyKind::Normal { pos, neg } => {
            for a in pos.iter().chain(neg) {
                program.register_atom(*a);
            }
        }
        BodyKind::Weighted { terms, .. } => {
            for (l, _) in terms {
                program.register_atom(l.atom);
            }
        }
    }
}

fn parse_theory(
    t: &mut Toks,
    lineno: usize,
    program: &mut GroundProgram,
) -> Result<(), AspifError> {
    let sub = t.next_int()?;

    match sub {
        0 => {
            let id = theory_id(t)?;
            let v = t.next_int()?;
            program.theory.terms.insert(id, TheoryTerm::Num(v));
            t.finish()
        }
        1 => {
            let id = theory_id(t)?;
            let len = t.next_int()?;
            let len = usize::try_from(len).map_err(|_| t.err("negative string length"))?;
            let s = t.next_bytes(len)?.to_string();
            program.theory.terms.insert(id, TheoryTerm::Sym(s));
            t.finish()
        }
        2 => {
            let id = theory_id(t)?;
            let o = t.next_int()?;
            let kind = match o {
                -1 => CompoundKind::Tuple,
                -2 => CompoundKind::Set,
                -3 => CompoundKind::List,
                f if f >= 0 => CompoundKind::Func(
                    u32::try_from(f).map_err(|_| t.err("functor id out of range"))?,
                ),
                _ => return Err(t.err(format!("unknown compound kind {}", o))),
            };
            let n = t.next_int()?;
            let mut args = Vec::new();
            for _ in 0..n {
                args.push(theory_id(t)?);
            }
            program.theory.terms.insert(id, TheoryTerm::Compound { kind, args });
            t.finish()
        }
        4 => {
            let id = theory_id(t)?;
            let n = t.next_int()?;
            let mut terms = Vec::new();
            for _ in 0..n {
                terms.push(theory_id(t)?);
            }
            let m = t.next_int()?;
            let mut condition = Vec::new();
            for _ in 0..m {
                let l = t.next_lit()?;
                condition.push(l);
            }
            for l in &condition {
                program.atoms.insert(l.atom);
            }
            program.theory.elements.insert(id, TheoryElement { terms, condition });
            t.finish()
        }
        5 | 6 => {
            let atom_id = t.next_int()?;
            let atom = match atom_id {
                0 => None,
                v => {
                    let a = u32::try_from(v)
                        .ok()
                        .filter(|&a| a != 0)
                        .ok_or_else(|| t.err(format!("invalid theory atom id {}", v)))?;
                    Some(Atom(a))
                }
            };
            let name = theory_id(t)?;
            let n = t.next_int()?;
            let mut elements = Vec::new();
            for _ in 0..n {
                elements.push(theory_id(t)?);
            }
            let guard = if sub == 6 {
                let op = theory_id(t)?;
                let term = theory_id(t)?;
                Some((op, term))
            } else {
                None
            };
            if let Some(a) = atom {
                program.register_atom(a);
            }
            program.theory.atoms.push(TheoryAtomStmt { atom, name, elements, guard });
            t.finish()
        }
        _ => Err(AspifError::Unsupported {
            line: lineno,
            what: format!("theory statement subtype {}", sub),
        }),
    }
}

fn theory_id(t: &mut Toks) -> Result<u32, AspifError> {
    let v = t.next_int()?;
    u32::try_from(v).map_err(|_| t.err(format!("invalid theory id {}", v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_program() {
        let p = parse_aspif("asp 1 0 0\n0\n".as_bytes()).unwrap();
        assert!(p.rules.is_empty());
        assert!(p.atoms.is_empty());
        assert!(p.minimize.is_none());
    }

    #[test]
    fn single_fact() {
        // "a." grounds to a single disjunctive rule with one head atom and
        // an empty normal body, plus an output statement.
        let p = parse_aspif("asp 1 0 0\n1 0 1 1 0 0\n4 1 a 0\n0\n".as_bytes()).unwrap();
        assert_eq!(p.rules.len(), 1);
        assert_eq!(
            p.rules[0],
            Rule {
                head: HeadKind::Disjunctive(vec![Atom(1)]),
                body: BodyKind::Normal { pos: vec![], neg: vec![] },
            }
        );
        assert_eq!(p.shown_facts, vec!["a".to_string()]);
    }

    #[test]
    fn weight_body_negative_weight_normalized() {
        // 1 <= { a:2, not b:-3 }  ==>  4 <= { a:2, b:3 }
        let p = parse_aspif("asp 1 0 0\n1 0 1 3 1 1 2 1 2 -2 -3\n0\n".as_bytes()).unwrap();
        match &p.rules[0].body {
            BodyKind::Weighted { bound, terms } => {
                assert_eq!(*bound, 4);
                assert_eq!(terms, &vec![(Lit::pos(Atom(1)), 2), (Lit::pos(Atom(2)), 3)]);
            }
            other => panic!("expected weighted body, got {:?}", other),
        }
    }

    #[test]
    fn duplicate_weight_literals_merged() {
        let p = parse_aspif("asp 1 0 0\n1 0 1 3 1 2 2 1 1 1 1\n0\n".as_bytes()).unwrap();
        match &p.rules[0].body {
            BodyKind::Weighted { bound, terms } => {
                assert_eq!(*bound, 2);
                assert_eq!(terms, &vec![(Lit::pos(Atom(1)), 2)]);
            }
            other => panic!("expected weighted body, got {:?}", other),
        }
    }

    #[test]
    fn tautology_rejected() {
        let err = parse_aspif("asp 1 0 0\n1 0 1 1 0 1 1\n0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, AspifError::Tautology { atom: 1, .. }));
    }

    #[test]
    fn external_rejected() {
        let err = parse_aspif("asp 1 0 0\n5 1 0\n0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, AspifError::Unsupported { .. }));
    }

    #[test]
    fn missing_terminator_rejected() {
        let err = parse_aspif("asp 1 0 0\n1 0 0 0 0\n".as_bytes()).unwrap_err();
        assert!(matches!(err, AspifError::Syntax { .. }));
    }

    #[test]
    fn roundtrip_via_canonical_text() {
        let text = "asp 1 0 0\n\
                    1 1 2 1 2 0 1 3\n\
                    1 0 0 1 3 2 1 1 2 2\n\
                    1 0 1 3 0 1 -4\n\
                    2 0 2 1 2 -3 1\n\
                    4 1 a 1 1\n\
                    0\n";
        let p1 = parse_aspif(text.as_bytes()).unwrap();
        let p2 = parse_aspif(p1.to_aspif_text().as_bytes()).unwrap();
        assert_eq!(p1, p2);
    }
}
