//! Symbolic automaton descriptions: orbit declarations plus variable rules,
//! the text format parser, and the symbolic side-condition checks.

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AutomatonKind {
    Nofa,
    Rnna,
}

impl fmt::Display for AutomatonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutomatonKind::Nofa => write!(f, "nofa"),
            AutomatonKind::Rnna => write!(f, "rnna"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecl {
    pub id: String,
    pub arity: usize,
    pub is_final: bool,
}

/// The letter of a rule: a plain or binding occurrence of a rule variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleLetter {
    Free(String),
    Bar(String),
}

impl RuleLetter {
    pub fn var(&self) -> &str {
        match self {
            RuleLetter::Free(v) | RuleLetter::Bar(v) => v,
        }
    }

    pub fn is_bar(&self) -> bool {
        matches!(self, RuleLetter::Bar(_))
    }
}

/// One transition rule. Distinct variable symbols denote distinct atoms;
/// expansion instantiates them injectively over the pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub src_orbit: String,
    pub src_vars: Vec<String>,
    pub letter: RuleLetter,
    pub tgt_orbit: String,
    pub tgt_vars: Vec<String>,
}

impl Rule {
    /// All distinct variables of the rule, in order of first occurrence.
    pub fn vars(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        let all = self
            .src_vars
            .iter()
            .map(String::as_str)
            .chain(std::iter::once(self.letter.var()))
            .chain(self.tgt_vars.iter().map(String::as_str));
        for v in all {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonSpec {
    pub kind: AutomatonKind,
    pub name: String,
    pub orbits: Vec<OrbitDecl>,
    pub rules: Vec<Rule>,
}

impl AutomatonSpec {
    pub fn orbit(&self, id: &str) -> Option<&OrbitDecl> {
        self.orbits.iter().find(|o| o.id == id)
    }

    pub fn max_arity(&self) -> usize {
        self.orbits.iter().map(|o| o.arity).max().unwrap_or(0)
    }

    /// The structural lower bound on the pool: enough atoms to host every
    /// orbit tuple and to instantiate every rule injectively.
    pub fn min_pool(&self) -> usize {
        let rule_vars = self.rules.iter().map(|r| r.vars().len()).max().unwrap_or(0);
        self.max_arity().max(rule_vars).max(1)
    }

    /// Default pool size for exact bounded-depth language computation: one
    /// atom per word position, plus the largest register tuple, plus a spare
    /// fresh binder.
    pub fn auto_pool(&self, depth: usize) -> usize {
        self.min_pool().max(depth + self.max_arity() + 1)
    }
}

/// A named violation of the model side conditions, found either on the
/// symbolic description or on a concrete expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A plain-automaton rule uses a binding letter.
    NofaBarLetter { rule: usize },
    /// Finite branching up to renaming, condition (b): a variable of the
    /// letter or target occurs free of the source registers.
    RnnaConditionB { rule: usize, var: String },
    /// A concrete component is not closed under a pool transposition.
    NotClosed { component: &'static str, swap: (String, String), witness: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NofaBarLetter { rule } => {
                write!(f, "rule #{rule}: bar letter in a nofa rule")
            }
            Violation::RnnaConditionB { rule, var } => {
                write!(
                    f,
                    "rule #{rule}: RNNA condition (b) violated: variable `{var}` \
                     does not occur in the source state (unboundedly many transitions)"
                )
            }
            Violation::NotClosed { component, swap, witness } => {
                write!(
                    f,
                    "{component} not closed under the swap ({} {}): image of {witness} is missing",
                    swap.0, swap.1
                )
            }
        }
    }
}

/// Symbolic side conditions: rejects bar letters in NOFAs and enforces the
/// RNNA finite-branching condition (every letter or target variable comes
/// from the source registers, except that a bar letter may be fresh).
pub fn validate_spec(spec: &AutomatonSpec) -> Vec<Violation> {
    let mut out = Vec::new();
    for (i, rule) in spec.rules.iter().enumerate() {
        let src: BTreeSet<&str> = rule.src_vars.iter().map(|s| s.as_str()).collect();
        match spec.kind {
            AutomatonKind::Nofa => {
                if rule.letter.is_bar() {
                    out.push(Violation::NofaBarLetter { rule: i });
                }
            }
            AutomatonKind::Rnna => {
                let letter_var = rule.letter.var();
                if !rule.letter.is_bar() && !src.contains(letter_var) {
                    out.push(Violation::RnnaConditionB { rule: i, var: letter_var.to_string() });
                }
                for v in &rule.tgt_vars {
                    let allowed = src.contains(v.as_str())
                        || (rule.letter.is_bar() && v == rule.letter.var());
                    if !allowed {
                        out.push(Violation::RnnaConditionB { rule: i, var: v.clone() });
                    }
                }
            }
        }
    }
    out
}

/// A parse failure with its position in the input text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

struct Cursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Cursor<'a> {
        Cursor { text, bytes: text.as_bytes(), pos: 0, line }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.pos + 1, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && (self.bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len() {
            let c = self.bytes[self.pos] as char;
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start || (self.bytes[start] as char).is_ascii_digit() {
            Err(self.err("expected an identifier"))
        } else {
            Ok(&self.text[start..self.pos])
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    /// `qid` or `qid(v1,...,vk)`; the variable list must be non-repeating.
    fn state_term(&mut self) -> Result<(String, Vec<String>), ParseError> {
        let id = self.ident()?.to_string();
        let mut vars = Vec::new();
        if self.eat('(') {
            self.skip_ws();
            if !self.eat(')') {
                loop {
                    self.skip_ws();
                    let v = self.ident()?.to_string();
                    if vars.contains(&v) {
                        return Err(self.err(format!("repeated variable `{v}` in a state tuple")));
                    }
                    vars.push(v);
                    self.skip_ws();
                    if self.eat(')') {
                        break;
                    }
                    self.expect(',')?;
                }
            }
        }
        Ok((id, vars))
    }
}

/// Parses the automaton text format. One declaration per line, `#` starts a
/// comment:
///
/// ```text
/// nofa NAME | rnna NAME
/// state QID(v1,...,vk) [final]
/// trans QID(vars) -x-> QID(args)      plain letter
/// trans QID(vars) -|x-> QID(args)     binding letter
/// ```
///
/// Parsing checks structure only (syntax, arities, duplicate orbits); the
/// model side conditions live in [`validate_spec`].
pub fn parse_spec_unchecked(text: &str) -> Result<AutomatonSpec, ParseError> {
    let mut kind_and_name: Option<(AutomatonKind, String)> = None;
    let mut orbits: Vec<OrbitDecl> = Vec::new();
    let mut rules: Vec<Rule> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line, lineno + 1);
        cur.skip_ws();
        let keyword = cur.ident()?;
        cur.skip_ws();
        match keyword {
            "nofa" | "rnna" => {
                if kind_and_name.is_some() {
                    return Err(cur.err("duplicate automaton header"));
                }
                let kind =
                    if keyword == "nofa" { AutomatonKind::Nofa } else { AutomatonKind::Rnna };
                let name = cur.ident()?.to_string();
                kind_and_name = Some((kind, name));
            }
            "state" => {
                let (id, vars) = cur.state_term()?;
                cur.skip_ws();
                let is_final = if cur.at_end() {
                    false
                } else {
                    let word = cur.ident()?;
                    if word != "final" {
                        return Err(cur.err(format!("expected `final`, found `{word}`")));
                    }
                    true
                };
                if orbits.iter().any(|o| o.id == id) {
                    return Err(cur.err(format!("duplicate orbit `{id}`")));
                }
                orbits.push(OrbitDecl { id, arity: vars.len(), is_final });
            }
            "trans" => {
                let (src_orbit, src_vars) = cur.state_term()?;
                cur.skip_ws();
                cur.expect('-')?;
                let bar = cur.eat('|');
                let var = cur.ident()?.to_string();
                cur.expect('-')?;
                cur.expect('>')?;
                cur.skip_ws();
                let (tgt_orbit, tgt_vars) = cur.state_term()?;
                let letter = if bar { RuleLetter::Bar(var) } else { RuleLetter::Free(var) };
                rules.push(Rule { src_orbit, src_vars, letter, tgt_orbit, tgt_vars });
            }
            other => {
                return Err(cur.err(format!("unknown declaration `{other}`")));
            }
        }
        cur.skip_ws();
        if !cur.at_end() {
            return Err(cur.err("trailing input"));
        }
    }

    let (kind, name) = kind_and_name.ok_or(ParseError {
        line: 1,
        col: 1,
        msg: "missing `nofa NAME` or `rnna NAME` header".into(),
    })?;
    let spec = AutomatonSpec { kind, name, orbits, rules };

    // arity and declaration checks for every rule endpoint
    for (i, rule) in spec.rules.iter().enumerate() {
        for (id, vars) in [(&rule.src_orbit, &rule.src_vars), (&rule.tgt_orbit, &rule.tgt_vars)] {
            match spec.orbit(id) {
                None => {
                    return Err(ParseError {
                        line: 0,
                        col: 0,
                        msg: format!("rule #{i}: undeclared orbit `{id}`"),
                    })
                }
                Some(o) if o.arity != vars.len() => {
                    return Err(ParseError {
                        line: 0,
                        col: 0,
                        msg: format!(
                            "rule #{i}: orbit `{id}` has arity {}, used with {} arguments",
                            o.arity,
                            vars.len()
                        ),
                    })
                }
                _ => {}
            }
        }
    }
    Ok(spec)
}

/// Parse error wrapper distinguishing bad text from a well-formed
/// description that violates the model side conditions.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

/// Parses and validates in one step.
pub fn parse_spec(text: &str) -> Result<AutomatonSpec, SpecError> {
    let spec = parse_spec_unchecked(text)?;
    let violations = validate_spec(&spec);
    if violations.is_empty() {
        Ok(spec)
    } else {
        Err(SpecError::Invalid(violations))
    }
}
