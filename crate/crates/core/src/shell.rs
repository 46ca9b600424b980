//! Command front end: expression parsing, sessions and their persistence,
//! and the line-oriented command language.
//!
//! Exit codes: 0 on success, 1 on a domain error, 2 on a syntax error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, ParseError, Result};
use crate::plane::{self, FlaggedLoop, Point, PuncturedPlane};
use crate::suites;
use crate::tower::{self, AbelianVector, RelationLattice};
use crate::tree::{self, RootedPresentation, TreeParser, DEFAULT_CLOSURE_CAP};
use crate::word::{self, is_identifier, CanonicalPolicy, GeneratorSet, PresentationClass, Sign, SignedWord};

/// A parsed word or rooted tree literal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Word(SignedWord),
    Tree(RootedPresentation),
}

/// Trees start with `[`, `(` or `leaf:`; anything else is a word.
pub fn parse_expression(gens: &GeneratorSet, text: &str) -> Result<Expr> {
    parse_expression_at(gens, text, 1, 1)
}

fn parse_expression_at(gens: &GeneratorSet, text: &str, line: usize, col0: usize) -> Result<Expr> {
    let t = text.trim_start();
    if t.starts_with('[') || t.starts_with('(') || t.starts_with("leaf:") {
        Ok(Expr::Tree(TreeParser::new(gens, text).at(line, col0).parse_rooted()?))
    } else {
        Ok(Expr::Word(gens.parse_word_at(text, line, col0)?))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Word(SignedWord),
    Tree(RootedPresentation),
    Loop(FlaggedLoop),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn from_result(result: Result<String>) -> Self {
        match result {
            Ok(stdout) => Outcome { stdout, stderr: String::new(), code: 0 },
            Err(e) => Outcome {
                stdout: String::new(),
                stderr: format!("error: {e}\n"),
                code: if e.is_syntax() { 2 } else { 1 },
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    generators: GeneratorSet,
    policy: CanonicalPolicy,
    lattice: Option<RelationLattice>,
    plane: Option<PuncturedPlane>,
    bindings: BTreeMap<String, Value>,
    base_dir: PathBuf,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(GeneratorSet::alphabetic(3).expect("three generators"))
    }
}

fn syntax(expected: &[&str], found: &str) -> Error {
    ParseError::new(1, 1, expected, found).into()
}

fn parse_sign_pair(text: &str) -> Result<(Sign, Sign)> {
    let mut chars = text.chars();
    match (chars.next().and_then(Sign::from_symbol), chars.next().and_then(Sign::from_symbol), chars.next()) {
        (Some(s), Some(t), None) => Ok((s, t)),
        _ => Err(syntax(&["++", "+-", "-+", "--"], text)),
    }
}

/// Splits `--flag value` options off the positional arguments.
fn split_options<'a>(args: &'a [String], known: &[&str]) -> Result<(Vec<&'a str>, BTreeMap<&'a str, &'a str>)> {
    let mut positional = Vec::new();
    let mut options = BTreeMap::new();
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if let Some(name) = a.strip_prefix("--") {
            if !known.contains(&name) {
                return Err(syntax(known, a));
            }
            let value = it.next().ok_or_else(|| syntax(&["<value>"], "end of input"))?;
            options.insert(name, value.as_str());
        } else {
            positional.push(a.as_str());
        }
    }
    Ok((positional, options))
}

fn parse_count(text: &str) -> Result<u64> {
    text.parse().map_err(|_| syntax(&["<count>"], text))
}

impl Session {
    pub fn new(generators: GeneratorSet) -> Self {
        Session {
            generators,
            policy: CanonicalPolicy::LexLeast,
            lattice: None,
            plane: None,
            bindings: BTreeMap::new(),
            base_dir: PathBuf::from("."),
        }
    }

    /// Directory against which relative file paths are resolved.
    pub fn with_base_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.base_dir = dir.into();
        self
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.generators
    }

    pub fn policy(&self) -> &CanonicalPolicy {
        &self.policy
    }

    pub fn lattice(&self) -> Option<&RelationLattice> {
        self.lattice.as_ref()
    }

    pub fn plane(&self) -> Option<&PuncturedPlane> {
        self.plane.as_ref()
    }

    pub fn binding(&self, name: &str) -> Option<&Value> {
        self.bindings.get(name)
    }

    /// Runs one command; on failure the session is left untouched.
    pub fn run(&mut self, argv: &[String]) -> Outcome {
        let mut next = self.clone();
        let result = next.exec(argv);
        if result.is_ok() {
            *self = next;
        }
        Outcome::from_result(result)
    }

    fn resolve(&self, path: &str) -> PathBuf {
        let p = Path::new(path);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn word_arg(&self, text: &str) -> Result<SignedWord> {
        match self.bindings.get(text.trim()) {
            Some(Value::Word(w)) => return Ok(w.clone()),
            Some(Value::Tree(t)) => return Ok(t.eval()),
            Some(Value::Loop(_)) => return Err(Error::Domain(format!("`{text}` is a loop, not a word"))),
            None => {}
        }
        match parse_expression(&self.generators, text)? {
            Expr::Word(w) => Ok(w),
            Expr::Tree(t) => Ok(t.eval()),
        }
    }

    fn tree_arg(&self, text: &str) -> Result<RootedPresentation> {
        match self.bindings.get(text.trim()) {
            Some(Value::Tree(t)) => return Ok(t.clone()),
            Some(_) => return Err(Error::Domain(format!("`{text}` is not a tree"))),
            None => {}
        }
        tree::parse_rooted(&self.generators, text)
    }

    fn loop_arg(&self, name: &str) -> Result<&FlaggedLoop> {
        match self.bindings.get(name) {
            Some(Value::Loop(l)) => Ok(l),
            Some(_) => Err(Error::Domain(format!("`{name}` is not a loop"))),
            None => Err(Error::Domain(format!("no loop named `{name}`"))),
        }
    }

    fn plane_ref(&self) -> Result<&PuncturedPlane> {
        self.plane.as_ref().ok_or_else(|| Error::Domain("no plane loaded".into()))
    }

    fn show(&self, w: &SignedWord) -> String {
        self.generators.display(w).to_string()
    }

    fn show_class(&self, p: &PresentationClass) -> String {
        let mut s = format!("{} ~ {}", self.show(p.canonical()), self.show(p.anti()));
        if p.is_degenerate() {
            s.push_str(" (degenerate)");
        }
        s
    }

    fn class(&self, w: &SignedWord) -> PresentationClass {
        PresentationClass::of(w, &self.policy)
    }

    fn next_loop_name(&self) -> String {
        (1..).map(|k| format!("l{k}")).find(|n| !self.bindings.contains_key(n)).expect("unbounded names")
    }

    fn exec(&mut self, argv: &[String]) -> Result<String> {
        let Some((cmd, args)) = argv.split_first() else {
            return Err(syntax(&["<command>"], "end of input"));
        };
        let arity = |n: usize| -> Result<()> {
            if args.len() == n {
                Ok(())
            } else {
                Err(syntax(&[&format!("{n} argument(s) to `{cmd}`")], &format!("{} argument(s)", args.len())))
            }
        };
        match cmd.as_str() {
            "gens" => {
                let gens = GeneratorSet::new(args)?;
                let loops: BTreeMap<String, Value> = std::mem::take(&mut self.bindings)
                    .into_iter()
                    .filter(|(_, v)| matches!(v, Value::Loop(_)))
                    .collect();
                let mut fresh = Session::new(gens).with_base_dir(self.base_dir.clone());
                fresh.plane = self.plane.take();
                fresh.bindings = loops;
                *self = fresh;
                Ok(format!("generators: {}\n", self.generators.names().join(" ")))
            }
            "let" => {
                arity(2)?;
                let name = args[0].as_str();
                if !is_identifier(name) {
                    return Err(syntax(&["<binding name>"], name));
                }
                if self.generators.index_of(name).is_some() {
                    return Err(Error::Domain(format!("`{name}` is a generator name")));
                }
                let value = match self.bindings.get(args[1].trim()) {
                    Some(v) => v.clone(),
                    None => match parse_expression(&self.generators, &args[1])? {
                        Expr::Word(w) => Value::Word(w),
                        Expr::Tree(t) => Value::Tree(t),
                    },
                };
                let shown = self.show_value(&value);
                self.bindings.insert(name.to_string(), value);
                Ok(format!("{name} = {shown}\n"))
            }
            "policy" => match args.first().map(String::as_str) {
                Some("lex") if args.len() == 1 => {
                    self.policy = CanonicalPolicy::LexLeast;
                    Ok("policy: lex\n".into())
                }
                Some("prefer") if args.len() == 2 => {
                    let w = self.word_arg(&args[1])?;
                    self.policy.prefer(w.clone());
                    Ok(format!("canonical: {}\n", self.show_class(&self.class(&w))))
                }
                _ => Err(syntax(&["lex", "prefer <word>"], args.first().map_or("end of input", |s| s))),
            },
            "inv" => {
                arity(1)?;
                Ok(format!("{}\n", self.show(&self.word_arg(&args[0])?.involution())))
            }
            "class" => {
                arity(1)?;
                Ok(format!("{}\n", self.show_class(&self.class(&self.word_arg(&args[0])?))))
            }
            "pair" => {
                arity(3)?;
                let (s, t) = parse_sign_pair(&args[0])?;
                let a = self.class(&self.word_arg(&args[1])?);
                let b = self.class(&self.word_arg(&args[2])?);
                Ok(format!("{}\n", self.show(&word::pair(&a, s, t, &b))))
            }
            "eval" => {
                arity(1)?;
                Ok(format!("{}\n", self.show(&self.tree_arg(&args[0])?.eval())))
            }
            "word2tree" => {
                arity(1)?;
                let r = tree::word_to_tree(&self.word_arg(&args[0])?)?;
                Ok(format!("{}\n", r.display(&self.generators)))
            }
            "orbit" => {
                let (pos, opts) = split_options(args, &["cap"])?;
                let [text] = pos.as_slice() else {
                    return Err(syntax(&["orbit <tree> [--cap K]"], &args.join(" ")));
                };
                let cap =
                    opts.get("cap").map(|c| parse_count(c)).transpose()?.map_or(DEFAULT_CLOSURE_CAP, |c| c as usize);
                let start = self.tree_arg(text)?;
                let closure = tree::move_closure(&start, cap)?;
                let class = tree::class_of_tree(&start);
                let mut out = format!("orbit size {}; class {}\n", closure.len(), self.show_class(&class));
                for m in &closure {
                    writeln!(out, "  {} => {}", m.display(&self.generators), self.show(&m.eval())).unwrap();
                }
                Ok(out)
            }
            "ms" => {
                arity(1)?;
                let w = self.word_arg(&args[0])?;
                Ok(format!("{}\n", tower::multiset_quotient(&w, self.generators.rank()).display(&self.generators)))
            }
            "ab" => {
                arity(1)?;
                Ok(format!("{}\n", tower::abelianize(&self.word_arg(&args[0])?, self.generators.rank())))
            }
            "coset" => {
                arity(1)?;
                let v = AbelianVector::parse(&args[0])?;
                let free = RelationLattice::free(self.generators.rank());
                let lattice = self.lattice.as_ref().unwrap_or(&free);
                Ok(format!("{}\n", tower::reduce_coset(&v, lattice)?))
            }
            "tower" => {
                arity(1)?;
                let free = RelationLattice::free(self.generators.rank());
                let lattice = self.lattice.as_ref().unwrap_or(&free);
                let img = tower::tower_image(&self.word_arg(&args[0])?, lattice)?;
                Ok(format!("{} -> {} -> {}\n", img.multiset.display(&self.generators), img.vector, img.class))
            }
            "lattice" => match args.first().map(String::as_str) {
                Some("load") if args.len() == 2 => {
                    let text = std::fs::read_to_string(self.resolve(&args[1]))?;
                    let lattice = RelationLattice::parse(&text, self.generators.rank())?;
                    let basis: Vec<String> =
                        lattice.hermite_basis().iter().map(|r| AbelianVector(r.clone()).to_string()).collect();
                    let out = format!(
                        "lattice: {} rows; hermite basis {}\n",
                        lattice.rows().len(),
                        if basis.is_empty() { "(none)".into() } else { basis.join(" ") }
                    );
                    self.lattice = Some(lattice);
                    Ok(out)
                }
                _ => Err(syntax(&["load <file>"], args.first().map_or("end of input", |s| s))),
            },
            "plane" => match args.first().map(String::as_str) {
                Some("load") if args.len() == 2 => {
                    let text = std::fs::read_to_string(self.resolve(&args[1]))?;
                    let (plane, loops) = plane::parse_plane_file(&text)?;
                    self.bindings.retain(|_, v| !matches!(v, Value::Loop(_)));
                    let mut names = Vec::new();
                    for l in loops {
                        let name = self.next_loop_name();
                        self.bindings.insert(name.clone(), Value::Loop(l));
                        names.push(name);
                    }
                    let out = format!(
                        "plane: {} puncture(s); loops {}\n",
                        plane.punctures().len(),
                        if names.is_empty() { "(none)".into() } else { names.join(" ") }
                    );
                    self.plane = Some(plane);
                    Ok(out)
                }
                _ => Err(syntax(&["load <file>"], args.first().map_or("end of input", |s| s))),
            },
            "wind" => {
                arity(1)?;
                let profile = self.plane_ref()?.winding_profile(self.loop_arg(&args[0])?)?;
                Ok(format!("{}\n", AbelianVector(profile)))
            }
            "fgword" => {
                arity(1)?;
                Ok(format!("{}\n", plane::crossing_word(self.loop_arg(&args[0])?, self.plane_ref()?)?))
            }
            "sum" => {
                let (pos, opts) = split_options(args, &["base", "as"])?;
                let [signs, a, b] = pos.as_slice() else {
                    return Err(syntax(&["sum <s><t> <loop1> <loop2> --base (x,y)"], &args.join(" ")));
                };
                let (s, t) = parse_sign_pair(signs)?;
                let base = Point::parse(opts.get("base").ok_or_else(|| syntax(&["--base (x,y)"], "end of input"))?)?;
                let name = match opts.get("as") {
                    Some(n) if is_identifier(n) => n.to_string(),
                    Some(n) => return Err(syntax(&["<binding name>"], n)),
                    None => self.next_loop_name(),
                };
                let plane = self.plane_ref()?;
                let sum = plane::connected_sum(self.loop_arg(a)?, s, t, self.loop_arg(b)?, &base, plane)?;
                let line = sum.to_line();
                self.bindings.insert(name.clone(), Value::Loop(sum));
                Ok(format!("{name} = {line}\n"))
            }
            "oracle" => {
                let (pos, opts) = split_options(args, &["samples", "seed"])?;
                if pos.as_slice() != ["sweep"] {
                    return Err(syntax(&["sweep"], pos.first().copied().unwrap_or("end of input")));
                }
                let samples = parse_count(opts.get("samples").copied().unwrap_or("50"))? as usize;
                let seed = parse_count(opts.get("seed").ok_or_else(|| syntax(&["--seed S"], "end of input"))?)?;
                let plane = match &self.plane {
                    Some(p) if p.punctures().len() == 1 => p.clone(),
                    _ => PuncturedPlane::origin(),
                };
                let report = plane::verify_group_law(&plane, samples, seed)?;
                let out = format!("{report}\n");
                if report.all_passed() {
                    Ok(out)
                } else {
                    Err(Error::Domain(out))
                }
            }
            "check" => {
                arity(1)?;
                let reports = if args[0] == "all" {
                    suites::run_all(&self.generators, self.lattice.as_ref())?
                } else {
                    match suites::run_suite(&args[0], &self.generators, self.lattice.as_ref()) {
                        Some(r) => vec![r?],
                        None => {
                            let mut expected: Vec<&str> = suites::SUITES.to_vec();
                            expected.push("all");
                            return Err(syntax(&expected, &args[0]));
                        }
                    }
                };
                let mut out = String::new();
                for r in &reports {
                    writeln!(out, "{r}").unwrap();
                }
                if reports.iter().all(|r| r.passed()) {
                    Ok(out)
                } else {
                    Err(Error::Domain(out))
                }
            }
            "save" => {
                arity(1)?;
                std::fs::write(self.resolve(&args[0]), self.to_text())?;
                Ok(format!("saved {}\n", args[0]))
            }
            "load" => {
                arity(1)?;
                let text = std::fs::read_to_string(self.resolve(&args[0]))?;
                let base = self.base_dir.clone();
                *self = Session::from_text(&text)?.with_base_dir(base);
                Ok(format!("loaded {}\n", args[0]))
            }
            other => Err(syntax(
                &[
                    "gens",
                    "let",
                    "policy",
                    "inv",
                    "class",
                    "pair",
                    "eval",
                    "word2tree",
                    "orbit",
                    "ms",
                    "ab",
                    "coset",
                    "tower",
                    "lattice",
                    "plane",
                    "wind",
                    "fgword",
                    "sum",
                    "oracle",
                    "check",
                    "save",
                    "load",
                ],
                other,
            )),
        }
    }

    fn show_value(&self, v: &Value) -> String {
        match v {
            Value::Word(w) => self.show(w),
            Value::Tree(t) => t.display(&self.generators).to_string(),
            Value::Loop(l) => l.to_line(),
        }
    }

    /// Line-oriented session file. Every line mirrors a declaration grammar:
    /// `gens`, `prefer <word>`, `lattice` followed by `relation` rows, the
    /// plane's `punctures:` line, and `bind <name> word|tree|<loop line>`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# cycle-monoid session\n");
        writeln!(out, "gens {}", self.generators.names().join(" ")).unwrap();
        for w in self.policy.overrides() {
            writeln!(out, "prefer {}", self.show(w)).unwrap();
        }
        if let Some(l) = &self.lattice {
            out.push_str("lattice\n");
            for row in l.rows() {
                let row: Vec<String> = row.iter().map(i64::to_string).collect();
                writeln!(out, "relation {}", row.join(" ")).unwrap();
            }
        }
        if let Some(p) = &self.plane {
            writeln!(out, "{}", p.to_line()).unwrap();
        }
        for (name, v) in &self.bindings {
            match v {
                Value::Word(w) => writeln!(out, "bind {name} word {}", self.show(w)),
                Value::Tree(t) => writeln!(out, "bind {name} tree {}", t.display(&self.generators)),
                Value::Loop(l) => writeln!(out, "bind {name} {}", l.to_line()),
            }
            .unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Session> {
        let mut session: Option<Session> = None;
        let mut rows: Option<Vec<Vec<i64>>> = None;
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (kw, rest) = line.split_once(' ').unwrap_or((line, ""));
            let rest_col = kw.len() + 2;
            let err = |expected: &[&str], found: &str| -> Error { ParseError::new(lineno, 1, expected, found).into() };
            if kw == "gens" {
                if session.is_some() {
                    return Err(err(&["prefer", "lattice", "relation", "punctures:", "bind"], kw));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                session = Some(Session::new(GeneratorSet::new(&names)?));
                continue;
            }
            let Some(s) = session.as_mut() else {
                return Err(err(&["gens"], kw));
            };
            match kw {
                "prefer" => {
                    let w = s.generators.parse_word_at(rest, lineno, rest_col)?;
                    s.policy.prefer(w);
                }
                "lattice" => rows = Some(Vec::new()),
                "relation" => {
                    let Some(rows) = rows.as_mut() else {
                        return Err(err(&["lattice"], kw));
                    };
                    let row = rest
                        .split_whitespace()
                        .map(|t| {
                            t.parse::<i64>().map_err(|_| ParseError::new(lineno, rest_col, &["<integer>"], t).into())
                        })
                        .collect::<Result<Vec<i64>>>()?;
                    rows.push(row);
                }
                "punctures:" => s.plane = Some(plane::parse_punctures_line(line, lineno)?),
                "bind" => {
                    let (name, value) = rest.split_once(' ').unwrap_or((rest, ""));
                    let value_col = rest_col + name.len() + 1;
                    let (kind, body) = value.split_once(' ').unwrap_or((value, ""));
                    let body_col = value_col + kind.len() + 1;
                    let v = match kind {
                        "word" => Value::Word(s.generators.parse_word_at(body, lineno, body_col)?),
                        "tree" => {
                            Value::Tree(TreeParser::new(&s.generators, body).at(lineno, body_col).parse_rooted()?)
                        }
                        "loop" => Value::Loop(plane::parse_loop_line(value, lineno)?),
                        _ => return Err(ParseError::new(lineno, value_col, &["word", "tree", "loop"], kind).into()),
                    };
                    s.bindings.insert(name.to_string(), v);
                }
                _ => return Err(err(&["prefer", "lattice", "relation", "punctures:", "bind"], kw)),
            }
        }
        let mut s = session.ok_or_else(|| Error::from(ParseError::new(1, 1, &["gens"], "end of input")))?;
        if let Some(rows) = rows {
            s.lattice = Some(RelationLattice::new(s.generators.rank(), rows)?);
        }
        for v in s.bindings.values() {
            match v {
                Value::Word(w) => s.generators.check_word(w)?,
                Value::Tree(t) => t.tree.check(&s.generators)?,
                Value::Loop(l) => {
                    if let Some(p) = &s.plane {
                        p.check_loop(l)?;
                    }
                }
            }
        }
        Ok(s)
    }
}

/// Functional form of [`Session::run`].
pub fn run_command(mut session: Session, argv: &[String]) -> (Session, Outcome) {
    let outcome = session.run(argv);
    (session, outcome)
}

/// Splits a script line into arguments with shell-style quoting.
pub fn split_line(line: &str) -> Result<Vec<String>> {
    shlex::split(line).ok_or_else(|| syntax(&["closing quote"], line))
}

/// Result of running a batch script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transcript {
    pub text: String,
    pub first_failure: Option<i32>,
}

/// Runs each non-blank, non-comment line as one command. The transcript
/// echoes `> line`, then standard output, then any error text followed by
/// `[exit N]`.
pub fn run_script(session: &mut Session, script: &str) -> Transcript {
    let mut text = String::new();
    let mut first_failure = None;
    for raw in script.lines() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        writeln!(text, "> {line}").unwrap();
        let outcome = match split_line(line) {
            Ok(argv) => session.run(&argv),
            Err(e) => Outcome::from_result(Err(e)),
        };
        text.push_str(&outcome.stdout);
        if outcome.code != 0 {
            text.push_str(&outcome.stderr);
            writeln!(text, "[exit {}]", outcome.code).unwrap();
            first_failure.get_or_insert(outcome.code);
        }
    }
    Transcript { text, first_failure }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(parts: &[&str]) -> Vec<String> {
        parts.iter().map(|s| s.to_string()).collect()
    }

    fn run(s: &mut Session, parts: &[&str]) -> Outcome {
        s.run(&argv(parts))
    }

    #[test]
    fn parse_expression_examples() {
        let g = GeneratorSet::alphabetic(3).unwrap();
        assert_eq!(parse_expression(&g, "a+ b-").unwrap(), Expr::Word(g.parse_word("a+ b-").unwrap()));
        match parse_expression(&g, "[+ (pair +- leaf:a leaf:b)]").unwrap() {
            Expr::Tree(t) => assert_eq!(g.display(&t.eval()).to_string(), "a+ b+"),
            other => panic!("{other:?}"),
        }
        assert_eq!(parse_expression(&g, "a+ q-"), Err(Error::UnknownGenerator("q".into())));
    }

    #[test]
    fn command_examples() {
        let mut s = Session::default();
        let o = run(&mut s, &["inv", "a+ b+"]);
        assert_eq!((o.stdout.as_str(), o.code), ("b- a-\n", 0));
        assert_eq!(run(&mut s, &["ab", "a+ b- a+"]).stdout, "(2, -1, 0)\n");
        assert_eq!(run(&mut s, &["class", "b- a-"]).stdout, "a+ b+ ~ b- a-\n");
        assert_eq!(run(&mut s, &["class", "a+ a-"]).stdout, "a+ a- ~ a+ a- (degenerate)\n");
        assert_eq!(run(&mut s, &["pair", "++", "a+", "b+"]).stdout, "a+ b-\n");
        assert_eq!(run(&mut s, &["eval", "[- leaf:c]"]).stdout, "c-\n");
        assert_eq!(run(&mut s, &["word2tree", "a- b+"]).stdout, "[+ (pair -- leaf:a leaf:b)]\n");
    }

    #[test]
    fn exit_codes() {
        let mut s = Session::default();
        assert_eq!(run(&mut s, &["inv", "a+ q-"]).code, 1);
        assert_eq!(run(&mut s, &["inv", "a+ b"]).code, 2);
        assert_eq!(run(&mut s, &["frobnicate"]).code, 2);
        assert_eq!(run(&mut s, &["wind", "l1"]).code, 1);
        let o = run(&mut s, &["pair", "+x", "a+", "b+"]);
        assert_eq!(o.code, 2);
        assert!(o.stderr.starts_with("error: syntax error"));
        assert_eq!(run(&mut s, &["oracle", "sweep", "--samples", "3"]).code, 2);
    }

    #[test]
    fn failed_commands_leave_session_untouched() {
        let mut s = Session::default();
        run(&mut s, &["let", "w", "a+ b-"]);
        let before = s.clone();
        assert_eq!(run(&mut s, &["let", "v", "a+ zz-"]).code, 1);
        assert_eq!(run(&mut s, &["gens", "a", "a"]).code, 1);
        assert_eq!(s, before);
    }

    #[test]
    fn bindings_and_policy() {
        let mut s = Session::default();
        assert_eq!(run(&mut s, &["let", "t", "(pair +- leaf:a leaf:b)"]).stdout, "t = [+ (pair +- leaf:a leaf:b)]\n");
        assert_eq!(run(&mut s, &["inv", "t"]).stdout, "b- a-\n");
        assert_eq!(run(&mut s, &["let", "a", "b+"]).code, 1);
        assert_eq!(run(&mut s, &["policy", "prefer", "b- a-"]).stdout, "canonical: b- a- ~ a+ b+\n");
        // pair uses the policy's canonical form of each argument
        assert_eq!(run(&mut s, &["pair", "+-", "a+ b+", "c+"]).stdout, "b- a- c+\n");
        run(&mut s, &["policy", "lex"]);
        assert_eq!(run(&mut s, &["pair", "+-", "a+ b+", "c+"]).stdout, "a+ b+ c+\n");
    }

    #[test]
    fn session_text_round_trip() {
        let mut s = Session::default();
        run(&mut s, &["let", "w", "a+ b- c+"]);
        run(&mut s, &["let", "e", ""]);
        run(&mut s, &["let", "t", "[- (pair -+ leaf:b leaf:c)]"]);
        run(&mut s, &["policy", "prefer", "c- b+"]);
        s.lattice = Some(RelationLattice::new(3, vec![vec![2, 0, 0], vec![0, 3, 3]]).unwrap());
        s.plane = Some(
            PuncturedPlane::new(vec![Point::from_ints(0, 0), Point::new(plane::rat(3, 2), plane::int(1))]).unwrap(),
        );
        let l = FlaggedLoop::new(
            vec![
                Point::from_ints(1, -1),
                Point::from_ints(1, 1),
                Point::from_ints(-1, 1),
                Point::new(plane::rat(-1, 3), plane::int(-1)),
            ],
            2,
            plane::Traversal::Backward,
        )
        .unwrap();
        s.bindings.insert("l1".into(), Value::Loop(l));
        let text = s.to_text();
        let back = Session::from_text(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn session_file_errors() {
        match Session::from_text("gens a b\nbind w word a+ b\n") {
            Err(Error::Parse(e)) => assert_eq!((e.line, e.column), (2, 17)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Session::from_text("bind w word a+\n"), Err(Error::Parse(_))));
        assert!(matches!(Session::from_text("gens a\nrelation 1\n"), Err(Error::Parse(_))));
    }

    #[test]
    fn script_transcript() {
        let mut s = Session::default();
        let t = run_script(&mut s, "# comment\ninv \"a+ b+\"\n\nab \"a+ q-\"\ninv \"a+\n");
        assert_eq!(
            t.text,
            "> inv \"a+ b+\"\nb- a-\n> ab \"a+ q-\"\nerror: unknown generator `q`\n[exit 1]\n> inv \"a+\nerror: syntax error at 1:1: expected closing quote, found inv \"a+\n[exit 2]\n"
        );
        assert_eq!(t.first_failure, Some(1));
    }
}
