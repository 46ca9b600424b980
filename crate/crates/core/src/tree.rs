//! Signed binary trees of pairings.
//!
//! A node `Node(σ, τ, L, R)` is the pairing `L^σ #^τ R` and evaluates to
//! `form(L, σ) · form(R, -τ)`, where `form(T, -)` is the involution of
//! `eval(T)`. A root sign selects which presentation of the whole tree is
//! read off, so single negative letters are reachable.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, ParseError, Result};
use crate::word::{is_identifier, GeneratorSet, PresentationClass, Sign, SignedWord};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairingTree {
    Leaf(usize),
    Node { sigma: Sign, tau: Sign, left: Box<PairingTree>, right: Box<PairingTree> },
}

impl PairingTree {
    pub fn leaf(gen: usize) -> Self {
        PairingTree::Leaf(gen)
    }

    pub fn node(sigma: Sign, tau: Sign, left: PairingTree, right: PairingTree) -> Self {
        PairingTree::Node { sigma, tau, left: Box::new(left), right: Box::new(right) }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            PairingTree::Leaf(_) => 1,
            PairingTree::Node { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }

    pub fn max_gen(&self) -> usize {
        match self {
            PairingTree::Leaf(g) => *g,
            PairingTree::Node { left, right, .. } => left.max_gen().max(right.max_gen()),
        }
    }

    pub fn check(&self, gens: &GeneratorSet) -> Result<()> {
        let max = self.max_gen();
        if max >= gens.rank() {
            return Err(Error::GeneratorOutOfRange { index: max, rank: gens.rank() });
        }
        Ok(())
    }

    /// Word of the tree read with a positive root.
    pub fn eval(&self) -> SignedWord {
        let mut letters = Vec::with_capacity(self.leaf_count());
        self.emit(Sign::Plus, &mut letters);
        SignedWord::from_letters(letters)
    }

    // Appends form(self, orient) without materializing intermediate words:
    // a negative orientation visits children in reverse with flipped forms.
    fn emit(&self, orient: Sign, out: &mut Vec<crate::word::SignedLetter>) {
        match self {
            PairingTree::Leaf(g) => out.push(crate::word::SignedLetter::new(*g, orient)),
            PairingTree::Node { sigma, tau, left, right } => match orient {
                Sign::Plus => {
                    left.emit(*sigma, out);
                    right.emit(-*tau, out);
                }
                Sign::Minus => {
                    right.emit(*tau, out);
                    left.emit(-*sigma, out);
                }
            },
        }
    }

    /// `Node(σ, τ, L, R) ↦ Node(τ, σ, R, L)`.
    pub fn flip(&self) -> Result<PairingTree> {
        match self {
            PairingTree::Leaf(_) => Err(Error::FlipLeaf),
            PairingTree::Node { sigma, tau, left, right } => {
                Ok(PairingTree::Node { sigma: *tau, tau: *sigma, left: right.clone(), right: left.clone() })
            }
        }
    }

    pub fn display<'a>(&'a self, gens: &'a GeneratorSet) -> TreeDisplay<'a> {
        TreeDisplay { gens, tree: self }
    }
}

/// A tree together with the sign selecting its presentation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootedPresentation {
    pub tree: PairingTree,
    pub root: Sign,
}

impl RootedPresentation {
    pub fn new(tree: PairingTree, root: Sign) -> Self {
        RootedPresentation { tree, root }
    }

    pub fn eval(&self) -> SignedWord {
        let mut letters = Vec::with_capacity(self.tree.leaf_count());
        self.tree.emit(self.root, &mut letters);
        SignedWord::from_letters(letters)
    }

    pub fn display<'a>(&'a self, gens: &'a GeneratorSet) -> RootedDisplay<'a> {
        RootedDisplay { gens, rooted: self }
    }
}

pub fn eval_tree(r: &RootedPresentation) -> SignedWord {
    r.eval()
}

pub fn flip(n: &PairingTree) -> Result<PairingTree> {
    n.flip()
}

/// Left comb whose evaluation is `w`. The innermost node carries the sign
/// of the first letter; a one-letter word uses the root sign instead.
pub fn word_to_tree(w: &SignedWord) -> Result<RootedPresentation> {
    let letters = w.letters();
    let Some(first) = letters.first() else {
        return Err(Error::EmptyWordTree);
    };
    if letters.len() == 1 {
        return Ok(RootedPresentation::new(PairingTree::Leaf(first.gen), first.sign));
    }
    let mut acc = PairingTree::node(
        first.sign,
        -letters[1].sign,
        PairingTree::Leaf(first.gen),
        PairingTree::Leaf(letters[1].gen),
    );
    for l in &letters[2..] {
        acc = PairingTree::node(Sign::Plus, -l.sign, acc, PairingTree::Leaf(l.gen));
    }
    Ok(RootedPresentation::new(acc, Sign::Plus))
}

/// Path from the root: `false` = left child, `true` = right child.
type Path = Vec<bool>;

fn internal_paths(t: &PairingTree, prefix: &mut Path, out: &mut Vec<Path>) {
    if let PairingTree::Node { left, right, .. } = t {
        out.push(prefix.clone());
        prefix.push(false);
        internal_paths(left, prefix, out);
        prefix.pop();
        prefix.push(true);
        internal_paths(right, prefix, out);
        prefix.pop();
    }
}

fn subtree_mut<'a>(t: &'a mut PairingTree, path: &[bool]) -> &'a mut PairingTree {
    match path.split_first() {
        None => t,
        Some((&dir, rest)) => match t {
            PairingTree::Node { left, right, .. } => subtree_mut(if dir { right } else { left }, rest),
            PairingTree::Leaf(_) => unreachable!("path leads through a leaf"),
        },
    }
}

/// Flip the node at `path` and compensate in the parent sign (or the root
/// sign) so the evaluated word is unchanged.
fn flip_move(r: &RootedPresentation, path: &[bool]) -> RootedPresentation {
    let mut out = r.clone();
    {
        let target = subtree_mut(&mut out.tree, path);
        *target = target.flip().expect("internal path");
    }
    match path.split_last() {
        None => out.root = -out.root,
        Some((&dir, parent_path)) => {
            if let PairingTree::Node { sigma, tau, .. } = subtree_mut(&mut out.tree, parent_path) {
                if dir {
                    *tau = -*tau;
                } else {
                    *sigma = -*sigma;
                }
            }
        }
    }
    out
}

fn is_plus_minus(sigma: Sign, tau: Sign) -> bool {
    sigma == Sign::Plus && tau == Sign::Minus
}

/// `(+-,(+-,A,B),C) ↔ (+-,A,(+-,B,C))` at the node, when the signs match.
fn reassociate(t: &PairingTree) -> Vec<PairingTree> {
    let mut out = Vec::new();
    if let PairingTree::Node { sigma, tau, left, right } = t {
        if is_plus_minus(*sigma, *tau) {
            if let PairingTree::Node { sigma: s2, tau: t2, left: a, right: b } = left.as_ref() {
                if is_plus_minus(*s2, *t2) {
                    out.push(PairingTree::node(
                        Sign::Plus,
                        Sign::Minus,
                        (**a).clone(),
                        PairingTree::node(Sign::Plus, Sign::Minus, (**b).clone(), (**right).clone()),
                    ));
                }
            }
            if let PairingTree::Node { sigma: s2, tau: t2, left: b, right: c } = right.as_ref() {
                if is_plus_minus(*s2, *t2) {
                    out.push(PairingTree::node(
                        Sign::Plus,
                        Sign::Minus,
                        PairingTree::node(Sign::Plus, Sign::Minus, (**left).clone(), (**b).clone()),
                        (**c).clone(),
                    ));
                }
            }
        }
    }
    out
}

/// Presentations reachable from `r` in one move.
pub fn moves(r: &RootedPresentation) -> Vec<RootedPresentation> {
    let mut paths = Vec::new();
    internal_paths(&r.tree, &mut Vec::new(), &mut paths);
    let mut out = Vec::with_capacity(paths.len() * 2);
    for path in &paths {
        out.push(flip_move(r, path));
        let mut probe = r.tree.clone();
        let sub = subtree_mut(&mut probe, path).clone();
        for replacement in reassociate(&sub) {
            let mut next = r.clone();
            *subtree_mut(&mut next.tree, path) = replacement;
            out.push(next);
        }
    }
    out
}

/// Closure of `{r}` under flips and sign-matched reassociation.
pub fn move_closure(r: &RootedPresentation, cap: usize) -> Result<BTreeSet<RootedPresentation>> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(r.clone());
    queue.push_back(r.clone());
    while let Some(cur) = queue.pop_front() {
        for next in moves(&cur) {
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(Error::ClosureCap { cap });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Class of the evaluated word, keeping the evaluation as canonical.
pub fn class_of_tree(r: &RootedPresentation) -> PresentationClass {
    PresentationClass::with_canonical(r.eval())
}

/// Every tree with exactly `leaves` leaves over `rank` generators, all sign
/// labels included.
pub fn trees_with_leaves(rank: usize, leaves: usize) -> Vec<PairingTree> {
    let mut table: Vec<Vec<PairingTree>> = vec![Vec::new(); leaves + 1];
    if leaves == 0 {
        return Vec::new();
    }
    table[1] = (0..rank).map(PairingTree::Leaf).collect();
    for n in 2..=leaves {
        let mut acc = Vec::new();
        for k in 1..n {
            for l in &table[k] {
                for r in &table[n - k] {
                    for s in Sign::BOTH {
                        for t in Sign::BOTH {
                            acc.push(PairingTree::node(s, t, l.clone(), r.clone()));
                        }
                    }
                }
            }
        }
        table[n] = acc;
    }
    table.swap_remove(leaves)
}

pub struct TreeDisplay<'a> {
    gens: &'a GeneratorSet,
    tree: &'a PairingTree,
}

impl fmt::Display for TreeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tree {
            PairingTree::Leaf(g) => write!(f, "leaf:{}", self.gens.name(*g)),
            PairingTree::Node { sigma, tau, left, right } => {
                write!(f, "(pair {sigma}{tau} {} {})", left.display(self.gens), right.display(self.gens))
            }
        }
    }
}

pub struct RootedDisplay<'a> {
    gens: &'a GeneratorSet,
    rooted: &'a RootedPresentation,
}

impl fmt::Display for RootedDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}]", self.rooted.root, self.rooted.tree.display(self.gens))
    }
}

/// Recursive-descent parser for the tree grammar
///
/// ```text
/// rooted := '[' sign tree ']' | tree
/// tree   := 'leaf:' name | '(' 'pair' sign sign tree tree ')'
/// ```
pub struct TreeParser<'a> {
    gens: &'a GeneratorSet,
    chars: Vec<char>,
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> TreeParser<'a> {
    pub fn new(gens: &'a GeneratorSet, text: &str) -> Self {
        TreeParser { gens, chars: text.chars().collect(), pos: 0, line: 1, col0: 1 }
    }

    pub(crate) fn at(mut self, line: usize, col0: usize) -> Self {
        self.line = line;
        self.col0 = col0;
        self
    }

    pub fn parse_rooted(mut self) -> Result<RootedPresentation> {
        self.skip_ws();
        let rooted = if self.peek() == Some('[') {
            self.pos += 1;
            self.skip_ws();
            let root = self.sign()?;
            let tree = self.tree()?;
            self.skip_ws();
            self.expect(']')?;
            RootedPresentation::new(tree, root)
        } else {
            RootedPresentation::new(self.tree()?, Sign::Plus)
        };
        self.skip_ws();
        if self.pos < self.chars.len() {
            return Err(self.error(&["end of input"]));
        }
        Ok(rooted)
    }

    fn tree(&mut self) -> Result<PairingTree> {
        self.skip_ws();
        if self.peek() == Some('(') {
            self.pos += 1;
            self.skip_ws();
            self.keyword("pair")?;
            if !self.peek().is_some_and(char::is_whitespace) {
                return Err(self.error(&["whitespace"]));
            }
            self.skip_ws();
            let sigma = self.sign()?;
            let tau = self.sign()?;
            let left = self.tree()?;
            let right = self.tree()?;
            self.skip_ws();
            self.expect(')')?;
            Ok(PairingTree::node(sigma, tau, left, right))
        } else if self.rest_starts_with("leaf:") {
            self.pos += 5;
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            let name: String = self.chars[start..self.pos].iter().collect();
            if !is_identifier(&name) {
                self.pos = start;
                return Err(self.error(&["<name>"]));
            }
            let gen = self.gens.index_of(&name).ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
            Ok(PairingTree::Leaf(gen))
        } else {
            Err(self.error(&["(", "leaf:<name>"]))
        }
    }

    fn sign(&mut self) -> Result<Sign> {
        match self.peek().and_then(Sign::from_symbol) {
            Some(s) => {
                self.pos += 1;
                Ok(s)
            }
            None => Err(self.error(&["+", "-"])),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        if self.rest_starts_with(kw) {
            self.pos += kw.chars().count();
            Ok(())
        } else {
            Err(self.error(&[kw]))
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            let s = c.to_string();
            Err(self.error(&[s.as_str()]))
        }
    }

    fn rest_starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(k, c)| self.chars.get(self.pos + k) == Some(&c))
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn error(&self, expected: &[&str]) -> Error {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".to_string(),
        };
        ParseError::new(self.line, self.col0 + self.pos, expected, found).into()
    }
}

pub fn parse_rooted(gens: &GeneratorSet, text: &str) -> Result<RootedPresentation> {
    TreeParser::new(gens, text).parse_rooted()
}
