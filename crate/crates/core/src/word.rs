//! The free monoid on signed generators `c_i^+`, `c_i^-`.
//!
//! Words are stored as sequences of generator indices with signs; they are
//! interpreted against a [`GeneratorSet`] only for parsing, printing and
//! validation. The involution reverses a word and flips every sign, and a
//! [`PresentationClass`] is one fiber `{w, inv(w)}` together with the member
//! chosen as canonical.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Neg;

use crate::error::{Error, ParseError, Result};

/// Orientation component `+` or `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn negate(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self.negate()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// Ordered list of generator names `c_1 … c_N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    names: Vec<String>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GeneratorSet {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::Generators("at least one generator is required".into()));
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::Generators(format!("`{name}` is not an identifier")));
            }
            if out.iter().any(|n| n == name) {
                return Err(Error::Generators(format!("duplicate generator `{name}`")));
            }
            out.push(name.to_string());
        }
        Ok(GeneratorSet { names: out })
    }

    /// Generators named `a`, `b`, `c`, … (then `g27`, `g28`, … past `z`).
    pub fn alphabetic(rank: usize) -> Result<Self> {
        let names: Vec<String> = (0..rank)
            .map(|i| if i < 26 { ((b'a' + i as u8) as char).to_string() } else { format!("g{}", i + 1) })
            .collect();
        GeneratorSet::new(&names)
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn check_word(&self, w: &SignedWord) -> Result<()> {
        match w.letters.iter().find(|l| l.gen >= self.rank()) {
            Some(l) => Err(Error::GeneratorOutOfRange { index: l.gen, rank: self.rank() }),
            None => Ok(()),
        }
    }

    pub fn letter(&self, name: &str, sign: Sign) -> Result<SignedLetter> {
        self.index_of(name)
            .map(|gen| SignedLetter { gen, sign })
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Parses the word grammar: whitespace-separated `<name>+` / `<name>-`
    /// tokens. The empty string (or `ε`) is the identity.
    pub fn parse_word(&self, text: &str) -> Result<SignedWord> {
        self.parse_word_at(text, 1, 1)
    }

    pub(crate) fn parse_word_at(&self, text: &str, line: usize, col0: usize) -> Result<SignedWord> {
        let mut letters = Vec::new();
        let trimmed = text.trim();
        if trimmed == "ε" {
            return Ok(SignedWord::empty());
        }
        for (offset, token) in tokens_with_offsets(text) {
            let column = col0 + text[..offset].chars().count();
            let chars: Vec<char> = token.chars().collect();
            let name_len = chars
                .iter()
                .enumerate()
                .take_while(|&(i, c)| c.is_ascii_alphabetic() || (i > 0 && (c.is_ascii_alphanumeric() || *c == '_')))
                .count();
            let found = |i: usize| chars.get(i).map_or("end of token".to_string(), |c| format!("`{c}`"));
            if name_len == 0 {
                return Err(ParseError::new(line, column, &["<name>+", "<name>-"], found(0)).into());
            }
            let Some(sign) = chars.get(name_len).copied().and_then(Sign::from_symbol) else {
                return Err(ParseError::new(line, column + name_len, &["+", "-"], found(name_len)).into());
            };
            if name_len + 1 < chars.len() {
                return Err(ParseError::new(line, column + name_len + 1, &["whitespace"], found(name_len + 1)).into());
            }
            let name: String = chars[..name_len].iter().collect();
            letters.push(self.letter(&name, sign)?);
        }
        Ok(SignedWord { letters })
    }

    pub fn display<'a>(&'a self, w: &'a SignedWord) -> WordDisplay<'a> {
        WordDisplay { gens: self, word: w }
    }
}

fn tokens_with_offsets(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split_whitespace().map(move |tok| (tok.as_ptr() as usize - text.as_ptr() as usize, tok))
}

/// A letter `c_i^σ`; `gen` is the zero-based generator index.
///
/// Letters order by generator index first, then `+` before `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedLetter {
    pub gen: usize,
    pub sign: Sign,
}

impl SignedLetter {
    pub fn new(gen: usize, sign: Sign) -> Self {
        SignedLetter { gen, sign }
    }

    pub fn flipped(self) -> Self {
        SignedLetter { gen: self.gen, sign: -self.sign }
    }
}

/// Element of the free monoid `<c_1^±, …, c_N^±>`. The empty word is the
/// identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedWord {
    letters: Vec<SignedLetter>,
}

impl SignedWord {
    pub fn empty() -> Self {
        SignedWord { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<SignedLetter>) -> Self {
        SignedWord { letters }
    }

    pub fn single(gen: usize, sign: Sign) -> Self {
        SignedWord { letters: vec![SignedLetter { gen, sign }] }
    }

    pub fn letters(&self) -> &[SignedLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index used plus one (0 for the empty word).
    pub fn min_rank(&self) -> usize {
        self.letters.iter().map(|l| l.gen + 1).max().unwrap_or(0)
    }

    pub fn concat(&self, other: &SignedWord) -> SignedWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        SignedWord { letters }
    }

    /// Reverse the word and flip every sign: `c_{i_n}^{-σ_n} … c_{i_1}^{-σ_1}`.
    pub fn involution(&self) -> SignedWord {
        SignedWord { letters: self.letters.iter().rev().map(|l| l.flipped()).collect() }
    }

    pub fn is_involution_fixed(&self) -> bool {
        let n = self.len();
        (0..n).all(|i| self.letters[i] == self.letters[n - 1 - i].flipped())
    }

    /// The alphabet automorphism `c_gen^+ ↔ c_gen^-`; it realizes a change of
    /// canonical sign for one generator.
    pub fn swap_generator_sign(&self, gen: usize) -> SignedWord {
        SignedWord { letters: self.letters.iter().map(|&l| if l.gen == gen { l.flipped() } else { l }).collect() }
    }

    /// Lexicographically least member of `{w, inv(w)}`; identifies the fiber.
    pub fn fiber_key(&self) -> SignedWord {
        let inv = self.involution();
        if inv < *self {
            inv
        } else {
            self.clone()
        }
    }
}

pub fn concat(u: &SignedWord, v: &SignedWord) -> SignedWord {
    u.concat(v)
}

pub fn involution(w: &SignedWord) -> SignedWord {
    w.involution()
}

pub struct WordDisplay<'a> {
    gens: &'a GeneratorSet,
    word: &'a SignedWord,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "ε");
        }
        for (i, l) in self.word.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", self.gens.name(l.gen), l.sign)?;
        }
        Ok(())
    }
}

/// Rule selecting which member of `{w, inv(w)}` is canonical.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum CanonicalPolicy {
    /// Lexicographically least under (generator index, then `+` before `-`).
    #[default]
    LexLeast,
    /// Per-fiber overrides keyed by [`SignedWord::fiber_key`]; fibers without
    /// an override fall back to lex-least.
    Explicit(BTreeMap<SignedWord, SignedWord>),
}

impl CanonicalPolicy {
    pub fn choose(&self, w: &SignedWord) -> SignedWord {
        let key = w.fiber_key();
        match self {
            CanonicalPolicy::LexLeast => key,
            CanonicalPolicy::Explicit(overrides) => overrides.get(&key).cloned().unwrap_or(key),
        }
    }

    /// Declare `w` canonical for its fiber.
    pub fn prefer(&mut self, w: SignedWord) {
        if let CanonicalPolicy::LexLeast = self {
            *self = CanonicalPolicy::Explicit(BTreeMap::new());
        }
        if let CanonicalPolicy::Explicit(overrides) = self {
            overrides.insert(w.fiber_key(), w);
        }
    }

    pub fn overrides(&self) -> impl Iterator<Item = &SignedWord> {
        let map = match self {
            CanonicalPolicy::LexLeast => None,
            CanonicalPolicy::Explicit(m) => Some(m),
        };
        map.into_iter().flat_map(|m| m.values())
    }
}

/// The fiber `{canonical, anti}` of the double covering, with a chosen
/// section. Equality ignores the choice.
#[derive(Debug, Clone)]
pub struct PresentationClass {
    canonical: SignedWord,
    anti: SignedWord,
}

impl PresentationClass {
    /// Class of `w` with the member picked by `policy`.
    pub fn of(w: &SignedWord, policy: &CanonicalPolicy) -> Self {
        PresentationClass::with_canonical(policy.choose(w))
    }

    /// Class of `w` keeping `w` itself as the canonical presentation.
    pub fn with_canonical(w: SignedWord) -> Self {
        let anti = w.involution();
        PresentationClass { canonical: w, anti }
    }

    /// Class of the generator `c_gen`, canonically `c_gen^+`.
    pub fn generator(gen: usize) -> Self {
        PresentationClass::with_canonical(SignedWord::single(gen, Sign::Plus))
    }

    pub fn canonical(&self) -> &SignedWord {
        &self.canonical
    }

    pub fn anti(&self) -> &SignedWord {
        &self.anti
    }

    /// The fiber has a single member (`w = inv(w)`).
    pub fn is_degenerate(&self) -> bool {
        self.canonical == self.anti
    }

    pub fn signed_form(&self, sign: Sign) -> &SignedWord {
        match sign {
            Sign::Plus => &self.canonical,
            Sign::Minus => &self.anti,
        }
    }

    pub fn contains(&self, w: &SignedWord) -> bool {
        *w == self.canonical || *w == self.anti
    }

    fn key(&self) -> &SignedWord {
        std::cmp::min(&self.canonical, &self.anti)
    }
}

impl PartialEq for PresentationClass {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for PresentationClass {}

impl Hash for PresentationClass {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl PartialOrd for PresentationClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PresentationClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(other.key())
    }
}

pub fn class_of(w: &SignedWord, policy: &CanonicalPolicy) -> PresentationClass {
    PresentationClass::of(w, policy)
}

pub fn signed_form(p: &PresentationClass, sign: Sign) -> SignedWord {
    p.signed_form(sign).clone()
}

/// One presentation of `[a]^σ #^τ [b]`, namely `a^σ b^{-τ}`.
pub fn pair(a: &PresentationClass, sigma: Sign, tau: Sign, b: &PresentationClass) -> SignedWord {
    a.signed_form(sigma).concat(b.signed_form(-tau))
}

/// The product class of a pairing, keeping the computed word as canonical.
pub fn pair_class(a: &PresentationClass, sigma: Sign, tau: Sign, b: &PresentationClass) -> PresentationClass {
    PresentationClass::with_canonical(pair(a, sigma, tau, b))
}

/// `a^σ #^τ b ≡ b^τ #^σ a` at the level of presentation classes.
pub fn check_commutation_law(a: &PresentationClass, sigma: Sign, tau: Sign, b: &PresentationClass) -> bool {
    let lhs = PresentationClass::with_canonical(pair(a, sigma, tau, b));
    let rhs = PresentationClass::with_canonical(pair(b, tau, sigma, a));
    lhs == rhs
}

/// All words over `rank` generators of length at most `max_len`, shortest
/// first, each length in lexicographic order.
pub fn words_up_to(rank: usize, max_len: usize) -> Vec<SignedWord> {
    let alphabet: Vec<SignedLetter> =
        (0..rank).flat_map(|gen| Sign::BOTH.map(|sign| SignedLetter { gen, sign })).collect();
    let mut out = vec![SignedWord::empty()];
    let mut layer = vec![SignedWord::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for &l in &alphabet {
                let mut letters = w.letters.clone();
                letters.push(l);
                next.push(SignedWord { letters });
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gens() -> GeneratorSet {
        GeneratorSet::new(&["a", "b", "c"]).unwrap()
    }

    fn w(s: &str) -> SignedWord {
        gens().parse_word(s).unwrap()
    }

    fn show(x: &SignedWord) -> String {
        gens().display(x).to_string()
    }

    #[test]
    fn generator_set_rejects_bad_names() {
        assert!(GeneratorSet::new::<&str>(&[]).is_err());
        assert!(GeneratorSet::new(&["a", "a"]).is_err());
        assert!(GeneratorSet::new(&["1a"]).is_err());
        assert!(GeneratorSet::new(&["a-b"]).is_err());
        assert!(GeneratorSet::new(&["x_1", "Y2"]).is_ok());
    }

    #[test]
    fn concat_examples() {
        assert_eq!(show(&concat(&w("a+"), &w("b-"))), "a+ b-");
        assert_eq!(concat(&SignedWord::empty(), &w("a+ c-")), w("a+ c-"));
        assert_eq!(concat(&w("a+ b+"), &w("c-")), concat(&w("a+"), &w("b+ c-")));
    }

    #[test]
    fn involution_examples() {
        assert_eq!(show(&involution(&w("a+ b+"))), "b- a-");
        assert_eq!(involution(&SignedWord::empty()), SignedWord::empty());
        assert_eq!(show(&involution(&w("a- b+ c-"))), "c+ b- a+");
    }

    #[test]
    fn class_of_examples() {
        let p = class_of(&w("b- a-"), &CanonicalPolicy::LexLeast);
        assert_eq!(show(p.canonical()), "a+ b+");
        assert_eq!(show(p.anti()), "b- a-");
        assert!(!p.is_degenerate());

        let p = class_of(&w("a+"), &CanonicalPolicy::LexLeast);
        assert_eq!(show(p.canonical()), "a+");
        assert_eq!(show(p.anti()), "a-");

        let p = class_of(&w("a+ a-"), &CanonicalPolicy::LexLeast);
        assert_eq!(p.canonical(), p.anti());
        assert!(p.is_degenerate());
        assert!(w("a+ a-").is_involution_fixed());
    }

    #[test]
    fn signed_form_examples() {
        let a = PresentationClass::generator(0);
        assert_eq!(show(&signed_form(&a, Sign::Plus)), "a+");
        assert_eq!(show(&signed_form(&a, Sign::Minus)), "a-");
        let ab = class_of(&w("a+ b+"), &CanonicalPolicy::LexLeast);
        assert_eq!(show(&signed_form(&ab, Sign::Minus)), "b- a-");
    }

    #[test]
    fn the_four_pairings() {
        let a = PresentationClass::generator(0);
        let b = PresentationClass::generator(1);
        use Sign::{Minus as M, Plus as P};
        assert_eq!(show(&pair(&a, P, M, &b)), "a+ b+");
        assert_eq!(show(&pair(&a, M, P, &b)), "a- b-");
        assert_eq!(show(&pair(&a, P, P, &b)), "a+ b-");
        assert_eq!(show(&pair(&a, M, M, &b)), "a- b+");
        // each has its second presentation from the flipped pairing
        assert_eq!(show(&pair(&b, M, P, &a)), "b- a-");
        assert_eq!(show(&pair(&b, P, M, &a)), "b+ a+");
        assert_eq!(show(&pair(&b, P, P, &a)), "b+ a-");
        assert_eq!(show(&pair(&b, M, M, &a)), "b- a+");
    }

    #[test]
    fn commutation_laws_hold_for_all_generator_pairs() {
        for i in 0..3 {
            for j in 0..3 {
                for s in Sign::BOTH {
                    for t in Sign::BOTH {
                        let a = PresentationClass::generator(i);
                        let b = PresentationClass::generator(j);
                        assert!(check_commutation_law(&a, s, t, &b), "{i} {j} {s}{t}");
                    }
                }
            }
        }
    }

    #[test]
    fn mixed_sign_pairings_are_distinct_classes() {
        // a^+ #^- b and a^- #^+ b land in different fibers
        let a = PresentationClass::generator(0);
        let b = PresentationClass::generator(1);
        let pm = pair_class(&a, Sign::Plus, Sign::Minus, &b);
        let mp = pair_class(&a, Sign::Minus, Sign::Plus, &b);
        assert_ne!(pm, mp);
        assert_eq!(show(mp.canonical()), "a- b-");
        assert!(mp.contains(&w("b+ a+")));
    }

    #[test]
    fn explicit_policy_overrides_lex() {
        let mut policy = CanonicalPolicy::LexLeast;
        policy.prefer(w("b- a-"));
        assert_eq!(show(class_of(&w("a+ b+"), &policy).canonical()), "b- a-");
        assert_eq!(show(class_of(&w("c+"), &policy).canonical()), "c+");
        // equality ignores the section
        assert_eq!(class_of(&w("a+ b+"), &policy), class_of(&w("a+ b+"), &CanonicalPolicy::LexLeast));
    }

    #[test]
    fn parse_errors() {
        let g = gens();
        assert_eq!(g.parse_word("a+ q-"), Err(Error::UnknownGenerator("q".into())));
        match g.parse_word("a+ b") {
            Err(Error::Parse(e)) => {
                assert_eq!((e.line, e.column), (1, 5));
                assert_eq!(e.expected, vec!["+", "-"]);
            }
            other => panic!("{other:?}"),
        }
        let column = |text: &str| match g.parse_word(text) {
            Err(Error::Parse(e)) => (e.column, e.found),
            other => panic!("{other:?}"),
        };
        assert_eq!(column("a* b+"), (2, "`*`".to_string()));
        assert_eq!(column("a+ b+-"), (6, "`-`".to_string()));
        assert_eq!(column("a+  +b"), (5, "`+`".to_string()));
        assert_eq!(g.parse_word("   "), Ok(SignedWord::empty()));
        assert_eq!(g.parse_word("ε"), Ok(SignedWord::empty()));
    }

    #[test]
    fn enumeration_counts() {
        // 1 + 6 + 36 + 216
        assert_eq!(words_up_to(3, 3).len(), 259);
        assert_eq!(words_up_to(3, 4).len(), 259 + 1296);
    }
}
