//! Flagged polygonal loops in the plane minus finitely many punctures.
//!
//! All coordinates are exact rationals. Winding numbers come from
//! quadrant transitions around the puncture; free-group words come from
//! signed crossings of each puncture's downward vertical ray. The two are
//! independent computations and agree on exponent sums.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, ParseError, Result};
use crate::word::Sign;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Self {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point { x: int(x), y: int(y) }
    }

    pub fn offset(&self, dx: &Rational, dy: &Rational) -> Point {
        Point { x: &self.x + dx, y: &self.y + dy }
    }

    /// Parses `(x,y)` with integer or `p/q` coordinates.
    pub fn parse(text: &str) -> Result<Point> {
        let pts = parse_points(text, 1)?;
        match <[Point; 1]>::try_from(pts) {
            Ok([p]) => Ok(p),
            Err(_) => Err(ParseError::new(1, 1, &["(x,y)"], text).into()),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// `(b - a) × (c - a)`.
fn orient(a: &Point, b: &Point, c: &Point) -> Rational {
    (&b.x - &a.x) * (&c.y - &a.y) - (&b.y - &a.y) * (&c.x - &a.x)
}

/// Whether `p` lies on the closed segment `ab`.
pub fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    if !orient(a, b, p).is_zero() {
        return false;
    }
    let dot = (&p.x - &a.x) * (&p.x - &b.x) + (&p.y - &a.y) * (&p.y - &b.y);
    !dot.is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PuncturedPlane {
    punctures: Vec<Point>,
}

impl PuncturedPlane {
    pub fn new(punctures: Vec<Point>) -> Result<Self> {
        for (i, p) in punctures.iter().enumerate() {
            for q in &punctures[..i] {
                if p == q {
                    return Err(Error::Plane(format!("duplicate puncture {p}")));
                }
                if p.x == q.x {
                    return Err(Error::Plane(format!("punctures {q} and {p} share an x-coordinate")));
                }
            }
        }
        Ok(PuncturedPlane { punctures })
    }

    pub fn origin() -> Self {
        PuncturedPlane { punctures: vec![Point::from_ints(0, 0)] }
    }

    pub fn punctures(&self) -> &[Point] {
        &self.punctures
    }

    /// Rejects loops that meet a puncture. Returns the 1-based index of the
    /// first puncture touched.
    pub fn check_loop(&self, l: &FlaggedLoop) -> Result<()> {
        for (j, p) in self.punctures.iter().enumerate() {
            if l.touches(p) {
                return Err(Error::TouchesPuncture(j + 1));
            }
        }
        Ok(())
    }

    pub fn winding_profile(&self, l: &FlaggedLoop) -> Result<Vec<i64>> {
        self.punctures.iter().map(|p| winding_number(l, p)).collect()
    }

    pub fn to_line(&self) -> String {
        let pts: Vec<String> = self.punctures.iter().map(Point::to_string).collect();
        format!("punctures: {}", pts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Traversal {
    Forward,
    Backward,
}

impl Traversal {
    pub fn reversed(self) -> Traversal {
        match self {
            Traversal::Forward => Traversal::Backward,
            Traversal::Backward => Traversal::Forward,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Traversal::Forward => 'F',
            Traversal::Backward => 'B',
        }
    }
}

/// Closed polygon with a marked vertex (the point of the flag) and the
/// direction in which the loop leaves it (the oriented arc of the flag).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlaggedLoop {
    vertices: Vec<Point>,
    flag: usize,
    traversal: Traversal,
}

impl FlaggedLoop {
    pub fn new(vertices: Vec<Point>, flag: usize, traversal: Traversal) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::Loop(format!("need at least 3 vertices, got {n}")));
        }
        if flag >= n {
            return Err(Error::Loop(format!("flag index {flag} out of range for {n} vertices")));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(Error::Loop(format!("consecutive vertices {i} and {} coincide", (i + 1) % n)));
            }
        }
        Ok(FlaggedLoop { vertices, flag, traversal })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn flag(&self) -> usize {
        self.flag
    }

    pub fn flag_point(&self) -> &Point {
        &self.vertices[self.flag]
    }

    pub fn traversal(&self) -> Traversal {
        self.traversal
    }

    /// Same polygon traversed the other way.
    pub fn reversed(&self) -> FlaggedLoop {
        FlaggedLoop { traversal: self.traversal.reversed(), ..self.clone() }
    }

    /// Vertices in traversal order, starting at the flag.
    pub fn traversal_sequence(&self) -> Vec<Point> {
        let n = self.vertices.len();
        (0..n)
            .map(|k| match self.traversal {
                Traversal::Forward => &self.vertices[(self.flag + k) % n],
                Traversal::Backward => &self.vertices[(self.flag + n - k) % n],
            })
            .cloned()
            .collect()
    }

    fn edges(&self) -> impl Iterator<Item = (&Point, &Point)> {
        let n = self.vertices.len();
        (0..n).map(move |i| (&self.vertices[i], &self.vertices[(i + 1) % n]))
    }

    pub fn touches(&self, p: &Point) -> bool {
        self.edges().any(|(a, b)| on_segment(p, a, b))
    }

    /// `loop <flag> <F|B> (x,y) …`
    pub fn to_line(&self) -> String {
        let pts: Vec<String> = self.vertices.iter().map(Point::to_string).collect();
        format!("loop {} {} {}", self.flag, self.traversal.letter(), pts.join(" "))
    }
}

fn quadrant(dx: &Rational, dy: &Rational) -> u8 {
    if dx.is_positive() && !dy.is_negative() {
        0
    } else if !dx.is_positive() && dy.is_positive() {
        1
    } else if dx.is_negative() && !dy.is_positive() {
        2
    } else {
        3
    }
}

/// Winding number of `l` around `p`, measured along the loop's traversal.
///
/// Each edge contributes its quarter-turn count around `p`; a jump between
/// opposite quadrants is resolved by the sign of the cross product.
pub fn winding_number(l: &FlaggedLoop, p: &Point) -> Result<i64> {
    if l.touches(p) {
        return Err(Error::Domain(format!("loop touches {p}")));
    }
    let mut quarters: i64 = 0;
    for (a, b) in l.edges() {
        let qa = quadrant(&(&a.x - &p.x), &(&a.y - &p.y));
        let qb = quadrant(&(&b.x - &p.x), &(&b.y - &p.y));
        quarters += match (4 + qb - qa) % 4 {
            0 => 0,
            1 => 1,
            3 => -1,
            _ => {
                if orient(p, a, b).is_positive() {
                    2
                } else {
                    -2
                }
            }
        };
    }
    debug_assert_eq!(quarters % 4, 0);
    let forward = quarters / 4;
    Ok(match l.traversal {
        Traversal::Forward => forward,
        Traversal::Backward => -forward,
    })
}

/// Reroute `l` through `base` along a straight there-and-back corridor from
/// its flag vertex. The result is flagged at `base`.
pub fn normalize_flag(l: &FlaggedLoop, base: &Point, plane: &PuncturedPlane) -> Result<FlaggedLoop> {
    plane.check_loop(l)?;
    if let Some(j) = plane.punctures.iter().position(|p| p == base) {
        return Err(Error::TouchesPuncture(j + 1));
    }
    let n = l.vertices.len();
    if l.flag_point() == base {
        let vertices: Vec<Point> = (0..n).map(|k| l.vertices[(l.flag + k) % n].clone()).collect();
        return FlaggedLoop::new(vertices, 0, l.traversal);
    }
    if let Some(j) = plane.punctures.iter().position(|p| on_segment(p, l.flag_point(), base)) {
        return Err(Error::RerouteBlocked { base: base.to_string(), puncture: j + 1 });
    }
    let seq = l.traversal_sequence();
    let mut vertices = Vec::with_capacity(n + 2);
    vertices.push(base.clone());
    vertices.extend(seq.iter().cloned());
    vertices.push(seq[0].clone());
    FlaggedLoop::new(vertices, 0, Traversal::Forward)
}

fn oriented_from_base(l: &FlaggedLoop, sign: Sign) -> Vec<Point> {
    let seq = l.traversal_sequence();
    match sign {
        Sign::Plus => seq,
        Sign::Minus => std::iter::once(seq[0].clone()).chain(seq[1..].iter().rev().cloned()).collect(),
    }
}

/// `l1^σ #^τ l2` along the shared flag at `base`: `l1` with orientation `σ`,
/// then `l2` with orientation `-τ`.
pub fn connected_sum(
    l1: &FlaggedLoop,
    sigma: Sign,
    tau: Sign,
    l2: &FlaggedLoop,
    base: &Point,
    plane: &PuncturedPlane,
) -> Result<FlaggedLoop> {
    let n1 = normalize_flag(l1, base, plane)?;
    let n2 = normalize_flag(l2, base, plane)?;
    let mut vertices = oriented_from_base(&n1, sigma);
    vertices.extend(oriented_from_base(&n2, -tau));
    FlaggedLoop::new(vertices, 0, Traversal::Forward)
}

/// Reduced word in the free group on one generator `x_j` per puncture.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FreeWord {
    letters: Vec<(usize, i8)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    /// Builds a word from `(puncture, ±1)` letters and reduces it.
    pub fn from_letters<I: IntoIterator<Item = (usize, i8)>>(letters: I) -> Self {
        let mut w = FreeWord::default();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, (gen, exp): (usize, i8)) {
        debug_assert!(exp == 1 || exp == -1);
        if self.letters.last() == Some(&(gen, -exp)) {
            self.letters.pop();
        } else {
            self.letters.push((gen, exp));
        }
    }

    pub fn letters(&self) -> &[(usize, i8)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn product(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    /// Signed count of `x_gen`.
    pub fn exponent_sum(&self, gen: usize) -> i64 {
        self.letters.iter().filter(|l| l.0 == gen).map(|l| l.1 as i64).sum()
    }
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, &(g, e)) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if e > 0 {
                write!(f, "x{}", g + 1)?;
            } else {
                write!(f, "x{}^-1", g + 1)?;
            }
        }
        Ok(())
    }
}

/// Word of signed crossings of the punctures' downward rays, read from the
/// flag along the traversal and freely reduced. Crossing from left to right
/// below puncture `j` records `x_j`.
pub fn crossing_word(l: &FlaggedLoop, plane: &PuncturedPlane) -> Result<FreeWord> {
    plane.check_loop(l)?;
    for (vi, v) in l.vertices.iter().enumerate() {
        for (j, p) in plane.punctures.iter().enumerate() {
            if v.x == p.x && v.y < p.y {
                return Err(Error::PerturbationRequired { vertex: vi, puncture: j + 1 });
            }
        }
    }
    let seq = l.traversal_sequence();
    let n = seq.len();
    let mut word = FreeWord::identity();
    for i in 0..n {
        let (a, b) = (&seq[i], &seq[(i + 1) % n]);
        let mut hits: Vec<(Rational, (usize, i8))> = Vec::new();
        for (j, p) in plane.punctures.iter().enumerate() {
            let a_left = a.x < p.x;
            let b_left = b.x < p.x;
            if a_left == b_left {
                continue;
            }
            let t = (&p.x - &a.x) / (&b.x - &a.x);
            let y = &a.y + &t * (&b.y - &a.y);
            if y < p.y {
                hits.push((t, (j, if a_left { 1 } else { -1 })));
            }
        }
        hits.sort_by(|u, v| u.0.cmp(&v.0));
        for (_, letter) in hits {
            word.push(letter);
        }
    }
    Ok(word)
}

/// Text format: first line `punctures: (x,y) …`, then one `loop` line per
/// loop.
pub fn parse_plane_file(text: &str) -> Result<(PuncturedPlane, Vec<FlaggedLoop>)> {
    let mut plane = None;
    let mut loops = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let lineno = lineno + 1;
        if plane.is_none() {
            plane = Some(parse_punctures_line(line, lineno)?);
        } else {
            loops.push(parse_loop_line(line, lineno)?);
        }
    }
    let plane = plane.ok_or_else(|| ParseError::new(1, 1, &["punctures:"], "end of input"))?;
    for l in &loops {
        plane.check_loop(l)?;
    }
    Ok((plane, loops))
}

pub fn parse_punctures_line(line: &str, lineno: usize) -> Result<PuncturedPlane> {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let Some(rest) = trimmed.strip_prefix("punctures:") else {
        return Err(ParseError::new(lineno, lead + 1, &["punctures:"], first_token(trimmed)).into());
    };
    let offset = lead + "punctures:".len();
    PuncturedPlane::new(parse_points_at(rest, lineno, offset + 1)?)
}

pub fn parse_loop_line(line: &str, lineno: usize) -> Result<FlaggedLoop> {
    let trimmed = line.trim_start();
    let lead = line.len() - trimmed.len();
    let mut parts = trimmed.splitn(4, char::is_whitespace);
    let col = |s: &str| s.as_ptr() as usize - line.as_ptr() as usize + 1;
    let kw = parts.next().unwrap_or("");
    if kw != "loop" {
        return Err(ParseError::new(lineno, lead + 1, &["loop"], kw).into());
    }
    let flag_tok = parts.next().unwrap_or("");
    let flag: usize =
        flag_tok.parse().map_err(|_| ParseError::new(lineno, col(flag_tok), &["<flag index>"], flag_tok))?;
    let dir_tok = parts.next().unwrap_or("");
    let traversal = match dir_tok {
        "F" => Traversal::Forward,
        "B" => Traversal::Backward,
        _ => return Err(ParseError::new(lineno, col(dir_tok), &["F", "B"], dir_tok).into()),
    };
    let rest = parts.next().unwrap_or("");
    let vertices = parse_points_at(rest, lineno, col(rest))?;
    FlaggedLoop::new(vertices, flag, traversal)
}

fn first_token(s: &str) -> &str {
    s.split_whitespace().next().unwrap_or("end of input")
}

pub fn parse_points(text: &str, lineno: usize) -> Result<Vec<Point>> {
    parse_points_at(text, lineno, 1)
}

fn parse_points_at(text: &str, lineno: usize, col0: usize) -> Result<Vec<Point>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |i: usize, expected: &[&str]| -> Error {
        let found = chars.get(i).map_or("end of input".to_string(), |c| format!("`{}`", c.1));
        ParseError::new(lineno, col0 + i, expected, found).into()
    };
    loop {
        while chars.get(i).is_some_and(|c| c.1.is_whitespace()) {
            i += 1;
        }
        if i >= chars.len() {
            break;
        }
        if chars[i].1 != '(' {
            return Err(err(i, &["("]));
        }
        let close = match chars[i..].iter().position(|c| c.1 == ')') {
            Some(k) => i + k,
            None => return Err(err(chars.len(), &[")"])),
        };
        let inner_start = chars[i].0 + 1;
        let inner = &text[inner_start..chars[close].0];
        let Some((xs, ys)) = inner.split_once(',') else {
            return Err(err(close, &[","]));
        };
        let x = parse_rational(xs).ok_or_else(|| err(i + 1, &["<rational>"]))?;
        let y_col = i + 1 + xs.chars().count() + 1;
        let y = parse_rational(ys).ok_or_else(|| err(y_col, &["<rational>"]))?;
        out.push(Point::new(x, y));
        i = close + 1;
    }
    Ok(out)
}

/// Integer or `p/q`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Seeded loop generators for sweeps and tests.
pub mod sample {
    use super::*;

    /// Directions with slopes ±1/2 and ±2, in counterclockwise order. None
    /// is vertical, so spiral vertices never sit on a downward ray from the
    /// center.
    const DIRS: [(i64, i64); 8] = [(2, 1), (1, 2), (-1, 2), (-2, 1), (-2, -1), (-1, -2), (1, -2), (2, -1)];

    /// A polygon winding `winding` times around `center`, with random radii
    /// in `[2/3, 4]`, random flag and random traversal. The polygon's
    /// winding along its traversal equals `winding`.
    pub fn spiral<R: Rng>(rng: &mut R, center: &Point, winding: i64) -> FlaggedLoop {
        let turns = winding.unsigned_abs() as usize;
        let mut vertices = Vec::new();
        if turns == 0 {
            // a triangle off to one side of the center
            let shift = int(rng.gen_range(6..10));
            let c = center.offset(&shift, &rat(1, 5));
            for &(dx, dy) in &[DIRS[0], DIRS[3], DIRS[6]] {
                let r = rat(rng.gen_range(2..=12), 3);
                vertices.push(c.offset(&(&r * int(dx)), &(&r * int(dy))));
            }
        } else {
            for k in 0..8 * turns {
                let (dx, dy) = DIRS[k % 8];
                let r = rat(rng.gen_range(2..=12), 3);
                vertices.push(center.offset(&(&r * int(dx)), &(&r * int(dy))));
            }
        }
        let n = vertices.len();
        let counterclockwise = winding >= 0;
        let traversal = if rng.gen_bool(0.5) { Traversal::Forward } else { Traversal::Backward };
        // store the vertices so that traversal order runs the intended way
        if counterclockwise != (traversal == Traversal::Forward) {
            vertices.reverse();
        }
        let flag = rng.gen_range(0..n);
        FlaggedLoop::new(vertices, flag, traversal).expect("spiral vertices are distinct")
    }

    /// A small contractible square far from `center`.
    pub fn contractible<R: Rng>(rng: &mut R, center: &Point) -> FlaggedLoop {
        let c = center.offset(&int(rng.gen_range(-12..=-8)), &rat(rng.gen_range(1..5), 7));
        let s = rat(rng.gen_range(1..=3), 2);
        let neg = -s.clone();
        let vertices = vec![c.offset(&s, &s), c.offset(&neg, &s), c.offset(&neg, &neg), c.offset(&s, &neg)];
        let traversal = if rng.gen_bool(0.5) { Traversal::Forward } else { Traversal::Backward };
        FlaggedLoop::new(vertices, rng.gen_range(0..4), traversal).expect("square")
    }

    /// A random polygon with coordinates in `(k + 1/7) / 2`, retried until it
    /// avoids every puncture. Punctures with integer x-coordinates never
    /// share an x-coordinate with such a vertex.
    pub fn polygon<R: Rng>(
        rng: &mut R,
        plane: &PuncturedPlane,
        min_vertices: usize,
        max_vertices: usize,
    ) -> FlaggedLoop {
        loop {
            let n = rng.gen_range(min_vertices..=max_vertices);
            let coord = |rng: &mut R| rat(7 * rng.gen_range(-8..=8) + 1, 14);
            let vertices: Vec<Point> = (0..n).map(|_| Point::new(coord(rng), coord(rng))).collect();
            let traversal = if rng.gen_bool(0.5) { Traversal::Forward } else { Traversal::Backward };
            if let Ok(l) = FlaggedLoop::new(vertices, rng.gen_range(0..n), traversal) {
                if plane.check_loop(&l).is_ok() {
                    return l;
                }
            }
        }
    }
}

/// Outcome of one group-law check across the sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckTally {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupLawReport {
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckTally>,
    pub counterexamples: Vec<String>,
}

impl GroupLawReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.failed == 0) && self.counterexamples.is_empty()
    }
}

impl fmt::Display for GroupLawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "group law sweep: samples={} seed={}", self.samples, self.seed)?;
        for c in &self.checks {
            let status = if c.failed == 0 { "ok" } else { "FAIL" };
            writeln!(f, "  {:<13} {status} ({} passed, {} failed)", c.name, c.passed, c.failed)?;
        }
        for ce in &self.counterexamples {
            writeln!(f, "  counterexample: {ce}")?;
        }
        write!(f, "{}", if self.all_passed() { "all checks passed" } else { "FAILED" })
    }
}

/// Bases tried in order for connected sums around `center`. Spiral vertices
/// lie on rays of slope ±1/2 or ±2 from the center, none of which is
/// collinear with the first candidate.
fn base_candidates(center: &Point) -> Vec<Point> {
    [(1, 3, 5, 7), (-2, 5, 3, 11), (4, 9, -1, 13)]
        .iter()
        .map(|&(a, b, c, d)| center.offset(&rat(a, b), &rat(c, d)))
        .collect()
}

fn sum_any_base(
    l1: &FlaggedLoop,
    sigma: Sign,
    tau: Sign,
    l2: &FlaggedLoop,
    plane: &PuncturedPlane,
    bases: &[Point],
) -> Result<FlaggedLoop> {
    let mut last = None;
    for base in bases {
        match connected_sum(l1, sigma, tau, l2, base, plane) {
            Err(e @ Error::RerouteBlocked { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or_else(|| Error::Domain("no base candidates".into())))
}

/// Checks on `samples` seeded random loops that winding numbers turn the
/// composition `[c1]^+ #_D [c2]^-` into the group `ℤ`: additivity, a
/// two-sided identity, inverses `c·c⁻`, and associativity.
pub fn verify_group_law(plane: &PuncturedPlane, samples: usize, seed: u64) -> Result<GroupLawReport> {
    let [center] = plane.punctures() else {
        return Err(Error::Plane(format!(
            "group law sweep needs exactly one puncture, found {}",
            plane.punctures().len()
        )));
    };
    let bases = base_candidates(center);
    let names = ["additivity", "identity", "inverse", "associativity"];
    let mut checks: Vec<CheckTally> = names.iter().map(|&name| CheckTally { name, passed: 0, failed: 0 }).collect();
    let mut counterexamples = Vec::new();
    let (plus, minus) = (Sign::Plus, Sign::Minus);

    for i in 0..samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let wa = rng.gen_range(-3..=3);
        let wb = rng.gen_range(-3..=3);
        let wc = rng.gen_range(-3..=3);
        let a = sample::spiral(&mut rng, center, wa);
        let b = sample::spiral(&mut rng, center, wb);
        let c = sample::spiral(&mut rng, center, wc);
        let e = sample::contractible(&mut rng, center);

        let mut outcome = |k: usize, ok: Result<bool>, what: String| match ok {
            Ok(true) => checks[k].passed += 1,
            Ok(false) => {
                checks[k].failed += 1;
                counterexamples.push(format!("sample {i}: {what}"));
            }
            Err(err) => {
                checks[k].failed += 1;
                counterexamples.push(format!("sample {i}: {what}: {err}"));
            }
        };
        let wind = |l: &FlaggedLoop| winding_number(l, center);
        let compose = |x: &FlaggedLoop, y: &FlaggedLoop| sum_any_base(x, plus, minus, y, plane, &bases);

        outcome(
            0,
            compose(&a, &b).and_then(|ab| Ok(wind(&ab)? == wa + wb && wind(&a)? == wa && wind(&b)? == wb)),
            format!("w(a∘b) != {wa} + {wb}"),
        );
        outcome(
            1,
            (|| {
                let left = wind(&compose(&e, &a)?)?;
                let right = wind(&compose(&a, &e)?)?;
                Ok(wind(&e)? == 0 && left == wa && right == wa)
            })(),
            format!("identity fails for winding {wa}"),
        );
        outcome(
            2,
            sum_any_base(&a, plus, plus, &a, plane, &bases).and_then(|aa| Ok(wind(&aa)? == 0)),
            format!("c·c⁻ not trivial for winding {wa}"),
        );
        outcome(
            3,
            (|| {
                let left = compose(&compose(&a, &b)?, &c)?;
                let right = compose(&a, &compose(&b, &c)?)?;
                Ok(wind(&left)? == wind(&right)? && wind(&left)? == wa + wb + wc)
            })(),
            format!("(a∘b)∘c != a∘(b∘c) for windings {wa}, {wb}, {wc}"),
        );
    }
    Ok(GroupLawReport { samples, seed, checks, counterexamples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::from_ints(x, y)
    }

    fn square(traversal: Traversal) -> FlaggedLoop {
        FlaggedLoop::new(vec![pt(1, -1), pt(1, 1), pt(-1, 1), pt(-1, -1)], 0, traversal).unwrap()
    }

    /// Angle-sum reference in floating point; only used to cross-check the
    /// exact computation on small inputs.
    fn float_winding(l: &FlaggedLoop, p: &Point) -> f64 {
        use num_traits::ToPrimitive;
        let seq = l.traversal_sequence();
        let n = seq.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = &seq[i];
            let b = &seq[(i + 1) % n];
            let (ax, ay) = ((&a.x - &p.x).to_f64().unwrap(), (&a.y - &p.y).to_f64().unwrap());
            let (bx, by) = ((&b.x - &p.x).to_f64().unwrap(), (&b.y - &p.y).to_f64().unwrap());
            total += (ax * by - ay * bx).atan2(ax * bx + ay * by);
        }
        total / std::f64::consts::TAU
    }

    #[test]
    fn winding_examples() {
        let origin = pt(0, 0);
        assert_eq!(winding_number(&square(Traversal::Forward), &origin).unwrap(), 1);
        assert_eq!(winding_number(&square(Traversal::Backward), &origin).unwrap(), -1);
        let far = FlaggedLoop::new(vec![pt(2, 0), pt(4, 1), pt(3, 3)], 1, Traversal::Forward).unwrap();
        assert_eq!(winding_number(&far, &origin).unwrap(), 0);
        assert!((float_winding(&square(Traversal::Forward), &origin) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn winding_rejects_touching_loops() {
        let through = FlaggedLoop::new(vec![pt(-1, 0), pt(1, 0), pt(0, 2)], 0, Traversal::Forward).unwrap();
        assert!(winding_number(&through, &pt(0, 0)).is_err());
        let plane = PuncturedPlane::origin();
        assert_eq!(plane.check_loop(&through), Err(Error::TouchesPuncture(1)));
    }

    #[test]
    fn spiral_windings_match_float_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let center = Point::new(rat(1, 3), rat(-2, 5));
        for k in -3..=3 {
            for _ in 0..5 {
                let l = sample::spiral(&mut rng, &center, k);
                assert_eq!(winding_number(&l, &center).unwrap(), k);
                assert!((float_winding(&l, &center) - k as f64).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn loop_invariants() {
        assert!(FlaggedLoop::new(vec![pt(0, 0), pt(1, 0)], 0, Traversal::Forward).is_err());
        assert!(FlaggedLoop::new(vec![pt(0, 0), pt(1, 0), pt(1, 0)], 0, Traversal::Forward).is_err());
        assert!(FlaggedLoop::new(vec![pt(0, 0), pt(1, 0), pt(0, 0)], 0, Traversal::Forward).is_err());
        assert!(FlaggedLoop::new(vec![pt(0, 0), pt(1, 0), pt(0, 1)], 3, Traversal::Forward).is_err());
        assert!(PuncturedPlane::new(vec![pt(0, 0), pt(0, 1)]).is_err());
        assert!(PuncturedPlane::new(vec![pt(0, 0), pt(0, 0)]).is_err());
    }

    #[test]
    fn normalize_flag_examples() {
        let plane = PuncturedPlane::origin();
        let l = FlaggedLoop::new(vec![pt(1, -1), pt(1, 1), pt(-1, 1), pt(-1, -1)], 2, Traversal::Backward).unwrap();
        let same = normalize_flag(&l, &pt(-1, 1), &plane).unwrap();
        assert_eq!(same.flag_point(), &pt(-1, 1));
        assert_eq!(same.traversal_sequence(), l.traversal_sequence());

        // a 16-gon around the origin rerouted to (3,0)
        let dirs = [
            (4, 0),
            (4, 2),
            (3, 3),
            (2, 4),
            (0, 4),
            (-2, 4),
            (-3, 3),
            (-4, 2),
            (-4, 0),
            (-4, -2),
            (-3, -3),
            (-2, -4),
            (0, -4),
            (2, -4),
            (3, -3),
            (4, -2),
        ];
        let circle = FlaggedLoop::new(
            dirs.iter().map(|&(x, y)| Point::new(rat(x, 4), rat(y, 4))).collect(),
            5,
            Traversal::Forward,
        )
        .unwrap();
        let base = pt(3, 0);
        let n = normalize_flag(&circle, &base, &plane).unwrap();
        assert_eq!(n.flag_point(), &base);
        assert_eq!(winding_number(&n, &pt(0, 0)).unwrap(), 1);

        // the corridor from (-1,-1) to (1,1) runs through the origin
        let blocked = normalize_flag(&square(Traversal::Forward).reversed(), &pt(1, 1), &plane);
        assert!(blocked.is_ok());
        let l = FlaggedLoop::new(vec![pt(-1, -1), pt(1, -1), pt(1, 1), pt(-1, 1)], 0, Traversal::Forward).unwrap();
        assert_eq!(
            normalize_flag(&l, &pt(2, 2), &plane),
            Err(Error::RerouteBlocked { base: "(2,2)".into(), puncture: 1 })
        );
        assert_eq!(normalize_flag(&l, &pt(0, 0), &plane), Err(Error::TouchesPuncture(1)));
    }

    #[test]
    fn connected_sum_examples() {
        let plane = PuncturedPlane::origin();
        let center = pt(0, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let two = sample::spiral(&mut rng, &center, 2);
        let three = sample::spiral(&mut rng, &center, 3);
        let base = Point::new(rat(1, 3), rat(5, 7));
        let s = connected_sum(&two, Sign::Plus, Sign::Minus, &three, &base, &plane).unwrap();
        assert_eq!(winding_number(&s, &center).unwrap(), 5);

        let cc = connected_sum(&two, Sign::Plus, Sign::Plus, &two, &base, &plane).unwrap();
        assert_eq!(winding_number(&cc, &center).unwrap(), 0);

        let e = sample::contractible(&mut rng, &center);
        let s = connected_sum(&three, Sign::Plus, Sign::Minus, &e, &base, &plane).unwrap();
        assert_eq!(winding_number(&s, &center).unwrap(), 3);
    }

    #[test]
    fn crossing_word_examples() {
        let plane = PuncturedPlane::new(vec![pt(0, 0), pt(5, 1)]).unwrap();
        let around_first = FlaggedLoop::new(
            vec![
                Point::new(rat(1, 2), rat(-1, 2)),
                Point::new(rat(1, 2), rat(1, 2)),
                Point::new(rat(-1, 2), rat(1, 2)),
                Point::new(rat(-1, 2), rat(-1, 2)),
            ],
            0,
            Traversal::Forward,
        )
        .unwrap();
        assert_eq!(crossing_word(&around_first, &plane).unwrap().to_string(), "x1");
        assert_eq!(crossing_word(&around_first.reversed(), &plane).unwrap().to_string(), "x1^-1");
        let far = FlaggedLoop::new(vec![pt(10, 0), pt(12, 0), pt(11, 3)], 0, Traversal::Forward).unwrap();
        assert!(crossing_word(&far, &plane).unwrap().is_identity());
        let on_ray = FlaggedLoop::new(vec![pt(0, -1), pt(1, 1), pt(-1, 1)], 0, Traversal::Forward).unwrap();
        assert_eq!(crossing_word(&on_ray, &plane), Err(Error::PerturbationRequired { vertex: 0, puncture: 1 }));
    }

    #[test]
    fn crossing_word_exponents_match_winding() {
        let plane = PuncturedPlane::new(vec![pt(0, 0), pt(2, 1)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let l = sample::polygon(&mut rng, &plane, 3, 9);
            let word = crossing_word(&l, &plane).unwrap();
            let profile = plane.winding_profile(&l).unwrap();
            for (j, w) in profile.iter().enumerate() {
                assert_eq!(word.exponent_sum(j), *w);
            }
        }
    }

    #[test]
    fn free_word_reduction() {
        let w = FreeWord::from_letters([(0, 1), (1, 1), (1, -1), (0, -1), (1, -1)]);
        assert_eq!(w.to_string(), "x2^-1");
        assert!(w.product(&w.inverse()).is_identity());
    }

    #[test]
    fn group_law_sweep_passes() {
        let report = verify_group_law(&PuncturedPlane::origin(), 10, 42).unwrap();
        assert!(report.all_passed(), "{report}");
        assert!(verify_group_law(&PuncturedPlane::new(vec![]).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn plane_file_round_trip() {
        let text = "punctures: (0,0) (3/2,1)\nloop 1 F (1,-1) (1,1) (-1,1) (-1,-1)\n# comment\nloop 0 B (10,0) (12,0) (11,3)\n";
        let (plane, loops) = parse_plane_file(text).unwrap();
        assert_eq!(plane.punctures()[1], Point::new(rat(3, 2), int(1)));
        assert_eq!(loops.len(), 2);
        assert_eq!(loops[1].traversal(), Traversal::Backward);
        let printed = format!("{}\n{}\n{}\n", plane.to_line(), loops[0].to_line(), loops[1].to_line());
        assert_eq!(parse_plane_file(&printed).unwrap(), (plane, loops));
    }

    #[test]
    fn plane_file_errors() {
        assert!(matches!(parse_plane_file("loop 0 F (0,0) (1,0) (0,1)"), Err(Error::Parse(_))));
        match parse_plane_file("punctures: (0,0)\nloop 0 X (1,1) (2,1) (2,2)\n") {
            Err(Error::Parse(e)) => {
                assert_eq!((e.line, e.column), (2, 8));
                assert_eq!(e.expected, vec!["F", "B"]);
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_plane_file("punctures: (0,0)\nloop 0 F (1,1) (2,1) (2,z)\n"), Err(Error::Parse(_))));
        assert_eq!(
            parse_plane_file("punctures: (0,0)\nloop 0 F (-1,0) (1,0) (0,1)\n").map(|_| ()),
            Err(Error::TouchesPuncture(1))
        );
    }
}
