//! Quotients of the free monoid: signed multisets (the commutative
//! point-flag stage), integer vectors (abelianization) and cosets of a
//! relation lattice standing in for `H_k(M)`.

use std::fmt;
use std::ops::{Add, Neg};

use crate::error::{Error, ParseError, Result};
use crate::word::{GeneratorSet, Sign, SignedWord};

/// Counts of `c_i^+` and `c_i^-` for every generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedMultiset {
    plus: Vec<u64>,
    minus: Vec<u64>,
}

impl SignedMultiset {
    pub fn zero(rank: usize) -> Self {
        SignedMultiset { plus: vec![0; rank], minus: vec![0; rank] }
    }

    pub fn rank(&self) -> usize {
        self.plus.len()
    }

    pub fn count(&self, gen: usize, sign: Sign) -> u64 {
        match sign {
            Sign::Plus => self.plus[gen],
            Sign::Minus => self.minus[gen],
        }
    }

    pub fn total(&self) -> u64 {
        self.plus.iter().chain(&self.minus).sum()
    }

    /// `{p_i, m_i} ↦ (p_i - m_i)`.
    pub fn difference(&self) -> AbelianVector {
        AbelianVector(self.plus.iter().zip(&self.minus).map(|(&p, &m)| p as i64 - m as i64).collect())
    }

    pub fn display<'a>(&'a self, gens: &'a GeneratorSet) -> MultisetDisplay<'a> {
        MultisetDisplay { gens, ms: self }
    }
}

impl Add for &SignedMultiset {
    type Output = SignedMultiset;
    fn add(self, rhs: &SignedMultiset) -> SignedMultiset {
        assert_eq!(self.rank(), rhs.rank(), "multiset ranks differ");
        SignedMultiset {
            plus: self.plus.iter().zip(&rhs.plus).map(|(a, b)| a + b).collect(),
            minus: self.minus.iter().zip(&rhs.minus).map(|(a, b)| a + b).collect(),
        }
    }
}

pub struct MultisetDisplay<'a> {
    gens: &'a GeneratorSet,
    ms: &'a SignedMultiset,
}

impl fmt::Display for MultisetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for i in 0..self.ms.rank() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let name = self.gens.name(i);
            write!(f, "{name}+:{}, {name}-:{}", self.ms.plus[i], self.ms.minus[i])?;
        }
        write!(f, "}}")
    }
}

/// Element of `ℤ^N`, printed as `(n_1, …, n_N)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianVector(pub Vec<i64>);

impl AbelianVector {
    pub fn zero(rank: usize) -> Self {
        AbelianVector(vec![0; rank])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &AbelianVector) -> Result<AbelianVector> {
        check_dim(self.dim(), other.dim())?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(AbelianVector)
    }

    /// Parses `(n_1, …, n_N)`; the parentheses and commas are optional.
    pub fn parse(text: &str) -> Result<AbelianVector> {
        let inner = text.trim();
        let inner = inner.strip_prefix('(').map_or(inner, |s| s.strip_suffix(')').unwrap_or(s));
        let mut out = Vec::new();
        for tok in inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            let value = tok.parse::<i64>().map_err(|_| {
                let col = text.find(tok).map_or(1, |p| p + 1);
                ParseError::new(1, col, &["<integer>"], tok)
            })?;
            out.push(value);
        }
        Ok(AbelianVector(out))
    }
}

impl Add for &AbelianVector {
    type Output = AbelianVector;
    fn add(self, rhs: &AbelianVector) -> AbelianVector {
        self.checked_add(rhs).expect("abelian vector addition")
    }
}

impl Neg for &AbelianVector {
    type Output = AbelianVector;
    fn neg(self) -> AbelianVector {
        AbelianVector(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for AbelianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// Integer row lattice whose span models the relations of `H_k(M)`.
///
/// The Hermite normal form of the row span is computed once at
/// construction: rows in echelon form, positive pivots, and the entries
/// above each pivot reduced into `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationLattice {
    dim: usize,
    rows: Vec<Vec<i64>>,
    hnf: Vec<Vec<i64>>,
    pivots: Vec<usize>,
}

impl RelationLattice {
    pub fn free(dim: usize) -> Self {
        RelationLattice { dim, rows: Vec::new(), hnf: Vec::new(), pivots: Vec::new() }
    }

    pub fn new(dim: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        for row in &rows {
            check_dim(dim, row.len())?;
        }
        let (hnf, pivots) = hermite_normal_form(dim, &rows)?;
        Ok(RelationLattice { dim, rows, hnf, pivots })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Rows as declared.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Hermite basis of the row span (zero rows dropped).
    pub fn hermite_basis(&self) -> &[Vec<i64>] {
        &self.hnf
    }

    pub fn contains(&self, v: &AbelianVector) -> Result<bool> {
        Ok(reduce_coset(v, self)?.rep.is_zero())
    }

    /// Text format: one row per line, written as for [`AbelianVector::parse`];
    /// blank lines and `#` comments are ignored.
    pub fn parse(text: &str, dim: usize) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let row = AbelianVector::parse(line).map_err(|e| match e {
                Error::Parse(mut p) => {
                    p.line = lineno + 1;
                    Error::Parse(p)
                }
                other => other,
            })?;
            rows.push(row.0);
        }
        RelationLattice::new(dim, rows)
    }

    pub fn to_text(&self) -> String {
        self.rows.iter().map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" ") + "\n").collect()
    }
}

fn floor_div(a: i64, b: i64) -> Result<i64> {
    let q = a.checked_div(b).ok_or(Error::Overflow)?;
    if (a % b != 0) && ((a < 0) != (b < 0)) {
        q.checked_sub(1).ok_or(Error::Overflow)
    } else {
        Ok(q)
    }
}

/// `target -= q · source`, overflow-checked.
fn sub_multiple(target: &mut [i64], source: &[i64], q: i64) -> Result<()> {
    if q == 0 {
        return Ok(());
    }
    for (t, s) in target.iter_mut().zip(source) {
        let prod = s.checked_mul(q).ok_or(Error::Overflow)?;
        *t = t.checked_sub(prod).ok_or(Error::Overflow)?;
    }
    Ok(())
}

fn hermite_normal_form(dim: usize, rows: &[Vec<i64>]) -> Result<(Vec<Vec<i64>>, Vec<usize>)> {
    let mut m: Vec<Vec<i64>> = rows.iter().filter(|r| r.iter().any(|&x| x != 0)).cloned().collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..dim {
        if r == m.len() {
            break;
        }
        // Euclid on the column until a single nonzero entry remains at row r.
        while let Some(best) = (r..m.len()).filter(|&i| m[i][col] != 0).min_by_key(|&i| m[i][col].unsigned_abs()) {
            m.swap(r, best);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col] != 0 {
                    let q = floor_div(m[i][col], m[r][col])?;
                    let (head, tail) = m.split_at_mut(i);
                    sub_multiple(&mut tail[0], &head[r], q)?;
                    if tail[0][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[r][col] == 0 {
            continue;
        }
        if m[r][col] < 0 {
            for x in m[r].iter_mut() {
                *x = x.checked_neg().ok_or(Error::Overflow)?;
            }
        }
        let p = m[r][col];
        for i in 0..r {
            let q = floor_div(m[i][col], p)?;
            let (head, tail) = m.split_at_mut(r);
            sub_multiple(&mut head[i], &tail[0], q)?;
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    Ok((m, pivots))
}

/// A coset of the relation lattice, held by its canonical representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomologyClass {
    pub rep: AbelianVector,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rep)
    }
}

/// Canonical representative of `v + rowspan(L)`: each pivot coordinate is
/// brought into `[0, pivot)`.
pub fn reduce_coset(v: &AbelianVector, lattice: &RelationLattice) -> Result<HomologyClass> {
    check_dim(lattice.dim, v.dim())?;
    let mut rep = v.0.clone();
    for (row, &col) in lattice.hnf.iter().zip(&lattice.pivots) {
        let q = floor_div(rep[col], row[col])?;
        sub_multiple(&mut rep, row, q)?;
    }
    Ok(HomologyClass { rep: AbelianVector(rep) })
}

pub fn multiset_quotient(w: &SignedWord, rank: usize) -> SignedMultiset {
    let mut ms = SignedMultiset::zero(rank.max(w.min_rank()));
    for l in w.letters() {
        match l.sign {
            Sign::Plus => ms.plus[l.gen] += 1,
            Sign::Minus => ms.minus[l.gen] += 1,
        }
    }
    ms
}

/// `n_i = #c_i^+ - #c_i^-`, computed through the multiset stage.
pub fn abelianize(w: &SignedWord, rank: usize) -> AbelianVector {
    multiset_quotient(w, rank).difference()
}

/// Whether `free monoid → ℤ^N → ℤ^N / L` commutes with the product of `u`
/// and `v`.
pub fn diagram_check(u: &SignedWord, v: &SignedWord, lattice: &RelationLattice) -> Result<bool> {
    let rank = lattice.dim();
    let joint = reduce_coset(&abelianize(&u.concat(v), rank), lattice)?;
    let summed = abelianize(u, rank).checked_add(&abelianize(v, rank))?;
    Ok(joint == reduce_coset(&summed, lattice)?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerImage {
    pub multiset: SignedMultiset,
    pub vector: AbelianVector,
    pub class: HomologyClass,
}

pub fn tower_image(w: &SignedWord, lattice: &RelationLattice) -> Result<TowerImage> {
    if w.min_rank() > lattice.dim() {
        return Err(Error::Dimension { expected: lattice.dim(), found: w.min_rank() });
    }
    let multiset = multiset_quotient(w, lattice.dim());
    let vector = multiset.difference();
    let class = reduce_coset(&vector, lattice)?;
    Ok(TowerImage { multiset, vector, class })
}
