//! Self-check suites behind the `check` command. Each suite sweeps the
//! laws of one module over a small exhaustive range and reports the
//! number of cases and any counterexamples.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::plane::{self, crossing_word, sample, Point, PuncturedPlane};
use crate::tower::{abelianize, diagram_check, multiset_quotient, reduce_coset, AbelianVector, RelationLattice};
use crate::tree::{self, move_closure, word_to_tree, RootedPresentation, DEFAULT_CLOSURE_CAP};
use crate::word::{
    check_commutation_law, class_of, pair, pair_class, words_up_to, CanonicalPolicy, GeneratorSet, PresentationClass,
    Sign,
};

pub const SUITES: [&str; 7] = ["involution", "laws", "trees", "assoc", "monoid", "homology", "oracle"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str) -> Self {
        SuiteReport { name, cases: 0, failures: Vec::new() }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failures.len() < 10 {
            self.failures.push(what());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            write!(f, "{}: ok ({} cases)", self.name, self.cases)
        } else {
            write!(f, "{}: FAIL ({} cases)", self.name, self.cases)?;
            for fail in &self.failures {
                write!(f, "\n  {fail}")?;
            }
            Ok(())
        }
    }
}

pub fn run_suite(name: &str, gens: &GeneratorSet, lattice: Option<&RelationLattice>) -> Option<Result<SuiteReport>> {
    Some(match name {
        "involution" => Ok(involution(gens)),
        "laws" => Ok(laws(gens)),
        "trees" => trees(gens),
        "assoc" => Ok(assoc(gens)),
        "monoid" => Ok(monoid(gens)),
        "homology" => homology(gens, lattice),
        "oracle" => oracle(),
        _ => return None,
    })
}

fn involution(gens: &GeneratorSet) -> SuiteReport {
    let mut r = SuiteReport::new("involution");
    let words = words_up_to(gens.rank(), 3);
    let lex = CanonicalPolicy::LexLeast;
    for u in &words {
        let inv = u.involution();
        r.record(inv.involution() == *u, || format!("inv² != id at {}", gens.display(u)));
        r.record(class_of(u, &lex) == class_of(&inv, &lex), || {
            format!("class not constant on fiber of {}", gens.display(u))
        });
        for v in &words {
            r.record(u.concat(v).involution() == v.involution().concat(&inv), || {
                format!("anti-automorphism fails at {} · {}", gens.display(u), gens.display(v))
            });
        }
    }
    r
}

fn laws(gens: &GeneratorSet) -> SuiteReport {
    let mut r = SuiteReport::new("laws");
    let lex = CanonicalPolicy::LexLeast;
    let mut classes: Vec<PresentationClass> = (0..gens.rank()).map(PresentationClass::generator).collect();
    classes.extend(words_up_to(gens.rank(), 2).iter().filter(|w| !w.is_empty()).map(|w| class_of(w, &lex)));
    for a in &classes {
        for b in &classes {
            for s in Sign::BOTH {
                for t in Sign::BOTH {
                    r.record(check_commutation_law(a, s, t, b), || {
                        format!("{}^{s} #^{t} {} fails", gens.display(a.canonical()), gens.display(b.canonical()))
                    });
                }
            }
        }
    }
    r
}

fn trees(gens: &GeneratorSet) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("trees");
    let rank = gens.rank().min(3);
    for n in 2..=4 {
        for t in tree::trees_with_leaves(rank, n) {
            let flipped = t.flip()?;
            r.record(flipped.eval() == t.eval().involution(), || format!("flip law fails at {}", t.display(gens)));
            r.record(t.eval().len() == n, || format!("length != leaves at {}", t.display(gens)));
        }
    }
    for w in words_up_to(rank, 4).iter().filter(|w| !w.is_empty()) {
        let ok = word_to_tree(w).map(|t| t.eval() == *w).unwrap_or(false);
        r.record(ok, || format!("round trip fails at {}", gens.display(w)));
    }
    for n in 1..=3 {
        for t in tree::trees_with_leaves(rank, n) {
            for root in Sign::BOTH {
                let start = RootedPresentation::new(t.clone(), root);
                let class = tree::class_of_tree(&start);
                let closure = move_closure(&start, DEFAULT_CLOSURE_CAP)?;
                r.record(closure.iter().all(|m| tree::class_of_tree(m) == class), || {
                    format!("closure of {} leaves its class", start.display(gens))
                });
            }
        }
    }
    Ok(r)
}

fn assoc(gens: &GeneratorSet) -> SuiteReport {
    let mut r = SuiteReport::new("assoc");
    let (p, m) = (Sign::Plus, Sign::Minus);
    let n = gens.rank();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (a, b, c) =
                    (PresentationClass::generator(i), PresentationClass::generator(j), PresentationClass::generator(k));
                let left = pair(&pair_class(&a, p, m, &b), p, m, &c);
                let right = pair(&a, p, m, &pair_class(&b, p, m, &c));
                r.record(left == right, || format!("(ab)c != a(bc) for {i} {j} {k}"));
            }
        }
    }
    r
}

fn monoid(gens: &GeneratorSet) -> SuiteReport {
    let mut r = SuiteReport::new("monoid");
    for w in words_up_to(gens.rank(), 3).iter().filter(|w| !w.is_empty()) {
        let ww = w.concat(&w.involution());
        r.record(!ww.is_empty() && abelianize(&ww, gens.rank()).is_zero(), || {
            format!("w·inv(w) witness fails at {}", gens.display(w))
        });
    }
    r
}

fn homology(gens: &GeneratorSet, lattice: Option<&RelationLattice>) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("homology");
    let rank = gens.rank();
    let default;
    let lattice = match lattice {
        Some(l) => l,
        None => {
            let mut row = vec![0; rank];
            row[0] = 2;
            default = RelationLattice::new(rank, vec![row])?;
            &default
        }
    };
    let words = words_up_to(rank, 2);
    for u in &words {
        for v in &words {
            let uv = u.concat(v);
            r.record(multiset_quotient(&uv, rank) == &multiset_quotient(u, rank) + &multiset_quotient(v, rank), || {
                format!("multiset not additive at {} · {}", gens.display(u), gens.display(v))
            });
            r.record(abelianize(&uv, rank) == abelianize(u, rank).checked_add(&abelianize(v, rank))?, || {
                format!("abelianize not additive at {} · {}", gens.display(u), gens.display(v))
            });
            r.record(diagram_check(u, v, lattice)?, || {
                format!("diagram fails at {} · {}", gens.display(u), gens.display(v))
            });
        }
        r.record(abelianize(&u.involution(), rank) == -&abelianize(u, rank), || {
            format!("abelianize ∘ inv != -abelianize at {}", gens.display(u))
        });
    }
    for w in &words {
        let v = abelianize(w, rank);
        let c = reduce_coset(&v, lattice)?;
        r.record(reduce_coset(&c.rep, lattice)? == c, || format!("reduction not idempotent at {v}"));
        for row in lattice.rows() {
            let shifted = v.checked_add(&AbelianVector(row.clone()))?;
            r.record(reduce_coset(&shifted, lattice)? == c, || format!("reduction not shift invariant at {v}"));
        }
    }
    Ok(r)
}

fn oracle() -> Result<SuiteReport> {
    let mut r = SuiteReport::new("oracle");
    let report = plane::verify_group_law(&PuncturedPlane::origin(), 20, 1)?;
    for c in &report.checks {
        r.cases += c.passed + c.failed;
    }
    r.failures.extend(report.counterexamples.iter().cloned());

    let two = PuncturedPlane::new(vec![Point::from_ints(0, 0), Point::from_ints(2, 1)])?;
    let base = Point::new(plane::rat(1, 3), plane::rat(-5, 7));
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..20 {
        let l1 = sample::polygon(&mut rng, &two, 3, 7);
        let l2 = sample::polygon(&mut rng, &two, 3, 7);
        let (Ok(n1), Ok(n2)) = (plane::normalize_flag(&l1, &base, &two), plane::normalize_flag(&l2, &base, &two))
        else {
            continue;
        };
        let sum = plane::connected_sum(&l1, Sign::Plus, Sign::Minus, &l2, &base, &two)?;
        let expected = crossing_word(&n1, &two)?.product(&crossing_word(&n2, &two)?);
        r.record(crossing_word(&sum, &two)? == expected, || {
            format!("crossing word not multiplicative for {}", sum.to_line())
        });
    }
    Ok(r)
}

/// Used by the CLI's `check all` on the session's generator set.
pub fn run_all(gens: &GeneratorSet, lattice: Option<&RelationLattice>) -> Result<Vec<SuiteReport>> {
    SUITES.iter().map(|name| run_suite(name, gens, lattice).expect("known suite")).collect()
}
