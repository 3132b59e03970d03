//! Deterministic generators for terms, contexts and renamings.
//!
//! Random generation uses ChaCha8 seeded from [`GenConfig::seed`]; there is
//! no global generator state. Name pools are meant to be tiny (`x,y` or
//! `x,y,z`) so that shadowing and self-renamings come up constantly.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::debruijn::DbTerm;
use crate::kernel::{Context, Renaming, Term, VarName};

/// Longest context the random generators produce.
pub const MAX_CONTEXT_LEN: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub max_size: usize,
    pub name_pool: Vec<VarName>,
    pub seed: u64,
}

impl GenConfig {
    /// # Panics
    ///
    /// If `max_size` is zero or the pool is empty.
    pub fn new(max_size: usize, name_pool: Vec<VarName>, seed: u64) -> Self {
        assert!(max_size >= 1, "max_size must be at least 1");
        assert!(!name_pool.is_empty(), "name pool must not be empty");
        GenConfig {
            max_size,
            name_pool,
            seed,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Builds a pool from literal names.
///
/// # Panics
///
/// On an invalid name.
pub fn pool(names: &[&str]) -> Vec<VarName> {
    names
        .iter()
        .map(|n| VarName::new(n).expect("valid pool name"))
        .collect()
}

pub fn random_term(cfg: &GenConfig) -> Term {
    gen_term(&mut cfg.rng(), cfg.max_size, &cfg.name_pool)
}

pub fn random_context(cfg: &GenConfig) -> Context {
    gen_context(&mut cfg.rng(), cfg.max_size, &cfg.name_pool)
}

pub fn random_renaming(cfg: &GenConfig) -> Renaming {
    gen_renaming(&mut cfg.rng(), cfg.max_size, &cfg.name_pool)
}

pub fn random_dbterm(cfg: &GenConfig) -> DbTerm {
    gen_dbterm(&mut cfg.rng(), cfg.max_size, &cfg.name_pool)
}

pub fn gen_name<R: Rng>(rng: &mut R, pool: &[VarName]) -> VarName {
    pool[rng.gen_range(0..pool.len())].clone()
}

/// A term whose size is drawn uniformly from `1..=max_size`.
pub fn gen_term<R: Rng>(rng: &mut R, max_size: usize, pool: &[VarName]) -> Term {
    let size = rng.gen_range(1..=max_size.max(1));
    gen_term_of_size(rng, size, pool)
}

/// A term with exactly `size` constructors.
pub fn gen_term_of_size<R: Rng>(rng: &mut R, size: usize, pool: &[VarName]) -> Term {
    match size {
        0 | 1 => Term::Var(gen_name(rng, pool)),
        2 => {
            if rng.gen_bool(0.5) {
                Term::up(gen_term_of_size(rng, 1, pool))
            } else {
                Term::lam(gen_name(rng, pool), gen_term_of_size(rng, 1, pool))
            }
        }
        _ => match rng.gen_range(0..3) {
            0 => Term::up(gen_term_of_size(rng, size - 1, pool)),
            1 => Term::lam(gen_name(rng, pool), gen_term_of_size(rng, size - 1, pool)),
            _ => {
                let left = rng.gen_range(1..=size - 2);
                Term::app(
                    gen_term_of_size(rng, left, pool),
                    gen_term_of_size(rng, size - 1 - left, pool),
                )
            }
        },
    }
}

pub fn gen_dbterm<R: Rng>(rng: &mut R, max_size: usize, pool: &[VarName]) -> DbTerm {
    let size = rng.gen_range(1..=max_size.max(1));
    gen_dbterm_of_size(rng, size, pool)
}

fn gen_dbterm_of_size<R: Rng>(rng: &mut R, size: usize, pool: &[VarName]) -> DbTerm {
    match size {
        0 | 1 => {
            if rng.gen_bool(0.3) {
                DbTerm::One
            } else {
                DbTerm::Var(gen_name(rng, pool))
            }
        }
        2 => {
            let inner = gen_dbterm_of_size(rng, 1, pool);
            if rng.gen_bool(0.5) {
                DbTerm::up(inner)
            } else {
                DbTerm::lam(inner)
            }
        }
        _ => match rng.gen_range(0..3) {
            0 => DbTerm::up(gen_dbterm_of_size(rng, size - 1, pool)),
            1 => DbTerm::lam(gen_dbterm_of_size(rng, size - 1, pool)),
            _ => {
                let left = rng.gen_range(1..=size - 2);
                DbTerm::app(
                    gen_dbterm_of_size(rng, left, pool),
                    gen_dbterm_of_size(rng, size - 1 - left, pool),
                )
            }
        },
    }
}

/// Length uniform in `0..=min(max_len, MAX_CONTEXT_LEN)`.
pub fn gen_context<R: Rng>(rng: &mut R, max_len: usize, pool: &[VarName]) -> Context {
    let len = rng.gen_range(0..=max_len.min(MAX_CONTEXT_LEN));
    (0..len).map(|_| gen_name(rng, pool)).collect()
}

pub fn gen_renaming<R: Rng>(rng: &mut R, max_len: usize, pool: &[VarName]) -> Renaming {
    let target = gen_name(rng, pool);
    let source = gen_name(rng, pool);
    Renaming::with_lifts(target, source, gen_context(rng, max_len, pool))
}

/// Every term over `pool` with at most `max_size` constructors, each once.
///
/// Ordered by size; within a size by constructor (`Var < Up < App < Lam`),
/// then by children left to right under the same order, with names
/// ordered as in `pool`.
pub fn enumerate_terms(max_size: usize, pool: &[VarName]) -> impl Iterator<Item = Term> {
    terms_by_size(max_size, pool).into_iter().flatten()
}

/// `levels[n]` holds the terms of size exactly `n` (index 0 is empty).
pub fn terms_by_size(max_size: usize, pool: &[VarName]) -> Vec<Vec<Term>> {
    let mut levels: Vec<Vec<Term>> = vec![Vec::new()];
    for size in 1..=max_size {
        let mut here = Vec::new();
        if size == 1 {
            here.extend(pool.iter().cloned().map(Term::Var));
        } else {
            here.extend(levels[size - 1].iter().cloned().map(Term::up));
            for left in 1..size.saturating_sub(1) {
                let right = size - 1 - left;
                for f in &levels[left] {
                    for a in &levels[right] {
                        here.push(Term::app(f.clone(), a.clone()));
                    }
                }
            }
            for x in pool {
                here.extend(levels[size - 1].iter().map(|b| Term::lam(x.clone(), b.clone())));
            }
        }
        levels.push(here);
    }
    levels
}

/// Proper subterms one level down, largest first.
fn children(m: &Term) -> Vec<Term> {
    match m {
        Term::Var(_) => vec![],
        Term::Up(n) | Term::Lam(_, n) => vec![(**n).clone()],
        Term::App(f, a) => {
            let mut v = vec![(**f).clone(), (**a).clone()];
            v.sort_by_key(|t| std::cmp::Reverse(t.size()));
            v
        }
    }
}

/// One-step replacements of some subterm by one of its own children.
fn shrink_candidates(m: &Term) -> Vec<Term> {
    let mut out = children(m);
    match m {
        Term::Var(_) => {}
        Term::Up(n) => out.extend(shrink_candidates(n).into_iter().map(Term::up)),
        Term::Lam(x, n) => out.extend(
            shrink_candidates(n)
                .into_iter()
                .map(|b| Term::lam(x.clone(), b)),
        ),
        Term::App(f, a) => {
            out.extend(
                shrink_candidates(f)
                    .into_iter()
                    .map(|f2| Term::app(f2, (**a).clone())),
            );
            out.extend(
                shrink_candidates(a)
                    .into_iter()
                    .map(|a2| Term::app((**f).clone(), a2)),
            );
        }
    }
    out
}

/// Greedy shrinking: keep replacing a subterm by one of its children while
/// `fails` still holds.
pub fn shrink_term(m: &Term, fails: impl Fn(&Term) -> bool) -> Term {
    let mut current = m.clone();
    'outer: loop {
        for candidate in shrink_candidates(&current) {
            if fails(&candidate) {
                current = candidate;
                continue 'outer;
            }
        }
        return current;
    }
}
