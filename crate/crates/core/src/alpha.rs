//! Alpha-conversion without freshness conditions.
//!
//! The relation is the smallest compatible equivalence containing
//! `λx M =α λy {y x}M` for every `x`, `y`, `M`. It is decided by comparing
//! canonical forms `db_z(M)` in which every binder is renamed to one fixed
//! variable `z`. Any `z` works, including one that occurs free in the input.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::kernel::{apply_renaming, Renaming, Term, VarName};

/// Canonicalization variable used when the caller does not pick one.
pub const DEFAULT_CANON_VAR: &str = "z";

pub fn default_canon_var() -> VarName {
    VarName::new(DEFAULT_CANON_VAR).expect("default canonical variable is a valid name")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlphaError {
    #[error("term is not a lambda abstraction")]
    NotALambda,
}

/// `db_z(M)`:
///
/// ```text
/// db_z(x)    = x
/// db_z(↑M)   = ↑db_z(M)
/// db_z(M N)  = db_z(M) db_z(N)
/// db_z(λx M) = λz {z x} db_z(M)
/// ```
pub fn db_named(z: &VarName, m: &Term) -> Term {
    match m {
        Term::Var(_) => m.clone(),
        Term::Up(n) => Term::up(db_named(z, n)),
        Term::App(f, a) => Term::app(db_named(z, f), db_named(z, a)),
        Term::Lam(x, body) => {
            let inner = db_named(z, body);
            let rename = Renaming::new(z.clone(), x.clone());
            Term::lam(z.clone(), apply_renaming(&rename, &inner))
        }
    }
}

/// Decides `m =α n` by syntactic comparison of `db_z` forms.
pub fn alpha_eq_with(m: &Term, n: &Term, z: &VarName) -> bool {
    db_named(z, m) == db_named(z, n)
}

/// [`alpha_eq_with`] at the default variable `z`.
pub fn alpha_eq(m: &Term, n: &Term) -> bool {
    alpha_eq_with(m, n, &default_canon_var())
}

/// One application of the axiom: `λx B ↦ λy {y x}B`.
pub fn alpha_axiom_rename(m: &Term, y: &VarName) -> Result<Term, AlphaError> {
    match m {
        Term::Lam(x, body) => Ok(Term::lam(
            y.clone(),
            apply_renaming(&Renaming::new(y.clone(), x.clone()), body),
        )),
        _ => Err(AlphaError::NotALambda),
    }
}

/// Number of `Lam` nodes, i.e. positions where the axiom can fire.
pub fn lambda_positions(m: &Term) -> usize {
    match m {
        Term::Var(_) => 0,
        Term::Up(n) => lambda_positions(n),
        Term::App(f, a) => lambda_positions(f) + lambda_positions(a),
        Term::Lam(_, b) => 1 + lambda_positions(b),
    }
}

/// Rewrites the `index`-th `Lam` node (pre-order, from 0) with the axiom.
/// Returns `None` if there are not that many lambdas.
pub fn rename_at(m: &Term, index: usize, y: &VarName) -> Option<Term> {
    fn go(m: &Term, index: &mut usize, y: &VarName) -> Option<Term> {
        match m {
            Term::Var(_) => None,
            Term::Up(n) => go(n, index, y).map(Term::up),
            Term::App(f, a) => {
                if let Some(f2) = go(f, index, y) {
                    return Some(Term::app(f2, (**a).clone()));
                }
                go(a, index, y).map(|a2| Term::app((**f).clone(), a2))
            }
            Term::Lam(x, b) => {
                if *index == 0 {
                    return alpha_axiom_rename(m, y).ok();
                }
                *index -= 1;
                go(b, index, y).map(|b2| Term::lam(x.clone(), b2))
            }
        }
    }
    let mut index = index;
    go(m, &mut index, y)
}

/// A seeded random walk through the axiom closed under congruence.
///
/// Each step picks a lambda position uniformly (pre-order numbering) and a
/// name uniformly from `name_pool`, using ChaCha8 seeded from `seed`.
///
/// # Panics
///
/// If `name_pool` is empty.
pub fn random_alpha_walk(m: &Term, steps: usize, name_pool: &[VarName], seed: u64) -> Term {
    assert!(!name_pool.is_empty(), "name pool must not be empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = m.clone();
    for _ in 0..steps {
        // renaming preserves binder count, so this is constant along the walk
        let positions = lambda_positions(&current);
        if positions == 0 {
            break;
        }
        let at = rng.gen_range(0..positions);
        let name = &name_pool[rng.gen_range(0..name_pool.len())];
        current = rename_at(&current, at, name).expect("position is in range");
    }
    current
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(s: &str) -> VarName {
        VarName::new(s).unwrap()
    }

    fn var(s: &str) -> Term {
        Term::Var(v(s))
    }

    fn lam(x: &str, b: Term) -> Term {
        Term::lam(v(x), b)
    }

    #[test]
    fn canonical_forms() {
        let z = v("z");
        assert_eq!(
            db_named(&z, &lam("x", lam("y", var("y")))),
            lam("z", lam("z", var("z")))
        );
        assert_eq!(
            db_named(&z, &lam("x", lam("y", var("x")))),
            lam("z", lam("z", Term::up(var("z"))))
        );
        assert_eq!(db_named(&z, &lam("y", var("x"))), lam("z", Term::up(var("x"))));
        assert_eq!(db_named(&z, &var("x")), var("x"));
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let z = v("z");
        let m = lam("x", Term::app(lam("z", var("x")), Term::up(var("z"))));
        let once = db_named(&z, &m);
        assert_eq!(db_named(&z, &once), once);
    }

    #[test]
    fn equivalence_chain() {
        // λx z =α λy z =α λz ↑z =α λx ↑z =α λy ↑z
        let chain = [
            lam("x", var("z")),
            lam("y", var("z")),
            lam("z", Term::up(var("z"))),
            lam("x", Term::up(var("z"))),
            lam("y", Term::up(var("z"))),
        ];
        for a in &chain {
            for b in &chain {
                assert!(alpha_eq(a, b), "{a:?} vs {b:?}");
            }
        }
        assert!(alpha_eq(
            &lam("x", lam("z", var("x"))),
            &lam("y", lam("z", var("y")))
        ));
    }

    #[test]
    fn weakened_binder_is_distinct() {
        // db_z: λz z against λz ↑x
        assert!(!alpha_eq(&lam("x", var("x")), &lam("x", Term::up(var("x")))));
    }

    #[test]
    fn axiom_instances() {
        assert_eq!(alpha_axiom_rename(&lam("x", var("x")), &v("y")).unwrap(), lam("y", var("y")));
        assert_eq!(
            alpha_axiom_rename(&lam("x", var("z")), &v("z")).unwrap(),
            lam("z", Term::up(var("z")))
        );
        assert_eq!(
            alpha_axiom_rename(&lam("x", var("z")), &v("x")).unwrap(),
            lam("x", Term::up(var("z")))
        );
        assert_eq!(alpha_axiom_rename(&var("x"), &v("y")), Err(AlphaError::NotALambda));
        assert_eq!(
            alpha_axiom_rename(&Term::up(lam("x", var("x"))), &v("y")),
            Err(AlphaError::NotALambda)
        );
    }

    #[test]
    fn walk_edge_cases() {
        let pool = [v("y")];
        let m = lam("a", Term::app(var("a"), lam("b", var("a"))));
        assert_eq!(random_alpha_walk(&m, 0, &pool, 7), m);
        assert_eq!(random_alpha_walk(&var("x"), 5, &pool, 42), var("x"));
        for seed in 0..32 {
            assert_eq!(random_alpha_walk(&lam("x", var("x")), 1, &pool, seed), lam("y", var("y")));
        }
    }

    #[test]
    fn walk_is_deterministic_and_sound() {
        let pool = [v("x"), v("y"), v("z")];
        let m = lam("x", Term::app(lam("y", Term::app(var("x"), var("y"))), Term::up(var("z"))));
        for seed in 0..64 {
            let a = random_alpha_walk(&m, 6, &pool, seed);
            assert_eq!(a, random_alpha_walk(&m, 6, &pool, seed));
            assert!(alpha_eq(&a, &m));
        }
    }

    #[test]
    fn rename_at_preorder() {
        let m = Term::app(lam("a", lam("b", var("a"))), lam("c", var("c")));
        assert_eq!(lambda_positions(&m), 3);
        let second = rename_at(&m, 1, &v("q")).unwrap();
        assert_eq!(
            second,
            Term::app(lam("a", lam("q", Term::up(var("a")))), lam("c", var("c")))
        );
        let third = rename_at(&m, 2, &v("q")).unwrap();
        assert_eq!(third, Term::app(lam("a", lam("b", var("a"))), lam("q", var("q"))));
        assert!(rename_at(&m, 3, &v("q")).is_none());
    }
}
