//! Free variables indexed by weakening depth.
//!
//! `FV(M)` is a sequence `FV_0(M), FV_1(M), ...`; a variable sits at level
//! `i` when it escapes the term under `i` pending weakenings.
//!
//! ```text
//! FV_0(x) = {x}                     FV_{i+1}(x) = ∅
//! FV_0(↑M) = ∅                      FV_{i+1}(↑M) = FV_i(M)
//! FV_0(λx M) = (FV_0(M) - {x}) ∪ FV_1(M)
//! FV_{i+1}(λx M) = FV_{i+2}(M)
//! ```
//!
//! On generalized de Bruijn terms `1` contributes nothing and `λ` merges
//! levels 0 and 1 without removing anything. That the two agree through
//! `‖nil ⊢ M‖` is checked by the property suite; no proof is encoded here.

use std::collections::BTreeSet;

use crate::debruijn::DbTerm;
use crate::kernel::{Term, VarName};

/// A level-indexed sequence of variable sets with an implicit empty tail.
///
/// Always trimmed: the last stored level is nonempty, so two sequences are
/// equal exactly when their stored lists are.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct FvSeq {
    levels: Vec<BTreeSet<VarName>>,
}

impl FvSeq {
    pub fn empty() -> Self {
        FvSeq::default()
    }

    /// `{x}, ∅, ∅, ...`
    pub fn singleton(x: VarName) -> Self {
        FvSeq {
            levels: vec![BTreeSet::from([x])],
        }
    }

    pub fn from_levels(levels: Vec<BTreeSet<VarName>>) -> Self {
        let mut seq = FvSeq { levels };
        seq.trim();
        seq
    }

    /// `FV_i`; empty beyond the stored length.
    pub fn level(&self, i: usize) -> BTreeSet<VarName> {
        self.levels.get(i).cloned().unwrap_or_default()
    }

    pub fn levels(&self) -> &[BTreeSet<VarName>] {
        &self.levels
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Nonempty levels in increasing order.
    pub fn nonempty_levels(&self) -> impl Iterator<Item = (usize, &BTreeSet<VarName>)> {
        self.levels.iter().enumerate().filter(|(_, s)| !s.is_empty())
    }

    /// `∅, FV_0, FV_1, ...`
    pub fn shifted(&self) -> FvSeq {
        if self.levels.is_empty() {
            return FvSeq::empty();
        }
        let mut levels = Vec::with_capacity(self.levels.len() + 1);
        levels.push(BTreeSet::new());
        levels.extend(self.levels.iter().cloned());
        FvSeq { levels }
    }

    /// Level-wise union.
    pub fn union(&self, other: &FvSeq) -> FvSeq {
        let len = self.levels.len().max(other.levels.len());
        let levels = (0..len)
            .map(|i| {
                let mut s = self.level(i);
                s.extend(other.level(i));
                s
            })
            .collect();
        FvSeq::from_levels(levels)
    }

    /// Folds level 1 into level 0 (after removing `bound` from level 0) and
    /// shifts everything above down by one.
    fn close(&self, bound: Option<&VarName>) -> FvSeq {
        let mut base = self.level(0);
        if let Some(x) = bound {
            base.remove(x);
        }
        base.extend(self.level(1));
        let mut levels = vec![base];
        levels.extend(self.levels.iter().skip(2).cloned());
        FvSeq::from_levels(levels)
    }

    fn trim(&mut self) {
        while self.levels.last().is_some_and(BTreeSet::is_empty) {
            self.levels.pop();
        }
    }
}

pub fn fv_term(m: &Term) -> FvSeq {
    match m {
        Term::Var(x) => FvSeq::singleton(x.clone()),
        Term::Up(n) => fv_term(n).shifted(),
        Term::App(f, a) => fv_term(f).union(&fv_term(a)),
        Term::Lam(x, b) => fv_term(b).close(Some(x)),
    }
}

pub fn fv_dbterm(a: &DbTerm) -> FvSeq {
    match a {
        DbTerm::Var(x) => FvSeq::singleton(x.clone()),
        DbTerm::One => FvSeq::empty(),
        DbTerm::Up(n) => fv_dbterm(n).shifted(),
        DbTerm::App(f, b) => fv_dbterm(f).union(&fv_dbterm(b)),
        DbTerm::Lam(b) => fv_dbterm(b).close(None),
    }
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

    fn set(names: &[&str]) -> BTreeSet<VarName> {
        names.iter().map(|n| v(n)).collect()
    }

    fn seq(levels: &[&[&str]]) -> FvSeq {
        FvSeq::from_levels(levels.iter().map(|l| set(l)).collect())
    }

    #[test]
    fn term_examples() {
        assert_eq!(fv_term(&var("x")), seq(&[&["x"]]));
        assert_eq!(fv_term(&Term::up(var("x"))), seq(&[&[], &["x"]]));
        assert_eq!(fv_term(&Term::lam(v("x"), Term::up(var("x")))), seq(&[&["x"]]));
        assert_eq!(
            fv_term(&Term::lam(v("x"), Term::lam(v("x"), Term::up(var("x"))))),
            FvSeq::empty()
        );
    }

    #[test]
    fn dbterm_examples() {
        let upx = DbTerm::up(DbTerm::Var(v("x")));
        assert_eq!(fv_dbterm(&DbTerm::lam(upx.clone())), seq(&[&["x"]]));
        assert_eq!(fv_dbterm(&DbTerm::lam(DbTerm::lam(upx))), seq(&[&["x"]]));
        assert_eq!(fv_dbterm(&DbTerm::One), FvSeq::empty());
    }

    #[test]
    fn canonical_trimming() {
        assert_eq!(seq(&[&[], &[]]), FvSeq::empty());
        assert_eq!(seq(&[&["a"], &[]]).levels().len(), 1);
        assert_eq!(FvSeq::empty().shifted(), FvSeq::empty());
        assert!(seq(&[&["a"]]).level(7).is_empty());
    }

    #[test]
    fn application_is_levelwise_union() {
        let m = Term::app(Term::up(var("x")), Term::app(var("y"), Term::up_n(var("z"), 2)));
        assert_eq!(fv_term(&m), seq(&[&["y"], &["x"], &["z"]]));
    }

    #[test]
    fn binder_removes_only_level_zero() {
        // λx (x ↑x ↑↑x): the level-1 x falls to level 0, level 2 to level 1
        let m = Term::lam(
            v("x"),
            Term::app(Term::app(var("x"), Term::up(var("x"))), Term::up_n(var("x"), 2)),
        );
        assert_eq!(fv_term(&m), seq(&[&["x"], &["x"]]));
    }
}
