//! Terms with explicit weakening and the renaming functions `{y x}_Γ`.
//!
//! ```text
//! M, N ::= x | M N | λx M | ↑M
//! F    ::= {y x} | F_x
//! ```
//!
//! `↑M` marks that `M` does not see the nearest enclosing binder. A renaming
//! `{y x}` sends `x` to `y` and weakens every other variable; `F_x` is the
//! same function pushed under a binder for `x`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Words that can never be used as variable names.
///
/// `1` is excluded by the character rules already; `nil` denotes the empty
/// context in the surface syntax.
pub const RESERVED_NAMES: &[&str] = &["nil"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NameError {
    #[error("variable name is empty")]
    Empty,
    #[error("invalid character {ch:?} in variable name {name:?}")]
    InvalidChar { name: String, ch: char },
    #[error("variable name {0:?} must start with a letter or '_'")]
    BadStart(String),
    #[error("{0:?} is a reserved word")]
    Reserved(String),
}

/// A variable name.
///
/// ASCII letters, digits, `_` and `'`, starting with a letter or `_`.
/// Cloning is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarName(Arc<str>);

impl VarName {
    pub fn new(name: &str) -> Result<Self, NameError> {
        let mut chars = name.chars();
        let first = chars.next().ok_or(NameError::Empty)?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return Err(NameError::BadStart(name.to_owned()));
        }
        if let Some(ch) = name
            .chars()
            .find(|&c| !(c.is_ascii_alphanumeric() || c == '_' || c == '\''))
        {
            return Err(NameError::InvalidChar {
                name: name.to_owned(),
                ch,
            });
        }
        if RESERVED_NAMES.contains(&name) {
            return Err(NameError::Reserved(name.to_owned()));
        }
        Ok(VarName(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for VarName {
    type Error = NameError;

    fn try_from(name: &str) -> Result<Self, Self::Error> {
        VarName::new(name)
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A term of the calculus. Plain tree, no sharing and no normalization:
/// `Up(Up(x))` and `Up(x)` are different values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(VarName),
    App(Box<Term>, Box<Term>),
    Lam(VarName, Box<Term>),
    Up(Box<Term>),
}

impl Term {
    pub fn var(name: VarName) -> Term {
        Term::Var(name)
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    pub fn lam(binder: VarName, body: Term) -> Term {
        Term::Lam(binder, Box::new(body))
    }

    pub fn up(inner: Term) -> Term {
        Term::Up(Box::new(inner))
    }

    /// `↑ⁿ t`
    pub fn up_n(mut inner: Term, n: usize) -> Term {
        for _ in 0..n {
            inner = Term::up(inner);
        }
        inner
    }

    /// Number of constructors in the tree.
    pub fn size(&self) -> usize {
        term_size(self)
    }

    /// Binder names in pre-order.
    pub fn binders(&self) -> Vec<VarName> {
        fn go(m: &Term, out: &mut Vec<VarName>) {
            match m {
                Term::Var(_) => {}
                Term::App(f, a) => {
                    go(f, out);
                    go(a, out);
                }
                Term::Lam(x, b) => {
                    out.push(x.clone());
                    go(b, out);
                }
                Term::Up(n) => go(n, out),
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }
}

pub fn term_size(m: &Term) -> usize {
    match m {
        Term::Var(_) => 1,
        Term::App(f, a) => 1 + term_size(f) + term_size(a),
        Term::Lam(_, b) | Term::Up(b) => 1 + term_size(b),
    }
}

/// Syntactic identity. Binder names are compared literally; use
/// [`crate::alpha::alpha_eq`] for the alpha-insensitive comparison.
pub fn term_eq(a: &Term, b: &Term) -> bool {
    a == b
}

/// A finite list of variables, repetitions allowed. The last element is the
/// most recently bound one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context(Vec<VarName>);

impl Context {
    pub fn nil() -> Self {
        Context(Vec::new())
    }

    pub fn new(vars: Vec<VarName>) -> Self {
        Context(vars)
    }

    pub fn is_nil(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn vars(&self) -> &[VarName] {
        &self.0
    }

    /// `Γ,x` as a new context.
    pub fn extended(&self, x: VarName) -> Context {
        let mut vars = self.0.clone();
        vars.push(x);
        Context(vars)
    }

    /// `Γ,Δ`
    pub fn concat(&self, other: &Context) -> Context {
        let mut vars = self.0.clone();
        vars.extend(other.0.iter().cloned());
        Context(vars)
    }

    /// Splits `Γ,x` into `(Γ, x)`.
    pub fn split_last(&self) -> Option<(Context, &VarName)> {
        self.0
            .split_last()
            .map(|(x, rest)| (Context(rest.to_vec()), x))
    }

    /// Splits `x,Δ` into `(x, Δ)`.
    pub fn split_first(&self) -> Option<(&VarName, Context)> {
        self.0
            .split_first()
            .map(|(x, rest)| (x, Context(rest.to_vec())))
    }
}

impl From<Vec<VarName>> for Context {
    fn from(vars: Vec<VarName>) -> Self {
        Context(vars)
    }
}

impl FromIterator<VarName> for Context {
    fn from_iter<I: IntoIterator<Item = VarName>>(iter: I) -> Self {
        Context(iter.into_iter().collect())
    }
}

/// The function `{target source}_lifts`.
///
/// `lifts` is stored outermost-first: `{y x}_{a,b}` has lifts `[a, b]` and
/// application peels `b` first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Renaming {
    pub target: VarName,
    pub source: VarName,
    pub lifts: Context,
}

impl Renaming {
    /// `{target source}`
    pub fn new(target: VarName, source: VarName) -> Self {
        Renaming {
            target,
            source,
            lifts: Context::nil(),
        }
    }

    pub fn with_lifts(target: VarName, source: VarName, lifts: Context) -> Self {
        Renaming {
            target,
            source,
            lifts,
        }
    }

    /// `F_x`
    pub fn lifted(&self, x: VarName) -> Renaming {
        lift_renaming(self, x)
    }

    /// `F_Δ`, i.e. `F_{d1}` then `F_{d1,d2}` and so on.
    pub fn lifted_by(&self, delta: &Context) -> Renaming {
        Renaming {
            target: self.target.clone(),
            source: self.source.clone(),
            lifts: self.lifts.concat(delta),
        }
    }

    pub fn apply(&self, m: &Term) -> Term {
        apply_renaming(self, m)
    }
}

pub fn lift_renaming(f: &Renaming, x: VarName) -> Renaming {
    Renaming {
        target: f.target.clone(),
        source: f.source.clone(),
        lifts: f.lifts.extended(x),
    }
}

/// Applies `{y x}_Γ` to a term by structural recursion.
///
/// The live lifts are kept on a stack: a binder pushes its name, a `↑`
/// under a nonempty lift list pops the last one for the duration of the
/// subterm.
pub fn apply_renaming(f: &Renaming, m: &Term) -> Term {
    let mut lifts = f.lifts.vars().to_vec();
    apply_with(&f.target, &f.source, &mut lifts, m)
}

fn apply_with(target: &VarName, source: &VarName, lifts: &mut Vec<VarName>, m: &Term) -> Term {
    match m {
        Term::App(fun, arg) => Term::app(
            apply_with(target, source, lifts, fun),
            apply_with(target, source, lifts, arg),
        ),
        Term::Lam(w, body) => {
            lifts.push(w.clone());
            let body = apply_with(target, source, lifts, body);
            lifts.pop();
            Term::lam(w.clone(), body)
        }
        Term::Up(inner) => match lifts.pop() {
            // {y x}(↑M) = ↑M
            None => m.clone(),
            // F_w(↑M) = ↑F(M)
            Some(w) => {
                let inner = apply_with(target, source, lifts, inner);
                lifts.push(w);
                Term::up(inner)
            }
        },
        Term::Var(v) => rename_var(target, source, lifts, v),
    }
}

/// `F_w(w) = w`, `F_w(v) = ↑F(v)`, `{y x}(x) = y`, `{y x}(v) = ↑v`,
/// unrolled over the lift list.
fn rename_var(target: &VarName, source: &VarName, lifts: &[VarName], v: &VarName) -> Term {
    match lifts.iter().rposition(|w| w == v) {
        Some(i) => Term::up_n(Term::Var(v.clone()), lifts.len() - 1 - i),
        None if v == source => Term::up_n(Term::Var(target.clone()), lifts.len()),
        None => Term::up_n(Term::Var(v.clone()), lifts.len() + 1),
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

    fn yx() -> Renaming {
        Renaming::new(v("y"), v("x"))
    }

    #[test]
    fn renaming_table_equations() {
        assert_eq!(yx().apply(&var("x")), var("y"));
        assert_eq!(yx().apply(&var("z")), Term::up(var("z")));
        assert_eq!(yx().apply(&Term::up(var("w"))), Term::up(var("w")));
        // {yx}λz x = λz {yx}_z x = λz ↑{yx}x = λz ↑y
        assert_eq!(
            yx().apply(&Term::lam(v("z"), var("x"))),
            Term::lam(v("z"), Term::up(var("y")))
        );
    }

    #[test]
    fn lifted_renaming_clauses() {
        let f = lift_renaming(&yx(), v("w"));
        assert_eq!(f.lifts, Context::new(vec![v("w")]));
        assert_eq!(f.apply(&var("w")), var("w"));
        // F_w(z) = ↑F(z) = ↑↑z
        assert_eq!(f.apply(&var("z")), Term::up_n(var("z"), 2));
        assert_eq!(f.apply(&var("x")), Term::up(var("y")));
        // F_w(↑M) = ↑F(M)
        assert_eq!(f.apply(&Term::up(var("x"))), Term::up(var("y")));
        let g = lift_renaming(&Renaming::with_lifts(v("y"), v("x"), Context::new(vec![v("a")])), v("b"));
        assert_eq!(g.lifts, Context::new(vec![v("a"), v("b")]));
    }

    #[test]
    fn last_lift_is_peeled_first() {
        // {y x}_{a,b} ↑a = ↑{y x}_a a = ↑a
        let f = Renaming::with_lifts(v("y"), v("x"), Context::new(vec![v("a"), v("b")]));
        assert_eq!(f.apply(&Term::up(var("a"))), Term::up(var("a")));
        // {y x}_{a,b} ↑b = ↑{y x}_a b = ↑↑{y x} b = ↑↑↑b
        assert_eq!(f.apply(&Term::up(var("b"))), Term::up_n(var("b"), 3));
        // repeated lift names: the innermost occurrence wins
        let g = Renaming::with_lifts(v("y"), v("x"), Context::new(vec![v("a"), v("q"), v("a")]));
        assert_eq!(g.apply(&var("a")), var("a"));
        assert_eq!(g.apply(&Term::up(var("a"))), Term::up_n(var("a"), 2));
    }

    #[test]
    fn self_renaming_is_legal() {
        let xx = Renaming::new(v("x"), v("x"));
        assert_eq!(xx.apply(&var("z")), Term::up(var("z")));
        assert_eq!(xx.apply(&var("x")), var("x"));
    }

    #[test]
    fn sizes() {
        assert_eq!(term_size(&var("x")), 1);
        assert_eq!(term_size(&Term::up(var("x"))), 2);
        let m = Term::lam(v("x"), Term::app(var("x"), var("x")));
        assert_eq!(term_size(&m), 4);
    }

    #[test]
    fn structural_equality() {
        assert!(term_eq(&var("x"), &var("x")));
        assert!(!term_eq(
            &Term::lam(v("x"), var("x")),
            &Term::lam(v("y"), var("y"))
        ));
        assert!(term_eq(&Term::up(var("x")), &Term::up(var("x"))));
        assert!(!term_eq(&Term::up(var("x")), &Term::up_n(var("x"), 2)));
    }

    #[test]
    fn binders_are_preserved() {
        let m = Term::lam(
            v("a"),
            Term::app(Term::lam(v("x"), var("x")), Term::up(Term::lam(v("a"), var("y")))),
        );
        let out = Renaming::with_lifts(v("a"), v("x"), Context::new(vec![v("y")])).apply(&m);
        assert_eq!(out.binders(), m.binders());
    }

    #[test]
    fn name_validation() {
        assert!(VarName::new("x'").is_ok());
        assert!(VarName::new("_a1").is_ok());
        assert_eq!(VarName::new(""), Err(NameError::Empty));
        assert!(matches!(VarName::new("1"), Err(NameError::BadStart(_))));
        assert!(matches!(VarName::new("'x"), Err(NameError::BadStart(_))));
        assert!(matches!(VarName::new("a b"), Err(NameError::InvalidChar { .. })));
        assert!(matches!(VarName::new("a^"), Err(NameError::InvalidChar { .. })));
        assert!(matches!(VarName::new("λ"), Err(NameError::BadStart(_))));
        assert!(matches!(VarName::new("nil"), Err(NameError::Reserved(_))));
    }

    #[test]
    fn context_splits() {
        let g = Context::new(vec![v("x"), v("x"), v("y"), v("z")]);
        let (rest, last) = g.split_last().unwrap();
        assert_eq!(last, &v("z"));
        assert_eq!(rest.len(), 3);
        let (first, rest) = g.split_first().unwrap();
        assert_eq!(first, &v("x"));
        assert_eq!(rest, Context::new(vec![v("x"), v("y"), v("z")]));
        assert!(Context::nil().split_last().is_none());
        assert_eq!(Context::nil().concat(&g), g);
        assert_eq!(g.concat(&Context::nil()), g);
    }
}
