//! Context-indexed derivations and generalized de Bruijn terms.
//!
//! The judgement `Γ ⊢ M` has exactly one derivation for every `Γ` and `M`.
//! Rules, in the order they are usually listed:
//!
//! ```text
//! AxNil   nil ⊢ x
//! AxHere  Γ,x ⊢ x
//! Weak    Γ ⊢ x  /  Γ,z ⊢ x          (z ≠ x)
//! AppR    Γ ⊢ M   Γ ⊢ N  /  Γ ⊢ M N
//! UpNil   nil ⊢ M  /  nil ⊢ ↑M
//! UpCons  Γ ⊢ M  /  Γ,x ⊢ ↑M
//! LamR    Γ,x ⊢ M  /  Γ ⊢ λx M
//! ```
//!
//! Reading a derivation bottom-up gives `‖Γ ⊢ M‖`, a term over
//! `x | 1 | A B | λA | ↑A` where `1` points at the nearest binder and free
//! variables stay named.
//!
//! Orientation: [`Renaming`] lifts are consumed from the *end* of the list,
//! while [`chain_rename`] consumes its context from the *front*.

use std::fmt;

use thiserror::Error;

use crate::kernel::{apply_renaming, Context, Renaming, Term, VarName};

/// Generalized de Bruijn term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DbTerm {
    Var(VarName),
    /// Reference to the nearest enclosing binder.
    One,
    App(Box<DbTerm>, Box<DbTerm>),
    Lam(Box<DbTerm>),
    Up(Box<DbTerm>),
}

impl DbTerm {
    pub fn app(fun: DbTerm, arg: DbTerm) -> DbTerm {
        DbTerm::App(Box::new(fun), Box::new(arg))
    }

    pub fn lam(body: DbTerm) -> DbTerm {
        DbTerm::Lam(Box::new(body))
    }

    pub fn up(inner: DbTerm) -> DbTerm {
        DbTerm::Up(Box::new(inner))
    }

    pub fn size(&self) -> usize {
        match self {
            DbTerm::Var(_) | DbTerm::One => 1,
            DbTerm::App(f, a) => 1 + f.size() + a.size(),
            DbTerm::Lam(b) | DbTerm::Up(b) => 1 + b.size(),
        }
    }
}

pub fn dbterm_eq(a: &DbTerm, b: &DbTerm) -> bool {
    a == b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    AxNil,
    AxHere,
    Weak,
    AppR,
    UpNil,
    UpCons,
    LamR,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::AxNil,
        Rule::AxHere,
        Rule::Weak,
        Rule::AppR,
        Rule::UpNil,
        Rule::UpCons,
        Rule::LamR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::AxNil => "AxNil",
            Rule::AxHere => "AxHere",
            Rule::Weak => "Weak",
            Rule::AppR => "AppR",
            Rule::UpNil => "UpNil",
            Rule::UpCons => "UpCons",
            Rule::LamR => "LamR",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::AxNil | Rule::AxHere => 0,
            Rule::AppR => 2,
            Rule::Weak | Rule::UpNil | Rule::UpCons | Rule::LamR => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A derivation tree for `context ⊢ subject`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub context: Context,
    pub subject: Term,
    pub premises: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("{rule} expects {expected} premise(s), found {found}")]
    Arity {
        rule: Rule,
        expected: usize,
        found: usize,
    },
    #[error("{rule} does not match the conclusion: {reason}")]
    Shape { rule: Rule, reason: &'static str },
}

impl Derivation {
    fn node(rule: Rule, context: &Context, subject: &Term, premises: Vec<Derivation>) -> Self {
        Derivation {
            rule,
            context: context.clone(),
            subject: subject.clone(),
            premises,
        }
    }

    /// Number of judgements in the tree.
    pub fn node_count(&self) -> usize {
        1 + self.premises.iter().map(Derivation::node_count).sum::<usize>()
    }

    /// Checks that every node is a correct instance of its rule.
    pub fn check(&self) -> Result<(), DerivationError> {
        let rule = self.rule;
        if self.premises.len() != rule.arity() {
            return Err(DerivationError::Arity {
                rule,
                expected: rule.arity(),
                found: self.premises.len(),
            });
        }
        let shape = |ok: bool, reason: &'static str| {
            if ok {
                Ok(())
            } else {
                Err(DerivationError::Shape { rule, reason })
            }
        };
        let ctx = &self.context;
        match rule {
            Rule::AxNil => {
                shape(ctx.is_nil(), "context must be nil")?;
                shape(matches!(self.subject, Term::Var(_)), "subject must be a variable")?;
            }
            Rule::AxHere => {
                let ok = match (&self.subject, ctx.vars().last()) {
                    (Term::Var(x), Some(last)) => x == last,
                    _ => false,
                };
                shape(ok, "context must end in the subject variable")?;
            }
            Rule::Weak => {
                let p = &self.premises[0];
                let Term::Var(x) = &self.subject else {
                    return shape(false, "subject must be a variable");
                };
                let Some((rest, last)) = ctx.split_last() else {
                    return shape(false, "context must be nonempty");
                };
                shape(last != x, "weakened variable must differ from the subject")?;
                shape(p.context == rest && p.subject == self.subject, "premise must be Γ ⊢ x")?;
            }
            Rule::AppR => {
                let Term::App(f, a) = &self.subject else {
                    return shape(false, "subject must be an application");
                };
                let (l, r) = (&self.premises[0], &self.premises[1]);
                shape(
                    l.context == *ctx && r.context == *ctx && l.subject == **f && r.subject == **a,
                    "premises must be Γ ⊢ M and Γ ⊢ N",
                )?;
            }
            Rule::UpNil => {
                let Term::Up(n) = &self.subject else {
                    return shape(false, "subject must be a weakening");
                };
                let p = &self.premises[0];
                shape(ctx.is_nil(), "context must be nil")?;
                shape(p.context.is_nil() && p.subject == **n, "premise must be nil ⊢ M")?;
            }
            Rule::UpCons => {
                let Term::Up(n) = &self.subject else {
                    return shape(false, "subject must be a weakening");
                };
                let Some((rest, _)) = ctx.split_last() else {
                    return shape(false, "context must be nonempty");
                };
                let p = &self.premises[0];
                shape(p.context == rest && p.subject == **n, "premise must be Γ ⊢ M")?;
            }
            Rule::LamR => {
                let Term::Lam(x, b) = &self.subject else {
                    return shape(false, "subject must be an abstraction");
                };
                let p = &self.premises[0];
                shape(
                    p.context == ctx.extended(x.clone()) && p.subject == **b,
                    "premise must be Γ,x ⊢ M",
                )?;
            }
        }
        self.premises.iter().try_for_each(Derivation::check)
    }
}

/// The rule whose conclusion matches `g ⊢ m`. Exactly one always does.
pub fn rule_for(g: &Context, m: &Term) -> Rule {
    match m {
        Term::Var(x) => match g.vars().last() {
            None => Rule::AxNil,
            Some(last) if last == x => Rule::AxHere,
            Some(_) => Rule::Weak,
        },
        Term::App(..) => Rule::AppR,
        Term::Up(_) if g.is_nil() => Rule::UpNil,
        Term::Up(_) => Rule::UpCons,
        Term::Lam(..) => Rule::LamR,
    }
}

/// Builds the unique derivation of `g ⊢ m`.
pub fn derive(g: &Context, m: &Term) -> Derivation {
    let rule = rule_for(g, m);
    let premises = match (rule, m) {
        (Rule::AxNil | Rule::AxHere, _) => vec![],
        (Rule::Weak, _) => {
            let (rest, _) = g.split_last().expect("Weak has a nonempty context");
            vec![derive(&rest, m)]
        }
        (Rule::AppR, Term::App(f, a)) => vec![derive(g, f), derive(g, a)],
        (Rule::UpNil, Term::Up(n)) => vec![derive(g, n)],
        (Rule::UpCons, Term::Up(n)) => {
            let (rest, _) = g.split_last().expect("UpCons has a nonempty context");
            vec![derive(&rest, n)]
        }
        (Rule::LamR, Term::Lam(x, b)) => vec![derive(&g.extended(x.clone()), b)],
        _ => unreachable!("rule_for returned a rule that does not fit the term"),
    };
    Derivation::node(rule, g, m, premises)
}

/// `‖g ⊢ m‖` by the direct equations:
///
/// ```text
/// ‖nil ⊢ x‖    = x
/// ‖Γ,x ⊢ x‖    = 1
/// ‖Γ,z ⊢ x‖    = ↑‖Γ ⊢ x‖         (z ≠ x)
/// ‖Γ ⊢ M N‖    = ‖Γ ⊢ M‖ ‖Γ ⊢ N‖
/// ‖nil ⊢ ↑M‖   = ↑‖nil ⊢ M‖
/// ‖Γ,x ⊢ ↑M‖   = ↑‖Γ ⊢ M‖
/// ‖Γ ⊢ λx M‖   = λ‖Γ,x ⊢ M‖
/// ```
pub fn translate(g: &Context, m: &Term) -> DbTerm {
    let mut scope = g.vars().to_vec();
    translate_in(&mut scope, m)
}

fn translate_in(scope: &mut Vec<VarName>, m: &Term) -> DbTerm {
    match m {
        Term::Var(x) => match scope.iter().rposition(|w| w == x) {
            Some(i) => up_n(DbTerm::One, scope.len() - 1 - i),
            None => up_n(DbTerm::Var(x.clone()), scope.len()),
        },
        Term::App(f, a) => DbTerm::app(translate_in(scope, f), translate_in(scope, a)),
        Term::Up(n) => match scope.pop() {
            None => DbTerm::up(translate_in(scope, n)),
            Some(w) => {
                let inner = translate_in(scope, n);
                scope.push(w);
                DbTerm::up(inner)
            }
        },
        Term::Lam(x, b) => {
            scope.push(x.clone());
            let body = translate_in(scope, b);
            scope.pop();
            DbTerm::lam(body)
        }
    }
}

fn up_n(mut a: DbTerm, n: usize) -> DbTerm {
    for _ in 0..n {
        a = DbTerm::up(a);
    }
    a
}

/// `‖Γ ⊢ M‖` read off a derivation tree node by node.
pub fn translate_derivation(d: &Derivation) -> DbTerm {
    match d.rule {
        Rule::AxNil => match &d.subject {
            Term::Var(x) => DbTerm::Var(x.clone()),
            _ => unreachable!("AxNil concludes a variable"),
        },
        Rule::AxHere => DbTerm::One,
        Rule::Weak | Rule::UpNil | Rule::UpCons => DbTerm::up(translate_derivation(&d.premises[0])),
        Rule::AppR => DbTerm::app(
            translate_derivation(&d.premises[0]),
            translate_derivation(&d.premises[1]),
        ),
        Rule::LamR => DbTerm::lam(translate_derivation(&d.premises[0])),
    }
}

/// `db_z(A)` on generalized terms: `1 ↦ z`, `λA ↦ λz db_z(A)`, the rest
/// homomorphically.
pub fn db_named_generalized(z: &VarName, a: &DbTerm) -> Term {
    match a {
        DbTerm::Var(x) => Term::Var(x.clone()),
        DbTerm::One => Term::Var(z.clone()),
        DbTerm::App(f, b) => Term::app(db_named_generalized(z, f), db_named_generalized(z, b)),
        DbTerm::Lam(b) => Term::lam(z.clone(), db_named_generalized(z, b)),
        DbTerm::Up(b) => Term::up(db_named_generalized(z, b)),
    }
}

/// `{z/Γ}M`, defined by `{z/nil}M = M` and `{z/x,Δ}M = {z/Δ}{z x}_Δ M`.
pub fn chain_rename(z: &VarName, g: &Context, m: &Term) -> Term {
    let vars = g.vars();
    let mut current = m.clone();
    for (i, x) in vars.iter().enumerate() {
        let delta: Context = vars[i + 1..].iter().cloned().collect();
        current = apply_renaming(&Renaming::with_lifts(z.clone(), x.clone(), delta), &current);
    }
    current
}

/// Second decision route for alpha-equivalence: compare `‖nil ⊢ M‖`.
pub fn alpha_eq_via_context(m: &Term, n: &Term) -> bool {
    let nil = Context::nil();
    translate(&nil, m) == translate(&nil, n)
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

    fn ctx(names: &[&str]) -> Context {
        names.iter().map(|n| v(n)).collect()
    }

    /// λx λy x y z
    fn xyz() -> Term {
        Term::lam(
            v("x"),
            Term::lam(v("y"), Term::app(Term::app(var("x"), var("y")), var("z"))),
        )
    }

    /// λλ (↑1) 1 ↑↑z
    fn xyz_db() -> DbTerm {
        DbTerm::lam(DbTerm::lam(DbTerm::app(
            DbTerm::app(DbTerm::up(DbTerm::One), DbTerm::One),
            up_n(DbTerm::Var(v("z")), 2),
        )))
    }

    fn leaf(rule: Rule, g: &[&str], m: Term) -> Derivation {
        Derivation::node(rule, &ctx(g), &m, vec![])
    }

    fn node(rule: Rule, g: &[&str], m: Term, premises: Vec<Derivation>) -> Derivation {
        Derivation::node(rule, &ctx(g), &m, premises)
    }

    #[test]
    fn derivation_of_xyz() {
        let xy = Term::app(var("x"), var("y"));
        let body = Term::app(xy.clone(), var("z"));
        let expected = node(
            Rule::LamR,
            &[],
            xyz(),
            vec![node(
                Rule::LamR,
                &["x"],
                Term::lam(v("y"), body.clone()),
                vec![node(
                    Rule::AppR,
                    &["x", "y"],
                    body,
                    vec![
                        node(
                            Rule::AppR,
                            &["x", "y"],
                            xy,
                            vec![
                                node(Rule::Weak, &["x", "y"], var("x"), vec![leaf(Rule::AxHere, &["x"], var("x"))]),
                                leaf(Rule::AxHere, &["x", "y"], var("y")),
                            ],
                        ),
                        node(
                            Rule::Weak,
                            &["x", "y"],
                            var("z"),
                            vec![node(Rule::Weak, &["x"], var("z"), vec![leaf(Rule::AxNil, &[], var("z"))])],
                        ),
                    ],
                )],
            )],
        );
        let d = derive(&Context::nil(), &xyz());
        assert_eq!(d, expected);
        assert_eq!(d.node_count(), 10);
        d.check().unwrap();
    }

    #[test]
    fn axiom_leaves() {
        assert_eq!(derive(&ctx(&["x"]), &var("x")), leaf(Rule::AxHere, &["x"], var("x")));
        assert_eq!(derive(&Context::nil(), &var("x")), leaf(Rule::AxNil, &[], var("x")));
    }

    #[test]
    fn translations() {
        assert_eq!(translate(&Context::nil(), &xyz()), xyz_db());
        assert_eq!(translate(&ctx(&["x"]), &var("x")), DbTerm::One);
        assert_eq!(translate(&Context::nil(), &var("x")), DbTerm::Var(v("x")));
        assert_eq!(translate(&ctx(&["x", "y"]), &var("x")), DbTerm::up(DbTerm::One));
        // ‖x,x ⊢ ↑x‖ = ↑‖x ⊢ x‖ = ↑1
        assert_eq!(
            translate(&ctx(&["x", "x"]), &Term::up(var("x"))),
            DbTerm::up(DbTerm::One)
        );
    }

    #[test]
    fn translation_matches_derivation_fold() {
        let g = ctx(&["y", "x"]);
        let m = Term::app(Term::up(Term::lam(v("z"), Term::up_n(var("x"), 2))), var("y"));
        assert_eq!(translate_derivation(&derive(&g, &m)), translate(&g, &m));
    }

    #[test]
    fn generalized_readback() {
        let expected = |b: &str| {
            Term::lam(
                v(b),
                Term::lam(
                    v(b),
                    Term::app(Term::app(Term::up(var(b)), var(b)), Term::up_n(var("z"), 2)),
                ),
            )
        };
        assert_eq!(db_named_generalized(&v("z"), &xyz_db()), expected("z"));
        assert_eq!(db_named_generalized(&v("x"), &xyz_db()), expected("x"));
        assert_eq!(db_named_generalized(&v("z"), &DbTerm::One), var("z"));
    }

    #[test]
    fn chain_examples() {
        let z = v("z");
        let m = Term::lam(v("q"), Term::app(var("x"), Term::up(var("y"))));
        assert_eq!(chain_rename(&z, &Context::nil(), &m), m);
        assert_eq!(
            chain_rename(&z, &ctx(&["x"]), &m),
            apply_renaming(&Renaming::new(z.clone(), v("x")), &m)
        );
        // {z y}{z x}_y x = {z y}↑z = ↑z
        assert_eq!(chain_rename(&z, &ctx(&["x", "y"]), &var("x")), Term::up(var("z")));
        // {z/Δ,x} y = ↑{z/Δ} y for y ≠ x
        assert_eq!(
            chain_rename(&z, &ctx(&["a", "x"]), &var("y")),
            Term::up(chain_rename(&z, &ctx(&["a"]), &var("y")))
        );
        assert_eq!(chain_rename(&z, &ctx(&["a", "x"]), &var("x")), var("z"));
    }

    #[test]
    fn structural_equality_on_db_terms() {
        assert!(dbterm_eq(&DbTerm::One, &DbTerm::One));
        assert!(!dbterm_eq(&DbTerm::lam(DbTerm::One), &DbTerm::lam(DbTerm::up(DbTerm::One))));
        assert!(!dbterm_eq(&DbTerm::Var(v("x")), &DbTerm::Var(v("y"))));
    }

    #[test]
    fn context_route_decides() {
        assert!(alpha_eq_via_context(
            &Term::lam(v("x"), var("z")),
            &Term::lam(v("y"), Term::up(var("z")))
        ));
        assert!(alpha_eq_via_context(&xyz(), &xyz()));
        assert!(!alpha_eq_via_context(
            &Term::lam(v("x"), var("x")),
            &Term::lam(v("x"), Term::up(var("x")))
        ));
    }

    #[test]
    fn checker_rejects_bad_nodes() {
        let mut d = derive(&ctx(&["x", "y"]), &var("x"));
        d.check().unwrap();
        d.premises[0].context = ctx(&["y"]);
        assert!(matches!(d.check(), Err(DerivationError::Shape { rule: Rule::Weak, .. })));

        let bad = leaf(Rule::AxNil, &["x"], var("x"));
        assert!(matches!(bad.check(), Err(DerivationError::Shape { .. })));

        let weak_same = node(Rule::Weak, &["x"], var("x"), vec![leaf(Rule::AxNil, &[], var("x"))]);
        assert!(weak_same.check().is_err());

        let missing = node(Rule::LamR, &[], Term::lam(v("x"), var("x")), vec![]);
        assert_eq!(
            missing.check(),
            Err(DerivationError::Arity { rule: Rule::LamR, expected: 1, found: 0 })
        );
    }

    #[test]
    fn rule_names_round_trip() {
        for r in Rule::ALL {
            assert_eq!(Rule::from_name(r.name()), Some(r));
        }
        assert_eq!(Rule::from_name("Beta"), None);
    }
}
