//! Executable property suites.
//!
//! Every lemma and theorem about renamings, canonical forms and
//! translations is stated here as a check over random (and, for small
//! sizes, exhaustively enumerated) inputs. The CLI `selftest` command and
//! the acceptance test both run these.

use std::collections::HashMap;
use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::alpha::{alpha_eq, alpha_eq_with, db_named, default_canon_var, random_alpha_walk};
use crate::debruijn::{
    alpha_eq_via_context, chain_rename, db_named_generalized, derive, translate,
    translate_derivation, DbTerm,
};
use crate::freevars::{fv_dbterm, fv_term, FvSeq};
use crate::kernel::{apply_renaming, Context, Renaming, Term, VarName};
use crate::syntax::{
    parse_context, parse_dbterm, parse_derivation, parse_fvseq, parse_renaming, parse_term,
    print_context, print_dbterm, print_derivation, print_fvseq, print_renaming, print_term,
};
use crate::testgen::{
    enumerate_terms, gen_context, gen_dbterm, gen_name, gen_renaming, gen_term, pool,
    shrink_term,
};

/// Longest random walk used by the soundness oracle.
pub const MAX_WALK_STEPS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestConfig {
    /// Random cases per suite.
    pub cases: usize,
    /// Random cases for the random-walk soundness oracle.
    pub walk_cases: usize,
    /// Size bound for random terms.
    pub max_size: usize,
    /// Size bound for exhaustive sweeps (over the pool `x,y`).
    pub exhaustive_size: usize,
    pub seed: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            cases: 10_000,
            walk_cases: 2_000,
            max_size: 30,
            exhaustive_size: 7,
            seed: 0,
        }
    }
}

impl SelftestConfig {
    /// `walk_cases` follows `cases` at a fifth of it.
    pub fn with_cases(cases: usize) -> Self {
        SelftestConfig {
            cases,
            walk_cases: (cases / 5).max(1),
            ..SelftestConfig::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub counterexample: Option<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} {:>7} checks {:>4} failures  {:>8.3}s",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.failures,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(cx) = &self.counterexample {
            write!(f, "\n     counterexample: {cx}")?;
        }
        Ok(())
    }
}

/// Tallies checks for one suite and keeps the first counterexample.
struct Tally {
    checked: usize,
    failures: usize,
    counterexample: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            failures: 0,
            counterexample: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(describe());
            }
        }
    }

    /// Checks a property of one term; a failure is shrunk before reporting.
    fn check_term(&mut self, m: &Term, holds: impl Fn(&Term) -> bool, context: impl FnOnce() -> String) {
        let ok = holds(m);
        self.check(ok, || {
            let small = shrink_term(m, |t| !holds(t));
            format!("{} with M = {}", context(), print_term(&small))
        });
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failures += other.failures;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }

    fn finish(self, name: &'static str, started: Instant) -> SuiteReport {
        SuiteReport {
            name,
            checked: self.checked,
            failures: self.failures,
            counterexample: self.counterexample,
            elapsed: started.elapsed(),
        }
    }
}

pub type SuiteFn = fn(&SelftestConfig) -> SuiteReport;

/// All suites, sorted by name.
pub const SUITES: &[(&str, SuiteFn)] = &[
    ("alpha_equivalence_relation", alpha_equivalence_relation),
    ("binder_unpacking", binder_unpacking),
    ("db_lemma", db_lemma),
    ("derivation_uniqueness", derivation_uniqueness),
    ("fv_alpha_invariance", fv_alpha_invariance),
    ("fv_theorem", fv_theorem),
    ("generalized_route", generalized_route),
    ("lemma_commute", lemma_commute),
    ("lemma_trans", lemma_trans),
    ("multi_binder_example", multi_binder_example),
    ("renaming_db_commute", renaming_db_commute),
    ("renaming_preserves_alpha", renaming_preserves_alpha),
    ("soundness_oracle", soundness_oracle),
    ("syntax_round_trip", syntax_round_trip),
    ("translate_alpha_invariance", translate_alpha_invariance),
    ("two_route_agreement", two_route_agreement),
];

pub fn suite(name: &str) -> Option<SuiteFn> {
    SUITES.iter().find(|(n, _)| *n == name).map(|(_, f)| *f)
}

/// Runs every suite in parallel; reports come back sorted by name.
pub fn run_all(cfg: &SelftestConfig) -> Vec<SuiteReport> {
    let mut reports: Vec<SuiteReport> = SUITES.par_iter().map(|(_, f)| f(cfg)).collect();
    reports.sort_by_key(|r| r.name);
    reports
}

fn suite_rng(cfg: &SelftestConfig, name: &str) -> ChaCha8Rng {
    // FNV-1a of the suite name keeps the streams of different suites apart
    let tag = name
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3));
    ChaCha8Rng::seed_from_u64(cfg.seed ^ tag)
}

fn xyz_pool() -> Vec<VarName> {
    pool(&["x", "y", "z"])
}

fn xy_pool() -> Vec<VarName> {
    pool(&["x", "y"])
}

fn xyzw_pool() -> Vec<VarName> {
    pool(&["x", "y", "z", "w"])
}

/// A partner for `m`: an alpha-variant from a random walk, the canonical
/// form, or an unrelated random term.
fn partner<R: Rng>(rng: &mut R, m: &Term, cfg: &SelftestConfig, names: &[VarName]) -> Term {
    match rng.gen_range(0..4) {
        0 | 1 => {
            let steps = rng.gen_range(0..=MAX_WALK_STEPS);
            random_alpha_walk(m, steps, names, rng.gen())
        }
        2 => db_named(&gen_name(rng, names), m),
        _ => gen_term(rng, cfg.max_size, names),
    }
}

/// `{x1 x2}_Γ {x2 x3}_Γ M = {x1 x3}_Γ M`
pub fn lemma_trans(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "lemma_trans");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let (x1, x2, x3) = (gen_name(&mut rng, &names), gen_name(&mut rng, &names), gen_name(&mut rng, &names));
        let g = gen_context(&mut rng, cfg.max_size, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let f12 = Renaming::with_lifts(x1.clone(), x2.clone(), g.clone());
        let f23 = Renaming::with_lifts(x2.clone(), x3.clone(), g.clone());
        let f13 = Renaming::with_lifts(x1.clone(), x3.clone(), g.clone());
        t.check_term(
            &m,
            |m| apply_renaming(&f12, &apply_renaming(&f23, m)) == apply_renaming(&f13, m),
            || format!("{} {} vs {}", f12, f23, f13),
        );
    }
    t.finish("lemma_trans", started)
}

/// `{y x}_Γ F_{x,Γ} M = F_{y,Γ} {y x}_Γ M`
pub fn lemma_commute(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "lemma_commute");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let (x, y) = (gen_name(&mut rng, &names), gen_name(&mut rng, &names));
        let f = gen_renaming(&mut rng, cfg.max_size, &names);
        let g = gen_context(&mut rng, cfg.max_size, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let yx = Renaming::with_lifts(y.clone(), x.clone(), g.clone());
        let f_x = f.lifted(x.clone()).lifted_by(&g);
        let f_y = f.lifted(y.clone()).lifted_by(&g);
        t.check_term(
            &m,
            |m| apply_renaming(&yx, &apply_renaming(&f_x, m)) == apply_renaming(&f_y, &apply_renaming(&yx, m)),
            || format!("{yx} {f_x} vs {f_y} {yx}"),
        );
    }
    t.finish("lemma_commute", started)
}

/// `db_z(M) =α M`, for every `z` in the pool, under both deciders.
pub fn db_lemma(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "db_lemma");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let m = gen_term(&mut rng, cfg.max_size, &names);
        for z in &names {
            t.check_term(
                &m,
                |m| {
                    let d = db_named(z, m);
                    alpha_eq(&d, m) && alpha_eq_via_context(&d, m)
                },
                || format!("z = {z}"),
            );
        }
    }
    t.finish("db_lemma", started)
}

/// `F(db_z M) = db_z(F M)`
pub fn renaming_db_commute(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "renaming_db_commute");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let f = gen_renaming(&mut rng, cfg.max_size, &names);
        let z = gen_name(&mut rng, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        t.check_term(
            &m,
            |m| apply_renaming(&f, &db_named(&z, m)) == db_named(&z, &apply_renaming(&f, m)),
            || format!("F = {f}, z = {z}"),
        );
    }
    t.finish("renaming_db_commute", started)
}

/// `M =α N` implies `F(M) =α F(N)`.
pub fn renaming_preserves_alpha(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "renaming_preserves_alpha");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let f = gen_renaming(&mut rng, cfg.max_size, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let n = partner(&mut rng, &m, cfg, &names);
        let ok = !alpha_eq(&m, &n) || alpha_eq(&apply_renaming(&f, &m), &apply_renaming(&f, &n));
        t.check(ok, || format!("F = {f}, M = {m}, N = {n}"));
    }
    t.finish("renaming_preserves_alpha", started)
}

/// `λx M =α λy N` iff `{z x}M =α {z y}N`.
pub fn binder_unpacking(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "binder_unpacking");
    let mut t = Tally::new();
    let mut positives = 0;
    for _ in 0..cfg.cases {
        let (x, z) = (gen_name(&mut rng, &names), gen_name(&mut rng, &names));
        let m = gen_term(&mut rng, cfg.max_size.saturating_sub(1).max(1), &names);
        let lam_m = Term::lam(x.clone(), m.clone());
        let lam_n = if rng.gen_bool(0.5) {
            let steps = rng.gen_range(1..=MAX_WALK_STEPS);
            random_alpha_walk(&lam_m, steps, &names, rng.gen())
        } else {
            Term::lam(gen_name(&mut rng, &names), gen_term(&mut rng, cfg.max_size - 1, &names))
        };
        let Term::Lam(y, n) = &lam_n else {
            unreachable!("walks keep the root binder")
        };
        let lhs = alpha_eq(&lam_m, &lam_n);
        let rhs = alpha_eq(
            &apply_renaming(&Renaming::new(z.clone(), x.clone()), &m),
            &apply_renaming(&Renaming::new(z.clone(), y.clone()), n),
        );
        positives += usize::from(lhs);
        t.check(lhs == rhs, || {
            format!("λ{x} M = {lam_m}, λ{y} N = {lam_n}, z = {z}: {lhs} vs {rhs}")
        });
    }
    // both directions must actually be exercised
    t.check(positives > 0 && positives < cfg.cases, || {
        format!("degenerate sample: {positives} of {} pairs equivalent", cfg.cases)
    });
    t.finish("binder_unpacking", started)
}

/// `db_z‖nil ⊢ M‖ = db_z(M)` and agreement of the two deciders, over every
/// small term and a random sample of larger ones.
pub fn two_route_agreement(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let small = xy_pool();
    let names = xyz_pool();
    let nil = Context::nil();
    let z_default = default_canon_var();

    let sweep: Vec<Term> = enumerate_terms(cfg.exhaustive_size, &small).collect();
    let mut t = sweep
        .par_chunks(1024)
        .map(|chunk| {
            let mut t = Tally::new();
            for m in chunk {
                for z in &names {
                    t.check_term(
                        m,
                        |m| db_named_generalized(z, &translate(&Context::nil(), m)) == db_named(z, m),
                        || format!("z = {z}"),
                    );
                }
            }
            t
        })
        .reduce(Tally::new, |mut a, b| {
            a.merge(b);
            a
        });

    // Deciders agree on all pairs iff the two canonical keys induce the
    // same partition, i.e. they are in bijection over the swept set.
    let mut by_db: HashMap<Term, DbTerm> = HashMap::new();
    let mut by_ctx: HashMap<DbTerm, Term> = HashMap::new();
    for m in &sweep {
        let key_db = db_named(&z_default, m);
        let key_ctx = translate(&nil, m);
        let a = by_db.entry(key_db.clone()).or_insert_with(|| key_ctx.clone()).clone();
        let b = by_ctx.entry(key_ctx.clone()).or_insert_with(|| key_db.clone()).clone();
        t.check(a == key_ctx && b == key_db, || {
            format!("deciders split differently at M = {m}")
        });
    }

    let mut rng = suite_rng(cfg, "two_route_agreement");
    let large_min = (cfg.exhaustive_size + 1).min(cfg.max_size);
    for _ in 0..cfg.cases {
        let size = rng.gen_range(large_min..=cfg.max_size.max(large_min));
        let m = crate::testgen::gen_term_of_size(&mut rng, size, &names);
        let z = gen_name(&mut rng, &names);
        t.check_term(
            &m,
            |m| db_named_generalized(&z, &translate(&nil, m)) == db_named(&z, m),
            || format!("z = {z}"),
        );
        let n = partner(&mut rng, &m, cfg, &names);
        t.check(alpha_eq_via_context(&m, &n) == alpha_eq(&m, &n), || {
            format!("deciders disagree on M = {m}, N = {n}")
        });
    }
    t.finish("two_route_agreement", started)
}

/// `db_z‖Γ ⊢ M‖ = {z/Γ}db_z(M)` and `{z/Γ}λz{z x}M = λz{z/Γ,x}M`.
pub fn generalized_route(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "generalized_route");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let z = gen_name(&mut rng, &names);
        let x = gen_name(&mut rng, &names);
        let g = gen_context(&mut rng, cfg.max_size, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        t.check_term(
            &m,
            |m| db_named_generalized(&z, &translate(&g, m)) == chain_rename(&z, &g, &db_named(&z, m)),
            || format!("z = {z}, Γ = {g}"),
        );
        let gx = g.extended(x.clone());
        t.check_term(
            &m,
            |m| {
                let inner = Term::lam(z.clone(), apply_renaming(&Renaming::new(z.clone(), x.clone()), m));
                chain_rename(&z, &g, &inner) == Term::lam(z.clone(), chain_rename(&z, &gx, m))
            },
            || format!("qq: z = {z}, Γ = {g}, x = {x}"),
        );
    }
    t.finish("generalized_route", started)
}

/// Random walks through the axiom never leave the class, and the decision
/// does not depend on the canonicalization variable.
pub fn soundness_oracle(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let zs = xyzw_pool();
    let mut rng = suite_rng(cfg, "soundness_oracle");
    let mut t = Tally::new();
    for _ in 0..cfg.walk_cases {
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let steps = rng.gen_range(0..=MAX_WALK_STEPS);
        let walked = random_alpha_walk(&m, steps, &names, rng.gen());
        t.check(alpha_eq(&m, &walked), || {
            format!("walk of {steps} steps: M = {m}, walk = {walked}")
        });
        let other = gen_term(&mut rng, cfg.max_size, &names);
        for n in [&walked, &other] {
            let reference = alpha_eq_with(&m, n, &zs[0]);
            for z in &zs[1..] {
                t.check(alpha_eq_with(&m, n, z) == reference, || {
                    format!("z-dependence at z = {z}: M = {m}, N = {n}")
                });
            }
        }
    }
    t.finish("soundness_oracle", started)
}

/// `FV‖nil ⊢ M‖ = FV(M)`
pub fn fv_theorem(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let nil = Context::nil();
    let holds = |m: &Term| fv_dbterm(&translate(&Context::nil(), m)) == fv_term(m);
    let mut t = Tally::new();
    for m in enumerate_terms(cfg.exhaustive_size, &xy_pool()) {
        t.check_term(&m, holds, || "exhaustive".to_owned());
    }
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "fv_theorem");
    for _ in 0..cfg.cases {
        let m = gen_term(&mut rng, cfg.max_size, &names);
        t.check_term(&m, holds, || {
            format!("FV‖nil ⊢ M‖ = {}", print_fvseq(&fv_dbterm(&translate(&nil, &m))))
        });
    }
    t.finish("fv_theorem", started)
}

/// Empirical: alpha-equivalent terms have the same free-variable sequence.
pub fn fv_alpha_invariance(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "fv_alpha_invariance");
    let mut t = Tally::new();
    // exhaustive: one FV sequence per alpha class, classes keyed by db_z
    let z = default_canon_var();
    let mut class_fv: HashMap<Term, (Term, FvSeq)> = HashMap::new();
    for m in enumerate_terms(cfg.exhaustive_size, &xy_pool()) {
        let fv = fv_term(&m);
        let (rep, rep_fv) = class_fv.entry(db_named(&z, &m)).or_insert_with(|| (m.clone(), fv.clone()));
        t.check(*rep_fv == fv, || format!("M = {rep}, N = {m}"));
    }
    for _ in 0..cfg.cases {
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let n = partner(&mut rng, &m, cfg, &names);
        let ok = !alpha_eq(&m, &n) || fv_term(&m) == fv_term(&n);
        t.check(ok, || format!("M = {m}, N = {n}"));
    }
    t.finish("fv_alpha_invariance", started)
}

/// `M =α N` implies `‖Γ ⊢ M‖ = ‖Γ ⊢ N‖` for arbitrary `Γ`.
pub fn translate_alpha_invariance(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "translate_alpha_invariance");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let g = gen_context(&mut rng, cfg.max_size, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let n = partner(&mut rng, &m, cfg, &names);
        let ok = !alpha_eq(&m, &n) || translate(&g, &m) == translate(&g, &n);
        t.check(ok, || format!("Γ = {g}, M = {m}, N = {n}"));
    }
    t.finish("translate_alpha_invariance", started)
}

/// `derive` is deterministic, rule-correct, and `translate` is its fold.
pub fn derivation_uniqueness(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "derivation_uniqueness");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let g = gen_context(&mut rng, cfg.max_size, &names);
        let m = gen_term(&mut rng, cfg.max_size, &names);
        t.check_term(
            &m,
            |m| {
                let d = derive(&g, m);
                d == derive(&g, m)
                    && d.context == g
                    && d.subject == *m
                    && d.check().is_ok()
                    && translate_derivation(&d) == translate(&g, m)
            },
            || format!("Γ = {g}"),
        );
    }
    t.finish("derivation_uniqueness", started)
}

/// `λx1 λx2 M =α λz λz {z/x1,x2}M`
pub fn multi_binder_example(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "multi_binder_example");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let (x1, x2, z) = (gen_name(&mut rng, &names), gen_name(&mut rng, &names), gen_name(&mut rng, &names));
        let m = gen_term(&mut rng, cfg.max_size, &names);
        let g = Context::new(vec![x1.clone(), x2.clone()]);
        t.check_term(
            &m,
            |m| {
                let lhs = Term::lam(x1.clone(), Term::lam(x2.clone(), m.clone()));
                let rhs = Term::lam(z.clone(), Term::lam(z.clone(), chain_rename(&z, &g, m)));
                alpha_eq(&lhs, &rhs)
            },
            || format!("x1 = {x1}, x2 = {x2}, z = {z}"),
        );
    }
    t.finish("multi_binder_example", started)
}

/// Reflexivity, symmetry and transitivity on sampled triples.
pub fn alpha_equivalence_relation(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = xyz_pool();
    let mut rng = suite_rng(cfg, "alpha_equivalence_relation");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let a = gen_term(&mut rng, cfg.max_size, &names);
        let b = partner(&mut rng, &a, cfg, &names);
        let c = partner(&mut rng, &b, cfg, &names);
        t.check(alpha_eq(&a, &a), || format!("not reflexive at {a}"));
        t.check(alpha_eq(&a, &b) == alpha_eq(&b, &a), || format!("not symmetric at {a}, {b}"));
        let trans = !(alpha_eq(&a, &b) && alpha_eq(&b, &c)) || alpha_eq(&a, &c);
        t.check(trans, || format!("not transitive at {a}, {b}, {c}"));
    }
    t.finish("alpha_equivalence_relation", started)
}

fn random_fvseq<R: Rng>(rng: &mut R, names: &[VarName]) -> FvSeq {
    let len = rng.gen_range(0..5);
    let levels = (0..len)
        .map(|_| (0..rng.gen_range(0..3)).map(|_| gen_name(rng, names)).collect())
        .collect();
    FvSeq::from_levels(levels)
}

/// `parse ∘ print = id` for every printable type, and printing a parsed
/// printout is a fixed point.
pub fn syntax_round_trip(cfg: &SelftestConfig) -> SuiteReport {
    let started = Instant::now();
    let names = pool(&["x", "y", "z", "w'", "_v1"]);
    let mut rng = suite_rng(cfg, "syntax_round_trip");
    let mut t = Tally::new();
    for _ in 0..cfg.cases {
        let m = gen_term(&mut rng, cfg.max_size, &names);
        t.check_term(
            &m,
            |m| {
                let s = print_term(m);
                parse_term(&s).is_ok_and(|p| p == *m && print_term(&p) == s)
            },
            || "term".to_owned(),
        );

        let a = gen_dbterm(&mut rng, cfg.max_size, &names);
        let s = print_dbterm(&a);
        t.check(parse_dbterm(&s).is_ok_and(|p| p == a), || format!("dbterm {s}"));

        let g = gen_context(&mut rng, cfg.max_size, &names);
        let s = print_context(&g);
        t.check(parse_context(&s).is_ok_and(|p| p == g), || format!("context {s}"));

        let f = gen_renaming(&mut rng, cfg.max_size, &names);
        let s = print_renaming(&f);
        t.check(parse_renaming(&s).is_ok_and(|p| p == f), || format!("renaming {s}"));

        let fv = if rng.gen_bool(0.5) {
            fv_term(&m)
        } else {
            random_fvseq(&mut rng, &names)
        };
        let s = print_fvseq(&fv);
        t.check(parse_fvseq(&s).is_ok_and(|p| p == fv), || format!("fv sequence {s}"));

        let d = derive(&g, &gen_term(&mut rng, cfg.max_size.min(12), &names));
        let s = print_derivation(&d);
        t.check(parse_derivation(&s).is_ok_and(|p| p == d), || format!("derivation\n{s}"));
    }
    t.finish("syntax_round_trip", started)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_are_sorted_and_unique() {
        let names: Vec<&str> = SUITES.iter().map(|(n, _)| *n).collect();
        let mut sorted = names.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(names, sorted);
        for (name, f) in SUITES {
            let report = f(&SelftestConfig {
                cases: 20,
                walk_cases: 5,
                max_size: 10,
                exhaustive_size: 3,
                seed: 1,
            });
            assert_eq!(report.name, *name);
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn failures_are_reported_with_shrunk_terms() {
        let mut t = Tally::new();
        let m = parse_term(r"\x. x (\y. y y) z").unwrap();
        t.check_term(&m, |m| m.binders().len() < 2, || "two binders".to_owned());
        assert_eq!(t.failures, 1);
        let cx = t.counterexample.unwrap();
        assert!(cx.ends_with(r"M = \x. \y. y y") || cx.contains(r"\x.\y."), "{cx}");
    }
}
