//! Randomized property suites over every layer of the library.
//!
//! Each case draws from its own generator stream (keyed by suite name,
//! field and case index), so results do not depend on execution order and
//! the parallel and sequential runners agree byte for byte.

use std::fmt::Write as _;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::category::{
    biproduct, cokernel, cokernel_colift, compose, identity, is_epi, is_iso, is_mono, kernel,
    kernel_lift, lift_through_mono, same_quotient, same_subobject, Mor,
};
use crate::constructions::{
    epi_mono_factorize, epi_mono_factorize_reversed, is_cokernel_of, is_exact_pair,
    is_kernel_of, pullback, pushout, reproduces,
};
use crate::error::Result;
use crate::gen::{GenConfig, Generator, SquareKind};
use crate::scalar::ScalarField;
use crate::snake::{chase_delta, snake_sequence, SnakeInput, SnakeOutput, DELTA_SIGN};
use crate::squares::{
    analyze, cokernel_square, compose_h, decompose_semicartesian, kernel_square, Square,
};

/// Outcome of one case. `hit` marks cases where the hypothesis of an
/// implication held, so suites can reject vacuous runs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Case {
    pub hit: bool,
    pub failure: Option<String>,
}

impl Case {
    fn pass(hit: bool) -> Self {
        Case { hit, failure: None }
    }

    fn fail(message: String) -> Self {
        Case { hit: false, failure: Some(message) }
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Ok(Case::fail(format!($($fmt)+)));
        }
    };
}

type CaseFn = fn(&mut Generator) -> Result<Case>;

/// Required share of hit cases, enforced from [`MIN_CASES_FOR_COVERAGE`]
/// cases on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coverage {
    Ignored,
    AtLeast(f64),
    Between(f64, f64),
}

pub const MIN_CASES_FOR_COVERAGE: usize = 50;

pub struct Suite {
    pub name: &'static str,
    pub coverage: Coverage,
    case: CaseFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Execution::Parallel;
        #[cfg(not(feature = "parallel"))]
        return Execution::Sequential;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: String,
    pub field: ScalarField,
    pub cases: usize,
    pub hits: usize,
    pub failed: usize,
    /// The first few failure messages, in case order.
    pub failures: Vec<String>,
}

const KEPT_FAILURES: usize = 5;

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} [{}] cases={} hits={} failed={}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.field,
            self.cases,
            self.hits,
            self.failed
        )
    }
}

impl Suite {
    pub fn run(&self, cfg: GenConfig, cases: usize, exec: Execution) -> SuiteReport {
        let tag = format!("{}/{}", self.name, cfg.field);
        let one = |index: usize| -> Case {
            match Generator::for_case(cfg, &tag, index as u64).and_then(|mut g| (self.case)(&mut g)) {
                Ok(case) => case,
                Err(e) => Case::fail(format!("error: {e}")),
            }
        };
        let results: Vec<Case> = match exec {
            Execution::Sequential => (0..cases).map(one).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => (0..cases).into_par_iter().map(one).collect(),
        };

        let hits = results.iter().filter(|c| c.hit).count();
        let mut failures: Vec<String> = results
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.failure.as_ref().map(|m| format!("case {i}: {m}")))
            .collect();
        if cases >= MIN_CASES_FOR_COVERAGE {
            let share = hits as f64 / cases as f64;
            let ok = match self.coverage {
                Coverage::Ignored => true,
                Coverage::AtLeast(lo) => share >= lo,
                Coverage::Between(lo, hi) => share >= lo && share <= hi,
            };
            if !ok {
                failures.push(format!(
                    "coverage: {hits}/{cases} hit cases, required {:?}",
                    self.coverage
                ));
            }
        }
        let failed = failures.len();
        failures.truncate(KEPT_FAILURES);
        SuiteReport { name: self.name.into(), field: cfg.field, cases, hits, failed, failures }
    }
}

pub fn suites() -> Vec<Suite> {
    let mut all = vec![
        suite("foundations.biproduct", Coverage::Ignored, biproduct_identities),
        suite("foundations.factorization", Coverage::AtLeast(0.05), factorization_unique),
        suite("foundations.kernel_lift", Coverage::AtLeast(0.2), kernel_lift_universal),
        suite("foundations.kernel_through_mono", Coverage::Ignored, kernel_through_mono),
        suite("foundations.lemma1", Coverage::Ignored, kernels_of_epis),
        suite("foundations.linalg", Coverage::Ignored, linalg),
        suite("foundations.mono_epi_iso", Coverage::Between(0.1, 0.9), mono_epi_iso),
        suite("foundations.same_kernel_cokernel", Coverage::Between(0.1, 0.9), same_kernel_cokernel),
        suite("snake.lemma", Coverage::Between(0.1, 0.9), snake_lemma),
        suite("snake.lemma_general_rows", Coverage::Ignored, snake_lemma_general),
        suite("snake.left_exact", Coverage::Ignored, left_exact),
        suite("snake.right_exact", Coverage::Ignored, right_exact),
        suite("snake.transport", Coverage::Ignored, transport),
        suite("snake.transport_dual", Coverage::Ignored, transport_dual),
        suite("squares.cartesian_right", Coverage::Between(0.1, 0.9), cartesian_right),
        suite("squares.cocartesian_left", Coverage::Between(0.1, 0.9), cocartesian_left),
        suite("squares.cokernel_square.cocartesian", Coverage::AtLeast(0.2), cokernel_square_cocartesian),
        suite("squares.cokernel_square.mono", Coverage::Ignored, cokernel_square_mono),
        suite("squares.composition", Coverage::Ignored, composition),
        suite("squares.decomposition", Coverage::Ignored, decomposition),
        suite("squares.epi_cancellation", Coverage::AtLeast(0.1), epi_cancellation),
        suite("squares.equivalence", Coverage::Between(0.1, 0.9), equivalence),
        suite("squares.kernel_square.cartesian", Coverage::AtLeast(0.2), kernel_square_cartesian),
        suite("squares.kernel_square.epi", Coverage::Ignored, kernel_square_epi),
        suite("squares.mono_cancellation", Coverage::AtLeast(0.1), mono_cancellation),
        suite("squares.partial_converse", Coverage::AtLeast(0.1), partial_converse),
    ];
    all.sort_by_key(|s| s.name);
    all
}

fn suite(name: &'static str, coverage: Coverage, case: CaseFn) -> Suite {
    Suite { name, coverage, case }
}

pub fn find_suite(name: &str) -> Option<Suite> {
    suites().into_iter().find(|s| s.name == name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelftestReport {
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }

    /// One line per suite followed by its kept failures, then a summary.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            let _ = writeln!(out, "{}", s.line());
            for f in &s.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        let failing = self.suites.iter().filter(|s| !s.passed()).count();
        let total: usize = self.suites.iter().map(|s| s.cases).sum();
        let _ = writeln!(
            out,
            "{} suites, {total} cases, {failing} failing suites",
            self.suites.len()
        );
        out
    }
}

/// Runs every suite over each field in turn; reports are ordered by field
/// then suite name.
pub fn run_all(seed: u64, cases: usize, fields: &[ScalarField], exec: Execution) -> SelftestReport {
    let mut reports = Vec::new();
    for &field in fields {
        let cfg = GenConfig::new(seed, field);
        for s in suites() {
            reports.push(s.run(cfg, cases, exec));
        }
    }
    SelftestReport { suites: reports }
}

pub fn default_fields() -> Vec<ScalarField> {
    vec![ScalarField::Prime(7), ScalarField::Rationals]
}

const KINDS: [SquareKind; 4] =
    [SquareKind::Universal, SquareKind::SemiCartesian, SquareKind::NotSemiCartesian, SquareKind::Any];

fn semi_square(g: &mut Generator) -> Result<Square> {
    let kind = g.pick(&[SquareKind::Universal, SquareKind::SemiCartesian]);
    if g.coin() {
        g.pullback_square(kind)
    } else {
        g.pushout_square(kind)
    }
}

fn semi(sq: &Square) -> Result<bool> {
    Ok(analyze(sq)?.is_semicartesian)
}

// Foundations.

fn linalg(g: &mut Generator) -> Result<Case> {
    let (rows, cols) = (g.dim(), g.dim());
    let m = g.matrix(rows, cols);
    let r = m.rref();
    ensure!(r.matrix.rref() == r, "rref is not idempotent on {m}");
    ensure!(m.transpose().rank() == r.rank(), "rank differs from its transpose on {m}");
    let n = m.nullspace_basis();
    ensure!(n.cols() + r.rank() == cols, "rank-nullity fails on {m}");
    ensure!(m.mul(&n).is_zero(), "nullspace basis not annihilated by {m}");
    let l = m.left_nullspace_basis();
    ensure!(l.rows() + r.rank() == rows && l.mul(&m).is_zero(), "left nullspace wrong on {m}");
    let x0 = g.matrix(cols, 1);
    let rhs = m.mul(&x0);
    match m.solve(&rhs)? {
        Some(x) => ensure!(m.mul(&x) == rhs, "solve returned a non-solution for {m}"),
        None => ensure!(false, "consistent system reported inconsistent for {m}"),
    }
    Ok(Case::pass(true))
}

fn kernel_lift_universal(g: &mut Generator) -> Result<Case> {
    let (x, y, z) = (g.random_obj(), g.random_obj(), g.random_obj());
    let f = g.morphism(x, y);
    let k = kernel(&f);
    ensure!(is_mono(&k.ker_mor) && compose(&f, &k.ker_mor)?.is_zero(), "kernel of {f} is not a mono into Ker");
    let t = compose(&k.ker_mor, &g.morphism(z, k.ker_obj))?;
    let phi = kernel_lift(&k, &t)?;
    ensure!(compose(&k.ker_mor, &phi)? == t, "kernel lift does not factor {t}");

    let c = cokernel(&f);
    ensure!(is_epi(&c.coker_mor) && compose(&c.coker_mor, &f)?.is_zero(), "cokernel of {f} is not an epi");
    let s = compose(&g.morphism(c.coker_obj, z), &c.coker_mor)?;
    let psi = cokernel_colift(&c, &s)?;
    ensure!(compose(&psi, &c.coker_mor)? == s, "cokernel colift does not factor {s}");

    let stray = g.morphism(z, x);
    let annihilated = compose(&f, &stray)?.is_zero();
    ensure!(kernel_lift(&k, &stray).is_ok() == annihilated, "lift of {stray} disagrees with f∘t = 0");
    Ok(Case::pass(!annihilated))
}

fn kernels_of_epis(g: &mut Generator) -> Result<Case> {
    // n a kernel of an epi q, not the canonical one.
    let x = g.random_obj();
    let y_dim = g.dim_at_most(x.dim);
    let y = g.obj(y_dim);
    let q = g.epi(x, y)?;
    let k = kernel(&q);
    let n = compose(&k.ker_mor, &g.iso(k.ker_obj)?)?;
    ensure!(is_kernel_of(&n, &q)?, "precondition: {n} is not a kernel of {q}");
    ensure!(is_cokernel_of(&q, &n)?, "epi {q} is not a cokernel of its kernel {n}");

    // Dually, q a cokernel of a mono n.
    let x = g.random_obj();
    let y_dim = g.dim_at_least(x.dim);
    let y = g.obj(y_dim);
    let n = g.mono(x, y)?;
    let c = cokernel(&n);
    let q = compose(&g.iso(c.coker_obj)?, &c.coker_mor)?;
    ensure!(is_cokernel_of(&q, &n)?, "precondition: {q} is not a cokernel of {n}");
    ensure!(is_kernel_of(&n, &q)?, "mono {n} is not a kernel of its cokernel {q}");
    Ok(Case::pass(true))
}

fn factorization_unique(g: &mut Generator) -> Result<Case> {
    let (x, y) = (g.random_obj(), g.random_obj());
    let f = g.morphism(x, y);
    let one = epi_mono_factorize(&f);
    let two = epi_mono_factorize_reversed(&f);
    for (label, fact) in [("canonical", &one), ("alternative", &two)] {
        ensure!(reproduces(fact, &f), "{label} factorization does not reproduce {f}");
        ensure!(is_epi(&fact.epi_q) && is_mono(&fact.mono_m), "{label} factors of {f} have the wrong type");
    }
    // The comparison iso is forced by m₂ being mono.
    let phi = lift_through_mono(&two.mono_m, &one.mono_m)?;
    ensure!(is_iso(&phi), "comparison {phi} is not an iso");
    ensure!(compose(&two.mono_m, &phi)? == one.mono_m, "m₂∘φ ≠ m₁ for {f}");
    ensure!(compose(&phi, &one.epi_q)? == two.epi_q, "φ∘q₁ ≠ q₂ for {f}");
    Ok(Case::pass(one != two))
}

fn same_kernel_cokernel(g: &mut Generator) -> Result<Case> {
    // Cokernels: with m mono, coker(mq) = coker(m) exactly when q is epi.
    let (y, mid) = (g.random_obj(), g.random_obj());
    let x_dim = g.dim_at_least(mid.dim);
    let x = g.obj(x_dim);
    let m = g.mono(mid, x)?;
    let q = if g.coin() && y.dim >= mid.dim { g.epi(y, mid)? } else { g.morphism(y, mid) };
    let mq = compose(&m, &q)?;
    let same = same_quotient(&cokernel(&mq).coker_mor, &cokernel(&m).coker_mor);
    ensure!(same == is_epi(&q), "coker(mq) = coker(m) is {same} but q epi is {}", is_epi(&q));

    // The direct half needs no assumption on m.
    let any_m = g.morphism(mid, x);
    let epi_q = if y.dim >= mid.dim { Some(g.epi(y, mid)?) } else { None };
    if let Some(eq) = &epi_q {
        let lhs = cokernel(&compose(&any_m, eq)?).coker_mor;
        ensure!(same_quotient(&lhs, &cokernel(&any_m).coker_mor), "epi q changed a cokernel");
    }

    // Kernels: with q epi, ker(mq) = ker(q) exactly when m is mono.
    let pre = g.random_obj();
    let img_dim = g.dim_at_most(pre.dim);
    let img = g.obj(img_dim);
    let q = g.epi(pre, img)?;
    let target = g.random_obj();
    let m = if g.coin() && target.dim >= img.dim { g.mono(img, target)? } else { g.morphism(img, target) };
    let same = same_subobject(&kernel(&compose(&m, &q)?).ker_mor, &kernel(&q).ker_mor);
    ensure!(same == is_mono(&m), "ker(mq) = ker(q) is {same} but m mono is {}", is_mono(&m));
    Ok(Case::pass(is_epi(&q) && is_mono(&m)))
}

fn kernel_through_mono(g: &mut Generator) -> Result<Case> {
    let a_obj = g.random_obj();
    let b_dim = g.dim_at_least(a_obj.dim);
    let b_obj = g.obj(b_dim);
    let x_dim = g.dim_at_least(b_dim);
    let x = g.obj(x_dim);
    let a = g.mono(a_obj, b_obj)?;
    let b = g.mono(b_obj, x)?;
    let ba = compose(&b, &a)?;
    let q = cokernel(&ba);
    let y_dim = g.dim_at_least(q.coker_obj.dim);
    let y = g.obj(y_dim);
    let c = compose(&g.mono(q.coker_obj, y)?, &q.coker_mor)?;
    ensure!(is_kernel_of(&ba, &c)?, "precondition: ba is not a kernel of {c}");
    ensure!(is_kernel_of(&a, &compose(&c, &b)?)?, "{a} is not a kernel of cb");
    Ok(Case::pass(true))
}

fn mono_epi_iso(g: &mut Generator) -> Result<Case> {
    let x = g.random_obj();
    let y = if g.coin() { x } else { g.random_obj() };
    let f = g.morphism(x, y);
    let iso = is_iso(&f);
    ensure!(iso == (is_mono(&f) && is_epi(&f)), "{f}: iso {iso} but mono {} epi {}", is_mono(&f), is_epi(&f));
    if iso {
        let inv = lift_through_mono(&f, &identity(y))?;
        ensure!(compose(&f, &inv)? == identity(y), "right inverse fails for {f}");
        ensure!(compose(&inv, &f)? == identity(x), "left inverse fails for {f}");
    }
    Ok(Case::pass(iso))
}

fn biproduct_identities(g: &mut Generator) -> Result<Case> {
    let (a, b) = (g.random_obj(), g.random_obj());
    let s = biproduct(a, b)?;
    ensure!(compose(&s.proj_p, &s.ins_i)? == identity(a), "pi ≠ 1 for {a} + {b}");
    ensure!(compose(&s.proj_q, &s.ins_i)?.is_zero(), "qi ≠ 0 for {a} + {b}");
    ensure!(compose(&s.proj_p, &s.ins_j)?.is_zero(), "pj ≠ 0 for {a} + {b}");
    ensure!(compose(&s.proj_q, &s.ins_j)? == identity(b), "qj ≠ 1 for {a} + {b}");
    let sum = compose(&s.ins_i, &s.proj_p)?.add(&compose(&s.ins_j, &s.proj_q)?)?;
    ensure!(sum == identity(s.sum_obj), "ip + jq ≠ 1 for {a} + {b}");
    Ok(Case::pass(true))
}

// Squares.

fn equivalence(g: &mut Generator) -> Result<Case> {
    let kind = g.pick(&KINDS);
    let sq = if g.coin() { g.pullback_square(kind)? } else { g.pushout_square(kind)? };
    let an = analyze(&sq)?;
    ensure!(an.conditions_agree(), "conditions disagree on {sq:?}");
    ensure!(an.cond_i == is_epi(&an.e) && an.cond_ii == is_mono(&an.m), "condition flags inconsistent");
    ensure!(an.is_cartesian == is_iso(&an.e) && an.is_cocartesian == is_iso(&an.m), "universality flags inconsistent");
    ensure!(compose(&an.pb.f, &an.e)? == sq.top && compose(&an.pb.g, &an.e)? == sq.left, "e triangles fail");
    ensure!(compose(&an.m, &an.po.r)? == sq.right && compose(&an.m, &an.po.s)? == sq.bottom, "m triangles fail");
    let expected = match kind {
        SquareKind::Universal | SquareKind::SemiCartesian => Some(true),
        SquareKind::NotSemiCartesian => Some(false),
        SquareKind::Any => None,
    };
    if let Some(expected) = expected {
        ensure!(an.is_semicartesian == expected, "{kind:?} square classified {}", an.is_semicartesian);
    }
    Ok(Case::pass(an.is_semicartesian))
}

fn partial_converse(g: &mut Generator) -> Result<Case> {
    let sq = semi_square(g)?;
    let an = analyze(&sq)?;
    ensure!(an.is_semicartesian, "generated square is not semi-cartesian");
    let mut hit = false;
    if is_mono(&sq.top) {
        hit = true;
        ensure!(is_mono(&sq.bottom) && an.is_cartesian, "mono top but bottom mono {} cartesian {}", is_mono(&sq.bottom), an.is_cartesian);
    }
    if is_epi(&sq.bottom) {
        hit = true;
        ensure!(is_epi(&sq.top) && an.is_cocartesian, "epi bottom but top epi {} cocartesian {}", is_epi(&sq.top), an.is_cocartesian);
    }
    Ok(Case::pass(hit))
}

fn cocartesian_left(g: &mut Generator) -> Result<Case> {
    let k = g.pushout_square(SquareKind::Universal)?;
    ensure!(analyze(&k)?.is_cocartesian, "precondition: K is not cocartesian");
    let kind = g.pick(&KINDS);
    let l = g.square_with_left(&k.right, kind)?;
    let (kl, l_semi) = (semi(&compose_h(&k, &l)?)?, semi(&l)?);
    ensure!(kl == l_semi, "cocartesian K: KL semi {kl}, L semi {l_semi}");
    Ok(Case::pass(l_semi))
}

fn cartesian_right(g: &mut Generator) -> Result<Case> {
    let l = g.pullback_square(SquareKind::Universal)?;
    ensure!(analyze(&l)?.is_cartesian, "precondition: L is not cartesian");
    let kind = g.pick(&KINDS);
    let k = g.square_with_right(&l.left, kind)?;
    let (kl, k_semi) = (semi(&compose_h(&k, &l)?)?, semi(&k)?);
    ensure!(kl == k_semi, "cartesian L: KL semi {kl}, K semi {k_semi}");
    Ok(Case::pass(k_semi))
}

fn composition(g: &mut Generator) -> Result<Case> {
    let k = semi_square(g)?;
    let kind = g.pick(&[SquareKind::Universal, SquareKind::SemiCartesian]);
    let l = g.square_with_left(&k.right, kind)?;
    ensure!(semi(&k)? && semi(&l)?, "precondition: factors not semi-cartesian");
    ensure!(semi(&compose_h(&k, &l)?)?, "composite of semi-cartesian squares is not semi-cartesian");
    Ok(Case::pass(true))
}

/// An epi square: the pushout of an epi, followed by an epi `m`.
fn epi_square(g: &mut Generator) -> Result<Square> {
    let a = g.random_obj();
    let b_dim = g.dim_at_most(a.dim);
    let b = g.obj(b_dim);
    let top = g.epi(a, b)?;
    let c = g.random_obj();
    let left = g.morphism(a, c);
    let po = pushout(&top, &left)?;
    let m = if g.coin() {
        identity(po.obj)
    } else {
        let d = g.dim_at_most(po.obj.dim);
        let d = g.obj(d);
        g.epi(po.obj, d)?
    };
    Square::new(top, left, compose(&m, &po.r)?, compose(&m, &po.s)?)
}

/// A mono square: the pullback of a mono, preceded by a mono `e`.
fn mono_square(g: &mut Generator) -> Result<Square> {
    let d = g.random_obj();
    let c_dim = g.dim_at_most(d.dim);
    let c = g.obj(c_dim);
    let bottom = g.mono(c, d)?;
    let b = g.random_obj();
    let right = g.morphism(b, d);
    let pb = pullback(&right, &bottom)?;
    let e = if g.coin() {
        identity(pb.obj)
    } else {
        let a = g.dim_at_most(pb.obj.dim);
        let a = g.obj(a);
        g.mono(a, pb.obj)?
    };
    Square::new(compose(&pb.f, &e)?, compose(&pb.g, &e)?, right, bottom)
}

fn epi_cancellation(g: &mut Generator) -> Result<Case> {
    let k = epi_square(g)?;
    ensure!(k.is_epi(), "precondition: K is not an epi square");
    let kind = g.pick(&KINDS);
    let l = g.square_with_left(&k.right, kind)?;
    let kl = semi(&compose_h(&k, &l)?)?;
    if kl {
        ensure!(semi(&l)?, "KL semi-cartesian with K epi, but L is not");
    }
    Ok(Case::pass(kl))
}

fn mono_cancellation(g: &mut Generator) -> Result<Case> {
    let l = mono_square(g)?;
    ensure!(l.is_mono(), "precondition: L is not a mono square");
    let kind = g.pick(&KINDS);
    let k = g.square_with_right(&l.left, kind)?;
    let kl = semi(&compose_h(&k, &l)?)?;
    if kl {
        ensure!(semi(&k)?, "KL semi-cartesian with L mono, but K is not");
    }
    Ok(Case::pass(kl))
}

fn decomposition(g: &mut Generator) -> Result<Case> {
    let sq = semi_square(g)?;
    let (k, l) = decompose_semicartesian(&sq)?;
    let (ka, la) = (analyze(&k)?, analyze(&l)?);
    ensure!(ka.is_cocartesian && k.is_epi(), "first factor: cocartesian {} epi {}", ka.is_cocartesian, k.is_epi());
    ensure!(la.is_cartesian && l.is_mono(), "second factor: cartesian {} mono {}", la.is_cartesian, l.is_mono());
    ensure!(compose_h(&k, &l)? == sq, "factors do not recompose to the input");
    Ok(Case::pass(true))
}

fn check_kernel_square(k: &Square, l: &Square) -> Result<Option<String>> {
    if k.right != l.left {
        return Ok(Some("kernel square does not end at left(L)".into()));
    }
    if !is_kernel_of(&k.top, &l.top)? || !is_kernel_of(&k.bottom, &l.bottom)? {
        return Ok(Some("kernel square horizontals are not kernels".into()));
    }
    Ok(None)
}

fn check_cokernel_square(k: &Square, l: &Square) -> Result<Option<String>> {
    if k.right != l.left {
        return Ok(Some("cokernel square does not start at right(K)".into()));
    }
    if !is_cokernel_of(&l.top, &k.top)? || !is_cokernel_of(&l.bottom, &k.bottom)? {
        return Ok(Some("cokernel square horizontals are not cokernels".into()));
    }
    Ok(None)
}

fn kernel_square_cartesian(g: &mut Generator) -> Result<Case> {
    let (b, c) = (g.random_obj(), g.random_obj());
    let d_dim = if g.coin() { g.dim_at_least(b.dim) } else { g.dim() };
    let d = g.obj(d_dim);
    let right = if d.dim >= b.dim && g.coin() { g.mono(b, d)? } else { g.morphism(b, d) };
    let bottom = g.morphism(c, d);
    let kind = g.pick(&KINDS);
    let l = match g.square_over(&right, &bottom, kind)? {
        Some(l) => l,
        None => g.square_over(&right, &bottom, SquareKind::Any)?.expect("Any always exists"),
    };
    let k = kernel_square(&l)?;
    if let Some(msg) = check_kernel_square(&k, &l)? {
        return Ok(Case::fail(msg));
    }
    let hit = is_mono(&l.right);
    if hit {
        ensure!(analyze(&k)?.is_cartesian, "right(L) mono but its kernel square is not cartesian");
    }
    Ok(Case::pass(hit))
}

fn kernel_square_epi(g: &mut Generator) -> Result<Case> {
    let l = semi_square(g)?;
    let k = kernel_square(&l)?;
    if let Some(msg) = check_kernel_square(&k, &l)? {
        return Ok(Case::fail(msg));
    }
    ensure!(is_epi(&k.left), "L semi-cartesian but left of its kernel square {} is not epi", k.left);
    Ok(Case::pass(true))
}

fn cokernel_square_cocartesian(g: &mut Generator) -> Result<Case> {
    let a = g.random_obj();
    let c_dim = if g.coin() { g.dim_at_most(a.dim) } else { g.dim() };
    let c = g.obj(c_dim);
    let left = if c.dim <= a.dim && g.coin() { g.epi(a, c)? } else { g.morphism(a, c) };
    let kind = g.pick(&KINDS);
    let k = g.square_with_left(&left, kind)?;
    let l = cokernel_square(&k)?;
    if let Some(msg) = check_cokernel_square(&k, &l)? {
        return Ok(Case::fail(msg));
    }
    let hit = is_epi(&k.left);
    if hit {
        ensure!(analyze(&l)?.is_cocartesian, "left(K) epi but its cokernel square is not cocartesian");
    }
    Ok(Case::pass(hit))
}

fn cokernel_square_mono(g: &mut Generator) -> Result<Case> {
    let k = semi_square(g)?;
    let l = cokernel_square(&k)?;
    if let Some(msg) = check_cokernel_square(&k, &l)? {
        return Ok(Case::fail(msg));
    }
    ensure!(is_mono(&l.right), "K semi-cartesian but right of its cokernel square {} is not mono", l.right);
    Ok(Case::pass(true))
}

// Exact sequences.

fn transport(g: &mut Generator) -> Result<Case> {
    let s = g.transport_input()?;
    let k = Square::new(s.a.clone(), s.u.clone(), s.v.clone(), s.b.clone())?;
    let l = Square::new(s.c.clone(), s.v.clone(), s.w.clone(), s.d.clone())?;
    ensure!(semi(&l)?, "precondition: L not semi-cartesian");
    ensure!(is_exact_pair(&s.a, &s.c)?, "precondition: (a, c) not exact");
    ensure!(compose(&s.d, &s.b)?.is_zero(), "precondition: db ≠ 0");
    ensure!(is_exact_pair(&s.b, &s.d)?, "(b, d) not exact; K = {k:?}");
    Ok(Case::pass(true))
}

fn transport_dual(g: &mut Generator) -> Result<Case> {
    let s = g.transport_input_dual()?;
    let k = Square::new(s.a.clone(), s.u.clone(), s.v.clone(), s.b.clone())?;
    Square::new(s.c.clone(), s.v.clone(), s.w.clone(), s.d.clone())?;
    ensure!(semi(&k)?, "precondition: K not semi-cartesian");
    ensure!(is_exact_pair(&s.b, &s.d)?, "precondition: (b, d) not exact");
    ensure!(compose(&s.c, &s.a)?.is_zero(), "precondition: ca ≠ 0");
    ensure!(is_exact_pair(&s.a, &s.c)?, "(a, c) not exact");
    Ok(Case::pass(true))
}

fn left_exact(g: &mut Generator) -> Result<Case> {
    let r = g.left_exact_rows()?;
    Square::new(r.a.clone(), r.u.clone(), r.v.clone(), r.b.clone())?;
    Square::new(r.c.clone(), r.v.clone(), r.w.clone(), r.d.clone())?;
    ensure!(is_kernel_of(&r.a, &r.c)? && is_kernel_of(&r.b, &r.d)?, "precondition: rows not left exact");
    let (ku, kv, kw) = (kernel(&r.u), kernel(&r.v), kernel(&r.w));
    let s = kernel_lift(&kv, &compose(&r.a, &ku.ker_mor)?)?;
    let t = kernel_lift(&kw, &compose(&r.c, &kv.ker_mor)?)?;
    ensure!(is_mono(&s), "Ker u → Ker v is not mono");
    ensure!(is_exact_pair(&s, &t)?, "Ker u → Ker v → Ker w not exact");
    Ok(Case::pass(true))
}

fn right_exact(g: &mut Generator) -> Result<Case> {
    let r = g.right_exact_rows()?;
    Square::new(r.a.clone(), r.u.clone(), r.v.clone(), r.b.clone())?;
    Square::new(r.c.clone(), r.v.clone(), r.w.clone(), r.d.clone())?;
    ensure!(is_cokernel_of(&r.c, &r.a)? && is_cokernel_of(&r.d, &r.b)?, "precondition: rows not right exact");
    let (cu, cv, cw) = (cokernel(&r.u), cokernel(&r.v), cokernel(&r.w));
    let x = cokernel_colift(&cu, &compose(&cv.coker_mor, &r.b)?)?;
    let y = cokernel_colift(&cv, &compose(&cw.coker_mor, &r.d)?)?;
    ensure!(is_epi(&y), "Coker v → Coker w is not epi");
    ensure!(is_exact_pair(&x, &y)?, "Coker u → Coker v → Coker w not exact");
    Ok(Case::pass(true))
}

fn snake_lemma(g: &mut Generator) -> Result<Case> {
    let input = g.snake_input()?;
    let out = check_snake(&input)?;
    let out = match out {
        Ok(out) => out,
        Err(msg) => return Ok(Case::fail(msg)),
    };
    ensure!(out.alternating_dimension_sum() == 0, "alternating sum {}", out.alternating_dimension_sum());
    Ok(Case::pass(!out.delta.is_zero()))
}

/// Rows exact only in the middle: the sum picks up `dim Ker a − dim Coker d`.
fn snake_lemma_general(g: &mut Generator) -> Result<Case> {
    let input = g.snake_input_general()?;
    let out = match check_snake(&input)? {
        Ok(out) => out,
        Err(msg) => return Ok(Case::fail(msg)),
    };
    let expected = kernel(&input.a).ker_obj.dim as i64 - cokernel(&input.d).coker_obj.dim as i64;
    let sum = out.alternating_dimension_sum();
    ensure!(sum == expected, "alternating sum {sum}, expected {expected}");
    Ok(Case::pass(!out.delta.is_zero()))
}

fn check_snake(input: &SnakeInput) -> Result<std::result::Result<SnakeOutput, String>> {
    let out = snake_sequence(input)?;
    let rep = out.exact_report;
    if !rep.all() {
        return Ok(Err(format!("six-term sequence not exact: {rep:?}")));
    }
    if !out.naturality_holds(input)? {
        return Ok(Err("naturality squares fail".into()));
    }
    let k = kernel(&out.trace.reduced.w).ker_mor;
    if !out.trace.identities_hold(&k, &out.delta)? {
        return Ok(Err("construction identities fail".into()));
    }
    let chase = chase_delta(input)?;
    let signed: Mor = chase.scale(&input.a.field().from_i64(DELTA_SIGN));
    if out.delta != signed {
        return Ok(Err(format!("δ = {} but chase gives {chase}", out.delta)));
    }
    Ok(Ok(out))
}
