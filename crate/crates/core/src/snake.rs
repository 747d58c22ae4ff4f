//! The snake lemma: the connecting morphism `δ: Ker w → Coker u` and the
//! six-term exact sequence.
//!
//! Diagram layout (rows exact, squares commute):
//!
//! ```text
//!        a       c
//!    A ────→ B ────→ C        c is a cokernel of a
//!    │u      │v      │w
//!    ↓       ↓       ↓
//!    A' ───→ B' ───→ C'       b is a kernel of d
//!        b       d
//! ```
//!
//! `δ` is built without elements: pull back `c` along `k = ker w`, push out
//! `b` along `p = coker u`, and factor the composite through the induced
//! cokernel and kernel. [`chase_delta`] computes the same map by solving
//! linear systems and serves as an independent check.

use crate::category::{
    cokernel, cokernel_colift, compose, is_epi, is_mono, kernel, kernel_lift, lift_through_mono,
    CokernelData, KernelData, Mor,
};
use crate::constructions::{
    epi_mono_factorize, is_exact_pair, pullback, pushout, PullbackData, PushoutData,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// `δ = DELTA_SIGN · chase_delta` on every valid input. The sign follows
/// from the pushout convention `s = −t∘j`.
pub const DELTA_SIGN: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeInput {
    pub a: Mor,
    pub c: Mor,
    pub u: Mor,
    pub v: Mor,
    pub w: Mor,
    pub b: Mor,
    pub d: Mor,
}

impl SnakeInput {
    /// Checks shapes, both squares and both row conditions, reporting
    /// every violation found.
    pub fn validate(&self) -> Result<()> {
        let shapes = [
            ("a then c", self.a.dst() == self.c.src()),
            ("b then d", self.b.dst() == self.d.src()),
            ("u: A → A'", self.u.src() == self.a.src() && self.u.dst() == self.b.src()),
            ("v: B → B'", self.v.src() == self.a.dst() && self.v.dst() == self.b.dst()),
            ("w: C → C'", self.w.src() == self.c.dst() && self.w.dst() == self.d.dst()),
        ];
        let bad: Vec<String> = shapes
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(what, _)| format!("shape mismatch at {what}"))
            .collect();
        if !bad.is_empty() {
            return Err(Error::InvalidSnake(bad));
        }

        let mut violations = Vec::new();
        let k = compose(&self.v, &self.a)?.sub(&compose(&self.b, &self.u)?)?;
        if !k.is_zero() {
            violations.push(format!(
                "square K does not commute: v∘a − b∘u = {}",
                k.matrix()
            ));
        }
        let l = compose(&self.d, &self.v)?.sub(&compose(&self.w, &self.c)?)?;
        if !l.is_zero() {
            violations.push(format!(
                "square L does not commute: d∘v − w∘c = {}",
                l.matrix()
            ));
        }
        if !is_exact_pair(&self.a, &self.c)? {
            violations.push("c is a cokernel of a: (a, c) is not exact".into());
        }
        if !is_epi(&self.c) {
            violations.push("c is a cokernel of a: c is not epi".into());
        }
        if !is_exact_pair(&self.b, &self.d)? {
            violations.push("b is a kernel of d: (b, d) is not exact".into());
        }
        if !is_mono(&self.b) {
            violations.push("b is a kernel of d: b is not mono".into());
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidSnake(violations))
        }
    }

    /// Replaces `a` by its mono part and `d` by its epi part, inducing the
    /// new `u` and `w`, so that `a` is a kernel of `c` and `d` a cokernel
    /// of `b`. The kernel of `w` and cokernel of `u` are unchanged (checked).
    pub fn reduce(&self) -> Result<SnakeInput> {
        self.validate()?;
        let mut out = self.clone();
        if !is_mono(&self.a) {
            let fa = epi_mono_factorize(&self.a);
            let b_as_kernel = KernelData::from_kernel(self.b.clone(), &self.d)?;
            out.u = kernel_lift(&b_as_kernel, &compose(&self.v, &fa.mono_m)?)?;
            out.a = fa.mono_m;
        }
        if !is_epi(&self.d) {
            let fd = epi_mono_factorize(&self.d);
            out.w = lift_through_mono(&fd.mono_m, &self.w)?;
            out.d = fd.epi_q;
        }
        if cokernel(&out.u).coker_mor != cokernel(&self.u).coker_mor {
            return Err(Error::Internal("reduction changed the cokernel of u".into()));
        }
        if kernel(&out.w).ker_mor != kernel(&self.w).ker_mor {
            return Err(Error::Internal("reduction changed the kernel of w".into()));
        }
        out.validate()
            .map_err(|e| Error::Internal(format!("reduced diagram is invalid: {e}")))?;
        Ok(out)
    }
}

/// Intermediate arrows of the construction of `δ`, on the reduced diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeTrace {
    pub reduced: SnakeInput,
    /// Pullback of `(k, c)`: `pb.f: P → Ker w`, `pb.g: P → B`.
    pub pb: PullbackData,
    /// Kernel of `pb.f`.
    pub z: Mor,
    /// `a∘l = pb.g∘z`.
    pub l: Mor,
    /// Pushout of `(p, b)`: `po.r: Coker u → S`, `po.s: B' → S`.
    pub po: PushoutData,
    /// Cokernel of `po.r`.
    pub h: Mor,
    /// `theta∘pb.f = po.s∘v∘pb.g`.
    pub theta: Mor,
}

impl SnakeTrace {
    /// Rechecks every identity the construction relies on.
    pub fn identities_hold(&self, k: &Mor, delta: &Mor) -> Result<bool> {
        let r = &self.reduced;
        let (f, m) = (&self.pb.f, &self.pb.g);
        let (g, n) = (&self.po.r, &self.po.s);
        Ok(compose(k, f)? == compose(&r.c, m)?
            && compose(&r.a, &self.l)? == compose(m, &self.z)?
            && compose(n, &compose(&r.v, m)?)? == compose(&self.theta, f)?
            && self.theta == compose(g, delta)?
            && compose(&self.h, &self.theta)?.is_zero())
    }
}

/// Builds `δ: Ker w → Coker u` by the pullback/pushout construction.
pub fn connecting_morphism(input: &SnakeInput) -> Result<(Mor, SnakeTrace)> {
    let reduced = input.reduce()?;
    let k = kernel(&reduced.w);
    let p = cokernel(&reduced.u);

    let pb = pullback(&k.ker_mor, &reduced.c)?;
    if !is_epi(&pb.f) {
        return Err(Error::Internal("pullback of the epi c is not epi".into()));
    }
    let z = kernel(&pb.f);
    let a_as_kernel = KernelData::from_kernel(reduced.a.clone(), &reduced.c)?;
    let l = kernel_lift(&a_as_kernel, &compose(&pb.g, &z.ker_mor)?)?;

    let po = pushout(&p.coker_mor, &reduced.b)?;
    if !is_mono(&po.r) {
        return Err(Error::Internal("pushout of the mono b is not mono".into()));
    }
    let h = cokernel(&po.r);

    let f_as_cokernel = CokernelData::from_cokernel(pb.f.clone(), &z.ker_mor)?;
    let nvm = compose(&po.s, &compose(&reduced.v, &pb.g)?)?;
    let theta = cokernel_colift(&f_as_cokernel, &nvm)?;
    let g_as_kernel = KernelData::from_kernel(po.r.clone(), &h.coker_mor)?;
    let delta = kernel_lift(&g_as_kernel, &theta)
        .map_err(|e| Error::Internal(format!("h∘θ is not zero: {e}")))?;

    let trace = SnakeTrace { reduced, pb, z: z.ker_mor, l, po, h: h.coker_mor, theta };
    if !trace.identities_hold(&k.ker_mor, &delta)? {
        return Err(Error::Internal("snake trace identities fail".into()));
    }
    Ok((delta, trace))
}

/// Exactness at the four interior objects of the six-term sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactReport {
    pub at_ker_v: bool,
    pub at_ker_w: bool,
    pub at_coker_u: bool,
    pub at_coker_v: bool,
}

impl ExactReport {
    pub fn all(&self) -> bool {
        self.at_ker_v && self.at_ker_w && self.at_coker_u && self.at_coker_v
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnakeOutput {
    pub ker_u: KernelData,
    pub ker_v: KernelData,
    pub ker_w: KernelData,
    pub coker_u: CokernelData,
    pub coker_v: CokernelData,
    pub coker_w: CokernelData,
    pub s: Mor,
    pub t: Mor,
    pub delta: Mor,
    pub x: Mor,
    pub y: Mor,
    pub exact_report: ExactReport,
    pub trace: SnakeTrace,
}

impl SnakeOutput {
    /// `j∘s = a∘i`, `k∘t = c∘j`, `x∘p = q∘b`, `y∘q = r∘d`.
    pub fn naturality_holds(&self, input: &SnakeInput) -> Result<bool> {
        let (i, j, k) = (&self.ker_u.ker_mor, &self.ker_v.ker_mor, &self.ker_w.ker_mor);
        let (p, q, r) = (&self.coker_u.coker_mor, &self.coker_v.coker_mor, &self.coker_w.coker_mor);
        Ok(compose(j, &self.s)? == compose(&input.a, i)?
            && compose(k, &self.t)? == compose(&input.c, j)?
            && compose(&self.x, p)? == compose(q, &input.b)?
            && compose(&self.y, q)? == compose(r, &input.d)?)
    }

    /// `dim Ker u − dim Ker v + dim Ker w − dim Coker u + dim Coker v − dim Coker w`.
    pub fn alternating_dimension_sum(&self) -> i64 {
        let dims = [
            self.ker_u.ker_obj.dim,
            self.ker_v.ker_obj.dim,
            self.ker_w.ker_obj.dim,
            self.coker_u.coker_obj.dim,
            self.coker_v.coker_obj.dim,
            self.coker_w.coker_obj.dim,
        ];
        dims.iter()
            .enumerate()
            .map(|(idx, &d)| if idx % 2 == 0 { d as i64 } else { -(d as i64) })
            .sum()
    }

    /// Ranks of `(s, t, δ, x, y)`.
    pub fn ranks(&self) -> [usize; 5] {
        [self.s.rank(), self.t.rank(), self.delta.rank(), self.x.rank(), self.y.rank()]
    }
}

pub fn snake_sequence(input: &SnakeInput) -> Result<SnakeOutput> {
    input.validate()?;
    let (ker_u, ker_v, ker_w) = (kernel(&input.u), kernel(&input.v), kernel(&input.w));
    let (coker_u, coker_v, coker_w) = (cokernel(&input.u), cokernel(&input.v), cokernel(&input.w));

    let s = kernel_lift(&ker_v, &compose(&input.a, &ker_u.ker_mor)?)?;
    let t = kernel_lift(&ker_w, &compose(&input.c, &ker_v.ker_mor)?)?;
    let x = cokernel_colift(&coker_u, &compose(&coker_v.coker_mor, &input.b)?)?;
    let y = cokernel_colift(&coker_v, &compose(&coker_w.coker_mor, &input.d)?)?;
    let (delta, trace) = connecting_morphism(input)?;

    let exact_report = ExactReport {
        at_ker_v: is_exact_pair(&s, &t)?,
        at_ker_w: is_exact_pair(&t, &delta)?,
        at_coker_u: is_exact_pair(&delta, &x)?,
        at_coker_v: is_exact_pair(&x, &y)?,
    };
    Ok(SnakeOutput {
        ker_u,
        ker_v,
        ker_w,
        coker_u,
        coker_v,
        coker_w,
        s,
        t,
        delta,
        x,
        y,
        exact_report,
        trace,
    })
}

/// `δ` by element chasing: for each basis vector `κ` of `Ker w`, lift
/// `k·κ` along `c`, apply `v`, pull back along `b` and project to
/// `Coker u`. The result is recomputed with a second choice of lifts and
/// must not depend on it.
pub fn chase_delta(input: &SnakeInput) -> Result<Mor> {
    input.validate()?;
    let k = kernel(&input.w);
    let p = cokernel(&input.u);
    let targets = k.ker_mor.matrix();
    let reversed: Vec<usize> = (0..input.c.src().dim).rev().collect();

    let chase = |lifts: Option<Matrix>| -> Result<Matrix> {
        let lifts = lifts.ok_or_else(|| Error::Internal("c·x = k·κ is inconsistent".into()))?;
        let pushed = input.v.matrix().mul(&lifts);
        let pulled = input
            .b
            .matrix()
            .solve(&pushed)?
            .ok_or_else(|| Error::Internal("b·y = v·x is inconsistent".into()))?;
        Ok(p.coker_mor.matrix().mul(&pulled))
    };
    let first = chase(input.c.matrix().solve(targets)?)?;
    let second = chase(input.c.matrix().solve_with_order(targets, &reversed)?)?;
    if first != second {
        return Err(Error::Internal(format!(
            "element chase depends on the choice of lift: {first} vs {second}"
        )));
    }
    Mor::new(k.ker_obj, p.coker_obj, first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{identity, zero_mor, Obj};
    use crate::scalar::ScalarField;

    const Q: ScalarField = ScalarField::Rationals;

    fn q(n: usize) -> Obj {
        Obj::new(Q, n)
    }

    pub(crate) fn worked_example() -> SnakeInput {
        SnakeInput {
            a: Mor::from_i64(Q, 1, 2, &[1, 0]),
            c: Mor::from_i64(Q, 2, 1, &[0, 1]),
            u: zero_mor(q(1), q(1)),
            v: Mor::from_i64(Q, 2, 2, &[0, 1, 0, 0]),
            w: zero_mor(q(1), q(1)),
            b: Mor::from_i64(Q, 1, 2, &[1, 0]),
            d: Mor::from_i64(Q, 2, 1, &[0, 1]),
        }
    }

    fn identity_verticals() -> SnakeInput {
        let mut s = worked_example();
        s.u = identity(q(1));
        s.v = identity(q(2));
        s.w = identity(q(1));
        s
    }

    #[test]
    fn worked_example_is_valid() {
        worked_example().validate().unwrap();
    }

    #[test]
    fn validate_reports_non_commuting_square() {
        let mut s = worked_example();
        s.w = identity(q(1));
        let Err(Error::InvalidSnake(v)) = s.validate() else { panic!("accepted") };
        assert_eq!(v.len(), 1);
        assert!(v[0].contains("square L"), "{v:?}");
    }

    #[test]
    fn validate_reports_non_epi_c() {
        let mut s = worked_example();
        s.c = zero_mor(q(2), q(1));
        s.w = zero_mor(q(1), q(1));
        let Err(Error::InvalidSnake(v)) = s.validate() else { panic!("accepted") };
        assert!(v.iter().any(|m| m.contains("c is a cokernel of a")), "{v:?}");
    }

    #[test]
    fn validate_reports_shape_errors() {
        let mut s = worked_example();
        s.u = zero_mor(q(2), q(1));
        assert!(matches!(s.validate(), Err(Error::InvalidSnake(_))));
    }

    #[test]
    fn reduce_keeps_reduced_input() {
        let s = worked_example();
        assert_eq!(s.reduce().unwrap(), s);
    }

    #[test]
    fn reduce_replaces_a_by_its_mono_part() {
        // A = Q^2 → B = Q^2 with a = [[1,1],[0,0]] (not mono), c = [0,1].
        let s = SnakeInput {
            a: Mor::from_i64(Q, 2, 2, &[1, 1, 0, 0]),
            c: Mor::from_i64(Q, 2, 1, &[0, 1]),
            u: zero_mor(q(2), q(1)),
            v: Mor::from_i64(Q, 2, 2, &[0, 1, 0, 0]),
            w: zero_mor(q(1), q(1)),
            b: Mor::from_i64(Q, 1, 2, &[1, 0]),
            d: Mor::from_i64(Q, 2, 1, &[0, 1]),
        };
        s.validate().unwrap();
        let r = s.reduce().unwrap();
        assert_eq!(r.a, Mor::from_i64(Q, 1, 2, &[1, 0]));
        assert_eq!(r.u, zero_mor(q(1), q(1)));
    }

    #[test]
    fn reduce_with_null_source() {
        let s = SnakeInput {
            a: zero_mor(Obj::zero(Q), q(1)),
            c: identity(q(1)),
            u: zero_mor(Obj::zero(Q), Obj::zero(Q)),
            v: identity(q(1)),
            w: identity(q(1)),
            b: zero_mor(Obj::zero(Q), q(1)),
            d: identity(q(1)),
        };
        let r = s.reduce().unwrap();
        assert!(r.a.src().is_zero());
        let out = snake_sequence(&s).unwrap();
        assert!(out.exact_report.all());
    }

    #[test]
    fn identity_verticals_give_null_sequence() {
        let s = identity_verticals();
        let (delta, _) = connecting_morphism(&s).unwrap();
        assert!(delta.src().is_zero() && delta.dst().is_zero());
        let out = snake_sequence(&s).unwrap();
        assert_eq!(out.ranks(), [0; 5]);
        assert!(out.exact_report.all());
        assert_eq!(chase_delta(&s).unwrap(), delta);
    }

    #[test]
    fn degenerate_rows_give_empty_delta() {
        let zero = Obj::zero(Q);
        let s = SnakeInput {
            a: zero_mor(zero, q(2)),
            c: zero_mor(q(2), zero),
            u: zero_mor(zero, zero),
            v: Mor::from_i64(Q, 2, 2, &[1, 1, 0, 1]),
            w: zero_mor(zero, zero),
            b: zero_mor(zero, q(2)),
            d: zero_mor(q(2), zero),
        };
        // (a, c) is exact only when ker c = im a, i.e. B = 0; here it is not.
        assert!(s.validate().is_err());
        let s = SnakeInput {
            a: identity(q(2)),
            c: zero_mor(q(2), zero),
            u: Mor::from_i64(Q, 2, 2, &[1, 1, 0, 1]),
            v: Mor::from_i64(Q, 2, 2, &[1, 1, 0, 1]),
            w: zero_mor(zero, zero),
            b: identity(q(2)),
            d: zero_mor(q(2), zero),
        };
        let (delta, _) = connecting_morphism(&s).unwrap();
        assert!(delta.src().is_zero() && delta.dst().is_zero());
    }

    #[test]
    fn worked_example_delta_is_iso() {
        let (delta, trace) = connecting_morphism(&worked_example()).unwrap();
        assert_eq!((delta.src().dim, delta.dst().dim), (1, 1));
        assert_eq!(delta.rank(), 1);
        assert_eq!(trace.reduced, worked_example());
    }

    #[test]
    fn worked_example_sequence() {
        let s = worked_example();
        let out = snake_sequence(&s).unwrap();
        assert_eq!(out.ranks(), [1, 0, 1, 0, 1]);
        assert!(out.exact_report.all());
        assert!(out.naturality_holds(&s).unwrap());
        assert_eq!(out.alternating_dimension_sum(), 0);
    }

    #[test]
    fn worked_example_chase_matches() {
        let s = worked_example();
        let chased = chase_delta(&s).unwrap();
        assert_eq!(chased, Mor::from_i64(Q, 1, 1, &[1]));
        let (delta, _) = connecting_morphism(&s).unwrap();
        assert_eq!(delta, chased.scale(&Q.from_i64(DELTA_SIGN)));
    }

    #[test]
    fn zero_verticals_with_identity_rows() {
        // A = C' = Q, B = B' = Q^2, rows split; u = v = w = 0.
        let s = SnakeInput {
            a: Mor::from_i64(Q, 1, 2, &[1, 0]),
            c: Mor::from_i64(Q, 2, 1, &[0, 1]),
            u: zero_mor(q(1), q(1)),
            v: zero_mor(q(2), q(2)),
            w: zero_mor(q(1), q(1)),
            b: Mor::from_i64(Q, 1, 2, &[1, 0]),
            d: Mor::from_i64(Q, 2, 1, &[0, 1]),
        };
        // v = 0 forces the chase to vanish: lift to B, apply 0, pull back 0.
        assert!(chase_delta(&s).unwrap().is_zero());
        let out = snake_sequence(&s).unwrap();
        assert!(out.delta.is_zero());
        assert_eq!(out.ranks(), [1, 1, 0, 1, 1]);
        assert!(out.exact_report.all());
    }
}
