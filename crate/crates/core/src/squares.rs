//! Commutative squares and the semi-cartesian condition.
//!
//! Orientation is fixed once and used everywhere, including error
//! messages:
//!
//! ```text
//!        top
//!    A ──────→ B
//!    │         │
//!  left      right        right ∘ top = bottom ∘ left
//!    ↓         ↓
//!    C ──────→ D
//!       bottom
//! ```
//!
//! A square is read as an arrow from its left vertical to its right
//! vertical; its components are the two horizontals. Horizontal
//! composition glues `K`'s right vertical to `L`'s left vertical.

use crate::category::{
    cokernel, cokernel_colift, compose, is_epi, is_iso, is_mono, kernel, kernel_lift,
    lift_through_mono, Mor,
};
use crate::constructions::{
    epi_mono_factorize, is_exact_pair, pullback, pullback_lift, pushout, pushout_colift,
    PullbackData, PushoutData,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub top: Mor,
    pub left: Mor,
    pub right: Mor,
    pub bottom: Mor,
}

impl Square {
    /// Checks the shapes and that `right ∘ top = bottom ∘ left`.
    pub fn new(top: Mor, left: Mor, right: Mor, bottom: Mor) -> Result<Self> {
        if top.src() != left.src()
            || top.dst() != right.src()
            || left.dst() != bottom.src()
            || right.dst() != bottom.dst()
        {
            return Err(Error::Shape(format!(
                "square corners do not match: top {} → {}, left {} → {}, right {} → {}, bottom {} → {}",
                top.src(),
                top.dst(),
                left.src(),
                left.dst(),
                right.src(),
                right.dst(),
                bottom.src(),
                bottom.dst()
            )));
        }
        let residual = compose(&right, &top)?.sub(&compose(&bottom, &left)?)?;
        if !residual.is_zero() {
            return Err(Error::NotCommutative { residual: residual.matrix().clone() });
        }
        Ok(Square { top, left, right, bottom })
    }

    /// Both horizontals epi.
    pub fn is_epi(&self) -> bool {
        is_epi(&self.top) && is_epi(&self.bottom)
    }

    /// Both horizontals mono.
    pub fn is_mono(&self) -> bool {
        is_mono(&self.top) && is_mono(&self.bottom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareAnalysis {
    /// `A → P`, the comparison into the pullback of (right, bottom).
    pub e: Mor,
    /// `S → D`, the comparison out of the pushout of (top, left).
    pub m: Mor,
    pub pb: PullbackData,
    pub po: PushoutData,
    /// `e` is epi.
    pub cond_i: bool,
    /// `m` is mono.
    pub cond_ii: bool,
    /// `0 → P → B+C → S → 0` is exact.
    pub cond_iii: bool,
    /// `A → B+C → D` (via `ia + jb` and `cp − dq`) is exact.
    pub cond_iv: bool,
    pub is_cartesian: bool,
    pub is_cocartesian: bool,
    pub is_semicartesian: bool,
}

impl SquareAnalysis {
    pub fn conditions_agree(&self) -> bool {
        self.cond_i == self.cond_ii && self.cond_ii == self.cond_iii && self.cond_iii == self.cond_iv
    }
}

/// Computes `e`, `m` and evaluates all four semi-cartesian conditions
/// independently; a disagreement between them is reported as an internal
/// error.
pub fn analyze(sq: &Square) -> Result<SquareAnalysis> {
    let analysis = analyze_unchecked(sq)?;
    if !analysis.conditions_agree() {
        return Err(Error::Internal(format!(
            "semi-cartesian conditions disagree: (i) {} (ii) {} (iii) {} (iv) {}",
            analysis.cond_i, analysis.cond_ii, analysis.cond_iii, analysis.cond_iv
        )));
    }
    Ok(analysis)
}

/// [`analyze`] without the cross-assertion, so callers can inspect a
/// disagreement themselves.
pub fn analyze_unchecked(sq: &Square) -> Result<SquareAnalysis> {
    let sq = Square::new(sq.top.clone(), sq.left.clone(), sq.right.clone(), sq.bottom.clone())?;
    let pb = pullback(&sq.right, &sq.bottom)?;
    let po = pushout(&sq.top, &sq.left)?;
    let e = pullback_lift(&pb, &sq.top, &sq.left)?;
    let m = pushout_colift(&po, &sq.right, &sq.bottom)?;

    let triangles = compose(&pb.f, &e)? == sq.top
        && compose(&pb.g, &e)? == sq.left
        && compose(&m, &po.r)? == sq.right
        && compose(&m, &po.s)? == sq.bottom;
    if !triangles {
        return Err(Error::Internal("comparison triangles do not commute".into()));
    }

    let n = &pb.n.ker_mor;
    let t = &po.t.coker_mor;
    let cond_i = is_epi(&e);
    let cond_ii = is_mono(&m);
    let cond_iii = is_mono(n) && is_epi(t) && is_exact_pair(n, t)?;
    let cond_iv = is_exact_pair(&po.t.of, &pb.n.of)?;
    Ok(SquareAnalysis {
        is_cartesian: is_iso(&e),
        is_cocartesian: is_iso(&m),
        is_semicartesian: cond_i,
        e,
        m,
        pb,
        po,
        cond_i,
        cond_ii,
        cond_iii,
        cond_iv,
    })
}

/// `KL`: requires `right(K) = left(L)`.
pub fn compose_h(k: &Square, l: &Square) -> Result<Square> {
    if k.right != l.left {
        return Err(Error::Shape(format!(
            "middle vertical mismatch: right of K is {}, left of L is {}",
            k.right, l.left
        )));
    }
    Square::new(
        compose(&l.top, &k.top)?,
        k.left.clone(),
        l.right.clone(),
        compose(&l.bottom, &k.bottom)?,
    )
}

/// Splits a semi-cartesian square into a cocartesian square with epi
/// horizontals followed by a cartesian square with mono horizontals, by
/// factoring top and bottom through their images.
pub fn decompose_semicartesian(sq: &Square) -> Result<(Square, Square)> {
    if !analyze(sq)?.is_semicartesian {
        return Err(Error::NotSemiCartesian);
    }
    let top = epi_mono_factorize(&sq.top);
    let bottom = epi_mono_factorize(&sq.bottom);
    let middle = lift_through_mono(&bottom.mono_m, &compose(&sq.right, &top.mono_m)?)?;
    let k = Square::new(top.epi_q, sq.left.clone(), middle.clone(), bottom.epi_q)?;
    let l = Square::new(top.mono_m, middle, sq.right.clone(), bottom.mono_m)?;

    if compose_h(&k, &l)? != *sq {
        return Err(Error::Internal("decomposition does not recompose".into()));
    }
    let (ka, la) = (analyze(&k)?, analyze(&l)?);
    if !(ka.is_cocartesian && k.is_epi() && la.is_cartesian && l.is_mono()) {
        return Err(Error::Internal(format!(
            "decomposition factors: K cocartesian {} epi {}, L cartesian {} mono {}",
            ka.is_cocartesian,
            k.is_epi(),
            la.is_cartesian,
            l.is_mono()
        )));
    }
    Ok((k, l))
}

/// The componentwise kernel of `L` (kernels of its top and bottom), with
/// left vertical induced by the kernel property; its right vertical is
/// `left(L)`, so the result composes with `L`.
pub fn kernel_square(l: &Square) -> Result<Square> {
    let kt = kernel(&l.top);
    let kb = kernel(&l.bottom);
    let left = kernel_lift(&kb, &compose(&l.left, &kt.ker_mor)?)?;
    Square::new(kt.ker_mor, left, l.left.clone(), kb.ker_mor)
}

/// The componentwise cokernel of `K`; its left vertical is `right(K)`.
pub fn cokernel_square(k: &Square) -> Result<Square> {
    let ct = cokernel(&k.top);
    let cb = cokernel(&k.bottom);
    let right = cokernel_colift(&ct, &compose(&cb.coker_mor, &k.right)?)?;
    Square::new(ct.coker_mor, k.right.clone(), right, cb.coker_mor)
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

    fn identity_square(n: usize) -> Square {
        let id = identity(q(n));
        Square::new(id.clone(), id.clone(), id.clone(), id).unwrap()
    }

    #[test]
    fn rejects_non_commuting_square() {
        let id = identity(q(1));
        let two = Mor::from_i64(Q, 1, 1, &[2]);
        match Square::new(id.clone(), id.clone(), two, id) {
            Err(Error::NotCommutative { residual }) => {
                assert_eq!(residual, crate::Matrix::from_i64(Q, 1, 1, &[1]))
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_square_is_everything() {
        let a = analyze(&identity_square(1)).unwrap();
        assert!(a.is_cartesian && a.is_cocartesian && a.is_semicartesian);
        assert!(a.cond_i && a.cond_ii && a.cond_iii && a.cond_iv);
    }

    #[test]
    fn zero_corner_square_is_not_semicartesian() {
        let zero = Obj::zero(Q);
        let z = zero_mor(zero, q(1));
        let id = identity(q(1));
        let sq = Square::new(z.clone(), z, id.clone(), id).unwrap();
        let a = analyze(&sq).unwrap();
        assert_eq!(a.pb.obj.dim, 1);
        assert!(!is_epi(&a.e));
        assert!(!a.is_semicartesian);
        assert!(!a.cond_ii && !a.cond_iii && !a.cond_iv);
    }

    #[test]
    fn pullback_square_is_cartesian() {
        let c = Mor::from_i64(Q, 2, 2, &[1, 2, 0, 0]);
        let d = Mor::from_i64(Q, 1, 2, &[3, 0]);
        let pb = pullback(&c, &d).unwrap();
        let sq = Square::new(pb.f.clone(), pb.g.clone(), c, d).unwrap();
        let a = analyze(&sq).unwrap();
        assert_eq!(a.e, identity(pb.obj));
        assert!(a.is_cartesian && a.is_semicartesian);
    }

    #[test]
    fn horizontal_composition() {
        let id = identity_square(2);
        assert_eq!(compose_h(&id, &id).unwrap(), id);

        let c = Mor::from_i64(Q, 1, 1, &[1]);
        let pb = pullback(&c, &c).unwrap();
        let k = Square::new(pb.f.clone(), pb.g.clone(), c.clone(), c.clone()).unwrap();
        let l = Square::new(identity(q(1)), c.clone(), c.clone(), identity(q(1))).unwrap();
        assert_eq!(compose_h(&k, &l).unwrap(), k);
        assert!(compose_h(&l, &identity_square(2)).is_err());
    }

    #[test]
    fn pushout_then_pullback_is_semicartesian() {
        let a = Mor::from_i64(Q, 2, 1, &[1, 1]);
        let b = Mor::from_i64(Q, 2, 2, &[1, 0, 0, 0]);
        let po = pushout(&a, &b).unwrap();
        let k = Square::new(a, b, po.r.clone(), po.s.clone()).unwrap();
        assert!(analyze(&k).unwrap().is_cocartesian);
        // Identity horizontals: the pullback of (r, 1) is the source of r.
        let l = Square::new(identity(q(1)), po.r.clone(), po.r.clone(), identity(po.obj)).unwrap();
        assert!(analyze(&l).unwrap().is_cartesian);
        let kl = compose_h(&k, &l).unwrap();
        assert!(analyze(&kl).unwrap().is_semicartesian);
    }

    #[test]
    fn decompose_identity_and_cocartesian_epi() {
        let id = identity_square(2);
        let (k, l) = decompose_semicartesian(&id).unwrap();
        assert_eq!((k, l), (id.clone(), id));

        let a = Mor::from_i64(Q, 2, 1, &[1, 1]);
        let b = Mor::from_i64(Q, 2, 2, &[1, 0, 1, 1]);
        let po = pushout(&a, &b).unwrap();
        let sq = Square::new(a, b, po.r.clone(), po.s.clone()).unwrap();
        let (k, l) = decompose_semicartesian(&sq).unwrap();
        // Up to the isos on the images, K is the input and L is trivial.
        assert_eq!(k.top, sq.top);
        assert!(is_iso(&l.top) && is_iso(&l.bottom));
        assert_eq!(compose_h(&k, &l).unwrap(), sq);
        assert!(analyze(&l).unwrap().is_cartesian);
    }

    #[test]
    fn decompose_rejects_non_semicartesian() {
        let z = zero_mor(Obj::zero(Q), q(1));
        let id = identity(q(1));
        let sq = Square::new(z.clone(), z, id.clone(), id).unwrap();
        assert!(matches!(decompose_semicartesian(&sq), Err(Error::NotSemiCartesian)));
    }

    #[test]
    fn kernel_square_examples() {
        let k = kernel_square(&identity_square(2)).unwrap();
        assert!(k.top.src().is_zero() && k.bottom.src().is_zero());

        let v = Mor::from_i64(Q, 2, 2, &[1, 1, 0, 1]);
        let l = Square::new(zero_mor(q(2), q(1)), v.clone(), identity(q(1)), zero_mor(q(2), q(1)))
            .unwrap();
        let k = kernel_square(&l).unwrap();
        assert_eq!(k.top, identity(q(2)));
        assert_eq!(k.bottom, identity(q(2)));
        assert_eq!(k.left, v);
    }

    #[test]
    fn cokernel_square_examples() {
        let c = cokernel_square(&identity_square(2)).unwrap();
        assert!(c.top.dst().is_zero() && c.bottom.dst().is_zero());
        let v = Mor::from_i64(Q, 2, 2, &[1, 1, 0, 1]);
        let k = Square::new(zero_mor(q(1), q(2)), identity(q(1)), v.clone(), zero_mor(q(1), q(2)))
            .unwrap();
        let c = cokernel_square(&k).unwrap();
        assert_eq!(c.top, identity(q(2)));
        assert_eq!(c.right, v);
    }

    #[test]
    fn mono_left_vertical_alone_does_not_make_the_kernel_square_cartesian() {
        let one = identity(q(1));
        let zero = zero_mor(q(1), q(1));
        let l = Square::new(one.clone(), one.clone(), zero.clone(), zero).unwrap();
        let k = kernel_square(&l).unwrap();
        assert!(!analyze(&k).unwrap().is_cartesian);

        let l = Square::new(one.clone(), one.clone(), one.clone(), one).unwrap();
        assert!(analyze(&kernel_square(&l).unwrap()).unwrap().is_cartesian);
    }
}
