//! Objects, morphisms and the primitive universal constructions of the
//! category of finite-dimensional vector spaces over a [`ScalarField`].
//!
//! Everything above this module talks to morphisms only through the
//! operations defined here (composition, sums, kernels, cokernels,
//! biproducts and their lifts); matrices stay behind [`Mor`].

use std::fmt;

use crate::constructions::{is_cokernel_of, is_kernel_of};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{Scalar, ScalarField};

/// A finite-dimensional space. `dim == 0` is the null object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Obj {
    pub dim: usize,
    pub field: ScalarField,
}

impl Obj {
    pub fn new(field: ScalarField, dim: usize) -> Self {
        Obj { dim, field }
    }

    pub fn zero(field: ScalarField) -> Self {
        Obj { dim: 0, field }
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }
}

impl fmt::Display for Obj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.field, self.dim)
    }
}

/// A linear map `src → dst`, acting on column vectors; the matrix has
/// `dst.dim` rows and `src.dim` columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mor {
    src: Obj,
    dst: Obj,
    mat: Matrix,
}

impl Mor {
    pub fn new(src: Obj, dst: Obj, mat: Matrix) -> Result<Self> {
        if src.field != dst.field {
            return Err(Error::FieldMismatch(src.field, dst.field));
        }
        if mat.field() != src.field {
            return Err(Error::FieldMismatch(src.field, mat.field()));
        }
        if mat.rows() != dst.dim || mat.cols() != src.dim {
            return Err(Error::Shape(format!(
                "{}x{} matrix for a morphism {src} → {dst}",
                mat.rows(),
                mat.cols()
            )));
        }
        Ok(Mor { src, dst, mat })
    }

    /// Wraps a matrix, reading the objects off its shape.
    pub fn from_matrix(mat: Matrix) -> Self {
        let field = mat.field();
        Mor { src: Obj::new(field, mat.cols()), dst: Obj::new(field, mat.rows()), mat }
    }

    /// Row-major small-integer entries; handy for fixtures.
    pub fn from_i64(field: ScalarField, src_dim: usize, dst_dim: usize, values: &[i64]) -> Self {
        Mor::from_matrix(Matrix::from_i64(field, dst_dim, src_dim, values))
    }

    pub fn src(&self) -> Obj {
        self.src
    }

    pub fn dst(&self) -> Obj {
        self.dst
    }

    pub fn field(&self) -> ScalarField {
        self.src.field
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn rank(&self) -> usize {
        self.mat.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &Mor) -> Result<Mor> {
        compose(self, f)
    }

    pub fn add(&self, other: &Mor) -> Result<Mor> {
        same_hom(self, other, "sum")?;
        Ok(self.with_matrix(self.mat.add(&other.mat)))
    }

    pub fn sub(&self, other: &Mor) -> Result<Mor> {
        same_hom(self, other, "difference")?;
        Ok(self.with_matrix(self.mat.sub(&other.mat)))
    }

    pub fn neg(&self) -> Mor {
        self.with_matrix(self.mat.neg())
    }

    pub fn scale(&self, k: &Scalar) -> Mor {
        self.with_matrix(self.mat.scale(k))
    }

    fn with_matrix(&self, mat: Matrix) -> Mor {
        Mor { src: self.src, dst: self.dst, mat }
    }

    pub fn transpose(&self) -> Mor {
        Mor { src: self.dst, dst: self.src, mat: self.mat.transpose() }
    }
}

impl fmt::Display for Mor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}: {}", self.src, self.dst, self.mat)
    }
}

fn same_hom(a: &Mor, b: &Mor, what: &str) -> Result<()> {
    if a.src != b.src || a.dst != b.dst {
        return Err(Error::Shape(format!(
            "{what} of {} → {} and {} → {}",
            a.src, a.dst, b.src, b.dst
        )));
    }
    Ok(())
}

/// `g ∘ f`.
pub fn compose(g: &Mor, f: &Mor) -> Result<Mor> {
    if g.src != f.dst {
        return Err(Error::Shape(format!(
            "cannot compose {} → {} after {} → {}",
            g.src, g.dst, f.src, f.dst
        )));
    }
    Ok(Mor { src: f.src, dst: g.dst, mat: g.mat.mul(&f.mat) })
}

pub fn identity(x: Obj) -> Mor {
    Mor { src: x, dst: x, mat: Matrix::identity(x.field, x.dim) }
}

/// The null arrow `x → 0 → y`.
pub fn zero_mor(x: Obj, y: Obj) -> Mor {
    Mor { src: x, dst: y, mat: Matrix::zeros(x.field, y.dim, x.dim) }
}

pub fn is_mono(f: &Mor) -> bool {
    f.rank() == f.src.dim
}

pub fn is_epi(f: &Mor) -> bool {
    f.rank() == f.dst.dim
}

pub fn is_iso(f: &Mor) -> bool {
    is_mono(f) && is_epi(f)
}

/// A kernel `ker_mor: ker_obj → src(of)` of the arrow `of`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub ker_obj: Obj,
    pub ker_mor: Mor,
    pub of: Mor,
}

impl KernelData {
    /// Accepts any arrow that is a kernel of `of`.
    pub fn from_kernel(ker_mor: Mor, of: &Mor) -> Result<Self> {
        if !is_kernel_of(&ker_mor, of)? {
            return Err(Error::Internal(format!("{ker_mor} is not a kernel of {of}")));
        }
        Ok(KernelData { ker_obj: ker_mor.src, ker_mor, of: of.clone() })
    }
}

/// A cokernel `coker_mor: dst(of) → coker_obj` of the arrow `of`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelData {
    pub coker_obj: Obj,
    pub coker_mor: Mor,
    pub of: Mor,
}

impl CokernelData {
    /// Accepts any arrow that is a cokernel of `of`.
    pub fn from_cokernel(coker_mor: Mor, of: &Mor) -> Result<Self> {
        if !is_cokernel_of(&coker_mor, of)? {
            return Err(Error::Internal(format!("{coker_mor} is not a cokernel of {of}")));
        }
        Ok(CokernelData { coker_obj: coker_mor.dst, coker_mor, of: of.clone() })
    }
}

/// The canonical kernel: inclusion of the canonical nullspace basis.
pub fn kernel(f: &Mor) -> KernelData {
    let basis = f.mat.nullspace_basis();
    let ker_obj = Obj::new(f.field(), basis.cols());
    KernelData { ker_obj, ker_mor: Mor { src: ker_obj, dst: f.src, mat: basis }, of: f.clone() }
}

/// The canonical cokernel: projection onto coordinates given by the RREF
/// basis of the left nullspace.
pub fn cokernel(f: &Mor) -> CokernelData {
    let basis = f.mat.left_nullspace_basis();
    let coker_obj = Obj::new(f.field(), basis.rows());
    CokernelData {
        coker_obj,
        coker_mor: Mor { src: f.dst, dst: coker_obj, mat: basis },
        of: f.clone(),
    }
}

/// The unique `s` with `mono ∘ s = t`, if one exists. For a non-mono this
/// returns the particular solution with free variables zero.
pub fn lift_through_mono(mono: &Mor, t: &Mor) -> Result<Mor> {
    if mono.dst != t.dst {
        return Err(Error::Shape(format!(
            "cannot lift {} → {} through {} → {}",
            t.src, t.dst, mono.src, mono.dst
        )));
    }
    let x = mono.mat.solve(&t.mat)?.ok_or_else(|| {
        Error::NoLift(format!("{t} does not factor through {mono}"))
    })?;
    Ok(Mor { src: t.src, dst: mono.src, mat: x })
}

/// The unique `v` with `v ∘ epi = t`, if one exists (particular solution
/// for a non-epi).
pub fn colift_through_epi(epi: &Mor, t: &Mor) -> Result<Mor> {
    if epi.src != t.src {
        return Err(Error::Shape(format!(
            "cannot colift {} → {} through {} → {}",
            t.src, t.dst, epi.src, epi.dst
        )));
    }
    let x = epi.mat.transpose().solve(&t.mat.transpose())?.ok_or_else(|| {
        Error::NoLift(format!("{t} does not factor through {epi}"))
    })?;
    Ok(Mor { src: epi.dst, dst: t.dst, mat: x.transpose() })
}

/// The unique `s` with `k.ker_mor ∘ s = t`, given `k.of ∘ t = 0`.
pub fn kernel_lift(k: &KernelData, t: &Mor) -> Result<Mor> {
    let composite = compose(&k.of, t)?;
    if !composite.is_zero() {
        return Err(Error::NonZeroComposite {
            context: "kernel lift".into(),
            residual: composite.mat,
        });
    }
    lift_through_mono(&k.ker_mor, t)
}

/// The unique `v` with `v ∘ c.coker_mor = t`, given `t ∘ c.of = 0`.
pub fn cokernel_colift(c: &CokernelData, t: &Mor) -> Result<Mor> {
    let composite = compose(t, &c.of)?;
    if !composite.is_zero() {
        return Err(Error::NonZeroComposite {
            context: "cokernel colift".into(),
            residual: composite.mat,
        });
    }
    colift_through_epi(&c.coker_mor, t)
}

/// Direct sum `A + B` with insertions `i, j` and projections `p, q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biproduct {
    pub sum_obj: Obj,
    pub ins_i: Mor,
    pub ins_j: Mor,
    pub proj_p: Mor,
    pub proj_q: Mor,
}

pub fn biproduct(a: Obj, b: Obj) -> Result<Biproduct> {
    if a.field != b.field {
        return Err(Error::FieldMismatch(a.field, b.field));
    }
    let field = a.field;
    let sum_obj = Obj::new(field, a.dim + b.dim);
    let pick = |offset: usize| {
        move |r: usize, c: usize| if r == c + offset { field.one() } else { field.zero() }
    };
    let ins_i = Matrix::from_fn(field, sum_obj.dim, a.dim, pick(0));
    let ins_j = Matrix::from_fn(field, sum_obj.dim, b.dim, pick(a.dim));
    Ok(Biproduct {
        sum_obj,
        proj_p: Mor { src: sum_obj, dst: a, mat: ins_i.transpose() },
        proj_q: Mor { src: sum_obj, dst: b, mat: ins_j.transpose() },
        ins_i: Mor { src: a, dst: sum_obj, mat: ins_i },
        ins_j: Mor { src: b, dst: sum_obj, mat: ins_j },
    })
}

/// Both monos into the same object, each factoring through the other.
pub fn same_subobject(m1: &Mor, m2: &Mor) -> bool {
    m1.dst == m2.dst && lift_through_mono(m1, m2).is_ok() && lift_through_mono(m2, m1).is_ok()
}

/// Both epis out of the same object, each factoring through the other.
pub fn same_quotient(q1: &Mor, q2: &Mor) -> bool {
    q1.src == q2.src && colift_through_epi(q1, q2).is_ok() && colift_through_epi(q2, q1).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: ScalarField = ScalarField::Rationals;
    const GF7: ScalarField = ScalarField::Prime(7);

    fn q(n: usize) -> Obj {
        Obj::new(Q, n)
    }

    #[test]
    fn compose_examples() {
        let f = Mor::from_i64(Q, 2, 2, &[2, 0, 0, 3]);
        assert_eq!(compose(&identity(q(2)), &f).unwrap(), f);
        assert_eq!(compose(&f, &zero_mor(q(3), q(2))).unwrap(), zero_mor(q(3), q(2)));
        let sum = Mor::from_i64(Q, 2, 1, &[1, 1]);
        assert_eq!(compose(&sum, &f).unwrap(), Mor::from_i64(Q, 2, 1, &[2, 3]));
        assert!(compose(&f, &sum).is_err());
    }

    #[test]
    fn identity_and_zero_shapes() {
        let id0 = identity(Obj::zero(Q));
        assert_eq!((id0.matrix().rows(), id0.matrix().cols()), (0, 0));
        let z = zero_mor(q(2), q(3));
        assert_eq!(z.matrix(), &Matrix::zeros(Q, 3, 2));
        let f = Mor::from_i64(Q, 1, 2, &[1, 5]);
        assert_eq!(compose(&zero_mor(q(2), q(4)), &f).unwrap(), zero_mor(q(1), q(4)));
    }

    #[test]
    fn kernel_examples() {
        let k = kernel(&identity(q(3)));
        assert!(k.ker_obj.is_zero());
        assert_eq!(k.ker_mor.matrix(), &Matrix::zeros(Q, 3, 0));

        let k = kernel(&zero_mor(q(2), q(3)));
        assert_eq!(k.ker_mor, identity(q(2)));

        let k = kernel(&Mor::from_i64(Q, 2, 1, &[1, 1]));
        assert_eq!(k.ker_obj.dim, 1);
        assert_eq!(k.ker_mor, Mor::from_i64(Q, 1, 2, &[-1, 1]));
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&identity(q(2))).coker_obj.is_zero());
        assert_eq!(cokernel(&zero_mor(q(2), q(3))).coker_mor, identity(q(3)));
        let c = cokernel(&Mor::from_i64(Q, 1, 2, &[1, 1]));
        assert_eq!(c.coker_obj.dim, 1);
        assert_eq!(c.coker_mor, Mor::from_i64(Q, 2, 1, &[1, -1]));
    }

    #[test]
    fn kernel_lift_examples() {
        let u = Mor::from_i64(Q, 2, 1, &[1, 1]);
        let k = kernel(&u);
        assert_eq!(kernel_lift(&k, &k.ker_mor).unwrap(), identity(k.ker_obj));
        assert_eq!(kernel_lift(&k, &zero_mor(q(3), q(2))).unwrap(), zero_mor(q(3), q(1)));
        let t = Mor::from_i64(Q, 1, 2, &[-2, 2]);
        assert_eq!(kernel_lift(&k, &t).unwrap(), Mor::from_i64(Q, 1, 1, &[2]));

        let bad = Mor::from_i64(Q, 1, 2, &[1, 0]);
        match kernel_lift(&k, &bad) {
            Err(Error::NonZeroComposite { residual, .. }) => {
                assert_eq!(residual, Matrix::from_i64(Q, 1, 1, &[1]))
            }
            other => panic!("expected precondition failure, got {other:?}"),
        }
    }

    #[test]
    fn cokernel_colift_examples() {
        let u = Mor::from_i64(Q, 1, 2, &[1, 1]);
        let c = cokernel(&u);
        assert_eq!(cokernel_colift(&c, &c.coker_mor).unwrap(), identity(c.coker_obj));
        assert_eq!(cokernel_colift(&c, &zero_mor(q(2), q(3))).unwrap(), zero_mor(q(1), q(3)));
        let t = Mor::from_i64(Q, 2, 1, &[-2, 2]);
        assert_eq!(cokernel_colift(&c, &t).unwrap(), Mor::from_i64(Q, 1, 1, &[-2]));
        assert!(cokernel_colift(&c, &Mor::from_i64(Q, 2, 1, &[1, 0])).is_err());
    }

    #[test]
    fn biproduct_examples() {
        let b = biproduct(Obj::zero(Q), q(2)).unwrap();
        assert_eq!(b.sum_obj, q(2));
        assert_eq!(b.ins_i.matrix(), &Matrix::zeros(Q, 2, 0));
        assert_eq!(b.ins_j, identity(q(2)));

        let b = biproduct(q(2), q(3)).unwrap();
        assert_eq!(b.sum_obj.dim, 5);
        assert_eq!(
            b.ins_j.matrix(),
            &Matrix::from_i64(Q, 5, 3, &[0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1])
        );

        let (a, c) = (Obj::new(GF7, 2), Obj::new(GF7, 1));
        let b = biproduct(a, c).unwrap();
        let ip = compose(&b.ins_i, &b.proj_p).unwrap();
        let jq = compose(&b.ins_j, &b.proj_q).unwrap();
        assert_eq!(ip.add(&jq).unwrap(), identity(b.sum_obj));

        assert!(biproduct(q(1), Obj::new(GF7, 1)).is_err());
    }

    #[test]
    fn mono_epi_iso_examples() {
        let id = identity(q(2));
        assert!(is_mono(&id) && is_epi(&id) && is_iso(&id));
        let z = zero_mor(q(1), q(1));
        assert!(!is_mono(&z) && !is_epi(&z) && !is_iso(&z));
        let diag = Mor::from_i64(Q, 1, 2, &[1, 1]);
        assert!(is_mono(&diag) && !is_epi(&diag));
    }

    #[test]
    fn subobject_equality_ignores_basis() {
        let m1 = Mor::from_i64(Q, 1, 2, &[1, 1]);
        let m2 = Mor::from_i64(Q, 1, 2, &[3, 3]);
        let m3 = Mor::from_i64(Q, 1, 2, &[1, 0]);
        assert!(same_subobject(&m1, &m2));
        assert!(!same_subobject(&m1, &m3));
        assert!(same_quotient(&m1.transpose(), &m2.transpose()));
    }
}
