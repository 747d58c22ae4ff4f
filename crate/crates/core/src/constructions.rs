//! Derived constructions: epi–mono factorization, pullbacks and pushouts
//! assembled from the biproduct, and the exactness predicates.

use crate::category::{
    biproduct, compose, cokernel, cokernel_colift, is_epi, is_iso, is_mono, kernel,
    kernel_lift, lift_through_mono, Biproduct, CokernelData, KernelData, Mor, Obj,
};
use crate::error::{Error, Result};

/// `f = mono_m ∘ epi_q` through the image object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub image: Obj,
    pub epi_q: Mor,
    pub mono_m: Mor,
}

/// Factors `f` through its image. The mono part is the submatrix of `f`
/// on its (first-nonzero) pivot columns, so it is a literal slice of `f`.
pub fn epi_mono_factorize(f: &Mor) -> Factorization {
    let pivots = f.matrix().rref().pivots;
    factor_on_columns(f, &pivots)
}

/// Same as [`epi_mono_factorize`], but greedily choosing independent
/// columns from the right. Used to exercise uniqueness up to iso.
pub fn epi_mono_factorize_reversed(f: &Mor) -> Factorization {
    let n = f.src().dim;
    let reversed: Vec<usize> = (0..n).rev().collect();
    let mut pivots: Vec<usize> = f
        .matrix()
        .select_columns(&reversed)
        .rref()
        .pivots
        .into_iter()
        .map(|p| n - 1 - p)
        .collect();
    pivots.sort_unstable();
    factor_on_columns(f, &pivots)
}

fn factor_on_columns(f: &Mor, cols: &[usize]) -> Factorization {
    let mono_m = Mor::from_matrix(f.matrix().select_columns(cols));
    let image = mono_m.src();
    let epi_q = lift_through_mono(&mono_m, f).expect("f factors through its own columns");
    Factorization { image, epi_q, mono_m }
}

pub fn image(f: &Mor) -> (Obj, Mor) {
    let Factorization { image, mono_m, .. } = epi_mono_factorize(f);
    (image, mono_m)
}

/// Fiber product of `c: B → D` and `d: C → D`, built as the kernel `n`
/// of `cp − dq: B + C → D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackData {
    pub obj: Obj,
    /// `f = p∘n: P → B`.
    pub f: Mor,
    /// `g = q∘n: P → C`.
    pub g: Mor,
    pub n: KernelData,
    pub sum: Biproduct,
}

pub fn pullback(c: &Mor, d: &Mor) -> Result<PullbackData> {
    if c.dst() != d.dst() {
        return Err(Error::Shape(format!(
            "pullback of a cospan with targets {} and {}",
            c.dst(),
            d.dst()
        )));
    }
    let sum = biproduct(c.src(), d.src())?;
    let cp = compose(c, &sum.proj_p)?;
    let dq = compose(d, &sum.proj_q)?;
    let n = kernel(&cp.sub(&dq)?);
    Ok(PullbackData {
        obj: n.ker_obj,
        f: compose(&sum.proj_p, &n.ker_mor)?,
        g: compose(&sum.proj_q, &n.ker_mor)?,
        n,
        sum,
    })
}

/// The unique `e` with `f∘e = x`, `g∘e = y`, given `c∘x = d∘y`.
pub fn pullback_lift(pb: &PullbackData, x: &Mor, y: &Mor) -> Result<Mor> {
    let t = compose(&pb.sum.ins_i, x)?.add(&compose(&pb.sum.ins_j, y)?)?;
    kernel_lift(&pb.n, &t).map_err(|e| match e {
        Error::NonZeroComposite { residual, .. } => Error::NonZeroComposite {
            context: "pullback lift (c∘x − d∘y)".into(),
            residual,
        },
        other => other,
    })
}

/// Amalgamated sum of `a: A → B` and `b: A → C`, built as the cokernel
/// `t` of `ia + jb: A → B + C`, with `r = t∘i` and `s = −t∘j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PushoutData {
    pub obj: Obj,
    pub r: Mor,
    pub s: Mor,
    pub t: CokernelData,
    pub sum: Biproduct,
}

pub fn pushout(a: &Mor, b: &Mor) -> Result<PushoutData> {
    if a.src() != b.src() {
        return Err(Error::Shape(format!(
            "pushout of a span with sources {} and {}",
            a.src(),
            b.src()
        )));
    }
    let sum = biproduct(a.dst(), b.dst())?;
    let ia = compose(&sum.ins_i, a)?;
    let jb = compose(&sum.ins_j, b)?;
    let t = cokernel(&ia.add(&jb)?);
    Ok(PushoutData {
        obj: t.coker_obj,
        r: compose(&t.coker_mor, &sum.ins_i)?,
        s: compose(&t.coker_mor, &sum.ins_j)?.neg(),
        t,
        sum,
    })
}

/// The unique `m` with `m∘r = x`, `m∘s = y`, given `x∘a = y∘b`.
pub fn pushout_colift(po: &PushoutData, x: &Mor, y: &Mor) -> Result<Mor> {
    let t = compose(x, &po.sum.proj_p)?.sub(&compose(y, &po.sum.proj_q)?)?;
    cokernel_colift(&po.t, &t).map_err(|e| match e {
        Error::NonZeroComposite { residual, .. } => Error::NonZeroComposite {
            context: "pushout colift (x∘a − y∘b)".into(),
            residual,
        },
        other => other,
    })
}

/// `(f, g)` is exact at the middle object: `g∘f = 0` and the image of `f`
/// lifts isomorphically onto the kernel of `g`.
pub fn is_exact_pair(f: &Mor, g: &Mor) -> Result<bool> {
    let gf = compose(g, f)?;
    let categorical = if gf.is_zero() {
        let (_, im) = image(f);
        is_iso(&kernel_lift(&kernel(g), &im)?)
    } else {
        false
    };
    let by_rank = gf.is_zero() && f.rank() + g.rank() == f.dst().dim;
    if categorical != by_rank {
        return Err(Error::Internal(format!(
            "exactness of ({f}, {g}) disagrees with the rank count"
        )));
    }
    Ok(categorical)
}

pub fn is_kernel_of(n: &Mor, f: &Mor) -> Result<bool> {
    if n.dst() != f.src() {
        return Err(Error::Shape(format!(
            "candidate kernel lands in {}, arrow starts at {}",
            n.dst(),
            f.src()
        )));
    }
    if !is_mono(n) || !compose(f, n)?.is_zero() {
        return Ok(false);
    }
    Ok(is_iso(&kernel_lift(&kernel(f), n)?))
}

pub fn is_cokernel_of(t: &Mor, f: &Mor) -> Result<bool> {
    if t.src() != f.dst() {
        return Err(Error::Shape(format!(
            "candidate cokernel starts at {}, arrow lands in {}",
            t.src(),
            f.dst()
        )));
    }
    if !is_epi(t) || !compose(t, f)?.is_zero() {
        return Ok(false);
    }
    Ok(is_iso(&cokernel_colift(&cokernel(f), t)?))
}

/// `0 → X →f Y →g Z → 0` is exact.
pub fn is_short_exact(f: &Mor, g: &Mor) -> Result<bool> {
    Ok(is_mono(f) && is_epi(g) && is_exact_pair(f, g)?)
}

/// Checks every factorization invariant against `f`.
pub fn reproduces(fact: &Factorization, f: &Mor) -> bool {
    compose(&fact.mono_m, &fact.epi_q).is_ok_and(|c| &c == f)
        && is_epi(&fact.epi_q)
        && is_mono(&fact.mono_m)
        && fact.image.dim == f.rank()
}
