//! Seeded generators for morphisms, exact pairs, squares and snake
//! diagrams.
//!
//! Every generator constructs its target property directly (kernels and
//! cokernels first, compatible arrows second) instead of rejection
//! sampling. The PRNG is `ChaCha8Rng` seeded with `seed_from_u64`; entries
//! are drawn from `-3..=3` (nonzero with probability `density`) and mapped
//! into the field, so output depends only on the seed, the configuration
//! and the call sequence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::{
    biproduct, cokernel, cokernel_colift, colift_through_epi, compose, identity, is_epi, is_mono,
    kernel, kernel_lift, lift_through_mono, Mor, Obj,
};
use crate::constructions::{pullback, pushout};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::ScalarField;
use crate::snake::SnakeInput;
use crate::squares::Square;

pub const PRNG_NAME: &str = "ChaCha8Rng";

const RESAMPLE_LIMIT: usize = 100;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub field: ScalarField,
    pub max_dim: usize,
    pub density: f64,
}

impl GenConfig {
    pub fn new(seed: u64, field: ScalarField) -> Self {
        GenConfig { seed, field, max_dim: 5, density: 0.6 }
    }

    pub fn with_max_dim(self, max_dim: usize) -> Self {
        GenConfig { max_dim, ..self }
    }

    fn check(&self) -> Result<()> {
        if self.max_dim < 1 {
            return Err(Error::Generation("max_dim must be at least 1".into()));
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return Err(Error::Generation(format!("density {} outside (0, 1]", self.density)));
        }
        Ok(())
    }
}

/// What a generated square should be, for the pullback route (`e` varies)
/// and the pushout route (`m` varies).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareKind {
    /// `e` (or `m`) is the identity.
    Universal,
    /// `e` epi (or `m` mono).
    SemiCartesian,
    /// `e` not epi (or `m` not mono).
    NotSemiCartesian,
    /// `e` (or `m`) unconstrained.
    Any,
}

pub struct Generator {
    cfg: GenConfig,
    rng: ChaCha8Rng,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl Generator {
    pub fn new(cfg: GenConfig) -> Result<Self> {
        cfg.check()?;
        Ok(Generator { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) })
    }

    /// An independent stream for case `index` of the suite `tag`, so that
    /// cases can be generated in any order or in parallel.
    pub fn for_case(cfg: GenConfig, tag: &str, index: u64) -> Result<Self> {
        let tag_hash = tag
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        let seed = splitmix64(cfg.seed ^ splitmix64(tag_hash ^ splitmix64(index)));
        Generator::new(GenConfig { seed, ..cfg })
    }

    pub fn config(&self) -> &GenConfig {
        &self.cfg
    }

    pub fn field(&self) -> ScalarField {
        self.cfg.field
    }

    pub fn obj(&mut self, dim: usize) -> Obj {
        Obj::new(self.cfg.field, dim)
    }

    /// A dimension in `0..=max_dim`.
    pub fn dim(&mut self) -> usize {
        self.rng.random_range(0..=self.cfg.max_dim)
    }

    /// A dimension in `lo..=max(lo, max_dim)`.
    pub fn dim_at_least(&mut self, lo: usize) -> usize {
        self.rng.random_range(lo..=lo.max(self.cfg.max_dim))
    }

    /// A dimension in `0..=hi`.
    pub fn dim_at_most(&mut self, hi: usize) -> usize {
        self.rng.random_range(0..=hi)
    }

    pub fn pick<T: Copy>(&mut self, items: &[T]) -> T {
        items[self.rng.random_range(0..items.len())]
    }

    pub fn random_obj(&mut self) -> Obj {
        let d = self.dim();
        self.obj(d)
    }

    pub fn coin(&mut self) -> bool {
        self.rng.random_bool(0.5)
    }

    fn entry(&mut self) -> i64 {
        if self.rng.random_bool(self.cfg.density) {
            const NONZERO: [i64; 6] = [-3, -2, -1, 1, 2, 3];
            NONZERO[self.rng.random_range(0..NONZERO.len())]
        } else {
            0
        }
    }

    pub fn matrix(&mut self, rows: usize, cols: usize) -> Matrix {
        let values: Vec<i64> = (0..rows * cols).map(|_| self.entry()).collect();
        Matrix::from_i64(self.cfg.field, rows, cols, &values)
    }

    pub fn morphism(&mut self, src: Obj, dst: Obj) -> Mor {
        let m = self.matrix(dst.dim, src.dim);
        Mor::new(src, dst, m).expect("shape matches by construction")
    }

    fn resample(&mut self, what: &str, mut f: impl FnMut(&mut Self) -> Option<Mor>) -> Result<Mor> {
        for _ in 0..RESAMPLE_LIMIT {
            if let Some(m) = f(self) {
                return Ok(m);
            }
        }
        Err(Error::Generation(format!("no {what} after {RESAMPLE_LIMIT} samples")))
    }

    pub fn epi(&mut self, src: Obj, dst: Obj) -> Result<Mor> {
        if src.dim < dst.dim {
            return Err(Error::Generation(format!("no epi {src} → {dst}")));
        }
        self.resample("epi", |g| Some(g.morphism(src, dst)).filter(is_epi))
    }

    pub fn mono(&mut self, src: Obj, dst: Obj) -> Result<Mor> {
        if src.dim > dst.dim {
            return Err(Error::Generation(format!("no mono {src} → {dst}")));
        }
        self.resample("mono", |g| Some(g.morphism(src, dst)).filter(is_mono))
    }

    pub fn iso(&mut self, obj: Obj) -> Result<Mor> {
        self.epi(obj, obj)
    }

    /// A map of rank strictly below `dst.dim` (needs `dst.dim ≥ 1`).
    pub fn non_epi(&mut self, src: Obj, dst: Obj) -> Mor {
        assert!(dst.dim >= 1, "every map onto the null object is epi");
        let mid = self.obj(dst.dim - 1);
        let first = self.morphism(src, mid);
        compose(&self.morphism(mid, dst), &first).expect("composable")
    }

    /// A map of rank strictly below `src.dim` (needs `src.dim ≥ 1`).
    pub fn non_mono(&mut self, src: Obj, dst: Obj) -> Mor {
        assert!(src.dim >= 1, "every map out of the null object is mono");
        let mid = self.obj(src.dim - 1);
        let first = self.morphism(src, mid);
        compose(&self.morphism(mid, dst), &first).expect("composable")
    }

    /// `(f, g)` exact at the middle: `f` is a random epi onto `Ker g`
    /// followed by the kernel inclusion.
    pub fn exact_pair(&mut self) -> Result<(Mor, Mor)> {
        let (b, c) = (self.random_obj(), self.random_obj());
        let g = self.morphism(b, c);
        let k = kernel(&g);
        let a_dim = self.dim_at_least(k.ker_obj.dim);
        let a = self.obj(a_dim);
        let e = self.epi(a, k.ker_obj)?;
        Ok((compose(&k.ker_mor, &e)?, g))
    }

    /// Pullback route: random `right: B → D`, `bottom: C → D`, then
    /// `top = f∘e`, `left = g∘e` for an `e: A → P` of the requested kind.
    pub fn pullback_square(&mut self, kind: SquareKind) -> Result<Square> {
        for _ in 0..RESAMPLE_LIMIT {
            let (b, c, d) = (self.random_obj(), self.random_obj(), self.random_obj());
            let right = self.morphism(b, d);
            let bottom = self.morphism(c, d);
            if let Some(sq) = self.square_over(&right, &bottom, kind)? {
                return Ok(sq);
            }
        }
        Err(Error::Generation("no square of the requested kind".into()))
    }

    /// A square with the given right vertical, built by the pullback route.
    pub fn square_with_right(&mut self, right: &Mor, kind: SquareKind) -> Result<Square> {
        for _ in 0..RESAMPLE_LIMIT {
            let c = self.random_obj();
            let bottom = self.morphism(c, right.dst());
            if let Some(sq) = self.square_over(right, &bottom, kind)? {
                return Ok(sq);
            }
        }
        Err(Error::Generation("no square of the requested kind".into()))
    }

    /// A square over the cospan `(right, bottom)`, or `None` when the kind
    /// is impossible (a non-epi onto a null pullback).
    pub fn square_over(&mut self, right: &Mor, bottom: &Mor, kind: SquareKind) -> Result<Option<Square>> {
        let pb = pullback(right, bottom)?;
        let e = match kind {
            SquareKind::Universal => identity(pb.obj),
            SquareKind::SemiCartesian => {
                let a = self.dim_at_least(pb.obj.dim);
                let a = self.obj(a);
                self.epi(a, pb.obj)?
            }
            SquareKind::NotSemiCartesian => {
                if pb.obj.is_zero() {
                    return Ok(None);
                }
                let a = self.random_obj();
                self.non_epi(a, pb.obj)
            }
            SquareKind::Any => {
                let a = self.random_obj();
                self.morphism(a, pb.obj)
            }
        };
        Ok(Some(Square::new(
            compose(&pb.f, &e)?,
            compose(&pb.g, &e)?,
            right.clone(),
            bottom.clone(),
        )?))
    }

    /// Pushout route: random span `(top, left)`, then `right = m∘r`,
    /// `bottom = m∘s` for an `m: S → D` of the requested kind.
    pub fn pushout_square(&mut self, kind: SquareKind) -> Result<Square> {
        for _ in 0..RESAMPLE_LIMIT {
            let (a, b, c) = (self.random_obj(), self.random_obj(), self.random_obj());
            let top = self.morphism(a, b);
            let left = self.morphism(a, c);
            if let Some(sq) = self.square_under(&top, &left, kind)? {
                return Ok(sq);
            }
        }
        Err(Error::Generation("no square of the requested kind".into()))
    }

    /// A square with the given left vertical, built by the pushout route.
    pub fn square_with_left(&mut self, left: &Mor, kind: SquareKind) -> Result<Square> {
        for _ in 0..RESAMPLE_LIMIT {
            let b = self.random_obj();
            let top = self.morphism(left.src(), b);
            if let Some(sq) = self.square_under(&top, left, kind)? {
                return Ok(sq);
            }
        }
        Err(Error::Generation("no square of the requested kind".into()))
    }

    pub fn square_under(&mut self, top: &Mor, left: &Mor, kind: SquareKind) -> Result<Option<Square>> {
        let po = pushout(top, left)?;
        let m = match kind {
            SquareKind::Universal => identity(po.obj),
            SquareKind::SemiCartesian => {
                let d = self.dim_at_least(po.obj.dim);
                let d = self.obj(d);
                self.mono(po.obj, d)?
            }
            SquareKind::NotSemiCartesian => {
                if po.obj.is_zero() {
                    return Ok(None);
                }
                let d = self.random_obj();
                self.non_mono(po.obj, d)
            }
            SquareKind::Any => {
                let d = self.random_obj();
                self.morphism(po.obj, d)
            }
        };
        Ok(Some(Square::new(
            top.clone(),
            left.clone(),
            compose(&m, &po.r)?,
            compose(&m, &po.s)?,
        )?))
    }

    /// Semi-cartesian by condition (i): the pullback route with `e` epi.
    pub fn semicartesian(&mut self) -> Result<Square> {
        self.pullback_square(SquareKind::SemiCartesian)
    }

    /// Short exact rows: `a` mono with `c = coker a`, `d` epi with
    /// `b = ker d`; `v` random on `{ v : d∘v∘a = 0 }`, `u` and `w` induced.
    pub fn snake_input(&mut self) -> Result<SnakeInput> {
        let a_obj = self.random_obj();
        let b_dim = self.dim_at_least(a_obj.dim);
        let b_obj = self.obj(b_dim);
        let b2_obj = self.random_obj();
        let c2_dim = self.dim_at_most(b2_obj.dim);
        let c2_obj = self.obj(c2_dim);
        let a = self.mono(a_obj, b_obj)?;
        let d = self.epi(b2_obj, c2_obj)?;
        self.snake_over(a, d)
    }

    /// As [`Generator::snake_input`] but with `a` and `d` unconstrained,
    /// so the rows are exact only in the middle.
    pub fn snake_input_general(&mut self) -> Result<SnakeInput> {
        let (a_obj, b_obj) = (self.random_obj(), self.random_obj());
        let (b2_obj, c2_obj) = (self.random_obj(), self.random_obj());
        let a = self.morphism(a_obj, b_obj);
        let d = self.morphism(b2_obj, c2_obj);
        self.snake_over(a, d)
    }

    /// Half the time `v` is zero or annihilated, plus a crossing
    /// term `b∘X∘c`. The crossing term leaves `u` and `w` alone and feeds
    /// `δ` directly, so both `δ = 0` and `δ ≠ 0` are common.
    fn snake_over(&mut self, a: Mor, d: Mor) -> Result<SnakeInput> {
        let c = cokernel(&a);
        let b = kernel(&d);
        let v = if self.coin() {
            let base = self.annihilated_middle(&d, &a)?;
            let base = if self.coin() { base.scale(&self.field().zero()) } else { base };
            let x = self.morphism(c.coker_obj, b.ker_obj);
            base.add(&compose(&b.ker_mor, &compose(&x, &c.coker_mor)?)?)?
        } else {
            self.annihilated_middle(&d, &a)?
        };
        let u = kernel_lift(&b, &compose(&v, &a)?)?;
        let w = cokernel_colift(&c, &compose(&d, &v)?)?;
        let input = SnakeInput { a, c: c.coker_mor, u, v, w, b: b.ker_mor, d };
        input.validate()?;
        Ok(input)
    }

    /// A random `v: dst(a) → src(d)` with `d∘v∘a = 0`, as a random
    /// combination of a nullspace basis of the vectorized condition.
    pub fn annihilated_middle(&mut self, d: &Mor, a: &Mor) -> Result<Mor> {
        let (src, dst) = (a.dst(), d.src());
        let field = self.cfg.field;
        let (dm, am) = (d.matrix(), a.matrix());
        // Row (i, j) of the system is entry (i, j) of d·v·a; column (r, s)
        // is the unknown v[r][s].
        let system = Matrix::from_fn(
            field,
            dm.rows() * am.cols(),
            dst.dim * src.dim,
            |row, col| {
                let (i, j) = (row / am.cols(), row % am.cols());
                let (r, s) = (col / src.dim, col % src.dim);
                dm.get(i, r) * am.get(s, j)
            },
        );
        let basis = system.nullspace_basis();
        let coeffs = self.matrix(basis.cols(), 1);
        let flat = basis.mul(&coeffs);
        let v = Matrix::from_fn(field, dst.dim, src.dim, |r, s| flat.get(r * src.dim + s, 0).clone());
        Mor::new(src, dst, v)
    }

    /// Rows `0 → A →a B →c C` and `0 → A' →b B' →d C'` exact, verticals
    /// commuting; `c` and `d` need not be epi. Input for left exactness of
    /// kernels.
    pub fn left_exact_rows(&mut self) -> Result<SnakeInput> {
        let (b_obj, c_obj) = (self.random_obj(), self.random_obj());
        let (b2_obj, c2_obj) = (self.random_obj(), self.random_obj());
        let c = self.morphism(b_obj, c_obj);
        let a = kernel(&c).ker_mor;
        let d = self.morphism(b2_obj, c2_obj);
        let b = kernel(&d);
        let v = self.annihilated_middle(&d, &a)?;
        let u = kernel_lift(&b, &compose(&v, &a)?)?;
        // d∘v vanishes on ker c, so it extends from im c; add noise on the
        // complement of im c.
        let dv = compose(&d, &v)?;
        let on_image = colift_through_epi(&c, &dv)?;
        let off_image = cokernel(&c).coker_mor;
        let noise = self.morphism(off_image.dst(), c2_obj);
        let w = on_image.add(&compose(&noise, &off_image)?)?;
        Ok(SnakeInput { a, c, u, v, w, b: b.ker_mor, d })
    }

    /// Rows `A →a B →c C → 0` and `A' →b B' →d C' → 0` exact, verticals
    /// commuting; `a` and `b` need not be mono. Input for right exactness
    /// of cokernels.
    pub fn right_exact_rows(&mut self) -> Result<SnakeInput> {
        let (a_obj, b_obj) = (self.random_obj(), self.random_obj());
        let (a2_obj, b2_obj) = (self.random_obj(), self.random_obj());
        let a = self.morphism(a_obj, b_obj);
        let c = cokernel(&a);
        let b = self.morphism(a2_obj, b2_obj);
        let d = cokernel(&b).coker_mor;
        let v = self.annihilated_middle(&d, &a)?;
        let w = cokernel_colift(&c, &compose(&d, &v)?)?;
        let va = compose(&v, &a)?;
        let particular = lift_through_mono(&b, &va)?;
        let kb = kernel(&b).ker_mor;
        let noise = self.morphism(a_obj, kb.src());
        let u = particular.add(&compose(&kb, &noise)?)?;
        Ok(SnakeInput { a, c: c.coker_mor, u, v, w, b, d })
    }

    /// Two successive squares with `L = (c, v, w, d)` semi-cartesian,
    /// `(a, c)` exact and `d∘b = 0` by construction (`b` covers `v∘a` plus
    /// a random extra block).
    pub fn transport_input(&mut self) -> Result<SnakeInput> {
        let l = self.semicartesian()?;
        let (c, v, w, d) = (l.top, l.left, l.right, l.bottom);
        let kc = kernel(&c);
        let a_dim = self.dim_at_least(kc.ker_obj.dim);
        let a_obj = self.obj(a_dim);
        let a = compose(&kc.ker_mor, &self.epi(a_obj, kc.ker_obj)?)?;
        let kd = kernel(&d);
        let gamma = kernel_lift(&kd, &compose(&v, &a)?)?;
        let extra = self.rng.random_range(0..=2);
        let extra = self.obj(extra);
        let rho = self.morphism(extra, kd.ker_obj);
        let sum = biproduct(a_obj, extra)?;
        let block = compose(&gamma, &sum.proj_p)?.add(&compose(&rho, &sum.proj_q)?)?;
        let b = compose(&kd.ker_mor, &block)?;
        Ok(SnakeInput { a, c, u: sum.ins_i, v, w, b, d })
    }

    /// Dual of [`Generator::transport_input`]: `K = (a, u, v, b)`
    /// semi-cartesian, `(b, d)` exact and `c∘a = 0`.
    pub fn transport_input_dual(&mut self) -> Result<SnakeInput> {
        let k = self.semicartesian()?;
        let (a, u, v, b) = (k.top, k.left, k.right, k.bottom);
        let cb = cokernel(&b);
        let c2_dim = self.dim_at_least(cb.coker_obj.dim);
        let c2 = self.obj(c2_dim);
        let d = compose(&self.mono(cb.coker_obj, c2)?, &cb.coker_mor)?;
        let ca = cokernel(&a);
        let gamma = cokernel_colift(&ca, &compose(&d, &v)?)?;
        let extra = self.rng.random_range(0..=2);
        let extra = self.obj(extra);
        let rho = self.morphism(ca.coker_obj, extra);
        let sum = biproduct(c2, extra)?;
        let block = compose(&sum.ins_i, &gamma)?.add(&compose(&sum.ins_j, &rho)?)?;
        let c = compose(&block, &ca.coker_mor)?;
        Ok(SnakeInput { a, c, u, v, w: sum.proj_p, b, d })
    }
}

/// Convenience wrappers matching the one-shot generator interface.
pub fn gen_morphism(cfg: GenConfig, src_dim: usize, dst_dim: usize) -> Result<Mor> {
    let mut g = Generator::new(cfg)?;
    let (s, d) = (g.obj(src_dim), g.obj(dst_dim));
    Ok(g.morphism(s, d))
}

pub fn gen_exact_pair(cfg: GenConfig) -> Result<(Mor, Mor)> {
    Generator::new(cfg)?.exact_pair()
}

pub fn gen_semicartesian(cfg: GenConfig, kind: SquareKind) -> Result<Square> {
    Generator::new(cfg)?.pullback_square(kind)
}

pub fn gen_snake_input(cfg: GenConfig) -> Result<SnakeInput> {
    Generator::new(cfg)?.snake_input()
}
