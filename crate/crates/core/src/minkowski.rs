//! Minkowski norms on the plane.
//!
//! A Minkowski norm `F` is positive away from the origin, positively
//! 1-homogeneous, and has a positive definite Hessian `g = ½ ∇²(F²)` at every
//! nonzero `y`. The Hessian defines the inner product `⟨u, v⟩_y` that measures
//! angles; the third derivative of `F²` is the Cartan tensor.
//!
//! Built-in variants get exact derivatives from a jet evaluation of a single
//! formula. [`MinkowskiNorm::Custom`] norms are plain closures and are
//! differentiated with central differences.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::jet::{Field, Jet1, Jet2, Jet3};
use crate::math::{self, PI, TAU};
use crate::quadrature;
use crate::validation::ValidationReport;
use crate::vec2::{Mat2, Vec2};

#[derive(Clone, Debug, PartialEq)]
pub enum NormError {
    /// Non-finite or otherwise unusable input.
    InvalidArgument(&'static str),
    /// Hessian, inner product, Cartan tensor and unitization need `y ≠ 0`.
    UndefinedAtOrigin,
    InvalidParameters(String),
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormError::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            NormError::UndefinedAtOrigin => write!(f, "undefined at the origin"),
            NormError::InvalidParameters(msg) => write!(f, "invalid norm parameters: {msg}"),
        }
    }
}

impl core::error::Error for NormError {}

type NormFn = dyn Fn(Vec2) -> f64 + Send + Sync;

/// A user supplied norm, differentiated numerically.
#[derive(Clone)]
pub struct CustomNorm {
    f: Arc<NormFn>,
    pub label: String,
    pub reversible: bool,
}

impl CustomNorm {
    pub fn new<F>(label: impl Into<String>, reversible: bool, f: F) -> Self
    where
        F: Fn(Vec2) -> f64 + Send + Sync + 'static,
    {
        CustomNorm {
            f: Arc::new(f),
            label: label.into(),
            reversible,
        }
    }

    #[inline]
    fn call(&self, y: Vec2) -> f64 {
        (self.f)(y)
    }
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm")
            .field("label", &self.label)
            .field("reversible", &self.reversible)
            .finish()
    }
}

impl PartialEq for CustomNorm {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.f, &other.f)
    }
}

/// Per-face metric.
#[derive(Clone, Debug, PartialEq)]
pub enum MinkowskiNorm {
    /// `F(y) = √(yᵀAy)` with `A` symmetric positive definite.
    Riemannian { a: Mat2 },
    /// `F(y) = √(yᵀAy) + b·y`; a Minkowski norm iff `bᵀA⁻¹b < 1`.
    Randers { a: Mat2, b: Vec2 },
    /// `F(y) = (y₁⁴ + c·y₁²y₂² + y₂⁴)^{1/4}`, invariant under the symmetries of the square.
    Quartic { c: f64 },
    /// `F(y) = P(y)^{1/d}` for a homogeneous polynomial
    /// `P(y) = Σₖ coeffs[k]·y₁^{d-k}·y₂^k` of degree `d = coeffs.len() - 1`.
    Poly { coeffs: Vec<f64> },
    Custom(CustomNorm),
}

/// Hessian inner product `⟨u, v⟩_y = g_ij(y) uⁱ vʲ` at a fixed base direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HessianInner {
    pub base: Vec2,
    pub g: Mat2,
}

impl HessianInner {
    pub fn inner(&self, u: Vec2, v: Vec2) -> f64 {
        self.g.bilinear(u, v)
    }

    /// Hessian length of `u`.
    pub fn length(&self, u: Vec2) -> f64 {
        math::sqrt(self.inner(u, u).max(0.0))
    }

    pub fn eigenvalues(&self) -> (f64, f64) {
        self.g.sym_eigenvalues()
    }
}

/// Rotational sense of an arc in the chart.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    CounterClockwise,
    Clockwise,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::CounterClockwise => 1.0,
            Orientation::Clockwise => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Self {
        if s >= 0.0 {
            Orientation::CounterClockwise
        } else {
            Orientation::Clockwise
        }
    }
}

/// A piece of the indicatrix, parametrized by the Euclidean polar angle of
/// the direction: the point at angle `t` is `unitize((cos t, sin t))`.
#[derive(Clone, Copy, Debug)]
pub struct IndicatrixArc<'a> {
    pub norm: &'a MinkowskiNorm,
    pub start_angle: f64,
    /// Signed Euclidean sweep; positive is counterclockwise.
    pub sweep: f64,
}

impl<'a> IndicatrixArc<'a> {
    /// Arc from `from` to `to` turning in the given sense (sweep in `[0, 2π)`).
    pub fn between(
        norm: &'a MinkowskiNorm,
        from: Vec2,
        to: Vec2,
        orientation: Orientation,
    ) -> Result<Self, NormError> {
        check_direction(from)?;
        check_direction(to)?;
        let mut sweep = from.angle_to(to) * orientation.sign();
        if sweep < 0.0 {
            sweep += TAU;
        }
        if sweep >= TAU {
            sweep -= TAU;
        }
        Ok(IndicatrixArc {
            norm,
            start_angle: from.angle(),
            sweep: sweep * orientation.sign(),
        })
    }

    /// The shorter arc between two directions (the one inside any convex
    /// sector containing both).
    pub fn minor(norm: &'a MinkowskiNorm, from: Vec2, to: Vec2) -> Result<Self, NormError> {
        check_direction(from)?;
        check_direction(to)?;
        Ok(IndicatrixArc {
            norm,
            start_angle: from.angle(),
            sweep: from.angle_to(to),
        })
    }

    /// The whole indicatrix, starting and ending at `from`.
    pub fn full_turn(norm: &'a MinkowskiNorm, from: Vec2, orientation: Orientation) -> Result<Self, NormError> {
        check_direction(from)?;
        Ok(IndicatrixArc {
            norm,
            start_angle: from.angle(),
            sweep: TAU * orientation.sign(),
        })
    }

    pub fn start(&self) -> Vec2 {
        Vec2::from_angle(self.start_angle)
    }

    pub fn end(&self) -> Vec2 {
        Vec2::from_angle(self.start_angle + self.sweep)
    }

    /// Hessian arc length with the default tolerance.
    pub fn length(&self) -> f64 {
        self.length_with_tol(quadrature::DEFAULT_TOL)
    }

    pub fn length_with_tol(&self, tol: f64) -> f64 {
        let tol = match self.norm {
            MinkowskiNorm::Custom(_) => tol.max(CUSTOM_QUAD_TOL),
            _ => tol,
        };
        let s = math::abs(self.sweep);
        if s == 0.0 {
            return 0.0;
        }
        let panels = (s / (PI / 4.0)) as usize + 1;
        let a = self.start_angle;
        let b = a + s;
        if self.sweep > 0.0 {
            quadrature::integrate(&|t| self.norm.indicatrix_speed(t), a, b, tol, panels)
        } else {
            // same set of directions traversed backwards
            quadrature::integrate(&|t| self.norm.indicatrix_speed(t), a - s, a, tol, panels)
        }
    }
}

fn check_direction(v: Vec2) -> Result<(), NormError> {
    if !v.is_finite() {
        return Err(NormError::InvalidArgument("non-finite direction"));
    }
    if v.is_zero() {
        return Err(NormError::InvalidArgument("zero direction"));
    }
    Ok(())
}

// Steps for the numerically differentiated custom norms, relative to max(1, |y|).
const FD_STEP_GRAD: f64 = 1e-5;
const FD_STEP_HESS: f64 = 1e-4;
const FD_STEP_THIRD: f64 = 1e-3;
// Differenced Hessians carry ~1e-8 noise; tighter quadrature cannot converge.
const CUSTOM_QUAD_TOL: f64 = 1e-7;

impl MinkowskiNorm {
    pub fn euclidean() -> Self {
        MinkowskiNorm::Riemannian { a: Mat2::IDENTITY }
    }

    pub fn riemannian(a: Mat2) -> Result<Self, NormError> {
        check_symmetric(&a)?;
        Ok(MinkowskiNorm::Riemannian { a })
    }

    pub fn randers(a: Mat2, b: Vec2) -> Result<Self, NormError> {
        check_symmetric(&a)?;
        if !b.is_finite() {
            return Err(NormError::InvalidParameters("non-finite one-form".into()));
        }
        Ok(MinkowskiNorm::Randers { a, b })
    }

    pub fn quartic(c: f64) -> Result<Self, NormError> {
        if !c.is_finite() {
            return Err(NormError::InvalidParameters("non-finite quartic parameter".into()));
        }
        Ok(MinkowskiNorm::Quartic { c })
    }

    pub fn poly(coeffs: Vec<f64>) -> Result<Self, NormError> {
        if coeffs.len() < 2 {
            return Err(NormError::InvalidParameters("polynomial degree must be at least 1".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(NormError::InvalidParameters("non-finite polynomial coefficient".into()));
        }
        Ok(MinkowskiNorm::Poly { coeffs })
    }

    pub fn custom<F>(label: impl Into<String>, reversible: bool, f: F) -> Self
    where
        F: Fn(Vec2) -> f64 + Send + Sync + 'static,
    {
        MinkowskiNorm::Custom(CustomNorm::new(label, reversible, f))
    }

    /// Short type tag used in reports and the surface file.
    pub fn kind(&self) -> &'static str {
        match self {
            MinkowskiNorm::Riemannian { .. } => "riemannian",
            MinkowskiNorm::Randers { .. } => "randers",
            MinkowskiNorm::Quartic { .. } => "quartic",
            MinkowskiNorm::Poly { .. } => "custom-poly",
            MinkowskiNorm::Custom(_) => "custom",
        }
    }

    /// `F(y) = F(-y)` for all `y`.
    pub fn is_reversible(&self) -> bool {
        match self {
            MinkowskiNorm::Riemannian { .. } | MinkowskiNorm::Quartic { .. } => true,
            MinkowskiNorm::Randers { b, .. } => b.is_zero(),
            MinkowskiNorm::Poly { coeffs } => (coeffs.len() - 1) % 2 == 0,
            MinkowskiNorm::Custom(c) => c.reversible,
        }
    }

    /// `true` when the Hessian does not depend on the base direction.
    pub fn is_riemannian(&self) -> bool {
        matches!(self, MinkowskiNorm::Riemannian { .. })
    }

    fn formula<T: Field>(&self, y1: T, y2: T) -> T {
        match self {
            MinkowskiNorm::Riemannian { a } => quadratic(a, y1, y2).sqrt(),
            MinkowskiNorm::Randers { a, b } => {
                quadratic(a, y1, y2).sqrt() + y1.scale(b.x) + y2.scale(b.y)
            }
            MinkowskiNorm::Quartic { c } => {
                let s1 = y1 * y1;
                let s2 = y2 * y2;
                (s1 * s1 + (s1 * s2).scale(*c) + s2 * s2).powf(0.25)
            }
            MinkowskiNorm::Poly { coeffs } => {
                let d = coeffs.len() - 1;
                let mut total = T::constant(0.0);
                for (k, &ck) in coeffs.iter().enumerate() {
                    if ck == 0.0 {
                        continue;
                    }
                    let mut term = T::constant(ck);
                    for _ in 0..(d - k) {
                        term = term * y1;
                    }
                    for _ in 0..k {
                        term = term * y2;
                    }
                    total = total + term;
                }
                total.powf(1.0 / d as f64)
            }
            MinkowskiNorm::Custom(_) => unreachable!("custom norms have no closed formula"),
        }
    }

    /// `F(y)`; 0 at the origin. Returns NaN for parameters outside the
    /// admissible range (see [`MinkowskiNorm::validate`]).
    pub fn eval(&self, y: Vec2) -> f64 {
        if y.is_zero() {
            return 0.0;
        }
        match self {
            MinkowskiNorm::Custom(c) => c.call(y),
            _ => self.formula(y.x, y.y),
        }
    }

    pub fn try_eval(&self, y: Vec2) -> Result<f64, NormError> {
        if !y.is_finite() {
            return Err(NormError::InvalidArgument("non-finite vector"));
        }
        Ok(self.eval(y))
    }

    /// `∇F(y)`. For a unit `u` this is the covector `⟨u, ·⟩_u`.
    pub fn gradient(&self, y: Vec2) -> Vec2 {
        match self {
            MinkowskiNorm::Custom(c) => {
                let h = FD_STEP_GRAD * y.length().max(1.0);
                let dx = (c.call(y + Vec2::new(h, 0.0)) - c.call(y - Vec2::new(h, 0.0))) / (2.0 * h);
                let dy = (c.call(y + Vec2::new(0.0, h)) - c.call(y - Vec2::new(0.0, h))) / (2.0 * h);
                Vec2::new(dx, dy)
            }
            _ => {
                let j = self.formula(Jet1::var(y.x, 0), Jet1::var(y.y, 1));
                Vec2::new(j.d[0], j.d[1])
            }
        }
    }

    /// `(F, ∇F, ∇²F)` at `y`.
    fn second_order(&self, y: Vec2) -> (f64, Vec2, Mat2) {
        match self {
            MinkowskiNorm::Custom(c) => {
                let h = FD_STEP_HESS * y.length().max(1.0);
                let ex = Vec2::new(h, 0.0);
                let ey = Vec2::new(0.0, h);
                let gx = (self.gradient(y + ex) - self.gradient(y - ex)) / (2.0 * h);
                let gy = (self.gradient(y + ey) - self.gradient(y - ey)) / (2.0 * h);
                let off = 0.5 * (gx.y + gy.x);
                (c.call(y), self.gradient(y), Mat2::symmetric(gx.x, off, gy.y))
            }
            _ => {
                let j = self.formula(Jet2::var(y.x, 0), Jet2::var(y.y, 1));
                (
                    j.v,
                    Vec2::new(j.d1[0], j.d1[1]),
                    Mat2::new(j.d2[0][0], j.d2[0][1], j.d2[1][0], j.d2[1][1]),
                )
            }
        }
    }

    /// Hessian of `F` itself (not of `F²`); used by Newton steps on path lengths.
    pub fn hessian_of_norm(&self, y: Vec2) -> Mat2 {
        self.second_order(y).2
    }

    fn fundamental_tensor(&self, y: Vec2) -> Mat2 {
        let (f, d, h) = self.second_order(y);
        // g = ∇F ∇Fᵀ + F ∇²F
        Mat2::new(
            d.x * d.x + f * h.m[0][0],
            d.x * d.y + f * h.m[0][1],
            d.y * d.x + f * h.m[1][0],
            d.y * d.y + f * h.m[1][1],
        )
    }

    /// `(g_ij(y)) = ½ [F²]_{yⁱyʲ}`.
    pub fn hessian(&self, y: Vec2) -> Result<HessianInner, NormError> {
        check_base(y)?;
        Ok(HessianInner {
            base: y,
            g: self.fundamental_tensor(y),
        })
    }

    /// `⟨u, v⟩_y`.
    pub fn inner(&self, y: Vec2, u: Vec2, v: Vec2) -> Result<f64, NormError> {
        Ok(self.hessian(y)?.inner(u, v))
    }

    /// Cartan tensor `C_y(u, v, w) = ¼ d³/dr ds dt F²(y + ru + sv + tw)`.
    pub fn cartan(&self, y: Vec2, u: Vec2, v: Vec2, w: Vec2) -> Result<f64, NormError> {
        check_base(y)?;
        let t = self.cartan_tensor(y);
        let (u, v, w) = ([u.x, u.y], [v.x, v.y], [w.x, w.y]);
        let mut acc = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    acc += t[i][j][k] * u[i] * v[j] * w[k];
                }
            }
        }
        Ok(acc)
    }

    fn cartan_tensor(&self, y: Vec2) -> [[[f64; 2]; 2]; 2] {
        if let MinkowskiNorm::Riemannian { .. } = self {
            return [[[0.0; 2]; 2]; 2];
        }
        let (f, d1, d2, d3) = match self {
            MinkowskiNorm::Custom(_) => {
                let h = FD_STEP_THIRD * y.length().max(1.0);
                let (f, g, hess) = self.second_order(y);
                let mut d3 = [[[0.0; 2]; 2]; 2];
                let steps = [Vec2::new(h, 0.0), Vec2::new(0.0, h)];
                for (k, e) in steps.iter().enumerate() {
                    let hp = self.second_order(y + *e).2;
                    let hm = self.second_order(y - *e).2;
                    for i in 0..2 {
                        for j in 0..2 {
                            d3[i][j][k] = (hp.m[i][j] - hm.m[i][j]) / (2.0 * h);
                        }
                    }
                }
                (f, [g.x, g.y], hess.m, d3)
            }
            _ => {
                let j = self.formula(Jet3::var(y.x, 0), Jet3::var(y.y, 1));
                (j.v, j.d1, j.d2, j.d3)
            }
        };
        // ¼ ∂³(F²) = ½ (F_i F_jk + F_j F_ik + F_k F_ij + F F_ijk)
        let mut c = [[[0.0; 2]; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    c[i][j][k] = 0.5
                        * (d1[i] * d2[j][k] + d1[j] * d2[i][k] + d1[k] * d2[i][j] + f * d3[i][j][k]);
                }
            }
        }
        c
    }

    /// `y / F(y)`.
    pub fn unitize(&self, y: Vec2) -> Result<Vec2, NormError> {
        check_base(y)?;
        Ok(y / self.eval(y))
    }

    /// Speed of the indicatrix parametrized by the Euclidean polar angle `t`:
    /// `√det g(w) / F(w)²` with `w = (cos t, sin t)`.
    ///
    /// The tangent of the indicatrix is `g`-orthogonal to the point itself,
    /// which turns `⟨ẏ, ẏ⟩_y` into this closed form.
    pub fn indicatrix_speed(&self, t: f64) -> f64 {
        let w = Vec2::from_angle(t);
        let (f, d, h) = self.second_order(w);
        let g = Mat2::new(
            d.x * d.x + f * h.m[0][0],
            d.x * d.y + f * h.m[0][1],
            d.y * d.x + f * h.m[1][0],
            d.y * d.y + f * h.m[1][1],
        );
        math::sqrt(g.det().max(0.0)) / (f * f)
    }

    /// Hessian length of the whole indicatrix.
    pub fn indicatrix_length(&self) -> f64 {
        IndicatrixArc {
            norm: self,
            start_angle: 0.0,
            sweep: TAU,
        }
        .length()
    }

    /// Hessian length of the shorter arc between two directions.
    pub fn angle_between(&self, a: Vec2, b: Vec2) -> f64 {
        match IndicatrixArc::minor(self, a, b) {
            Ok(arc) => arc.length(),
            Err(_) => f64::NAN,
        }
    }

    /// Checks positivity, 1-homogeneity and positive definiteness of the
    /// Hessian on `samples` evenly spaced directions (at least 8).
    pub fn validate(&self, samples: usize) -> ValidationReport {
        let n = samples.max(8);
        let dirs: Vec<Vec2> = (0..n).map(|k| Vec2::from_angle(TAU * k as f64 / n as f64)).collect();
        let mut report = ValidationReport::new();

        let mut worst_pos = f64::INFINITY;
        let mut worst_pos_dir = Vec2::ZERO;
        for &y in &dirs {
            let f = self.eval(y);
            let v = if f.is_finite() { f } else { f64::NEG_INFINITY };
            if v < worst_pos {
                worst_pos = v;
                worst_pos_dir = y;
            }
        }
        report.push(
            "positivity",
            worst_pos > 0.0,
            worst_pos,
            format!("min F = {worst_pos:.3e} at ({:.4}, {:.4})", worst_pos_dir.x, worst_pos_dir.y),
        );

        let mut worst_hom: f64 = 0.0;
        for &y in &dirs {
            let f = self.eval(y);
            for lambda in [0.5, 2.0, 10.0] {
                let rel = math::abs(self.eval(y * lambda) - lambda * f) / math::abs(f);
                let rel = if rel.is_finite() { rel } else { f64::INFINITY };
                worst_hom = worst_hom.max(rel);
            }
        }
        report.push(
            "homogeneity",
            worst_hom <= 1e-9,
            worst_hom,
            format!("max relative error {worst_hom:.3e}"),
        );

        let mut worst_eig = f64::INFINITY;
        let mut worst_eig_dir = Vec2::ZERO;
        for &y in &dirs {
            let (lo, _) = self.fundamental_tensor(y).sym_eigenvalues();
            let lo = if lo.is_finite() { lo } else { f64::NEG_INFINITY };
            if lo < worst_eig {
                worst_eig = lo;
                worst_eig_dir = y;
            }
        }
        report.push(
            "hessian-positive-definite",
            worst_eig > 0.0,
            worst_eig,
            format!(
                "min eigenvalue {worst_eig:.3e} at ({:.4}, {:.4})",
                worst_eig_dir.x, worst_eig_dir.y
            ),
        );

        if let MinkowskiNorm::Randers { a, b } = self {
            let conorm2 = a.inverse().map(|ai| ai.bilinear(*b, *b)).unwrap_or(f64::INFINITY);
            report.push(
                "randers-one-form",
                conorm2 < 1.0,
                math::sqrt(conorm2),
                format!("|b| in the dual of A is {:.6}", math::sqrt(conorm2)),
            );
        }
        report
    }
}

#[inline]
fn quadratic<T: Field>(a: &Mat2, y1: T, y2: T) -> T {
    let off = 0.5 * (a.m[0][1] + a.m[1][0]);
    (y1 * y1).scale(a.m[0][0]) + (y1 * y2).scale(2.0 * off) + (y2 * y2).scale(a.m[1][1])
}

fn check_symmetric(a: &Mat2) -> Result<(), NormError> {
    if !a.is_finite() {
        return Err(NormError::InvalidParameters("non-finite matrix".into()));
    }
    let scale = math::abs(a.m[0][1]).max(math::abs(a.m[1][0])).max(1.0);
    if math::abs(a.m[0][1] - a.m[1][0]) > 1e-12 * scale {
        return Err(NormError::InvalidParameters("matrix is not symmetric".into()));
    }
    Ok(())
}

fn check_base(y: Vec2) -> Result<(), NormError> {
    if !y.is_finite() {
        return Err(NormError::InvalidArgument("non-finite vector"));
    }
    if y.is_zero() {
        return Err(NormError::UndefinedAtOrigin);
    }
    Ok(())
}
