//! Piecewise paths in `C` and in configuration space, and transport of
//! fundamental solutions along them.

use crate::dkz::DkzParams;
use crate::error::{Error, Result};
use crate::integrator::{integrate_unit, StepStats, ToleranceSpec};
use crate::tensor::{Complex, ComplexMatrix, TensorSpace};
use std::f64::consts::PI;

const JOIN_TOL: f64 = 1e-12;

/// A line segment or circular arc, parametrized by `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line { from: Complex, to: Complex },
    Arc { center: Complex, radius: f64, arg_from: f64, arg_to: f64 },
}

impl Segment {
    pub fn line(from: Complex, to: Complex) -> Self {
        Segment::Line { from, to }
    }

    pub fn arc(center: Complex, radius: f64, arg_from: f64, arg_to: f64) -> Self {
        Segment::Arc { center, radius, arg_from, arg_to }
    }

    pub fn point(&self, t: f64) -> Complex {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, arg_from, arg_to } => {
                center + Complex::from_polar(radius, arg_from + (arg_to - arg_from) * t)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Complex {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { center: _, radius, arg_from, arg_to } => {
                let th = arg_from + (arg_to - arg_from) * t;
                Complex::new(0.0, arg_to - arg_from) * Complex::from_polar(radius, th)
            }
        }
    }

    pub fn start(&self) -> Complex {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, arg_from, arg_to, .. } => radius * (arg_to - arg_from).abs(),
        }
    }

    pub fn reversed(&self) -> Self {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, arg_from, arg_to } => {
                Segment::Arc { center, radius, arg_from: arg_to, arg_to: arg_from }
            }
        }
    }

    /// Distance from `p` to the segment.
    pub fn distance_to(&self, p: Complex) -> f64 {
        match *self {
            Segment::Line { from, to } => {
                let d = to - from;
                let l2 = d.norm_sqr();
                if l2 == 0.0 {
                    return (p - from).norm();
                }
                let t = (((p - from) * d.conj()).re / l2).clamp(0.0, 1.0);
                (from + d * t - p).norm()
            }
            Segment::Arc { center, radius, arg_from, arg_to } => {
                let w = p - center;
                let ends = (self.start() - p).norm().min((self.end() - p).norm());
                if w.norm() == 0.0 {
                    return radius;
                }
                let (lo, hi) = if arg_from <= arg_to { (arg_from, arg_to) } else { (arg_to, arg_from) };
                let mut phi = w.arg();
                // move phi to the first lift >= lo
                phi += 2.0 * PI * ((lo - phi) / (2.0 * PI)).ceil();
                if phi <= hi {
                    (w.norm() - radius).abs().min(ends)
                } else {
                    ends
                }
            }
        }
    }

    /// Continuous change of `arg(z - p)` along the segment; `p` must not lie on it.
    pub fn winding_arg(&self, p: Complex) -> f64 {
        let pieces = 64;
        let mut total = 0.0;
        let mut prev = self.start() - p;
        for k in 1..=pieces {
            let next = self.point(k as f64 / pieces as f64) - p;
            total += (next / prev).arg();
            prev = next;
        }
        total
    }
}

/// A continuous chain of segments.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexPath {
    segments: Vec<Segment>,
}

impl ComplexPath {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter("path has no segments".into()));
        }
        for (k, w) in segments.windows(2).enumerate() {
            let (a, b) = (w[0].end(), w[1].start());
            if (a - b).norm() > JOIN_TOL * (1.0 + a.norm()) {
                return Err(Error::DiscontinuousPath { index: k + 1 });
            }
        }
        for s in &segments {
            let finite = |z: Complex| z.re.is_finite() && z.im.is_finite();
            if !finite(s.start()) || !finite(s.end()) {
                return Err(Error::InvalidParameter("non-finite path point".into()));
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn start(&self) -> Complex {
        self.segments[0].start()
    }

    pub fn end(&self) -> Complex {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn reversed(&self) -> Self {
        Self { segments: self.segments.iter().rev().map(Segment::reversed).collect() }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &ComplexPath) -> Result<Self> {
        let mut s = self.segments.clone();
        s.extend_from_slice(&other.segments);
        Self::new(s)
    }

    pub fn distance_to(&self, p: Complex) -> f64 {
        self.segments.iter().map(|s| s.distance_to(p)).fold(f64::INFINITY, f64::min)
    }

    /// Fails with [`Error::PathThroughPole`] if the path comes within `guard` of `p`.
    pub fn ensure_avoids(&self, p: Complex, guard: f64) -> Result<()> {
        if self.distance_to(p) <= guard {
            Err(Error::PathThroughPole)
        } else {
            Ok(())
        }
    }

    pub fn winding_arg(&self, p: Complex) -> f64 {
        self.segments.iter().map(|s| s.winding_arg(p)).sum()
    }

    /// Full counterclockwise circle about `center`, starting at angle `arg0`.
    pub fn circle(center: Complex, radius: f64, arg0: f64) -> Result<Self> {
        Self::new(vec![Segment::arc(center, radius, arg0, arg0 + 2.0 * PI)])
    }
}

/// Transports `F0` along `path` under `dF/dz = M(z) F`.
pub fn transport<M>(coeff: M, path: &ComplexPath, f0: &ComplexMatrix, tol: &ToleranceSpec) -> Result<ComplexMatrix>
where
    M: Fn(Complex) -> ComplexMatrix,
{
    transport_with_stats(coeff, path, f0, tol, &mut StepStats::default())
}

pub fn transport_with_stats<M>(
    coeff: M,
    path: &ComplexPath,
    f0: &ComplexMatrix,
    tol: &ToleranceSpec,
    stats: &mut StepStats,
) -> Result<ComplexMatrix>
where
    M: Fn(Complex) -> ComplexMatrix,
{
    if f0.nrows() == 0 {
        return Err(Error::InvalidParameter("empty initial value".into()));
    }
    let mut f = f0.clone();
    for seg in path.segments() {
        if seg.length() == 0.0 {
            continue;
        }
        f = integrate_unit(|t| coeff(seg.point(t)) * seg.derivative(t), &f, tol, stats)?;
    }
    Ok(f)
}

/// A path in configuration space: pieces of `n` simultaneous segments.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigPath {
    n: usize,
    pieces: Vec<Vec<Segment>>,
}

impl ConfigPath {
    pub fn new(pieces: Vec<Vec<Segment>>) -> Result<Self> {
        let n = pieces.first().map(|p| p.len()).ok_or_else(|| Error::InvalidParameter("empty path".into()))?;
        if n == 0 || pieces.iter().any(|p| p.len() != n) {
            return Err(Error::InvalidParameter("every piece needs one segment per point".into()));
        }
        for (k, w) in pieces.windows(2).enumerate() {
            for (x, y) in w[0].iter().zip(&w[1]) {
                let (a, b) = (x.end(), y.start());
                if (a - b).norm() > JOIN_TOL * (1.0 + a.norm()) {
                    return Err(Error::DiscontinuousPath { index: k + 1 });
                }
            }
        }
        Ok(Self { n, pieces })
    }

    /// The constant path at `z`.
    pub fn constant(z: &[Complex]) -> Result<Self> {
        Self::new(vec![z.iter().map(|&p| Segment::line(p, p)).collect()])
    }

    /// Straight-line motion from `a` to `b`.
    pub fn linear(a: &[Complex], b: &[Complex]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len().to_string(), got: b.len().to_string() });
        }
        Self::new(vec![a.iter().zip(b).map(|(&p, &q)| Segment::line(p, q)).collect()])
    }

    /// Swap of points `i` and `i+1` (1-based) on half circles of radius half
    /// their gap, point `i+1` passing above point `i`.
    pub fn semicircle_swap(z: &[Complex], i: usize) -> Result<Self> {
        check_swap(z, i)?;
        let (a, b) = (z[i - 1], z[i]);
        let mid = (a + b) * 0.5;
        let r = (b - a).norm() * 0.5;
        let phi = (b - a).arg();
        let mut piece: Vec<Segment> = z.iter().map(|&p| Segment::line(p, p)).collect();
        piece[i] = Segment::arc(mid, r, phi, phi + PI);
        piece[i - 1] = Segment::arc(mid, r, phi + PI, phi + 2.0 * PI);
        Self::new(vec![piece])
    }

    /// Homotopic to [`ConfigPath::semicircle_swap`]: points `i`, `i+1` first
    /// approach to distance `2 r0`, swap on a half circle of radius `r0`, and
    /// separate again to each other's original position.
    pub fn contracted_swap(z: &[Complex], i: usize, r0: f64) -> Result<Self> {
        check_swap(z, i)?;
        let (a, b) = (z[i - 1], z[i]);
        let gap = (b - a).norm();
        if !(r0 > 0.0) || 2.0 * r0 > gap {
            return Err(Error::InvalidParameter(format!("swap radius {r0} must lie in (0, {}]", gap / 2.0)));
        }
        let mid = (a + b) * 0.5;
        let dir = (b - a) / gap;
        let phi = dir.arg();
        let fixed = |p: Complex| Segment::line(p, p);
        let mut approach: Vec<Segment> = z.iter().map(|&p| fixed(p)).collect();
        approach[i - 1] = Segment::line(a, mid - dir * r0);
        approach[i] = Segment::line(b, mid + dir * r0);
        let mut swap: Vec<Segment> = z.iter().map(|&p| fixed(p)).collect();
        swap[i] = Segment::arc(mid, r0, phi, phi + PI);
        swap[i - 1] = Segment::arc(mid, r0, phi + PI, phi + 2.0 * PI);
        let mut separate: Vec<Segment> = z.iter().map(|&p| fixed(p)).collect();
        separate[i - 1] = Segment::line(mid + dir * r0, b);
        separate[i] = Segment::line(mid - dir * r0, a);
        Self::new(vec![approach, swap, separate])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[Vec<Segment>] {
        &self.pieces
    }

    pub fn start(&self) -> Vec<Complex> {
        self.pieces[0].iter().map(Segment::start).collect()
    }

    pub fn end(&self) -> Vec<Complex> {
        self.pieces[self.pieces.len() - 1].iter().map(Segment::end).collect()
    }

    pub fn reversed(&self) -> Self {
        Self { n: self.n, pieces: self.pieces.iter().rev().map(|p| p.iter().map(Segment::reversed).collect()).collect() }
    }

    pub fn then(&self, other: &ConfigPath) -> Result<Self> {
        let mut pieces = self.pieces.clone();
        pieces.extend(other.pieces.iter().cloned());
        Self::new(pieces)
    }

    /// Sampled minimum of `|z_i(t) - z_j(t)|` over the path.
    pub fn min_separation(&self) -> f64 {
        let samples = 256;
        let mut best = f64::INFINITY;
        for piece in &self.pieces {
            for k in 0..=samples {
                let t = k as f64 / samples as f64;
                let pts: Vec<Complex> = piece.iter().map(|s| s.point(t)).collect();
                for i in 0..self.n {
                    for j in i + 1..self.n {
                        best = best.min((pts[i] - pts[j]).norm());
                    }
                }
            }
        }
        best
    }

    fn scale(&self) -> f64 {
        let pts = self.start();
        let mut s: f64 = 0.0;
        for p in &pts {
            for q in &pts {
                s = s.max((p - q).norm());
            }
        }
        s.max(1.0)
    }
}

fn check_swap(z: &[Complex], i: usize) -> Result<()> {
    if z.len() < 2 {
        return Err(Error::TooFewStrands { needed: 2, got: z.len() });
    }
    if i == 0 || i >= z.len() {
        return Err(Error::IndexOutOfRange { index: i, max: z.len() - 1 });
    }
    if z[i - 1] == z[i] {
        return Err(Error::PathCollision { distance: 0.0, guard: 0.0 });
    }
    Ok(())
}

/// Transport of `F0` under the dKZ connection pulled back along `path`:
/// `dF/dt = (1/κ) Σ_i (u^{(i)} + Σ_{j≠i} Ω_ij/(z_i - z_j)) ż_i F`.
pub fn dkz_holonomy(params: &DkzParams, path: &ConfigPath, f0: &ComplexMatrix, tol: &ToleranceSpec) -> Result<ComplexMatrix> {
    let space = TensorSpace::new(params.m(), path.n())?;
    if f0.nrows() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim().to_string(), got: f0.nrows().to_string() });
    }
    let guard = 1e-6 * path.scale();
    let sep = path.min_separation();
    if sep < guard {
        return Err(Error::PathCollision { distance: sep, guard });
    }
    let conn = params.connection(path.n())?;
    let mut f = f0.clone();
    let mut stats = StepStats::default();
    for piece in path.pieces() {
        if piece.iter().all(|s| s.length() == 0.0) {
            continue;
        }
        f = integrate_unit(
            |t| {
                let z: Vec<Complex> = piece.iter().map(|s| s.point(t)).collect();
                let dz: Vec<Complex> = piece.iter().map(|s| s.derivative(t)).collect();
                conn.pullback(&z, &dz)
            },
            &f,
            tol,
            &mut stats,
        )?;
    }
    Ok(f)
}
