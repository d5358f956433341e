//! Exact sphere-map certificates and seeded numerical checks.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{
    rational_sqrt, CplxRat, HoloPoly, Numerator, RationalMap, WeightedEntry, WeightedMap, WeightedView,
};
use crate::foldanalysis::{infty_coefficients, sphere_map_remainder};
use crate::hermitian::{squared_norm, HermPoly};
use crate::sampling::{norm_sq, sphere_point};

const CHUNK: usize = 64;
const BLOWUP_SEED: u64 = 0xb10c;
const BLOWUP_SAMPLES: usize = 2048;
const BLOWUP_REFINE_ROUNDS: usize = 40;
const BLOWUP_EVIDENCE_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleConfig {
    pub count: usize,
    pub seed: u64,
    pub radius_range: (f64, f64),
    pub tolerance: f64,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            count: 1000,
            seed: 0,
            radius_range: (1.0, 3.0),
            tolerance: 1e-9,
        }
    }
}

impl SampleConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::InvalidParameter("count must be positive".into()));
        }
        let (lo, hi) = self.radius_range;
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
            return Err(Error::InvalidParameter(format!("bad radius range ({lo}, {hi})")));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::NonPositive { what: "tolerance" });
        }
        Ok(())
    }
}

/// Ball B(center, √radius_sq).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub center: Vec<CplxRat>,
    pub radius_sq: BigRational,
}

impl Ball {
    pub fn new(center: Vec<CplxRat>, radius_sq: BigRational) -> Result<Self> {
        if !radius_sq.is_positive() {
            return Err(Error::NonPositive { what: "radius_sq" });
        }
        Ok(Self { center, radius_sq })
    }
}

/// Divisibility verdict; `witness` is the nonzero remainder when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub holds: bool,
    pub witness: Option<HermPoly>,
}

impl Certificate {
    fn from_remainder(rem: HermPoly) -> Self {
        if rem.is_zero() {
            Self { holds: true, witness: None }
        } else {
            Self {
                holds: false,
                witness: Some(rem),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// Coordinates as (re, im) pairs.
    pub point: Vec<(f64, f64)>,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub verdict: Verdict,
    /// None when every sample was skipped.
    pub min_norm: Option<f64>,
    pub max_residual: f64,
    pub violations: Vec<Violation>,
    pub seed: u64,
    pub samples: usize,
    pub skipped_near_poles: usize,
}

/// True iff ‖p‖² − T|q|² is divisible by ‖z‖² − t.
pub fn check_sphere_map(f: &RationalMap, t: &BigRational, big_t: &BigRational) -> Result<Certificate> {
    if !t.is_positive() {
        return Err(Error::NonPositive { what: "t" });
    }
    if !big_t.is_positive() {
        return Err(Error::NonPositive { what: "T" });
    }
    f.require_denominator_nonzero_at_origin()?;
    Ok(Certificate::from_remainder(sphere_map_remainder(f, t, big_t)?))
}

fn require_unit_sphere_map(f: &RationalMap) -> Result<()> {
    let one = BigRational::one();
    if check_sphere_map(f, &one, &one)?.holds {
        Ok(())
    } else {
        Err(Error::Precondition("map does not take the unit sphere to the unit sphere".into()))
    }
}

fn pole_margin(q: &HoloPoly, tolerance: f64) -> f64 {
    tolerance * (1.0 + q.coefficient_mass())
}

fn point_repr(z: &[Complex64]) -> Vec<(f64, f64)> {
    z.iter().map(|c| (c.re, c.im)).collect()
}

struct Sample {
    z: Vec<Complex64>,
    value: f64,
    residual: f64,
    violation: bool,
}

/// Runs `probe` on `count` points; chunk c draws from stream c of the seed,
/// so results do not depend on the number of workers.
fn sample_parallel<F>(cfg: &SampleConfig, point: impl Fn(&mut ChaCha8Rng) -> Vec<Complex64> + Sync, probe: F) -> (Vec<Sample>, usize)
where
    F: Fn(&[Complex64]) -> Option<(f64, f64, bool)> + Sync,
{
    let chunks = cfg.count.div_ceil(CHUNK);
    let results: Vec<(Vec<Sample>, usize)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let len = CHUNK.min(cfg.count - c * CHUNK);
            let mut out = Vec::with_capacity(len);
            let mut skipped = 0;
            for _ in 0..len {
                let z = point(&mut rng);
                match probe(&z) {
                    Some((value, residual, violation)) => out.push(Sample {
                        z,
                        value,
                        residual,
                        violation,
                    }),
                    None => skipped += 1,
                }
            }
            (out, skipped)
        })
        .collect();
    let skipped = results.iter().map(|r| r.1).sum();
    (results.into_iter().flat_map(|r| r.0).collect(), skipped)
}

fn report(cfg: &SampleConfig, samples: Vec<Sample>, skipped: usize, pass: impl Fn(f64) -> bool) -> SampleReport {
    let min_norm = samples.iter().map(|s| s.value).reduce(f64::min);
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let violations: Vec<Violation> = samples
        .iter()
        .filter(|s| s.violation)
        .map(|s| Violation {
            point: point_repr(&s.z),
            value: s.value,
        })
        .collect();
    let verdict = if violations.is_empty() && pass(max_residual) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    SampleReport {
        verdict,
        min_norm,
        max_residual,
        violations,
        seed: cfg.seed,
        samples: samples.len(),
        skipped_near_poles: skipped,
    }
}

/// Samples 1 < ‖z‖ < hi and reports any point with ‖f(z)‖ ≤ 1 + tolerance.
pub fn check_outside(f: &RationalMap, cfg: &SampleConfig) -> Result<SampleReport> {
    cfg.validate()?;
    require_unit_sphere_map(f)?;
    let (lo, hi) = cfg.radius_range;
    if hi <= 1.0 {
        return Err(Error::InvalidParameter("radius range must extend beyond 1".into()));
    }
    let lo = lo.max(1.0);
    let n = f.n();
    let margin = pole_margin(f.denominator(), cfg.tolerance);
    let (samples, skipped) = sample_parallel(
        cfg,
        |rng| {
            // Radii strictly above 1.
            let r = lo + (hi - lo) * (1.0 - rng.gen::<f64>());
            let r = if r <= 1.0 { 1.0 + f64::EPSILON * 4.0 } else { r };
            sphere_point(rng, n, r)
        },
        |z| {
            if f.denominator().eval_f64(z).norm() <= margin {
                return None;
            }
            let norm = norm_sq(&f.eval_float(z).ok()?).sqrt();
            Some((norm, (1.0 - norm).max(0.0), norm <= 1.0 + cfg.tolerance))
        },
    );
    Ok(report(cfg, samples, skipped, |_| true))
}

/// Samples max |f(z)·conj(f(z/‖z‖²)) − 1|.
pub fn check_reflection(f: &RationalMap, cfg: &SampleConfig) -> Result<SampleReport> {
    cfg.validate()?;
    require_unit_sphere_map(f)?;
    let (lo, hi) = cfg.radius_range;
    let lo = lo.max(1e-3);
    let n = f.n();
    let margin = pole_margin(f.denominator(), cfg.tolerance);
    let (samples, skipped) = sample_parallel(
        cfg,
        |rng| {
            let r = lo + (hi - lo) * rng.gen::<f64>();
            sphere_point(rng, n, r)
        },
        |z| {
            let s = norm_sq(z);
            let w: Vec<Complex64> = z.iter().map(|c| c / s).collect();
            let q = f.denominator();
            if q.eval_f64(z).norm() <= margin || q.eval_f64(&w).norm() <= margin {
                return None;
            }
            let fz = f.eval_float(z).ok()?;
            let fw = f.eval_float(&w).ok()?;
            let dot: Complex64 = fz.iter().zip(&fw).map(|(a, b)| a * b.conj()).sum();
            let residual = (dot - Complex64::new(1.0, 0.0)).norm();
            Some((norm_sq(&fz).sqrt(), residual, false))
        },
    );
    let tol = cfg.tolerance;
    Ok(report(cfg, samples, skipped, |r| r < tol))
}

/// Level of evidence that ‖p(z)‖ → ∞ as ‖z‖ → ∞.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "level", rename_all = "snake_case")]
pub enum BlowupCertificate {
    /// p(0) = 0 exactly.
    OriginFixed,
    /// ‖p_d‖² = c‖z‖^{2d} exactly with c > 0.
    TopDegree { c: String },
    /// Sampled minimum of ‖p_d‖² on the unit sphere stays positive.
    NumericEvidence { min: f64 },
    Unknown { min: f64 },
}

impl BlowupCertificate {
    pub fn is_proved(&self) -> bool {
        matches!(self, BlowupCertificate::OriginFixed | BlowupCertificate::TopDegree { .. })
    }
}

/// Applies the two sufficient conditions for norm blow-up of a unit-sphere
/// polynomial map.
pub fn check_norm_blowup(p: &impl WeightedView) -> Result<BlowupCertificate> {
    let w = p.weighted().into_owned();
    require_unit_sphere_map(&RationalMap::polynomial(w.clone()))?;
    let origin_fixed = w.entries().iter().all(|e| e.poly.constant_term().is_zero());
    if origin_fixed {
        return Ok(BlowupCertificate::OriginFixed);
    }
    let d = w.degree().max(0) as u32;
    let top = w.homogeneous_part(d);
    if let Some(c) = infty_coefficients(&top) {
        if let Some(cd) = c.get(d as usize).filter(|v| v.is_positive()) {
            if c.iter().take(d as usize).all(Zero::is_zero) {
                return Ok(BlowupCertificate::TopDegree { c: cd.to_string() });
            }
        }
    }
    let min = sampled_sphere_minimum(&squared_norm(&top), w.n());
    if min > BLOWUP_EVIDENCE_FLOOR {
        Ok(BlowupCertificate::NumericEvidence { min })
    } else {
        Ok(BlowupCertificate::Unknown { min })
    }
}

/// Grid minimum of Q on the unit sphere, refined by shrinking random steps
/// around the best point.
fn sampled_sphere_minimum(q: &HermPoly, n: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(BLOWUP_SEED);
    let mut best = sphere_point(&mut rng, n, 1.0);
    let mut best_val = q.eval_f64(&best);
    for _ in 1..BLOWUP_SAMPLES {
        let z = sphere_point(&mut rng, n, 1.0);
        let v = q.eval_f64(&z);
        if v < best_val {
            best = z;
            best_val = v;
        }
    }
    let mut step = 0.5;
    for _ in 0..BLOWUP_REFINE_ROUNDS {
        for _ in 0..32 {
            let dir = sphere_point(&mut rng, n, step);
            let cand: Vec<Complex64> = best.iter().zip(&dir).map(|(a, b)| a + b).collect();
            let s = norm_sq(&cand).sqrt();
            let cand: Vec<Complex64> = cand.iter().map(|c| c / s).collect();
            let v = q.eval_f64(&cand);
            if v < best_val {
                best = cand;
                best_val = v;
            }
        }
        step *= 0.7;
    }
    best_val.max(0.0)
}

/// ‖c‖ − r < 1, decided exactly: ‖c‖² − 1 − r² < 2r.
fn ball_meets_unit_ball(ball: &Ball) -> bool {
    let c2: BigRational = ball
        .center
        .iter()
        .fold(BigRational::zero(), |acc, x| acc + x.norm_sq());
    let lhs = c2 - BigRational::one() - &ball.radius_sq;
    if lhs.is_negative() {
        return true;
    }
    let four = BigRational::from_integer(4.into());
    &lhs * &lhs < four * &ball.radius_sq
}

/// Components of p − C·q; weights that meet a nonzero C_j must be squares.
fn subtract_center(num: &Numerator, q: &HoloPoly, center: &[CplxRat]) -> Result<WeightedMap> {
    let w = num.weighted().into_owned();
    let mut entries = Vec::with_capacity(w.target_dim());
    for (e, cj) in w.entries().iter().zip(center) {
        if cj.is_zero() {
            entries.push(e.clone());
            continue;
        }
        let s = rational_sqrt(&e.weight).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "weight {} is not a rational square; cannot subtract a nonzero center",
                e.weight
            ))
        })?;
        entries.push(WeightedEntry {
            weight: BigRational::one(),
            poly: e.poly.scale(&CplxRat::real(s)).sub(&q.scale(cj)),
        });
    }
    WeightedMap::new(w.n(), entries)
}

/// True iff f takes the sphere ∂B(c, r) to the sphere ∂B(C, R): the
/// remainder of ‖p − Cq‖² − R²|q|² modulo ‖z − c‖² − r² vanishes.
pub fn check_ball_difference(f: &RationalMap, source: &Ball, target: &Ball) -> Result<Certificate> {
    require_unit_sphere_map(f)?;
    if source.center.len() != f.n() {
        return Err(Error::DimensionMismatch {
            expected: f.n(),
            found: source.center.len(),
        });
    }
    if target.center.len() != f.target_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.target_dim(),
            found: target.center.len(),
        });
    }
    if !ball_meets_unit_ball(source) {
        return Err(Error::Precondition("source ball does not meet the unit ball".into()));
    }
    let diff = subtract_center(f.numerator(), f.denominator(), &target.center)?;
    let shifted_p = diff.shift(&source.center);
    let shifted_q = f.denominator().shift(&source.center);
    let g = squared_norm(&shifted_p).sub(&squared_norm(&shifted_q).scale(&target.radius_sq));
    let rem = g.reduce_mod_sphere(&source.radius_sq)?.remainder;
    Ok(Certificate::from_remainder(rem))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplementVerdict {
    Unknown,
    ContainmentOnly,
    Proper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplementReport {
    pub verdict: ComplementVerdict,
    pub outside: SampleReport,
    pub blowup: BlowupCertificate,
}

/// Proper when containment is violation-free and blow-up is proved.
pub fn check_complement_proper(p: &impl WeightedView, cfg: &SampleConfig) -> Result<ComplementReport> {
    let w = p.weighted().into_owned();
    let f = RationalMap::polynomial(w.clone());
    let outside = check_outside(&f, cfg)?;
    let blowup = check_norm_blowup(&w)?;
    let verdict = match (outside.verdict, blowup.is_proved()) {
        (Verdict::Pass, true) => ComplementVerdict::Proper,
        (Verdict::Pass, false) => ComplementVerdict::ContainmentOnly,
        (Verdict::Fail, _) => ComplementVerdict::Unknown,
    };
    Ok(ComplementReport { verdict, outside, blowup })
}
