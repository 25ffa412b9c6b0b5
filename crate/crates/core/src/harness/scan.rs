use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Config;
use crate::curve::{validate, RationalComponent, RationalLink, ValidationIssue};
use crate::error::{Error, Result};
use crate::poly::RealPolynomial;
use crate::writhe::self_linking_with_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanOptions {
    pub steps: usize,
    /// Size of the seeded quadratic detour `bend * l (1 - l) P` added to the
    /// straight path, relative to the coefficient size. Zero scans the segment;
    /// a path from a link to itself is always constant.
    pub bend: f64,
    /// Width at which bisection stops.
    pub resolution: f64,
    /// Tolerance of the validation run at each located event.
    pub event_tol: f64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self { steps: 100, bend: 0.5, resolution: 1e-8, event_tol: 1e-6 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EventKind {
    /// Two real branches pass through each other.
    RealCrossingSwitch,
    /// Two conjugate imaginary branches pass through each other at a real point.
    ConjugateBranchPass,
    /// No double point of the space curve was found at the event.
    Unconfirmed,
}

#[derive(Debug, Clone, Serialize)]
pub struct JumpEvent {
    pub interval: (f64, f64),
    pub before: i32,
    pub after: i32,
    pub delta: i32,
    pub kind: EventKind,
    /// Parameters of the space double point found at the event.
    pub params: Option<((f64, f64), (f64, f64))>,
}

impl JumpEvent {
    pub fn is_simple(&self) -> bool {
        self.delta.abs() == 2
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct UnresolvedInterval {
    pub interval: (f64, f64),
    pub before: i32,
    pub after: i32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    /// Path parameter and value at each grid step; `None` where the curve is invalid.
    pub samples: Vec<(f64, Option<i32>)>,
    pub events: Vec<JumpEvent>,
    pub unresolved: Vec<UnresolvedInterval>,
}

impl ScanReport {
    pub fn start(&self) -> Option<i32> {
        self.samples.first().and_then(|s| s.1)
    }

    pub fn end(&self) -> Option<i32> {
        self.samples.last().and_then(|s| s.1)
    }

    pub fn total_jump(&self) -> i32 {
        self.events.iter().map(|e| e.delta).sum()
    }

    /// The located jumps account for the whole change of value.
    pub fn telescopes(&self) -> bool {
        match (self.start(), self.end()) {
            (Some(a), Some(b)) => self.unresolved.is_empty() && self.total_jump() == b - a,
            _ => false,
        }
    }
}

/// Point `l` of the path `(1 - l) A + l B + bend l (1 - l) P`.
pub fn interpolate(start: &RationalLink, end: &RationalLink, detour: &[RationalComponent], bend: f64, l: f64) -> RationalLink {
    let comps = start
        .components()
        .iter()
        .zip(end.components())
        .zip(detour)
        .map(|((a, b), p)| {
            RationalComponent::new(std::array::from_fn(|i| {
                let mix = &a.coord(i).scale(1.0 - l) + &b.coord(i).scale(l);
                &mix + &p.coord(i).scale(bend * l * (1.0 - l))
            }))
        })
        .collect();
    RationalLink::new(comps).expect("nonempty")
}

fn detour(start: &RationalLink, end: &RationalLink, rng: &mut ChaCha8Rng) -> Vec<RationalComponent> {
    start
        .components()
        .iter()
        .zip(end.components())
        .map(|(a, b)| {
            let d = a.degree();
            let scale = a.max_abs_coeff().max(b.max_abs_coeff());
            RationalComponent::new(std::array::from_fn(|_| {
                RealPolynomial::new((0..=d).map(|_| scale * rng.gen_range(-1.0..1.0)).collect())
            }))
        })
        .collect()
}

struct Path<'a> {
    start: &'a RationalLink,
    end: &'a RationalLink,
    detour: Vec<RationalComponent>,
    options: ScanOptions,
    config: Config,
    seed: u64,
}

impl Path<'_> {
    fn link(&self, l: f64) -> RationalLink {
        interpolate(self.start, self.end, &self.detour, self.options.bend, l)
    }

    fn value(&self, l: f64) -> Option<i32> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ l.to_bits());
        self_linking_with_rng(&self.link(l), &mut rng, &self.config).ok().map(|r| r.total)
    }

    /// Value near `l`, nudging the parameter inside `(lo, hi)` when `l` itself fails.
    fn value_near(&self, l: f64, lo: f64, hi: f64) -> Option<(f64, i32)> {
        let w = hi - lo;
        for k in [0.0, 0.1, -0.1, 0.2, -0.2, 0.3, -0.3] {
            let m = l + k * w;
            if let Some(v) = self.value(m) {
                return Some((m, v));
            }
        }
        None
    }

    fn resolve(&self, (lo, vlo): (f64, i32), (hi, vhi): (f64, i32), events: &mut Vec<JumpEvent>, unresolved: &mut Vec<UnresolvedInterval>) {
        if hi - lo <= self.options.resolution {
            events.push(self.event(lo, vlo, hi, vhi));
            return;
        }
        let Some((m, vm)) = self.value_near(0.5 * (lo + hi), lo, hi) else {
            unresolved.push(UnresolvedInterval { interval: (lo, hi), before: vlo, after: vhi });
            return;
        };
        if vm != vlo {
            self.resolve((lo, vlo), (m, vm), events, unresolved);
        }
        if vm != vhi {
            self.resolve((m, vm), (hi, vhi), events, unresolved);
        }
    }

    fn event(&self, lo: f64, before: i32, hi: f64, after: i32) -> JumpEvent {
        let report = validate(&self.link(0.5 * (lo + hi)), self.options.event_tol);
        let mut kind = EventKind::Unconfirmed;
        let mut params = None;
        for issue in &report.issues {
            let (s, t) = match issue {
                ValidationIssue::SelfIntersection { params, .. } | ValidationIssue::CrossIntersection { params, .. } => *params,
                _ => continue,
            };
            let real = |z: Complex64| z.im.abs() <= 1e-6 * (1.0 + z.norm());
            kind = if real(s) && real(t) {
                EventKind::RealCrossingSwitch
            } else if (s - t.conj()).norm() <= 1e-6 * (1.0 + s.norm()) {
                EventKind::ConjugateBranchPass
            } else {
                continue;
            };
            params = Some(((s.re, s.im), (t.re, t.im)));
            break;
        }
        JumpEvent { interval: (lo, hi), before, after, delta: after - before, kind, params }
    }
}

/// Follows the self-linking number along a path from `start` to `end` and
/// brackets every change of value by bisection.
pub fn jump_scan(start: &RationalLink, end: &RationalLink, options: &ScanOptions, seed: u64, config: &Config) -> Result<ScanReport> {
    if start.degrees() != end.degrees() {
        return Err(Error::Invalid("scan endpoints must have the same component degrees".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut detour = detour(start, end, &mut rng);
    if start == end {
        detour.iter_mut().for_each(|p| *p = RationalComponent::new(std::array::from_fn(|_| RealPolynomial::zero())));
    }
    let path = Path { start, end, detour, options: *options, config: *config, seed };
    let n = options.steps.max(1);
    let samples: Vec<(f64, Option<i32>)> = (0..=n)
        .map(|i| {
            let l = i as f64 / n as f64;
            let link = path.link(l);
            let value = if validate(&link, crate::curve::DEFAULT_VALIDATION_TOL).is_valid() { path.value(l) } else { None };
            (l, value)
        })
        .collect();
    let mut events = Vec::new();
    let mut unresolved = Vec::new();
    let valid: Vec<(f64, i32)> = samples.iter().filter_map(|&(l, v)| v.map(|v| (l, v))).collect();
    for w in valid.windows(2) {
        if w[0].1 != w[1].1 {
            path.resolve(w[0], w[1], &mut events, &mut unresolved);
        }
    }
    Ok(ScanReport { samples, events, unresolved })
}
