use crate::error::{Error, Result};

/// `c4 s⁴ + c3 s³ + c2 s² + c1 s + c0`, coefficients stored highest degree first.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quartic {
    pub coeffs: [f64; 5],
}

impl Quartic {
    pub fn new(c4: f64, c3: f64, c2: f64, c1: f64, c0: f64) -> Self {
        Self {
            coeffs: [c4, c3, c2, c1, c0],
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        horner(&self.coeffs, s)
    }

    pub fn derivative_at(&self, s: f64) -> f64 {
        let [c4, c3, c2, c1, _] = self.coeffs;
        ((4.0 * c4 * s + 3.0 * c3) * s + 2.0 * c2) * s + c1
    }
}

fn horner(coeffs: &[f64], s: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * s + c)
}

/// Relative size below which a leading coefficient is dropped.
const LEADING_EPS: f64 = 1e-12;
const MERGE_EPS: f64 = 1e-10;

/// Real roots in ascending order. Each root is polished with one guarded
/// Newton step and roots closer than 1e-10 are merged. Vanishing leading
/// coefficients reduce the degree.
pub fn solve_quartic(q: &Quartic) -> Result<Vec<f64>> {
    let scale = q.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::InvalidInput("quartic has no nonzero coefficient".into()));
    }
    let first = q
        .coeffs
        .iter()
        .position(|c| c.abs() > LEADING_EPS * scale)
        .unwrap_or(4);
    let poly: Vec<f64> = q.coeffs[first..].iter().map(|c| c / scale).collect();

    let mut roots = match poly.len() {
        1 => Vec::new(),
        2 => vec![-poly[1] / poly[0]],
        3 => quadratic_roots(poly[0], poly[1], poly[2]),
        _ => isolated_real_roots(&poly),
    };

    let derivative = derivative_coeffs(&poly);
    for r in roots.iter_mut() {
        let d = horner(&derivative, *r);
        if d.abs() > f64::EPSILON {
            let step = horner(&poly, *r) / d;
            if step.is_finite() && step.abs() < 1e-3 * (1.0 + r.abs()) {
                *r -= step;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() < MERGE_EPS);
    Ok(roots)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    // Numerically stable form.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return vec![0.0];
    }
    vec![q / a, c / q]
}

/// Real roots of a polynomial of degree ≥ 3 (leading coefficient nonzero).
///
/// Real roots are separated by the real roots of the derivative, so those
/// (found recursively) together with the Cauchy bound split the line into
/// intervals holding at most one simple root each. Sign changes are then
/// refined by safeguarded Newton; critical points where the polynomial
/// (numerically) vanishes are multiple roots.
fn isolated_real_roots(poly: &[f64]) -> Vec<f64> {
    let derivative = derivative_coeffs(poly);
    let critical = match derivative.len() {
        2 => vec![-derivative[1] / derivative[0]],
        3 => quadratic_roots(derivative[0], derivative[1], derivative[2]),
        _ => isolated_real_roots(&derivative),
    };
    let bound = 1.0 + poly[1..].iter().fold(0.0f64, |m, c| m.max((c / poly[0]).abs()));
    let mut points = vec![-bound];
    points.extend(critical.iter().copied().filter(|c| c.abs() < bound));
    points.push(bound);
    points.sort_by(f64::total_cmp);

    let magnitude = |x: f64| poly.iter().fold(0.0, |acc, c| acc * x.abs() + c.abs());
    let mut roots = Vec::new();
    for c in &points[1..points.len() - 1] {
        if horner(poly, *c).abs() <= 1e-13 * magnitude(*c) {
            roots.push(*c);
        }
    }
    for w in points.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (horner(poly, a), horner(poly, b));
        if fa == 0.0 || fb == 0.0 || fa.signum() == fb.signum() {
            continue;
        }
        roots.push(bracketed_root(poly, &derivative, a, b, fa));
    }
    roots
}

fn derivative_coeffs(poly: &[f64]) -> Vec<f64> {
    let n = poly.len() - 1;
    poly[..n].iter().enumerate().map(|(i, c)| c * (n - i) as f64).collect()
}

/// Root of `poly` in `[a, b]`, where `poly(a)` has sign `fa` and `poly(b)`
/// the opposite one. Newton steps that leave the bracket fall back to
/// bisection.
fn bracketed_root(poly: &[f64], derivative: &[f64], mut a: f64, mut b: f64, fa: f64) -> f64 {
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = horner(poly, x);
        if fx == 0.0 {
            return x;
        }
        if fx.signum() == fa.signum() {
            a = x;
        } else {
            b = x;
        }
        let d = horner(derivative, x);
        let newton = x - fx / d;
        let next = if d != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * (1.0 + x.abs()) || b - a <= 4.0 * f64::EPSILON * (1.0 + x.abs()) {
            return next;
        }
        x = next;
    }
    x
}
