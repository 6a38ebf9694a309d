//! Planar convex hull by Andrew's monotone chain over exact rationals.

use num_traits::{Signed, Zero};

use super::point::Point;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Twice the signed area of the triangle `o, a, b`; positive for a left turn.
pub fn cross(o: &Point, a: &Point, b: &Point) -> Rational {
    (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x())
}

/// Strict extreme points of the convex hull of `points`, counterclockwise,
/// starting at the lexicographically smallest point. Points lying in the
/// relative interior of a hull edge are not reported.
pub fn hull2d(points: &[Point]) -> Result<Vec<Point>> {
    if let Some(bad) = points.iter().find(|p| p.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: bad.dim(),
        });
    }
    if points.is_empty() {
        return Err(Error::Domain("convex hull of an empty point set".into()));
    }

    let mut pts: Vec<&Point> = points.iter().collect();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return Ok(pts.into_iter().cloned().collect());
    }

    let mut lower: Vec<&Point> = Vec::with_capacity(pts.len());
    for &p in &pts {
        while lower.len() >= 2 && !cross(lower[lower.len() - 2], lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Point> = Vec::with_capacity(pts.len());
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(upper[upper.len() - 2], upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    Ok(lower.into_iter().cloned().collect())
}

/// Whether `p` lies in the closed convex polygon given by counterclockwise `hull`.
pub fn polygon_contains(hull: &[Point], p: &Point) -> bool {
    match hull.len() {
        0 => false,
        1 => &hull[0] == p,
        2 => {
            cross(&hull[0], &hull[1], p).is_zero()
                && within(hull[0].x(), hull[1].x(), p.x())
                && within(hull[0].y(), hull[1].y(), p.y())
        }
        n => (0..n).all(|i| !cross(&hull[i], &hull[(i + 1) % n], p).is_negative()),
    }
}

fn within(a: &Rational, b: &Rational, v: &Rational) -> bool {
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    lo <= v && v <= hi
}
