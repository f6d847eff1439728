use crate::basis1d::Interval;
use crate::error::{Error, Result};
use crate::scalar::{c, Real};

use super::family::Point;

/// `n` equally spaced points in [a + eps, b − eps] (the midpoint when n = 1).
fn inset_linspace<T: Real>(seg: &Interval<T>, n: usize, eps: T) -> Result<Vec<T>> {
    if !(eps > T::zero()) || eps + eps >= seg.b - seg.a {
        return Err(Error::Grid(format!(
            "offset {} does not fit inside [{}, {}]",
            eps.as_f64(),
            seg.a.as_f64(),
            seg.b.as_f64()
        )));
    }
    let lo = seg.a + eps;
    let hi = seg.b - eps;
    if n == 1 {
        return Ok(vec![(lo + hi) * c(0.5)]);
    }
    let step = (hi - lo) / T::of(n - 1);
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + step * T::of(i) }).collect())
}

fn check_segments<T: Real>(segments: &[Interval<T>]) -> Result<()> {
    let mut sorted: Vec<&Interval<T>> = segments.iter().collect();
    sorted.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    for w in sorted.windows(2) {
        if w[1].a < w[0].b {
            return Err(Error::Grid(format!(
                "segments [{}, {}] and [{}, {}] overlap",
                w[0].a.as_f64(),
                w[0].b.as_f64(),
                w[1].a.as_f64(),
                w[1].b.as_f64()
            )));
        }
    }
    Ok(())
}

/// Collocation points on the intervals plus two exterior pads, each segment
/// sampled with `pts_per_segment` points inset by `eps_offset` from its ends.
///
/// Points come out in increasing order when the segments tile the line.
pub fn collocation_grid_1d<T: Real>(
    intervals: &[Interval<T>],
    pts_per_segment: usize,
    eps_offset: T,
    pads: Option<(Interval<T>, Interval<T>)>,
) -> Result<Vec<Point<T>>> {
    if pts_per_segment == 0 {
        return Err(Error::Grid("need at least one point per segment".into()));
    }
    let mut segments: Vec<Interval<T>> = Vec::with_capacity(intervals.len() + 2);
    if let Some((left, _)) = pads {
        segments.push(left);
    }
    segments.extend_from_slice(intervals);
    if let Some((_, right)) = pads {
        segments.push(right);
    }
    check_segments(&segments)?;
    segments.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap_or(std::cmp::Ordering::Equal));
    let mut points = Vec::with_capacity(segments.len() * pts_per_segment);
    for seg in &segments {
        points.extend(inset_linspace(seg, pts_per_segment, eps_offset)?.into_iter().map(Point::D1));
    }
    Ok(points)
}

/// Tensor grid of inset radii (per segment between consecutive breaks) and
/// `n_angles` uniform angles in [0, 2π).
pub fn collocation_grid_2d<T: Real>(
    radial_breaks: &[T],
    pts_per_segment: usize,
    eps_offset: T,
    n_angles: usize,
) -> Result<Vec<Point<T>>> {
    if radial_breaks.len() < 2 {
        return Err(Error::Grid("need at least two radial breaks".into()));
    }
    if radial_breaks[0] < T::zero() || radial_breaks.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Grid("radial breaks must be nonnegative and increasing".into()));
    }
    if pts_per_segment == 0 || n_angles == 0 {
        return Err(Error::Grid("need at least one radius and one angle".into()));
    }
    let angles: Vec<(T, T)> = (0..n_angles)
        .map(|k| {
            let theta = T::TAU() * T::of(k) / T::of(n_angles);
            (theta.cos(), theta.sin())
        })
        .collect();
    let mut points = Vec::with_capacity((radial_breaks.len() - 1) * pts_per_segment * n_angles);
    for w in radial_breaks.windows(2) {
        let seg = Interval::new(w[0], w[1])?;
        for r in inset_linspace(&seg, pts_per_segment, eps_offset)? {
            points.extend(angles.iter().map(|&(cs, sn)| Point::D2(r * cs, r * sn)));
        }
    }
    Ok(points)
}
