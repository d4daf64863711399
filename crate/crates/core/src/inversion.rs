//! Moving a chosen face of a plane drawing to the outside by circle
//! inversion about a point inside it.
//!
//! Inversion bends segments into arcs, so each segment is sampled, the samples
//! are inverted in floating point and snapped to a dyadic grid, and the result
//! is verified exactly. Sampling and grid are refined until verification
//! passes.

use num_traits::{Signed, Zero};

use crate::drawing::{verify_drawing, Drawing, Surface};
use crate::error::{Error, Result};
use crate::geometry::{from_f64, on_segment, q, segment_meet, Meet, Point, Q};
use crate::rotation::{EmbeddingReport, FaceStep};

/// Boundary walk of a face as a closed point sequence.
fn face_walk(d: &Drawing, steps: &[FaceStep]) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    for s in steps {
        let i = d
            .graph
            .index_of(s.edge)
            .ok_or(Error::MissingEdge(s.edge))?;
        let mut line = d.edges[i].polyline();
        if d.graph.ends(i)[0] != s.from {
            line.reverse();
        }
        line.pop();
        out.extend(line);
    }
    Ok(out)
}

fn signed_area(walk: &[Point]) -> Q {
    let mut a = Q::zero();
    for (k, p) in walk.iter().enumerate() {
        let r = walk[(k + 1) % walk.len()];
        a += p.x * r.y - p.y * r.x;
    }
    a / 2
}

/// Index of the unbounded face. Traced walks keep bounded faces on their
/// right, so those have negative signed area and the unbounded one does not.
pub fn outer_face(d: &Drawing, report: &EmbeddingReport) -> Result<usize> {
    if d.surface != Surface::Plane {
        return Err(Error::Unsupported("outer face of a torus drawing".into()));
    }
    let mut outer = Vec::new();
    for (f, steps) in report.faces.iter().enumerate() {
        if !signed_area(&face_walk(d, steps)?).is_negative() {
            outer.push(f);
        }
    }
    match outer.as_slice() {
        [f] => Ok(*f),
        _ => Err(Error::Internal(format!("expected one unbounded face, found {outer:?}"))),
    }
}

fn segments(d: &Drawing) -> Vec<(Point, Point)> {
    d.edges
        .iter()
        .flat_map(|e| e.polyline().windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>())
        .collect()
}

/// A point strictly inside the bounded face with boundary walk `walk`.
fn interior_point(d: &Drawing, walk: &[Point]) -> Result<Point> {
    let (s0, s1) = (walk[0], walk[1]);
    let m = Point::new((s0.x + s1.x) / 2, (s0.y + s1.y) / 2);
    // right-hand normal
    let normal = (s1.y - s0.y, s0.x - s1.x);
    let segs = segments(d);
    let mut t = q(1, 2);
    for _ in 0..60 {
        let p = Point::new(m.x + t * normal.0, m.y + t * normal.1);
        let clear = segs.iter().all(|&(a, b)| {
            if (a, b) == (s0, s1) || (a, b) == (s1, s0) {
                return !on_segment(a, b, p);
            }
            segment_meet(a, b, m, p) == Meet::None
        });
        if clear {
            return Ok(p);
        }
        t /= 2;
    }
    Err(Error::Internal("no interior point found".into()))
}

/// Redraws a plane drawing so that face `target` of its traced faces becomes
/// the unbounded face. Certificates are recomputed for the same vertex sets.
pub fn outer_face_inversion(d: &Drawing, target: usize) -> Result<Drawing> {
    if d.surface != Surface::Plane {
        return Err(Error::Unsupported("inversion of a torus drawing".into()));
    }
    let report = verify_drawing(d)?;
    if target >= report.face_count {
        return Err(Error::InvalidInput(format!("face {target} does not exist")));
    }
    let sets: Vec<_> = d.certificates.iter().map(|c| c.vertices.clone()).collect();
    if outer_face(d, &report)? == target {
        return Ok(d.clone());
    }
    let walk = face_walk(d, &report.faces[target])?;
    let z = interior_point(d, &walk)?.to_f64();
    let invert = |p: Point| {
        let (x, y) = p.to_f64();
        let (dx, dy) = (x - z.0, y - z.1);
        let r2 = dx * dx + dy * dy;
        (dx / r2, dy / r2)
    };

    // bounding box of the inverted vertices fixes the scale
    let all: Vec<(f64, f64)> = d.points.iter().map(|&p| invert(p)).collect();
    let span = all
        .iter()
        .flat_map(|&(x, y)| [x.abs(), y.abs()])
        .fold(f64::MIN_POSITIVE, f64::max);
    let mut last = None;
    for (samples, bits) in [(4usize, 16u32), (8, 18), (16, 20), (32, 22), (64, 24)] {
        let snap = |p: Point| {
            let (x, y) = invert(p);
            Point::new(from_f64(x / span, bits), from_f64(y / span, bits))
        };
        let mut out = d.clone();
        out.mirror = None;
        out.certificates.clear();
        out.points = d.points.iter().map(|&p| snap(p)).collect();
        for e in &mut out.edges {
            let line = e.polyline();
            let mut new = vec![snap(line[0])];
            for w in line.windows(2) {
                for k in 1..=samples {
                    let t = q(k as i128, samples as i128);
                    let p = Point::new(w[0].x + t * (w[1].x - w[0].x), w[0].y + t * (w[1].y - w[0].y));
                    let s = snap(p);
                    if new.last() != Some(&s) {
                        new.push(s);
                    }
                }
            }
            e.pieces = vec![new];
        }
        match verify_drawing(&out).and_then(|_| out.certify(&sets)) {
            Ok(()) => return Ok(out),
            Err(err) => last = Some(err),
        }
    }
    Err(Error::InvalidDrawing(format!(
        "inverted drawing failed verification at every resolution: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}
