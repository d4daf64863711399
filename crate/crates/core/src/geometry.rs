//! Exact rational plane geometry.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Q = Ratio<i128>;

pub fn q(n: i128, d: i128) -> Q {
    Q::new(n, d)
}

pub fn qi(n: i128) -> Q {
    Q::from_integer(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Q,
    pub y: Q,
}

impl Point {
    pub fn new(x: Q, y: Q) -> Self {
        Point { x, y }
    }

    pub fn int(x: i128, y: i128) -> Self {
        Point { x: qi(x), y: qi(y) }
    }

    pub fn mirror(self) -> Self {
        Point { x: -self.x, y: self.y }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (to_f64(self.x), to_f64(self.y))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

pub fn to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Nearest rational with denominator `2^bits`.
pub fn from_f64(v: f64, bits: u32) -> Q {
    let scale = (1i128 << bits) as f64;
    q((v * scale).round() as i128, 1i128 << bits)
}

pub fn sub(a: Point, b: Point) -> (Q, Q) {
    (a.x - b.x, a.y - b.y)
}

pub fn cross(u: (Q, Q), v: (Q, Q)) -> Q {
    u.0 * v.1 - u.1 * v.0
}

/// Sign of the turn `a -> b -> c`.
pub fn orient(a: Point, b: Point, c: Point) -> Ordering {
    cross(sub(b, a), sub(c, a)).cmp(&Q::zero())
}

fn within(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Intersection of two closed segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Meet {
    None,
    Point(Point),
    /// Collinear overlap of positive length.
    Overlap,
}

pub fn segment_meet(a: Point, b: Point, c: Point, d: Point) -> Meet {
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return Meet::None;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    use Ordering::Equal;
    if o1 == Equal && o2 == Equal {
        // collinear: collect shared points
        let mut pts: Vec<Point> = [c, d].into_iter().filter(|&p| within(a, b, p)).collect();
        pts.extend([a, b].into_iter().filter(|&p| within(c, d, p)));
        pts.sort();
        pts.dedup();
        return match pts.len() {
            0 => Meet::None,
            1 => Meet::Point(pts[0]),
            _ => Meet::Overlap,
        };
    }
    if o1 != o2 && o3 != o4 {
        // proper or touching intersection at a single point
        if o1 == Equal {
            return Meet::Point(c);
        }
        if o2 == Equal {
            return Meet::Point(d);
        }
        if o3 == Equal {
            return Meet::Point(a);
        }
        if o4 == Equal {
            return Meet::Point(b);
        }
        let r = sub(b, a);
        let s = sub(d, c);
        let t = cross(sub(c, a), s) / cross(r, s);
        return Meet::Point(Point::new(a.x + t * r.0, a.y + t * r.1));
    }
    Meet::None
}

/// Whether `p` lies on the closed segment `a b`.
pub fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == Ordering::Equal && within(a, b, p)
}

/// Counter-clockwise angular order of nonzero direction vectors, starting
/// from the positive x axis.
pub fn angle_cmp(u: (Q, Q), v: (Q, Q)) -> Ordering {
    let half = |w: (Q, Q)| {
        if w.1.is_positive() || (w.1.is_zero() && w.0.is_positive()) {
            0
        } else {
            1
        }
    };
    half(u)
        .cmp(&half(v))
        .then_with(|| Q::zero().cmp(&cross(u, v)))
}

pub fn parse_q(text: &str) -> Option<Q> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let d: i128 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(q(n.trim().parse().ok()?, d))
        }
        None => Some(qi(text.parse().ok()?)),
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.x.to_string(), self.y.to_string()].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y] = <[String; 2]>::deserialize(d)?;
        let px = parse_q(&x).ok_or_else(|| D::Error::custom(format!("bad rational `{x}`")))?;
        let py = parse_q(&y).ok_or_else(|| D::Error::custom(format!("bad rational `{y}`")))?;
        Ok(Point::new(px, py))
    }
}
