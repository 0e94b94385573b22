//! Ford circles as exact rational objects and the integer predicates that
//! decide which circles a line touches.
//!
//! Every predicate here is an integer comparison obtained by squaring and
//! clearing denominators. Membership at the boundary (`pq = m` for lines
//! through the origin) is decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{Rational, Real};
use crate::error::{Error, Result};

/// Reduced fraction `p/q` in `[0, 1]`; names the Ford circle tangent to the
/// x-axis at `p/q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawFraction")]
pub struct Fraction {
    p: u64,
    q: u64,
}

#[derive(Deserialize)]
struct RawFraction {
    p: u64,
    q: u64,
}

impl TryFrom<RawFraction> for Fraction {
    type Error = Error;
    fn try_from(raw: RawFraction) -> Result<Self> {
        Fraction::new(raw.p, raw.q)
    }
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { p: 0, q: 1 };
    pub const ONE: Fraction = Fraction { p: 1, q: 1 };

    pub fn new(p: u64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidFraction {
                p,
                q,
                reason: "zero denominator",
            });
        }
        if p > q {
            return Err(Error::InvalidFraction {
                p,
                q,
                reason: "outside [0, 1]",
            });
        }
        if num_integer::gcd(p, q) != 1 {
            return Err(Error::InvalidFraction {
                p,
                q,
                reason: "not in lowest terms",
            });
        }
        Ok(Fraction { p, q })
    }

    /// Caller guarantees `0 <= p <= q`, `q > 0` and `gcd(p, q) = 1`.
    pub(crate) const fn new_unchecked(p: u64, q: u64) -> Self {
        Fraction { p, q }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn to_rational(&self) -> Rational {
        Rational::new(self.p.into(), self.q.into())
    }

    /// `self.q * other.p - self.p * other.q`; positive when `other` is larger.
    pub fn cross(&self, other: &Fraction) -> i128 {
        let a = u128::from(self.q) * u128::from(other.p);
        let b = u128::from(self.p) * u128::from(other.q);
        // saturates only when a component exceeds 2^63
        if a >= b {
            i128::try_from(a - b).unwrap_or(i128::MAX)
        } else {
            i128::try_from(b - a).map(|d| -d).unwrap_or(i128::MIN)
        }
    }

    /// Neighbours in the Farey sense: `|p2 q1 - p1 q2| = 1`.
    pub fn is_adjacent(&self, other: &Fraction) -> bool {
        self.cross(other).abs() == 1
    }

    /// Value rounded to `places` decimal places, computed in integers.
    pub fn to_decimal(&self, places: u32) -> String {
        let scale = 10u128.pow(places);
        let scaled = (u128::from(self.p) * scale * 2 + u128::from(self.q)) / (2 * u128::from(self.q));
        let (int, frac) = (scaled / scale, scaled % scale);
        if places == 0 {
            format!("{int}")
        } else {
            format!("{int}.{frac:0width$}", width = places as usize)
        }
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (u128::from(self.p) * u128::from(other.q)).cmp(&(u128::from(other.p) * u128::from(self.q)))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Fraction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("cannot parse fraction {s:?}"));
        let (p, q) = s.trim().split_once('/').ok_or_else(bad)?;
        let p = p.parse().map_err(|_| bad())?;
        let q = q.parse().map_err(|_| bad())?;
        Fraction::new(p, q)
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn distance_squared(&self, other: &Point) -> Rational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FordCircle {
    pub frac: Fraction,
    pub center_x: Rational,
    pub center_y: Rational,
    pub radius: Rational,
}

impl FordCircle {
    pub fn center(&self) -> Point {
        Point {
            x: self.center_x.clone(),
            y: self.center_y.clone(),
        }
    }
}

/// Circle centred at `(p/q, 1/(2q²))` with radius `1/(2q²)`.
pub fn circle_of(f: Fraction) -> FordCircle {
    let q = BigInt::from(f.q);
    let radius = Rational::new(BigInt::one(), &q * &q * 2u32);
    FordCircle {
        frac: f,
        center_x: f.to_rational(),
        center_y: radius.clone(),
        radius,
    }
}

/// Tangency through the integer criterion `|p2 q1 - p1 q2| = 1`.
pub fn circles_tangent(f1: Fraction, f2: Fraction) -> Result<bool> {
    if f1 == f2 {
        return Err(Error::Domain(format!("tangency of {f1} with itself")));
    }
    Ok(f1.is_adjacent(&f2))
}

/// Tangency through geometry: squared centre distance equals `(r1 + r2)²`.
/// Kept separate from [`circles_tangent`] so each can check the other.
pub fn circles_tangent_geometric(f1: Fraction, f2: Fraction) -> bool {
    let c1 = circle_of(f1);
    let c2 = circle_of(f2);
    let sum = &c1.radius + &c2.radius;
    c1.center().distance_squared(&c2.center()) == &sum * &sum
}

/// How an affine line decides whether it touches a circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum AffineMode {
    /// Squared distance from the centre to the line against the radius.
    #[default]
    Exact,
    /// The linearised condition `pq + m q² b <= m`. A subset of `Exact`.
    Simplified,
}

/// Lines that extract fractions from the Ford circles in `[0,1] × [0,1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineSpec {
    /// `y = x / m`
    Origin { m: u64 },
    /// `y = x / m + b` with `0 < b < 1`
    Affine { m: u64, b: Rational },
    /// `y = k` with `k > 0`
    Horizontal { k: Rational },
}

impl LineSpec {
    pub fn origin(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("slope denominator m must be positive".into()));
        }
        Ok(LineSpec::Origin { m })
    }

    pub fn affine(m: u64, b: Rational) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("slope denominator m must be positive".into()));
        }
        if !b.is_positive() || b >= Rational::one() {
            return Err(Error::Domain(format!("intercept b = {b} is outside (0, 1)")));
        }
        Ok(LineSpec::Affine { m, b })
    }

    pub fn horizontal(k: Rational) -> Result<Self> {
        if !k.is_positive() {
            return Err(Error::Domain(format!("height k = {k} must be positive")));
        }
        Ok(LineSpec::Horizontal { k })
    }
}

impl fmt::Display for LineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineSpec::Origin { m } => write!(f, "y = x/{m}"),
            LineSpec::Affine { m, b } => write!(f, "y = x/{m} + {b}"),
            LineSpec::Horizontal { k } => write!(f, "y = {k}"),
        }
    }
}

const SMALL: u64 = 1 << 31;

/// `(2pq - m)² <= m² + 1`: the distance from the centre to `y = x/m`
/// is at most the radius.
fn origin_touches(m: u64, p: u64, q: u64) -> bool {
    if p < SMALL && q < SMALL && m < SMALL {
        let (p, q, m) = (i128::from(p), i128::from(q), i128::from(m));
        let lhs = 2 * p * q - m;
        return lhs * lhs <= m * m + 1;
    }
    let (p, q, m) = (BigInt::from(p), BigInt::from(q), BigInt::from(m));
    let lhs: BigInt = p * q * 2u32 - &m;
    &lhs * &lhs <= &m * &m + 1u32
}

/// `(2pq·bd + 2bn·m·q² - m·bd)² <= (m² + 1)·bd²` with `b = bn/bd`.
fn affine_touches_exact(m: u64, b: &Rational, p: u64, q: u64) -> bool {
    let (p, q, m) = (BigInt::from(p), BigInt::from(q), BigInt::from(m));
    let (bn, bd) = (b.numer(), b.denom());
    let lhs: BigInt = &p * &q * 2u32 * bd + bn * &m * &q * &q * 2u32 - &m * bd;
    &lhs * &lhs <= (&m * &m + 1u32) * bd * bd
}

/// `pq·bd + m·q²·bn <= m·bd`.
fn affine_touches_simplified(m: u64, b: &Rational, p: u64, q: u64) -> bool {
    let (p, q, m) = (BigInt::from(p), BigInt::from(q), BigInt::from(m));
    let (bn, bd) = (b.numer(), b.denom());
    &p * &q * bd + &m * &q * &q * bn <= &m * bd
}

/// `q²·kn <= kd` with `k = kn/kd`: the line `y = k` is below the top of the
/// circle.
fn horizontal_touches(k: &Rational, q: u64) -> bool {
    let q = BigInt::from(q);
    &q * &q * k.numer() <= *k.denom()
}

/// Exact test of whether `line` touches the Ford circle of `f`.
pub fn line_touches(line: &LineSpec, f: Fraction) -> bool {
    line_touches_with(line, f, AffineMode::Exact)
}

/// As [`line_touches`], choosing the affine-line condition explicitly.
/// `mode` is ignored for the other line kinds.
pub fn line_touches_with(line: &LineSpec, f: Fraction, mode: AffineMode) -> bool {
    match line {
        LineSpec::Origin { m } => origin_touches(*m, f.p, f.q),
        LineSpec::Affine { m, b } => match mode {
            AffineMode::Exact => affine_touches_exact(*m, b, f.p, f.q),
            AffineMode::Simplified => affine_touches_simplified(*m, b, f.p, f.q),
        },
        LineSpec::Horizontal { k } => horizontal_touches(k, f.q),
    }
}

/// The contact point of two tangent Ford circles:
/// `c1 + r1 / (r1 + r2) · (c2 - c1)`.
pub fn tangent_point(f1: Fraction, f2: Fraction) -> Result<Point> {
    if !circles_tangent(f1, f2)? {
        return Err(Error::NotTangent(f1.to_string(), f2.to_string()));
    }
    let c1 = circle_of(f1);
    let c2 = circle_of(f2);
    let t = &c1.radius / (&c1.radius + &c2.radius);
    Ok(Point {
        x: &c1.center_x + &t * (&c2.center_x - &c1.center_x),
        y: &c1.center_y + &t * (&c2.center_y - &c1.center_y),
    })
}

/// Polyline through the centre of each circle and the contact points between
/// consecutive circles: `c(f1), t(f1, f2), c(f2), t(f2, f3), ...`.
pub fn polyline_curve(seq: &[Fraction]) -> Result<Vec<Point>> {
    let mut out = Vec::with_capacity(seq.len().saturating_mul(2));
    for (i, f) in seq.iter().enumerate() {
        if i > 0 {
            let prev = seq[i - 1];
            if prev == *f || !prev.is_adjacent(f) {
                return Err(Error::NonAdjacentAt { index: i - 1 });
            }
            out.push(tangent_point(prev, *f)?);
        }
        out.push(circle_of(*f).center());
    }
    Ok(out)
}

/// Floating-point view of a rational, for rendering only.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    Real::from_ratio(r).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational;

    fn fr(p: u64, q: u64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    #[test]
    fn fraction_validation() {
        assert!(Fraction::new(2, 4).is_err());
        assert!(Fraction::new(3, 2).is_err());
        assert!(Fraction::new(1, 0).is_err());
        assert!(Fraction::new(0, 2).is_err());
        assert_eq!(Fraction::new(0, 1).unwrap(), Fraction::ZERO);
        assert_eq!("5/6".parse::<Fraction>().unwrap(), fr(5, 6));
        assert!("5/".parse::<Fraction>().is_err());
        assert!(fr(1, 3) < fr(1, 2));
        assert_eq!(fr(2, 3).to_decimal(12), "0.666666666667");
        assert_eq!(Fraction::ONE.to_decimal(3), "1.000");
    }

    #[test]
    fn circles() {
        let c = circle_of(fr(0, 1));
        assert_eq!(
            (c.center_x, c.center_y, c.radius),
            (rational(0, 1), rational(1, 2), rational(1, 2))
        );
        let c = circle_of(fr(1, 2));
        assert_eq!(
            (c.center_x, c.center_y.clone(), c.radius.clone()),
            (rational(1, 2), rational(1, 8), rational(1, 8))
        );
        assert_eq!(circle_of(fr(2, 15)).radius, rational(1, 450));
    }

    #[test]
    fn tangency() {
        assert_eq!(circles_tangent(fr(1, 8), fr(2, 15)), Ok(true));
        assert_eq!(circles_tangent(fr(4, 7), fr(5, 7)), Ok(false));
        assert_eq!(circles_tangent(fr(0, 1), fr(1, 1)), Ok(true));
        assert!(circles_tangent(fr(1, 2), fr(1, 2)).is_err());
        assert!(circles_tangent_geometric(fr(1, 8), fr(2, 15)));
        assert!(!circles_tangent_geometric(fr(4, 7), fr(5, 7)));
    }

    #[test]
    fn origin_line_examples() {
        let line = LineSpec::origin(32).unwrap();
        assert!(line_touches(&line, fr(5, 6)));
        assert!(!line_touches(&line, fr(5, 7)));
        for m in 1..100 {
            assert!(line_touches(&LineSpec::origin(m).unwrap(), Fraction::ZERO));
        }
        // large coordinates take the BigInt path
        let big = LineSpec::origin(u64::MAX / 4).unwrap();
        assert!(line_touches(&big, fr(1, 1 << 40)));
        assert!(!line_touches(&big, fr(1 << 31, (1 << 33) + 1)));
    }

    #[test]
    fn line_validation() {
        assert!(LineSpec::origin(0).is_err());
        assert!(LineSpec::affine(3, rational(0, 1)).is_err());
        assert!(LineSpec::affine(3, rational(1, 1)).is_err());
        assert!(LineSpec::affine(3, rational(2, 1)).is_err());
        assert!(LineSpec::affine(3, rational(1, 2)).is_ok());
        assert!(LineSpec::horizontal(rational(0, 1)).is_err());
        assert!(LineSpec::horizontal(rational(-1, 3)).is_err());
    }

    #[test]
    fn affine_modes() {
        let line = LineSpec::affine(1, rational(1, 2)).unwrap();
        assert!(line_touches(&line, Fraction::ZERO));
        // y = x + 1/2 passes 1/sqrt(2) from the centre of the 1/1 circle
        assert!(!line_touches(&line, Fraction::ONE));
        assert!(!line_touches_with(&line, Fraction::ONE, AffineMode::Simplified));
        assert!(!line_touches(&line, fr(1, 2)));
        let line = LineSpec::affine(1_000_000, rational(1, 9)).unwrap();
        assert!(line_touches(&line, fr(1, 2)));
        assert!(!line_touches(&line, fr(1, 3)));
        assert!(!line_touches_with(&line, fr(1, 3), AffineMode::Simplified));
    }

    #[test]
    fn tangent_points() {
        let t = tangent_point(fr(0, 1), fr(1, 1)).unwrap();
        assert_eq!(
            t,
            Point {
                x: rational(1, 2),
                y: rational(1, 2)
            }
        );

        let left = tangent_point(fr(0, 1), fr(1, 2)).unwrap();
        for f in [fr(0, 1), fr(1, 2)] {
            let c = circle_of(f);
            assert_eq!(left.distance_squared(&c.center()), &c.radius * &c.radius);
        }
        assert!(left.x > rational(0, 1) && left.x < rational(1, 2));
        assert!(left.y > rational(0, 1) && left.y < rational(1, 2));

        let right = tangent_point(fr(1, 2), fr(1, 1)).unwrap();
        assert_eq!(right.x, rational(1, 1) - &left.x);
        assert_eq!(right.y, left.y);

        assert!(matches!(tangent_point(fr(4, 7), fr(5, 7)), Err(Error::NotTangent(..))));
    }

    #[test]
    fn polylines() {
        let pts = polyline_curve(&[fr(0, 1), fr(1, 1)]).unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0], circle_of(fr(0, 1)).center());
        assert_eq!(
            pts[1],
            Point {
                x: rational(1, 2),
                y: rational(1, 2)
            }
        );
        assert_eq!(pts[2], circle_of(fr(1, 1)).center());

        assert_eq!(polyline_curve(&[fr(0, 1)]).unwrap(), vec![circle_of(fr(0, 1)).center()]);

        let err = polyline_curve(&[fr(1, 2), fr(4, 7), fr(9, 14), fr(5, 7)]).unwrap_err();
        assert_eq!(err, Error::NonAdjacentAt { index: 1 });
    }
}
