//! Newton polygons and root counting in p-adic disks.
//!
//! Convention: a segment of slope `σ` and horizontal length `L` accounts for
//! exactly `L` roots (with multiplicity, in ℂ_p) of valuation `-σ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ExactPoly;
use crate::scalar::{check_prime, exponent, ExactScalar, Exponent, LogRadius, Polarity};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    #[serde(serialize_with = "ser_exp")]
    pub slope: Exponent,
    pub length: usize,
}

impl Segment {
    /// Valuation of the roots this segment accounts for.
    pub fn root_valuation(&self) -> Exponent {
        -self.slope.clone()
    }
}

pub(crate) fn ser_exp<S: serde::Serializer>(
    e: &Exponent,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::scalar::exponent_string(e))
}

/// One coefficient point `(i, v_p(a_i))` of the polygon's support.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolygonPoint {
    pub index: usize,
    pub valuation: i64,
    pub on_hull: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// Multiplicity of the root `0`.
    pub zero_order: usize,
    /// Slopes strictly increasing.
    pub segments: Vec<Segment>,
    pub points: Vec<PolygonPoint>,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.zero_order + self.segments.iter().map(|s| s.length).sum::<usize>()
    }

    /// Valuations of all nonzero roots, with multiplicity, ascending.
    pub fn root_valuations(&self) -> Vec<Exponent> {
        let mut out: Vec<Exponent> = self
            .segments
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.root_valuation(), s.length))
            .collect();
        out.sort();
        out
    }

    /// Number of roots (with multiplicity) at distance `p^{-v}` from the
    /// polygon's origin with `v` inside the given radius. Roots at the origin
    /// count for every radius.
    pub fn count_within(&self, radius: &LogRadius) -> usize {
        self.zero_order
            + self
                .segments
                .iter()
                .filter(|s| radius.contains_exponent(&s.root_valuation()))
                .map(|s| s.length)
                .sum::<usize>()
    }

    /// CSV rows `i,valuation,on_hull`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("i,valuation,on_hull\n");
        for p in &self.points {
            s.push_str(&format!("{},{},{}\n", p.index, p.valuation, u8::from(p.on_hull)));
        }
        s
    }
}

/// Lower convex hull of `(i, v_p(a_i))` over the nonzero coefficients.
pub fn newton_polygon(f: &ExactPoly, p: u64) -> Result<NewtonPolygon> {
    check_prime(p)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<(usize, i64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.valuation(p).finite().map(|v| (i, v)))
        .collect();
    let zero_order = pts[0].0;

    // monotone chain, lower hull, keeping only strict turns
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop (x2,y2) unless it lies strictly below the chord to pt
            let lhs = (y2 - y1) as i128 * (pt.0 - x1) as i128;
            let rhs = (pt.1 - y1) as i128 * (x2 - x1) as i128;
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: Exponent::new((w[1].1 - w[0].1).into(), ((w[1].0 - w[0].0) as i64).into()),
            length: w[1].0 - w[0].0,
        })
        .collect();

    let on_hull = |i: usize, v: i64| -> bool {
        match hull.iter().position(|&(x, _)| x >= i) {
            Some(k) if hull[k].0 == i => hull[k].1 == v,
            Some(k) if k > 0 => {
                let (x1, y1) = hull[k - 1];
                let (x2, y2) = hull[k];
                (v - y1) as i128 * (x2 - x1) as i128 == (y2 - y1) as i128 * (i - x1) as i128
            }
            _ => false,
        }
    };
    let points = pts
        .iter()
        .map(|&(i, v)| PolygonPoint {
            index: i,
            valuation: v,
            on_hull: on_hull(i, v),
        })
        .collect();
    Ok(NewtonPolygon {
        zero_order,
        segments,
        points,
    })
}

/// Roots of `f` (with multiplicity) in the disk about `center` of the given
/// radius, read from the Newton polygon of `f(z + center)`.
pub fn count_roots_in_disk(
    f: &ExactPoly,
    p: u64,
    center: &ExactScalar,
    radius: &LogRadius,
) -> Result<usize> {
    let shifted = f.taylor_shift(center);
    Ok(newton_polygon(&shifted, p)?.count_within(radius))
}

/// The open unit disk `D(center, 1)`.
pub fn unit_open() -> LogRadius {
    LogRadius {
        exponent: exponent(0),
        polarity: Polarity::Open,
    }
}
