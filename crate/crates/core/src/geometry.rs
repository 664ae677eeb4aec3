//! Hexagonal site layout with wraparound and the center-cell receiver grid.
//!
//! Nineteen base-station sites sit on a triangular lattice: the center site,
//! an inner ring of six at one inter-site distance and an outer ring of
//! twelve. Distances are measured modulo a set of wraparound translations so
//! that border sites see the same interference geometry as the center one.
//! Receivers live on a square grid clipped to the center cell.

use crate::{Error, Result};

/// Number of base-station sites in the standard layout.
pub const SITE_COUNT: usize = 19;

/// Number of wraparound images per site (identity plus six translations).
pub const WRAP_IMAGE_COUNT: usize = 7;

// ── Planar vectors ──────────────────────────────────────────────────────────

/// A point or displacement in the horizontal plane, in metres.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Euclidean norm.
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

// ── Site layout ─────────────────────────────────────────────────────────────

/// Integer lattice coordinates (multiples of the two basis vectors) of the
/// nineteen sites, ordered center, inner ring, outer ring.
const SITE_COEFFS: [(i32, i32); SITE_COUNT] = [
    (0, 0),
    // inner ring, counterclockwise from +x
    (1, 0),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (0, -1),
    (1, -1),
    // outer ring, counterclockwise from +x
    (2, 0),
    (1, 1),
    (0, 2),
    (-1, 2),
    (-2, 2),
    (-2, 1),
    (-2, 0),
    (-1, -1),
    (0, -2),
    (1, -2),
    (2, -2),
    (2, -1),
];

/// Lattice coordinates of the six non-zero wraparound translations:
/// successive 60-degree rotations of 3*a1 + 2*a2, each of length
/// `isd * sqrt(19)`. Together with the identity they tile the plane with
/// copies of the 19-site cluster.
const WRAP_COEFFS: [(i32, i32); 6] = [(3, 2), (-2, 5), (-5, 3), (-3, -2), (2, -5), (5, -3)];

/// The 19-site hexagonal deployment and its wraparound translation set.
#[derive(Debug, Clone)]
pub struct SiteLayout {
    /// Inter-site distance in metres.
    pub isd: f64,
    /// Site positions; index 0 is the center site at the origin.
    pub sites: Vec<Vec2>,
    /// Wraparound translations; index 0 is the zero vector.
    pub wrap_translations: Vec<Vec2>,
}

impl SiteLayout {
    /// Builds the standard 19-site layout for the given inter-site distance.
    pub fn build(isd: f64) -> Result<Self> {
        if !isd.is_finite() || isd <= 0.0 {
            return Err(Error::param("isd", format!("must be finite and > 0, got {isd}")));
        }
        // Triangular lattice basis: a1 along +x, a2 at 60 degrees.
        let a1 = Vec2::new(isd, 0.0);
        let a2 = Vec2::new(isd / 2.0, isd * 3f64.sqrt() / 2.0);
        let combine = |(m, n): (i32, i32)| {
            Vec2::new(
                m as f64 * a1.x + n as f64 * a2.x,
                m as f64 * a1.y + n as f64 * a2.y,
            )
        };
        let sites = SITE_COEFFS.iter().copied().map(combine).collect();
        let mut wrap_translations = vec![Vec2::ZERO];
        wrap_translations.extend(WRAP_COEFFS.iter().copied().map(combine));
        Ok(SiteLayout {
            isd,
            sites,
            wrap_translations,
        })
    }

    /// Keeps only the first `n` sites; the wraparound set is unchanged.
    /// Used by reduced test instances, not by the standard pipeline.
    pub fn truncated(&self, n: usize) -> SiteLayout {
        SiteLayout {
            isd: self.isd,
            sites: self.sites[..n.min(self.sites.len())].to_vec(),
            wrap_translations: self.wrap_translations.clone(),
        }
    }

    /// Ring index of a site: 0 for the center, 1 for the inner six,
    /// 2 for the outer twelve.
    pub fn ring_of(site: usize) -> usize {
        match site {
            0 => 0,
            1..=6 => 1,
            7..=18 => 2,
            _ => panic!("site index {site} outside the 19-site layout"),
        }
    }

    /// Displacement from the nearest wraparound image of `site` to `rx`.
    ///
    /// The translation minimizing the distance is selected; ties prefer the
    /// zero translation, then the lowest translation index.
    pub fn effective_displacement(&self, site: usize, rx: Vec2) -> Vec2 {
        let pos = self.sites[site];
        let mut best = rx - pos;
        let mut best_norm = best.norm();
        for t in &self.wrap_translations[1..] {
            let d = rx - (pos + *t);
            let n = d.norm();
            if n < best_norm {
                best = d;
                best_norm = n;
            }
        }
        best
    }

    /// Wraparound distance from `site` to `rx`.
    pub fn effective_distance(&self, site: usize, rx: Vec2) -> f64 {
        self.effective_displacement(site, rx).norm()
    }

    /// True when the center site is (weakly) the nearest site to `p` under
    /// wraparound distance. Points equidistant to another site count as
    /// inside, so the closed center cell is covered without gaps.
    pub fn in_center_cell(&self, p: Vec2) -> bool {
        let d0 = self.effective_distance(0, p);
        self.sites
            .iter()
            .enumerate()
            .skip(1)
            .all(|(b, _)| d0 <= self.effective_distance(b, p))
    }
}

// ── Receiver grid ───────────────────────────────────────────────────────────

/// Receiver positions on a square lattice clipped to the center cell, all at
/// one height. Points are ordered by increasing y, then increasing x.
#[derive(Debug, Clone)]
pub struct ReceiverGrid {
    /// Grid spacing in metres.
    pub spacing: f64,
    /// Receiver height above ground in metres.
    pub height: f64,
    /// Horizontal receiver positions.
    pub points: Vec<Vec2>,
}

/// Builds the receiver grid for the center cell of `layout`.
///
/// The lattice is axis-aligned and anchored at the origin, so the grid is
/// symmetric under 180-degree rotation and always contains the center site
/// position itself.
pub fn build_receiver_grid(layout: &SiteLayout, spacing: f64, height: f64) -> Result<ReceiverGrid> {
    if !spacing.is_finite() || spacing <= 0.0 {
        return Err(Error::param(
            "grid_spacing",
            format!("must be finite and > 0, got {spacing}"),
        ));
    }
    if spacing >= layout.isd {
        return Err(Error::param(
            "grid_spacing",
            format!(
                "must be smaller than the inter-site distance {} m, got {spacing}",
                layout.isd
            ),
        ));
    }
    if !height.is_finite() || height <= 0.0 {
        return Err(Error::param(
            "height",
            format!("must be finite and > 0, got {height}"),
        ));
    }
    // The center cell is contained in the circle of one cell circumradius.
    let reach = layout.isd / 3f64.sqrt();
    let k = (reach / spacing).ceil() as i64;
    let mut points = Vec::new();
    for j in -k..=k {
        for i in -k..=k {
            let p = Vec2::new(i as f64 * spacing, j as f64 * spacing);
            if layout.in_center_cell(p) {
                points.push(p);
            }
        }
    }
    Ok(ReceiverGrid {
        spacing,
        height,
        points,
    })
}
