//! Room geometry, placement constraints and the mobile evaluation grid.
//!
//! The room is an axis-aligned box with the origin in one corner. Anchors
//! (speakers) may only be installed on a configured subset of planes — the
//! two large side walls (`y = 0`, `y = dims.y`) and the ceiling
//! (`z = dims.z`) — and stand off their plane by a fixed offset. Mobile
//! nodes keep a minimum clearance from every plane. All types are immutable
//! after construction and all operations are pure, so everything here can be
//! shared freely across parallel workers.

use nalgebra::{Point3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planes on which anchors may be installed, in the fixed tie-break order
/// used by projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Plane {
    /// Side wall at `y = 0`.
    WallY0,
    /// Side wall at `y = dims.y`.
    WallYMax,
    /// Ceiling at `z = dims.z`.
    Ceiling,
}

impl Plane {
    /// All planes in tie-break order.
    pub const ALL: [Plane; 3] = [Plane::WallY0, Plane::WallYMax, Plane::Ceiling];

    pub fn label(self) -> &'static str {
        match self {
            Plane::WallY0 => "wall_y0",
            Plane::WallYMax => "wall_y_max",
            Plane::Ceiling => "ceiling",
        }
    }
}

/// The rectangular surface on which anchor centers may sit: a plane shifted
/// into the room by the anchor offset, bounded by the plane's extents.
#[derive(Debug, Clone, Copy)]
pub struct AnchorSurface {
    pub plane: Plane,
    /// Index of the coordinate fixed by the plane (1 for walls, 2 for ceiling).
    fixed_axis: usize,
    fixed_value: f64,
    /// Inclusive bounds of the two free coordinates, indexed by axis.
    lo: [f64; 3],
    hi: [f64; 3],
}

impl AnchorSurface {
    /// Closest point of the surface to `p`.
    pub fn clamp(&self, p: &Point3<f64>) -> Point3<f64> {
        let mut q = *p;
        for axis in 0..3 {
            if axis == self.fixed_axis {
                q[axis] = self.fixed_value;
            } else {
                q[axis] = q[axis].clamp(self.lo[axis], self.hi[axis]);
            }
        }
        q
    }

    /// Whether `p` lies on the surface (within `tol` of the plane and inside
    /// the rectangle).
    pub fn contains(&self, p: &Point3<f64>, tol: f64) -> bool {
        if (p[self.fixed_axis] - self.fixed_value).abs() > tol {
            return false;
        }
        (0..3).filter(|&a| a != self.fixed_axis).all(|a| {
            p[a] >= self.lo[a] - tol && p[a] <= self.hi[a] + tol
        })
    }

    /// Uniform random point on the surface.
    pub fn sample(&self, rng: &mut impl rand::Rng) -> Point3<f64> {
        let mut q = Point3::origin();
        for axis in 0..3 {
            if axis == self.fixed_axis {
                q[axis] = self.fixed_value;
            } else {
                q[axis] = rng.gen_range(self.lo[axis]..=self.hi[axis]);
            }
        }
        q
    }
}

/// Axis-aligned box room with installation constraints.
#[derive(Debug, Clone)]
pub struct Room {
    dims: Vector3<f64>,
    allowed_planes: Vec<Plane>,
    anchor_offset: f64,
    mobile_offset: f64,
}

impl Room {
    pub fn new(
        dims: Vector3<f64>,
        allowed_planes: &[Plane],
        anchor_offset: f64,
        mobile_offset: f64,
    ) -> Result<Self> {
        if dims.iter().any(|&d| d <= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "room extents must be positive, got {:?}",
                dims.as_slice()
            )));
        }
        let half_min = dims.min() / 2.0;
        for (name, off) in [("anchor_offset", anchor_offset), ("mobile_offset", mobile_offset)] {
            if off <= 0.0 || off >= half_min {
                return Err(Error::InvalidArgument(format!(
                    "{name} must lie in (0, {half_min}), got {off}"
                )));
            }
        }
        if allowed_planes.is_empty() {
            return Err(Error::InvalidArgument(
                "at least one allowed plane is required".into(),
            ));
        }
        // Deduplicate while keeping the canonical order.
        let allowed: Vec<Plane> = Plane::ALL
            .into_iter()
            .filter(|p| allowed_planes.contains(p))
            .collect();
        Ok(Room {
            dims,
            allowed_planes: allowed,
            anchor_offset,
            mobile_offset,
        })
    }

    /// The paper testbed: an 8 m x 4 m x 2.4 m room, anchors allowed on both
    /// large side walls and the ceiling, 3 cm anchor offset, 5 cm mobile
    /// clearance.
    pub fn testbed() -> Room {
        Room::new(
            Vector3::new(8.0, 4.0, 2.4),
            &Plane::ALL,
            0.03,
            0.05,
        )
        .expect("testbed constants are valid")
    }

    pub fn dims(&self) -> Vector3<f64> {
        self.dims
    }

    pub fn allowed_planes(&self) -> &[Plane] {
        &self.allowed_planes
    }

    pub fn anchor_offset(&self) -> f64 {
        self.anchor_offset
    }

    pub fn mobile_offset(&self) -> f64 {
        self.mobile_offset
    }

    pub fn centroid(&self) -> Point3<f64> {
        Point3::from(self.dims / 2.0)
    }

    /// Largest possible anchor-to-mobile distance (the box diagonal).
    pub fn max_distance(&self) -> f64 {
        self.dims.norm()
    }

    /// Area of a plane, used for apportioning anchors.
    pub fn plane_area(&self, plane: Plane) -> f64 {
        match plane {
            Plane::WallY0 | Plane::WallYMax => self.dims.x * self.dims.z,
            Plane::Ceiling => self.dims.x * self.dims.y,
        }
    }

    /// The anchor surface of `plane`.
    pub fn anchor_surface(&self, plane: Plane) -> AnchorSurface {
        let (fixed_axis, fixed_value) = match plane {
            Plane::WallY0 => (1, self.anchor_offset),
            Plane::WallYMax => (1, self.dims.y - self.anchor_offset),
            Plane::Ceiling => (2, self.dims.z - self.anchor_offset),
        };
        AnchorSurface {
            plane,
            fixed_axis,
            fixed_value,
            lo: [0.0; 3],
            hi: [self.dims.x, self.dims.y, self.dims.z],
        }
    }

    /// Project a point onto the closest allowed anchor surface.
    ///
    /// Ties are broken by the fixed plane order of [`Plane::ALL`]. This is a
    /// total function: any point in space maps to some allowed surface.
    pub fn project_to_allowed_planes(&self, point: &Point3<f64>) -> (Point3<f64>, Plane) {
        let mut best: Option<(f64, Point3<f64>, Plane)> = None;
        for &plane in &self.allowed_planes {
            let candidate = self.anchor_surface(plane).clamp(point);
            let dist = (candidate - point).norm();
            let better = match &best {
                None => true,
                Some((best_dist, _, _)) => dist < *best_dist,
            };
            if better {
                best = Some((dist, candidate, plane));
            }
        }
        let (_, candidate, plane) = best.expect("room has at least one allowed plane");
        (candidate, plane)
    }

    /// Unit vector from `anchor` toward the room centroid.
    pub fn aim_at_centroid(&self, anchor: &Point3<f64>) -> Result<Unit<Vector3<f64>>> {
        let v = self.centroid() - anchor;
        Unit::try_new(v, 1e-12).ok_or_else(|| {
            Error::InvalidArgument("cannot aim an anchor located at the room centroid".into())
        })
    }
}

/// Transmit gain of a cardioid speaker: `0.5 * (1 + cos θ)` with `θ` the
/// angle between the speaker directivity and the departure direction.
pub fn cardioid_gain(directivity: &Vector3<f64>, toward: &Vector3<f64>) -> Result<f64> {
    for (name, v) in [("directivity", directivity), ("toward", toward)] {
        if (v.norm() - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument(format!(
                "{name} must be a unit vector, norm is {}",
                v.norm()
            )));
        }
    }
    Ok(0.5 * (1.0 + directivity.dot(toward)))
}

/// A set of `M >= 4` anchors with plane assignments and directivities.
#[derive(Debug, Clone)]
pub struct AnchorLayout {
    anchors: Vec<Point3<f64>>,
    directivities: Vec<Unit<Vector3<f64>>>,
    plane_of: Vec<Plane>,
}

impl AnchorLayout {
    /// Build a layout from anchor positions and plane assignments,
    /// validating every anchor against its plane's anchor surface.
    /// Directivities are aimed at the room centroid.
    pub fn new(room: &Room, anchors: Vec<Point3<f64>>, plane_of: Vec<Plane>) -> Result<Self> {
        if anchors.len() < 4 {
            return Err(Error::InvalidArgument(format!(
                "a layout needs at least 4 anchors, got {}",
                anchors.len()
            )));
        }
        if anchors.len() != plane_of.len() {
            return Err(Error::InvalidArgument(format!(
                "{} anchors but {} plane assignments",
                anchors.len(),
                plane_of.len()
            )));
        }
        for (i, (a, &plane)) in anchors.iter().zip(&plane_of).enumerate() {
            if !room.allowed_planes().contains(&plane) {
                return Err(Error::InvalidArgument(format!(
                    "anchor {i} assigned to disallowed plane {}",
                    plane.label()
                )));
            }
            if !room.anchor_surface(plane).contains(a, 1e-9) {
                return Err(Error::InvalidArgument(format!(
                    "anchor {i} at {:?} is not on the {} anchor surface",
                    a.coords.as_slice(),
                    plane.label()
                )));
            }
        }
        let directivities = anchors
            .iter()
            .map(|a| room.aim_at_centroid(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnchorLayout {
            anchors,
            directivities,
            plane_of,
        })
    }

    /// Decode a stacked `3M` coordinate vector by projecting each anchor
    /// onto the nearest allowed surface. Always yields a feasible layout.
    pub fn from_stacked(room: &Room, stacked: &[f64]) -> Result<Self> {
        if !stacked.len().is_multiple_of(3) {
            return Err(Error::InvalidArgument(format!(
                "stacked layout length {} is not a multiple of 3",
                stacked.len()
            )));
        }
        let mut anchors = Vec::with_capacity(stacked.len() / 3);
        let mut planes = Vec::with_capacity(stacked.len() / 3);
        for c in stacked.chunks_exact(3) {
            let (p, plane) = room.project_to_allowed_planes(&Point3::new(c[0], c[1], c[2]));
            anchors.push(p);
            planes.push(plane);
        }
        AnchorLayout::new(room, anchors, planes)
    }

    /// Stack anchor positions as `[x1, y1, z1, x2, ...]`.
    pub fn to_stacked(&self) -> Vec<f64> {
        self.anchors
            .iter()
            .flat_map(|a| a.coords.as_slice().to_vec())
            .collect()
    }

    /// The non-optimized reference placement used for comparisons: two
    /// anchors at diagonally opposite ceiling corners and two at the
    /// opposite top wall corners, so the anchor envelope encloses the room.
    pub fn corner_reference(room: &Room) -> Result<Self> {
        for plane in Plane::ALL {
            if !room.allowed_planes().contains(&plane) {
                return Err(Error::InvalidArgument(format!(
                    "corner reference layout requires plane {}",
                    plane.label()
                )));
            }
        }
        let d = room.dims();
        let o = room.anchor_offset();
        let anchors = vec![
            Point3::new(0.0, 0.0, d.z - o),
            Point3::new(d.x, d.y, d.z - o),
            Point3::new(d.x, o, d.z),
            Point3::new(0.0, d.y - o, d.z),
        ];
        let planes = vec![Plane::Ceiling, Plane::Ceiling, Plane::WallY0, Plane::WallYMax];
        AnchorLayout::new(room, anchors, planes)
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }

    pub fn anchors(&self) -> &[Point3<f64>] {
        &self.anchors
    }

    pub fn directivities(&self) -> &[Unit<Vector3<f64>>] {
        &self.directivities
    }

    pub fn plane_of(&self) -> &[Plane] {
        &self.plane_of
    }
}

/// Evaluation grid of mobile positions inside the room.
#[derive(Debug, Clone)]
pub struct MobileGrid {
    positions: Vec<Point3<f64>>,
    spacing: Vector3<f64>,
}

impl MobileGrid {
    pub fn positions(&self) -> &[Point3<f64>] {
        &self.positions
    }

    pub fn spacing(&self) -> Vector3<f64> {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Build a regular `counts.x × counts.y × counts.z` grid spanning the
/// interior box shrunk by the mobile clearance on all faces.
///
/// Boundary grid points sit exactly at the clearance; a count of one places
/// the point at the axis midpoint. Positions are ordered x-major, then y,
/// then z.
pub fn build_grid(room: &Room, counts: [usize; 3]) -> Result<MobileGrid> {
    if counts.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "grid counts must be at least 1, got {counts:?}"
        )));
    }
    let off = room.mobile_offset();
    let dims = room.dims();
    let mut axes: Vec<Vec<f64>> = Vec::with_capacity(3);
    let mut spacing = Vector3::zeros();
    for axis in 0..3 {
        let n = counts[axis];
        let extent = dims[axis];
        if n == 1 {
            axes.push(vec![extent / 2.0]);
        } else {
            let step = (extent - 2.0 * off) / (n - 1) as f64;
            spacing[axis] = step;
            axes.push((0..n).map(|i| off + i as f64 * step).collect());
        }
    }
    let mut positions = Vec::with_capacity(counts[0] * counts[1] * counts[2]);
    for &x in &axes[0] {
        for &y in &axes[1] {
            for &z in &axes[2] {
                positions.push(Point3::new(x, y, z));
            }
        }
    }
    Ok(MobileGrid { positions, spacing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng as _;

    #[test]
    fn grid_paper_dimensions() {
        let room = Room::testbed();
        let grid = build_grid(&room, [9, 6, 5]).unwrap();
        assert_eq!(grid.len(), 270);
        // Paper spacings 98.8 / 78.0 / 57.5 cm, within a centimeter.
        assert!((grid.spacing().x - 0.988).abs() < 0.01, "{}", grid.spacing().x);
        assert!((grid.spacing().y - 0.780).abs() < 0.01, "{}", grid.spacing().y);
        assert!((grid.spacing().z - 0.575).abs() < 0.01, "{}", grid.spacing().z);
    }

    #[test]
    fn grid_single_point_is_centroid() {
        let room = Room::testbed();
        let grid = build_grid(&room, [1, 1, 1]).unwrap();
        assert_eq!(grid.len(), 1);
        assert_relative_eq!(grid.positions()[0], room.centroid(), epsilon = 1e-12);
    }

    #[test]
    fn grid_zero_count_rejected() {
        let room = Room::testbed();
        assert!(matches!(
            build_grid(&room, [0, 2, 2]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn grid_respects_mobile_offset_with_boundary_equality() {
        let room = Room::testbed();
        let grid = build_grid(&room, [4, 3, 3]).unwrap();
        let off = room.mobile_offset();
        let dims = room.dims();
        let mut hit_boundary = [false; 3];
        for p in grid.positions() {
            for axis in 0..3 {
                let clearance = p[axis].min(dims[axis] - p[axis]);
                assert!(clearance >= off - 1e-12);
                if (clearance - off).abs() < 1e-12 {
                    hit_boundary[axis] = true;
                }
            }
        }
        assert_eq!(hit_boundary, [true; 3]);
    }

    #[test]
    fn grid_positions_distinct() {
        let room = Room::testbed();
        let grid = build_grid(&room, [3, 3, 3]).unwrap();
        for (i, a) in grid.positions().iter().enumerate() {
            for b in &grid.positions()[i + 1..] {
                assert!((a - b).norm() > 1e-9);
            }
        }
    }

    /// Independent oracle: closed-form distance minimization over the three
    /// candidate surfaces.
    fn project_oracle(room: &Room, p: &Point3<f64>) -> (Point3<f64>, Plane) {
        let mut best: Option<(f64, Point3<f64>, Plane)> = None;
        for &plane in room.allowed_planes() {
            let q = room.anchor_surface(plane).clamp(p);
            let d = (q - p).norm();
            if best.as_ref().is_none_or(|(bd, _, _)| d < *bd - 1e-15) {
                best = Some((d, q, plane));
            }
        }
        let (_, q, pl) = best.unwrap();
        (q, pl)
    }

    #[test]
    fn projection_examples() {
        let room = Room::testbed();
        // Already on the ceiling anchor surface: unchanged.
        let p = Point3::new(3.0, 1.0, 2.37);
        let (q, plane) = room.project_to_allowed_planes(&p);
        assert_relative_eq!(q, p, epsilon = 1e-12);
        assert_eq!(plane, Plane::Ceiling);
        // Above the ceiling: lands on it.
        let (q, plane) = room.project_to_allowed_planes(&Point3::new(2.0, 2.0, 3.0));
        assert_relative_eq!(q, Point3::new(2.0, 2.0, 2.37), epsilon = 1e-12);
        assert_eq!(plane, Plane::Ceiling);
        // Outside the y=0 wall: lands on its anchor surface.
        let (q, plane) = room.project_to_allowed_planes(&Point3::new(2.0, -1.0, 1.0));
        assert_relative_eq!(q, Point3::new(2.0, 0.03, 1.0), epsilon = 1e-12);
        assert_eq!(plane, Plane::WallY0);
    }

    #[test]
    fn projection_is_idempotent_and_optimal() {
        let room = Room::testbed();
        let mut rng = crate::rng::substream(20, &[1]);
        let dims = room.dims();
        for _ in 0..1000 {
            let p = Point3::new(
                rng.gen_range(-1.0..dims.x + 1.0),
                rng.gen_range(-1.0..dims.y + 1.0),
                rng.gen_range(-1.0..dims.z + 1.0),
            );
            let (q, plane) = room.project_to_allowed_planes(&p);
            // Distance to the assigned plane is exactly the anchor offset.
            let plane_dist = match plane {
                Plane::WallY0 => q.y,
                Plane::WallYMax => dims.y - q.y,
                Plane::Ceiling => dims.z - q.z,
            };
            assert!((plane_dist - room.anchor_offset()).abs() < 1e-12);
            // No other allowed surface is strictly closer to the input.
            let chosen = (q - p).norm();
            for &other in room.allowed_planes() {
                let alt = room.anchor_surface(other).clamp(&p);
                assert!((alt - p).norm() >= chosen - 1e-12);
            }
            // Idempotent.
            let (q2, plane2) = room.project_to_allowed_planes(&q);
            assert_relative_eq!(q2, q, epsilon = 1e-12);
            assert_eq!(plane2, plane);
            // Agrees with the oracle's distance (plane may differ only on ties).
            let (qo, _) = project_oracle(&room, &p);
            assert!((qo - p).norm() >= chosen - 1e-12);
        }
    }

    #[test]
    fn projection_tie_breaks_in_plane_order() {
        // Offsets of 0.25 on an 8 x 4 x 2 box keep every coordinate exact in
        // binary, so the tie is exact rather than float-jittered.
        let room = Room::new(Vector3::new(8.0, 4.0, 2.0), &Plane::ALL, 0.25, 0.25).unwrap();
        // Distance 0.25 to both the wall_y0 surface and the ceiling surface.
        let p = Point3::new(1.0, 0.0, 2.0);
        let (_, plane) = room.project_to_allowed_planes(&p);
        assert_eq!(plane, Plane::WallY0);
    }

    #[test]
    fn aim_examples() {
        let room = Room::testbed();
        let d = room.aim_at_centroid(&Point3::new(4.0, 2.0, 2.37)).unwrap();
        assert_relative_eq!(d.into_inner(), Vector3::new(0.0, 0.0, -1.0), epsilon = 1e-12);
        let d = room.aim_at_centroid(&Point3::new(0.03, 2.0, 1.2)).unwrap();
        assert_relative_eq!(d.into_inner(), Vector3::new(1.0, 0.0, 0.0), epsilon = 1e-12);
        assert!(room.aim_at_centroid(&room.centroid()).is_err());
    }

    #[test]
    fn aim_output_is_unit() {
        let room = Room::testbed();
        let mut rng = crate::rng::substream(21, &[1]);
        for _ in 0..100 {
            let p = Point3::new(
                rng.gen_range(0.0..8.0),
                rng.gen_range(0.0..4.0),
                rng.gen_range(0.0..2.4),
            );
            if (p - room.centroid()).norm() < 1e-9 {
                continue;
            }
            let d = room.aim_at_centroid(&p).unwrap();
            assert!((d.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cardioid_examples() {
        let x = Vector3::x();
        assert_relative_eq!(cardioid_gain(&x, &x).unwrap(), 1.0);
        assert_relative_eq!(cardioid_gain(&x, &-x).unwrap(), 0.0);
        assert_relative_eq!(cardioid_gain(&x, &Vector3::y()).unwrap(), 0.5);
        assert!(cardioid_gain(&(2.0 * x), &x).is_err());
    }

    #[test]
    fn layout_validates_surface_membership() {
        let room = Room::testbed();
        let bad = AnchorLayout::new(
            &room,
            vec![
                Point3::new(1.0, 0.03, 1.0),
                Point3::new(2.0, 3.97, 1.0),
                Point3::new(3.0, 1.0, 2.37),
                Point3::new(4.0, 2.0, 1.0), // interior point, not on a surface
            ],
            vec![Plane::WallY0, Plane::WallYMax, Plane::Ceiling, Plane::Ceiling],
        );
        assert!(bad.is_err());
        let too_few = AnchorLayout::new(
            &room,
            vec![
                Point3::new(1.0, 0.03, 1.0),
                Point3::new(2.0, 3.97, 1.0),
                Point3::new(3.0, 1.0, 2.37),
            ],
            vec![Plane::WallY0, Plane::WallYMax, Plane::Ceiling],
        );
        assert!(too_few.is_err());
    }

    #[test]
    fn corner_reference_is_feasible_and_spans_walls() {
        let room = Room::testbed();
        let layout = AnchorLayout::corner_reference(&room).unwrap();
        assert_eq!(layout.len(), 4);
        assert_eq!(
            layout.plane_of(),
            &[Plane::Ceiling, Plane::Ceiling, Plane::WallY0, Plane::WallYMax]
        );
        for d in layout.directivities() {
            assert!((d.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stacked_roundtrip() {
        let room = Room::testbed();
        let layout = AnchorLayout::corner_reference(&room).unwrap();
        let stacked = layout.to_stacked();
        let decoded = AnchorLayout::from_stacked(&room, &stacked).unwrap();
        for (a, b) in layout.anchors().iter().zip(decoded.anchors()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cardioid_rotation_invariant(
            ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0,
            bx in -1.0f64..1.0, by in -1.0f64..1.0, bz in -1.0f64..1.0,
            rx in -1.0f64..1.0, ry in -1.0f64..1.0, rz in -1.0f64..1.0,
            angle in 0.0f64..std::f64::consts::TAU,
        ) {
            let a = Vector3::new(ax, ay, az);
            let b = Vector3::new(bx, by, bz);
            let axis = Vector3::new(rx, ry, rz);
            prop_assume!(a.norm() > 1e-3 && b.norm() > 1e-3 && axis.norm() > 1e-3);
            let a = a.normalize();
            let b = b.normalize();
            let rot = nalgebra::Rotation3::from_axis_angle(&Unit::new_normalize(axis), angle);
            let g0 = cardioid_gain(&a, &b).unwrap();
            let g1 = cardioid_gain(&(rot * a), &(rot * b)).unwrap();
            prop_assert!((g0 - g1).abs() < 1e-9);
        }
    }
}
