//! The four phototaxis task environments and the design/weight grids.
//!
//! With the light fixed at the origin, each environment is a distinct
//! initial pose: the robot starts at distance `r` from the light, heading
//! along +x, with the light at bearing 45, 135, 225 or 315 degrees. Initial
//! coordinates are built from one first-quadrant sine/cosine pair and a
//! sign table, so the environment set is closed under reflection about the
//! x-axis bitwise.
//!
//! Grid axis values are computed as integer ratios, which makes every grid
//! exactly symmetric about zero: the mirror of a grid design is again a
//! grid design.

use std::f64::consts::FRAC_PI_4;

use crate::dynamics::{ControllerWeights, RobotState, SensorLayout, Vec2};
use crate::error::{Error, Result};

/// Default robot-to-light starting distance. Chosen by the calibration
/// scan in the acceptance suite: the canonical design with weights
/// (0.77, 0.77) reaches the light in all four environments at this r.
pub const DEFAULT_RADIUS: f64 = 3.0;

/// Light bearings (degrees) defining the four environments.
pub const ENVIRONMENT_BEARINGS_DEG: [f64; 4] = [45.0, 135.0, 225.0, 315.0];

/// Default design-grid resolution: 9 positions per axis, 9^4 designs.
pub const DEFAULT_DESIGN_RES: usize = 9;

/// Default weight-grid resolution: 121 values per axis, 121^2 controllers.
pub const DEFAULT_WEIGHT_RES: usize = 121;

/// One task environment: the light at polar (r, bearing) relative to the
/// robot start, expressed as an initial pose with the light at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    /// 1-based environment index, ordered by bearing.
    pub id: u8,
    pub bearing_deg: f64,
    pub radius: f64,
    pub initial_state: RobotState,
}

/// Build the four environments for light distance `r`.
pub fn make_environments(r: f64, success_radius: f64) -> Result<[Environment; 4]> {
    if !(r > success_radius) || !r.is_finite() {
        return Err(Error::InvalidRadius { r, success_radius });
    }
    // Quadrant signs for the initial position (-r cos phi, -r sin phi).
    let (sin_q, cos_q) = FRAC_PI_4.sin_cos();
    let rc = r * cos_q;
    let rs = r * sin_q;
    let signs = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];
    let mut envs = Vec::with_capacity(4);
    for (k, (sx, sy)) in signs.into_iter().enumerate() {
        envs.push(Environment {
            id: (k + 1) as u8,
            bearing_deg: ENVIRONMENT_BEARINGS_DEG[k],
            radius: r,
            initial_state: RobotState::new(sx * rc, sy * rs, 0.0),
        });
    }
    Ok(envs.try_into().expect("four environments"))
}

/// The environment solving the same task as `id` in the x-axis-reflected
/// world: 1<->4 and 2<->3.
pub fn reflected_env_id(id: u8) -> u8 {
    5 - id
}

fn axis_ratio(numerator: i64, denominator: i64) -> f64 {
    numerator as f64 / denominator as f64
}

/// The i-th of `m` uniformly spaced sensor coordinates on [-0.5, 0.5].
pub fn design_axis_value(m: usize, i: usize) -> f64 {
    debug_assert!(m >= 2 && i < m);
    axis_ratio(2 * i as i64 - (m as i64 - 1), 2 * (m as i64 - 1))
}

/// The i-th of `m` uniformly spaced weight values on [-1, 1].
pub fn weight_axis_value(m: usize, i: usize) -> f64 {
    debug_assert!(m >= 2 && i < m);
    axis_ratio(2 * i as i64 - (m as i64 - 1), m as i64 - 1)
}

fn axis_index(value: f64, m: usize, axis: impl Fn(usize, usize) -> f64, scale: f64) -> Option<usize> {
    // Invert value = (2i - (m-1)) / scale, then confirm bitwise.
    let i = ((value * scale + (m as f64 - 1.0)) / 2.0).round();
    if !(0.0..m as f64).contains(&i) {
        return None;
    }
    let i = i as usize;
    (axis(m, i) == value).then_some(i)
}

/// All sensor placements on an m-per-axis grid, in row-major order over
/// (l1.x, l1.y, l2.x, l2.y).
#[derive(Debug, Clone, PartialEq)]
pub struct DesignGrid {
    pub positions_per_axis: usize,
    pub designs: Vec<SensorLayout>,
}

/// Build the design grid; `positions_per_axis` must be at least 2.
pub fn make_design_grid(positions_per_axis: usize) -> DesignGrid {
    assert!(positions_per_axis >= 2, "design grid needs >= 2 positions per axis");
    let m = positions_per_axis;
    let axis: Vec<f64> = (0..m).map(|i| design_axis_value(m, i)).collect();
    let mut designs = Vec::with_capacity(m * m * m * m);
    for &x1 in &axis {
        for &y1 in &axis {
            for &x2 in &axis {
                for &y2 in &axis {
                    designs.push(SensorLayout::new(Vec2::new(x1, y1), Vec2::new(x2, y2)));
                }
            }
        }
    }
    DesignGrid {
        positions_per_axis,
        designs,
    }
}

impl DesignGrid {
    pub fn len(&self) -> usize {
        self.designs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.designs.is_empty()
    }

    pub fn layout(&self, index: usize) -> SensorLayout {
        self.designs[index]
    }

    /// Grid index of a layout, if it sits exactly on the grid.
    pub fn index_of(&self, layout: &SensorLayout) -> Option<usize> {
        let m = self.positions_per_axis;
        let scale = (2 * (m - 1)) as f64;
        let i1x = axis_index(layout.l1.x, m, design_axis_value, scale)?;
        let i1y = axis_index(layout.l1.y, m, design_axis_value, scale)?;
        let i2x = axis_index(layout.l2.x, m, design_axis_value, scale)?;
        let i2y = axis_index(layout.l2.y, m, design_axis_value, scale)?;
        Some(((i1x * m + i1y) * m + i2x) * m + i2y)
    }
}

/// All controller weight pairs on an m-per-axis grid, in row-major order
/// over (w1, w2).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightGrid {
    pub values_per_axis: usize,
    pub weights: Vec<ControllerWeights>,
}

/// Build the weight grid; `values_per_axis` must be at least 2.
pub fn make_weight_grid(values_per_axis: usize) -> WeightGrid {
    assert!(values_per_axis >= 2, "weight grid needs >= 2 values per axis");
    let m = values_per_axis;
    let axis: Vec<f64> = (0..m).map(|i| weight_axis_value(m, i)).collect();
    let mut weights = Vec::with_capacity(m * m);
    for &w1 in &axis {
        for &w2 in &axis {
            weights.push(ControllerWeights::new(w1, w2));
        }
    }
    WeightGrid {
        values_per_axis,
        weights,
    }
}

impl WeightGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn axis_value(&self, i: usize) -> f64 {
        weight_axis_value(self.values_per_axis, i)
    }
}

/// Reflect a design about the sagittal plane: sensor roles swap and their
/// y coordinates negate. An involution.
pub fn mirror_design(layout: &SensorLayout) -> SensorLayout {
    let reflect = |p: Vec2| Vec2::new(p.x, -p.y);
    SensorLayout::new(reflect(layout.l2), reflect(layout.l1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn environments_match_bearings() {
        let envs = make_environments(3.0, 0.2).unwrap();
        let c = 3.0 * FRAC_PI_4.cos();
        assert_eq!(envs[0].id, 1);
        assert!((envs[0].initial_state.x - (-c)).abs() < 1e-12);
        assert!((envs[0].initial_state.y - (-c)).abs() < 1e-12);
        assert!((envs[0].initial_state.x + 2.1213203435596424).abs() < 1e-12);
        // Environment 3 starts at the antipode of environment 1.
        assert_eq!(envs[2].initial_state.x, -envs[0].initial_state.x);
        assert_eq!(envs[2].initial_state.y, -envs[0].initial_state.y);
        for (k, env) in envs.iter().enumerate() {
            assert_eq!(env.bearing_deg, ENVIRONMENT_BEARINGS_DEG[k]);
            assert_eq!(env.initial_state.alpha, 0.0);
            assert_eq!(env.initial_state.t, 0.0);
        }
    }

    #[test]
    fn degenerate_radius_is_rejected() {
        assert!(matches!(
            make_environments(0.1, 0.2),
            Err(Error::InvalidRadius { .. })
        ));
        assert!(make_environments(0.2, 0.2).is_err());
    }

    #[test]
    fn environment_set_closed_under_reflection() {
        let envs = make_environments(2.5, 0.2).unwrap();
        for env in &envs {
            let partner = &envs[(reflected_env_id(env.id) - 1) as usize];
            assert_eq!(partner.initial_state.x, env.initial_state.x);
            assert_eq!(partner.initial_state.y, -env.initial_state.y);
        }
    }

    #[test]
    fn design_grid_default_size_and_origin() {
        let grid = make_design_grid(9);
        assert_eq!(grid.len(), 6561);
        assert_eq!(
            grid.layout(0),
            SensorLayout::new(Vec2::new(-0.5, -0.5), Vec2::new(-0.5, -0.5))
        );
        let axis: Vec<f64> = (0..9).map(|i| design_axis_value(9, i)).collect();
        assert_eq!(axis[0], -0.5);
        assert_eq!(axis[1], -0.375);
        assert_eq!(axis[8], 0.5);
    }

    #[test]
    fn design_grid_two_point_endpoints() {
        let grid = make_design_grid(2);
        assert_eq!(grid.len(), 16);
        for d in &grid.designs {
            for c in [d.l1.x, d.l1.y, d.l2.x, d.l2.y] {
                assert!(c == -0.5 || c == 0.5);
            }
        }
    }

    #[test]
    fn weight_grid_sizes_and_spacing() {
        let grid = make_weight_grid(121);
        assert_eq!(grid.len(), 14641);
        assert_eq!(grid.axis_value(0), -1.0);
        assert_eq!(grid.axis_value(120), 1.0);
        assert!((grid.axis_value(1) - (-1.0 + 1.0 / 60.0)).abs() < 1e-15);

        let small = make_weight_grid(3);
        assert_eq!(small.len(), 9);
        assert_eq!(
            small.weights.iter().map(|w| (w.w1, w.w2)).collect::<Vec<_>>(),
            vec![
                (-1.0, -1.0),
                (-1.0, 0.0),
                (-1.0, 1.0),
                (0.0, -1.0),
                (0.0, 0.0),
                (0.0, 1.0),
                (1.0, -1.0),
                (1.0, 0.0),
                (1.0, 1.0),
            ]
        );
    }

    #[test]
    fn mirror_examples() {
        let canonical = SensorLayout::canonical();
        assert_eq!(mirror_design(&canonical), canonical);

        let asym = SensorLayout::new(Vec2::new(-0.5, -0.25), Vec2::new(0.5, 0.25));
        let mirrored = mirror_design(&asym);
        assert_eq!(mirrored.l1, Vec2::new(0.5, -0.25));
        assert_eq!(mirrored.l2, Vec2::new(-0.5, 0.25));
    }

    proptest! {
        #[test]
        fn grid_indexing_round_trips(m in 2usize..8, seed in 0usize..10_000) {
            let grid = make_design_grid(m);
            let index = seed % grid.len();
            let layout = grid.layout(index);
            prop_assert_eq!(grid.index_of(&layout), Some(index));
        }

        #[test]
        fn mirror_of_grid_point_is_grid_point(m in 2usize..8, seed in 0usize..10_000) {
            let grid = make_design_grid(m);
            let layout = grid.layout(seed % grid.len());
            prop_assert!(grid.index_of(&mirror_design(&layout)).is_some());
        }

        #[test]
        fn mirror_is_involution(
            x1 in -0.5f64..0.5, y1 in -0.5f64..0.5,
            x2 in -0.5f64..0.5, y2 in -0.5f64..0.5,
        ) {
            let layout = SensorLayout::new(Vec2::new(x1, y1), Vec2::new(x2, y2));
            prop_assert_eq!(mirror_design(&mirror_design(&layout)), layout);
        }
    }
}
