//! Quasi-static sweeps of a control parameter with branch tracking.
//!
//! A sweep solves the stationary cubic at every grid point and follows the
//! stable root nearest the previously occupied one, which is the adiabatic
//! response of the physical system. When the occupied branch terminates at a
//! fold the tracker lands on the surviving branch and records a [`Jump`];
//! sweeping the same grid in both directions exposes the hysteresis loop.

use alloc::vec::Vec;

use crate::error::Error;
use crate::params::{derive_rates, PhysicalParams};
use crate::spectra::validate_grid;
use crate::stationary::{stationary_photon_numbers, StationaryState};
use crate::Result;

/// Which parameter the sweep grid drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SweepControl {
    /// Grid values are effective drive powers `p_eff`; the input power is
    /// rescaled by `kappa_cav / kappa_in` at every point.
    EffectivePower,
    /// Grid values are bare detunings `delta0`.
    Detuning,
}

/// Traversal order over the ascending grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Direction {
    Up,
    Down,
}

/// A discontinuous branch change during a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Jump {
    /// Traversal index of the first point on the new branch.
    pub index: usize,
    pub from_n: f64,
    pub to_n: f64,
}

/// Result of one directional sweep.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepTrace {
    pub control: SweepControl,
    pub direction: Direction,
    /// Control values in traversal order (descending for [`Direction::Down`]).
    pub grid: Vec<f64>,
    /// Occupied state at each grid point.
    pub states: Vec<StationaryState>,
    pub jumps: Vec<Jump>,
}

/// Stable root nearest `target`; falls back to the full root set when
/// rounding has flagged every root marginal.
fn pick_nearest(roots: &[StationaryState], target: f64) -> StationaryState {
    let dist = |s: &&StationaryState| {
        let d = s.n - target;
        d * d
    };
    roots
        .iter()
        .filter(|s| s.stable)
        .min_by(|a, b| dist(a).total_cmp(&dist(b)))
        .or_else(|| roots.iter().min_by(|a, b| dist(a).total_cmp(&dist(b))))
        .copied()
        .expect("solver returns at least one root")
}

/// Starting branch: the extreme stable root reachable from outside the loop.
fn pick_extreme(roots: &[StationaryState], direction: Direction) -> StationaryState {
    fn best<'a, I: Iterator<Item = &'a StationaryState>>(
        iter: I,
        direction: Direction,
    ) -> Option<&'a StationaryState> {
        match direction {
            Direction::Up => iter.min_by(|a, b| a.n.total_cmp(&b.n)),
            Direction::Down => iter.max_by(|a, b| a.n.total_cmp(&b.n)),
        }
    }
    best(roots.iter().filter(|s| s.stable), direction)
        .or_else(|| best(roots.iter(), direction))
        .copied()
        .expect("solver returns at least one root")
}

/// Sweeps `control` over the strictly increasing `grid` in the given
/// direction, tracking the occupied stable branch point to point.
///
/// An up sweep starts on the lowest stable root, a down sweep on the highest,
/// matching preparation outside the hysteresis loop. A jump is recorded when
/// the occupied branch vanishes (fold crossing) or the nearest stable root
/// detaches by more than ten times the smallest root spacing seen on the
/// multi-root segment, with a noise floor on the moved distance.
pub fn sweep(
    base: &PhysicalParams,
    control: SweepControl,
    grid: &[f64],
    direction: Direction,
) -> Result<SweepTrace> {
    base.validate()?;
    validate_grid(grid)?;
    if control == SweepControl::EffectivePower && grid[0] < 0.0 {
        return Err(Error::InvalidParameter("effective power must be nonnegative"));
    }
    let rates = derive_rates(base)?;

    let mut order = grid.to_vec();
    if direction == Direction::Down {
        order.reverse();
    }

    let mut states: Vec<StationaryState> = Vec::with_capacity(order.len());
    let mut jumps: Vec<Jump> = Vec::new();
    let mut last_n = 0.0f64;
    let mut last_count = 0usize;
    let mut gap_est = f64::INFINITY;

    for (i, &c) in order.iter().enumerate() {
        let mut p = *base;
        match control {
            SweepControl::EffectivePower => {
                p.p_in = c * rates.kappa_cav / base.kappa_in;
            }
            SweepControl::Detuning => p.delta0 = c,
        }
        let roots = stationary_photon_numbers(&p)?;

        let chosen = if i == 0 {
            pick_extreme(&roots, direction)
        } else {
            let nearest = pick_nearest(&roots, last_n);
            let moved = (nearest.n - last_n).abs();
            let fold_lost = roots.len() < last_count;
            let detached = moved > 10.0 * gap_est;
            if (fold_lost || detached) && moved > 1e-6 * (1.0 + last_n.abs()) {
                jumps.push(Jump {
                    index: i,
                    from_n: last_n,
                    to_n: nearest.n,
                });
                // Fresh branch: the old root spacing no longer means anything.
                gap_est = f64::INFINITY;
            }
            nearest
        };

        last_n = chosen.n;
        last_count = roots.len();
        if roots.len() >= 2 {
            gap_est = roots
                .windows(2)
                .map(|w| w[1].n - w[0].n)
                .fold(f64::INFINITY, f64::min);
        }
        states.push(chosen);
    }

    Ok(SweepTrace {
        control,
        direction,
        grid: order,
        states,
        jumps,
    })
}
