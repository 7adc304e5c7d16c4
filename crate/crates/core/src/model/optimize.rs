use crate::error::{Error, Result};

use super::{membership_t1, ParamPoint, Score};

/// Objective value assigned to infeasible points.
const PENALTY: f64 = 1e6;

#[derive(Clone, Debug, PartialEq)]
pub struct NelderMeadConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Stop when the largest vertex distance from the best vertex drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Relative size of the initial simplex.
    pub initial_step: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> NelderMeadConfig {
        NelderMeadConfig {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tolerance: 1e-10,
            max_iterations: 20_000,
            initial_step: 0.5,
        }
    }
}

fn lerp<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
}

fn distance<const N: usize>(a: &[f64; N], b: &[f64; N]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Minimizes `f` from `start`. Returns the best vertex and its value.
pub fn nelder_mead<const N: usize>(
    f: impl Fn(&[f64; N]) -> f64,
    start: [f64; N],
    cfg: &NelderMeadConfig,
) -> ([f64; N], f64) {
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, f(&start)));
    for i in 0..N {
        let mut v = start;
        v[i] += if v[i] != 0.0 { cfg.initial_step * v[i] } else { 0.00025 };
        simplex.push((v, f(&v)));
    }
    for _ in 0..cfg.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].0;
        if simplex.iter().all(|(v, _)| distance(v, &best) < cfg.tolerance) {
            break;
        }
        let worst = simplex[N];
        let centroid: [f64; N] =
            std::array::from_fn(|i| simplex[..N].iter().map(|(v, _)| v[i]).sum::<f64>() / N as f64);
        let reflected = lerp(&centroid, &worst.0, -cfg.reflection);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = lerp(&centroid, &worst.0, -cfg.expansion);
            let fe = f(&expanded);
            simplex[N] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let c = lerp(&centroid, &reflected, cfg.contraction);
            (c, f(&c))
        } else {
            let c = lerp(&centroid, &worst.0, cfg.contraction);
            (c, f(&c))
        };
        if fc < worst.1.min(fr) {
            simplex[N] = (contracted, fc);
            continue;
        }
        for vertex in simplex.iter_mut().skip(1) {
            let v = lerp(&best, &vertex.0, cfg.shrink);
            *vertex = (v, f(&v));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimizeMode {
    Max,
    Min,
}

/// Feasible region: `T₁`, or `T₁` intersected with a coordinate box on `(p0110, p1011, p1111)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Region {
    T1,
    Box([(f64, f64); 3]),
}

impl Region {
    /// The default search box.
    pub fn default_box() -> Region {
        Region::Box([(1.0 / 6.0, 3.0 / 6.0), (1.0 / 160.0, 3.0 / 160.0), (1.0 / 8.0, 3.0 / 8.0)])
    }

    pub fn contains(&self, pt: &ParamPoint<f64>) -> bool {
        let in_box = match self {
            Region::T1 => true,
            Region::Box(b) => pt.as_array().iter().zip(b).all(|(x, (lo, hi))| lo <= x && x <= hi),
        };
        in_box && membership_t1(pt)
    }
}

/// Local optimum of a score over `region` by penalized Nelder–Mead.
pub fn optimize_score(
    start: &ParamPoint<f64>,
    which: Score,
    mode: OptimizeMode,
    region: Region,
) -> Result<(ParamPoint<f64>, f64)> {
    if !region.contains(start) {
        return Err(Error::StartOutsideRegion);
    }
    let sign = match mode {
        OptimizeMode::Max => -1.0,
        OptimizeMode::Min => 1.0,
    };
    let objective = |x: &[f64; 3]| {
        let pt = ParamPoint::from_array(*x);
        if !region.contains(&pt) {
            return PENALTY;
        }
        which.of_point(&pt).map_or(PENALTY, |v| sign * v)
    };
    let (best, _) = nelder_mead(objective, start.as_array(), &NelderMeadConfig::default());
    let pt = ParamPoint::from_array(best);
    let value = which.of_point(&pt).ok_or(Error::StartOutsideRegion)?;
    Ok((pt, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_bowl() {
        let (x, v) = nelder_mead(
            |p: &[f64; 2]| (p[0] - 1.0).powi(2) + 3.0 * (p[1] + 2.0).powi(2),
            [0.3, 0.4],
            &NelderMeadConfig::default(),
        );
        assert!((x[0] - 1.0).abs() < 1e-8 && (x[1] + 2.0).abs() < 1e-8, "{x:?}");
        assert!(v < 1e-15);
    }

    #[test]
    fn constant_objective_returns_start() {
        let start = [0.1, 0.2, 0.3];
        let (x, v) = nelder_mead(|_: &[f64; 3]| 4.0, start, &NelderMeadConfig::default());
        assert_eq!(x, start);
        assert_eq!(v, 4.0);
    }

    #[test]
    fn start_outside_region() {
        let pt = ParamPoint::new(0.5, 0.5, 0.5);
        assert!(matches!(
            optimize_score(&pt, Score::Rho1, OptimizeMode::Max, Region::T1),
            Err(Error::StartOutsideRegion)
        ));
    }

    #[test]
    fn maximize_rho1_from_sixteenths() {
        let start = ParamPoint::new(1.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0);
        let (pt, v) = optimize_score(&start, Score::Rho1, OptimizeMode::Max, Region::T1).unwrap();
        assert!(v >= 0.019 && (v - 0.0198).abs() <= 0.002, "{v} at {pt:?}");
        assert!(membership_t1(&pt));
    }

    #[test]
    fn minimum_over_box_is_positive() {
        let start = ParamPoint::new(1.0 / 3.0, 1.0 / 80.0, 1.0 / 4.0);
        let (pt, v) = optimize_score(&start, Score::Rho1, OptimizeMode::Min, Region::default_box()).unwrap();
        assert!(v > 0.0, "{v} at {pt:?}");
        assert!(Region::default_box().contains(&pt));
    }
}
