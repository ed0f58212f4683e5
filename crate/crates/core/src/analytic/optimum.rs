//! Optimal IRS reflect power for a fixed BS transmit power.
//!
//! Maximizers are interchangeable strategies behind [`ReflectPowerMaximizer`]
//! and are looked up by name through [`MaximizerRegistry`]. The golden-section
//! search is the default; the closed-form stationary point is kept as a
//! cross-check and reported alongside every result.

use super::search::{golden_section_max, log_grid};
use super::SnrCoefficients;
use crate::scenario::{dbm_to_watts, Scenario};

/// Reflect-power search range and bracketing grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectPowerSearch {
    pub min_watts: f64,
    pub max_watts: f64,
    pub grid_points: usize,
}

impl Default for ReflectPowerSearch {
    fn default() -> Self {
        ReflectPowerSearch {
            min_watts: dbm_to_watts(-60.0),
            max_watts: dbm_to_watts(50.0),
            grid_points: 400,
        }
    }
}

impl ReflectPowerSearch {
    pub fn grid(&self) -> Vec<f64> {
        log_grid(self.min_watts, self.max_watts, self.grid_points)
    }

    /// Multiplicative width of one grid cell.
    pub fn cell_ratio(&self) -> f64 {
        (self.max_watts / self.min_watts).powf(1.0 / (self.grid_points - 1) as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptimumMethod {
    AnalyticRoot,
    Numeric,
}

/// Which end of the search range a monotone SNR pushed the optimum to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReflectPowerOptimum {
    pub p_i_opt: f64,
    pub snr_at_opt: f64,
    pub method: OptimumMethod,
    /// Set when no interior maximum exists inside the search range.
    pub boundary: Option<Boundary>,
    /// Grid point with the largest SNR.
    pub grid_peak: f64,
    /// Interior stationary point from the closed-form root, if it lies in range.
    pub analytic_root: Option<f64>,
    /// Both values produced by the closed-form root template.
    pub candidate_roots: Option<[f64; 2]>,
}

impl ReflectPowerOptimum {
    /// Relative disagreement between the returned optimum and the analytic root.
    pub fn analytic_disagreement(&self) -> Option<f64> {
        self.analytic_root.map(|r| (self.p_i_opt - r).abs() / r)
    }
}

pub trait ReflectPowerMaximizer: Send + Sync {
    fn name(&self) -> &'static str;
    fn method(&self) -> OptimumMethod;
    /// Returns the maximizing reflect power and, if the optimum sits on an
    /// edge of the range, which edge.
    fn maximize(
        &self,
        coeffs: &SnrCoefficients,
        search: &ReflectPowerSearch,
    ) -> (f64, Option<Boundary>);
}

/// Grid scan over the log-spaced bracket followed by golden-section search
/// in `ln P_i` around the best grid point.
#[derive(Debug, Clone, Copy)]
pub struct GoldenSectionMaximizer {
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for GoldenSectionMaximizer {
    fn default() -> Self {
        GoldenSectionMaximizer {
            tolerance: 1e-12,
            max_iter: 500,
        }
    }
}

impl ReflectPowerMaximizer for GoldenSectionMaximizer {
    fn name(&self) -> &'static str {
        "numeric"
    }

    fn method(&self) -> OptimumMethod {
        OptimumMethod::Numeric
    }

    fn maximize(
        &self,
        coeffs: &SnrCoefficients,
        search: &ReflectPowerSearch,
    ) -> (f64, Option<Boundary>) {
        let grid = search.grid();
        let peak = grid_argmax(coeffs, &grid);
        if peak == grid.len() - 1 {
            return (search.max_watts, Some(Boundary::Upper));
        }
        if peak == 0 {
            return (search.min_watts, Some(Boundary::Lower));
        }
        let (lo, hi) = (grid[peak - 1].ln(), grid[peak + 1].ln());
        let (x, _) = golden_section_max(
            |x| coeffs.snr(x.exp()),
            lo,
            hi,
            self.tolerance,
            self.max_iter,
        );
        (x.exp(), None)
    }
}

/// Closed-form stationary point, clamped to the search range.
#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyticRootMaximizer;

impl ReflectPowerMaximizer for AnalyticRootMaximizer {
    fn name(&self) -> &'static str {
        "analytic-root"
    }

    fn method(&self) -> OptimumMethod {
        OptimumMethod::AnalyticRoot
    }

    fn maximize(
        &self,
        coeffs: &SnrCoefficients,
        search: &ReflectPowerSearch,
    ) -> (f64, Option<Boundary>) {
        match coeffs.stationary_point() {
            Some(p) if p >= search.min_watts && p <= search.max_watts => (p, None),
            _ => {
                if coeffs.snr(search.max_watts) >= coeffs.snr(search.min_watts) {
                    (search.max_watts, Some(Boundary::Upper))
                } else {
                    (search.min_watts, Some(Boundary::Lower))
                }
            }
        }
    }
}

fn grid_argmax(coeffs: &SnrCoefficients, grid: &[f64]) -> usize {
    grid.iter()
        .map(|&p| coeffs.snr(p))
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
            if v > best.1 {
                (i, v)
            } else {
                best
            }
        })
        .0
}

/// Name -> maximizer lookup.
pub struct MaximizerRegistry {
    entries: Vec<Box<dyn ReflectPowerMaximizer>>,
}

impl MaximizerRegistry {
    pub fn empty() -> Self {
        MaximizerRegistry {
            entries: Vec::new(),
        }
    }

    /// Adds a maximizer, replacing any existing one with the same name.
    pub fn register(&mut self, maximizer: Box<dyn ReflectPowerMaximizer>) {
        self.entries.retain(|m| m.name() != maximizer.name());
        self.entries.push(maximizer);
    }

    pub fn get(&self, name: &str) -> Option<&dyn ReflectPowerMaximizer> {
        self.entries
            .iter()
            .find(|m| m.name() == name)
            .map(|m| m.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|m| m.name()).collect()
    }
}

impl Default for MaximizerRegistry {
    fn default() -> Self {
        let mut reg = MaximizerRegistry::empty();
        reg.register(Box::new(GoldenSectionMaximizer::default()));
        reg.register(Box::new(AnalyticRootMaximizer));
        reg
    }
}

/// Optimal reflect power using the default numeric maximizer.
pub fn optimal_reflect_power(sc: &Scenario, search: &ReflectPowerSearch) -> ReflectPowerOptimum {
    optimal_reflect_power_with(&GoldenSectionMaximizer::default(), sc, search)
}

pub fn optimal_reflect_power_with(
    maximizer: &dyn ReflectPowerMaximizer,
    sc: &Scenario,
    search: &ReflectPowerSearch,
) -> ReflectPowerOptimum {
    let coeffs = SnrCoefficients::from_scenario(sc);
    let grid = search.grid();
    let grid_peak = grid[grid_argmax(&coeffs, &grid)];
    let (p_i_opt, boundary) = maximizer.maximize(&coeffs, search);
    let analytic_root = coeffs
        .stationary_point()
        .filter(|&p| p >= search.min_watts && p <= search.max_watts);
    ReflectPowerOptimum {
        p_i_opt,
        snr_at_opt: coeffs.snr(p_i_opt),
        method: maximizer.method(),
        boundary,
        grid_peak,
        analytic_root,
        candidate_roots: coeffs.candidate_roots(),
    }
}
