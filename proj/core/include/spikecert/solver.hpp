#pragma once

#include <cstdint>
#include <vector>

#include "spikecert/framework.hpp"

namespace spikecert {

struct SolverOptions {
    double opt_tol = 1e-6;      // dual-gap tolerance for convergence
    int max_outer = 40;         // atom insertion rounds
    int grid_points = 2001;     // dual-certificate scan grid
    int refine_factor = 100;    // local refinement around the inserted atom
    int max_newton = 80;        // joint position/amplitude polish iterations
    double amp_floor = 0.0;     // prune amplitudes at or below this value
};

struct SolverResult {
    SpikeConfiguration spikes; // recovered, amplitudes >= 0
    double objective = 0.0;
    double max_dual_violation = 0.0;          // max over grid of (eta - 1)+
    std::vector<double> support_dual_values;  // eta at the recovered positions
    double dual_gap = 0.0;                    // max of grid violation and support deficit
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective_history; // end of each insertion round
};

// Positive BLASSO at desk scale: greedy atom insertion at the dual
// certificate argmax, nonnegative amplitude update, then joint second-order
// sliding of positions and amplitudes with nonnegativity clamping.
SolverResult solve_pblasso(const Framework& fw, const std::vector<double>& y, double lambda,
                           const SolverOptions& opts = {});

struct TrialRecord {
    double noise = 0.0;
    int trial = 0;
    int n_spikes = 0;
    double pos_err = 0.0;
    double amp_err = 0.0;
    double dual_gap = 0.0;
};

struct ScaleAggregate {
    double noise = 0.0;
    double success_rate = 0.0; // fraction of trials recovering exactly M spikes
    double mean_pos_err = 0.0; // over successful trials
    double max_pos_err = 0.0;
    double mean_amp_err = 0.0;
};

struct ExperimentConfig {
    std::vector<double> noise_scales;
    double alpha = 0.5; // lambda = ||w|| / alpha
    int trials = 20;
    std::uint64_t seed = 0;
    double lambda_floor = 1e-10; // used when the noise scale is zero
    SolverOptions solver;
};

struct ExperimentReport {
    std::vector<TrialRecord> trials;
    std::vector<ScaleAggregate> scales;
    double loglog_slope = 0.0; // position error vs noise, over successful scales
    bool slope_defined = false;
};

// Draws trials of isotropic observation noise rescaled to exact H-norm h,
// solves with lambda = h/alpha, and reports spike counts, parameter errors
// and dual gaps. Each trial's noise stream derives from (seed, scale index,
// trial index) so runs reproduce regardless of scheduling.
ExperimentReport support_stability_experiment(const Framework& fw, const SpikeConfiguration& truth,
                                              const ExperimentConfig& config);

} // namespace spikecert
