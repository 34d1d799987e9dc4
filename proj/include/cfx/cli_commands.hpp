#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfx/chen_stein.hpp"
#include "cfx/report.hpp"

namespace cfx {

/// Resolved configuration for one experiment command. Only statistical
/// parameters participate in the config hash: worker count and output
/// presentation never change the numbers.
struct ExperimentConfig {
    std::vector<std::uint64_t> n_values{10000};
    std::vector<double> u_values{1.0};
    std::uint64_t k = 1;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    double delta = 1.0;
    MixingModel mixing{};
    std::optional<std::uint64_t> initial_bits;
    std::optional<std::uint64_t> max_bits;
    int workers = 0;
    bool quick = false;

    BatchConfig batch_for(std::uint64_t n) const;
    std::vector<std::pair<std::string, std::string>> echo() const;
    void validate() const;
};

/// Per-(n,u) exceedance-law rows: empirical TV to the limit Poisson(1/u)
/// and to the finite-mean Poisson, the certified rate bound, the analytic
/// b-term breakdown, and discard counts.
Report cmd_exceedance(const ExperimentConfig& cfg);

/// Convergence-rate sweep: per n, the sup over the u-grid of the empirical
/// TV distance, its Monte Carlo noise floor, the floor-corrected value,
/// and the OLS slope of log(sup TV) against log n with standard error.
/// Refuses a slope when the noise floor swamps the signal on most of the
/// grid.
Report cmd_rate_sweep(const ExperimentConfig& cfg);

/// The sweep's numbers, for programmatic consumers.
struct RateSweepData {
    struct Cell {
        std::uint64_t n = 0;
        double sup_tv = 0.0;         // raw empirical sup over the u grid
        double arg_u = 0.0;
        double noise_floor = 0.0;    // expected tv at truth==ref, arg-max cell
        double sup_corrected = 0.0;  // sup of the noise-deconvolved estimate
        bool weak_signal = false;    // under the deconvolved resolution
        std::uint64_t discarded = 0;
    };
    std::vector<Cell> cells;
    bool slope_refused = false;   // noise floor dominated most of the grid
    double slope = 0.0;           // OLS on log(sup_corrected) vs log n
    double slope_stderr = 0.0;
};

RateSweepData rate_sweep_data(const ExperimentConfig& cfg);

/// Empirical k-th maxima CDF against the limit law.
Report cmd_maxima(const ExperimentConfig& cfg);

/// Point-process checks on the intervals between consecutive u-grid points
/// (the last interval unbounded): mean measures and the avoidance
/// probability of the whole union.
Report cmd_pointprocess(const ExperimentConfig& cfg);

/// Bound evaluations only (no sampling): window radius, b-term bounds,
/// the explicit rate constant and the certified rate bound at delta.
Report cmd_bounds(const ExperimentConfig& cfg);

/// Oracle-versus-Monte-Carlo verification suite. `passed` is false when
/// any atom deviates by more than 4 binomial standard errors (exit code 2
/// at the CLI).
struct VerifyOutcome {
    Report report;
    bool passed = true;
};

VerifyOutcome cmd_verify(const ExperimentConfig& cfg);

}  // namespace cfx
