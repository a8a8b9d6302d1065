#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qcorr {

using Objective = std::function<double(std::span<const double>)>;

struct NelderMeadOptions {
    int max_evals = 1000;
    double initial_step = 0.5;
    /// Stop when the simplex function spread is below ftol * (|f_best| + 1e-300)
    /// and its diameter below xtol.
    double ftol = 1e-15;
    double xtol = 1e-10;
};

struct OptimumPoint {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

/// Minimizes `f` from `x0` with the dimension-adaptive Nelder-Mead
/// coefficients (reflection 1, expansion 1 + 2/n, contraction 0.75 - 1/(2n),
/// shrink 1 - 1/n).
OptimumPoint nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts);

} // namespace qcorr
