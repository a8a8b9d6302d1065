#include "qcorr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcorr {

OptimumPoint nelder_mead(const Objective& f, std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    OptimumPoint out;
    if (n == 0) {
        out.value = f(x0);
        out.evaluations = 1;
        return out;
    }
    const double dn = static_cast<double>(n);
    const double alpha = 1.0;
    const double beta = 1.0 + 2.0 / dn;
    const double gamma = 0.75 - 1.0 / (2.0 * dn);
    const double delta = 1.0 - 1.0 / dn;

    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        const double v = f(x);
        return std::isfinite(v) ? v : HUGE_VAL;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> fv(n + 1, HUGE_VAL);
    for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opts.initial_step;
    for (std::size_t i = 0; i <= n && evals < opts.max_evals; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    auto point = [&](const std::vector<double>& from, double t, std::vector<double>& dst) {
        // dst = centroid + t * (from - centroid)
        for (std::size_t k = 0; k < n; ++k) dst[k] = centroid[k] + t * (from[k] - centroid[k]);
    };

    while (evals < opts.max_evals) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

        double diam = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s = std::max(s, std::abs(simplex[i][k] - simplex[best][k]));
            diam = std::max(diam, s);
        }
        if (fv[worst] - fv[best] <= opts.ftol * (std::abs(fv[best]) + 1e-300) && diam <= opts.xtol) break;
        if (diam <= 1e-15) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / dn;
        }

        point(simplex[worst], -alpha, xr);
        const double fr = eval(xr);
        if (fr < fv[best]) {
            point(simplex[worst], -alpha * beta, xe);
            const double fe = evals < opts.max_evals ? eval(xe) : HUGE_VAL;
            if (fe < fr) {
                simplex[worst] = xe;
                fv[worst] = fe;
            } else {
                simplex[worst] = xr;
                fv[worst] = fr;
            }
            continue;
        }
        if (fr < fv[second]) {
            simplex[worst] = xr;
            fv[worst] = fr;
            continue;
        }
        const bool outside = fr < fv[worst];
        point(outside ? xr : simplex[worst], gamma, xc);
        const double fc = evals < opts.max_evals ? eval(xc) : HUGE_VAL;
        if (fc < (outside ? fr : fv[worst])) {
            simplex[worst] = xc;
            fv[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n && evals < opts.max_evals; ++i) {
            if (i == best) continue;
            for (std::size_t k = 0; k < n; ++k)
                simplex[i][k] = simplex[best][k] + delta * (simplex[i][k] - simplex[best][k]);
            fv[i] = eval(simplex[i]);
        }
    }

    const auto it = std::min_element(fv.begin(), fv.end());
    out.x = simplex[static_cast<std::size_t>(it - fv.begin())];
    out.value = *it;
    out.evaluations = evals;
    return out;
}

} // namespace qcorr
