#include <doctest.h>

#include <cmath>

#include "qcorr/optimize.hpp"

using namespace qcorr;

TEST_SUITE("optimize") {

TEST_CASE("Nelder-Mead minimizes a shifted quadratic") {
    const Objective f = [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += (i + 1.0) * (x[i] - 0.1 * i) * (x[i] - 0.1 * i);
        return s;
    };
    NelderMeadOptions o;
    o.max_evals = 20000;
    const OptimumPoint r = nelder_mead(f, std::vector<double>(6, 1.0), o);
    CHECK(r.value < 1e-12);
    for (std::size_t i = 0; i < r.x.size(); ++i) CHECK(r.x[i] == doctest::Approx(0.1 * i).epsilon(1e-5));
    CHECK(r.evaluations <= o.max_evals);
}

TEST_CASE("Nelder-Mead on the Rosenbrock valley") {
    const Objective f = [](std::span<const double> x) {
        return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
    };
    NelderMeadOptions o;
    o.max_evals = 5000;
    const OptimumPoint r = nelder_mead(f, {-1.2, 1.0}, o);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("the evaluation budget is respected") {
    int calls = 0;
    const Objective f = [&](std::span<const double> x) {
        ++calls;
        return std::cos(x[0]) + std::sin(3 * x[1]);
    };
    NelderMeadOptions o;
    o.max_evals = 37;
    const OptimumPoint r = nelder_mead(f, {0.0, 0.0}, o);
    CHECK(calls <= 37);
    CHECK(r.evaluations == calls);
}

} // TEST_SUITE
