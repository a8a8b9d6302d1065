#include "qcorr/msf.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/error.hpp"
#include "qcorr/optimize.hpp"

namespace qcorr {

namespace {

Vector singlet_vector(const Matrix& u) {
    const auto d = u.rows();
    Vector v(d * d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index k = 0; k < d; ++k) v(i * d + k) = scale * u(k, i);
    return v;
}

} // namespace

double singlet_overlap(const Matrix& rho, const Matrix& u) {
    const Vector v = singlet_vector(u);
    return v.dot(rho * v).real();
}

double teleportation_fidelity(int d, double F) { return (d * F + 1.0) / (d + 1.0); }

MsfResult msf(const BipartiteState& s, const MsfOptions& opts, Rng& rng) {
    if (s.dimA() != s.dimB()) throw DimensionMismatch("msf: state must be d x d");
    const int d = s.dimA();
    const Matrix& rho = s.matrix();
    const int starts = std::max(1, opts.starts);
    const int per_start = std::max(d * d + 2, opts.budget / starts);

    MsfResult best;
    best.F = -1.0;
    for (int st = 0; st < starts && best.evaluations < opts.budget; ++st) {
        const Matrix u0 = st == 0 ? Matrix(Matrix::Identity(d, d)) : haar_unitary(d, rng);
        auto unitary_at = [&](std::span<const double> x) { return Matrix(u0 * expi_hermitian(hermitian_from_coords(x, d))); };
        const Objective f = [&](std::span<const double> x) { return -singlet_overlap(rho, unitary_at(x)); };
        NelderMeadOptions nm;
        nm.max_evals = std::min(per_start, opts.budget - best.evaluations);
        nm.initial_step = 0.3;
        const OptimumPoint opt = nelder_mead(f, std::vector<double>(static_cast<std::size_t>(d * d), 0.0), nm);
        best.evaluations += opt.evaluations;
        if (-opt.value > best.F) {
            best.F = -opt.value;
            best.optimal_unitary = unitary_at(opt.x);
        }
    }
    best.F = std::clamp(best.F, 0.0, 1.0);
    best.fidelity = teleportation_fidelity(d, best.F);
    return best;
}

MsfBound verify_msf_bound(const BipartiteState& s, const KrausChannel& ch, const MsfOptions& opts, Rng& rng,
                          double slack) {
    if (ch.dim() != s.dimB()) throw DimensionMismatch("verify_msf_bound: channel does not act on B");
    if (!is_unital(ch)) throw InvalidInput("verify_msf_bound: the bound is stated for unital (mixing) channels only");
    MsfBound out;
    out.before = msf(s, opts, rng);
    out.after = msf(apply_local_B(ch, s), opts, rng);
    out.slack = slack;
    out.holds = out.after.F <= out.before.F + slack;
    return out;
}

} // namespace qcorr
