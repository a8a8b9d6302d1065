#pragma once

#include "qcorr/certify.hpp"

namespace qcorr {

struct MsfOptions {
    int budget = 20000;
    int starts = 8;
};

struct MsfResult {
    double F = 0.0;
    Matrix optimal_unitary;
    double fidelity = 0.0;
    int evaluations = 0;
};

/// <Phi_U| rho |Phi_U> with |Phi_U> = (I (x) U) sum_i |ii> / sqrt(d).
double singlet_overlap(const Matrix& rho, const Matrix& u);

/// Average teleportation fidelity (dF + 1) / (d + 1).
double teleportation_fidelity(int d, double F);

/// Maximum singlet fraction over U = U_0 exp(iH). The first start uses
/// U_0 = I, the rest Haar U_0; each runs Nelder-Mead over the d^2
/// coordinates of H.
MsfResult msf(const BipartiteState& s, const MsfOptions& opts, Rng& rng);

struct MsfBound {
    MsfResult before;
    MsfResult after;
    double slack = 0.0;
    bool holds = false;
};

inline constexpr double default_msf_slack = 1e-6;

/// Compares the MSF before and after I (x) L for a unital L on B.
/// Throws InvalidInput for non-unital channels or mismatched dimensions.
MsfBound verify_msf_bound(const BipartiteState& s, const KrausChannel& ch, const MsfOptions& opts, Rng& rng,
                          double slack = default_msf_slack);

} // namespace qcorr
