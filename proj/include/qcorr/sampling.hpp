#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "qcorr/channels.hpp"
#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Seedable generator with deterministic stream splitting.
///
/// Substream i of master seed s is an independent mt19937_64 seeded with
/// splitmix64(s ^ splitmix64(i + 0x9e3779b97f4a7c15)). Identical seeds give
/// identical streams on a given standard library build.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    static Rng substream(std::uint64_t master_seed, std::uint64_t index);
    Rng split(std::uint64_t index) const { return substream(seed_, index); }

    std::uint64_t seed() const { return seed_; }
    double uniform();                  // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    /// (N(0,1) + i N(0,1)) / sqrt(2).
    Complex ginibre();
    int integer(int lo, int hi);       // inclusive

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

std::uint64_t splitmix64(std::uint64_t x);

Matrix ginibre_matrix(int rows, int cols, Rng& rng);

/// Haar unitary via QR of a Ginibre matrix with the phases of diag(R) removed.
Matrix haar_unitary(int d, Rng& rng);

/// Hilbert-Schmidt induced measure: G G^dag / Tr(G G^dag), G Ginibre d x rank.
DensityMatrix random_density(int d, int rank, Rng& rng);

PureState random_pure(int d, Rng& rng);

/// Uniform point on the probability simplex (flat Dirichlet).
std::vector<double> random_probability(int n, Rng& rng);

/// Stinespring sampler: Kraus E_e = (<e|_env (x) I) V for a Haar isometry
/// V : C^d -> C^env (x) C^d.
KrausChannel random_cptp(int d, int env_dim, Rng& rng);

/// Two density matrices with a shared Haar eigenbasis and independent flat
/// Dirichlet spectra.
std::pair<DensityMatrix, DensityMatrix> random_commuting_pair(int d, Rng& rng);

/// First two columns of a Haar unitary.
std::pair<PureState, PureState> random_orthogonal_pure_pair(int d, Rng& rng);

/// Mixture of `n_unitaries` Haar unitaries with flat Dirichlet weights.
KrausChannel random_unital_mixture(int d, int n_unitaries, Rng& rng);

/// Haar output basis with a random POVM of `n_effects` effects
/// (normalized Wishart draws, F_i = S^{-1/2} G_i S^{-1/2}).
KrausChannel random_completely_decohering(int d, int n_effects, Rng& rng);

/// Haar U and p uniform over the completely positive range of `kind`.
KrausChannel random_isotropic(int d, GammaKind kind, Rng& rng);

/// sum_i p_i rho_A^i (x) |b_i><b_i| with Haar basis on B, random rho_A^i and
/// `terms` <= dB terms.
BipartiteState random_half_classical(int dA, int dB, int terms, Rng& rng);

/// Full-rank Hilbert-Schmidt random state on dA x dB.
BipartiteState random_bipartite(int dA, int dB, Rng& rng);

} // namespace qcorr
