#include "qcorr/sampling.hpp"

#include <cmath>

#include "qcorr/error.hpp"

namespace qcorr {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::substream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(splitmix64(master_seed ^ splitmix64(index + 0x9e3779b97f4a7c15ULL)));
}

double Rng::uniform() { return uniform_(engine_); }
double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
double Rng::normal() { return normal_(engine_); }

Complex Rng::ginibre() {
    const double re = normal();
    const double im = normal();
    return Complex(re, im) / std::sqrt(2.0);
}

int Rng::integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

Matrix ginibre_matrix(int rows, int cols, Rng& rng) {
    Matrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) g(i, j) = rng.ginibre();
    return g;
}

Matrix haar_unitary(int d, Rng& rng) {
    if (d < 1) throw InvalidInput("haar_unitary: d must be positive");
    const Matrix z = ginibre_matrix(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        const double a = std::abs(r(i, i));
        if (a > 0.0) q.col(i) *= r(i, i) / a;
    }
    return q;
}

DensityMatrix random_density(int d, int rank, Rng& rng) {
    if (rank < 1 || rank > d) throw InvalidInput("random_density: rank must be in [1, d]");
    const Matrix g = ginibre_matrix(d, rank, rng);
    const Matrix w = g * g.adjoint();
    return DensityMatrix(w / w.trace().real());
}

PureState random_pure(int d, Rng& rng) { return PureState::normalized(ginibre_matrix(d, 1, rng).col(0)); }

std::vector<double> random_probability(int n, Rng& rng) {
    std::vector<double> w(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : w) {
        x = -std::log(1.0 - rng.uniform());
        total += x;
    }
    for (auto& x : w) x /= total;
    return w;
}

KrausChannel random_cptp(int d, int env_dim, Rng& rng) {
    if (env_dim < 1) throw InvalidInput("random_cptp: env_dim must be positive");
    const Matrix u = haar_unitary(d * env_dim, rng);
    std::vector<Matrix> ops;
    for (int e = 0; e < env_dim; ++e) ops.push_back(u.block(e * d, 0, d, d));
    return validate_cptp(std::move(ops)).with_kind("random_cptp");
}

std::pair<DensityMatrix, DensityMatrix> random_commuting_pair(int d, Rng& rng) {
    if (d < 2) throw InvalidInput("random_commuting_pair: d must be at least 2");
    const Matrix u = haar_unitary(d, rng);
    auto make = [&] {
        const auto p = random_probability(d, rng);
        RealVector l(d);
        for (int i = 0; i < d; ++i) l(i) = p[static_cast<std::size_t>(i)];
        return DensityMatrix(u * l.cast<Complex>().asDiagonal() * u.adjoint());
    };
    DensityMatrix a = make();
    DensityMatrix b = make();
    return {std::move(a), std::move(b)};
}

std::pair<PureState, PureState> random_orthogonal_pure_pair(int d, Rng& rng) {
    if (d < 2) throw InvalidInput("random_orthogonal_pure_pair: d must be at least 2");
    const Matrix u = haar_unitary(d, rng);
    return {PureState::normalized(u.col(0)), PureState::normalized(u.col(1))};
}

KrausChannel random_unital_mixture(int d, int n_unitaries, Rng& rng) {
    const auto w = random_probability(n_unitaries, rng);
    std::vector<Matrix> us;
    for (int i = 0; i < n_unitaries; ++i) us.push_back(haar_unitary(d, rng));
    return make_unital_mixture(w, us);
}

KrausChannel random_completely_decohering(int d, int n_effects, Rng& rng) {
    if (n_effects < 1 || n_effects > d) throw InvalidInput("random_completely_decohering: need 1..d effects");
    const Matrix basis = haar_unitary(d, rng);
    std::vector<Matrix> g;
    Matrix s = Matrix::Zero(d, d);
    for (int i = 0; i < n_effects; ++i) {
        const Matrix x = ginibre_matrix(d, d, rng);
        g.push_back(x * x.adjoint());
        s += g.back();
    }
    const Spectrum sp = hermitian_eig(0.5 * (s + s.adjoint()));
    RealVector inv_sqrt = sp.values.cwiseSqrt().cwiseInverse();
    const Matrix w = sp.vectors * inv_sqrt.cast<Complex>().asDiagonal() * sp.vectors.adjoint();
    std::vector<Matrix> povm;
    for (const auto& gi : g) {
        Matrix f = w * gi * w;
        povm.push_back(0.5 * (f + f.adjoint()));
    }
    // Absorb rounding so the effects sum to I to machine precision.
    Matrix total = Matrix::Zero(d, d);
    for (const auto& f : povm) total += f;
    povm.back() += Matrix::Identity(d, d) - total;
    return make_completely_decohering(basis, povm);
}

KrausChannel random_isotropic(int d, GammaKind kind, Rng& rng) {
    const PRange r = isotropic_p_range(d, kind);
    const Matrix u = haar_unitary(d, rng);
    return make_isotropic(d, kind, u, rng.uniform(r.lo, r.hi));
}

BipartiteState random_half_classical(int dA, int dB, int terms, Rng& rng) {
    if (terms < 1 || terms > dB) throw InvalidInput("random_half_classical: terms must be in [1, dB]");
    const Matrix basis = haar_unitary(dB, rng);
    const auto p = random_probability(terms, rng);
    std::vector<DensityMatrix> cond;
    std::vector<PureState> vecs;
    for (int i = 0; i < terms; ++i) {
        cond.push_back(random_density(dA, rng.integer(1, dA), rng));
        vecs.push_back(PureState::normalized(basis.col(i)));
    }
    return make_half_classical(p, cond, vecs);
}

BipartiteState random_bipartite(int dA, int dB, Rng& rng) {
    return BipartiteState(dA, dB, random_density(dA * dB, dA * dB, rng));
}

} // namespace qcorr
