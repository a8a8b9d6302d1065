#include "qcorr/states.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qcorr/error.hpp"

namespace qcorr {

namespace {
constexpr double kTraceTol = 1e-8;
constexpr double kClampTol = 1e-10;
constexpr double kNormTol = 1e-8;
constexpr double kGramTol = 1e-10;
} // namespace

DensityMatrix::DensityMatrix(const Matrix& m) {
    require_square(m, "DensityMatrix");
    if (!m.allFinite()) throw InvalidInput("DensityMatrix: non-finite entries");
    if (!is_hermitian(m)) throw InvalidInput("DensityMatrix: matrix is not Hermitian");
    Matrix h = 0.5 * (m + m.adjoint());
    const double tr = h.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
        throw InvalidInput("DensityMatrix: trace " + std::to_string(tr) + " is not 1");
    }
    const Spectrum sp = hermitian_eig(h);
    if (sp.values(0) < -kClampTol) {
        throw InvalidInput("DensityMatrix: negative eigenvalue " + std::to_string(sp.values(0)));
    }
    if (sp.values(0) < 0.0) {
        RealVector clamped = sp.values.cwiseMax(0.0);
        h = sp.vectors * clamped.cast<Complex>().asDiagonal() * sp.vectors.adjoint();
        h = 0.5 * (h + h.adjoint());
    }
    m_ = h / h.trace().real();
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
    return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

PureState::PureState(const Vector& v) {
    if (v.size() == 0 || !v.allFinite()) throw InvalidInput("PureState: empty or non-finite vector");
    const double n = v.norm();
    if (std::abs(n - 1.0) > kNormTol) {
        throw InvalidInput("PureState: norm " + std::to_string(n) + " is not 1");
    }
    v_ = v / n;
}

PureState PureState::normalized(const Vector& v) {
    const double n = v.norm();
    if (v.size() == 0 || !v.allFinite() || n == 0.0) {
        throw InvalidInput("PureState::normalized: zero or non-finite vector");
    }
    return PureState(v / n, Trusted{});
}

PureState PureState::basis(int d, int k) {
    if (d < 1 || k < 0 || k >= d) throw InvalidInput("PureState::basis: index out of range");
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return PureState(std::move(v), Trusted{});
}

BipartiteState::BipartiteState(int dimA, int dimB, DensityMatrix joint)
    : dimA_(dimA), dimB_(dimB), joint_(std::move(joint)) {
    if (dimA <= 0 || dimB <= 0 || joint_.dim() != dimA * dimB) {
        throw DimensionMismatch("BipartiteState: dimensions " + std::to_string(dimA) + "x" +
                                std::to_string(dimB) + " do not factor " +
                                std::to_string(joint_.dim()));
    }
}

void require_orthonormal(std::span<const PureState> basis, const char* what) {
    if (basis.empty()) throw InvalidInput(std::string(what) + ": empty basis");
    const int d = basis.front().dim();
    Matrix gram(basis.size(), basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (basis[i].dim() != d) throw DimensionMismatch(std::string(what) + ": mixed dimensions");
        for (std::size_t j = 0; j < basis.size(); ++j) {
            gram(i, j) = basis[i].amplitudes().dot(basis[j].amplitudes());
        }
    }
    const auto n = static_cast<Eigen::Index>(basis.size());
    if ((gram - Matrix::Identity(n, n)).norm() >= kGramTol) {
        throw InvalidInput(std::string(what) + ": basis is not orthonormal");
    }
}

std::vector<PureState> columns_as_states(const Matrix& u) {
    std::vector<PureState> out;
    out.reserve(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index c = 0; c < u.cols(); ++c) out.push_back(PureState::normalized(u.col(c)));
    return out;
}

BipartiteState make_half_classical(std::span<const double> weights,
                                   std::span<const DensityMatrix> condA,
                                   std::span<const PureState> basisB) {
    if (weights.empty() || weights.size() != condA.size() || weights.size() != basisB.size()) {
        throw InvalidInput("make_half_classical: weights, conditional states and basis differ in length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw InvalidInput("make_half_classical: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidInput("make_half_classical: weights do not sum to 1");
    require_orthonormal(basisB, "make_half_classical");
    const int dA = condA.front().dim();
    const int dB = basisB.front().dim();
    if (static_cast<int>(basisB.size()) > dB) throw InvalidInput("make_half_classical: more basis vectors than dim B");
    Matrix joint = Matrix::Zero(dA * dB, dA * dB);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (condA[i].dim() != dA) throw DimensionMismatch("make_half_classical: mixed dimensions on A");
        joint += weights[i] * tensor(condA[i].matrix(), basisB[i].projector());
    }
    return BipartiteState(dA, dB, DensityMatrix(joint));
}

BlockOperators block_decompose(const BipartiteState& s) {
    const int dA = s.dimA(), dB = s.dimB();
    BlockOperators out{dA, {}};
    out.blocks.reserve(static_cast<std::size_t>(dA * dA));
    for (int k = 0; k < dA; ++k)
        for (int l = 0; l < dA; ++l) out.blocks.push_back(s.matrix().block(k * dB, l * dB, dB, dB));
    return out;
}

Matrix reassemble_blocks(const BlockOperators& b) {
    const int dA = b.dimA;
    const auto dB = b.blocks.front().rows();
    Matrix m(dA * dB, dA * dB);
    for (int k = 0; k < dA; ++k)
        for (int l = 0; l < dA; ++l) m.block(k * dB, l * dB, dB, dB) = b(k, l);
    return m;
}

namespace {

struct Defect {
    double score = 0.0;
    std::pair<int, int> pair{-1, -1};
};

Defect worst_defect(const BlockOperators& b) {
    double largest = 0.0;
    for (const auto& c : b.blocks) largest = std::max(largest, c.norm());
    std::vector<int> live;
    for (int i = 0; i < static_cast<int>(b.blocks.size()); ++i) {
        if (b.blocks[static_cast<std::size_t>(i)].norm() > 1e-12 * largest) live.push_back(i);
    }
    Defect worst;
    for (std::size_t x = 0; x < live.size(); ++x) {
        const Matrix& c = b.blocks[static_cast<std::size_t>(live[x])];
        const double n2 = c.squaredNorm();
        const double normality = (c * c.adjoint() - c.adjoint() * c).norm() / n2;
        if (normality > worst.score) worst = {normality, {live[x], live[x]}};
        for (std::size_t y = x + 1; y < live.size(); ++y) {
            const double v = normalized_commutator(c, b.blocks[static_cast<std::size_t>(live[y])]);
            if (v > worst.score) worst = {v, {live[x], live[y]}};
        }
    }
    return worst;
}

} // namespace

double quantumness_on_B(const BipartiteState& s) { return worst_defect(block_decompose(s)).score; }

ClassicalityReport is_classical_on_B(const BipartiteState& s, double tol) {
    const BlockOperators b = block_decompose(s);
    const Defect worst = worst_defect(b);
    ClassicalityReport report;
    report.quantumness = worst.score;
    report.worst_pair = worst.pair;
    if (worst.score > tol) return report;
    auto sd = simultaneous_diagonalization(b.blocks, std::max(tol, 1e-12));
    if (sd) {
        report.is_classical_on_B = true;
        report.witness_basis = std::move(sd.basis);
    }
    return report;
}

BipartiteState measure_and_dephase(const BipartiteState& s, std::span<const PureState> basisB) {
    require_orthonormal(basisB, "measure_and_dephase");
    if (basisB.front().dim() != s.dimB() || static_cast<int>(basisB.size()) != s.dimB()) {
        throw DimensionMismatch("measure_and_dephase: need a complete basis of B");
    }
    const Matrix idA = Matrix::Identity(s.dimA(), s.dimA());
    Matrix out = Matrix::Zero(s.matrix().rows(), s.matrix().cols());
    for (const auto& b : basisB) {
        const Matrix p = tensor(idA, b.projector());
        out += p * s.matrix() * p;
    }
    return BipartiteState(s.dimA(), s.dimB(), DensityMatrix(out));
}

} // namespace qcorr
