#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "qcorr/linalg.hpp"

namespace qcorr {

/// Unit-trace positive semidefinite matrix.
///
/// Construction hermitizes the input, accepts a trace within 1e-8 of one and
/// renormalizes it exactly. Eigenvalues in [-1e-10, 0) are clamped to zero;
/// anything more negative is rejected with InvalidInput.
class DensityMatrix {
public:
    explicit DensityMatrix(const Matrix& m);

    static DensityMatrix maximally_mixed(int d);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double purity() const { return m_.cwiseAbs2().sum(); }
    double entropy() const { return entropy_bits(m_); }

private:
    Matrix m_;
};

/// Unit vector. The constructor accepts norms within 1e-8 of one and
/// renormalizes; `normalized` accepts any nonzero vector.
class PureState {
public:
    explicit PureState(const Vector& v);
    static PureState normalized(const Vector& v);
    static PureState basis(int d, int k);

    int dim() const { return static_cast<int>(v_.size()); }
    const Vector& amplitudes() const { return v_; }
    Matrix projector() const { return v_ * v_.adjoint(); }
    DensityMatrix density() const { return DensityMatrix(projector()); }

private:
    struct Trusted {};
    PureState(Vector v, Trusted) : v_(std::move(v)) {}
    Vector v_;
};

class BipartiteState {
public:
    BipartiteState(int dimA, int dimB, DensityMatrix joint);

    int dimA() const { return dimA_; }
    int dimB() const { return dimB_; }
    const DensityMatrix& joint() const { return joint_; }
    const Matrix& matrix() const { return joint_.matrix(); }

private:
    int dimA_;
    int dimB_;
    DensityMatrix joint_;
};

/// C_kl = <k|_A rho |l>_A, stored k-major.
struct BlockOperators {
    int dimA = 0;
    std::vector<Matrix> blocks;
    const Matrix& operator()(int k, int l) const { return blocks[static_cast<std::size_t>(k * dimA + l)]; }
};

struct ClassicalityReport {
    bool is_classical_on_B = false;
    std::optional<Matrix> witness_basis;  // columns are the basis vectors
    double quantumness = 0.0;
    /// Offending (block, block) indices into BlockOperators::blocks; equal
    /// indices mean a normality defect.
    std::pair<int, int> worst_pair{-1, -1};
};

inline constexpr double default_classical_tol = 1e-9;

/// sum_i p_i rho_A^i (x) |b_i><b_i|.
BipartiteState make_half_classical(std::span<const double> weights,
                                   std::span<const DensityMatrix> condA,
                                   std::span<const PureState> basisB);

BlockOperators block_decompose(const BipartiteState& s);

/// Inverse of block_decompose.
Matrix reassemble_blocks(const BlockOperators& blocks);

/// Commutator-defect score of the B blocks (0 exactly on states classical on
/// B) and, when it is within `tol`, a basis of B in which every block is
/// diagonal.
ClassicalityReport is_classical_on_B(const BipartiteState& s, double tol = default_classical_tol);

/// Quantumness score only; skips the basis search.
double quantumness_on_B(const BipartiteState& s);

/// sum_j (I (x) P_j) rho (I (x) P_j) for the rank-one projectors of `basisB`.
BipartiteState measure_and_dephase(const BipartiteState& s, std::span<const PureState> basisB);

/// Throws InvalidInput unless the vectors are orthonormal (Gram residual < 1e-10).
void require_orthonormal(std::span<const PureState> basis, const char* what);

std::vector<PureState> columns_as_states(const Matrix& u);

} // namespace qcorr
