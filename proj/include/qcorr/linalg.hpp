#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qcorr {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double herm = 1e-10;
inline constexpr double commutator = 1e-9;
} // namespace tol

/// Frobenius norm.
double fro(const Matrix& m);

Matrix commutator(const Matrix& a, const Matrix& b);

/// ||[a,b]||_F / (||a||_F ||b||_F); zero when either operand vanishes.
double normalized_commutator(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double herm_tol = tol::herm);

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues ascend; the columns
/// of `vectors` are the matching orthonormal eigenvectors.
struct Spectrum {
    RealVector values;
    Matrix vectors;

    /// Index ranges [first, last) of eigenvalues equal within
    /// 1e-8 * (1 + spectral range). The basis inside a cluster is arbitrary.
    std::vector<std::pair<int, int>> clusters(double rel_tol = 1e-8) const;
};

/// Cyclic complex Jacobi. Throws InvalidInput if `m` is not Hermitian
/// within herm_tol * (1 + ||m||_F).
Spectrum hermitian_eig(const Matrix& m, double herm_tol = tol::herm);

/// Von Neumann entropy in bits of a Hermitian PSD unit-trace matrix.
/// Callers pass validated density matrices; see DensityMatrix::entropy.
double entropy_bits(const Matrix& rho);

bool is_normal(const Matrix& m, double tol);

enum class SimDiagFailure { none, non_normal, non_commuting, not_converged };

struct SimDiagResult {
    std::optional<Matrix> basis;
    SimDiagFailure failure = SimDiagFailure::none;
    explicit operator bool() const { return basis.has_value(); }
};

/// Common unitary diagonalizer of a family of pairwise commuting normal
/// matrices. A random real combination of the Hermitian and anti-Hermitian
/// parts is diagonalized and every member is then checked for diagonality;
/// up to five combinations are tried. Coefficients come from a fixed-seed
/// generator so the result depends only on the inputs.
SimDiagResult simultaneous_diagonalization(std::span<const Matrix> ms, double tol);

/// Kronecker product, first factor is the major (block) index.
Matrix tensor(const Matrix& a, const Matrix& b);

enum class Subsystem { A, B };

/// Reduced operator of `m` on (dA*dB) space, keeping subsystem `keep`.
Matrix partial_trace(const Matrix& m, int dA, int dB, Subsystem keep);

/// exp(iH) for Hermitian H.
Matrix expi_hermitian(const Matrix& h);

/// Hermitian matrix from d*d real coordinates: diagonal entries first, then
/// (re, im) of the strict upper triangle in row-major order.
Matrix hermitian_from_coords(std::span<const double> x, int d);

/// Orthonormal Hermitian operator basis of d*d elements (diagonal units,
/// symmetric and antisymmetric off-diagonal pairs).
std::vector<Matrix> hermitian_operator_basis(int d);

/// Matrix units |j><k| in row-major order.
std::vector<Matrix> matrix_units(int d);

void require_square(const Matrix& m, const std::string& what);
void require_same_dim(const Matrix& a, const Matrix& b, const std::string& what);

} // namespace qcorr
