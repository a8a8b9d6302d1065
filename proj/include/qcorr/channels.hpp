#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Channel on a d-level system held as Kraus operators, rho -> sum_i E_i rho E_i^dag.
///
/// Instances come from validate_cptp (trace preserving) or from adjoint,
/// the one relaxed form, which is only guaranteed to be unital-if-the-source-is-TP.
class KrausChannel {
public:
    int dim() const { return dim_; }
    const std::vector<Matrix>& ops() const { return ops_; }
    bool trace_preserving() const { return trace_preserving_; }

    /// Linear action on an arbitrary d x d operator.
    Matrix act(const Matrix& x) const;

    const std::string& kind() const { return kind_; }
    KrausChannel with_kind(std::string kind) const;

private:
    friend KrausChannel validate_cptp(std::vector<Matrix> ops, double tp_tol);
    friend KrausChannel adjoint(const KrausChannel& ch);
    KrausChannel(int dim, std::vector<Matrix> ops, bool tp) : dim_(dim), ops_(std::move(ops)), trace_preserving_(tp) {}

    int dim_;
    std::vector<Matrix> ops_;
    bool trace_preserving_;
    std::string kind_ = "raw_kraus";
};

/// Dense d^2 x d^2 transfer matrix of a channel in row-major vectorization:
/// vec(L(X))[a*d+b] = sum_{j,k} S(a*d+b, j*d+k) X(j,k). Used in inner loops.
class Superoperator {
public:
    explicit Superoperator(const KrausChannel& ch);
    int dim() const { return dim_; }
    const Matrix& matrix() const { return s_; }
    Matrix act(const Matrix& x) const;
    /// L(|v><v|) for an unnormalized or normalized vector v.
    Matrix act_pure(const Vector& v) const;

private:
    int dim_;
    Matrix s_;
};

/// Choi matrix J = (L (x) I)(|Phi+><Phi+|), |Phi+> = sum_i |ii>/sqrt(d), unit
/// trace. The output leg is the first tensor factor.
class ChoiMatrix {
public:
    /// Validates Hermiticity, positivity (min eigenvalue >= -1e-8) and
    /// Tr_out J = I/d within 1e-9.
    explicit ChoiMatrix(int dim, const Matrix& j);

    int dim() const { return dim_; }
    const Matrix& matrix() const { return j_; }
    double min_eigenvalue() const;
    int rank(double cutoff = 1e-12) const;

private:
    int dim_;
    Matrix j_;
};

inline constexpr double default_tp_tol = 1e-9;

/// Checks sum E^dag E = I (Frobenius residual <= tp_tol) and Choi positivity.
KrausChannel validate_cptp(std::vector<Matrix> ops, double tp_tol = default_tp_tol);

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

/// (I_A (x) L)(rho_AB) with Kraus operators I (x) E_i.
BipartiteState apply_local_B(const KrausChannel& ch, const BipartiteState& s);

/// Kraus operators E_i^dag. Marked trace preserving only when sum E E^dag = I.
KrausChannel adjoint(const KrausChannel& ch);

/// Unnormalized Choi matrix sum_jk L(|j><k|) (x) |j><k| / d, without the
/// positivity validation of ChoiMatrix. Works for any linear map given as a
/// function on matrix units.
Matrix choi_of_map(int d, const std::vector<Matrix>& images_of_units);

ChoiMatrix choi_from_kraus(const KrausChannel& ch);

/// Kraus operators sqrt(d * lambda) * reshape(v) from the Choi eigenpairs,
/// eigenvalues below 1e-12 dropped.
KrausChannel kraus_from_choi(const ChoiMatrix& j);

enum class GammaKind { unitary, transpose_unitary };

struct PRange {
    double lo;
    double hi;
};

/// Interval of p for which p*Gamma + (1-p) I/d is completely positive.
PRange isotropic_p_range(int d, GammaKind kind);

/// Unvalidated Choi matrix of p * Gamma + (1-p) I/d; its smallest eigenvalue
/// is the complete-positivity margin.
Matrix isotropic_choi(int d, GammaKind kind, const Matrix& u, double p);

/// p * Gamma(rho) + (1-p) I/d with Gamma(rho) = U rho U^dag or U rho^T U^dag,
/// built through its Choi matrix. Throws InvalidInput when p leaves the
/// completely positive range.
KrausChannel make_isotropic(int d, GammaKind kind, const Matrix& u, double p);

/// p * rho + (1-p) I/d.
KrausChannel make_depolarizing(int d, double p);

/// rho -> sum_i Tr(F_i rho) |b_i><b_i|; `basis` columns are the b_i and
/// `povm` holds at most d PSD effects summing to the identity.
KrausChannel make_completely_decohering(const Matrix& basis, std::span<const Matrix> povm);

/// Full dephasing in the computational basis.
KrausChannel make_dephasing(int d);

/// Kraus operators sqrt(w_i) U_i.
KrausChannel make_unital_mixture(std::span<const double> weights, std::span<const Matrix> unitaries);

/// Qutrit channel with Kraus set {|2><2|} U {e_i u_i (|0><0| + |1><1|)}, the
/// u_i being 2x2 unitaries acting on span{|0>, |1>} and sum e_i^2 = 1.
KrausChannel make_block_mixing(std::span<const double> e_weights, std::span<const Matrix> block_unitaries);

/// Real rotation [[cos t, -sin t], [sin t, cos t]].
Matrix rotation2(double theta);

bool is_unitary(const Matrix& u, double tol = 1e-10);

// Parameterized constructors, one alternative per named family.
struct DepolarizingSpec { int dim; double p; };
struct CompletelyDecoheringSpec { Matrix basis; std::vector<Matrix> povm; };
struct IsotropicSpec { GammaKind kind; Matrix u; double p; };
struct UnitalMixtureSpec { std::vector<double> weights; std::vector<Matrix> unitaries; };
struct BlockMixingSpec { std::vector<double> e_weights; std::vector<Matrix> block_unitaries; };
struct RawKrausSpec { std::vector<Matrix> ops; };

using ChannelSpec = std::variant<DepolarizingSpec, CompletelyDecoheringSpec, IsotropicSpec,
                                 UnitalMixtureSpec, BlockMixingSpec, RawKrausSpec>;

/// Builds and labels the channel (kind() returns the family name).
KrausChannel build_channel(const ChannelSpec& spec);

const char* to_string(GammaKind k);

} // namespace qcorr
