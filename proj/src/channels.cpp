#include "qcorr/channels.hpp"

#include <cmath>
#include <string>

#include "qcorr/error.hpp"

namespace qcorr {

Matrix KrausChannel::act(const Matrix& x) const {
    if (x.rows() != dim_ || x.cols() != dim_) {
        throw DimensionMismatch("channel of dimension " + std::to_string(dim_) +
                                " applied to a " + std::to_string(x.rows()) + "x" +
                                std::to_string(x.cols()) + " operator");
    }
    Matrix out = Matrix::Zero(dim_, dim_);
    for (const auto& e : ops_) out.noalias() += e * x * e.adjoint();
    return out;
}

KrausChannel KrausChannel::with_kind(std::string kind) const {
    KrausChannel c = *this;
    c.kind_ = std::move(kind);
    return c;
}

Superoperator::Superoperator(const KrausChannel& ch) : dim_(ch.dim()), s_(Matrix::Zero(ch.dim() * ch.dim(), ch.dim() * ch.dim())) {
    const int d = dim_;
    for (const auto& e : ch.ops())
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b)
                for (int j = 0; j < d; ++j)
                    for (int k = 0; k < d; ++k) s_(a * d + b, j * d + k) += e(a, j) * std::conj(e(b, k));
}

Matrix Superoperator::act(const Matrix& x) const {
    const int d = dim_;
    Vector v(d * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) v(j * d + k) = x(j, k);
    const Vector w = s_ * v;
    Matrix out(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out(a, b) = w(a * d + b);
    return out;
}

Matrix Superoperator::act_pure(const Vector& phi) const {
    const int d = dim_;
    Vector v(d * d);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) v(j * d + k) = phi(j) * std::conj(phi(k));
    const Vector w = s_ * v;
    Matrix out(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) out(a, b) = w(a * d + b);
    return out;
}

namespace {

Spectrum eig_of(const Matrix& m) { return hermitian_eig(0.5 * (m + m.adjoint()), 1e-8); }

} // namespace

ChoiMatrix::ChoiMatrix(int dim, const Matrix& j) : dim_(dim) {
    if (dim <= 0 || j.rows() != dim * dim || j.cols() != dim * dim) {
        throw DimensionMismatch("ChoiMatrix: expected a d^2 x d^2 matrix");
    }
    if (!is_hermitian(j, 1e-9)) throw InvalidInput("ChoiMatrix: not Hermitian");
    j_ = 0.5 * (j + j.adjoint());
    const double lo = eig_of(j_).values(0);
    if (lo < -1e-8) {
        throw InvalidInput("ChoiMatrix: not completely positive (min eigenvalue " + std::to_string(lo) + ")");
    }
    const Matrix in_marginal = partial_trace(j_, dim, dim, Subsystem::B);
    if ((in_marginal - Matrix::Identity(dim, dim) / dim).norm() > 1e-9) {
        throw InvalidInput("ChoiMatrix: not trace preserving");
    }
}

double ChoiMatrix::min_eigenvalue() const { return eig_of(j_).values(0); }

int ChoiMatrix::rank(double cutoff) const {
    const Spectrum sp = eig_of(j_);
    int r = 0;
    for (double v : sp.values) r += v > cutoff ? 1 : 0;
    return r;
}

KrausChannel validate_cptp(std::vector<Matrix> ops, double tp_tol) {
    if (ops.empty()) throw InvalidInput("validate_cptp: no Kraus operators");
    const auto d = ops.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& e : ops) {
        require_same_dim(ops.front(), e, "validate_cptp");
        if (!e.allFinite()) throw InvalidInput("validate_cptp: non-finite Kraus entry");
        sum.noalias() += e.adjoint() * e;
    }
    const double residual = (sum - Matrix::Identity(d, d)).norm();
    if (residual > tp_tol) {
        throw InvalidInput("validate_cptp: sum E^dag E deviates from I by " + std::to_string(residual));
    }
    KrausChannel ch(static_cast<int>(d), std::move(ops), true);
    // Kraus form is CP by construction; the Choi check guards against
    // corrupted entries that still pass the trace condition.
    const double lo = eig_of(choi_of_map(ch.dim(), [&] {
                                 std::vector<Matrix> images;
                                 for (const auto& u : matrix_units(ch.dim())) images.push_back(ch.act(u));
                                 return images;
                             }()))
                          .values(0);
    if (lo < -1e-8) throw InvalidInput("validate_cptp: Choi matrix has eigenvalue " + std::to_string(lo));
    return ch;
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
    if (!ch.trace_preserving()) throw InvalidInput("apply: channel is not trace preserving");
    return DensityMatrix(ch.act(rho.matrix()));
}

BipartiteState apply_local_B(const KrausChannel& ch, const BipartiteState& s) {
    if (ch.dim() != s.dimB()) {
        throw DimensionMismatch("apply_local_B: channel dimension " + std::to_string(ch.dim()) +
                                " vs dim B " + std::to_string(s.dimB()));
    }
    if (!ch.trace_preserving()) throw InvalidInput("apply_local_B: channel is not trace preserving");
    const Matrix idA = Matrix::Identity(s.dimA(), s.dimA());
    Matrix out = Matrix::Zero(s.matrix().rows(), s.matrix().cols());
    for (const auto& e : ch.ops()) {
        const Matrix k = tensor(idA, e);
        out.noalias() += k * s.matrix() * k.adjoint();
    }
    return BipartiteState(s.dimA(), s.dimB(), DensityMatrix(out));
}

KrausChannel adjoint(const KrausChannel& ch) {
    std::vector<Matrix> ops;
    ops.reserve(ch.ops().size());
    Matrix sum = Matrix::Zero(ch.dim(), ch.dim());
    for (const auto& e : ch.ops()) {
        ops.push_back(e.adjoint());
        sum.noalias() += e * e.adjoint();
    }
    const bool tp = (sum - Matrix::Identity(ch.dim(), ch.dim())).norm() <= default_tp_tol;
    KrausChannel out(ch.dim(), std::move(ops), tp);
    out.kind_ = "adjoint";
    return out;
}

Matrix choi_of_map(int d, const std::vector<Matrix>& images_of_units) {
    Matrix j = Matrix::Zero(d * d, d * d);
    const auto units = matrix_units(d);
    for (std::size_t i = 0; i < units.size(); ++i) j += tensor(images_of_units[i], units[i]);
    return j / static_cast<double>(d);
}

ChoiMatrix choi_from_kraus(const KrausChannel& ch) {
    std::vector<Matrix> images;
    for (const auto& u : matrix_units(ch.dim())) images.push_back(ch.act(u));
    return ChoiMatrix(ch.dim(), choi_of_map(ch.dim(), images));
}

KrausChannel kraus_from_choi(const ChoiMatrix& j) {
    const int d = j.dim();
    const Spectrum sp = eig_of(j.matrix());
    std::vector<Matrix> ops;
    for (Eigen::Index i = sp.values.size() - 1; i >= 0; --i) {
        const double lambda = sp.values(i);
        if (lambda < 1e-12) break;
        const double scale = std::sqrt(d * lambda);
        Matrix e(d, d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) e(a, b) = scale * sp.vectors(a * d + b, i);
        ops.push_back(std::move(e));
    }
    return validate_cptp(std::move(ops), 1e-8);
}

PRange isotropic_p_range(int d, GammaKind kind) {
    const double dd = d;
    if (kind == GammaKind::unitary) return {-1.0 / (dd * dd - 1.0), 1.0};
    return {-1.0 / (dd - 1.0), 1.0 / (dd + 1.0)};
}

Matrix isotropic_choi(int d, GammaKind kind, const Matrix& u, double p) {
    std::vector<Matrix> images;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            Matrix e = Matrix::Zero(d, d);
            if (kind == GammaKind::unitary) e(j, k) = 1.0;
            else e(k, j) = 1.0;
            images.push_back(u * e * u.adjoint());
        }
    }
    const Matrix jg = choi_of_map(d, images);
    return p * jg + (1.0 - p) * Matrix::Identity(d * d, d * d) / static_cast<double>(d * d);
}

bool is_unitary(const Matrix& u, double tol) {
    if (u.rows() != u.cols() || u.rows() == 0) return false;
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

KrausChannel make_isotropic(int d, GammaKind kind, const Matrix& u, double p) {
    if (d < 1 || u.rows() != d || !is_unitary(u)) throw InvalidInput("make_isotropic: U must be a d x d unitary");
    if (!std::isfinite(p)) throw InvalidInput("make_isotropic: non-finite p");
    const Matrix j = isotropic_choi(d, kind, u, p);
    const double lo = eig_of(j).values(0);
    if (lo < -1e-12) {
        const PRange r = isotropic_p_range(d, kind);
        throw InvalidInput("make_isotropic: p = " + std::to_string(p) + " is outside [" +
                           std::to_string(r.lo) + ", " + std::to_string(r.hi) + "] for " + to_string(kind));
    }
    return kraus_from_choi(ChoiMatrix(d, j)).with_kind("isotropic");
}

KrausChannel make_depolarizing(int d, double p) {
    return make_isotropic(d, GammaKind::unitary, Matrix::Identity(d, d), p).with_kind("depolarizing");
}

KrausChannel make_completely_decohering(const Matrix& basis, std::span<const Matrix> povm) {
    if (!is_unitary(basis)) throw InvalidInput("make_completely_decohering: basis is not orthonormal");
    const auto d = basis.rows();
    if (povm.empty() || static_cast<Eigen::Index>(povm.size()) > d) {
        throw InvalidInput("make_completely_decohering: need between 1 and d effects");
    }
    Matrix sum = Matrix::Zero(d, d);
    std::vector<Matrix> ops;
    for (std::size_t i = 0; i < povm.size(); ++i) {
        const Matrix& f = povm[i];
        if (f.rows() != d || f.cols() != d) throw DimensionMismatch("make_completely_decohering: effect dimension");
        if (!is_hermitian(f, 1e-10)) throw InvalidInput("make_completely_decohering: effect is not Hermitian");
        const Spectrum sp = hermitian_eig(f, 1e-10);
        if (sp.values(0) < -1e-10) throw InvalidInput("make_completely_decohering: effect is not PSD");
        sum += f;
        for (Eigen::Index k = 0; k < d; ++k) {
            if (sp.values(k) <= 1e-14) continue;
            ops.push_back(std::sqrt(sp.values(k)) * basis.col(static_cast<Eigen::Index>(i)) *
                          sp.vectors.col(k).adjoint());
        }
    }
    if ((sum - Matrix::Identity(d, d)).norm() > 1e-9) {
        throw InvalidInput("make_completely_decohering: effects do not sum to the identity");
    }
    return validate_cptp(std::move(ops)).with_kind("completely_decohering");
}

KrausChannel make_dephasing(int d) {
    std::vector<Matrix> povm;
    for (int i = 0; i < d; ++i) {
        Matrix f = Matrix::Zero(d, d);
        f(i, i) = 1.0;
        povm.push_back(std::move(f));
    }
    return make_completely_decohering(Matrix::Identity(d, d), povm).with_kind("dephasing");
}

namespace {

void require_probability(std::span<const double> w, const char* what) {
    if (w.empty()) throw InvalidInput(std::string(what) + ": empty weights");
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidInput(std::string(what) + ": negative or non-finite weight");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidInput(std::string(what) + ": weights do not sum to 1");
}

} // namespace

KrausChannel make_unital_mixture(std::span<const double> weights, std::span<const Matrix> unitaries) {
    require_probability(weights, "make_unital_mixture");
    if (weights.size() != unitaries.size()) throw InvalidInput("make_unital_mixture: length mismatch");
    std::vector<Matrix> ops;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!is_unitary(unitaries[i])) throw InvalidInput("make_unital_mixture: operator is not unitary");
        if (weights[i] > 0.0) ops.push_back(std::sqrt(weights[i]) * unitaries[i]);
    }
    return validate_cptp(std::move(ops)).with_kind("unital_mixture");
}

KrausChannel make_block_mixing(std::span<const double> e_weights, std::span<const Matrix> block_unitaries) {
    if (e_weights.empty() || e_weights.size() != block_unitaries.size()) {
        throw InvalidInput("make_block_mixing: need one weight per block unitary");
    }
    double total = 0.0;
    for (double e : e_weights) {
        if (!(e >= 0.0)) throw InvalidInput("make_block_mixing: weights must be nonnegative");
        total += e * e;
    }
    if (std::abs(total - 1.0) > 1e-10) throw InvalidInput("make_block_mixing: squared weights do not sum to 1");
    std::vector<Matrix> ops;
    Matrix fixed = Matrix::Zero(3, 3);
    fixed(2, 2) = 1.0;
    ops.push_back(std::move(fixed));
    for (std::size_t i = 0; i < e_weights.size(); ++i) {
        if (block_unitaries[i].rows() != 2 || !is_unitary(block_unitaries[i])) {
            throw InvalidInput("make_block_mixing: block operators must be 2x2 unitaries");
        }
        Matrix e = Matrix::Zero(3, 3);
        e.topLeftCorner(2, 2) = e_weights[i] * block_unitaries[i];
        ops.push_back(std::move(e));
    }
    return validate_cptp(std::move(ops)).with_kind("block_mixing");
}

Matrix rotation2(double theta) {
    Matrix r(2, 2);
    r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return r;
}

const char* to_string(GammaKind k) { return k == GammaKind::unitary ? "unitary" : "transpose_unitary"; }

KrausChannel build_channel(const ChannelSpec& spec) {
    struct Visitor {
        KrausChannel operator()(const DepolarizingSpec& s) const { return make_depolarizing(s.dim, s.p); }
        KrausChannel operator()(const CompletelyDecoheringSpec& s) const {
            return make_completely_decohering(s.basis, s.povm);
        }
        KrausChannel operator()(const IsotropicSpec& s) const {
            return make_isotropic(static_cast<int>(s.u.rows()), s.kind, s.u, s.p);
        }
        KrausChannel operator()(const UnitalMixtureSpec& s) const { return make_unital_mixture(s.weights, s.unitaries); }
        KrausChannel operator()(const BlockMixingSpec& s) const { return make_block_mixing(s.e_weights, s.block_unitaries); }
        KrausChannel operator()(const RawKrausSpec& s) const { return validate_cptp(s.ops); }
    };
    return std::visit(Visitor{}, spec);
}

} // namespace qcorr
