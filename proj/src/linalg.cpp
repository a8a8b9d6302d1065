#include "qcorr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qcorr/error.hpp"

namespace qcorr {

double fro(const Matrix& m) { return m.norm(); }

void require_square(const Matrix& m, const std::string& what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DimensionMismatch(what + ": expected a non-empty square matrix, got " +
                                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
}

void require_same_dim(const Matrix& a, const Matrix& b, const std::string& what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        throw DimensionMismatch(what + ": dimensions " + std::to_string(a.rows()) + " and " +
                                std::to_string(b.rows()) + " differ");
    }
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    require_same_dim(a, b, "commutator");
    return a * b - b * a;
}

double normalized_commutator(const Matrix& a, const Matrix& b) {
    const double scale = a.norm() * b.norm();
    if (scale == 0.0) return 0.0;
    return commutator(a, b).norm() / scale;
}

bool is_hermitian(const Matrix& m, double herm_tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).norm() <= herm_tol * (1.0 + m.norm());
}

std::vector<std::pair<int, int>> Spectrum::clusters(double rel_tol) const {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(values.size());
    if (n == 0) return out;
    const double gap = rel_tol * (1.0 + (values(n - 1) - values(0)));
    int first = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || values(i) - values(i - 1) > gap) {
            out.emplace_back(first, i);
            first = i;
        }
    }
    return out;
}

Spectrum hermitian_eig(const Matrix& m, double herm_tol) {
    require_square(m, "hermitian_eig");
    if (!is_hermitian(m, herm_tol)) {
        throw InvalidInput("hermitian_eig: matrix is not Hermitian");
    }
    const int n = static_cast<int>(m.rows());
    Matrix a = 0.5 * (m + m.adjoint());
    Matrix v = Matrix::Identity(n, n);
    const double scale = a.norm();

    auto off_mass = [&] {
        double s = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                if (p != q) s += std::norm(a(p, q));
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
        if (off_mass() <= 1e-13 * scale) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const Complex b = a(p, q);
                const double absb = std::abs(b);
                if (absb <= 1e-300) continue;
                const Complex phase = std::conj(b / absb);  // e^{-i theta}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * absb);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J restricted to (p,q) = [[c, s], [-s e^{-i theta}, c e^{-i theta}]]
                const Complex jpp = c, jpq = s, jqp = -s * phase, jqq = c * phase;
                for (int k = 0; k < n; ++k) {
                    const Complex x = a(k, p), y = a(k, q);
                    a(k, p) = x * jpp + y * jqp;
                    a(k, q) = x * jpq + y * jqq;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex x = a(p, k), y = a(q, k);
                    a(p, k) = std::conj(jpp) * x + std::conj(jqp) * y;
                    a(q, k) = std::conj(jpq) * x + std::conj(jqq) * y;
                }
                for (int k = 0; k < n; ++k) {
                    const Complex x = v(k, p), y = v(k, q);
                    v(k, p) = x * jpp + y * jqp;
                    v(k, q) = x * jpq + y * jqq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
    Spectrum out{RealVector(n), Matrix(n, n)};
    for (int i = 0; i < n; ++i) {
        out.values(i) = a(order[i], order[i]).real();
        out.vectors.col(i) = v.col(order[i]);
    }
    return out;
}

double entropy_bits(const Matrix& rho) {
    const Spectrum sp = hermitian_eig(rho);
    double s = 0.0;
    for (double lambda : sp.values) {
        if (lambda > 0.0) s -= lambda * std::log2(lambda);
    }
    return std::max(s, 0.0);
}

bool is_normal(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double n = m.norm();
    return (m * m.adjoint() - m.adjoint() * m).norm() <= tol * (1.0 + n * n);
}

SimDiagResult simultaneous_diagonalization(std::span<const Matrix> ms, double tol) {
    if (ms.empty()) return {};
    const int d = static_cast<int>(ms.front().rows());
    for (const auto& m : ms) require_same_dim(ms.front(), m, "simultaneous_diagonalization");

    for (const auto& m : ms) {
        if (!is_normal(m, tol)) return {std::nullopt, SimDiagFailure::non_normal};
    }
    for (std::size_t i = 0; i < ms.size(); ++i) {
        for (std::size_t j = i + 1; j < ms.size(); ++j) {
            const double bound = tol * (ms[i].norm() * ms[j].norm());
            if ((ms[i] * ms[j] - ms[j] * ms[i]).norm() > bound) {
                return {std::nullopt, SimDiagFailure::non_commuting};
            }
        }
    }

    std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> normal;
    const Complex i_unit(0.0, 1.0);
    for (int attempt = 0; attempt < 5; ++attempt) {
        Matrix h = Matrix::Zero(d, d);
        for (const auto& m : ms) {
            const double n = m.norm();
            if (n == 0.0) continue;
            const Matrix re = 0.5 * (m + m.adjoint()) / n;
            const Matrix im = (m - m.adjoint()) / (2.0 * i_unit * n);
            h += normal(gen) * re + normal(gen) * im;
        }
        h = 0.5 * (h + h.adjoint());
        const Spectrum sp = hermitian_eig(h);
        bool ok = true;
        for (const auto& m : ms) {
            Matrix t = sp.vectors.adjoint() * m * sp.vectors;
            t.diagonal().setZero();
            if (t.norm() > tol * std::max(m.norm(), 1e-300)) {
                ok = false;
                break;
            }
        }
        if (ok) return {sp.vectors, SimDiagFailure::none};
    }
    return {std::nullopt, SimDiagFailure::not_converged};
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, int dA, int dB, Subsystem keep) {
    if (dA <= 0 || dB <= 0 || m.rows() != dA * dB || m.cols() != dA * dB) {
        throw DimensionMismatch("partial_trace: matrix is " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", dims " + std::to_string(dA) +
                                "x" + std::to_string(dB));
    }
    if (keep == Subsystem::A) {
        Matrix out = Matrix::Zero(dA, dA);
        for (int i = 0; i < dA; ++i)
            for (int j = 0; j < dA; ++j)
                for (int k = 0; k < dB; ++k) out(i, j) += m(i * dB + k, j * dB + k);
        return out;
    }
    Matrix out = Matrix::Zero(dB, dB);
    for (int i = 0; i < dA; ++i) out += m.block(i * dB, i * dB, dB, dB);
    return out;
}

Matrix expi_hermitian(const Matrix& h) {
    const Spectrum sp = hermitian_eig(h);
    Vector phases(sp.values.size());
    for (Eigen::Index i = 0; i < sp.values.size(); ++i) phases(i) = std::polar(1.0, sp.values(i));
    return sp.vectors * phases.asDiagonal() * sp.vectors.adjoint();
}

Matrix hermitian_from_coords(std::span<const double> x, int d) {
    if (static_cast<int>(x.size()) != d * d) {
        throw DimensionMismatch("hermitian_from_coords: expected d*d coordinates");
    }
    Matrix h(d, d);
    std::size_t k = 0;
    for (int i = 0; i < d; ++i) h(i, i) = x[k++];
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            h(i, j) = Complex(x[k], x[k + 1]);
            h(j, i) = std::conj(h(i, j));
            k += 2;
        }
    }
    return h;
}

std::vector<Matrix> hermitian_operator_basis(int d) {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(d * d));
    const double r = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        Matrix m = Matrix::Zero(d, d);
        m(i, i) = 1.0;
        out.push_back(std::move(m));
    }
    for (int i = 0; i < d; ++i) {
        for (int j = i + 1; j < d; ++j) {
            Matrix s = Matrix::Zero(d, d);
            s(i, j) = r;
            s(j, i) = r;
            out.push_back(std::move(s));
            Matrix a = Matrix::Zero(d, d);
            a(i, j) = Complex(0.0, r);
            a(j, i) = Complex(0.0, -r);
            out.push_back(std::move(a));
        }
    }
    return out;
}

std::vector<Matrix> matrix_units(int d) {
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(d * d));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            Matrix m = Matrix::Zero(d, d);
            m(j, k) = 1.0;
            out.push_back(std::move(m));
        }
    }
    return out;
}

} // namespace qcorr
