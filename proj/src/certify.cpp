#include "qcorr/certify.hpp"

#include <algorithm>
#include <cmath>

#include "qcorr/error.hpp"
#include "qcorr/optimize.hpp"

namespace qcorr {

double commutator_violation(const KrausChannel& ch, const PureState& phi, const PureState& psi) {
    return normalized_commutator(ch.act(phi.projector()), ch.act(psi.projector()));
}

CpVerdict is_commutativity_preserving(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    CpVerdict verdict;
    const int d = ch.dim();
    if (d < 2) return verdict;

    const Superoperator sop(ch);
    const int starts = std::max(1, opts.starts);
    const int per_start = std::max(d * d + 2, opts.budget / starts);
    const std::uint64_t base = splitmix64(static_cast<std::uint64_t>(rng.integer(0, 1 << 30)) ^ rng.seed());

    double best = -1.0;
    Vector best_phi, best_psi;
    int started = 0;
    for (int s = 0; s < starts && verdict.evaluations < opts.budget; ++s, ++started) {
        Rng srng = Rng::substream(base, static_cast<std::uint64_t>(s));
        const Matrix w = haar_unitary(d, srng);
        const Vector r0 = w.col(0), r1 = w.col(1);
        auto pair_at = [&](std::span<const double> x) {
            const Matrix u = expi_hermitian(hermitian_from_coords(x, d));
            return std::pair<Vector, Vector>{u * r0, u * r1};
        };
        const Objective f = [&](std::span<const double> x) {
            const auto [phi, psi] = pair_at(x);
            return -normalized_commutator(sop.act_pure(phi), sop.act_pure(psi));
        };
        NelderMeadOptions nm;
        nm.max_evals = std::min(per_start, opts.budget - verdict.evaluations);
        nm.initial_step = 0.5;
        const OptimumPoint opt = nelder_mead(f, std::vector<double>(static_cast<std::size_t>(d * d), 0.0), nm);
        verdict.evaluations += opt.evaluations;
        if (-opt.value > best) {
            best = -opt.value;
            std::tie(best_phi, best_psi) = pair_at(opt.x);
        }
        if (best >= opts.decisive) {
            ++started;
            break;
        }
    }

    // Recompute through the Kraus form; this value is authoritative.
    const PureState phi = PureState::normalized(best_phi);
    const PureState psi = PureState::normalized(best_psi);
    const double checked = commutator_violation(ch, phi, psi);
    verdict.max_violation = checked;
    verdict.preserving = !(checked > opts.tol);
    if (!verdict.preserving) {
        verdict.witness_pair.emplace(phi, psi);
    } else {
        verdict.budget_exhausted = started >= starts || verdict.evaluations >= opts.budget;
    }
    return verdict;
}

std::optional<CreationWitness> witness_from_pair(const KrausChannel& ch, const PureState& phi,
                                                 const PureState& psi, double tol) {
    if (phi.dim() != ch.dim() || psi.dim() != ch.dim()) throw DimensionMismatch("witness_from_pair: state dimension");
    const std::vector<double> w{0.5, 0.5};
    const std::vector<DensityMatrix> cond{PureState::basis(2, 0).density(), PureState::basis(2, 1).density()};
    const std::vector<PureState> basis{phi, psi};
    BipartiteState input = make_half_classical(w, cond, basis);
    const ClassicalityReport in_report = is_classical_on_B(input, 1e-9);
    if (!in_report.is_classical_on_B) return std::nullopt;
    BipartiteState output = apply_local_B(ch, input);
    const double q = quantumness_on_B(output);
    if (!(q > tol)) return std::nullopt;
    return CreationWitness{phi, psi, std::move(input), std::move(output), in_report.quantumness, q};
}

WitnessSearch search_witness(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    WitnessSearch out{is_commutativity_preserving(ch, opts, rng), std::nullopt};
    if (out.cp.witness_pair) {
        out.witness = witness_from_pair(ch, out.cp.witness_pair->first, out.cp.witness_pair->second, opts.tol);
    }
    return out;
}

std::optional<CreationWitness> creation_witness(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    return search_witness(ch, opts, rng).witness;
}

Complex reduced_overlap(const PureState& phi, const PureState& psi) {
    if (phi.dim() != 3 || psi.dim() != 3) throw DimensionMismatch("reduced_overlap: qutrit states required");
    const Vector& a = phi.amplitudes();
    const Vector& b = psi.amplitudes();
    return a(0) * std::conj(b(0)) + a(1) * std::conj(b(1));
}

bool block_overlap_criterion(const PureState& phi, const PureState& psi) {
    if (phi.dim() != 3 || psi.dim() != 3) throw DimensionMismatch("block_overlap_criterion: qutrit states required");
    if (std::abs(psi.amplitudes().dot(phi.amplitudes())) > 1e-10) {
        throw InvalidInput("block_overlap_criterion: states are not orthogonal");
    }
    const Complex g = reduced_overlap(phi, psi);
    const double na = phi.amplitudes().head(2).norm();
    const double nb = psi.amplitudes().head(2).norm();
    if (std::abs(g) <= 1e-12) return false;
    // Cauchy-Schwarz equality <=> reduced vectors are proportional.
    return std::norm(g) < (1.0 - 1e-10) * na * na * nb * nb;
}

bool is_unital(const KrausChannel& ch, double tol) {
    const Matrix id = Matrix::Identity(ch.dim(), ch.dim());
    return (ch.act(id) - id).norm() <= tol;
}

bool is_mixing_sampled(const KrausChannel& ch, int n_samples, double tol, Rng& rng) {
    const int d = ch.dim();
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(d);
    if (apply(ch, mixed).entropy() < mixed.entropy() - tol) return false;
    for (int i = 0; i < n_samples; ++i) {
        const DensityMatrix rho = random_density(d, rng.integer(1, d), rng);
        if (apply(ch, rho).entropy() < rho.entropy() - tol) return false;
    }
    return true;
}

std::optional<Matrix> is_completely_decohering(const KrausChannel& ch, double tol) {
    std::vector<Matrix> images;
    for (const auto& h : hermitian_operator_basis(ch.dim())) images.push_back(ch.act(h));
    auto sd = simultaneous_diagonalization(images, tol);
    if (!sd) return std::nullopt;
    return std::move(sd.basis);
}

namespace {

double max_action_distance(const KrausChannel& ch, double p, GammaKind kind, const Matrix* u) {
    const int d = ch.dim();
    double worst = 0.0;
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
            Matrix e = Matrix::Zero(d, d);
            e(j, k) = 1.0;
            Matrix model = Matrix::Zero(d, d);
            if (j == k) model += (1.0 - p) * Matrix::Identity(d, d) / static_cast<double>(d);
            if (u != nullptr) {
                const Matrix g = kind == GammaKind::unitary ? e : Matrix(e.transpose());
                model += p * (*u) * g * u->adjoint();
            }
            worst = std::max(worst, (ch.act(e) - model).norm());
        }
    }
    return worst;
}

std::optional<Matrix> rank_one_unitary(const Matrix& choi, int d) {
    if (!choi.allFinite() || !is_hermitian(choi, 1e-6)) return std::nullopt;
    const Spectrum sp = hermitian_eig(0.5 * (choi + choi.adjoint()), 1e-6);
    const Eigen::Index n = sp.values.size();
    if (std::abs(sp.values(n - 1) - 1.0) > 1e-4 || std::abs(sp.values(n - 2)) > 1e-4 || std::abs(sp.values(0)) > 1e-4) {
        return std::nullopt;
    }
    Matrix u(d, d);
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) u(a, b) = std::sqrt(static_cast<double>(d)) * sp.vectors(a * d + b, n - 1);
    Eigen::Index r = 0, c = 0;
    u.cwiseAbs().maxCoeff(&r, &c);
    u *= std::conj(u(r, c)) / std::abs(u(r, c));
    if (!is_unitary(u, 1e-6)) return std::nullopt;
    return u;
}

} // namespace

std::optional<IsotropicFit> is_isotropic(const KrausChannel& ch, double tol) {
    const int d = ch.dim();
    if (d < 2 || !is_unital(ch, std::max(tol, default_detector_tol))) return std::nullopt;

    Rng probe_rng(0x15070b1cULL);
    const PureState probe = random_pure(d, probe_rng);
    const RealVector l = hermitian_eig(ch.act(probe.projector()), 1e-8).values;

    auto spread = [&](int first, int last) { return l(last - 1) - l(first); };
    double p = 0.0;
    if (d == 2) {
        p = l(1) - l(0);
    } else if (spread(0, d) <= tol) {
        p = 0.0;
    } else if (spread(0, d - 1) <= tol) {
        p = 1.0 - d * l.head(d - 1).mean();
    } else if (spread(1, d) <= tol) {
        p = 1.0 - d * l.tail(d - 1).mean();
    } else {
        return std::nullopt;
    }

    if (std::abs(p) <= tol) {
        const double residual = max_action_distance(ch, 0.0, GammaKind::unitary, nullptr);
        if (residual > tol) return std::nullopt;
        return IsotropicFit{0.0, GammaKind::unitary, std::nullopt, residual};
    }

    std::vector<Matrix> gamma;
    for (const auto& e : matrix_units(d)) {
        Matrix g = ch.act(e);
        if (std::abs(e.trace()) > 0.0) g -= (1.0 - p) * Matrix::Identity(d, d) / static_cast<double>(d);
        gamma.push_back(g / p);
    }
    for (GammaKind kind : {GammaKind::unitary, GammaKind::transpose_unitary}) {
        std::vector<Matrix> images = gamma;
        if (kind == GammaKind::transpose_unitary) {
            for (int j = 0; j < d; ++j)
                for (int k = 0; k < d; ++k) images[static_cast<std::size_t>(j * d + k)] = gamma[static_cast<std::size_t>(k * d + j)];
        }
        const auto u = rank_one_unitary(choi_of_map(d, images), d);
        if (!u) continue;
        const double residual = max_action_distance(ch, p, kind, &*u);
        if (residual <= tol) return IsotropicFit{p, kind, *u, residual};
    }
    return std::nullopt;
}

const char* to_string(ChannelClass c) {
    switch (c) {
        case ChannelClass::completely_decohering: return "CompletelyDecohering";
        case ChannelClass::unital_mixing: return "UnitalMixing";
        case ChannelClass::isotropic: return "Isotropic";
        case ChannelClass::creator: return "Creator";
        case ChannelClass::unresolved: return "Unresolved";
    }
    return "?";
}

namespace {

void attach_creator(ClassificationVerdict& v, const KrausChannel& ch, double tol) {
    if (v.cp.witness_pair) {
        auto w = witness_from_pair(ch, v.cp.witness_pair->first, v.cp.witness_pair->second, tol);
        if (w) {
            v.label = ChannelClass::creator;
            v.evidence = std::move(*w);
            return;
        }
    }
    v.label = ChannelClass::unresolved;
}

} // namespace

ClassificationVerdict classify_qubit(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    if (ch.dim() != 2) throw DimensionMismatch("classify_qubit: channel dimension is not 2");
    ClassificationVerdict v;
    v.cp = is_commutativity_preserving(ch, opts, rng);
    const Matrix id = Matrix::Identity(2, 2);
    if (is_unital(ch)) {
        v.label = ChannelClass::unital_mixing;
        v.evidence = UnitalEvidence{(ch.act(id) - id).norm()};
    } else if (auto basis = is_completely_decohering(ch)) {
        v.label = ChannelClass::completely_decohering;
        v.evidence = DecoheringEvidence{std::move(*basis)};
    } else {
        attach_creator(v, ch, opts.tol);
    }
    v.consistent = (v.label == ChannelClass::creator) == !v.cp.preserving && v.label != ChannelClass::unresolved;
    return v;
}

namespace {

ClassificationVerdict classify_by_families(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    ClassificationVerdict v;
    v.cp = is_commutativity_preserving(ch, opts, rng);
    if (auto basis = is_completely_decohering(ch)) {
        v.label = ChannelClass::completely_decohering;
        v.evidence = DecoheringEvidence{std::move(*basis)};
    } else if (auto fit = is_isotropic(ch)) {
        v.label = ChannelClass::isotropic;
        v.evidence = std::move(*fit);
    } else {
        attach_creator(v, ch, opts.tol);
    }
    v.consistent = (v.label == ChannelClass::creator) == !v.cp.preserving && v.label != ChannelClass::unresolved;
    return v;
}

} // namespace

ClassificationVerdict classify_qutrit(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    if (ch.dim() != 3) throw DimensionMismatch("classify_qutrit: channel dimension is not 3");
    return classify_by_families(ch, opts, rng);
}

ClassificationVerdict classify(const KrausChannel& ch, const SearchOptions& opts, Rng& rng) {
    if (ch.dim() == 2) return classify_qubit(ch, opts, rng);
    return classify_by_families(ch, opts, rng);
}

} // namespace qcorr
