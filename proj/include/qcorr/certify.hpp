#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "qcorr/channels.hpp"
#include "qcorr/sampling.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

/// Multistart search settings shared by the commutativity test and the MSF
/// optimizer. `budget` counts objective evaluations across all starts.
struct SearchOptions {
    int budget = 20000;
    int starts = 32;
    /// Normalized violation above which a channel is declared not
    /// commutativity preserving.
    double tol = 1e-7;
    /// Stop starting new local searches once this violation is reached.
    double decisive = 1e-3;
};

struct CpVerdict {
    bool preserving = true;
    double max_violation = 0.0;
    /// Orthogonal inputs whose outputs fail to commute; set iff !preserving.
    std::optional<std::pair<PureState, PureState>> witness_pair;
    int evaluations = 0;
    /// A passing verdict means "no violation found within budget".
    bool budget_exhausted = false;
};

/// ||[L(phi), L(psi)]||_F / (||L(phi)||_F ||L(psi)||_F).
double commutator_violation(const KrausChannel& ch, const PureState& phi, const PureState& psi);

/// Maximizes the normalized output commutator over orthogonal pure pairs
/// (phi, psi) = exp(iH) (r0, r1), with a fresh Haar reference pair (r0, r1)
/// per start and H Hermitian (d^2 real coordinates) searched by Nelder-Mead.
/// The best pair is re-evaluated through the Kraus form and that value decides.
CpVerdict is_commutativity_preserving(const KrausChannel& ch, const SearchOptions& opts, Rng& rng);

struct CreationWitness {
    PureState phi;
    PureState psi;
    /// 1/2 |0><0| (x) |phi><phi| + 1/2 |1><1| (x) |psi><psi|.
    BipartiteState input;
    BipartiteState output;
    double input_quantumness = 0.0;
    double output_quantumness = 0.0;
};

/// Builds the two-term half-classical input from (phi, psi) and applies I (x) L.
/// Returns nothing unless the input is classical on B at 1e-9 and the output
/// quantumness exceeds `tol`.
std::optional<CreationWitness> witness_from_pair(const KrausChannel& ch, const PureState& phi,
                                                 const PureState& psi, double tol);

struct WitnessSearch {
    CpVerdict cp;
    std::optional<CreationWitness> witness;
};

WitnessSearch search_witness(const KrausChannel& ch, const SearchOptions& opts, Rng& rng);

std::optional<CreationWitness> creation_witness(const KrausChannel& ch, const SearchOptions& opts, Rng& rng);

/// <psi_2|phi_2> for the projections of qutrit vectors onto span{|0>, |1>}.
Complex reduced_overlap(const PureState& phi, const PureState& psi);

/// Creation criterion for the block-mixing qutrit channel with generic block
/// unitaries: the reduced vectors must overlap (g != 0) without being
/// proportional. Throws InvalidInput unless <phi|psi> = 0.
bool block_overlap_criterion(const PureState& phi, const PureState& psi);

inline constexpr double default_detector_tol = 1e-9;

bool is_unital(const KrausChannel& ch, double tol = default_detector_tol);

/// Entropy non-decrease on I/d and `n_samples` random inputs of random rank.
bool is_mixing_sampled(const KrausChannel& ch, int n_samples, double tol, Rng& rng);

/// Basis in which every output is diagonal, if one exists; found by
/// simultaneously diagonalizing the images of a Hermitian operator basis.
std::optional<Matrix> is_completely_decohering(const KrausChannel& ch, double tol = default_detector_tol);

struct IsotropicFit {
    double p = 0.0;
    GammaKind kind = GammaKind::unitary;
    /// Absent when p = 0, where every Gamma gives the same channel.
    std::optional<Matrix> u;
    double residual = 0.0;
};

/// Fits L = p Gamma + (1-p) I/d. p comes from the output spectrum of one
/// fixed generic pure input; Gamma (or Gamma composed with transpose) must then
/// have a rank-one Choi matrix, from which U is read off. Accepted iff the
/// refitted channel reproduces L on all matrix units within `tol`.
std::optional<IsotropicFit> is_isotropic(const KrausChannel& ch, double tol = 1e-8);

enum class ChannelClass { completely_decohering, unital_mixing, isotropic, creator, unresolved };

const char* to_string(ChannelClass c);

struct DecoheringEvidence {
    Matrix basis;
};

struct UnitalEvidence {
    double residual = 0.0;  // ||L(I) - I||_F
};

struct ClassificationVerdict {
    ChannelClass label = ChannelClass::unresolved;
    std::variant<std::monostate, DecoheringEvidence, UnitalEvidence, IsotropicFit, CreationWitness> evidence;
    CpVerdict cp;
    /// Label agrees with the commutativity test (Creator iff the test failed).
    bool consistent = false;
};

/// Qubit decision: unital -> UnitalMixing, else completely decohering, else
/// Creator with a witness.
ClassificationVerdict classify_qubit(const KrausChannel& ch, const SearchOptions& opts, Rng& rng);

/// Qutrit decision: completely decohering, else isotropic, else Creator.
ClassificationVerdict classify_qutrit(const KrausChannel& ch, const SearchOptions& opts, Rng& rng);

/// Dispatches on dimension; for d >= 4 runs the same detector sequence as
/// the qutrit case and reports `unresolved` for a channel that passes the
/// commutativity test without matching either family.
ClassificationVerdict classify(const KrausChannel& ch, const SearchOptions& opts, Rng& rng);

} // namespace qcorr
