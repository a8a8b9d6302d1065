#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcorr/error.hpp"
#include "qcorr/sampling.hpp"
#include "qcorr/states.hpp"

using namespace qcorr;

namespace {

PureState ket(std::initializer_list<Complex> a) {
    Vector v(static_cast<Eigen::Index>(a.size()));
    Eigen::Index i = 0;
    for (Complex x : a) v(i++) = x;
    return PureState::normalized(v);
}

BipartiteState phi_plus(int d) {
    Vector v = Vector::Zero(d * d);
    for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
    return BipartiteState(d, d, DensityMatrix(v * v.adjoint()));
}

} // namespace

TEST_SUITE("states") {

TEST_CASE("DensityMatrix validation") {
    CHECK_NOTHROW(DensityMatrix(Matrix::Identity(2, 2) / 2.0));
    CHECK_THROWS_AS(DensityMatrix(Matrix::Identity(2, 2)), InvalidInput);
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.1;
    neg(1, 1) = -0.1;
    CHECK_THROWS_AS(DensityMatrix{neg}, InvalidInput);
    Matrix nonh = Matrix::Identity(2, 2) / 2.0;
    nonh(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityMatrix{nonh}, InvalidInput);
    // Tiny negative eigenvalues from rounding are clamped.
    Matrix tiny = Matrix::Zero(2, 2);
    tiny(0, 0) = 1.0 + 1e-11;
    tiny(1, 1) = -1e-11;
    const DensityMatrix r(tiny);
    CHECK(hermitian_eig(r.matrix()).values(0) >= 0.0);
    CHECK(r.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("PureState validation") {
    CHECK_THROWS_AS(PureState(Vector::Ones(2)), InvalidInput);
    CHECK_THROWS_AS(PureState::normalized(Vector::Zero(2)), InvalidInput);
    CHECK(PureState::basis(3, 2).amplitudes()(2) == Complex(1.0));
    CHECK_THROWS_AS(PureState::basis(3, 3), InvalidInput);
}

TEST_CASE("make_half_classical examples") {
    const std::vector<double> one{1.0};
    const std::vector<DensityMatrix> a0{PureState::basis(2, 0).density()};
    const std::vector<PureState> b0{PureState::basis(2, 0)};
    const BipartiteState prod = make_half_classical(one, a0, b0);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = 1.0;
    CHECK((prod.matrix() - expected).norm() < 1e-15);

    const std::vector<double> half{0.5, 0.5};
    const std::vector<DensityMatrix> a01{PureState::basis(2, 0).density(), PureState::basis(2, 1).density()};
    const std::vector<PureState> comp{PureState::basis(2, 0), PureState::basis(2, 1)};
    const BipartiteState cc = make_half_classical(half, a01, comp);
    CHECK(quantumness_on_B(cc) == 0.0);
    CHECK(is_classical_on_B(cc).is_classical_on_B);
}

TEST_CASE("make_half_classical rejects bad inputs") {
    const std::vector<DensityMatrix> a{DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(2)};
    const std::vector<PureState> comp{PureState::basis(2, 0), PureState::basis(2, 1)};
    const std::vector<double> bad_sum{0.5, 0.6};
    CHECK_THROWS_AS(make_half_classical(bad_sum, a, comp), InvalidInput);
    const std::vector<double> negative{1.5, -0.5};
    CHECK_THROWS_AS(make_half_classical(negative, a, comp), InvalidInput);
    const std::vector<PureState> nonorth{PureState::basis(2, 0), ket({1, 1})};
    const std::vector<double> half{0.5, 0.5};
    CHECK_THROWS_AS(make_half_classical(half, a, nonorth), InvalidInput);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(make_half_classical(one, a, comp), InvalidInput);
}

TEST_CASE("half-classical round trip on random inputs") {
    Rng rng(101);
    double worst = 0.0;
    for (int t = 0; t < 300; ++t) {
        const int dA = 1 + t % 3, dB = 2 + t % 3;
        const BipartiteState s = random_half_classical(dA, dB, 1 + rng.integer(0, dB - 1), rng);
        const ClassicalityReport r = is_classical_on_B(s);
        REQUIRE(r.is_classical_on_B);
        REQUIRE(r.witness_basis);
        worst = std::max(worst, r.quantumness);
        // Measuring in the recovered basis leaves the state unchanged.
        const auto basis = columns_as_states(*r.witness_basis);
        CHECK((measure_and_dephase(s, basis).matrix() - s.matrix()).norm() < 1e-9);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("block decomposition") {
    Rng rng(102);
    const DensityMatrix a = random_density(3, 3, rng), b = random_density(2, 2, rng);
    const BipartiteState prod(3, 2, DensityMatrix(tensor(a.matrix(), b.matrix())));
    const BlockOperators blocks = block_decompose(prod);
    REQUIRE(blocks.blocks.size() == 9);
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) CHECK((blocks(k, l) - a.matrix()(k, l) * b.matrix()).norm() < 1e-14);

    for (int t = 0; t < 50; ++t) {
        const BipartiteState s = random_bipartite(2 + t % 3, 2 + t % 2, rng);
        const BlockOperators c = block_decompose(s);
        Complex tr = 0.0;
        for (int k = 0; k < s.dimA(); ++k) tr += c(k, k).trace();
        CHECK(std::abs(tr - 1.0) < 1e-12);
        for (int k = 0; k < s.dimA(); ++k)
            for (int l = 0; l < s.dimA(); ++l) CHECK((c(l, k) - c(k, l).adjoint()).norm() < 1e-14);
        CHECK((reassemble_blocks(c) - s.matrix()).norm() < 1e-14);
    }
}

TEST_CASE("blocks of a half-classical state are diagonal in its basis") {
    Rng rng(103);
    const Matrix u = haar_unitary(3, rng);
    const auto basis = columns_as_states(u);
    const std::vector<double> w{0.2, 0.3, 0.5};
    const std::vector<DensityMatrix> a{random_density(2, 2, rng), random_density(2, 1, rng), random_density(2, 2, rng)};
    const BlockOperators c = block_decompose(make_half_classical(w, a, basis));
    for (const Matrix& blk : c.blocks) {
        Matrix r = u.adjoint() * blk * u;
        r.diagonal().setZero();
        CHECK(r.norm() < 1e-14);
    }
}

TEST_CASE("non-classical states") {
    const Matrix p0 = PureState::basis(2, 0).projector();
    const Matrix p1 = PureState::basis(2, 1).projector();
    const Matrix plus = ket({1, 1}).projector();
    const BipartiteState s(2, 2, DensityMatrix(0.5 * tensor(p0, p0) + 0.5 * tensor(p1, plus)));
    const ClassicalityReport r = is_classical_on_B(s);
    CHECK_FALSE(r.is_classical_on_B);
    CHECK_FALSE(r.witness_basis);
    CHECK(r.quantumness > 0.1);
    CHECK(oracle::min_disturbance_qubit_B(s.matrix(), 2) > 1e-3);

    const BipartiteState bell = phi_plus(2);
    const ClassicalityReport rb = is_classical_on_B(bell);
    CHECK_FALSE(rb.is_classical_on_B);
    CHECK(rb.quantumness > 0.1);
    CHECK(oracle::min_disturbance_qubit_B(bell.matrix(), 2) > 0.1);
}

TEST_CASE("measure_and_dephase") {
    const std::vector<PureState> comp{PureState::basis(2, 0), PureState::basis(2, 1)};
    const BipartiteState out = measure_and_dephase(phi_plus(2), comp);
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 0) = expected(3, 3) = 0.5;
    CHECK((out.matrix() - expected).norm() < 1e-15);
    const std::vector<PureState> partial{PureState::basis(2, 0)};
    CHECK_THROWS_AS(measure_and_dephase(phi_plus(2), partial), InvalidInput);
}

TEST_CASE("dephased states are classical on B") {
    Rng rng(104);
    for (int t = 0; t < 100; ++t) {
        const BipartiteState s = random_bipartite(2, 2 + t % 3, rng);
        const auto basis = columns_as_states(haar_unitary(s.dimB(), rng));
        const BipartiteState m = measure_and_dephase(s, basis);
        CHECK(is_classical_on_B(m).is_classical_on_B);
        CHECK_FALSE(is_classical_on_B(s).is_classical_on_B);
    }
}

TEST_CASE("classicality agrees with the minimal-disturbance oracle, dB = 2") {
    Rng rng(105);
    int disagreements = 0;
    for (int t = 0; t < 40; ++t) {
        const BipartiteState s = t % 2 == 0 ? random_half_classical(2, 2, 2, rng) : random_bipartite(2, 2, rng);
        const bool detector = is_classical_on_B(s).is_classical_on_B;
        const bool oracle_says = oracle::min_disturbance_qubit_B(s.matrix(), 2) < 1e-6;
        if (detector != oracle_says) ++disagreements;
    }
    CHECK(disagreements == 0);
}

TEST_CASE("quantumness is invariant under local unitaries") {
    Rng rng(106);
    for (int t = 0; t < 50; ++t) {
        const BipartiteState s = random_bipartite(2, 3, rng);
        const Matrix u = tensor(haar_unitary(2, rng), haar_unitary(3, rng));
        const BipartiteState r(2, 3, DensityMatrix(u * s.matrix() * u.adjoint()));
        // The score depends on the A-side basis only through block mixing, so
        // only the zero set is required to be invariant; B rotations keep it exactly.
        const Matrix ub = tensor(Matrix::Identity(2, 2), haar_unitary(3, rng));
        const BipartiteState rb(2, 3, DensityMatrix(ub * s.matrix() * ub.adjoint()));
        CHECK(quantumness_on_B(rb) == doctest::Approx(quantumness_on_B(s)).epsilon(1e-9));
        CHECK(is_classical_on_B(r).is_classical_on_B == is_classical_on_B(s).is_classical_on_B);
    }
}

} // TEST_SUITE
