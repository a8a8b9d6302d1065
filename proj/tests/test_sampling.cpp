#include <doctest.h>

#include <cmath>

#include "qcorr/certify.hpp"
#include "qcorr/error.hpp"
#include "qcorr/sampling.hpp"

using namespace qcorr;

TEST_SUITE("sampling") {

TEST_CASE("seeded streams are reproducible and substreams differ") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
    Rng s0 = Rng::substream(42, 0), s0b = Rng::substream(42, 0), s1 = Rng::substream(42, 1);
    const double x0 = s0.uniform();
    CHECK(x0 == s0b.uniform());
    CHECK(x0 != s1.uniform());
    CHECK(Rng(7).split(3).seed() == Rng::substream(7, 3).seed());
    Rng h1(9), h2(9);
    CHECK((haar_unitary(4, h1) - haar_unitary(4, h2)).norm() == 0.0);
}

TEST_CASE("integer draws stay in range") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const int k = rng.integer(2, 5);
        CHECK(k >= 2);
        CHECK(k <= 5);
    }
}

TEST_CASE("Haar unitaries") {
    Rng rng(301);
    const Matrix one = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(one(0, 0)) - 1.0) < 1e-15);
    for (int d = 2; d <= 6; ++d) CHECK(is_unitary(haar_unitary(d, rng), 1e-12));
    double mean = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) mean += std::norm(haar_unitary(2, rng)(0, 0));
    mean /= n;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("Haar moments of a matrix entry at d = 3") {
    // |U_00|^2 is Beta(1, d-1): mean 1/d, second moment 2/(d(d+1)).
    Rng rng(302);
    const int n = 20000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = std::norm(haar_unitary(3, rng)(1, 2));
        m1 += x;
        m2 += x * x;
    }
    CHECK(m1 / n == doctest::Approx(1.0 / 3).epsilon(0.03));
    CHECK(m2 / n == doctest::Approx(2.0 / 12).epsilon(0.05));
}

TEST_CASE("Hilbert-Schmidt random states") {
    Rng rng(303);
    CHECK(random_density(3, 1, rng).entropy() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(random_density(3, 1, rng).purity() == doctest::Approx(1.0));
    CHECK_THROWS_AS(random_density(3, 4, rng), InvalidInput);
    // Full rank d = 2: E[Tr rho^2] = (d + rank)/(d rank + 1) = 4/5.
    const int n = 10000;
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += random_density(2, 2, rng).purity();
    CHECK(mean / n == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("random pure states and probabilities") {
    Rng rng(304);
    for (int i = 0; i < 50; ++i) {
        CHECK(random_pure(4, rng).amplitudes().norm() == doctest::Approx(1.0).epsilon(1e-14));
        const auto p = random_probability(5, rng);
        double s = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            s += x;
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("random channel samplers produce valid channels of the right family") {
    Rng rng(305);
    for (int t = 0; t < 30; ++t) {
        const int d = 2 + t % 3;
        const KrausChannel one = random_cptp(d, 1, rng);
        REQUIRE(one.ops().size() == 1);
        CHECK(is_unitary(one.ops()[0], 1e-10));
        CHECK(random_cptp(d, d * d, rng).trace_preserving());
        CHECK(is_unital(random_unital_mixture(d, 3, rng)));
        CHECK(is_completely_decohering(random_completely_decohering(d, 1 + t % d, rng)));
        const GammaKind kind = t % 2 ? GammaKind::unitary : GammaKind::transpose_unitary;
        CHECK(is_isotropic(random_isotropic(d, kind, rng)));
    }
}

TEST_CASE("commuting and orthogonal pairs") {
    Rng rng(306);
    for (int t = 0; t < 50; ++t) {
        const auto [a, b] = random_commuting_pair(3, rng);
        CHECK(commutator(a.matrix(), b.matrix()).norm() < 1e-12);
        const auto [phi, psi] = random_orthogonal_pure_pair(4, rng);
        CHECK(std::abs(phi.amplitudes().dot(psi.amplitudes())) < 1e-12);
    }
}

TEST_CASE("random bipartite and half-classical states") {
    Rng rng(307);
    const BipartiteState s = random_bipartite(2, 3, rng);
    CHECK(s.dimA() == 2);
    CHECK(s.dimB() == 3);
    CHECK(hermitian_eig(s.matrix()).values(0) > 0.0);
    CHECK_THROWS_AS(random_half_classical(2, 2, 3, rng), InvalidInput);
}

} // TEST_SUITE
