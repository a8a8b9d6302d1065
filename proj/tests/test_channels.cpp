#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qcorr/certify.hpp"
#include "qcorr/channels.hpp"
#include "qcorr/error.hpp"
#include "qcorr/sampling.hpp"

using namespace qcorr;

namespace {

Matrix sx() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
Matrix sz() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

KrausChannel identity_channel(int d) { return validate_cptp({Matrix::Identity(d, d)}); }

KrausChannel example_channel() {
    const std::vector<double> e{1 / std::numbers::sqrt2, 1 / std::numbers::sqrt2};
    const std::vector<Matrix> u{Matrix::Identity(2, 2), rotation2(std::numbers::pi / 4)};
    return make_block_mixing(e, u);
}

/// Direct definition of the isotropic map, independent of the Choi route.
Matrix isotropic_direct(const Matrix& rho, GammaKind kind, const Matrix& u, double p) {
    const int d = static_cast<int>(rho.rows());
    const Matrix in = kind == GammaKind::unitary ? rho : Matrix(rho.transpose());
    return p * u * in * u.adjoint() + (1 - p) * Matrix::Identity(d, d) * rho.trace() / static_cast<double>(d);
}

} // namespace

TEST_SUITE("channels") {

TEST_CASE("validate_cptp examples") {
    CHECK(identity_channel(2).trace_preserving());
    CHECK_THROWS_AS(validate_cptp({Matrix(sx() / std::sqrt(2.0))}), InvalidInput);
    CHECK_THROWS_AS(validate_cptp({}), InvalidInput);
    CHECK_THROWS_AS(validate_cptp({Matrix::Identity(2, 2), Matrix::Identity(3, 3)}), InvalidInput);
    Rng rng(201);
    for (int t = 0; t < 100; ++t) {
        const int d = 2 + t % 3;
        CHECK_NOTHROW(validate_cptp(random_cptp(d, 1 + t % (d * d), rng).ops()));
    }
}

TEST_CASE("apply") {
    Rng rng(202);
    const DensityMatrix rho = random_density(3, 3, rng);
    CHECK((apply(identity_channel(3), rho).matrix() - rho.matrix()).norm() < 1e-15);
    const KrausChannel dep0 = make_depolarizing(2, 0.0);
    for (int t = 0; t < 10; ++t) {
        const DensityMatrix r = random_density(2, 1 + t % 2, rng);
        CHECK((apply(dep0, r).matrix() - Matrix::Identity(2, 2) / 2.0).norm() < 1e-12);
    }
    const DensityMatrix two = PureState::basis(3, 2).density();
    CHECK((apply(example_channel(), two).matrix() - two.matrix()).norm() < 1e-14);
    CHECK_THROWS_AS(apply(identity_channel(2), rho), DimensionMismatch);
}

TEST_CASE("apply_local_B") {
    Rng rng(203);
    const BipartiteState s = random_bipartite(2, 3, rng);
    CHECK((apply_local_B(identity_channel(3), s).matrix() - s.matrix()).norm() < 1e-14);
    const DensityMatrix a = random_density(2, 2, rng), b = random_density(3, 3, rng);
    const KrausChannel ch = random_cptp(3, 4, rng);
    const BipartiteState prod(2, 3, DensityMatrix(tensor(a.matrix(), b.matrix())));
    CHECK((apply_local_B(ch, prod).matrix() - tensor(a.matrix(), apply(ch, b).matrix())).norm() < 1e-13);
    CHECK_THROWS_AS(apply_local_B(identity_channel(2), s), DimensionMismatch);
}

TEST_CASE("adjoint") {
    Rng rng(204);
    const Matrix u = haar_unitary(3, rng);
    const KrausChannel uc = validate_cptp({u});
    const KrausChannel adj = adjoint(uc);
    REQUIRE(adj.ops().size() == 1);
    CHECK((adj.ops()[0] - u.adjoint()).norm() < 1e-15);
    CHECK(adj.trace_preserving());
    // Hilbert-Schmidt duality Tr(A L(B)) = Tr(L*(A) B).
    const KrausChannel ch = random_cptp(3, 3, rng);
    const KrausChannel chd = adjoint(ch);
    CHECK_FALSE(chd.trace_preserving());
    for (int t = 0; t < 20; ++t) {
        const Matrix a = ginibre_matrix(3, 3, rng), b = ginibre_matrix(3, 3, rng);
        CHECK(std::abs((a * ch.act(b)).trace() - (chd.act(a) * b).trace()) < 1e-12);
    }
    CHECK_THROWS_AS(apply(chd, random_density(3, 3, rng)), InvalidInput);
}

TEST_CASE("Choi and Kraus round trip") {
    Rng rng(205);
    for (int t = 0; t < 100; ++t) {
        const int d = 2 + t % 3;
        const KrausChannel ch = random_cptp(d, 1 + t % (d * d), rng);
        const ChoiMatrix j = choi_from_kraus(ch);
        CHECK(j.matrix().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(j.min_eigenvalue() > -1e-12);
        const KrausChannel back = kraus_from_choi(j);
        CHECK(static_cast<int>(back.ops().size()) == j.rank());
        for (int k = 0; k < 5; ++k) {
            const Matrix x = ginibre_matrix(d, d, rng);
            CHECK((back.act(x) - ch.act(x)).norm() < 1e-10);
        }
    }
    CHECK(choi_from_kraus(random_cptp(3, 1, rng)).rank() == 1);
}

TEST_CASE("Choi rank census for env = d^2") {
    Rng rng(206);
    for (int t = 0; t < 20; ++t) CHECK(choi_from_kraus(random_cptp(3, 9, rng)).rank() == 9);
}

TEST_CASE("ChoiMatrix rejects invalid matrices") {
    CHECK_THROWS_AS(ChoiMatrix(2, Matrix::Identity(3, 3)), DimensionMismatch);
    Matrix neg = Matrix::Identity(4, 4) / 4.0;
    neg(0, 0) = -0.1;
    neg(1, 1) = 0.6;
    CHECK_THROWS_AS(ChoiMatrix(2, neg), InvalidInput);
    Matrix not_tp = Matrix::Zero(4, 4);
    not_tp(0, 0) = 1.0;
    CHECK_THROWS_AS(ChoiMatrix(2, not_tp), InvalidInput);
}

TEST_CASE("superoperator agrees with the Kraus form") {
    Rng rng(207);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + t % 3;
        const KrausChannel ch = random_cptp(d, d, rng);
        const Superoperator s(ch);
        const Matrix x = ginibre_matrix(d, d, rng);
        CHECK((s.act(x) - ch.act(x)).norm() < 1e-12);
        const Vector v = ginibre_matrix(d, 1, rng).col(0);
        CHECK((s.act_pure(v) - ch.act(v * v.adjoint())).norm() < 1e-12);
    }
}

TEST_CASE("isotropic p-ranges at d = 3") {
    Rng rng(208);
    const Matrix u = haar_unitary(3, rng);
    // Transpose case: [-1/(d-1), 1/(d+1)]. For the unitary case the
    // completely positive range is [-1/(d^2-1), 1]; -1/2 is not CP at d = 3.
    CHECK_NOTHROW(make_isotropic(3, GammaKind::transpose_unitary, u, 0.25));
    CHECK_THROWS_AS(make_isotropic(3, GammaKind::transpose_unitary, u, 0.26), InvalidInput);
    CHECK_NOTHROW(make_isotropic(3, GammaKind::transpose_unitary, u, -0.5));
    CHECK_THROWS_AS(make_isotropic(3, GammaKind::transpose_unitary, u, -0.51), InvalidInput);
    CHECK_NOTHROW(make_isotropic(3, GammaKind::unitary, u, -0.125));
    CHECK_THROWS_AS(make_isotropic(3, GammaKind::unitary, u, -0.126), InvalidInput);
    CHECK_THROWS_AS(make_isotropic(3, GammaKind::unitary, u, -0.5), InvalidInput);
    CHECK_THROWS_AS(make_isotropic(3, GammaKind::unitary, u, 1.01), InvalidInput);
    const PRange r = isotropic_p_range(3, GammaKind::unitary);
    CHECK(r.lo == doctest::Approx(-1.0 / 8));
    CHECK(r.hi == 1.0);
}

TEST_CASE("isotropic channel matches its defining formula") {
    Rng rng(209);
    for (int t = 0; t < 60; ++t) {
        const int d = 2 + t % 3;
        const GammaKind kind = t % 2 ? GammaKind::unitary : GammaKind::transpose_unitary;
        const PRange r = isotropic_p_range(d, kind);
        const double p = rng.uniform(r.lo, r.hi);
        const Matrix u = haar_unitary(d, rng);
        const KrausChannel ch = make_isotropic(d, kind, u, p);
        const Matrix x = ginibre_matrix(d, d, rng);
        CHECK((ch.act(x) - isotropic_direct(x, kind, u, p)).norm() < 1e-10);
    }
}

TEST_CASE("p = 1 with identity unitary is the identity channel") {
    Rng rng(210);
    const KrausChannel ch = make_isotropic(3, GammaKind::unitary, Matrix::Identity(3, 3), 1.0);
    const DensityMatrix rho = random_density(3, 3, rng);
    CHECK((apply(ch, rho).matrix() - rho.matrix()).norm() < 1e-12);
}

TEST_CASE("completely decohering constructor") {
    std::vector<Matrix> povm;
    for (int i = 0; i < 3; ++i) povm.push_back(PureState::basis(3, i).projector());
    const KrausChannel cd = make_completely_decohering(Matrix::Identity(3, 3), povm);
    const KrausChannel deph = make_dephasing(3);
    Rng rng(211);
    for (int t = 0; t < 10; ++t) {
        const Matrix x = ginibre_matrix(3, 3, rng);
        CHECK((cd.act(x) - deph.act(x)).norm() < 1e-14);
        Matrix expected = Matrix::Zero(3, 3);
        expected.diagonal() = x.diagonal();
        CHECK((deph.act(x) - expected).norm() < 1e-14);
    }
    const Matrix basis = haar_unitary(3, rng);
    const KrausChannel r = random_completely_decohering(3, 2, rng);
    for (int t = 0; t < 10; ++t) {
        const Matrix y = r.act(random_density(3, 3, rng).matrix());
        CHECK(normalized_commutator(y, r.act(random_density(3, 2, rng).matrix())) < 1e-12);
    }
    std::vector<Matrix> bad{Matrix::Identity(3, 3) * 0.5};
    CHECK_THROWS_AS(make_completely_decohering(basis, bad), InvalidInput);
    std::vector<Matrix> too_many(4, Matrix::Identity(3, 3) / 4.0);
    CHECK_THROWS_AS(make_completely_decohering(basis, too_many), InvalidInput);
}

TEST_CASE("unital mixtures") {
    const std::vector<double> w{0.5, 0.5};
    const std::vector<Matrix> us{Matrix::Identity(2, 2), sz()};
    const KrausChannel pf = make_unital_mixture(w, us);
    CHECK(is_unital(pf));
    Matrix x(2, 2);
    x << 1, 2, 3, 4;
    Matrix expected(2, 2);
    expected << 1, 0, 0, 4;
    CHECK((pf.act(x) - expected).norm() < 1e-14);
    const std::vector<double> one{1.0};
    const std::vector<Matrix> only{sx()};
    CHECK((make_unital_mixture(one, only).act(x) - sx() * x * sx()).norm() < 1e-14);
    const std::vector<Matrix> nonunitary{Matrix::Identity(2, 2), Matrix(2 * sz())};
    CHECK_THROWS_AS(make_unital_mixture(w, nonunitary), InvalidInput);
    const std::vector<double> bad{0.5, 0.6};
    CHECK_THROWS_AS(make_unital_mixture(bad, us), InvalidInput);
}

TEST_CASE("block-mixing example channel") {
    const KrausChannel ex = example_channel();
    CHECK(ex.trace_preserving());
    CHECK(is_unital(ex));
    // One block unitary: dephasing between span{|0>,|1>} and |2>.
    const std::vector<double> e{1.0};
    const std::vector<Matrix> u{Matrix::Identity(2, 2)};
    const KrausChannel single = make_block_mixing(e, u);
    Matrix x = Matrix::Ones(3, 3);
    Matrix expected = Matrix::Ones(3, 3);
    expected(0, 2) = expected(1, 2) = expected(2, 0) = expected(2, 1) = 0.0;
    CHECK((single.act(x) - expected).norm() < 1e-14);
    const std::vector<double> bad{0.5, 0.5};
    CHECK_THROWS_AS(make_block_mixing(bad, std::vector<Matrix>{Matrix::Identity(2, 2), Matrix::Identity(2, 2)}),
                    InvalidInput);
}

TEST_CASE("build_channel labels the family") {
    CHECK(build_channel(DepolarizingSpec{3, 0.5}).kind() == "depolarizing");
    CHECK(build_channel(IsotropicSpec{GammaKind::transpose_unitary, Matrix::Identity(2, 2), 0.2}).kind() == "isotropic");
    CHECK(build_channel(RawKrausSpec{{Matrix::Identity(2, 2)}}).kind() == "raw_kraus");
}

} // TEST_SUITE
