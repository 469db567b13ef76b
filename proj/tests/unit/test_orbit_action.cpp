#include "doctest.h"

#include "flagflow/errors.hpp"
#include "flagflow/orbit_action.hpp"
#include "flagflow/roots.hpp"

#include "../support.hpp"

#include <numbers>

using namespace flagflow;
using namespace testing_support;

namespace {

template <class Scalar>
Mat<Scalar> random_g(Gen& gen, std::size_t n, double log_norm) {
    Mat<Scalar> a = gen.traceless<Scalar>(n);
    return expm<Scalar>(a * (log_norm / a.norm()));
}

/// Projectors onto the leading spans of each block prefix.
template <class Scalar>
std::vector<Mat<Scalar>> projector_chain(const FlagFrame<Scalar>& f) {
    std::vector<Mat<Scalar>> chain;
    Eigen::Index cols = 0;
    for (std::size_t m : f.block_sizes) {
        cols += static_cast<Eigen::Index>(m);
        const Mat<Scalar> lead = f.frame.leftCols(cols);
        chain.push_back(lead * lead.adjoint());
    }
    return chain;
}

}  // namespace

TEST_SUITE("orbit_action") {

TEST_CASE("orbit point constructors validate their input") {
    const AlgebraContext<double> ctx(3);
    CHECK_THROWS_AS(OrbitPoint<double>::from_matrix(ctx, mat({{0, 1, 0}, {0, 0, 0}, {0, 0, 0}})), PreconditionError);
    CHECK_THROWS_AS(OrbitPoint<double>::from_matrix(ctx, RealMat::Identity(3, 3)), PreconditionError);
    const RealMat x = vec({2, -1, -1}).asDiagonal();
    CHECK_NOTHROW(OrbitPoint<double>::with_spectrum(ctx, x, vec({-1, -1, 2})));
    CHECK_THROWS_AS(OrbitPoint<double>::with_spectrum(ctx, x, vec({-1.5, -0.5, 2})), PreconditionError);
    CHECK_THROWS_AS(OrbitPoint<double>::from_frame(ctx, 2 * RealMat::Identity(3, 3), vec({-1, 0, 1})),
                    PreconditionError);
    CHECK_THROWS_AS(OrbitPoint<double>::from_frame(ctx, RealMat::Identity(3, 3), vec({1, 0, -1})), PreconditionError);
    CHECK_THROWS_AS(OrbitPoint<double>::from_frame(ctx, RealMat::Identity(3, 3), vec({0, 1, 2})), PreconditionError);

    const auto p = OrbitPoint<double>::from_matrix(ctx, x);
    CHECK(p.spectrum().isApprox(vec({-1, -1, 2})));
    CHECK(p.spectral_diameter() == 3.0);
    CHECK(p.blocks().size() == 2);
}

TEST_CASE("nearest reattaches the declared spectrum") {
    Gen gen(1);
    const AlgebraContext<double> ctx(4);
    const Eigen::VectorXd s = gen.spectrum(4);
    const auto x = gen.orbit_point(ctx, s);
    const RealMat noisy = x.mat() + 1e-6 * gen.p_element<double>(4);
    const auto y = OrbitPoint<double>::nearest(ctx, noisy, s);
    CHECK((eigenvalues<double>(y.mat()) - s).norm() < 1e-14);
    CHECK((y.mat() - x.mat()).norm() < 1e-5);
}

TEST_CASE("ascending flag examples") {
    const AlgebraContext<double> c2(2);
    const auto f2 = ascending_flag(OrbitPoint<double>::from_matrix(c2, vec({1, -1}).asDiagonal()));
    CHECK(std::abs(std::abs(f2.frame(1, 0)) - 1.0) < 1e-15);
    CHECK(f2.block_sizes == std::vector<std::size_t>{1, 1});

    const AlgebraContext<double> c3(3);
    const auto f3 = ascending_flag(OrbitPoint<double>::from_matrix(c3, vec({2, -1, -1}).asDiagonal()));
    CHECK(f3.block_sizes == std::vector<std::size_t>{2, 1});
    const RealMat lead = f3.frame.leftCols(2);
    const RealMat plane = vec({0, 1, 1}).asDiagonal();
    CHECK((lead * lead.transpose() - plane).norm() < 1e-14);
}

TEST_CASE("flag of Ad(k)x is k times the flag of x (projector chains)") {
    Gen gen(2);
    for (std::size_t n = 2; n <= 6; ++n) {
        const AlgebraContext<double> ctx(n);
        const auto x = gen.orbit_point(ctx, n == 4 ? vec({-1, -1, 0.5, 1.5}) : gen.spectrum(n));
        const RealMat k = gen.special_unitary<double>(n);
        const auto moved = ascending_flag(k_act(k, x));
        FlagFrame<double> expected = ascending_flag(x);
        expected.frame = k * expected.frame;
        const auto a = projector_chain(moved), b = projector_chain(expected);
        REQUIRE(a.size() == b.size());
        for (std::size_t j = 0; j < a.size(); ++j) CHECK((a[j] - b[j]).norm() < 1e-12);
    }
}

TEST_CASE("group_act examples") {
    const AlgebraContext<double> ctx(2);
    const auto x = OrbitPoint<double>::from_matrix(ctx, vec({1, -1}).asDiagonal());
    CHECK((group_act<double>(RealMat::Identity(2, 2), x).mat() - x.mat()).norm() < 1e-15);
    CHECK((group_act<double>(mat({{1, 1}, {0, 1}}), x).mat() - mat({{0, -1}, {-1, 0}})).norm() < 1e-14);
    const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
    const RealMat rot = mat({{c, -s}, {s, c}});
    CHECK((group_act<double>(rot, x).mat() - mat({{0, 1}, {1, 0}})).norm() < 1e-14);
    CHECK((group_act<double>(rot, x).mat() - rot * x.mat() * rot.transpose()).norm() < 1e-14);
}

TEST_CASE("group_act and k_act reject elements outside the group") {
    const AlgebraContext<double> ctx(2);
    const auto x = OrbitPoint<double>::from_matrix(ctx, vec({1, -1}).asDiagonal());
    CHECK_THROWS_AS(group_act<double>(2 * RealMat::Identity(2, 2), x), PreconditionError);
    CHECK_THROWS_AS(group_act<double>(RealMat::Identity(3, 3), x), PreconditionError);
    CHECK_THROWS_AS(k_act<double>(mat({{1, 1}, {0, 1}}), x), PreconditionError);
    CHECK_THROWS_AS(k_act<double>(mat({{1, 0}, {0, -1}}), x), PreconditionError);
}

TEST_CASE("k_act examples") {
    Gen gen(3);
    for (std::size_t n = 2; n <= 6; ++n) {
        const AlgebraContext<double> ctx(n);
        const auto x = gen.orbit_point(ctx, gen.spectrum(n));
        CHECK((k_act<double>(RealMat::Identity(n, n), x).mat() - x.mat()).norm() < 1e-14);
        const RealMat k = gen.special_unitary<double>(n);
        CHECK((k_act(k, x).mat() - group_act(k, x).mat()).norm() < 1e-10);
        CHECK((k_act(k, x).mat() - k * x.mat() * k.transpose()).norm() < 1e-13);
    }
    // a rotation inside the degenerate eigenplane stabilizes x
    const AlgebraContext<double> ctx(3);
    const auto x = OrbitPoint<double>::from_matrix(ctx, vec({2, -1, -1}).asDiagonal());
    const double c = std::cos(0.7), s = std::sin(0.7);
    const RealMat k = mat({{1, 0, 0}, {0, c, -s}, {0, s, c}});
    CHECK((k * x.mat() - x.mat() * k).norm() < 1e-15);
    CHECK((k_act(k, x).mat() - x.mat()).norm() < 1e-14);
}

TEST_CASE("left action law") {
    Gen gen(4);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            const AlgebraContext<double> ctx(n);
            const auto x = gen.orbit_point(ctx, gen.spectrum(n));
            const RealMat g1 = random_g<double>(gen, n, gen.uniform(0, 1));
            const RealMat g2 = random_g<double>(gen, n, gen.uniform(0, 1));
            CHECK((group_act(g1, group_act(g2, x)).mat() - group_act<double>(g1 * g2, x).mat()).norm() < 1e-9);

            const AlgebraContext<Complex> cctx(n);
            const auto y = gen.orbit_point(cctx, gen.spectrum(n));
            const ComplexMat h1 = random_g<Complex>(gen, n, 1.0);
            const ComplexMat h2 = random_g<Complex>(gen, n, 1.0);
            CHECK((group_act(h1, group_act(h2, y)).mat() - group_act<Complex>(h1 * h2, y).mat()).norm() < 1e-9);
        }
    }
}

TEST_CASE("group_act is isospectral") {
    Gen gen(5);
    for (std::size_t n = 2; n <= 6; ++n) {
        const AlgebraContext<double> ctx(n);
        const Eigen::VectorXd s = gen.spectrum(n);
        const auto x = gen.orbit_point(ctx, s);
        const auto y = group_act<double>(random_g<double>(gen, n, 2.0), x);
        CHECK((eigenvalues<double>(y.mat()) - s).norm() < 1e-9);
        CHECK((y.mat() - y.mat().transpose()).norm() < 1e-14);
    }
}

TEST_CASE("group_act ignores the frame freedom inside blocks") {
    Gen gen(6);
    const std::vector<Eigen::VectorXd> spectra{vec({-1, -1, 2}), vec({-1, -1, 1, 1}), vec({-2, 0, 0, 0, 2})};
    for (const auto& s : spectra) {
        const std::size_t n = static_cast<std::size_t>(s.size());
        const AlgebraContext<double> ctx(n);
        const auto x = gen.orbit_point(ctx, s);
        const RealMat g = random_g<double>(gen, n, 1.0);
        FlagFrame<double> flag = ascending_flag(x);
        RealMat spin = RealMat::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (const auto& b : x.blocks()) {
            const auto m = static_cast<Eigen::Index>(b.multiplicity);
            spin.block(static_cast<Eigen::Index>(b.offset), static_cast<Eigen::Index>(b.offset), m, m) =
                gen.special_unitary<double>(b.multiplicity);
        }
        flag.frame = flag.frame * spin;
        const auto rotated = point_from_flag(ctx, transport_flag(g, flag), s);
        CHECK((rotated.mat() - group_act(g, x).mat()).norm() < 1e-10);
    }
}

TEST_CASE("K-transitivity consistency on the complex family") {
    Gen gen(7);
    for (std::size_t n = 2; n <= 5; ++n) {
        const AlgebraContext<Complex> ctx(n);
        const Eigen::VectorXd s = gen.spectrum(n);
        const auto x = gen.orbit_point(ctx, s);
        const ComplexMat k = gen.special_unitary<Complex>(n);
        const auto y = group_act(k, x);
        CHECK((eigenvalues<Complex>(y.mat()) - s).norm() < 1e-12);
        CHECK((y.mat() - k * x.mat() * k.adjoint()).norm() < 1e-10);
    }
}

TEST_CASE("one_parameter_orbit matches direct transport") {
    Gen gen(8);
    const AlgebraContext<double> ctx(4);
    const auto x = gen.orbit_point(ctx, gen.spectrum(4));
    const RealMat a = gen.traceless<double>(4);
    const std::vector<double> times{0.0, 0.3, 0.9, 1.5, 3.0};
    const auto path = one_parameter_orbit(a, x, times);
    REQUIRE(path.size() == times.size());
    CHECK((path[0].mat() - x.mat()).norm() < 1e-15);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const RealMat g = expm<double>(times[k] * a);
        CHECK((path[k].mat() - group_act(g, x).mat()).norm() < 1e-9);
    }
}

TEST_CASE("infinitesimal action examples") {
    Gen gen(9);
    const AlgebraContext<double> ctx(4);
    const auto x = gen.orbit_point(ctx, gen.spectrum(4));
    CHECK(infinitesimal_act(x.element(), x).norm() < 1e-9);

    for (int trial = 0; trial < 5; ++trial) {
        const AmbientElement<double> a(ctx, gen.k_element<double>(4));
        const RealMat bracket = a.mat() * x.mat() - x.mat() * a.mat();
        CHECK((infinitesimal_act(a, x) - bracket).norm() < 1e-14);
        CHECK((infinitesimal_act_fd(a, x) - bracket).norm() < 1e-8);
    }

    const AlgebraContext<double> c2(2);
    const auto y = OrbitPoint<double>::from_matrix(c2, mat({{0, 1}, {1, 0}}));
    const AmbientElement<double> minus_q(c2, mat({{-1, 0}, {0, 1}}));
    CHECK((infinitesimal_act(minus_q, y) - mat({{2, 0}, {0, -2}})).norm() < 1e-9);
}

}  // TEST_SUITE
