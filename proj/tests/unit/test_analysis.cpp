#include "doctest.h"

#include "flagflow/analysis.hpp"
#include "flagflow/errors.hpp"

#include "../support.hpp"

#include <algorithm>
#include <numeric>

using namespace flagflow;
using namespace testing_support;

namespace {

std::size_t factorial(std::size_t n) { return n <= 1 ? 1 : n * factorial(n - 1); }

/// n! / prod m_i! counted from raw multiplicities, independent of the library.
std::size_t multinomial(const Eigen::VectorXd& sorted) {
    std::size_t denom = 1, run = 1;
    for (Eigen::Index i = 1; i <= sorted.size(); ++i) {
        if (i < sorted.size() && sorted(i) == sorted(i - 1)) {
            ++run;
        } else {
            denom *= factorial(run);
            run = 1;
        }
    }
    return factorial(static_cast<std::size_t>(sorted.size())) / denom;
}

template <class Scalar>
HeightFunction<Scalar> random_height(Gen& gen, std::size_t n) {
    return HeightFunction<Scalar>(AmbientElement<Scalar>(AlgebraContext<Scalar>(n), gen.p_element<Scalar>(n)));
}

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("critical points: two points for sl(2)") {
    const AlgebraContext<double> ctx(2);
    const HeightFunction<double> f(AmbientElement<double>(ctx, mat({{1, 0}, {0, -1}})));
    const auto set = critical_points(f, vec({-1, 1}));
    CHECK(set.count == 2);
    REQUIRE(set.f_values.size() == 2);
    CHECK(set.f_values[set.maximizer] == doctest::Approx(2.0));
    CHECK(*std::min_element(set.f_values.begin(), set.f_values.end()) == doctest::Approx(-2.0));
    CHECK((set.points[set.maximizer].mat() - mat({{1, 0}, {0, -1}})).norm() < 1e-15);
}

TEST_CASE("critical points: three points for (2,-1,-1)") {
    Gen gen(1);
    const auto f = random_height<double>(gen, 3);
    const auto set = critical_points(f, vec({-1, -1, 2}));
    CHECK(set.count == 3);
    CHECK(set.points.size() == 3);
    CHECK(set.max_gradient_norm < 1e-10);
    for (const auto& p : set.points) {
        CHECK(s_gradient(f, p).norm() < 1e-10);
        CHECK((eigenvalues<double>(p.mat()) - vec({-1, -1, 2})).norm() < 1e-13);
        // critical points commute with q
        CHECK((p.mat() * f.q().mat() - f.q().mat() * p.mat()).norm() < 1e-12);
    }
}

TEST_CASE("critical point counts match the multinomial formula") {
    Gen gen(2);
    const std::vector<Eigen::VectorXd> spectra{
        vec({-1, 1}),          vec({-1, 0, 1}),           vec({-1, -1, 2}),          vec({-1, -1, 1, 1}),
        vec({-3, 1, 1, 1}),    vec({-2, -1, 1, 2}),       vec({-2, 0, 0, 0, 2}),     vec({-2, -1, 0, 1, 2}),
        vec({-1, -1, 0, 1, 1}), vec({-1, -1, -1, 1, 1, 1}), vec({-5, 1, 1, 1, 1, 1}), vec({-3, -1, -1, 1, 1, 3})};
    for (const auto& s : spectra) {
        const std::size_t n = static_cast<std::size_t>(s.size());
        for (int family = 0; family < 2; ++family) {
            std::size_t count = 0;
            double worst = 0.0;
            if (family == 0) {
                const auto set = critical_points(random_height<double>(gen, n), s);
                count = set.count;
                worst = set.max_gradient_norm;
                CHECK(set.count == multinomial_count(decompose(set.points[0]).blocks));
            } else {
                const auto set = critical_points(random_height<Complex>(gen, n), s);
                count = set.count;
                worst = set.max_gradient_norm;
            }
            CAPTURE(s.transpose());
            CHECK(count == multinomial(s));
            CHECK(worst < 1e-10);
        }
    }
}

TEST_CASE("the rearrangement pairing maximizes f") {
    Gen gen(3);
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto f = random_height<double>(gen, n);
        const Eigen::VectorXd s = gen.spectrum(n);
        const auto set = critical_points(f, s);
        const Eigen::VectorXd qe = eigenvalues<double>(f.q().mat());
        CHECK(set.f_values[set.maximizer] == doctest::Approx(qe.dot(s)).epsilon(1e-12));
        for (double v : set.f_values) CHECK(v <= set.f_values[set.maximizer] + 1e-12);
    }
}

TEST_CASE("critical points refuse non-generic q") {
    const AlgebraContext<double> ctx(3);
    const HeightFunction<double> f(AmbientElement<double>(ctx, vec({1, -0.5, -0.5}).asDiagonal()));
    CHECK_THROWS_AS(critical_points(f, vec({-1, 0, 1})), GenericityError);
    CHECK_THROWS_AS(critical_points(f, vec({-1, 1})), PreconditionError);
}

TEST_CASE("classify_limit: starting at a critical point") {
    Gen gen(4);
    const auto f = random_height<double>(gen, 4);
    const auto set = critical_points(f, gen.spectrum(4));
    const auto r = classify_limit(f, set.points[3], 10.0, 1e-8);
    REQUIRE(r.limit.has_value());
    CHECK(*r.limit == 3);
    CHECK(r.distance < 1e-12);
    for (double v : r.f_values) CHECK(std::abs(v - r.f_values.front()) < 1e-13);
}

TEST_CASE("classify_limit: sl(2) worked case") {
    const AlgebraContext<double> ctx(2);
    const HeightFunction<double> f(AmbientElement<double>(ctx, mat({{1, 0}, {0, -1}})));
    const auto x0 = OrbitPoint<double>::from_matrix(ctx, mat({{0, 1}, {1, 0}}));
    const auto r = classify_limit(f, x0, 10.0, 1e-6);
    REQUIRE(r.limit.has_value());
    CHECK(r.limit_is_maximizer);
    CHECK(r.f_values.back() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.f_monotone);
    CHECK(r.cauchy_tail < 1e-6);
    CHECK_THROWS_AS(classify_limit(f, x0, 25.0, 1e-6), PreconditionError);
}

TEST_CASE("classify_limit: random n = 4 flows head for the maximizer") {
    std::size_t reached = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Gen gen(200 + seed);
        const AlgebraContext<double> ctx(4);
        const auto x0 = gen.orbit_point(ctx, gen.spectrum(4, 0.3));
        const HeightFunction<double> f(AmbientElement<double>(ctx, RealMat(vec({-1.5, -0.5, 0.5, 1.5}).asDiagonal()) / std::sqrt(5.0)));
        const auto r = classify_limit(f, x0, 60.0 / std::sqrt(5.0) * 0.999, 1e-6);
        CHECK(r.f_monotone);
        reached += r.limit_is_maximizer ? 1 : 0;
        if (r.limit) CHECK(r.limit_is_maximizer);
    }
    CHECK(reached == 20);
}

TEST_CASE("extrinsic detector examples") {
    const auto point = [](std::initializer_list<double> d) {
        const Eigen::VectorXd v = vec(d);
        return OrbitPoint<double>::from_matrix(AlgebraContext<double>(static_cast<std::size_t>(v.size())), v.asDiagonal());
    };
    const auto g = is_extrinsic_symmetric(point({0.5, 0.5, -0.5, -0.5}));
    CHECK(g.extrinsic_symmetric);
    CHECK(g.worst_offset < 1e-15);
    CHECK_FALSE(is_extrinsic_symmetric(point({2, -1, -1})).extrinsic_symmetric);
    const auto h = is_extrinsic_symmetric(point({1, 0, -1}));
    CHECK_FALSE(h.extrinsic_symmetric);
    CHECK(h.worst_offset == doctest::Approx(1.0));
    CHECK_FALSE(h.notes.empty());
}

TEST_CASE("extrinsic points are exactly those with unit metric weights") {
    Gen gen(5);
    const std::vector<Eigen::VectorXd> spectra{vec({-0.5, -0.5, 0.5, 0.5}), vec({-0.5, 0.5}), vec({-1, 0, 1}),
                                               vec({-0.75, 0.25, 0.25, 0.25}), vec({-1, -1, 2})};
    for (const auto& s : spectra) {
        const auto x = gen.orbit_point(AlgebraContext<double>(static_cast<std::size_t>(s.size())), s);
        const auto w = metric_s(x).weights;
        const bool unit = std::all_of(w.begin(), w.end(), [](double v) { return std::abs(v - 1.0) < 1e-10; });
        CHECK(is_extrinsic_symmetric(x).extrinsic_symmetric == unit);
    }
}

TEST_CASE("extrinsic flow on the Grassmannian") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Gen gen(300 + seed);
        const AlgebraContext<double> ctx(4);
        const auto x0 = gen.orbit_point(ctx, vec({-0.5, -0.5, 0.5, 0.5}));
        const auto f = random_height<double>(gen, 4);
        const auto r = verify_extrinsic_flow(f, x0, 2.0, 1e-9);
        CAPTURE(r.flow.max_deviation);
        CHECK(r.flow.pass);
        CHECK(r.pointwise_residual < 1e-10);
        CHECK((s_gradient(f, x0) - tangent_project<double>(f.q().mat(), x0)).norm() < 1e-10);
    }
    Gen gen(6);
    const auto y = OrbitPoint<double>::from_matrix(AlgebraContext<double>(3), vec({1, 0, -1}).asDiagonal());
    CHECK_THROWS_AS(verify_extrinsic_flow(random_height<double>(gen, 3), y, 1.0, 1e-9), PreconditionError);
}

TEST_CASE("negative control diag(1,0,-1): the (1,3) sector differs by alpha = 2") {
    Gen gen(7);
    const AlgebraContext<double> ctx(3);
    const auto x = OrbitPoint<double>::from_matrix(ctx, vec({1, 0, -1}).asDiagonal());
    const auto f = random_height<double>(gen, 3);
    const RealMat sg = s_gradient(f, x);
    const RealMat amb = tangent_project<double>(f.q().mat(), x);
    CHECK((sg - amb).norm() > 1e-3);
    CHECK(std::abs(sg(0, 2) - 2 * amb(0, 2)) < 1e-12);
    CHECK(std::abs(sg(0, 1) - amb(0, 1)) < 1e-12);
    CHECK(std::abs(sg(1, 2) - amb(1, 2)) < 1e-12);
}

TEST_CASE("numerical Hessian signatures on (2,-1,-1)") {
    Gen gen(8);
    const auto f = random_height<double>(gen, 3);
    const auto set = critical_points(f, vec({-1, -1, 2}));
    std::vector<std::size_t> indices;
    for (const auto& p : set.points) indices.push_back(numerical_hessian(f, p).index);
    std::sort(indices.begin(), indices.end());
    CHECK(indices == std::vector<std::size_t>{0, 1, 2});
    CHECK(numerical_hessian(f, set.points[set.maximizer]).index == 2);
}

}  // TEST_SUITE
