#include "flagflow/instances.hpp"

#include "flagflow/errors.hpp"

#include <algorithm>
#include <cmath>

namespace flagflow {

Eigen::VectorXd random_spectrum(Rng& rng, std::size_t n) {
    if (n < 2 || n > kMaxDim) throw PreconditionError("random_spectrum: need 2 <= n <= 64");
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    Eigen::VectorXd s(static_cast<Eigen::Index>(n));
    for (;;) {
        for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = uniform(rng);
        s.array() -= s.mean();
        std::sort(s.data(), s.data() + s.size());
        bool separated = true;
        for (Eigen::Index i = 1; i < s.size(); ++i) separated = separated && (s(i) - s(i - 1) >= kMinRandomGap);
        if (separated) return s;
    }
}

template <class Scalar>
Mat<Scalar> random_gaussian(Rng& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Mat<Scalar> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if constexpr (is_complex_v<Scalar>) {
                const double re = normal(rng);
                const double im = normal(rng);
                m(i, j) = Complex(re, im);
            } else {
                m(i, j) = normal(rng);
            }
        }
    }
    return m;
}

template <class Scalar>
Mat<Scalar> random_k(Rng& rng, std::size_t n) {
    Mat<Scalar> k = qr_orthonormalize<Scalar>(random_gaussian<Scalar>(rng, n, n));
    const Scalar det = k.determinant();
    k.col(0) /= det;  // |det| = 1
    return k;
}

namespace {

template <class Scalar>
Mat<Scalar> traceless(Mat<Scalar> m) {
    m.diagonal().array() -= m.trace() / static_cast<double>(m.rows());
    return m;
}

}  // namespace

template <class Scalar>
AmbientElement<Scalar> random_p(Rng& rng, const AlgebraContext<Scalar>& ctx) {
    Mat<Scalar> m = traceless<Scalar>(hermitian_part<Scalar>(random_gaussian<Scalar>(rng, ctx.n(), ctx.n())));
    return AmbientElement<Scalar>(ctx, m / m.norm());
}

template <class Scalar>
AmbientElement<Scalar> random_k_element(Rng& rng, const AlgebraContext<Scalar>& ctx) {
    const Mat<Scalar> g = random_gaussian<Scalar>(rng, ctx.n(), ctx.n());
    Mat<Scalar> m = traceless<Scalar>((g - g.adjoint()) / 2.0);
    return AmbientElement<Scalar>(ctx, m / m.norm());
}

template <class Scalar>
AmbientElement<Scalar> random_algebra_element(Rng& rng, const AlgebraContext<Scalar>& ctx, double norm) {
    Mat<Scalar> m = traceless<Scalar>(random_gaussian<Scalar>(rng, ctx.n(), ctx.n()));
    return AmbientElement<Scalar>(ctx, m * (norm / m.norm()));
}

template <class Scalar>
Mat<Scalar> random_g(Rng& rng, const AlgebraContext<Scalar>& ctx, double log_norm) {
    return expm<Scalar>(random_algebra_element(rng, ctx, log_norm).mat());
}

template <class Scalar>
OrbitPoint<Scalar> random_orbit_point(Rng& rng, const AlgebraContext<Scalar>& ctx, const Eigen::VectorXd& spectrum) {
    return OrbitPoint<Scalar>::from_frame(ctx, random_k<Scalar>(rng, ctx.n()), spectrum);
}

#define FLAGFLOW_INSTANTIATE(S)                                                                           \
    template Mat<S> random_gaussian<S>(Rng&, std::size_t, std::size_t);                                    \
    template Mat<S> random_k<S>(Rng&, std::size_t);                                                        \
    template AmbientElement<S> random_p<S>(Rng&, const AlgebraContext<S>&);                                \
    template AmbientElement<S> random_k_element<S>(Rng&, const AlgebraContext<S>&);                        \
    template AmbientElement<S> random_algebra_element<S>(Rng&, const AlgebraContext<S>&, double);          \
    template Mat<S> random_g<S>(Rng&, const AlgebraContext<S>&, double);                                   \
    template OrbitPoint<S> random_orbit_point<S>(Rng&, const AlgebraContext<S>&, const Eigen::VectorXd&);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
