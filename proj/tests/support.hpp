#pragma once
// Seeded generators and small oracles shared by the test binaries. They use
// Eigen directly rather than the library's own instance helpers.

#include "flagflow/numerics.hpp"
#include "flagflow/orbit_action.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

namespace testing_support {

using flagflow::Complex;
using flagflow::ComplexMat;
using flagflow::Mat;
using flagflow::RealMat;

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double normal() { return normal_(rng_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    std::size_t index(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }

    template <class Scalar>
    Scalar scalar() {
        if constexpr (flagflow::is_complex_v<Scalar>) {
            const double re = normal();
            return Complex(re, normal());
        } else {
            return normal();
        }
    }

    template <class Scalar>
    Mat<Scalar> gaussian(std::size_t rows, std::size_t cols) {
        Mat<Scalar> m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = scalar<Scalar>();
        return m;
    }

    template <class Scalar>
    Mat<Scalar> traceless(std::size_t n) {
        Mat<Scalar> m = gaussian<Scalar>(n, n);
        m.diagonal().array() -= m.trace() / static_cast<double>(n);
        return m;
    }

    /// Self-adjoint, traceless, unit Frobenius norm.
    template <class Scalar>
    Mat<Scalar> p_element(std::size_t n) {
        Mat<Scalar> m = traceless<Scalar>(n);
        m = (m + m.adjoint()).eval() / 2.0;
        m.diagonal().array() -= m.trace() / static_cast<double>(n);
        return m / m.norm();
    }

    /// Skew-adjoint, traceless, unit Frobenius norm.
    template <class Scalar>
    Mat<Scalar> k_element(std::size_t n) {
        Mat<Scalar> m = gaussian<Scalar>(n, n);
        m = (m - m.adjoint()).eval() / 2.0;
        m.diagonal().array() -= m.trace() / static_cast<double>(n);
        return m / m.norm();
    }

    /// Orthogonal / unitary with determinant 1.
    template <class Scalar>
    Mat<Scalar> special_unitary(std::size_t n) {
        Eigen::HouseholderQR<Mat<Scalar>> qr(gaussian<Scalar>(n, n));
        Mat<Scalar> q = qr.householderQ();
        const Scalar det = q.determinant();
        q.col(0) /= det;
        return q;
    }

    /// Ascending, zero trace, consecutive gaps at least `min_gap`.
    Eigen::VectorXd spectrum(std::size_t n, double min_gap = 0.05) {
        Eigen::VectorXd s(static_cast<Eigen::Index>(n));
        while (true) {
            for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = uniform(-1.0, 1.0);
            s.array() -= s.mean();
            std::sort(s.data(), s.data() + s.size());
            bool ok = true;
            for (Eigen::Index i = 1; i < s.size(); ++i) ok = ok && s(i) - s(i - 1) >= min_gap;
            if (ok) return s;
        }
    }

    template <class Scalar>
    flagflow::OrbitPoint<Scalar> orbit_point(const flagflow::AlgebraContext<Scalar>& ctx,
                                             const Eigen::VectorXd& spectrum) {
        return flagflow::OrbitPoint<Scalar>::from_frame(ctx, special_unitary<Scalar>(ctx.n()), spectrum);
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> normal_;
};

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline RealMat mat(std::initializer_list<std::initializer_list<double>> rows) {
    RealMat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

/// Orthogonal projector onto the column span of b.
template <class Scalar>
Mat<Scalar> projector(const Mat<Scalar>& b) {
    return b * (b.adjoint() * b).inverse() * b.adjoint();
}

/// Eigenvalues of a self-adjoint matrix, ascending, straight from Eigen.
template <class Scalar>
Eigen::VectorXd eigenvalues(const Mat<Scalar>& a) {
    return Eigen::SelfAdjointEigenSolver<Mat<Scalar>>(a).eigenvalues();
}

inline RealMat sl2_closed_form(double t) {
    const double th = std::tanh(2 * t);
    const double sh = 1.0 / std::cosh(2 * t);
    return mat({{th, sh}, {sh, -th}});
}

}  // namespace testing_support
