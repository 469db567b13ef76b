#include "flagflow/numerics.hpp"

#include "flagflow/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace flagflow {

template <class Scalar>
void require_square(const Mat<Scalar>& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() < 1 || static_cast<std::size_t>(m.rows()) > kMaxDim) {
        std::ostringstream os;
        os << what << ": expected a square matrix with 1 <= n <= " << kMaxDim << ", got "
           << m.rows() << "x" << m.cols();
        throw PreconditionError(os.str());
    }
}

template <class Scalar>
Mat<Scalar> SpectralFrame<Scalar>::reconstruct() const {
    return frame * eigenvalues.cast<Scalar>().asDiagonal() * frame.adjoint();
}

namespace {

// u with |u| = 1 and u * v real positive.
template <class Scalar>
Scalar inverse_phase(Scalar v) {
    if constexpr (is_complex_v<Scalar>) {
        return std::conj(v) / std::abs(v);
    } else {
        return v < 0.0 ? -1.0 : 1.0;
    }
}

// Makes the first entry of largest magnitude in every column real positive.
template <class Scalar>
void canonicalize_phases(Mat<Scalar>& frame) {
    for (Eigen::Index j = 0; j < frame.cols(); ++j) {
        const double biggest = frame.col(j).cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < frame.rows(); ++i) {
            if (std::abs(frame(i, j)) >= biggest * (1.0 - 1e-10)) {
                frame.col(j) *= inverse_phase(frame(i, j));
                break;
            }
        }
    }
}

template <class Scalar>
SpectralFrame<Scalar> self_adjoint_eig_impl(const Mat<Scalar>& a, const char* what) {
    require_square(a, what);
    const double scale = a.norm();
    const double asym = (a - a.adjoint()).norm();
    if (asym > 1e-12 * scale) {
        std::ostringstream os;
        os << what << ": input is not self-adjoint (residual " << asym << ", norm " << scale << ")";
        throw PreconditionError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(hermitian_part<Scalar>(a));
    if (solver.info() != Eigen::Success) {
        throw Error(std::string(what) + ": eigensolver did not converge");
    }
    SpectralFrame<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
    canonicalize_phases(out.frame);
    return out;
}

}  // namespace

SpectralFrame<double> sym_eig(const RealMat& a) {
    return self_adjoint_eig_impl<double>(a, "sym_eig");
}

SpectralFrame<Complex> herm_eig(const ComplexMat& a) {
    return self_adjoint_eig_impl<Complex>(a, "herm_eig");
}

template <class Scalar>
SpectralFrame<Scalar> self_adjoint_eig(const Mat<Scalar>& a) {
    if constexpr (is_complex_v<Scalar>) {
        return herm_eig(a);
    } else {
        return sym_eig(a);
    }
}

template <class Scalar>
Mat<Scalar> qr_orthonormalize(const Mat<Scalar>& b) {
    const Eigen::Index rows = b.rows();
    const Eigen::Index cols = b.cols();
    if (cols < 1 || rows < cols || static_cast<std::size_t>(rows) > kMaxDim) {
        std::ostringstream os;
        os << "qr_orthonormalize: expected rows >= cols >= 1 and rows <= " << kMaxDim << ", got "
           << rows << "x" << cols;
        throw PreconditionError(os.str());
    }
    Eigen::HouseholderQR<Mat<Scalar>> qr(b);
    const Mat<Scalar>& packed = qr.matrixQR();
    Mat<Scalar> q = qr.householderQ() * Mat<Scalar>::Identity(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        const Scalar r = packed(j, j);
        const double col_norm = b.col(j).norm();
        // |R_jj| is the distance of column j from the span of the previous ones.
        if (!(std::abs(r) > 1e-12 * col_norm)) {
            std::ostringstream os;
            os << "qr_orthonormalize: column " << j
               << " is numerically dependent on the preceding columns";
            throw DegeneracyError(os.str(), static_cast<std::size_t>(j));
        }
        q.col(j) *= r / std::abs(r);
    }
    return q;
}

template <class Scalar>
Mat<Scalar> expm(const Mat<Scalar>& a) {
    require_square(a, "expm");
    return a.exp();
}

namespace {

using OdeState = std::vector<double>;

template <class Scalar>
constexpr Eigen::Index doubles_per_entry() {
    return is_complex_v<Scalar> ? 2 : 1;
}

template <class Scalar>
void pack(const Mat<Scalar>& m, OdeState& out) {
    const auto len = m.size() * doubles_per_entry<Scalar>();
    out.resize(static_cast<std::size_t>(len));
    const auto* src = reinterpret_cast<const double*>(m.data());
    std::copy(src, src + len, out.begin());
}

template <class Scalar>
void unpack(const OdeState& in, Mat<Scalar>& m) {
    std::copy(in.begin(), in.end(), reinterpret_cast<double*>(m.data()));
}

}  // namespace

template <class Scalar>
std::vector<Mat<Scalar>> ode_integrate(const VectorField<Scalar>& field,
                                       const Mat<Scalar>& x0,
                                       std::span<const double> sample_times,
                                       double tol,
                                       const StepHook<Scalar>& after_step,
                                       OdeStats* stats) {
    namespace odeint = boost::numeric::odeint;
    if (!(tol >= 1e-13 && tol <= 1e-3)) {
        throw PreconditionError("ode_integrate: tol must lie in [1e-13, 1e-3]");
    }
    for (std::size_t k = 0; k < sample_times.size(); ++k) {
        if (!(sample_times[k] >= 0.0) || !std::isfinite(sample_times[k]) ||
            (k > 0 && sample_times[k] < sample_times[k - 1])) {
            throw PreconditionError("ode_integrate: sample times must be finite, nonnegative and nondecreasing");
        }
    }

    const Eigen::Index rows = x0.rows();
    const Eigen::Index cols = x0.cols();
    Mat<Scalar> scratch_in(rows, cols);
    auto system = [&](const OdeState& y, OdeState& dydt, double /*t*/) {
        unpack(y, scratch_in);
        pack<Scalar>(field(scratch_in), dydt);
    };

    using Stepper = odeint::runge_kutta_dopri5<OdeState>;
    using Checker = odeint::default_error_checker<double, odeint::range_algebra, odeint::default_operations>;
    odeint::controlled_runge_kutta<Stepper> stepper{Checker(tol, 0.0, 1.0, 1.0)};

    OdeState y;
    pack(x0, y);
    Mat<Scalar> current = x0;
    std::vector<Mat<Scalar>> out;
    out.reserve(sample_times.size());

    double t = 0.0;
    double dt_suggest = 0.01 * std::pow(tol, 0.2);
    constexpr std::size_t kMaxSteps = 10'000'000;
    std::size_t steps = 0;
    OdeStats local;

    for (const double target : sample_times) {
        while (t < target) {
            if (++steps > kMaxSteps) {
                throw StiffnessError("ode_integrate: step budget exhausted", t, dt_suggest, current.norm());
            }
            const double remaining = target - t;
            const bool clamped = dt_suggest >= remaining;
            double dt = clamped ? remaining : dt_suggest;
            const auto res = stepper.try_step(system, y, t, dt);
            if (res == odeint::success) {
                ++local.accepted;
                if (clamped && t != target && std::abs(t - target) <= 4 * std::numeric_limits<double>::epsilon() * target) {
                    t = target;
                }
                // A clamped step says nothing about how large the next one may be.
                if (!clamped || dt > dt_suggest) dt_suggest = dt;
                if (after_step) {
                    unpack(y, current);
                    after_step(current);
                    pack(current, y);
                    stepper.reset();
                }
            } else {
                ++local.rejected;
                dt_suggest = dt;
                if (dt < 1e-14 * std::max(1.0, std::abs(t))) {
                    unpack(y, current);
                    throw StiffnessError("ode_integrate: step size underflow", t, dt, current.norm());
                }
            }
        }
        unpack(y, current);
        out.push_back(current);
    }
    if (stats) *stats = local;
    return out;
}

#define FLAGFLOW_INSTANTIATE(S)                                                              \
    template void require_square<S>(const Mat<S>&, const char*);                             \
    template struct SpectralFrame<S>;                                                        \
    template SpectralFrame<S> self_adjoint_eig<S>(const Mat<S>&);                            \
    template Mat<S> qr_orthonormalize<S>(const Mat<S>&);                                     \
    template Mat<S> expm<S>(const Mat<S>&);                                                  \
    template std::vector<Mat<S>> ode_integrate<S>(const VectorField<S>&, const Mat<S>&,      \
                                                  std::span<const double>, double,           \
                                                  const StepHook<S>&, OdeStats*);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
