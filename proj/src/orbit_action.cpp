#include "flagflow/orbit_action.hpp"

#include "flagflow/errors.hpp"

#include <cmath>
#include <sstream>

namespace flagflow {

namespace {

template <class Scalar>
void require_in_p(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m) {
    if (!ctx.in_p(m)) {
        throw PreconditionError("orbit point must lie in p (self-adjoint)");
    }
}

template <class Scalar>
void require_unitary(const Mat<Scalar>& u, double tol, const char* what) {
    const auto n = u.cols();
    const double err = (u.adjoint() * u - Mat<Scalar>::Identity(n, n)).norm();
    if (err > tol) {
        std::ostringstream os;
        os << what << ": frame is not unitary (residual " << err << ")";
        throw PreconditionError(os.str());
    }
}

std::vector<Block> blocks_of_declared(const Eigen::VectorXd& spectrum) {
    return group_blocks(std::span<const double>(spectrum.data(), static_cast<std::size_t>(spectrum.size())));
}

}  // namespace

template <class Scalar>
OrbitPoint<Scalar>::OrbitPoint(AlgebraContext<Scalar> ctx, Mat<Scalar> mat, std::vector<Block> blocks,
                               SpectralFrame<Scalar> frame)
    : ctx_(std::move(ctx)), mat_(std::move(mat)), blocks_(std::move(blocks)), frame_(std::move(frame)) {}

template <class Scalar>
OrbitPoint<Scalar> OrbitPoint<Scalar>::from_matrix(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m) {
    AmbientElement<Scalar> checked(ctx, m);
    require_in_p(ctx, m);
    SpectralFrame<Scalar> sf = self_adjoint_eig<Scalar>(m);
    auto blocks = group_blocks(std::span<const double>(sf.eigenvalues.data(), static_cast<std::size_t>(sf.eigenvalues.size())));
    sf.eigenvalues = expand_blocks(blocks);
    return OrbitPoint(ctx, hermitian_part<Scalar>(m), std::move(blocks), std::move(sf));
}

template <class Scalar>
OrbitPoint<Scalar> OrbitPoint<Scalar>::with_spectrum(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m,
                                                     const Eigen::VectorXd& spectrum) {
    AmbientElement<Scalar> checked(ctx, m);
    require_in_p(ctx, m);
    if (spectrum.size() != m.rows()) throw PreconditionError("declared spectrum has the wrong length");
    auto blocks = blocks_of_declared(spectrum);
    SpectralFrame<Scalar> sf = self_adjoint_eig<Scalar>(m);
    const double diameter = spectrum.maxCoeff() - spectrum.minCoeff();
    const double drift = (sf.eigenvalues - spectrum).cwiseAbs().maxCoeff();
    if (drift > 1e-10 * std::max(diameter, 1e-300)) {
        std::ostringstream os;
        os << "matrix is not isospectral to the declared spectrum (max eigenvalue deviation " << drift << ")";
        throw PreconditionError(os.str());
    }
    sf.eigenvalues = expand_blocks(blocks);
    return OrbitPoint(ctx, hermitian_part<Scalar>(m), std::move(blocks), std::move(sf));
}

template <class Scalar>
OrbitPoint<Scalar> OrbitPoint<Scalar>::from_frame(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& frame,
                                                  const Eigen::VectorXd& spectrum) {
    const auto n = static_cast<Eigen::Index>(ctx.n());
    if (frame.rows() != n || frame.cols() != n || spectrum.size() != n) {
        throw PreconditionError("from_frame: frame and spectrum must match the algebra dimension");
    }
    require_unitary(frame, 1e-10, "from_frame");
    if (std::abs(spectrum.sum()) > 1e-12 * spectrum.cwiseAbs().sum()) {
        throw PreconditionError("from_frame: spectrum must sum to zero (traceless)");
    }
    auto blocks = blocks_of_declared(spectrum);
    SpectralFrame<Scalar> sf{expand_blocks(blocks), frame};
    Mat<Scalar> m = hermitian_part<Scalar>(sf.reconstruct());
    m.diagonal().array() -= m.trace() / static_cast<double>(n);
    return OrbitPoint(ctx, std::move(m), std::move(blocks), std::move(sf));
}

template <class Scalar>
OrbitPoint<Scalar> OrbitPoint<Scalar>::nearest(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m,
                                               const Eigen::VectorXd& spectrum) {
    if (spectrum.size() != m.rows()) throw PreconditionError("nearest: declared spectrum has the wrong length");
    const SpectralFrame<Scalar> sf = self_adjoint_eig<Scalar>(hermitian_part<Scalar>(m));
    return from_frame(ctx, sf.frame, spectrum);
}

template <class Scalar>
double OrbitPoint<Scalar>::spectral_diameter() const {
    return blocks_.back().value - blocks_.front().value;
}

template <class Scalar>
FlagFrame<Scalar> ascending_flag(const OrbitPoint<Scalar>& x) {
    FlagFrame<Scalar> flag{x.frame().frame, {}};
    for (const auto& b : x.blocks()) flag.block_sizes.push_back(b.multiplicity);
    return flag;
}

template <class Scalar>
FlagFrame<Scalar> transport_flag(const Mat<Scalar>& g, const FlagFrame<Scalar>& flag) {
    if (g.rows() != flag.frame.rows() || g.cols() != flag.frame.rows()) {
        throw PreconditionError("transport_flag: group element has the wrong shape");
    }
    return FlagFrame<Scalar>{qr_orthonormalize<Scalar>(g * flag.frame), flag.block_sizes};
}

template <class Scalar>
OrbitPoint<Scalar> point_from_flag(const AlgebraContext<Scalar>& ctx, const FlagFrame<Scalar>& flag,
                                   const Eigen::VectorXd& spectrum) {
    return OrbitPoint<Scalar>::from_frame(ctx, flag.frame, spectrum);
}

template <class Scalar>
OrbitPoint<Scalar> group_act(const Mat<Scalar>& g, const OrbitPoint<Scalar>& x) {
    require_square(g, "group_act");
    if (static_cast<std::size_t>(g.rows()) != x.context().n()) {
        throw PreconditionError("group_act: group element has the wrong dimension");
    }
    const Scalar det = g.determinant();
    const double scale = std::max(1.0, std::pow(g.norm() / std::sqrt(static_cast<double>(g.rows())), g.rows()));
    if (std::abs(det - Scalar(1.0)) > 1e-8 * scale) {
        std::ostringstream os;
        os << "group_act: group element must have determinant 1 (got " << det << ")";
        throw PreconditionError(os.str());
    }
    return point_from_flag(x.context(), transport_flag(g, ascending_flag(x)), x.spectrum());
}

template <class Scalar>
OrbitPoint<Scalar> k_act(const Mat<Scalar>& k, const OrbitPoint<Scalar>& x) {
    require_square(k, "k_act");
    if (static_cast<std::size_t>(k.rows()) != x.context().n()) {
        throw PreconditionError("k_act: group element has the wrong dimension");
    }
    require_unitary(k, 1e-10, "k_act");
    if (std::abs(k.determinant() - Scalar(1.0)) > 1e-10) {
        throw PreconditionError("k_act: element of K must have determinant 1");
    }
    Mat<Scalar> conj = hermitian_part<Scalar>(k * x.mat() * k.adjoint());
    return OrbitPoint<Scalar>::with_spectrum(x.context(), conj, x.spectrum());
}

template <class Scalar>
std::vector<OrbitPoint<Scalar>> one_parameter_orbit(const Mat<Scalar>& a, const OrbitPoint<Scalar>& x0,
                                                    std::span<const double> times) {
    require_square(a, "one_parameter_orbit");
    if (static_cast<std::size_t>(a.rows()) != x0.context().n()) {
        throw PreconditionError("one_parameter_orbit: generator has the wrong dimension");
    }
    const double rate = 2.0 * a.norm();
    std::vector<OrbitPoint<Scalar>> out;
    out.reserve(times.size());
    FlagFrame<Scalar> flag = ascending_flag(x0);
    double t_prev = 0.0;
    for (const double t : times) {
        if (!std::isfinite(t)) throw PreconditionError("one_parameter_orbit: sample times must be finite");
        const double delta = t - t_prev;
        if (delta != 0.0) {
            const auto pieces = std::max<long>(1, static_cast<long>(std::ceil(std::abs(delta) * rate / kMaxTransportStretch)));
            const double h = delta / static_cast<double>(pieces);
            const Mat<Scalar> g = expm<Scalar>(a * h);
            for (long k = 0; k < pieces; ++k) flag = transport_flag(g, flag);
        }
        out.push_back(point_from_flag(x0.context(), flag, x0.spectrum()));
        t_prev = t;
    }
    return out;
}

template <class Scalar>
Mat<Scalar> infinitesimal_act_fd(const AmbientElement<Scalar>& a, const OrbitPoint<Scalar>& x, double h) {
    require_same_context(a.context(), x.context());
    const Mat<Scalar> forward = group_act<Scalar>(expm<Scalar>(a.mat() * h), x).mat();
    const Mat<Scalar> backward = group_act<Scalar>(expm<Scalar>(a.mat() * (-h)), x).mat();
    return (forward - backward) / (2.0 * h);
}

template <class Scalar>
Mat<Scalar> infinitesimal_act(const AmbientElement<Scalar>& a, const OrbitPoint<Scalar>& x) {
    require_same_context(a.context(), x.context());
    const auto& ctx = a.context();
    if (ctx.in_k(a.mat(), 1e-14)) {
        return bracket(a, x.element()).mat();
    }
    return infinitesimal_act_fd(a, x);
}

#define FLAGFLOW_INSTANTIATE(S)                                                                        \
    template class OrbitPoint<S>;                                                                      \
    template FlagFrame<S> ascending_flag<S>(const OrbitPoint<S>&);                                     \
    template FlagFrame<S> transport_flag<S>(const Mat<S>&, const FlagFrame<S>&);                       \
    template OrbitPoint<S> point_from_flag<S>(const AlgebraContext<S>&, const FlagFrame<S>&,           \
                                              const Eigen::VectorXd&);                                 \
    template OrbitPoint<S> group_act<S>(const Mat<S>&, const OrbitPoint<S>&);                          \
    template OrbitPoint<S> k_act<S>(const Mat<S>&, const OrbitPoint<S>&);                              \
    template std::vector<OrbitPoint<S>> one_parameter_orbit<S>(const Mat<S>&, const OrbitPoint<S>&,              \
                                                               std::span<const double>);                        \
    template Mat<S> infinitesimal_act<S>(const AmbientElement<S>&, const OrbitPoint<S>&);              \
    template Mat<S> infinitesimal_act_fd<S>(const AmbientElement<S>&, const OrbitPoint<S>&, double);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
