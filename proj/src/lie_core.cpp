#include "flagflow/lie_core.hpp"

#include "flagflow/errors.hpp"

#include <cmath>
#include <sstream>

namespace flagflow {

std::string_view family_name(Family f) {
    return f == Family::SlReal ? "sl_real" : "su_complexified";
}

template <class Scalar>
AlgebraContext<Scalar>::AlgebraContext(std::size_t n, double b_scale) : n_(n), b_scale_(b_scale) {
    if (n < 2 || n > kMaxDim) {
        std::ostringstream os;
        os << "algebra dimension n must satisfy 2 <= n <= " << kMaxDim << ", got " << n;
        throw PreconditionError(os.str());
    }
    if (!(b_scale > 0.0) || !std::isfinite(b_scale)) {
        throw PreconditionError("b_scale must be positive and finite");
    }
}

template <class Scalar>
bool AlgebraContext<Scalar>::in_k(const Mat<Scalar>& m, double rel_tol) const {
    return (m + m.adjoint()).norm() <= rel_tol * m.norm() * 2.0;
}

template <class Scalar>
bool AlgebraContext<Scalar>::in_p(const Mat<Scalar>& m, double rel_tol) const {
    return (m - m.adjoint()).norm() <= rel_tol * m.norm() * 2.0;
}

template <class Scalar>
double AlgebraContext<Scalar>::inner(const Mat<Scalar>& a, const Mat<Scalar>& b) const {
    return b_scale_ * std::real((a.array() * b.array().conjugate()).sum());
}

template <class Scalar>
double AlgebraContext<Scalar>::norm(const Mat<Scalar>& a) const {
    return std::sqrt(b_scale_) * a.norm();
}

template <class Scalar>
AmbientElement<Scalar>::AmbientElement(AlgebraContext<Scalar> ctx, Mat<Scalar> m)
    : ctx_(std::move(ctx)), mat_(std::move(m)) {
    const auto n = static_cast<Eigen::Index>(ctx_.n());
    if (mat_.rows() != n || mat_.cols() != n) {
        std::ostringstream os;
        os << "element shape " << mat_.rows() << "x" << mat_.cols() << " does not match algebra dimension " << n;
        throw PreconditionError(os.str());
    }
    const double tr = std::abs(mat_.trace());
    if (tr > 1e-12 * mat_.norm()) {
        std::ostringstream os;
        os << "element is not traceless (|trace| = " << tr << ")";
        throw PreconditionError(os.str());
    }
}

template <class Scalar>
AmbientElement<Scalar> AmbientElement<Scalar>::zero(const AlgebraContext<Scalar>& ctx) {
    const auto n = static_cast<Eigen::Index>(ctx.n());
    return AmbientElement(Unchecked{}, ctx, Mat<Scalar>::Zero(n, n));
}

template <class Scalar>
AmbientElement<Scalar> AmbientElement<Scalar>::operator+(const AmbientElement& other) const {
    require_same_context(ctx_, other.ctx_);
    return AmbientElement(Unchecked{}, ctx_, mat_ + other.mat_);
}

template <class Scalar>
AmbientElement<Scalar> AmbientElement<Scalar>::operator-(const AmbientElement& other) const {
    require_same_context(ctx_, other.ctx_);
    return AmbientElement(Unchecked{}, ctx_, mat_ - other.mat_);
}

template <class Scalar>
AmbientElement<Scalar> AmbientElement<Scalar>::operator-() const {
    return AmbientElement(Unchecked{}, ctx_, -mat_);
}

template <class Scalar>
AmbientElement<Scalar> AmbientElement<Scalar>::operator*(double s) const {
    return AmbientElement(Unchecked{}, ctx_, mat_ * s);
}

template <class Scalar>
void require_same_context(const AlgebraContext<Scalar>& a, const AlgebraContext<Scalar>& b) {
    if (!(a == b)) {
        std::ostringstream os;
        os << "algebra context mismatch: (n=" << a.n() << ", b_scale=" << a.b_scale() << ") vs (n=" << b.n()
           << ", b_scale=" << b.b_scale() << ")";
        throw ContextMismatchError(os.str());
    }
}

template <class Scalar>
AmbientElement<Scalar> bracket(const AmbientElement<Scalar>& a, const AmbientElement<Scalar>& b) {
    require_same_context(a.context(), b.context());
    Mat<Scalar> c = a.mat() * b.mat() - b.mat() * a.mat();
    // Rounding can leave a trace of order eps * |a||b|; remove it so the result stays in g.
    c.diagonal().array() -= c.trace() / static_cast<double>(c.rows());
    return AmbientElement<Scalar>(a.context(), std::move(c));
}

template <class Scalar>
AmbientElement<Scalar> sigma(const AmbientElement<Scalar>& a) {
    return AmbientElement<Scalar>(a.context(), -a.mat().adjoint());
}

template <class Scalar>
AmbientElement<Scalar> project_k(const AmbientElement<Scalar>& a) {
    return AmbientElement<Scalar>(a.context(), (a.mat() - a.mat().adjoint()) / 2.0);
}

template <class Scalar>
AmbientElement<Scalar> project_p(const AmbientElement<Scalar>& a) {
    return AmbientElement<Scalar>(a.context(), (a.mat() + a.mat().adjoint()) / 2.0);
}

template <class Scalar>
double inner(const AmbientElement<Scalar>& a, const AmbientElement<Scalar>& b) {
    require_same_context(a.context(), b.context());
    return a.context().inner(a.mat(), b.mat());
}

#define FLAGFLOW_INSTANTIATE(S)                                                                     \
    template class AlgebraContext<S>;                                                               \
    template class AmbientElement<S>;                                                               \
    template void require_same_context<S>(const AlgebraContext<S>&, const AlgebraContext<S>&);      \
    template AmbientElement<S> bracket<S>(const AmbientElement<S>&, const AmbientElement<S>&);      \
    template AmbientElement<S> sigma<S>(const AmbientElement<S>&);                                  \
    template AmbientElement<S> project_k<S>(const AmbientElement<S>&);                              \
    template AmbientElement<S> project_p<S>(const AmbientElement<S>&);                              \
    template double inner<S>(const AmbientElement<S>&, const AmbientElement<S>&);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
