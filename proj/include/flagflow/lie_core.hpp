#pragma once

// Matrix Lie algebras with a Cartan involution.
//
//   SL_REAL          g = sl(n, R),  K = SO(n),  k = skew-symmetric,  p = symmetric
//   SU_COMPLEXIFIED  g = sl(n, C),  K = SU(n),  k = skew-Hermitian,  p = Hermitian
//
// The involution is sigma(a) = -a^H in both cases. The positive definite inner
// product is b_scale * Re tr(a b^H), which is the trace form on p and its
// negative on k.

#include "flagflow/numerics.hpp"

#include <cstddef>
#include <string_view>

namespace flagflow {

enum class Family { SlReal, SuComplexified };

std::string_view family_name(Family f);

template <class Scalar>
class AlgebraContext {
public:
    static constexpr Family family = is_complex_v<Scalar> ? Family::SuComplexified : Family::SlReal;

    explicit AlgebraContext(std::size_t n, double b_scale = 1.0);

    std::size_t n() const { return n_; }
    double b_scale() const { return b_scale_; }

    /// Same family, dimension and form scale.
    bool operator==(const AlgebraContext&) const = default;

    bool in_k(const Mat<Scalar>& m, double rel_tol = 1e-12) const;
    bool in_p(const Mat<Scalar>& m, double rel_tol = 1e-12) const;

    /// b_scale * Re tr(a b^H) on raw matrices of this context's shape.
    double inner(const Mat<Scalar>& a, const Mat<Scalar>& b) const;
    double norm(const Mat<Scalar>& a) const;

private:
    std::size_t n_;
    double b_scale_;
};

/// A traceless matrix tied to its algebra context.
template <class Scalar>
class AmbientElement {
public:
    /// Validates shape and tracelessness (|tr| <= 1e-12 ||m||).
    AmbientElement(AlgebraContext<Scalar> ctx, Mat<Scalar> m);

    static AmbientElement zero(const AlgebraContext<Scalar>& ctx);

    const AlgebraContext<Scalar>& context() const { return ctx_; }
    const Mat<Scalar>& mat() const { return mat_; }

    AmbientElement operator+(const AmbientElement& other) const;
    AmbientElement operator-(const AmbientElement& other) const;
    AmbientElement operator-() const;
    AmbientElement operator*(double s) const;

private:
    struct Unchecked {};
    AmbientElement(Unchecked, AlgebraContext<Scalar> ctx, Mat<Scalar> m)
        : ctx_(std::move(ctx)), mat_(std::move(m)) {}

    AlgebraContext<Scalar> ctx_;
    Mat<Scalar> mat_;
};

template <class Scalar>
AmbientElement<Scalar> operator*(double s, const AmbientElement<Scalar>& a) {
    return a * s;
}

/// Throws ContextMismatchError when the contexts differ.
template <class Scalar>
void require_same_context(const AlgebraContext<Scalar>& a, const AlgebraContext<Scalar>& b);

/// ab - ba
template <class Scalar>
AmbientElement<Scalar> bracket(const AmbientElement<Scalar>& a, const AmbientElement<Scalar>& b);

/// Cartan involution, -a^H. Fixes k and negates p.
template <class Scalar>
AmbientElement<Scalar> sigma(const AmbientElement<Scalar>& a);

template <class Scalar>
AmbientElement<Scalar> project_k(const AmbientElement<Scalar>& a);

template <class Scalar>
AmbientElement<Scalar> project_p(const AmbientElement<Scalar>& a);

template <class Scalar>
double inner(const AmbientElement<Scalar>& a, const AmbientElement<Scalar>& b);

}  // namespace flagflow
