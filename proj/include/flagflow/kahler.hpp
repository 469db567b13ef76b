#pragma once

// Adjoint orbits M = Ad(SU(n)) x inside k = su(n).
//
// A skew-Hermitian x corresponds to the Hermitian matrix -i x, an isotropy
// orbit point of SL(n, C)/SU(n) with the same blocks and root values. The
// flag engine runs on that Hermitian side; brackets and inner products are
// evaluated on the skew-Hermitian side.
//
// On the real root space k_alpha^r the complex structure is J = ad(x)/alpha(x),
// the Kaehler form is omega_x(v, w) = <v, ad(x)^{-1} w>, and the Kaehler metric
// (v, w) = omega_x(v, J w) weights root components by 1/alpha(x).

#include "flagflow/flow.hpp"
#include "flagflow/lie_core.hpp"
#include "flagflow/numerics.hpp"
#include "flagflow/orbit_action.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace flagflow {

using CompactContext = AlgebraContext<Complex>;

class CompactOrbitPoint {
public:
    /// x must be skew-Hermitian and traceless; the spectrum of -i x is grouped.
    static CompactOrbitPoint from_matrix(const CompactContext& ctx, const ComplexMat& x);

    /// i * frame * diag(spectrum) * frame^H.
    static CompactOrbitPoint from_frame(const CompactContext& ctx, const ComplexMat& frame,
                                        const Eigen::VectorXd& spectrum);

    /// i X for an isotropy orbit point X.
    static CompactOrbitPoint from_hermitian(OrbitPoint<Complex> hermitian);

    const CompactContext& context() const { return hermitian_.context(); }
    const ComplexMat& mat() const { return mat_; }
    AmbientElement<Complex> element() const { return AmbientElement<Complex>(context(), mat_); }

    /// -i x as an isotropy orbit point.
    const OrbitPoint<Complex>& hermitian() const { return hermitian_; }
    /// Ascending real mu with x ~ diag(i mu).
    const Eigen::VectorXd& spectrum() const { return hermitian_.spectrum(); }
    const std::vector<Block>& blocks() const { return hermitian_.blocks(); }

private:
    explicit CompactOrbitPoint(OrbitPoint<Complex> hermitian);

    OrbitPoint<Complex> hermitian_;
    ComplexMat mat_;
};

/// Orthogonal basis of T_x M, two skew-Hermitian matrices per frame entry of each positive root sector.
std::vector<ComplexMat> tangent_space_basis(const CompactOrbitPoint& x);

/// Throws PreconditionError unless v is skew-Hermitian and tangent at x.
void require_compact_tangent(const ComplexMat& v, const CompactOrbitPoint& x, const char* what);

/// J v = sum over positive roots of [x, v_alpha] / alpha(x).
ComplexMat complex_structure(const CompactOrbitPoint& x, const ComplexMat& v);

/// ad(x)^{-1} restricted to T_x M, applied sector by sector.
ComplexMat ad_inverse(const CompactOrbitPoint& x, const ComplexMat& w);

/// omega_x(v, w) = <v, ad(x)^{-1} w>.
double kahler_form(const CompactOrbitPoint& x, const ComplexMat& v, const ComplexMat& w);

/// (v, w) = omega_x(v, J w).
double kahler_metric(const CompactOrbitPoint& x, const ComplexMat& v, const ComplexMat& w);

/// Gradient of f(x) = <q, x> for the Kaehler metric, -J [x, q].
ComplexMat kahler_gradient(const AmbientElement<Complex>& q, const CompactOrbitPoint& x);

/// exp(i t q).x0 at each time: the ascending flag of -i x0 transported by
/// exp(i t q), re-orthonormalized and respectralized.
std::vector<CompactOrbitPoint> compact_flow(const AmbientElement<Complex>& q, const CompactOrbitPoint& x0,
                                            std::span<const double> times);

/// ODE integration of x' = kahler_gradient(q, x); with `snap` the spectrum is
/// restored after every accepted step.
NumericFlow<Complex> numeric_compact_flow(const AmbientElement<Complex>& q, const CompactOrbitPoint& x0,
                                          std::span<const double> times, double tol, bool snap = true);

/// compact_flow versus numeric_compact_flow on a shared grid; verdict as for
/// verify_gradient_flow (deviation < 50 tol, f nondecreasing).
FlowReport<Complex> verify_kahler_flow(const AmbientElement<Complex>& q, const CompactOrbitPoint& x0, double t_end,
                                       double tol, std::size_t samples = 21, bool snap = true);

}  // namespace flagflow
