#pragma once

// Critical points of height functions, limits of their gradient flows, and the
// extrinsic-symmetric special case where the metric s is the ambient metric.

#include "flagflow/flow.hpp"
#include "flagflow/orbit_action.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace flagflow {

template <class Scalar>
struct CriticalSet {
    std::vector<OrbitPoint<Scalar>> points;
    std::vector<double> f_values;
    std::size_t count = 0;
    std::size_t maximizer = 0;          ///< index of the ascending-to-ascending pairing
    double max_gradient_norm = 0.0;     ///< largest |s_gradient| over the points
};

/// Relative eigenvalue gap below which q is rejected as non-generic.
inline constexpr double kGenericGapRelTol = 1e-6;

/// n! / prod m_i! for the block multiplicities.
std::size_t multinomial_count(std::span<const Block> blocks);

/// All points V diag(pi(spectrum)) V^H, pi a distinct permutation of the
/// spectrum and V the eigenframe of q. Point 0 pairs ascending eigenvalues of
/// x with ascending eigenvalues of q (the maximizer of f).
/// Throws GenericityError when q has an eigenvalue gap below 1e-6 of its spectral diameter.
template <class Scalar>
CriticalSet<Scalar> critical_points(const HeightFunction<Scalar>& f, const Eigen::VectorXd& spectrum);

template <class Scalar>
struct LimitReport {
    std::vector<double> times;
    std::vector<double> f_values;
    std::optional<std::size_t> limit;  ///< set when the endpoint is within 100 tol of a critical point
    std::size_t nearest = 0;
    double distance = 0.0;             ///< Frobenius distance of x(t_max) to the nearest critical point
    double cauchy_tail = 0.0;          ///< |f(t_max) - f(previous sample)|
    bool f_monotone = true;
    bool limit_is_maximizer = false;   ///< the nearest critical point is the maximizer
};

/// Runs exp(-t q).x0 to t_max and locates the endpoint among the critical points.
/// Requires t_max |q|_F <= 30. Non-convergence is reported, not thrown.
template <class Scalar>
LimitReport<Scalar> classify_limit(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0, double t_max,
                                   double tol, std::size_t samples = 101);

struct ExtrinsicReport {
    bool extrinsic_symmetric = false;
    std::vector<double> root_values;  ///< alpha(x) over positive roots
    double worst_offset = 0.0;        ///< max distance of a root value to 1
    std::string notes;
};

/// True iff every eigenvalue difference of x lies within tol of {-1, 0, 1}.
template <class Scalar>
ExtrinsicReport is_extrinsic_symmetric(const OrbitPoint<Scalar>& x, double tol = 1e-10);

template <class Scalar>
struct ExtrinsicFlowReport {
    FlowReport<Scalar> flow;
    double pointwise_residual = 0.0;  ///< max |s_gradient - tangent_project(q)| along the closed form
};

inline constexpr double kPointwiseTol = 1e-10;

/// Closed-form exp(-t q).x0 versus integration of the ambient-metric gradient
/// tangent_project(q). Throws PreconditionError unless x0 is extrinsic symmetric.
template <class Scalar>
ExtrinsicFlowReport<Scalar> verify_extrinsic_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0,
                                                  double t_end, double tol, std::size_t samples = 21,
                                                  bool snap = true);

struct HessianReport {
    Eigen::VectorXd eigenvalues;  ///< of the second-difference matrix in a (non-orthonormal) tangent frame
    std::size_t index = 0;        ///< number of negative eigenvalues
    std::size_t nullity = 0;
};

/// Exploratory: second differences of f along Ad(exp(s a)) curves, a running
/// over a basis of k transverse to the stabilizer. Only the signature is
/// meaningful. Not part of any verdict.
template <class Scalar>
HessianReport numerical_hessian(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x, double h = 1e-4);

}  // namespace flagflow
