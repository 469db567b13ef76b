#pragma once

// Gradient flows of height functions f(x) = <q, x> on an orbit M.
//
// With the homogeneous metric s that weights the root component v_alpha of a
// tangent vector by 1/alpha(x), the s-gradient of f is sum_alpha alpha(x) q_alpha
// and its flow lines are x(t) = exp(-t q).x(0). This module provides both
// sides of that statement (the closed form through the G-action and an ODE
// integration of the gradient field) and compares them.

#include "flagflow/lie_core.hpp"
#include "flagflow/numerics.hpp"
#include "flagflow/orbit_action.hpp"
#include "flagflow/roots.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace flagflow {

/// f(x) = <q, x> for q in p.
template <class Scalar>
class HeightFunction {
public:
    /// Throws PreconditionError unless q is self-adjoint.
    explicit HeightFunction(AmbientElement<Scalar> q);

    const AmbientElement<Scalar>& q() const { return q_; }
    double operator()(const OrbitPoint<Scalar>& x) const;
    double operator()(const Mat<Scalar>& x) const;

private:
    AmbientElement<Scalar> q_;
};

/// Per positive root weights s_alpha = 1 / alpha(x).
template <class Scalar>
struct MetricS {
    RootDecomposition<Scalar> dec;
    std::vector<double> weights;  ///< parallel to dec.positive_roots
};

template <class Scalar>
MetricS<Scalar> metric_s(const OrbitPoint<Scalar>& x);

/// Orthogonal projection of an ambient p-direction onto T_x M (drop the block diagonal in the eigenframe).
template <class Scalar>
Mat<Scalar> tangent_project(const Mat<Scalar>& v, const OrbitPoint<Scalar>& x);

/// Throws PreconditionError if v has a block-diagonal component above 1e-10 max(1, |v|).
template <class Scalar>
void require_tangent(const Mat<Scalar>& v, const RootDecomposition<Scalar>& dec, const char* what);

/// <v, w>_s = sum over positive roots of s_alpha <v_alpha, w_alpha>.
template <class Scalar>
double s_inner(const Mat<Scalar>& v, const Mat<Scalar>& w, const OrbitPoint<Scalar>& x);

/// s-gradient of f at x: sector (i, j) of q in the eigenframe scaled by |mu_i - mu_j|.
template <class Scalar>
Mat<Scalar> s_gradient(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x);

/// [x, [x, q]] (the normal-metric double bracket field).
template <class Scalar>
Mat<Scalar> double_bracket(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x);

/// exp(-t q).x0 at each time (see one_parameter_orbit).
template <class Scalar>
std::vector<OrbitPoint<Scalar>> closed_form_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0,
                                                 std::span<const double> times);

template <class Scalar>
struct NumericFlow {
    std::vector<Mat<Scalar>> states;  ///< raw integrator states at the sample times
    /// Largest eigenvalue deviation from the orbit spectrum seen after any
    /// accepted step, before re-snapping.
    double spectral_drift = 0.0;
    bool snapped = true;
    OdeStats stats;
};

/// Integrates x' = field(x) in the ambient space. With `snap` the exact
/// spectrum is restored after every accepted step (frame kept).
template <class Scalar>
NumericFlow<Scalar> integrate_on_orbit(const VectorField<Scalar>& field, const OrbitPoint<Scalar>& x0,
                                       std::span<const double> times, double tol, bool snap);

/// x' = s_gradient(f, x).
template <class Scalar>
NumericFlow<Scalar> numeric_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0,
                                 std::span<const double> times, double tol, bool snap = true);

template <class Scalar>
struct FlowReport {
    std::vector<double> sample_times;
    std::vector<Mat<Scalar>> closed_form;
    std::vector<Mat<Scalar>> integrated;
    std::vector<double> f_values;  ///< along closed_form
    double max_deviation = 0.0;    ///< Frobenius, relative to the spectral diameter
    double spectral_drift = 0.0;
    double tolerance = 0.0;        ///< verdict threshold applied to max_deviation
    bool f_monotone = true;
    bool pass = false;
    std::string notes;
};

/// Evenly spaced grid 0, t_end/(samples-1), ..., t_end.
std::vector<double> time_grid(double t_end, std::size_t samples);

/// True when values never drop by more than rounding (1e-12 relative).
bool nondecreasing(std::span<const double> values);

/// Max over samples of |a_k - b_k|_F / diameter.
template <class Scalar>
double max_relative_deviation(std::span<const Mat<Scalar>> a, std::span<const Mat<Scalar>> b, double diameter);

inline constexpr double kVerdictFactor = 50.0;
inline constexpr std::size_t kMinVerifySamples = 20;

/// Closed-form versus integrated s-gradient flow on a shared grid.
/// Passes iff max_deviation < 50 tol and f is nondecreasing along the closed form.
template <class Scalar>
FlowReport<Scalar> verify_gradient_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0, double t_end,
                                        double tol, std::size_t samples = 21, bool snap = true);

}  // namespace flagflow
