#pragma once

// Seeded random instances: spectra, height functions, elements of K and G.

#include "flagflow/lie_core.hpp"
#include "flagflow/numerics.hpp"
#include "flagflow/orbit_action.hpp"

#include <cstdint>
#include <random>

namespace flagflow {

using Rng = std::mt19937_64;

/// Minimum gap accepted between consecutive entries of a random spectrum.
inline constexpr double kMinRandomGap = 1e-3;

/// Uniform on [-1, 1], shifted to zero trace, sorted ascending; redrawn while
/// any gap is below kMinRandomGap.
Eigen::VectorXd random_spectrum(Rng& rng, std::size_t n);

/// Entrywise standard Gaussian (complex: independent real and imaginary parts).
template <class Scalar>
Mat<Scalar> random_gaussian(Rng& rng, std::size_t rows, std::size_t cols);

/// Haar-distributed element of K (SO(n) or SU(n)).
template <class Scalar>
Mat<Scalar> random_k(Rng& rng, std::size_t n);

/// Gaussian, projected to p and made traceless, Frobenius norm 1.
template <class Scalar>
AmbientElement<Scalar> random_p(Rng& rng, const AlgebraContext<Scalar>& ctx);

/// Gaussian, projected to k and made traceless, Frobenius norm 1.
template <class Scalar>
AmbientElement<Scalar> random_k_element(Rng& rng, const AlgebraContext<Scalar>& ctx);

/// Gaussian traceless element of g scaled to Frobenius norm `norm`.
template <class Scalar>
AmbientElement<Scalar> random_algebra_element(Rng& rng, const AlgebraContext<Scalar>& ctx, double norm);

/// exp(a) for a random traceless a with |a|_F = log_norm (so det = 1).
template <class Scalar>
Mat<Scalar> random_g(Rng& rng, const AlgebraContext<Scalar>& ctx, double log_norm);

/// k diag(spectrum) k^H for a Haar-random k.
template <class Scalar>
OrbitPoint<Scalar> random_orbit_point(Rng& rng, const AlgebraContext<Scalar>& ctx, const Eigen::VectorXd& spectrum);

}  // namespace flagflow
