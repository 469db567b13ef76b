#pragma once

// The orbit M = Ad(K)x = K/S = G/H and the action of the noncompact group G on it.
//
// A point of M is a self-adjoint traceless matrix with a fixed spectrum. G acts
// through flags: g moves the ascending-eigenvalue flag of x, the flag is
// re-orthonormalized by QR, and the spectrum is reattached. For g in K this is
// plain conjugation.

#include "flagflow/lie_core.hpp"
#include "flagflow/numerics.hpp"
#include "flagflow/roots.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace flagflow {

template <class Scalar>
class OrbitPoint {
public:
    /// Eigendecomposes `m` and groups its spectrum. The stored spectrum uses
    /// the block means, so repeated eigenvalues are exactly equal.
    static OrbitPoint from_matrix(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m);

    /// Like from_matrix but checks `m` against a declared ascending spectrum
    /// (within 1e-10 times the spectral diameter) and keeps the declared values.
    static OrbitPoint with_spectrum(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m,
                                    const Eigen::VectorXd& spectrum);

    /// frame * diag(spectrum) * frame^H for a unitary frame and ascending spectrum.
    static OrbitPoint from_frame(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& frame,
                                 const Eigen::VectorXd& spectrum);

    /// The point of the orbit with this spectrum closest to the self-adjoint part
    /// of `m` (same eigenframe, spectrum replaced). No isospectrality check.
    static OrbitPoint nearest(const AlgebraContext<Scalar>& ctx, const Mat<Scalar>& m,
                              const Eigen::VectorXd& spectrum);

    const AlgebraContext<Scalar>& context() const { return ctx_; }
    const Mat<Scalar>& mat() const { return mat_; }
    AmbientElement<Scalar> element() const { return AmbientElement<Scalar>(ctx_, mat_); }

    const Eigen::VectorXd& spectrum() const { return frame_.eigenvalues; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const SpectralFrame<Scalar>& frame() const { return frame_; }
    double spectral_diameter() const;

private:
    OrbitPoint(AlgebraContext<Scalar> ctx, Mat<Scalar> mat, std::vector<Block> blocks, SpectralFrame<Scalar> frame);

    AlgebraContext<Scalar> ctx_;
    Mat<Scalar> mat_;
    std::vector<Block> blocks_;
    SpectralFrame<Scalar> frame_;
};

/// Orthonormal frame whose leading columns span the ascending-eigenvalue flag.
template <class Scalar>
struct FlagFrame {
    Mat<Scalar> frame;
    std::vector<std::size_t> block_sizes;
};

template <class Scalar>
FlagFrame<Scalar> ascending_flag(const OrbitPoint<Scalar>& x);

/// QR-orthonormalized g * flag.frame; the nested spans are those of g applied to the flag.
template <class Scalar>
FlagFrame<Scalar> transport_flag(const Mat<Scalar>& g, const FlagFrame<Scalar>& flag);

/// The orbit point whose ascending flag is `flag` and whose spectrum is `spectrum`.
template <class Scalar>
OrbitPoint<Scalar> point_from_flag(const AlgebraContext<Scalar>& ctx, const FlagFrame<Scalar>& flag,
                                   const Eigen::VectorXd& spectrum);

/// g.x for g in G (det 1). Throws DegeneracyError if the transported flag collapses.
template <class Scalar>
OrbitPoint<Scalar> group_act(const Mat<Scalar>& g, const OrbitPoint<Scalar>& x);

/// Ad(k)x for k in K. Throws PreconditionError unless k^H k = I within 1e-10 and det k = 1.
template <class Scalar>
OrbitPoint<Scalar> k_act(const Mat<Scalar>& k, const OrbitPoint<Scalar>& x);

/// exp(t a).x0 for each t, for any a in g. Consecutive samples are linked by
/// the left action law; the flag is moved in increments h with
/// 2 h |a|_F <= kMaxTransportStretch so that every QR stays well conditioned.
template <class Scalar>
std::vector<OrbitPoint<Scalar>> one_parameter_orbit(const Mat<Scalar>& a, const OrbitPoint<Scalar>& x0,
                                                    std::span<const double> times);

inline constexpr double kMaxTransportStretch = 4.0;

/// Step of the central difference used for the infinitesimal action.
inline constexpr double kInfinitesimalStep = 1e-5;

/// a.x = d/dt exp(ta).x at t = 0. Uses [a, x] when a lies in k and the central
/// difference otherwise.
template <class Scalar>
Mat<Scalar> infinitesimal_act(const AmbientElement<Scalar>& a, const OrbitPoint<Scalar>& x);

/// Central-difference evaluation of a.x regardless of where a lives.
template <class Scalar>
Mat<Scalar> infinitesimal_act_fd(const AmbientElement<Scalar>& a, const OrbitPoint<Scalar>& x,
                                 double h = kInfinitesimalStep);

}  // namespace flagflow
