#pragma once

// Dense small-matrix kernels shared by every other module.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <type_traits>
#include <vector>

namespace flagflow {

using Complex = std::complex<double>;

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealMat = Mat<double>;
using ComplexMat = Mat<Complex>;

template <class Scalar>
inline constexpr bool is_complex_v = std::is_same_v<Scalar, Complex>;

/// Largest dimension accepted anywhere in the library.
inline constexpr std::size_t kMaxDim = 64;

/// Throws PreconditionError unless `m` is square with 1 <= n <= kMaxDim.
template <class Scalar>
void require_square(const Mat<Scalar>& m, const char* what);

/// Eigenvalues in ascending order and a unitary frame whose j-th column is an
/// eigenvector for eigenvalues[j]. Each column's largest-magnitude entry is
/// real and positive, which pins the frame for simple eigenvalues.
template <class Scalar>
struct SpectralFrame {
    Eigen::VectorXd eigenvalues;
    Mat<Scalar> frame;

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }

    /// frame * diag(eigenvalues) * frame^H
    Mat<Scalar> reconstruct() const;
};

SpectralFrame<double> sym_eig(const RealMat& a);
SpectralFrame<Complex> herm_eig(const ComplexMat& a);

/// sym_eig or herm_eig depending on the scalar type.
template <class Scalar>
SpectralFrame<Scalar> self_adjoint_eig(const Mat<Scalar>& a);

/// Orthonormal Q with B = Q R, R upper triangular with positive real diagonal.
/// The leading j columns of Q span the same space as the leading j columns of B.
/// B may be rectangular (rows >= cols).
template <class Scalar>
Mat<Scalar> qr_orthonormalize(const Mat<Scalar>& b);

/// Matrix exponential (Pade scaling and squaring).
template <class Scalar>
Mat<Scalar> expm(const Mat<Scalar>& a);

/// Hook invoked after every accepted step; may modify the state in place.
template <class Scalar>
using StepHook = std::function<void(Mat<Scalar>&)>;

template <class Scalar>
using VectorField = std::function<Mat<Scalar>(const Mat<Scalar>&)>;

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// Adaptive Dormand-Prince 5(4) integration of x' = field(x) from t = 0.
///
/// `sample_times` must be nondecreasing and nonnegative; the state at each is
/// returned (steps are shortened to land on them exactly). The local error
/// estimate of every accepted step stays below `tol` in the max norm.
/// `after_step` runs after each accepted step and may project the state.
template <class Scalar>
std::vector<Mat<Scalar>> ode_integrate(const VectorField<Scalar>& field,
                                       const Mat<Scalar>& x0,
                                       std::span<const double> sample_times,
                                       double tol,
                                       const StepHook<Scalar>& after_step = {},
                                       OdeStats* stats = nullptr);

/// Hermitian part (a + a^H) / 2.
template <class Scalar>
Mat<Scalar> hermitian_part(const Mat<Scalar>& a) {
    return (a + a.adjoint()) / 2.0;
}

}  // namespace flagflow
