#include "flagflow/analysis.hpp"

#include "flagflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace flagflow {

std::size_t multinomial_count(std::span<const Block> blocks) {
    // Product of binomials avoids overflowing n!.
    std::size_t count = 1;
    std::size_t placed = 0;
    for (const auto& b : blocks) {
        for (std::size_t k = 1; k <= b.multiplicity; ++k) {
            ++placed;
            count = count * placed / k;
        }
    }
    return count;
}

template <class Scalar>
CriticalSet<Scalar> critical_points(const HeightFunction<Scalar>& f, const Eigen::VectorXd& spectrum) {
    const auto& ctx = f.q().context();
    const auto n = static_cast<Eigen::Index>(ctx.n());
    if (spectrum.size() != n) throw PreconditionError("critical_points: spectrum length does not match n");
    const auto qf = self_adjoint_eig<Scalar>(f.q().mat());
    const double diameter = qf.eigenvalues(n - 1) - qf.eigenvalues(0);
    for (Eigen::Index i = 1; i < n; ++i) {
        const double gap = qf.eigenvalues(i) - qf.eigenvalues(i - 1);
        if (!(gap > kGenericGapRelTol * diameter)) {
            std::ostringstream os;
            os << "height function is not generic: eigenvalue gap " << gap << " at position " << i
               << " (spectral diameter " << diameter << ")";
            throw GenericityError(os.str());
        }
    }

    std::vector<double> assigned(spectrum.data(), spectrum.data() + n);
    std::sort(assigned.begin(), assigned.end());
    Eigen::VectorXd sorted = Eigen::Map<const Eigen::VectorXd>(assigned.data(), n);

    CriticalSet<Scalar> set;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    do {
        // Column k of the q-frame carries eigenvalue assigned[k]; reorder the
        // columns so the eigenvalues come out ascending.
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return assigned[static_cast<std::size_t>(a)] < assigned[static_cast<std::size_t>(b)];
        });
        Mat<Scalar> frame(n, n);
        for (Eigen::Index k = 0; k < n; ++k) frame.col(k) = qf.frame.col(order[static_cast<std::size_t>(k)]);
        auto point = OrbitPoint<Scalar>::from_frame(ctx, frame, sorted);
        set.f_values.push_back(f(point));
        set.max_gradient_norm = std::max(set.max_gradient_norm, s_gradient(f, point).norm());
        set.points.push_back(std::move(point));
    } while (std::next_permutation(assigned.begin(), assigned.end()));
    set.count = set.points.size();
    set.maximizer = 0;
    return set;
}

template <class Scalar>
LimitReport<Scalar> classify_limit(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0, double t_max,
                                   double tol, std::size_t samples) {
    if (!(t_max >= 0.0) || t_max * f.q().mat().norm() > 30.0) {
        throw PreconditionError("classify_limit: need 0 <= t_max and t_max |q| <= 30");
    }
    const auto critical = critical_points(f, x0.spectrum());

    LimitReport<Scalar> report;
    report.times = time_grid(t_max, samples);
    const auto trajectory = closed_form_flow(f, x0, report.times);
    for (const auto& p : trajectory) report.f_values.push_back(f(p));
    report.f_monotone = nondecreasing(report.f_values);
    report.cauchy_tail = std::abs(report.f_values.back() - report.f_values[report.f_values.size() - 2]);

    const Mat<Scalar>& end = trajectory.back().mat();
    report.distance = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < critical.points.size(); ++k) {
        const double d = (critical.points[k].mat() - end).norm();
        if (d < report.distance) {
            report.distance = d;
            report.nearest = k;
        }
    }
    if (report.distance < 100.0 * tol) report.limit = report.nearest;
    report.limit_is_maximizer = report.nearest == critical.maximizer;
    return report;
}

template <class Scalar>
ExtrinsicReport is_extrinsic_symmetric(const OrbitPoint<Scalar>& x, double tol) {
    ExtrinsicReport report;
    const auto dec = decompose(x);
    report.extrinsic_symmetric = true;
    for (const auto& r : dec.positive_roots) {
        report.root_values.push_back(r.alpha);
        const double offset = std::abs(r.alpha - 1.0);
        report.worst_offset = std::max(report.worst_offset, offset);
        if (offset > tol) report.extrinsic_symmetric = false;
    }
    report.notes = "root-value criterion on the given orbit only; euclidean factors are not split off";
    return report;
}

template <class Scalar>
ExtrinsicFlowReport<Scalar> verify_extrinsic_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0,
                                                  double t_end, double tol, std::size_t samples, bool snap) {
    const auto check = is_extrinsic_symmetric(x0);
    if (!check.extrinsic_symmetric) {
        std::ostringstream os;
        os << "verify_extrinsic_flow: orbit is not extrinsic symmetric (root value offset " << check.worst_offset << ")";
        throw PreconditionError(os.str());
    }
    ExtrinsicFlowReport<Scalar> out;
    auto& report = out.flow;
    report.sample_times = time_grid(t_end, std::max(samples, kMinVerifySamples));
    report.tolerance = kVerdictFactor * tol;
    for (const auto& p : closed_form_flow(f, x0, report.sample_times)) {
        report.closed_form.push_back(p.mat());
        report.f_values.push_back(f(p));
        out.pointwise_residual = std::max(out.pointwise_residual,
                                          (s_gradient(f, p) - tangent_project<Scalar>(f.q().mat(), p)).norm());
    }
    const auto& ctx = x0.context();
    const Eigen::VectorXd spectrum = x0.spectrum();
    VectorField<Scalar> ambient_gradient = [&](const Mat<Scalar>& state) {
        return hermitian_part<Scalar>(
            tangent_project<Scalar>(f.q().mat(), OrbitPoint<Scalar>::nearest(ctx, state, spectrum)));
    };
    auto numeric = integrate_on_orbit<Scalar>(ambient_gradient, x0, report.sample_times, tol, snap);
    report.integrated = std::move(numeric.states);
    report.spectral_drift = numeric.spectral_drift;
    report.max_deviation = max_relative_deviation<Scalar>(report.closed_form, report.integrated, x0.spectral_diameter());
    report.f_monotone = nondecreasing(report.f_values);
    report.pass = report.max_deviation < report.tolerance && report.f_monotone && out.pointwise_residual < kPointwiseTol;
    std::ostringstream os;
    os << "steps=" << numeric.stats.accepted << " rejected=" << numeric.stats.rejected
       << (snap ? " snap=on" : " snap=off") << "; " << check.notes;
    report.notes = os.str();
    return out;
}

namespace {

// Basis of k transverse to the stabilizer of x: for each off-block frame pair
// (r > c), U (E_rc - E_cr) U^H, and for complex scalars also U i (E_rc + E_cr) U^H.
template <class Scalar>
std::vector<Mat<Scalar>> transverse_k_basis(const OrbitPoint<Scalar>& x) {
    const auto dec = decompose(x);
    const auto n = static_cast<Eigen::Index>(x.context().n());
    std::vector<Mat<Scalar>> basis;
    for (const auto& root : dec.positive_roots) {
        const Block& up = dec.blocks[root.upper];
        const Block& lo = dec.blocks[root.lower];
        for (std::size_t r = up.offset; r < up.end(); ++r) {
            for (std::size_t c = lo.offset; c < lo.end(); ++c) {
                const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
                Mat<Scalar> e = Mat<Scalar>::Zero(n, n);
                e(ri, ci) = Scalar(1.0);
                e(ci, ri) = Scalar(-1.0);
                basis.push_back(dec.from_frame(e));
                if constexpr (is_complex_v<Scalar>) {
                    Mat<Scalar> g = Mat<Scalar>::Zero(n, n);
                    g(ri, ci) = Complex(0.0, 1.0);
                    g(ci, ri) = Complex(0.0, 1.0);
                    basis.push_back(dec.from_frame(g));
                }
            }
        }
    }
    return basis;
}

}  // namespace

template <class Scalar>
HessianReport numerical_hessian(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x, double h) {
    const auto basis = transverse_k_basis(x);
    const auto dim = static_cast<Eigen::Index>(basis.size());
    auto value_at = [&](const Mat<Scalar>& a) {
        const Mat<Scalar> k = expm<Scalar>(a);
        return f(Mat<Scalar>(k * x.mat() * k.adjoint()));
    };
    const double f0 = f(x);
    Eigen::MatrixXd hess(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto& ai = basis[static_cast<std::size_t>(i)];
        hess(i, i) = (value_at(ai * h) - 2.0 * f0 + value_at(ai * (-h))) / (h * h);
        for (Eigen::Index j = 0; j < i; ++j) {
            const auto& aj = basis[static_cast<std::size_t>(j)];
            hess(i, j) = (value_at((ai + aj) * h) - value_at((ai - aj) * h) - value_at((aj - ai) * h) +
                          value_at((ai + aj) * (-h))) /
                         (4.0 * h * h);
            hess(j, i) = hess(i, j);
        }
    }
    HessianReport report;
    if (dim == 0) return report;
    report.eigenvalues = sym_eig(hess).eigenvalues;
    const double cutoff = 1e-5 * std::max(1.0, report.eigenvalues.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (report.eigenvalues(i) < -cutoff) ++report.index;
        else if (report.eigenvalues(i) <= cutoff) ++report.nullity;
    }
    return report;
}

#define FLAGFLOW_INSTANTIATE(S)                                                                              \
    template CriticalSet<S> critical_points<S>(const HeightFunction<S>&, const Eigen::VectorXd&);            \
    template LimitReport<S> classify_limit<S>(const HeightFunction<S>&, const OrbitPoint<S>&, double, double, \
                                              std::size_t);                                                   \
    template ExtrinsicReport is_extrinsic_symmetric<S>(const OrbitPoint<S>&, double);                         \
    template ExtrinsicFlowReport<S> verify_extrinsic_flow<S>(const HeightFunction<S>&, const OrbitPoint<S>&,  \
                                                             double, double, std::size_t, bool);              \
    template HessianReport numerical_hessian<S>(const HeightFunction<S>&, const OrbitPoint<S>&, double);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
