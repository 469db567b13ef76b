#include "flagflow/kahler.hpp"

#include "flagflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flagflow {

namespace {

const Complex kI{0.0, 1.0};

}  // namespace

CompactOrbitPoint::CompactOrbitPoint(OrbitPoint<Complex> hermitian)
    : hermitian_(std::move(hermitian)), mat_(kI * hermitian_.mat()) {}

CompactOrbitPoint CompactOrbitPoint::from_matrix(const CompactContext& ctx, const ComplexMat& x) {
    AmbientElement<Complex> checked(ctx, x);
    if (!ctx.in_k(x)) throw PreconditionError("compact orbit point must be skew-Hermitian");
    return CompactOrbitPoint(OrbitPoint<Complex>::from_matrix(ctx, hermitian_part<Complex>(-kI * x)));
}

CompactOrbitPoint CompactOrbitPoint::from_frame(const CompactContext& ctx, const ComplexMat& frame,
                                                const Eigen::VectorXd& spectrum) {
    return CompactOrbitPoint(OrbitPoint<Complex>::from_frame(ctx, frame, spectrum));
}

CompactOrbitPoint CompactOrbitPoint::from_hermitian(OrbitPoint<Complex> hermitian) {
    return CompactOrbitPoint(std::move(hermitian));
}

std::vector<ComplexMat> tangent_space_basis(const CompactOrbitPoint& x) {
    const auto dec = decompose(x.hermitian());
    const auto n = static_cast<Eigen::Index>(x.context().n());
    std::vector<ComplexMat> basis;
    for (const auto& root : dec.positive_roots) {
        const Block& up = dec.blocks[root.upper];
        const Block& lo = dec.blocks[root.lower];
        for (std::size_t r = up.offset; r < up.end(); ++r) {
            for (std::size_t c = lo.offset; c < lo.end(); ++c) {
                const auto ri = static_cast<Eigen::Index>(r), ci = static_cast<Eigen::Index>(c);
                ComplexMat real_part = ComplexMat::Zero(n, n);
                real_part(ri, ci) = 1.0;
                real_part(ci, ri) = -1.0;
                ComplexMat imag_part = ComplexMat::Zero(n, n);
                imag_part(ri, ci) = kI;
                imag_part(ci, ri) = kI;
                basis.push_back(dec.from_frame(real_part));
                basis.push_back(dec.from_frame(imag_part));
            }
        }
    }
    return basis;
}

void require_compact_tangent(const ComplexMat& v, const CompactOrbitPoint& x, const char* what) {
    if (v.rows() != x.mat().rows() || v.cols() != x.mat().cols()) {
        throw PreconditionError(std::string(what) + ": tangent vector has the wrong shape");
    }
    if ((v + v.adjoint()).norm() > 1e-10 * std::max(1.0, v.norm())) {
        throw PreconditionError(std::string(what) + ": tangent vector must be skew-Hermitian");
    }
    require_tangent<Complex>(v, decompose(x.hermitian()), what);
}

namespace {

// Multiplies entry (r, c) of the framed matrix by factor(mu_r, mu_c) on
// off-block sectors and zeroes the block diagonal.
template <class Factor>
ComplexMat scale_sectors(const CompactOrbitPoint& x, const ComplexMat& v, Factor factor) {
    const auto dec = decompose(x.hermitian());
    ComplexMat framed = dec.to_frame(v);
    const auto n = framed.rows();
    for (Eigen::Index c = 0; c < n; ++c) {
        const std::size_t bc = dec.block_of(static_cast<std::size_t>(c));
        for (Eigen::Index r = 0; r < n; ++r) {
            const std::size_t br = dec.block_of(static_cast<std::size_t>(r));
            framed(r, c) = br == bc ? Complex{} : framed(r, c) * factor(dec.blocks[br].value, dec.blocks[bc].value);
        }
    }
    ComplexMat out = dec.from_frame(framed);
    return (out - out.adjoint()) / 2.0;
}

}  // namespace

ComplexMat complex_structure(const CompactOrbitPoint& x, const ComplexMat& v) {
    require_compact_tangent(v, x, "complex_structure");
    // [x, E_rc] = i (mu_r - mu_c) E_rc in the frame; divide by alpha = |mu_r - mu_c|.
    return scale_sectors(x, v, [](double mu_r, double mu_c) {
        return kI * (mu_r - mu_c) / std::abs(mu_r - mu_c);
    });
}

ComplexMat ad_inverse(const CompactOrbitPoint& x, const ComplexMat& w) {
    require_compact_tangent(w, x, "ad_inverse");
    return scale_sectors(x, w, [](double mu_r, double mu_c) { return 1.0 / (kI * (mu_r - mu_c)); });
}

double kahler_form(const CompactOrbitPoint& x, const ComplexMat& v, const ComplexMat& w) {
    require_compact_tangent(v, x, "kahler_form");
    return x.context().inner(v, ad_inverse(x, w));
}

double kahler_metric(const CompactOrbitPoint& x, const ComplexMat& v, const ComplexMat& w) {
    return kahler_form(x, v, complex_structure(x, w));
}

ComplexMat kahler_gradient(const AmbientElement<Complex>& q, const CompactOrbitPoint& x) {
    require_same_context(q.context(), x.context());
    if (!q.context().in_k(q.mat())) throw PreconditionError("kahler_gradient: q must lie in k (skew-Hermitian)");
    return -complex_structure(x, bracket(x.element(), q).mat());
}

namespace {

void require_compact_q(const AmbientElement<Complex>& q, const CompactOrbitPoint& x) {
    require_same_context(q.context(), x.context());
    if (!q.context().in_k(q.mat())) throw PreconditionError("q must lie in k (skew-Hermitian)");
}

}  // namespace

std::vector<CompactOrbitPoint> compact_flow(const AmbientElement<Complex>& q, const CompactOrbitPoint& x0,
                                            std::span<const double> times) {
    require_compact_q(q, x0);
    std::vector<CompactOrbitPoint> out;
    out.reserve(times.size());
    for (auto& p : one_parameter_orbit<Complex>(kI * q.mat(), x0.hermitian(), times)) {
        out.push_back(CompactOrbitPoint::from_hermitian(std::move(p)));
    }
    return out;
}

NumericFlow<Complex> numeric_compact_flow(const AmbientElement<Complex>& q, const CompactOrbitPoint& x0,
                                          std::span<const double> times, double tol, bool snap) {
    require_compact_q(q, x0);
    if (!(tol >= 1e-13 && tol <= 1e-4)) throw PreconditionError("numeric_compact_flow: tol must lie in [1e-13, 1e-4]");
    const auto& ctx = x0.context();
    const Eigen::VectorXd spectrum = x0.spectrum();
    auto nearest = [&](const ComplexMat& state) {
        return CompactOrbitPoint::from_hermitian(OrbitPoint<Complex>::nearest(ctx, -kI * state, spectrum));
    };
    VectorField<Complex> field = [&](const ComplexMat& state) { return kahler_gradient(q, nearest(state)); };

    NumericFlow<Complex> result;
    result.snapped = snap;
    double drift = 0.0;
    auto hook = [&](ComplexMat& state) {
        const auto sf = herm_eig(hermitian_part<Complex>(-kI * state));
        drift = std::max(drift, (sf.eigenvalues - spectrum).cwiseAbs().maxCoeff());
        if (snap) state = CompactOrbitPoint::from_frame(ctx, sf.frame, spectrum).mat();
    };
    result.states = ode_integrate<Complex>(field, x0.mat(), times, tol, hook, &result.stats);
    result.spectral_drift = drift;
    return result;
}

FlowReport<Complex> verify_kahler_flow(const AmbientElement<Complex>& q, const CompactOrbitPoint& x0, double t_end,
                                       double tol, std::size_t samples, bool snap) {
    FlowReport<Complex> report;
    report.sample_times = time_grid(t_end, std::max(samples, kMinVerifySamples));
    report.tolerance = kVerdictFactor * tol;
    for (const auto& p : compact_flow(q, x0, report.sample_times)) {
        report.closed_form.push_back(p.mat());
        report.f_values.push_back(x0.context().inner(q.mat(), p.mat()));
    }
    auto numeric = numeric_compact_flow(q, x0, report.sample_times, tol, snap);
    report.integrated = std::move(numeric.states);
    report.spectral_drift = numeric.spectral_drift;
    report.max_deviation = max_relative_deviation<Complex>(report.closed_form, report.integrated,
                                                           x0.hermitian().spectral_diameter());
    report.f_monotone = nondecreasing(report.f_values);
    report.pass = report.max_deviation < report.tolerance && report.f_monotone;
    std::ostringstream os;
    os << "steps=" << numeric.stats.accepted << " rejected=" << numeric.stats.rejected
       << (snap ? " snap=on" : " snap=off");
    report.notes = os.str();
    return report;
}

}  // namespace flagflow
