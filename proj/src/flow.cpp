#include "flagflow/flow.hpp"

#include "flagflow/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace flagflow {

template <class Scalar>
HeightFunction<Scalar>::HeightFunction(AmbientElement<Scalar> q) : q_(std::move(q)) {
    if (!q_.context().in_p(q_.mat())) {
        throw PreconditionError("height function: q must lie in p (self-adjoint)");
    }
}

template <class Scalar>
double HeightFunction<Scalar>::operator()(const OrbitPoint<Scalar>& x) const {
    require_same_context(q_.context(), x.context());
    return (*this)(x.mat());
}

template <class Scalar>
double HeightFunction<Scalar>::operator()(const Mat<Scalar>& x) const {
    return q_.context().inner(q_.mat(), x);
}

template <class Scalar>
MetricS<Scalar> metric_s(const OrbitPoint<Scalar>& x) {
    MetricS<Scalar> m{decompose(x), {}};
    for (const auto& r : m.dec.positive_roots) m.weights.push_back(1.0 / r.alpha);
    return m;
}

template <class Scalar>
Mat<Scalar> tangent_project(const Mat<Scalar>& v, const OrbitPoint<Scalar>& x) {
    const auto dec = decompose(x);
    return dec.from_frame(off_block_part<Scalar>(dec.to_frame(v), dec.blocks));
}

template <class Scalar>
void require_tangent(const Mat<Scalar>& v, const RootDecomposition<Scalar>& dec, const char* what) {
    const double normal = block_diagonal_part<Scalar>(dec.to_frame(v), dec.blocks).norm();
    if (normal > 1e-10 * std::max(1.0, v.norm())) {
        std::ostringstream os;
        os << what << ": vector is not tangent to the orbit (normal component " << normal << ")";
        throw PreconditionError(os.str());
    }
}

namespace {

// b_scale * Re <a, b> restricted to the two sectors of one positive root (frame coordinates).
template <class Scalar>
double root_pair_inner(const Mat<Scalar>& a, const Mat<Scalar>& b, const Block& up, const Block& lo, double b_scale) {
    const auto u0 = static_cast<Eigen::Index>(up.offset), un = static_cast<Eigen::Index>(up.multiplicity);
    const auto l0 = static_cast<Eigen::Index>(lo.offset), ln = static_cast<Eigen::Index>(lo.multiplicity);
    const Scalar lower = (a.block(u0, l0, un, ln).array() * b.block(u0, l0, un, ln).array().conjugate()).sum();
    const Scalar upper = (a.block(l0, u0, ln, un).array() * b.block(l0, u0, ln, un).array().conjugate()).sum();
    return b_scale * std::real(lower + upper);
}

}  // namespace

template <class Scalar>
double s_inner(const Mat<Scalar>& v, const Mat<Scalar>& w, const OrbitPoint<Scalar>& x) {
    const auto metric = metric_s(x);
    const auto& dec = metric.dec;
    require_tangent(v, dec, "s_inner");
    require_tangent(w, dec, "s_inner");
    const Mat<Scalar> vf = dec.to_frame(v);
    const Mat<Scalar> wf = dec.to_frame(w);
    double sum = 0.0;
    for (std::size_t k = 0; k < dec.positive_roots.size(); ++k) {
        const auto& r = dec.positive_roots[k];
        sum += metric.weights[k] * root_pair_inner(vf, wf, dec.blocks[r.upper], dec.blocks[r.lower], dec.ctx.b_scale());
    }
    return sum;
}

template <class Scalar>
Mat<Scalar> s_gradient(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x) {
    require_same_context(f.q().context(), x.context());
    const auto dec = decompose(x);
    Mat<Scalar> framed = dec.to_frame(f.q().mat());
    for (std::size_t i = 0; i < dec.blocks.size(); ++i) {
        for (std::size_t j = 0; j < dec.blocks.size(); ++j) {
            const Block& bi = dec.blocks[i];
            const Block& bj = dec.blocks[j];
            framed.block(static_cast<Eigen::Index>(bi.offset), static_cast<Eigen::Index>(bj.offset),
                         static_cast<Eigen::Index>(bi.multiplicity), static_cast<Eigen::Index>(bj.multiplicity)) *=
                std::abs(dec.sector_value(i, j));
        }
    }
    return hermitian_part<Scalar>(dec.from_frame(framed));
}

template <class Scalar>
Mat<Scalar> double_bracket(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x) {
    const auto xe = x.element();
    return bracket(xe, bracket(xe, f.q())).mat();
}

template <class Scalar>
std::vector<OrbitPoint<Scalar>> closed_form_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0,
                                                 std::span<const double> times) {
    require_same_context(f.q().context(), x0.context());
    return one_parameter_orbit<Scalar>(-f.q().mat(), x0, times);
}

template <class Scalar>
NumericFlow<Scalar> integrate_on_orbit(const VectorField<Scalar>& field, const OrbitPoint<Scalar>& x0,
                                       std::span<const double> times, double tol, bool snap) {
    NumericFlow<Scalar> result;
    result.snapped = snap;
    const Eigen::VectorXd spectrum = x0.spectrum();
    const auto& ctx = x0.context();
    double drift = 0.0;
    auto hook = [&](Mat<Scalar>& state) {
        const auto sf = self_adjoint_eig<Scalar>(hermitian_part<Scalar>(state));
        drift = std::max(drift, (sf.eigenvalues - spectrum).cwiseAbs().maxCoeff());
        if (snap) state = OrbitPoint<Scalar>::from_frame(ctx, sf.frame, spectrum).mat();
    };
    result.states = ode_integrate<Scalar>(field, x0.mat(), times, tol, hook, &result.stats);
    result.spectral_drift = drift;
    return result;
}

template <class Scalar>
NumericFlow<Scalar> numeric_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0,
                                 std::span<const double> times, double tol, bool snap) {
    require_same_context(f.q().context(), x0.context());
    if (!(tol >= 1e-13 && tol <= 1e-4)) throw PreconditionError("numeric_flow: tol must lie in [1e-13, 1e-4]");
    const auto& ctx = x0.context();
    const Eigen::VectorXd spectrum = x0.spectrum();
    VectorField<Scalar> field = [&](const Mat<Scalar>& state) {
        return s_gradient(f, OrbitPoint<Scalar>::nearest(ctx, state, spectrum));
    };
    return integrate_on_orbit<Scalar>(field, x0, times, tol, snap);
}

std::vector<double> time_grid(double t_end, std::size_t samples) {
    if (samples < 2) throw PreconditionError("time_grid: need at least 2 samples");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw PreconditionError("time_grid: t_end must be finite and >= 0");
    std::vector<double> grid(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        grid[k] = t_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    }
    grid.back() = t_end;
    return grid;
}

bool nondecreasing(std::span<const double> values) {
    for (std::size_t k = 1; k < values.size(); ++k) {
        const double slack = 1e-12 * std::max(1.0, std::abs(values[k - 1]));
        if (values[k] < values[k - 1] - slack) return false;
    }
    return true;
}

template <class Scalar>
double max_relative_deviation(std::span<const Mat<Scalar>> a, std::span<const Mat<Scalar>> b, double diameter) {
    if (a.size() != b.size()) throw PreconditionError("max_relative_deviation: trajectories differ in length");
    const double scale = diameter > 0.0 ? diameter : 1.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, (a[k] - b[k]).norm() / scale);
    return worst;
}

template <class Scalar>
FlowReport<Scalar> verify_gradient_flow(const HeightFunction<Scalar>& f, const OrbitPoint<Scalar>& x0, double t_end,
                                        double tol, std::size_t samples, bool snap) {
    FlowReport<Scalar> report;
    report.sample_times = time_grid(t_end, std::max(samples, kMinVerifySamples));
    report.tolerance = kVerdictFactor * tol;
    for (const auto& p : closed_form_flow(f, x0, report.sample_times)) {
        report.closed_form.push_back(p.mat());
        report.f_values.push_back(f(p));
    }
    auto numeric = numeric_flow(f, x0, report.sample_times, tol, snap);
    report.integrated = std::move(numeric.states);
    report.spectral_drift = numeric.spectral_drift;
    report.max_deviation = max_relative_deviation<Scalar>(report.closed_form, report.integrated, x0.spectral_diameter());
    report.f_monotone = nondecreasing(report.f_values);
    report.pass = report.max_deviation < report.tolerance && report.f_monotone;
    std::ostringstream os;
    os << "steps=" << numeric.stats.accepted << " rejected=" << numeric.stats.rejected
       << (snap ? " snap=on" : " snap=off");
    report.notes = os.str();
    return report;
}

#define FLAGFLOW_INSTANTIATE(S)                                                                                 \
    template class HeightFunction<S>;                                                                           \
    template MetricS<S> metric_s<S>(const OrbitPoint<S>&);                                                      \
    template Mat<S> tangent_project<S>(const Mat<S>&, const OrbitPoint<S>&);                                    \
    template void require_tangent<S>(const Mat<S>&, const RootDecomposition<S>&, const char*);                  \
    template double s_inner<S>(const Mat<S>&, const Mat<S>&, const OrbitPoint<S>&);                             \
    template Mat<S> s_gradient<S>(const HeightFunction<S>&, const OrbitPoint<S>&);                              \
    template Mat<S> double_bracket<S>(const HeightFunction<S>&, const OrbitPoint<S>&);                          \
    template std::vector<OrbitPoint<S>> closed_form_flow<S>(const HeightFunction<S>&, const OrbitPoint<S>&,    \
                                                           std::span<const double>);                           \
    template NumericFlow<S> integrate_on_orbit<S>(const VectorField<S>&, const OrbitPoint<S>&,                  \
                                                  std::span<const double>, double, bool);                       \
    template NumericFlow<S> numeric_flow<S>(const HeightFunction<S>&, const OrbitPoint<S>&,                     \
                                            std::span<const double>, double, bool);                             \
    template double max_relative_deviation<S>(std::span<const Mat<S>>, std::span<const Mat<S>>, double);        \
    template FlowReport<S> verify_gradient_flow<S>(const HeightFunction<S>&, const OrbitPoint<S>&, double,      \
                                                   double, std::size_t, bool);

FLAGFLOW_INSTANTIATE(double)
FLAGFLOW_INSTANTIATE(Complex)

#undef FLAGFLOW_INSTANTIATE

}  // namespace flagflow
