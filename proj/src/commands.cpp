#include "flagflow/commands.hpp"

#include "flagflow/analysis.hpp"
#include "flagflow/errors.hpp"
#include "flagflow/flow.hpp"
#include "flagflow/instances.hpp"
#include "flagflow/kahler.hpp"
#include "flagflow/orbit_action.hpp"
#include "flagflow/roots.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace flagflow {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    auto parse_one = [&](std::string_view s) {
        std::uint64_t v = 0;
        const auto* end = s.data() + s.size();
        const auto [ptr, ec] = std::from_chars(s.data(), end, v);
        if (s.empty() || ec != std::errc{} || ptr != end) {
            throw PreconditionError("malformed seed '" + text + "': expected an unsigned integer or a range a..b");
        }
        return v;
    };
    const auto dots = text.find("..");
    if (dots == std::string::npos) return {parse_one(text)};
    const auto lo = parse_one(std::string_view(text).substr(0, dots));
    const auto hi = parse_one(std::string_view(text).substr(dots + 2));
    if (hi < lo || hi - lo >= 100000) throw PreconditionError("seed range '" + text + "' must satisfy a <= b and span < 100000");
    std::vector<std::uint64_t> seeds;
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    return seeds;
}

std::vector<double> parse_spectrum(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(v)) {
            throw PreconditionError("malformed spectrum entry '" + item + "'");
        }
        values.push_back(v);
    }
    if (values.size() < 2) throw PreconditionError("spectrum needs at least two entries");
    double sum = 0.0, abs_sum = 0.0;
    for (double v : values) {
        sum += v;
        abs_sum += std::abs(v);
    }
    if (std::abs(sum) > 1e-12 * std::max(abs_sum, 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "spectrum must have zero trace (sum of eigenvalues = " << sum << ")";
        throw PreconditionError(os.str());
    }
    std::sort(values.begin(), values.end());
    return values;
}

namespace {

const Complex kI{0.0, 1.0};

Json config_json(const RunConfig& c) {
    Json j;
    j["algebra"] = std::string(family_name(c.algebra));
    j["n"] = c.n;
    j["spectrum"] = c.spectrum ? Json(*c.spectrum) : Json(nullptr);
    j["seeds"] = c.seeds;
    j["tol"] = c.tol;
    j["t_end"] = c.t_end;
    j["samples"] = c.samples;
    j["snap"] = c.snap;
    return j;
}

Json seed_params(const RunConfig& c, std::uint64_t seed) {
    Json j;
    j["seed"] = seed;
    j["algebra"] = std::string(family_name(c.algebra));
    j["n"] = c.n;
    return j;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd instance_spectrum(const RunConfig& c, Rng& rng) {
    return c.spectrum ? to_vector(*c.spectrum) : random_spectrum(rng, c.n);
}

template <class Scalar>
struct Instance {
    AlgebraContext<Scalar> ctx;
    OrbitPoint<Scalar> x0;
    HeightFunction<Scalar> f;
};

template <class Scalar>
Instance<Scalar> make_instance(const RunConfig& c, std::uint64_t seed) {
    Rng rng(seed);
    AlgebraContext<Scalar> ctx(c.n);
    const Eigen::VectorXd spectrum = instance_spectrum(c, rng);
    auto x0 = random_orbit_point(rng, ctx, spectrum);
    HeightFunction<Scalar> f(random_p(rng, ctx));
    return Instance<Scalar>{ctx, std::move(x0), std::move(f)};
}

std::string format(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------- decompose

template <class Scalar>
void decompose_seed(const RunConfig& c, std::uint64_t seed, RunReport& report) {
    const auto inst = make_instance<Scalar>(c, seed);
    const auto dec = decompose(inst.x0);
    const auto dims = split_dimensions(dec);
    const std::size_t expected = c.n * c.n - 1;
    const auto n = static_cast<Eigen::Index>(c.n);

    double eigen_residual = 0.0;
    double flip_residual = 0.0;
    Json roots = Json::array();
    for (const auto& root : dec.positive_roots) {
        const Block& up = dec.blocks[root.upper];
        const Block& lo = dec.blocks[root.lower];
        for (std::size_t r = up.offset; r < up.end(); ++r) {
            for (std::size_t col = lo.offset; col < lo.end(); ++col) {
                Mat<Scalar> e = Mat<Scalar>::Zero(n, n);
                e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = Scalar(1.0);
                const AmbientElement<Scalar> z(inst.ctx, dec.from_frame(e));
                const auto xz = bracket(inst.x0.element(), z);
                eigen_residual = std::max(eigen_residual, (xz.mat() - root.alpha * z.mat()).norm() / z.mat().norm());
                Mat<Scalar> flipped = dec.to_frame(sigma(z).mat());
                flipped(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(r)) = Scalar(0.0);
                flip_residual = std::max(flip_residual, flipped.norm());
            }
        }
        Json jr;
        jr["upper_block"] = root.upper;
        jr["lower_block"] = root.lower;
        jr["alpha"] = root.alpha;
        jr["dimension"] = up.multiplicity * lo.multiplicity;
        roots.push_back(std::move(jr));
    }

    Json params = seed_params(c, seed);
    Json dims_json;
    dims_json["n_plus"] = dims.n_plus;
    dims_json["c"] = dims.c;
    dims_json["n_minus"] = dims.n_minus;
    dims_json["total"] = dims.total();

    Check audit{"dimension_audit", params,
                std::abs(static_cast<double>(dims.total()) - static_cast<double>(expected)), 0.0,
                dims.total() == expected,
                std::to_string(dims.n_plus) + "+" + std::to_string(dims.c) + "+" + std::to_string(dims.n_minus) +
                    " = " + std::to_string(dims.total()) + " (n^2-1 = " + std::to_string(expected) + ")"};
    audit.metrics["positive_roots"] = dec.positive_roots.size();
    report.checks.push_back(std::move(audit));
    report.checks.push_back(Check{"root_eigen_action", params, eigen_residual, 1e-10, eigen_residual < 1e-10,
                                  "max |[x,z] - alpha(x) z| / |z| over root vectors"});
    report.checks.push_back(Check{"sigma_flip", params, flip_residual, 1e-12, flip_residual < 1e-12,
                                  "support of sigma(z) outside the opposite sector"});

    Json blocks = Json::array();
    for (const auto& b : dec.blocks) {
        Json jb;
        jb["value"] = b.value;
        jb["multiplicity"] = b.multiplicity;
        blocks.push_back(std::move(jb));
    }
    Json detail;
    detail["seed"] = seed;
    detail["blocks"] = std::move(blocks);
    detail["positive_roots"] = std::move(roots);
    detail["dimensions"] = std::move(dims_json);
    report.details["instances"].push_back(std::move(detail));
}

// -------------------------------------------------------------- verify-flow

template <class Scalar>
void verify_flow_seed(const RunConfig& c, std::uint64_t seed, RunReport& report) {
    const auto inst = make_instance<Scalar>(c, seed);
    const auto r = verify_gradient_flow(inst.f, inst.x0, c.t_end, c.tol, c.samples, c.snap);
    Json params = seed_params(c, seed);
    params["t_end"] = c.t_end;
    params["tol"] = c.tol;
    params["samples"] = c.samples;
    params["snap"] = c.snap;
    Check check{"gradient_flow", params, r.max_deviation, r.tolerance, r.pass, r.notes};
    check.metrics["spectral_drift"] = r.spectral_drift;
    check.metrics["f_monotone"] = r.f_monotone;
    check.metrics["f_start"] = r.f_values.front();
    check.metrics["f_end"] = r.f_values.back();
    report.checks.push_back(std::move(check));
}

// ------------------------------------------------------------- kahler-check

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t limit) {
    std::vector<std::size_t> idx;
    if (size <= limit) {
        for (std::size_t k = 0; k < size; ++k) idx.push_back(k);
    } else {
        for (std::size_t k = 0; k < limit; ++k) idx.push_back(k * size / limit);
    }
    return idx;
}

void kahler_seed(const RunConfig& c, std::uint64_t seed, RunReport& report) {
    Rng rng(seed);
    CompactContext ctx(c.n);
    const Eigen::VectorXd spectrum = instance_spectrum(c, rng);
    const ComplexMat frame = random_k<Complex>(rng, c.n);
    const auto x = CompactOrbitPoint::from_frame(ctx, frame, spectrum);
    const auto q = random_k_element(rng, ctx);
    const ComplexMat k = random_k<Complex>(rng, c.n);
    const auto moved = CompactOrbitPoint::from_frame(ctx, k * frame, spectrum);

    const auto basis = tangent_space_basis(x);
    const auto idx = sample_indices(basis.size(), 12);
    const Json params = seed_params(c, seed);

    double j_squared = 0.0;
    for (const auto& v : basis) {
        j_squared = std::max(j_squared, (complex_structure(x, complex_structure(x, v)) + v).norm());
    }

    double antisym = 0.0, invariance = 0.0, metric_gap = 0.0;
    for (std::size_t a : idx) {
        for (std::size_t b : idx) {
            const auto& v = basis[a];
            const auto& w = basis[b];
            const double omega = kahler_form(x, v, w);
            antisym = std::max(antisym, std::abs(omega + kahler_form(x, w, v)));
            const ComplexMat kv = k * v * k.adjoint();
            const ComplexMat kw = k * w * k.adjoint();
            invariance = std::max(invariance, std::abs(kahler_form(moved, kv, kw) - omega));
            const double s_value = s_inner<Complex>(-kI * v, -kI * w, x.hermitian());
            metric_gap = std::max(metric_gap, std::abs(kahler_metric(x, v, w) - s_value));
        }
    }

    const auto dim = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd gram(dim, dim);
    for (Eigen::Index a = 0; a < dim; ++a) {
        for (Eigen::Index b = 0; b < dim; ++b) {
            gram(a, b) = kahler_form(x, basis[static_cast<std::size_t>(a)], basis[static_cast<std::size_t>(b)]);
        }
    }
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(gram).singularValues();
    const double rcond = sv.size() == 0 ? 1.0 : sv(sv.size() - 1) / sv(0);

    report.checks.push_back(Check{"J_squared", params, j_squared, 1e-10, j_squared < 1e-10,
                                  "max |J(Jv) + v| over the tangent basis"});
    report.checks.push_back(Check{"omega_antisymmetry", params, antisym, 1e-9, antisym < 1e-9, "max |w(v,w) + w(w,v)|"});
    report.checks.push_back(Check{"omega_invariance", params, invariance, 1e-9, invariance < 1e-9,
                                  "max |w_{kx}(kvk^-1, kwk^-1) - w_x(v,w)| for a random k in SU(n)"});
    Check nondeg{"omega_nondegenerate", params, rcond, 1e-8, rcond > 1e-8,
                 "max_deviation holds the reciprocal condition number of the Gram matrix of w; condition number " +
                     format(1.0 / rcond)};
    nondeg.metrics["tangent_dimension"] = basis.size();
    report.checks.push_back(std::move(nondeg));
    report.checks.push_back(Check{"kahler_metric_equals_s", params, metric_gap, 1e-12, metric_gap < 1e-12,
                                  "max |(v,w) - <-iv,-iw>_s|"});

    const auto flow = verify_kahler_flow(q, x, c.t_end, c.tol, c.samples, c.snap);
    Json flow_params = params;
    flow_params["t_end"] = c.t_end;
    flow_params["tol"] = c.tol;
    Check fc{"kahler_flow", flow_params, flow.max_deviation, flow.tolerance, flow.pass, flow.notes};
    fc.metrics["spectral_drift"] = flow.spectral_drift;
    fc.metrics["f_monotone"] = flow.f_monotone;
    report.checks.push_back(std::move(fc));
}

// ---------------------------------------------------------- extrinsic-check

Eigen::VectorXd grassmannian_spectrum(std::size_t n) {
    const std::size_t k = n / 2;
    Eigen::VectorXd s(static_cast<Eigen::Index>(n));
    const double low = -static_cast<double>(k) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) s(static_cast<Eigen::Index>(i)) = i < n - k ? low : low + 1.0;
    return s;
}

void extrinsic_seed(const RunConfig& c, std::uint64_t seed, RunReport& report) {
    Rng rng(seed);
    AlgebraContext<double> ctx(c.n);
    const Eigen::VectorXd spectrum = c.spectrum ? to_vector(*c.spectrum) : grassmannian_spectrum(c.n);
    const auto x0 = random_orbit_point(rng, ctx, spectrum);
    const HeightFunction<double> f(random_p(rng, ctx));
    Json params = seed_params(c, seed);
    params["spectrum"] = to_std(spectrum);

    const auto detector = is_extrinsic_symmetric(x0);
    Check det{"extrinsic_detector", params, detector.worst_offset, 1e-10, detector.extrinsic_symmetric, detector.notes};
    det.metrics["root_values"] = detector.root_values;
    report.checks.push_back(std::move(det));

    if (!detector.extrinsic_symmetric) {
        const double pointwise = (s_gradient(f, x0) - tangent_project<double>(f.q().mat(), x0)).norm();
        report.checks.push_back(Check{"s_gradient_equals_projection", params, pointwise, kPointwiseTol,
                                      pointwise < kPointwiseTol, "evaluated at the initial point only"});
        report.checks.push_back(Check{"extrinsic_flow", params, std::numeric_limits<double>::quiet_NaN(), 50 * c.tol,
                                      false, "not run: the orbit is not extrinsic symmetric"});
        return;
    }
    const auto r = verify_extrinsic_flow(f, x0, c.t_end, c.tol, c.samples, c.snap);
    report.checks.push_back(Check{"s_gradient_equals_projection", params, r.pointwise_residual, kPointwiseTol,
                                  r.pointwise_residual < kPointwiseTol, "max over the closed-form trajectory"});
    Json flow_params = params;
    flow_params["t_end"] = c.t_end;
    flow_params["tol"] = c.tol;
    Check fc{"extrinsic_flow", flow_params, r.flow.max_deviation, r.flow.tolerance,
             r.flow.max_deviation < r.flow.tolerance && r.flow.f_monotone, r.flow.notes};
    fc.metrics["spectral_drift"] = r.flow.spectral_drift;
    fc.metrics["f_monotone"] = r.flow.f_monotone;
    report.checks.push_back(std::move(fc));
}

// -------------------------------------------------------------------- morse

template <class Scalar>
void morse_seed(const RunConfig& c, std::uint64_t seed, RunReport& report) {
    const auto inst = make_instance<Scalar>(c, seed);
    const auto set = critical_points(inst.f, inst.x0.spectrum());
    const auto expected = multinomial_count(inst.x0.blocks());
    const Json params = seed_params(c, seed);

    report.checks.push_back(Check{"critical_count", params,
                                  std::abs(static_cast<double>(set.count) - static_cast<double>(expected)), 0.0,
                                  set.count == expected,
                                  std::to_string(set.count) + " critical points, multinomial " + std::to_string(expected)});
    report.checks.push_back(Check{"critical_gradients_vanish", params, set.max_gradient_norm, 1e-10,
                                  set.max_gradient_norm < 1e-10, "max |s-gradient| over the critical set"});
    const double top = *std::max_element(set.f_values.begin(), set.f_values.end());
    const double gap = top - set.f_values[set.maximizer];
    report.checks.push_back(Check{"maximizer_pairing", params, gap, 1e-12, gap <= 1e-12,
                                  "ascending eigenvalues of x paired with ascending eigenvalues of q maximize f"});

    const auto grid = time_grid(c.t_end, c.samples);
    std::vector<double> fv;
    for (const auto& p : closed_form_flow(inst.f, inst.x0, grid)) fv.push_back(inst.f(p));
    double worst_drop = 0.0;
    for (std::size_t k = 1; k < fv.size(); ++k) worst_drop = std::max(worst_drop, fv[k - 1] - fv[k]);
    report.checks.push_back(Check{"flow_monotone", params, worst_drop, 0.0, nondecreasing(fv),
                                  "largest decrease of f along exp(-tq).x0"});

    const auto qf = self_adjoint_eig<Scalar>(inst.f.q().mat());
    Json points = Json::array();
    for (std::size_t k = 0; k < set.points.size(); ++k) {
        const Mat<Scalar> framed = qf.frame.adjoint() * set.points[k].mat() * qf.frame;
        std::vector<double> assignment;
        for (Eigen::Index i = 0; i < framed.rows(); ++i) assignment.push_back(std::real(framed(i, i)));
        Json jp;
        jp["index"] = k;
        jp["f"] = set.f_values[k];
        jp["assignment"] = std::move(assignment);
        points.push_back(std::move(jp));
    }
    Json detail;
    detail["seed"] = seed;
    detail["q_eigenvalues"] = to_std(qf.eigenvalues);
    detail["critical_points"] = std::move(points);
    report.details["instances"].push_back(std::move(detail));
}

template <class Fn>
RunReport run_seeds(const std::string& command, const RunConfig& c, Fn per_seed) {
    RunReport report;
    report.command = command;
    report.config = config_json(c);
    for (auto seed : c.seeds) per_seed(seed, report);
    return report;
}

}  // namespace

RunReport cmd_decompose(const RunConfig& config) {
    return run_seeds("decompose", config, [&](std::uint64_t seed, RunReport& r) {
        if (config.algebra == Family::SlReal) decompose_seed<double>(config, seed, r);
        else decompose_seed<Complex>(config, seed, r);
    });
}

RunReport cmd_verify_flow(const RunConfig& config) {
    return run_seeds("verify-flow", config, [&](std::uint64_t seed, RunReport& r) {
        if (config.algebra == Family::SlReal) verify_flow_seed<double>(config, seed, r);
        else verify_flow_seed<Complex>(config, seed, r);
    });
}

RunReport cmd_kahler_check(const RunConfig& config) {
    if (config.algebra_given && config.algebra != Family::SuComplexified) {
        throw PreconditionError("kahler-check requires --algebra su_complexified");
    }
    RunConfig c = config;
    c.algebra = Family::SuComplexified;
    return run_seeds("kahler-check", c, [&](std::uint64_t seed, RunReport& r) { kahler_seed(c, seed, r); });
}

RunReport cmd_extrinsic_check(const RunConfig& config) {
    if (config.algebra_given && config.algebra != Family::SlReal) {
        throw PreconditionError("extrinsic-check requires --algebra sl_real");
    }
    return run_seeds("extrinsic-check", config, [&](std::uint64_t seed, RunReport& r) { extrinsic_seed(config, seed, r); });
}

RunReport cmd_morse(const RunConfig& config) {
    return run_seeds("morse", config, [&](std::uint64_t seed, RunReport& r) {
        if (config.algebra == Family::SlReal) morse_seed<double>(config, seed, r);
        else morse_seed<Complex>(config, seed, r);
    });
}

int report_exit_code(const std::string& command, const RunReport& report) {
    const auto failed = report.failed();
    if (command == "decompose" || command == "verify-flow") {
        return failed == 0 ? exit_code::kPass : exit_code::kVerdictFail;
    }
    return static_cast<int>(std::min<std::size_t>(failed, exit_code::kMaxFailedItems));
}

namespace {

struct RawOptions {
    std::string algebra;
    std::size_t n = 0;
    std::string spectrum;
    std::string seed = "0";
    double tol = 1e-10;
    double t_end = 2.0;
    std::size_t samples = 21;
    bool snap = true;
    std::string output = "json";
    std::string out_path;
};

void add_common(CLI::App* sub, RawOptions& o) {
    sub->add_option("--algebra", o.algebra, "sl_real | su_complexified")
        ->check(CLI::IsMember({"sl_real", "su_complexified"}));
    sub->add_option("--n", o.n, "matrix dimension (2..64)");
    sub->add_option("--spectrum", o.spectrum, "comma-separated eigenvalues summing to zero");
    sub->add_option("--seed", o.seed, "seed or inclusive range a..b");
    sub->add_option("--tol", o.tol, "integrator tolerance (1e-13..1e-3)");
    sub->add_option("--t-end", o.t_end, "flow horizon");
    sub->add_option("--samples", o.samples, "samples on the time grid (>= 2)");
    sub->add_flag("--snap,!--no-snap", o.snap, "restore the exact spectrum after each integrator step");
    sub->add_option("--output", o.output, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out_path, "output file (default: standard output)");
}

RunConfig build_config(const RawOptions& o, bool n_given, bool algebra_given) {
    RunConfig c;
    c.algebra_given = algebra_given;
    if (algebra_given) c.algebra = o.algebra == "su_complexified" ? Family::SuComplexified : Family::SlReal;
    if (!o.spectrum.empty()) {
        c.spectrum = parse_spectrum(o.spectrum);
        if (n_given && o.n != c.spectrum->size()) {
            throw PreconditionError("--n " + std::to_string(o.n) + " does not match the spectrum length " +
                                    std::to_string(c.spectrum->size()));
        }
        c.n = c.spectrum->size();
    } else if (n_given) {
        c.n = o.n;
    }
    if (c.n < 2 || c.n > kMaxDim) throw PreconditionError("--n must satisfy 2 <= n <= 64");
    if (!(o.tol >= 1e-13 && o.tol <= 1e-3)) throw PreconditionError("--tol must lie in [1e-13, 1e-3]");
    if (!(o.t_end >= 0.0) || !std::isfinite(o.t_end)) throw PreconditionError("--t-end must be finite and >= 0");
    if (o.samples < 2) throw PreconditionError("--samples must be at least 2");
    c.seeds = parse_seeds(o.seed);
    c.tol = o.tol;
    c.t_end = o.t_end;
    c.samples = o.samples;
    c.snap = o.snap;
    c.output = o.output == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    if (!o.out_path.empty()) c.out_path = o.out_path;
    return c;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gradient flows of height functions on flag manifolds"};
    app.require_subcommand(1, 1);
    RawOptions options;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"decompose", "root-space decomposition at a random orbit point"},
        {"verify-flow", "closed-form exp(-tq).x versus the integrated s-gradient flow"},
        {"kahler-check", "complex structure, Kaehler form and Kaehler flow on adjoint orbits of SU(n)"},
        {"extrinsic-check", "extrinsic symmetric orbits: s-gradient versus ambient gradient"},
        {"morse", "critical points of a generic height function"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, options);
        subs.push_back(sub);
    }

    std::vector<std::string> argv_storage{"flagflow"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::kPass;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kValidation;
    }

    CLI::App* chosen = nullptr;
    for (auto* sub : subs) {
        if (sub->parsed()) chosen = sub;
    }
    const std::string command = chosen->get_name();

    try {
        const RunConfig config = build_config(options, chosen->count("--n") > 0, chosen->count("--algebra") > 0);
        RunReport report;
        if (command == "decompose") report = cmd_decompose(config);
        else if (command == "verify-flow") report = cmd_verify_flow(config);
        else if (command == "kahler-check") report = cmd_kahler_check(config);
        else if (command == "extrinsic-check") report = cmd_extrinsic_check(config);
        else report = cmd_morse(config);

        const std::string text = config.output == OutputFormat::Csv ? to_csv(report) : to_json(report);
        if (config.out_path) {
            std::ofstream file(*config.out_path, std::ios::binary);
            if (!file) throw PreconditionError("cannot open output file " + *config.out_path);
            file << text;
        } else {
            out << text;
        }
        return report_exit_code(command, report);
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code::kDegeneracy;
    }
}

}  // namespace flagflow
