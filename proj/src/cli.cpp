#include "gfrob/cli.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gfrob/io.hpp"
#include "gfrob/parallel.hpp"
#include "gfrob/verify.hpp"

namespace gfrob::cli {

namespace {

using io::json;

/// Raised for misuse detected after parsing (inconsistent flags, bad inputs).
struct UsageError : Error {
    using Error::Error;
};

struct VerifyArgs {
    std::uint64_t seed = 0;
    std::size_t trials = 100;
    std::size_t dim_max = 20;
    double tol = 1e-9;
    std::string field = "both";
};

struct EstimateArgs {
    std::string target;
    std::string matrix;
    std::string metric_in;
    std::string metric_out;
    std::string law = "sphere";
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
};

struct TrainArgs {
    std::string task = "lsq";
    std::size_t n = 10;
    std::size_t m = 1;
    std::size_t samples = 1000;
    double cond = 1.0;
    double noise = 0.0;
    std::string precond = "none";
    std::string y_metric = "expected-hessian";
    double shrinkage = 1e-3;
    double damping = 1e-6;
    std::optional<double> lr;
    std::size_t iters = 100;
    std::size_t refresh = 1;
    double stop = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string data;
};

struct ReportArgs {
    std::vector<std::string> runs;
    double threshold = 1e-6;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    VerifyOptions opts;
    opts.seed = a.seed;
    opts.trials = a.trials;
    opts.dim_max = a.dim_max;
    opts.tol = a.tol;
    opts.real = a.field != "complex";
    opts.complex = a.field != "real";
    const auto results = run_identity_suite(opts);
    std::size_t passed = 0;
    for (const auto& r : results) {
        out << format_result(r) << '\n';
        if (r.passed()) ++passed;
    }
    out << fmt::format("verify: {}/{} properties passed\n", passed, results.size());
    return passed == results.size() ? kExitOk : kExitCheckFailed;
}

/// Metric from a file, or the standard one when no file is given.
template <Scalar T>
InnerProductSpace<T> load_metric(const std::string& path, std::size_t dim, const char* flag) {
    if (path.empty()) return InnerProductSpace<T>::standard(dim);
    const Matrix<T> g = io::as_field<T>(io::read_matrix(path));
    if (g.rows() != dim || g.cols() != dim)
        throw UsageError(fmt::format("{}: {} is {}x{}, expected {}x{}", path, flag, g.rows(), g.cols(), dim, dim));
    try {
        return InnerProductSpace<T>(g);
    } catch (const Error& e) {
        throw UsageError(fmt::format("{}: {}", path, e.what()));
    }
}

template <Scalar T>
int estimate_in_field(const EstimateArgs& a, const io::AnyMatrix& any, std::ostream& out, std::ostream& err) {
    const Matrix<T> mat = io::as_field<T>(any);
    const LawKind law_kind = parse_law(a.law);
    json report;
    double z = 0.0;
    if (a.target == "trace") {
        if (!a.metric_out.empty()) throw UsageError("--metric-out only applies to --target frobnorm");
        if (!mat.is_square())
            throw UsageError(fmt::format("{}: trace target needs a square matrix, got {}x{}", a.matrix, mat.rows(),
                                         mat.cols()));
        auto space = load_metric<T>(a.metric_in, mat.rows(), "--metric-in");
        const SesquilinearForm<T> form(space, mat);
        const auto r = estimate_metric_trace(form, SamplingLaw<T>{law_kind, space, a.seed}, a.samples);
        report = io::report_to_json(r);
        z = r.z_score();
    } else {
        auto dom = load_metric<T>(a.metric_in, mat.cols(), "--metric-in");
        auto cod = load_metric<T>(a.metric_out, mat.rows(), "--metric-out");
        const MetrizedMap<T> map(dom, cod, mat);
        const auto r = estimate_frob_inner(map, map, SamplingLaw<T>{law_kind, dom, a.seed}, a.samples);
        report = io::report_to_json(r);
        // The squared norm is what the sampler averages; report the norm too.
        report["norm"] = std::sqrt(std::max(real_part(r.estimate), 0.0));
        report["exact_norm"] = frob_norm(map);
        z = r.z_score();
    }
    report["target"] = a.target;
    report["field"] = to_string(field_of<T>);
    out << report.dump(2) << '\n';
    if (!(z <= 6.0)) {
        err << fmt::format("estimate: self-check failed, |estimate - exact| = {:.3g} standard errors (limit 6)\n", z);
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    const auto any = io::read_matrix(a.matrix);
    bool complex_field = io::field_of_any(any) == Field::complex;
    for (const auto* path : {&a.metric_in, &a.metric_out}) {
        if (!path->empty() && io::field_of_any(io::read_matrix(*path)) == Field::complex) complex_field = true;
    }
    return complex_field ? estimate_in_field<complex>(a, any, out, err) : estimate_in_field<double>(a, any, out, err);
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
    const TaskKind kind = a.task == "lsq" ? TaskKind::least_squares : TaskKind::logistic;
    const LossDescriptor loss = loss_for(kind, a.m);

    Dataset data;
    if (!a.data.empty()) {
        data = io::read_dataset(a.data);
        if (data.output_dim() != loss.out_dim)
            throw UsageError(fmt::format("{}: targets have {} columns, --m is {}", a.data, data.output_dim(), a.m));
        try {
            data.validate(loss);
        } catch (const Error& e) {
            throw UsageError(fmt::format("{}: {}", a.data, e.what()));
        }
    } else {
        TaskSpec spec{kind, a.n, a.m, a.samples, a.cond, a.noise, a.seed};
        data = generate_task(spec).data;
    }

    RunConfig cfg;
    cfg.iterations = a.iters;
    cfg.refresh = a.refresh;
    cfg.stop_relative = a.stop;
    cfg.precond.shrinkage = a.shrinkage;
    cfg.precond.damping = a.damping;
    if (a.precond == "covariance" || a.precond == "kfac") cfg.precond.x_metric = XMetric::inv_covariance;
    if (a.precond == "kfac") {
        cfg.precond.y_metric =
            a.y_metric == "empirical-fisher" ? YMetric::empirical_fisher : YMetric::expected_hessian;
    }
    if (a.lr) {
        cfg.step_size = *a.lr;
    } else if (a.precond == "none") {
        cfg.step_size = vanilla_step_size(data, loss, Params::zeros(data.input_dim(), data.output_dim()));
    } else {
        cfg.step_size = 1.0;
    }

    const RunRecord rec = run_gd(data, loss, cfg);

    json config{{"task", a.task},
                {"n", data.input_dim()},
                {"m", data.output_dim()},
                {"N", data.size()},
                {"cond", a.cond},
                {"noise", a.noise},
                {"seed", a.seed},
                {"precond", a.precond},
                {"x_metric", to_string(cfg.precond.x_metric)},
                {"y_metric", to_string(cfg.precond.y_metric)},
                {"shrinkage", a.shrinkage},
                {"damping", a.damping},
                {"lr", cfg.step_size},
                {"iters", a.iters},
                {"refresh", a.refresh},
                {"stop", a.stop},
                {"data", a.data.empty() ? json(nullptr) : json(a.data)}};
    if (!a.out.empty()) io::write_run(a.out, rec, config);

    const auto hit = rec.iterations_to(1e-6);
    json summary{{"precond", a.precond},
                 {"lr", cfg.step_size},
                 {"iterations", rec.rows.empty() ? 0 : rec.rows.back().iter},
                 {"initial_risk", finite_or_null(rec.initial_risk())},
                 {"final_risk", finite_or_null(rec.final_risk())},
                 {"iters_to_1e-6", hit ? json(*hit) : json(nullptr)},
                 {"diverged", rec.diverged}};
    out << summary.dump(2) << '\n';
    if (rec.diverged) {
        err << "train: " << rec.message << '\n';
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_report(const ReportArgs& a, std::ostream& out, std::ostream& err) {
    if (a.runs.empty()) throw UsageError("report needs at least one run prefix");
    json runs = json::array();
    std::vector<std::array<std::string, 6>> table;
    table.push_back({"run", "precond", "iters", "iters_to_thr", "final_risk", "status"});
    for (const auto& prefix : a.runs) {
        const io::StoredRun run = io::read_run(prefix);
        bool diverged = run.rows.empty();
        for (const auto& r : run.rows) {
            if (!std::isfinite(r.risk)) diverged = true;
        }
        if (run.meta.value("diverged", false)) diverged = true;
        std::optional<std::size_t> hit;
        if (!run.rows.empty()) {
            const double target = a.threshold * run.rows.front().risk;
            for (const auto& r : run.rows) {
                if (r.risk <= target) {
                    hit = r.iter;
                    break;
                }
            }
        }
        const double final_risk =
            run.rows.empty() ? std::numeric_limits<double>::quiet_NaN() : run.rows.back().risk;
        const std::size_t iters = run.rows.empty() ? 0 : run.rows.back().iter;
        std::string precond = "?";
        if (run.meta.contains("config") && run.meta["config"].contains("precond"))
            precond = run.meta["config"]["precond"].get<std::string>();
        runs.push_back({{"run", prefix},
                        {"precond", precond},
                        {"iterations", iters},
                        {"iters_to_threshold", hit ? json(*hit) : json(nullptr)},
                        {"final_risk", finite_or_null(final_risk)},
                        {"diverged", diverged}});
        table.push_back({prefix, precond, std::to_string(iters), hit ? std::to_string(*hit) : "-",
                         fmt::format("{:.6e}", final_risk), diverged ? "DIVERGED" : "ok"});
    }
    std::array<std::size_t, 6> width{};
    for (const auto& row : table)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    for (const auto& row : table) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += fmt::format("{:<{}}", row[c], width[c]);
            if (c + 1 < row.size()) line += "  ";
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        err << line << '\n';
    }
    out << json{{"threshold", a.threshold}, {"runs", runs}}.dump(2) << '\n';
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Generalized Frobenius norms, metric traces and metric-preconditioned descent", "gfrob"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    int threads = 0;
    app.add_option("--threads", threads, "Cap on worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "Cross-formula identity suite on random instances");
    verify->add_option("--seed", va.seed, "Random seed");
    verify->add_option("--trials", va.trials, "Instances per field")->check(CLI::PositiveNumber);
    verify->add_option("--dim-max", va.dim_max, "Largest dimension drawn")->check(CLI::PositiveNumber);
    verify->add_option("--tol", va.tol, "Base tolerance; all thresholds scale with it")->check(CLI::PositiveNumber);
    verify->add_option("--field", va.field, "real, complex or both")
        ->check(CLI::IsMember({"real", "complex", "both"}));

    EstimateArgs ea;
    auto* estimate = app.add_subcommand("estimate", "Monte-Carlo metric trace or Frobenius-type norm");
    estimate->add_option("--target", ea.target, "trace or frobnorm")
        ->required()
        ->check(CLI::IsMember({"trace", "frobnorm"}));
    estimate->add_option("--matrix", ea.matrix, "Form or map matrix (JSON)")->required();
    estimate->add_option("--metric-in", ea.metric_in, "Gram matrix of the (domain) space; identity if absent");
    estimate->add_option("--metric-out", ea.metric_out, "Gram matrix of the codomain (frobnorm only)");
    estimate->add_option("--law", ea.law, "sphere, ball or gaussian")
        ->check(CLI::IsMember({"sphere", "ball", "gaussian"}));
    estimate->add_option("--samples", ea.samples, "Number of draws")->check(CLI::PositiveNumber);
    estimate->add_option("--seed", ea.seed, "Random seed");

    TrainArgs ta;
    auto* train = app.add_subcommand("train", "Gradient descent on a synthetic single-layer task");
    train->add_option("--task", ta.task, "lsq or logistic")->check(CLI::IsMember({"lsq", "logistic"}));
    train->add_option("--n", ta.n, "Input dimension")->check(CLI::PositiveNumber);
    train->add_option("--m", ta.m, "Output dimension")->check(CLI::PositiveNumber);
    train->add_option("--N", ta.samples, "Sample count")->check(CLI::PositiveNumber);
    train->add_option("--cond", ta.cond, "Input covariance condition number")->check(CLI::Range(1.0, 1e300));
    train->add_option("--noise", ta.noise, "Target noise level")->check(CLI::NonNegativeNumber);
    train->add_option("--precond", ta.precond, "none, covariance or kfac")
        ->check(CLI::IsMember({"none", "covariance", "kfac"}));
    train->add_option("--y-metric", ta.y_metric, "Output metric for kfac")
        ->check(CLI::IsMember({"expected-hessian", "empirical-fisher"}));
    train->add_option("--shrinkage", ta.shrinkage, "Covariance shrinkage")->check(CLI::NonNegativeNumber);
    train->add_option("--damping", ta.damping, "Output metric damping")->check(CLI::NonNegativeNumber);
    train->add_option("--lr", ta.lr, "Step size (default 1, or 1/L for --precond none)")
        ->check(CLI::PositiveNumber);
    train->add_option("--iters", ta.iters, "Iteration budget")->check(CLI::PositiveNumber);
    train->add_option("--refresh", ta.refresh, "Rebuild the output metric every k iterations")
        ->check(CLI::PositiveNumber);
    train->add_option("--stop", ta.stop, "Stop once risk <= stop * initial risk")->check(CLI::NonNegativeNumber);
    train->add_option("--seed", ta.seed, "Random seed");
    train->add_option("--out", ta.out, "Write PREFIX.csv and PREFIX.json");
    train->add_option("--data", ta.data, "Train on a dataset file instead of a generated task");

    ReportArgs ra;
    auto* report = app.add_subcommand("report", "Compare persisted runs");
    report->add_option("--runs", ra.runs, "Run prefixes")->required()->expected(1, -1);
    report->add_option("--threshold", ra.threshold, "Relative risk threshold")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    parallel::set_thread_count(threads);
    try {
        if (*verify) return cmd_verify(va, out);
        if (*estimate) return cmd_estimate(ea, out, err);
        if (*train) return cmd_train(ta, out, err);
        return cmd_report(ra, out, err);
    } catch (const ConsistencyError& e) {
        err << "gfrob: " << e.what() << '\n';
        return kExitCheckFailed;
    } catch (const Error& e) {
        err << "gfrob: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace gfrob::cli
