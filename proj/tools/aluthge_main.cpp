// Command-line front end: transform / limit / model / experiment.
//
// Exit codes: 0 success; 2 input parse error; 3 domain error (lambda out of
// range, singular diagonal); 4 convergence failure (partial results are
// still written); 5 unknown experiment name; 1 anything else.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aluthge/experiments.hpp"
#include "aluthge/io.hpp"
#include "aluthge/linalg.hpp"
#include "aluthge/tangent.hpp"
#include "aluthge/transform.hpp"

namespace {

using namespace aluthge;

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitUnknownExperiment = 5;
constexpr int kExitOther = 1;

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos) next = text.size();
        const std::string piece = text.substr(pos, next - pos);
        try {
            grid.push_back(std::stod(piece));
        } catch (const std::exception&) {
            throw ParseError("cannot parse lambda value '" + piece + "'");
        }
        pos = next + 1;
    }
    if (grid.empty()) throw ParseError("empty lambda grid");
    return grid;
}

Complex parse_complex(const std::string& spec, const std::string& what) {
    Json j;
    try {
        j = Json::parse(spec);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw ParseError(what + ": expected a real number or [re, im]");
}

std::vector<Complex> parse_diag_spec(const std::string& spec, bool polar) {
    if (!polar) {
        if (spec == "cube-roots") {
            std::vector<Complex> d;
            for (int k = 0; k < 3; ++k) d.push_back(std::polar(1.0, 2.0 * M_PI * k / 3.0));
            return d;
        }
        if (spec == "reflection") return {Complex(1, 0), Complex(-1, 0)};
    }
    Json j;
    try {
        j = Json::parse(spec);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("diagonal spec: ") + e.what());
    }
    std::vector<Complex> values = complex_list_from_json(j, "diagonal spec");
    if (polar) {
        for (Complex& z : values) z = std::polar(z.real(), z.imag());
    }
    return values;
}

StopPolicy policy_for(const CMatrix& t, double step_tol, double normality_tol, int max_iters) {
    StopPolicy p = StopPolicy::defaults_for(t);
    if (step_tol > 0) p.step_tol = step_tol;
    if (normality_tol > 0) p.normality_tol = normality_tol;
    if (max_iters > 0) p.max_iters = max_iters;
    return p;
}

std::string stem_of(const std::string& path) {
    const std::size_t dot = path.find_last_of('.');
    const std::size_t slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path;
    return path.substr(0, dot);
}

int run_transform(const std::string& in_path, double lambda, const std::string& out_path,
                  std::string sidecar_path) {
    const CMatrix t = read_matrix_file(in_path);
    if (!all_finite(t)) throw ParseError("'" + in_path + "': matrix has non-finite entries");
    const CMatrix result = transform(t, lambda);
    write_matrix_file(out_path, result, "transform lambda=" + std::to_string(lambda));

    if (sidecar_path.empty()) sidecar_path = stem_of(out_path) + ".sidecar.json";
    Json side;
    side["lambda"] = lambda;
    side["char_poly_before"] = complex_list_json(char_poly(t));
    side["char_poly_after"] = complex_list_json(char_poly(result));
    side["frobenius_norm_before"] = frobenius_norm(t);
    side["frobenius_norm_after"] = frobenius_norm(result);
    side["normality_defect_before"] = normality_defect(t);
    side["normality_defect_after"] = normality_defect(result);
    write_json_file(sidecar_path, side);

    std::cout << "wrote " << out_path << " and " << sidecar_path << "\n";
    return kExitOk;
}

int run_limit(const std::string& in_path, const std::vector<double>& grid, double step_tol,
              double normality_tol, int max_iters, const std::string& out_path,
              const std::string& format) {
    const CMatrix t = read_matrix_file(in_path);
    if (!all_finite(t)) throw ParseError("'" + in_path + "': matrix has non-finite entries");
    const StopPolicy policy = policy_for(t, step_tol, normality_tol, max_iters);

    Json report;
    report["input"] = matrix_file_json(t);
    report["policy"] = {{"step_tol", policy.step_tol},
                        {"normality_tol", policy.normality_tol},
                        {"max_iters", policy.max_iters}};

    bool all_converged = true;
    Json results = Json::array();
    std::vector<CMatrix> limits;
    std::vector<bool> converged;
    for (double lambda : grid) {
        const IterationTrace trace = iterate(t, lambda, policy);
        const bool ok = trace.stop_reason == StopReason::Converged;
        all_converged = all_converged && ok;
        const CMatrix& lim = trace.final_iterate();
        limits.push_back(lim);
        converged.push_back(ok);

        Json entry;
        entry["lambda"] = lambda;
        entry["converged"] = ok;
        entry["stop_reason"] = to_string(trace.stop_reason);
        entry["n_steps"] = trace.n_steps;
        entry["limit"] = matrix_json(lim);
        entry["normality_defect"] = normality_defect(lim);
        entry["spectrum_preserved"] = spectra_match(t, lim, 1e-6 * std::max(1.0, t.norm()));
        try {
            const RateFitResult fit = rate_fit(trace, lim);
            entry["rho_hat"] = fit.rho_hat;
            entry["r_squared"] = fit.r_squared;
        } catch (const InsufficientData&) {
            entry["rho_hat"] = nullptr;
            entry["r_squared"] = nullptr;
        }
        results.push_back(std::move(entry));

        if (format == "csv") {
            const std::string csv_path =
                stem_of(out_path) + "-trace-" + std::to_string(results.size() - 1) + ".csv";
            std::ofstream csv(csv_path);
            if (!csv) throw Error("cannot write '" + csv_path + "'");
            csv << trace_csv(trace, lim);
        }
    }
    double dispersion = 0.0;
    for (std::size_t i = 0; i < limits.size(); ++i)
        for (std::size_t j = i + 1; j < limits.size(); ++j)
            if (converged[i] && converged[j])
                dispersion = std::max(dispersion, (limits[i] - limits[j]).norm());
    report["results"] = std::move(results);
    report["dispersion"] = dispersion;
    write_json_file(out_path, report);

    std::cout << "wrote " << out_path << " (dispersion " << dispersion << ")\n";
    return all_converged ? kExitOk : kExitNoConvergence;
}

int run_model(const std::vector<Complex>& d, double lambda, const std::string& out_path) {
    const DiagonalPoint point(d);
    const DerivativeModel model = build_model(point, lambda);
    write_json_file(out_path, to_json(model, d));
    std::cout << "wrote " << out_path << " (k = " << model.k << ")\n";
    return kExitOk;
}

struct ExperimentOptions {
    std::uint64_t seed = 1;
    int samples = -1;
    double cond_bound = 20.0;
    double lambda = 0.5;
    int r = 4;
    int n_max = 50;
    double threshold = 0.1;
    double a = 2.0, b = 3.0;
    std::optional<double> c;
    std::string d_spec;
    bool d_polar = false;
    std::string d1_spec = "2";
    std::string d2_spec = "-2";
    int block_n = 1, block_k = 1;
    int cases = 30;
    std::string out;
};

int run_experiment(const std::string& name, const ExperimentOptions& opt) {
    Json report;
    std::string summary;

    auto diag_or = [&](const std::vector<Complex>& fallback) {
        return opt.d_spec.empty() ? fallback : parse_diag_spec(opt.d_spec, opt.d_polar);
    };

    if (name == "section44") {
        const Section44Report r = reproduce_section44();
        report = to_json(r);
        summary = std::string(r.pass ? "PASS" : "FAIL") +
                  " section44: max deviations " + std::to_string(r.entries[0].max_abs_dev) +
                  " (lambda 0.3), " + std::to_string(r.entries[1].max_abs_dev) +
                  " (lambda 0.7), dispersion " + std::to_string(r.dispersion);
    } else if (name == "reflection") {
        const ReflectionReport r = reflection_oracle(opt.seed, opt.r, opt.lambda, opt.n_max);
        report = to_json(r);
        summary = std::string(r.pass ? "PASS" : "FAIL") + " reflection: closed-form dev " +
                  std::to_string(r.max_closed_form_dev) + ", limit dev " +
                  std::to_string(r.limit_dev_from_r) + " over " +
                  std::to_string(r.limit_steps) + " steps";
    } else if (name == "permutation") {
        const double c = opt.c ? *opt.c : 1.0 / (opt.a * opt.b);
        const PermutationReport r = permutation_example(opt.a, opt.b, c);
        report = to_json(r);
        summary = std::string(r.pass ? "PASS" : "FAIL") + " permutation: limit dev " +
                  std::to_string(r.max_limit_dev) + ", dispersion " +
                  std::to_string(r.dispersion);
    } else if (name == "con-dos") {
        const Complex d1 = parse_complex(opt.d1_spec, "--d1");
        const Complex d2 = parse_complex(opt.d2_spec, "--d2");
        const int samples = opt.samples > 0 ? opt.samples : 20;
        const ConstancyReport r = two_eigenvalue_constancy(d1, d2, opt.block_n, opt.block_k,
                                                           samples, opt.seed, opt.cond_bound);
        report = to_json(r);
        summary = std::string(r.pass ? "PASS" : "FAIL") + " con-dos: max dispersion " +
                  std::to_string(r.max_dispersion) + " over " + std::to_string(samples) +
                  " samples";
    } else if (name == "witness") {
        const auto d = diag_or({Complex(3, 0), Complex(1, 0)});
        const int samples = opt.samples > 0 ? opt.samples : 10;
        const WitnessReport r =
            nonconstancy_witness(d, opt.seed, opt.threshold, samples, opt.cond_bound);
        report = to_json(r);
        summary = r.found ? "witness found at sample " + std::to_string(r.witness_index) +
                                " with dispersion " + std::to_string(r.witness_dispersion)
                          : "no witness found in " + std::to_string(r.samples_tried) +
                                " samples (not a disproof)";
    } else if (name == "conjecture") {
        const auto d = diag_or(parse_diag_spec("cube-roots", false));
        const int samples = opt.samples > 0 ? opt.samples : 50;
        const ConjectureReport r = conjecture_probe(d, samples, opt.seed, opt.cond_bound);
        report = to_json(r);
        summary = "conjecture probe: max dispersion " + std::to_string(r.max_dispersion) +
                  " over " + std::to_string(samples) + " samples (" +
                  std::to_string(r.distinct_eigenvalues) + " distinct eigenvalues)";
    } else if (name == "rates") {
        const RatesReport r = rates_experiment(opt.cases, opt.seed);
        report = to_json(r);
        int rate_fails = 0, norm_fails = 0;
        for (const auto& c : r.cases) {
            if (!c.rate_ok) ++rate_fails;
            if (!c.norm_ok) ++norm_fails;
        }
        summary = std::string(r.pass ? "PASS" : "FAIL") + " rates: " +
                  std::to_string(r.cases.size()) + " cases, " + std::to_string(rate_fails) +
                  " rate violations, " + std::to_string(norm_fails) + " norm violations";
    } else {
        std::cerr << "unknown experiment '" << name
                  << "' (expected section44 | reflection | permutation | con-dos | witness | "
                     "conjecture | rates)\n";
        return kExitUnknownExperiment;
    }

    const std::string out = opt.out.empty() ? name + "-report.json" : opt.out;
    write_json_file(out, report);
    std::cout << summary << "\n" << "wrote " << out << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lambda-Aluthge transform toolkit"};
    app.require_subcommand(1);

    // transform
    auto* cmd_transform = app.add_subcommand("transform", "apply one transform step");
    std::string t_in, t_out = "transformed.json", t_sidecar;
    double t_lambda = 0.5;
    cmd_transform->add_option("--in", t_in, "input matrix file")->required();
    cmd_transform->add_option("--lambda", t_lambda, "lambda in (0,1)");
    cmd_transform->add_option("--out", t_out, "output matrix file");
    cmd_transform->add_option("--sidecar", t_sidecar, "sidecar JSON path");

    // limit
    auto* cmd_limit = app.add_subcommand("limit", "iterate to the normal limit");
    std::string l_in, l_out = "limit-report.json", l_grid_text, l_format = "json";
    double l_lambda = -1.0, l_step_tol = 0.0, l_normality_tol = 0.0;
    int l_max_iters = 0;
    cmd_limit->add_option("--in", l_in, "input matrix file")->required();
    cmd_limit->add_option("--lambda", l_lambda, "single lambda");
    cmd_limit->add_option("--lambda-grid", l_grid_text, "comma-separated lambdas");
    cmd_limit->add_option("--step-tol", l_step_tol, "absolute step tolerance")
        ->check(CLI::PositiveNumber);
    cmd_limit->add_option("--normality-tol", l_normality_tol, "absolute normality tolerance")
        ->check(CLI::PositiveNumber);
    cmd_limit->add_option("--max-iters", l_max_iters, "iteration cap")
        ->check(CLI::PositiveNumber);
    cmd_limit->add_option("--format", l_format, "json | csv (csv adds per-lambda traces)")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd_limit->add_option("--out", l_out, "report path");

    // model
    auto* cmd_model = app.add_subcommand("model", "derivative model at a diagonal point");
    std::string m_d, m_d_polar, m_out = "model.json";
    double m_lambda = 0.5;
    cmd_model->add_option("--d", m_d, "diagonal as JSON ([re,im] or plain reals)");
    cmd_model->add_option("--d-polar", m_d_polar, "diagonal as JSON [modulus, phase] pairs");
    cmd_model->add_option("--lambda", m_lambda, "lambda in (0,1)");
    cmd_model->add_option("--out", m_out, "output path");

    // experiment
    auto* cmd_exp = app.add_subcommand("experiment", "run a named experiment");
    std::string e_name;
    ExperimentOptions opt;
    std::string e_d, e_d_polar;
    double e_c = 0.0;
    cmd_exp->add_option("name", e_name, "experiment name")->required();
    cmd_exp->add_option("--seed", opt.seed, "random seed");
    cmd_exp->add_option("--samples", opt.samples, "orbit sample count");
    cmd_exp->add_option("--cond-bound", opt.cond_bound, "conditioning bound for sampling");
    cmd_exp->add_option("--lambda", opt.lambda, "lambda (reflection)");
    cmd_exp->add_option("--r", opt.r, "dimension (reflection)");
    cmd_exp->add_option("--n-max", opt.n_max, "iterations checked against the closed form");
    cmd_exp->add_option("--threshold", opt.threshold, "dispersion threshold (witness)");
    cmd_exp->add_option("--a", opt.a, "permutation parameter a");
    cmd_exp->add_option("--b", opt.b, "permutation parameter b");
    cmd_exp->add_option("--c", e_c, "permutation parameter c (default 1/(a*b))");
    cmd_exp->add_option("--d", e_d, "diagonal spec (JSON or 'cube-roots')");
    cmd_exp->add_option("--d-polar", e_d_polar, "diagonal spec in polar form");
    cmd_exp->add_option("--d1", opt.d1_spec, "first eigenvalue (con-dos)");
    cmd_exp->add_option("--d2", opt.d2_spec, "second eigenvalue (con-dos)");
    cmd_exp->add_option("--n", opt.block_n, "multiplicity of d1 (con-dos)");
    cmd_exp->add_option("--k", opt.block_k, "multiplicity of d2 (con-dos)");
    cmd_exp->add_option("--cases", opt.cases, "case count (rates)");
    cmd_exp->add_option("--out", opt.out, "report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_transform->parsed()) {
            require_lambda(t_lambda);
            return run_transform(t_in, t_lambda, t_out, t_sidecar);
        }
        if (cmd_limit->parsed()) {
            std::vector<double> grid;
            if (!l_grid_text.empty())
                grid = parse_grid(l_grid_text);
            else if (l_lambda >= 0.0)
                grid = {l_lambda};
            else
                grid = {0.5};
            for (double l : grid) require_lambda(l);
            return run_limit(l_in, grid, l_step_tol, l_normality_tol, l_max_iters, l_out,
                             l_format);
        }
        if (cmd_model->parsed()) {
            require_lambda(m_lambda);
            std::vector<Complex> d;
            if (!m_d.empty())
                d = parse_diag_spec(m_d, false);
            else if (!m_d_polar.empty())
                d = parse_diag_spec(m_d_polar, true);
            else
                throw ParseError("model: need --d or --d-polar");
            return run_model(d, m_lambda, m_out);
        }
        if (cmd_exp->parsed()) {
            if (!e_d.empty()) {
                opt.d_spec = e_d;
                opt.d_polar = false;
            } else if (!e_d_polar.empty()) {
                opt.d_spec = e_d_polar;
                opt.d_polar = true;
            }
            if (e_c != 0.0) opt.c = e_c;
            return run_experiment(e_name, opt);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const LambdaOutOfRange& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const SingularD& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const DidNotConverge& e) {
        std::cerr << "did not converge: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOther;
    }
    return kExitOther;
}
