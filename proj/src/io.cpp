#include "aluthge/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aluthge {

namespace {

double number_at(const Json& j, const std::string& what) {
    if (!j.is_number()) throw ParseError(what + ": expected a number, got " + j.dump());
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(what + ": non-finite value");
    return v;
}

}  // namespace

Json matrix_json(const CMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json matrix_file_json(const CMatrix& m, const std::string& label) {
    Json j;
    j["dim"] = m.rows();
    j["entries"] = matrix_json(m);
    if (!label.empty()) j["label"] = label;
    return j;
}

CMatrix matrix_from_json(const Json& j) {
    if (!j.is_object()) throw ParseError("matrix: expected a JSON object");
    if (!j.contains("dim") || !j["dim"].is_number_integer())
        throw ParseError("matrix: missing integer field 'dim'");
    const Eigen::Index dim = j["dim"].get<Eigen::Index>();
    if (dim < 1) throw ParseError("matrix: dim must be >= 1");

    CMatrix m = CMatrix::Zero(dim, dim);
    if (j.contains("entries")) {
        const Json& rows = j["entries"];
        if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != dim)
            throw ParseError("matrix: 'entries' must be an array of " + std::to_string(dim) +
                             " rows");
        for (Eigen::Index i = 0; i < dim; ++i) {
            const Json& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != dim)
                throw ParseError("matrix: entries row " + std::to_string(i) + " must have " +
                                 std::to_string(dim) + " elements");
            for (Eigen::Index c = 0; c < dim; ++c) {
                const Json& cell = row[static_cast<std::size_t>(c)];
                const std::string where =
                    "entries[" + std::to_string(i) + "][" + std::to_string(c) + "]";
                if (!cell.is_array() || cell.size() != 2)
                    throw ParseError("matrix: " + where + " must be [re, im]");
                m(i, c) = Complex(number_at(cell[0], where + ".re"),
                                  number_at(cell[1], where + ".im"));
            }
        }
    } else if (j.contains("records")) {
        const Json& records = j["records"];
        if (!records.is_array()) throw ParseError("matrix: 'records' must be an array");
        std::vector<bool> seen(static_cast<std::size_t>(dim * dim), false);
        for (std::size_t k = 0; k < records.size(); ++k) {
            const std::string where = "records[" + std::to_string(k) + "]";
            const Json& rec = records[k];
            if (!rec.is_array() || rec.size() != 4)
                throw ParseError("matrix: " + where + " must be [row, col, re, im]");
            if (!rec[0].is_number_integer() || !rec[1].is_number_integer())
                throw ParseError("matrix: " + where + ": row/col must be integers");
            const Eigen::Index row = rec[0].get<Eigen::Index>();
            const Eigen::Index col = rec[1].get<Eigen::Index>();
            if (row < 0 || row >= dim || col < 0 || col >= dim)
                throw ParseError("matrix: " + where + ": index (" + std::to_string(row) + "," +
                                 std::to_string(col) + ") out of range for dim " +
                                 std::to_string(dim));
            const std::size_t flat = static_cast<std::size_t>(row * dim + col);
            if (seen[flat])
                throw ParseError("matrix: " + where + ": duplicate entry for (" +
                                 std::to_string(row) + "," + std::to_string(col) + ")");
            seen[flat] = true;
            m(row, col) =
                Complex(number_at(rec[2], where + ".re"), number_at(rec[3], where + ".im"));
        }
    } else {
        throw ParseError("matrix: need either 'entries' or 'records'");
    }
    return m;
}

CMatrix read_matrix_file(const std::string& path) {
    return matrix_from_json(read_json_file(path));
}

void write_matrix_file(const std::string& path, const CMatrix& m, const std::string& label) {
    write_json_file(path, matrix_file_json(m, label));
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

Json complex_json(const Complex& z) {
    return Json::array({z.real(), z.imag()});
}

Json complex_list_json(const std::vector<Complex>& v) {
    Json a = Json::array();
    for (const Complex& z : v) a.push_back(complex_json(z));
    return a;
}

std::vector<Complex> complex_list_from_json(const Json& j, const std::string& what) {
    if (!j.is_array()) throw ParseError(what + ": expected an array");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = what + "[" + std::to_string(i) + "]";
        const Json& e = j[i];
        if (e.is_number()) {
            out.emplace_back(number_at(e, where), 0.0);
        } else if (e.is_array() && e.size() == 2) {
            out.emplace_back(number_at(e[0], where + ".re"), number_at(e[1], where + ".im"));
        } else {
            throw ParseError(where + ": expected a real number or [re, im]");
        }
    }
    return out;
}

std::string trace_csv(const IterationTrace& trace, const CMatrix& limit) {
    std::ostringstream out;
    out.precision(17);
    out << "n,step_norm,normality_defect,dist_to_limit\n";
    for (int n = 1; n <= trace.n_steps; ++n) {
        const std::size_t i = static_cast<std::size_t>(n);
        out << n << ',' << trace.step_norms[i - 1] << ',' << trace.normality_defects[i - 1]
            << ',' << (trace.iterates[i] - limit).norm() << '\n';
    }
    return out.str();
}

Json to_json(const IterationTrace& trace) {
    Json j;
    j["lambda"] = trace.lambda;
    j["stop_reason"] = to_string(trace.stop_reason);
    j["n_steps"] = trace.n_steps;
    j["step_norms"] = trace.step_norms;
    j["normality_defects"] = trace.normality_defects;
    j["final"] = matrix_json(trace.final_iterate());
    return j;
}

Json to_json(const LambdaScan& scan) {
    Json j;
    j["lambdas"] = scan.lambdas;
    Json limits = Json::array();
    for (const CMatrix& m : scan.limits) limits.push_back(matrix_json(m));
    j["limits"] = std::move(limits);
    j["converged"] = scan.converged;
    j["n_steps"] = scan.n_steps;
    j["dispersion"] = scan.dispersion;
    return j;
}

Json to_json(const DerivativeModel& model, const std::vector<Complex>& d) {
    Json j;
    j["d"] = complex_list_json(d);
    j["lambda"] = model.lambda;
    j["k"] = model.k;
    j["J"] = matrix_json(model.J);
    j["K"] = matrix_json(model.K);
    j["M_half_lambda"] = matrix_json(model.M_half_lambda);
    j["Rmat"] = matrix_json(model.Rmat);
    j["Tplus"] = matrix_json(model.Tplus);
    j["Tminus"] = matrix_json(model.Tminus);
    j["Nmat"] = matrix_json(model.Nmat);
    j["Lmat"] = matrix_json(model.Lmat);
    j["H"] = matrix_json(model.H);
    j["H1"] = matrix_json(model.H1);
    j["H2"] = matrix_json(model.H2);
    j["G"] = matrix_json(model.G);
    return j;
}

Json to_json(const Section44Report& r) {
    Json j;
    j["experiment"] = "section44";
    j["atol"] = r.atol;
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json je;
        je["lambda"] = e.lambda;
        je["computed"] = matrix_json(e.computed);
        je["reference"] = matrix_json(e.reference);
        je["max_abs_dev"] = e.max_abs_dev;
        je["n_steps"] = e.n_steps;
        je["runtime_seconds"] = e.runtime_seconds;
        je["normality_defect"] = e.normality_defect;
        je["hermitian"] = e.hermitian;
        je["eigenvalues_31"] = e.eigenvalues_31;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["dispersion"] = r.dispersion;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const ReflectionReport& r) {
    Json j;
    j["experiment"] = "reflection";
    j["seed"] = r.seed;
    j["r"] = r.r;
    j["lambda"] = r.lambda;
    j["n_max"] = r.n_max;
    j["scale"] = r.scale;
    j["reflection_dev"] = r.reflection_dev;
    j["intertwine_dev"] = r.intertwine_dev;
    j["max_closed_form_dev"] = r.max_closed_form_dev;
    j["first_step_dev_from_r"] = r.first_step_dev_from_r;
    j["limit_dev_from_r"] = r.limit_dev_from_r;
    j["limit_steps"] = r.limit_steps;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const PermutationReport& r) {
    Json j;
    j["experiment"] = "permutation";
    j["a"] = r.a;
    j["b"] = r.b;
    j["c"] = r.c;
    j["lambdas"] = r.lambdas;
    j["max_offdiag"] = r.max_offdiag;
    j["max_det_dev"] = r.max_det_dev;
    j["max_limit_dev"] = r.max_limit_dev;
    j["dispersion"] = r.dispersion;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const ConstancyReport& r) {
    Json j;
    j["experiment"] = "con-dos";
    j["d1"] = complex_json(r.d1);
    j["d2"] = complex_json(r.d2);
    j["n"] = r.n;
    j["k"] = r.k;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["dispersions"] = r.dispersions;
    j["max_dispersion"] = r.max_dispersion;
    j["max_block_dev"] = r.max_block_dev;
    j["all_converged"] = r.all_converged;
    j["pass"] = r.pass;
    return j;
}

Json to_json(const WitnessReport& r) {
    Json j;
    j["experiment"] = "witness";
    j["d"] = complex_list_json(r.d);
    j["seed"] = r.seed;
    j["threshold"] = r.threshold;
    j["samples_tried"] = r.samples_tried;
    j["found"] = r.found;
    j["dispersions"] = r.dispersions;
    if (r.found) {
        j["witness_index"] = r.witness_index;
        j["witness"] = matrix_json(r.witness);
        j["witness_dispersion"] = r.witness_dispersion;
    }
    return j;
}

Json to_json(const ConjectureReport& r) {
    Json j;
    j["experiment"] = "conjecture";
    j["d"] = complex_list_json(r.d);
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    j["all_moduli_equal"] = r.all_moduli_equal;
    j["distinct_eigenvalues"] = r.distinct_eigenvalues;
    j["dispersions"] = r.dispersions;
    j["max_dispersion"] = r.max_dispersion;
    if (r.argmax_index >= 0) {
        j["argmax_index"] = r.argmax_index;
        j["argmax_matrix"] = matrix_json(r.argmax_matrix);
    }
    j["note"] = "evidence only; a large dispersion shows non-constancy for the sampled orbit "
                "element, absence of one proves nothing";
    return j;
}

Json to_json(const RatesReport& r) {
    Json j;
    j["experiment"] = "rates";
    j["seed"] = r.seed;
    Json cases = Json::array();
    for (const auto& c : r.cases) {
        Json jc;
        jc["d"] = complex_list_json(c.d);
        jc["lambda"] = c.lambda;
        jc["k"] = c.k;
        jc["transverse_norm"] = c.transverse_norm;
        if (std::isfinite(c.rho_hat))
            jc["rho_hat"] = c.rho_hat;
        else
            jc["rho_hat"] = nullptr;
        jc["n_steps"] = c.n_steps;
        jc["rate_ok"] = c.rate_ok;
        jc["norm_ok"] = c.norm_ok;
        cases.push_back(std::move(jc));
    }
    j["cases"] = std::move(cases);
    j["pass"] = r.pass;
    return j;
}

}  // namespace aluthge
