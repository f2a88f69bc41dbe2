#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aluthge/experiments.hpp"
#include "aluthge/tangent.hpp"
#include "aluthge/transform.hpp"
#include "aluthge/types.hpp"

namespace aluthge {

using Json = nlohmann::ordered_json;

// Dense nested-array form: [[ [re, im], ... ], ...].
Json matrix_json(const CMatrix& m);

// Matrix file object: {"dim": r, "entries": <dense form>} plus optional
// metadata. Doubles are emitted in shortest round-trip form, so
// read(write(m)) == m bit-exactly for finite entries.
Json matrix_file_json(const CMatrix& m, const std::string& label = "");

// Accepts either the dense "entries" form or the sparse
// "records": [[row, col, re, im], ...] form (0-based indices, omitted
// entries are zero). Throws ParseError naming the offending record.
CMatrix matrix_from_json(const Json& j);

CMatrix read_matrix_file(const std::string& path);
void write_matrix_file(const std::string& path, const CMatrix& m,
                       const std::string& label = "");

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

// Complex scalar as [re, im]; list of complex values likewise.
Json complex_json(const Complex& z);
Json complex_list_json(const std::vector<Complex>& v);
std::vector<Complex> complex_list_from_json(const Json& j, const std::string& what);

// Per-iteration trace table. Columns: n, step_norm, normality_defect,
// dist_to_limit.
std::string trace_csv(const IterationTrace& trace, const CMatrix& limit);

Json to_json(const IterationTrace& trace);
Json to_json(const LambdaScan& scan);
Json to_json(const DerivativeModel& model, const std::vector<Complex>& d);
Json to_json(const Section44Report& r);
Json to_json(const ReflectionReport& r);
Json to_json(const PermutationReport& r);
Json to_json(const ConstancyReport& r);
Json to_json(const WitnessReport& r);
Json to_json(const ConjectureReport& r);
Json to_json(const RatesReport& r);

}  // namespace aluthge
