#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>

#include "aluthge/io.hpp"
#include "test_support.hpp"

using namespace aluthge;
using namespace aluthge::testing;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/aluthge_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

bool bit_equal(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return std::memcmp(a.data(), b.data(),
                       sizeof(Complex) * static_cast<std::size_t>(a.size())) == 0;
}

}  // namespace

TEST_CASE("dense matrix JSON round-trips bit-exactly") {
    Rng rng(1);
    TempFile file("roundtrip.json");
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix m = rng.gaussian_matrix(2 + trial % 4);
        m *= std::pow(10.0, rng.uniform(-12.0, 12.0));
        m(0, 0) = Complex(0.1, -0.3);  // classic non-representable decimals
        write_matrix_file(file.path, m);
        const CMatrix back = read_matrix_file(file.path);
        CHECK(bit_equal(m, back));
    }
}

TEST_CASE("in-memory JSON round-trip keeps extreme finite doubles") {
    CMatrix m(2, 2);
    m << Complex(5e-324, 2.2250738585072014e-308), Complex(1.7976931348623157e308, -0.0),
        Complex(1.0 / 3.0, M_PI), Complex(-2.5e-15, 1e300);
    const CMatrix back = matrix_from_json(matrix_file_json(m));
    CHECK(bit_equal(m, back));
}

TEST_CASE("records form parses sparse input") {
    Json j;
    j["dim"] = 2;
    j["records"] = Json::array({Json::array({0, 1, 1.5, -2.0})});
    const CMatrix m = matrix_from_json(j);
    CHECK(m(0, 1) == Complex(1.5, -2.0));
    CHECK(m(0, 0) == Complex(0, 0));
    CHECK(m(1, 0) == Complex(0, 0));
}

TEST_CASE("malformed records name the offending entry") {
    Json j;
    j["dim"] = 2;
    j["records"] = Json::array({Json::array({0, 0, 1.0, 0.0}), Json::array({5, 0, 1.0, 0.0})});
    try {
        matrix_from_json(j);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("records[1]") != std::string::npos);
    }

    Json dup;
    dup["dim"] = 2;
    dup["records"] =
        Json::array({Json::array({0, 0, 1.0, 0.0}), Json::array({0, 0, 2.0, 0.0})});
    try {
        matrix_from_json(dup);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("records[1]") != std::string::npos);
        CHECK(std::string(e.what()).find("duplicate") != std::string::npos);
    }
}

TEST_CASE("dense form rejects shape and value defects") {
    Json j;
    j["dim"] = 2;
    j["entries"] = Json::array({Json::array({Json::array({1.0, 0.0})})});
    CHECK_THROWS_AS(matrix_from_json(j), ParseError);

    Json nf;
    nf["dim"] = 1;
    nf["entries"] = Json::array({Json::array({Json::array({"oops", 0.0})})});
    CHECK_THROWS_AS(matrix_from_json(nf), ParseError);

    Json missing;
    missing["dim"] = 1;
    CHECK_THROWS_AS(matrix_from_json(missing), ParseError);
}

TEST_CASE("complex list parsing accepts plain reals and pairs") {
    const Json j = Json::parse("[2, [0, 1], -3.5]");
    const auto v = complex_list_from_json(j, "d");
    REQUIRE(v.size() == 3);
    CHECK(v[0] == Complex(2, 0));
    CHECK(v[1] == Complex(0, 1));
    CHECK(v[2] == Complex(-3.5, 0));
}

TEST_CASE("trace CSV has the fixed column layout") {
    const CMatrix t = mat2(3, 0, -2, 1);
    const IterationTrace trace = iterate(t, 0.3, StopPolicy::defaults_for(t));
    const std::string csv = trace_csv(trace, trace.final_iterate());
    CHECK(csv.rfind("n,step_norm,normality_defect,dist_to_limit\n", 0) == 0);
    // one row per step plus the header
    const auto rows = std::count(csv.begin(), csv.end(), '\n');
    CHECK(rows == trace.n_steps + 1);
}

TEST_CASE("model JSON carries every entrywise matrix and k") {
    const DiagonalPoint d({Complex(1, 0), Complex(2, 0)});
    const Json j = to_json(build_model(d, 0.5), d.values());
    for (const char* key : {"J", "K", "M_half_lambda", "Rmat", "Tplus", "Tminus", "Nmat",
                            "Lmat", "H", "H1", "H2", "G"})
        CHECK(j.contains(key));
    CHECK(j["k"].get<double>() == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0));
    CHECK(j["lambda"].get<double>() == 0.5);
}

TEST_CASE("report JSON serialization is byte-stable across calls") {
    const Section44Report report = reproduce_section44();
    const Json once = to_json(report);
    const Json twice = to_json(report);
    CHECK(once.dump(2) == twice.dump(2));
    CHECK(once["pass"].get<bool>() == report.pass);
}

TEST_CASE("scan JSON mirrors the scan contents") {
    const CMatrix t = mat2(3, 0, -2, 1);
    const LambdaScan scan = lambda_scan(t, {0.3, 0.7}, StopPolicy::defaults_for(t));
    const Json j = to_json(scan);
    CHECK(j["lambdas"].size() == 2);
    CHECK(j["dispersion"].get<double>() == doctest::Approx(scan.dispersion));
    const CMatrix first = matrix_from_json(
        Json{{"dim", 2}, {"entries", j["limits"][0]}});
    CHECK(bit_equal(first, scan.limits[0]));
}
