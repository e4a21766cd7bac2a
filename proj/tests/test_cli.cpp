#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "primehit/cli.hpp"
#include "primehit/decimal.hpp"

using namespace primehit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::main_entry(args, out, err);
    return {code, out.str(), err.str()};
}

const Outcome& default_exact() {
    static const Outcome o = call({"exact"});
    return o;
}

fs::path scratch_dir() {
    const fs::path p = fs::temp_directory_path() / "primehit_cli_test";
    fs::create_directories(p);
    return p;
}

fs::path write_file(const std::string& name, const std::string& body) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << body;
    return p;
}

double sci_value(const json& v) { return std::stod(v.get<std::string>()); }

} // namespace

TEST_CASE("default exact run") {
    const Outcome& o = default_exact();
    REQUIRE(o.code == 0);
    const json doc = json::parse(o.out);
    for (const char* key : {"config", "results", "assumptions", "timings", "version"}) {
        CHECK(doc.contains(key));
    }
    const json& r = doc["results"];
    CHECK(r["E_K"] == "2.428497913693504");
    CHECK(r["Var_K"] == "6.242778668279075");
    CHECK(r["certified"] == true);
    CHECK(sci_value(r["R_upper"]) <= 7e-8);
    CHECK(sci_value(r["RV_abs_upper"]) < 1e-4);
    CHECK(sci_value(r["E_interval_width"]) <= 1e-7);
    CHECK(sci_value(r["Var_interval_width"]) < 2e-4);
    CHECK(r["E_interval"][0].get<std::string>() <= "2.428497913693504");
    CHECK(r["E_K_exact"]["base"] == 6);
    CHECK(r["E_K_exact"]["denominator_exponent"] == 999);
    CHECK(doc["assumptions"].size() >= 2);
}

TEST_CASE("exact fraction round-trips to the decimal string") {
    const json r = json::parse(default_exact().out)["results"];
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 6, r["E_K_exact"]["denominator_exponent"].get<unsigned long>());
    mpq_class e(mpz_class(r["E_K_exact"]["numerator"].get<std::string>(), 10), den);
    e.canonicalize();
    CHECK(render_decimal(e, 15, Round::nearest) == r["E_K"].get<std::string>());
}

TEST_CASE("single-roll truncation") {
    const Outcome o = call({"exact", "--k-max", "1", "--sieve-limit", "100"});
    CHECK(o.code == 0);
    const json r = json::parse(o.out)["results"];
    CHECK(r["E_K"] == "1.000000000000000");
    CHECK(r["Var_K"] == "0.000000000000000");
    CHECK(r["certified"] == false);
    CHECK_FALSE(o.err.empty());
}

TEST_CASE("bounds") {
    const Outcome bad = call({"bounds", "--k-max", "999"});
    CHECK(bad.code == cli::exit_code::config);

    const Outcome o = call({"bounds", "--sieve-limit", "300000"});
    REQUIRE(o.code == 0);
    const json r = json::parse(o.out)["results"];
    CHECK(sci_value(r["R_upper"]) <= 7e-8);
    CHECK(sci_value(r["bound_r"]) <= 7e-8);
    CHECK(r["tail_sums"]["first_moment"]["argmax"] == 1050);
    CHECK(r["tail_sums"]["second_moment"]["argmax"] == 1051);

    const Outcome csv = call({"bounds", "--sieve-limit", "300000", "--format", "csv"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("quantity,value\nR_upper,", 0) == 0);
}

TEST_CASE("simulate") {
    const Outcome one = call({"simulate", "--reps", "1", "--seed", "7", "--sieve-limit", "100000"});
    REQUIRE(one.code == 0);
    const json r = json::parse(one.out)["results"];
    CHECK(r["degenerate"] == true);
    CHECK(r["variance"] == 0.0);

    const std::vector<std::string> base = {"simulate", "--reps", "200000", "--seed", "11",
                                           "--sieve-limit", "100000", "--no-timings"};
    const Outcome a = call(base);
    const Outcome b = call(base);
    std::vector<std::string> four = base;
    four.insert(four.end(), {"--workers", "4"});
    const Outcome c = call(four);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(json::parse(a.out)["timings"].empty());
    const json ra = json::parse(a.out)["results"];
    const json rc = json::parse(c.out)["results"];
    CHECK(ra == rc);

    const Outcome csv = call({"simulate", "--reps", "1000", "--sieve-limit", "100000", "--format", "csv"});
    CHECK(csv.out.rfind("tau,count\n1,", 0) == 0);
    CHECK(csv.out.find("\noverflow,") != std::string::npos);
}

TEST_CASE("verify") {
    const Outcome o = call({"verify", "--sieve-limit", "5000"});
    CHECK(o.code == 0);
    const json sweeps = json::parse(o.out)["results"]["sweeps"];
    REQUIRE(sweeps.size() == 4);
    for (const auto& s : sweeps) CHECK(s["passed"] == true);

    std::vector<std::uint8_t> flags(10'001, 0);
    for (std::uint64_t n = 0; n < flags.size(); ++n) flags[n] = oracle::trial_division_prime(n);
    flags[1] = 1;
    const PrimeTable corrupt = PrimeTable::from_flags(flags);
    cli::RunConfig config;
    config.command = cli::Command::verify;
    config.sieve_limit = 10'000;
    config.format = cli::Format::text;
    std::ostringstream out, err;
    CHECK(cli::run(config, out, err, &corrupt) == cli::exit_code::verification_failed);
    CHECK(out.str().find("(k=1, n=6)") != std::string::npos);
}

TEST_CASE("custom targets") {
    const fs::path good = write_file("target.txt", "# small target\n2\n\n3\n5\n");
    const Outcome e = call({"exact", "--k-max", "20", "--sieve-limit", "200", "--target", good.string()});
    CHECK(e.code == cli::exit_code::certification_refused);
    CHECK(e.err.find("tail certification unavailable for custom targets") != std::string::npos);
    CHECK(json::parse(e.out)["results"].contains("E_K"));

    const Outcome b = call({"bounds", "--target", good.string()});
    CHECK(b.code == cli::exit_code::certification_refused);

    const fs::path bad = write_file("bad_target.txt", "2\nseven\n");
    CHECK(call({"exact", "--k-max", "20", "--target", bad.string()}).code == cli::exit_code::config);
    const fs::path low = write_file("low_target.txt", "1\n");
    CHECK(call({"exact", "--k-max", "20", "--target", low.string()}).code == cli::exit_code::config);
    CHECK(call({"exact", "--target", (scratch_dir() / "missing.txt").string()}).code ==
          cli::exit_code::config);
}

TEST_CASE("csv decimals follow from the exact columns") {
    const Outcome o = call({"exact", "--k-max", "40", "--sieve-limit", "1000", "--format", "csv"});
    REQUIRE(o.code == 0);
    std::istringstream in(o.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "k,p_k_numerator,p_k_denominator_exponent,p_k_decimal");
    int rows = 0;
    while (std::getline(in, line)) {
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        REQUIRE(cols.size() == 4);
        CHECK(std::stoi(cols[0]) == rows + 1);
        CHECK(std::stoul(cols[2]) == static_cast<unsigned long>(rows));
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 6, std::stoul(cols[2]));
        mpq_class p(mpz_class(cols[1], 10), den);
        p.canonicalize();
        CHECK(render_decimal(p, 15, Round::nearest) == cols[3]);
        ++rows;
    }
    CHECK(rows == 40);
}

TEST_CASE("output directory") {
    const fs::path dir = scratch_dir() / "out";
    fs::create_directories(dir);
    fs::remove(dir / "res.json");
    ::setenv(cli::kOutputDirEnv, dir.c_str(), 1);
    const Outcome o = call({"exact", "--k-max", "5", "--sieve-limit", "100", "-o", "res.json"});
    ::unsetenv(cli::kOutputDirEnv);
    CHECK(o.code == 0);
    CHECK(o.out.empty());
    REQUIRE(fs::exists(dir / "res.json"));
    std::ifstream f(dir / "res.json");
    CHECK(json::parse(f)["results"]["E_K"].is_string());
}

TEST_CASE("argument errors") {
    CHECK(call({"exact", "--format", "xml"}).code == cli::exit_code::config);
    CHECK(call({"exact", "--k-max", "0"}).code == cli::exit_code::config);
    CHECK(call({"exact", "--k-max", "1000", "--sieve-limit", "100"}).code == cli::exit_code::config);
    CHECK(call({"simulate", "--workers", "0"}).code == cli::exit_code::config);
    CHECK(call({"nonsense"}).code == cli::exit_code::config);
    CHECK(call({"exact", "--precision-digits", "0"}).code == cli::exit_code::config);
}
