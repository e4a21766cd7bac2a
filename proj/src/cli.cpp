// cli.cpp

#include "primehit/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "primehit/bigfloat.hpp"
#include "primehit/decimal.hpp"
#include "primehit/errors.hpp"
#include "primehit/exact_dp.hpp"
#include "primehit/simulate.hpp"
#include "primehit/tail_bounds.hpp"
#include "primehit/verify.hpp"

namespace primehit::cli {

using json = nlohmann::ordered_json;

namespace {

class Stopwatch {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - last_).count();
        last_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

const char* to_string(Format f) {
    switch (f) {
    case Format::json: return "json";
    case Format::csv: return "csv";
    case Format::text: return "text";
    }
    return "json";
}

json config_json(const RunConfig& c) {
    json j;
    j["command"] = to_string(c.command);
    j["sides"] = c.sides;
    j["k_max"] = c.k_max;
    j["sieve_limit"] = c.sieve_limit;
    j["n_cut"] = c.n_cut;
    j["precision_digits"] = c.precision_digits;
    j["precision_bits"] = c.precision_bits;
    j["pi_mode"] = c.sieve_pi ? "sieve" : "surrogate";
    j["reps"] = c.reps;
    j["seed"] = c.seed;
    j["workers"] = c.workers;
    j["cap"] = c.cap;
    j["target"] = c.target;
    j["format"] = to_string(c.format);
    return j;
}

// numerator of q * base^exponent, which must be an integer
std::string scaled_numerator(const mpq_class& q, int base, int exponent) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), static_cast<unsigned long>(base),
                  static_cast<unsigned long>(exponent));
    mpq_class scaled = q * scale;
    scaled.canonicalize();
    if (scaled.get_den() != 1) {
        throw std::logic_error("value is not a multiple of base^-exponent");
    }
    return scaled.get_num().get_str();
}

json exact_pair(const mpq_class& q, int base, int exponent) {
    json j;
    j["numerator"] = scaled_numerator(q, base, exponent);
    j["base"] = base;
    j["denominator_exponent"] = exponent;
    return j;
}

std::string sci(const BigFloat& x) { return to_scientific(x, 10, Round::up); }

json interval_json(const Interval& iv, int digits) {
    return json::array({render_decimal(iv.lower, digits, Round::down),
                        render_decimal(iv.upper, digits, Round::up)});
}

struct Emitter {
    const RunConfig& config;
    std::ostream& out;
    json doc;
    std::string csv;
    std::string text;

    explicit Emitter(const RunConfig& c, std::ostream& o) : config(c), out(o) {
        doc["config"] = config_json(c);
        doc["results"] = json::object();
        doc["assumptions"] = json::array();
        doc["timings"] = json::object();
        doc["version"] = kVersion;
    }

    void timing(const std::string& name, double seconds) {
        if (config.timings) doc["timings"][name] = seconds;
    }

    void flush() {
        std::ofstream file;
        std::ostream* sink = &out;
        if (!config.output.empty()) {
            const std::string path = resolve_output_path(config.output);
            file.open(path);
            if (!file) {
                throw std::runtime_error("cannot open output file " + path);
            }
            sink = &file;
        }
        switch (config.format) {
        case Format::json: *sink << doc.dump(2) << '\n'; break;
        case Format::csv: *sink << csv; break;
        case Format::text: *sink << text; break;
        }
    }
};

PrimeTable make_table(const RunConfig& config, const PrimeTable* injected, Emitter& em,
                      Stopwatch& sw) {
    if (injected != nullptr) {
        em.timing("sieve_s", sw.lap());
        return *injected;
    }
    PrimeTable t = build_prime_table(config.sieve_limit);
    em.timing("sieve_s", sw.lap());
    return t;
}

TargetSet make_target(const RunConfig& config) {
    if (config.target == "primes") {
        return TargetSet::primes();
    }
    return TargetSet::explicit_set(read_target_file(config.target, config.sieve_limit));
}

TailOptions tail_options(const RunConfig& c) {
    TailOptions o;
    o.n_cut = c.n_cut;
    o.precision = c.precision_bits;
    o.pi_mode = c.sieve_pi ? PiMode::sieve : PiMode::surrogate;
    return o;
}

void add_tail_results(json& r, const TailReport& t, int digits) {
    r["R_upper"] = sci(t.r_upper);
    r["R2_upper"] = sci(t.r2_upper);
    r["RV_abs_upper"] = sci(t.rv_abs_upper);
    r["bound_r"] = sci(t.sum_first.value);
    r["bound_r2"] = sci(t.sum_second.value);
    r["boundary_mass"] = sci(t.boundary_mass);
    r["E_interval"] = interval_json(t.expectation, digits);
    r["Var_interval"] = interval_json(t.variance, digits);
    r["E_interval_width"] = sci(BigFloat(t.expectation.width(), 128, Round::up));
    r["Var_interval_width"] = sci(BigFloat(t.variance.width(), 128, Round::up));
    json tails;
    tails["first_moment"] = {{"window_sum", sci(t.sum_first.phase_a)},
                             {"block_tail", sci(t.sum_first.phase_b)},
                             {"max_term", sci(t.sum_first.max_term)},
                             {"argmax", t.sum_first.argmax},
                             {"blocks", t.sum_first.blocks}};
    tails["second_moment"] = {{"window_sum", sci(t.sum_second.phase_a)},
                              {"block_tail", sci(t.sum_second.phase_b)},
                              {"max_term", sci(t.sum_second.max_term)},
                              {"argmax", t.sum_second.argmax},
                              {"blocks", t.sum_second.blocks}};
    r["tail_sums"] = tails;
    r["pnt_verified_range"] = json::array({t.pnt.from, t.pnt.to});
}

std::string tail_text(const TailReport& t, int digits) {
    std::ostringstream s;
    const int K = t.k_max;
    s << "R_" << K << "   < " << sci(t.r_upper) << "\n";
    s << "R2_" << K << "  < " << sci(t.r2_upper) << "\n";
    s << "|RV_" << K << "| < " << sci(t.rv_abs_upper) << "\n";
    s << "E(tau)   in [" << render_decimal(t.expectation.lower, digits, Round::down) << ", "
      << render_decimal(t.expectation.upper, digits, Round::up) << "]\n";
    s << "Var(tau) in [" << render_decimal(t.variance.lower, digits, Round::down) << ", "
      << render_decimal(t.variance.upper, digits, Round::up) << "]\n";
    for (const auto& a : t.assumptions) {
        s << "assumes: " << a << "\n";
    }
    return s.str();
}

int cmd_exact(const RunConfig& config, Emitter& em, std::ostream& err, const PrimeTable* injected) {
    Stopwatch sw;
    const TargetSet target = make_target(config);
    const PrimeTable table = make_table(config, injected, em, sw);
    const DpConfig dp{config.sides, config.k_max, target};
    const SurvivalSeries series = run_dp(dp, table);
    em.timing("dp_s", sw.lap());

    const int digits = config.precision_digits;
    const int K = config.k_max;
    json& r = em.doc["results"];
    r["K"] = K;
    r["E_K"] = render_decimal(series.expectation, digits, Round::nearest);
    r["Var_K"] = render_decimal(series.variance, digits, Round::nearest);
    r["E2_K"] = render_decimal(series.second_moment, digits, Round::nearest);
    r["E_K_exact"] = exact_pair(series.expectation, config.sides, K - 1);
    r["E2_K_exact"] = exact_pair(series.second_moment, config.sides, K - 1);
    r["Var_K_exact"] = exact_pair(series.variance, config.sides, 2 * (K - 1));
    r["beyond_K"] = exact_pair(series.survival(K + 1), config.sides, K);

    std::ostringstream text;
    text << "E_" << K << " = " << r["E_K"].get<std::string>() << ",  Var_" << K << " = "
         << r["Var_K"].get<std::string>() << "\n";

    std::ostringstream csv;
    csv << "k,p_k_numerator,p_k_denominator_exponent,p_k_decimal\n";
    for (int k = 1; k <= K; ++k) {
        csv << k << ',' << series.survival_numerators[static_cast<std::size_t>(k - 1)].get_str()
            << ',' << series.denominator_exponent(k) << ','
            << render_decimal(series.survival(k), digits, Round::nearest) << '\n';
    }
    em.csv = csv.str();

    int code = exit_code::ok;
    if (!series.primes_target) {
        r["certified"] = false;
        r["certification"] = "tail certification unavailable for custom targets";
        err << "warning: tail certification unavailable for custom targets; exact values only\n";
        code = exit_code::certification_refused;
    } else if (K < 1000 || config.sides != 6) {
        r["certified"] = false;
        r["certification"] = "tail certification needs K >= 1000 and six-sided dice";
        err << "warning: no certified intervals (needs K >= 1000 and six-sided dice)\n";
    } else {
        const TailReport report = certify(series, table, tail_options(config));
        em.timing("bounds_s", sw.lap());
        r["certified"] = true;
        add_tail_results(r, report, digits);
        for (const auto& a : report.assumptions) em.doc["assumptions"].push_back(a);
        text << tail_text(report, digits);
    }
    em.text = text.str();
    return code;
}

int cmd_bounds(const RunConfig& config, Emitter& em, const PrimeTable* injected) {
    Stopwatch sw;
    const PrimeTable table = make_table(config, injected, em, sw);
    const SurvivalSeries series = run_dp(DpConfig{config.sides, config.k_max, TargetSet::primes()}, table);
    em.timing("dp_s", sw.lap());
    const TailReport report = certify(series, table, tail_options(config));
    em.timing("bounds_s", sw.lap());

    json& r = em.doc["results"];
    r["K"] = config.k_max;
    add_tail_results(r, report, config.precision_digits);
    for (const auto& a : report.assumptions) em.doc["assumptions"].push_back(a);

    std::ostringstream csv;
    csv << "quantity,value\n";
    for (const char* key : {"R_upper", "R2_upper", "RV_abs_upper", "bound_r", "bound_r2", "boundary_mass"}) {
        csv << key << ',' << r[key].get<std::string>() << '\n';
    }
    csv << "E_lower," << r["E_interval"][0].get<std::string>() << '\n';
    csv << "E_upper," << r["E_interval"][1].get<std::string>() << '\n';
    csv << "Var_lower," << r["Var_interval"][0].get<std::string>() << '\n';
    csv << "Var_upper," << r["Var_interval"][1].get<std::string>() << '\n';
    em.csv = csv.str();
    em.text = tail_text(report, config.precision_digits);
    return exit_code::ok;
}

int cmd_simulate(const RunConfig& config, Emitter& em, const PrimeTable* injected) {
    Stopwatch sw;
    const PrimeTable table = make_table(config, injected, em, sw);
    SimulationConfig sc;
    sc.reps = config.reps;
    sc.seed = config.seed;
    sc.sides = config.sides;
    sc.workers = config.workers;
    sc.cap = config.cap;
    const SimulationSummary s = run_simulation(sc, table);
    em.timing("simulate_s", sw.lap());

    json& r = em.doc["results"];
    r["reps"] = s.reps;
    r["seed"] = s.seed;
    r["chunk_size"] = s.chunk_size;
    r["mean"] = s.mean;
    r["variance"] = s.variance;
    r["max"] = s.max;
    r["degenerate"] = s.degenerate;
    r["overflowed"] = s.overflowed;
    r["histogram"] = s.histogram;
    r["histogram_overflow"] = s.histogram_overflow;
    if (s.degenerate) {
        em.doc["assumptions"].push_back("variance reported as 0: fewer than two episodes");
    }

    std::ostringstream csv;
    csv << "tau,count\n";
    for (std::size_t t = 1; t < s.histogram.size(); ++t) {
        csv << t << ',' << s.histogram[t] << '\n';
    }
    csv << "overflow," << s.histogram_overflow << '\n';
    em.csv = csv.str();

    std::ostringstream text;
    text.precision(6);
    text << std::fixed;
    text << "reps " << s.reps << "  mean(tau) " << s.mean << "  variance(tau) " << s.variance
         << "  max(tau) " << s.max << (s.degenerate ? "  [degenerate sample]" : "") << "\n";
    em.text = text.str();
    return exit_code::ok;
}

int cmd_verify(const RunConfig& config, Emitter& em, const PrimeTable* injected) {
    Stopwatch sw;
    const PrimeTable table = make_table(config, injected, em, sw);
    VerifyOptions vo;
    vo.precision = config.precision_bits;
    const auto sweeps = run_all_sweeps(table, vo);

    bool all = true;
    json list = json::array();
    std::ostringstream csv;
    std::ostringstream text;
    csv << "sweep,passed,detail\n";
    for (const auto& s : sweeps) {
        all = all && s.passed;
        list.push_back({{"name", s.name}, {"passed", s.passed}, {"detail", s.detail}});
        em.timing(s.name + "_s", s.seconds);
        csv << s.name << ',' << (s.passed ? "true" : "false") << ",\"" << s.detail << "\"\n";
        text << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.detail << "\n";
    }
    em.doc["results"]["sweeps"] = list;
    em.doc["results"]["passed"] = all;
    em.csv = csv.str();
    em.text = text.str();
    return all ? exit_code::ok : exit_code::verification_failed;
}

Format parse_format(const std::string& s) {
    if (s == "json") return Format::json;
    if (s == "csv") return Format::csv;
    if (s == "text") return Format::text;
    throw ConfigError("unknown format " + s);
}

} // namespace

std::string to_string(Command c) {
    switch (c) {
    case Command::exact: return "exact";
    case Command::bounds: return "bounds";
    case Command::simulate: return "simulate";
    case Command::verify: return "verify";
    }
    return "exact";
}

void RunConfig::validate() const {
    if (sides < 2) throw ConfigError("--sides must be >= 2");
    if (k_max < 1) throw ConfigError("--k-max must be >= 1");
    if (sieve_limit < 2) throw ConfigError("--sieve-limit must be >= 2");
    if (precision_digits < 1) throw ConfigError("--precision-digits must be >= 1");
    if (precision_bits < 80) throw ConfigError("--precision-bits must be >= 80");
    if (workers < 1) throw ConfigError("--workers must be >= 1");
    if (reps < 1) throw ConfigError("--reps must be >= 1");
    const bool primes = target == "primes";

    switch (command) {
    case Command::exact:
        if (primes) {
            const std::uint64_t need = DpConfig{sides, k_max, TargetSet::primes()}.required_sieve_limit();
            if (sieve_limit < need) {
                throw ConfigError("--sieve-limit must be at least " + std::to_string(need) +
                                  " for --k-max " + std::to_string(k_max));
            }
        }
        if (primes && k_max >= 1000 && sides == 6 && n_cut <= static_cast<std::uint64_t>(k_max)) {
            throw ConfigError("--n-cut must exceed --k-max");
        }
        break;
    case Command::bounds:
        if (!primes) throw CertificationUnavailable();
        if (k_max < 1000) throw ConfigError("bounds need --k-max >= 1000 (pi lower bound holds for n > 1000)");
        if (sides != 6) throw ConfigError("bounds are only available for six-sided dice");
        if (sieve_limit < static_cast<std::uint64_t>(6) * k_max + 6) {
            throw ConfigError("--sieve-limit must be at least " + std::to_string(6 * k_max + 6));
        }
        if (n_cut <= static_cast<std::uint64_t>(k_max)) throw ConfigError("--n-cut must exceed --k-max");
        if (sieve_pi && sieve_limit < n_cut) throw ConfigError("--sieve-pi needs --sieve-limit >= --n-cut");
        break;
    case Command::simulate:
        if (!primes) throw ConfigError("simulate only supports the primes target");
        if (cap < 1) throw ConfigError("--cap must be >= 1");
        if (sieve_limit < static_cast<std::uint64_t>(cap) * static_cast<std::uint64_t>(sides)) {
            throw ConfigError("--sieve-limit must be at least cap * sides = " +
                              std::to_string(static_cast<std::uint64_t>(cap) * sides));
        }
        break;
    case Command::verify:
        if (!primes) throw ConfigError("verify only supports the primes target");
        if (sieve_limit <= 1000) throw ConfigError("verify needs --sieve-limit > 1000");
        break;
    }
}

std::vector<std::uint64_t> read_target_file(const std::string& path, std::uint64_t limit) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read target file " + path);
    }
    std::vector<std::uint64_t> members;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::uint64_t v = 0;
        if (!(ls >> v)) {
            std::string rest;
            if (std::istringstream(line) >> rest) {
                throw ConfigError(path + ":" + std::to_string(lineno) + ": not an integer");
            }
            continue;
        }
        std::string trailing;
        if (ls >> trailing) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": one integer per line");
        }
        if (v < 2 || v > limit) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": member " + std::to_string(v) +
                              " outside [2, " + std::to_string(limit) + "]");
        }
        members.push_back(v);
    }
    if (members.empty()) {
        throw ConfigError("target file " + path + " has no members");
    }
    return members;
}

std::string resolve_output_path(const std::string& output) {
    namespace fs = std::filesystem;
    const fs::path p(output);
    const char* dir = std::getenv(kOutputDirEnv);
    if (p.is_relative() && dir != nullptr && *dir != '\0') {
        return (fs::path(dir) / p).string();
    }
    return p.string();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err, const PrimeTable* table) {
    try {
        config.validate();
        Emitter em(config, out);
        int code = exit_code::ok;
        switch (config.command) {
        case Command::exact: code = cmd_exact(config, em, err, table); break;
        case Command::bounds: code = cmd_bounds(config, em, table); break;
        case Command::simulate: code = cmd_simulate(config, em, table); break;
        case Command::verify: code = cmd_verify(config, em, table); break;
        }
        em.flush();
        return code;
    } catch (const CertificationUnavailable& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::certification_refused;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const SizingError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const ResourceError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code::runtime;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    std::string format = "json";

    CLI::App app{"Expected hitting time of the primes by cumulative dice sums", "primehit"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto common = [&](CLI::App* sub) {
        sub->add_option("--sides", config.sides, "Die faces")->capture_default_str();
        sub->add_option("--sieve-limit", config.sieve_limit, "Largest integer covered by the sieve")
            ->capture_default_str();
        sub->add_option("--format", format, "Output format: json, csv or text")
            ->check(CLI::IsMember({"json", "csv", "text"}))
            ->capture_default_str();
        sub->add_option("--output,-o", config.output,
                        std::string("Output file; relative paths resolve against $") + kOutputDirEnv);
        sub->add_flag("!--no-timings", config.timings, "Omit wall-clock timings from JSON output");
    };
    auto numeric = [&](CLI::App* sub) {
        sub->add_option("--k-max", config.k_max, "Truncation depth K")->capture_default_str();
        sub->add_option("--n-cut", config.n_cut, "End of the term-by-term tail window")
            ->capture_default_str();
        sub->add_option("--precision-digits", config.precision_digits, "Digits after the decimal point")
            ->capture_default_str();
        sub->add_option("--precision-bits", config.precision_bits, "MPFR working precision")
            ->capture_default_str();
        sub->add_flag("--sieve-pi", config.sieve_pi,
                      "Use the sieved pi(n) instead of 0.9 n/ln n inside the tail window");
    };

    CLI::App* exact = app.add_subcommand("exact", "Exact E_K and Var_K with certified intervals");
    common(exact);
    numeric(exact);
    exact->add_option("--target", config.target, "\"primes\" or a file with one integer per line")
        ->capture_default_str();

    CLI::App* bounds = app.add_subcommand("bounds", "Certified remainder bounds");
    common(bounds);
    numeric(bounds);
    bounds->add_option("--target", config.target, "Only \"primes\" can be certified")
        ->capture_default_str();

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo estimate");
    common(simulate);
    simulate->add_option("--reps", config.reps, "Episodes")->capture_default_str();
    simulate->add_option("--seed", config.seed, "64-bit seed")->capture_default_str();
    simulate->add_option("--workers", config.workers, "Threads")->capture_default_str();
    simulate->add_option("--cap", config.cap, "Roll cap per episode")->capture_default_str();

    CLI::App* verify = app.add_subcommand("verify", "Verification sweeps");
    common(verify);
    verify->add_option("--precision-bits", config.precision_bits, "MPFR working precision")
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_code::ok;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "config error: " << e.what() << '\n';
        return exit_code::config;
    }

    if (*exact) config.command = Command::exact;
    else if (*bounds) config.command = Command::bounds;
    else if (*simulate) config.command = Command::simulate;
    else config.command = Command::verify;
    config.format = parse_format(format);
    return run(config, out, err);
}

} // namespace primehit::cli
