// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "oracles.hpp"
#include "primehit/decimal.hpp"
#include "primehit/exact_dp.hpp"
#include "primehit/simulate.hpp"
#include "primehit/tail_bounds.hpp"
#include "primehit/verify.hpp"

using namespace primehit;

namespace {

int failures = 0;

void report(int id, const char* title, bool ok, const std::string& detail, double seconds) {
    if (!ok) ++failures;
    std::printf("[%s] criterion %2d %-28s %s (%.2f s)\n", ok ? "PASS" : "FAIL", id, title,
                detail.c_str(), seconds);
    std::fflush(stdout);
}

class Clock {
public:
    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double s = std::chrono::duration<double>(now - start_).count();
        start_ = now;
        return s;
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

mpq_class q(const char* s) {
    mpq_class v(s);
    v.canonicalize();
    return v;
}

std::string sci(const BigFloat& x) { return to_scientific(x, 6, Round::up); }
std::string dec(const mpq_class& x, Round r) { return render_decimal(x, 15, r); }

} // namespace

int main() {
    Clock clock;
    const PrimeTable table = build_prime_table(10'000'000);
    std::printf("sieve to 10^7: %.2f s\n", clock.lap());

    const SurvivalSeries s1000 = run_dp(DpConfig{6, 1000, TargetSet::primes()}, table);
    const double dp_seconds = clock.lap();

    const std::string e = dec(s1000.expectation, Round::nearest);
    report(1, "exact expectation", e == "2.428497913693504", "E_1000 = " + e, dp_seconds);

    const std::string v = dec(s1000.variance, Round::nearest);
    report(2, "exact variance", v == "6.242778668279075", "Var_1000 = " + v, 0.0);

    const TailReport t = certify(s1000, table);
    const double cert_seconds = clock.lap();
    {
        const bool r_ok = t.sum_first.value <= BigFloat(q("7/100000000"), 128, Round::down);
        const bool r2_ok = t.sum_second.value <= BigFloat(q("31/1000000"), 128, Round::down);
        const bool rv_ok = t.rv_abs_upper < BigFloat(q("1/10000"), 128, Round::down);
        const std::string detail = std::string("bound_r = ") + sci(t.sum_first.value) +
                                   (r_ok ? " <= " : " > ") + "7e-8; bound_r2 = " +
                                   sci(t.sum_second.value) + (r2_ok ? " <= " : " > ") +
                                   "3.1e-5; |RV| <= " + sci(t.rv_abs_upper) + (rv_ok ? " < " : " >= ") +
                                   "1e-4";
        report(3, "remainder bounds", r_ok && r2_ok && rv_ok, detail, cert_seconds);
        if (!r2_ok) {
            TailOptions exact_pi;
            exact_pi.pi_mode = PiMode::sieve;
            const TailSum sieve_r2 = bound_r2(1000, table, exact_pi);
            std::printf("       info: with exact pi(n) on [1000, 200000] bound_r2 = %s (not used for the "
                        "verdict)\n",
                        sci(sieve_r2.value).c_str());
        }
    }
    {
        const bool e_ok = t.expectation.lower >= q("242849791/100000000") &&
                          t.expectation.upper <= q("242849799/100000000");
        const bool v_ok = t.variance.width() < q("2/10000") && t.variance.contains(q("62427786/10000000"));
        const std::string detail = "E in [" + dec(t.expectation.lower, Round::down) + ", " +
                                   dec(t.expectation.upper, Round::up) + "]; Var in [" +
                                   dec(t.variance.lower, Round::down) + ", " +
                                   dec(t.variance.upper, Round::up) + "]";
        report(4, "certified intervals", e_ok && v_ok, detail, 0.0);
    }
    {
        clock.lap();
        const auto oracle_counts = oracle::surviving_counts(6, 8);
        bool ok = true;
        std::uint64_t compared = 0;
        const DpConfig cfg{6, 8, TargetSet::primes()};
        run_dp(cfg, table, [&](const DpLayer& layer) {
            const auto& expected = oracle_counts[static_cast<std::size_t>(layer.k())];
            mpz_class total = 0;
            for (std::uint64_t n = 0; n <= layer.last(); ++n) {
                const auto it = expected.find(n);
                const mpz_class want = it == expected.end() ? 0 : mpz_class(std::to_string(it->second));
                if (layer.numerator(n) != want) ok = false;
                total += want;
                ++compared;
            }
            if (layer.mass() != total) ok = false;
        });
        const OracleSweep sweep = verify_dp_against_enumeration(table);
        ok = ok && sweep.passed;
        report(5, "oracle equivalence k<=8", ok,
               std::to_string(compared) + " states vs depth-first oracle, " +
                   std::to_string(sweep.values_compared) + " values vs odometer",
               clock.lap());
    }
    {
        const PropositionSweep p = verify_proposition(table, 30, 6);
        std::string detail = std::to_string(p.states_checked) + " states";
        if (p.witness) {
            detail += ", violation at (k=" + std::to_string(p.witness->first) +
                      ", n=" + std::to_string(p.witness->second) + ")";
        }
        report(6, "proposition sweep k<=30", p.passed, detail, clock.lap());
    }
    {
        const PntCheck c = verify_pnt_lower_bound(table, 1001, 10'000'000);
        std::string detail = "n in (1000, 10^7], pi(10^7) = " + std::to_string(table.pi_strict(10'000'000));
        if (c.counterexample) detail += ", counterexample n = " + std::to_string(*c.counterexample);
        report(7, "PNT premise sweep", c.passed, detail, clock.lap());
    }
    {
        const SurrogateTable st = build_surrogate_table(1000, 100'000);
        const ArgmaxScan f = scan_argmax(st, TailKind::first_moment, 1000, 1000, 100'000);
        const ArgmaxScan g = scan_argmax(st, TailKind::second_moment, 1000, 1000, 100'000);
        const bool ok = f.unique && g.unique && f.argmax == 1050 && g.argmax == 1051;
        report(8, "argmax claims", ok,
               "f: " + std::to_string(f.argmax) + (f.unique ? " unique" : " not unique") +
                   ", g: " + std::to_string(g.argmax) + (g.unique ? " unique" : " not unique"),
               clock.lap());
    }
    {
        SimulationConfig sc;
        sc.reps = 10'000'000;
        sc.seed = 42;
        const SimulationSummary m = run_simulation(sc, table);
        const bool mean_ok = std::abs(m.mean - 2.42850) <= 0.01;
        const bool var_ok = std::abs(m.variance - 6.24278) <= 0.05;
        bool surv_ok = true;
        int worst_k = 0;
        double worst_z = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const double p = s1000.survival(k).get_d();
            const double se = std::sqrt(p * (1 - p) / static_cast<double>(m.reps));
            const double diff = std::abs(m.survival(static_cast<std::uint32_t>(k)) - p);
            const double z = se > 0 ? diff / se : (diff == 0 ? 0.0 : INFINITY);
            if (z > worst_z) {
                worst_z = z;
                worst_k = k;
            }
            if (z > 5) surv_ok = false;
        }
        const bool max_ok = m.max >= 20;
        char detail[256];
        std::snprintf(detail, sizeof detail,
                      "mean %.6f, variance %.6f, max %u, worst survival z = %.2f at k=%d", m.mean,
                      m.variance, m.max, worst_z, worst_k);
        report(9, "Monte Carlo consistency", mean_ok && var_ok && surv_ok && max_ok, detail, clock.lap());
    }
    {
        const SurvivalSeries s1100 = run_dp(DpConfig{6, 1100, TargetSet::primes()}, table);
        const mpq_class de = s1100.expectation - s1000.expectation;
        const mpq_class de2 = s1100.second_moment - s1000.second_moment;
        const bool ok = de <= t.sum_first.value.to_rational() && de2 <= t.sum_second.value.to_rational();
        const std::string detail = "E diff = " + sci(BigFloat(de, 128, Round::up)) + " <= " +
                                   sci(t.sum_first.value) + ", E2 diff = " +
                                   sci(BigFloat(de2, 128, Round::up)) + " <= " + sci(t.sum_second.value);
        report(10, "soundness cross-check", ok, detail, clock.lap());
    }

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
