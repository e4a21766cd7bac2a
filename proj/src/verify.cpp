// verify.cpp

#include "primehit/verify.hpp"

#include <chrono>
#include <string>

#include <gmpxx.h>

#include "primehit/errors.hpp"
#include "primehit/exact_dp.hpp"

namespace primehit {

namespace {

template <class Fn>
SweepResult timed(std::string name, Fn&& fn) {
    const auto start = std::chrono::steady_clock::now();
    SweepResult r = fn();
    r.name = std::move(name);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

} // namespace

PropositionSweep verify_proposition(const PrimeTable& primes, int k_max, int sides) {
    DpConfig config{sides, k_max, TargetSet::primes()};
    config.validate();
    const std::uint64_t max_pi = primes.pi_strict(std::min(primes.limit(), config.required_sieve_limit()));
    std::vector<mpz_class> pow5(max_pi + 1);
    std::vector<mpz_class> pow6(max_pi + 1);
    pow5[0] = pow6[0] = 1;
    for (std::uint64_t i = 1; i <= max_pi; ++i) {
        pow5[i] = pow5[i - 1] * 5;
        pow6[i] = pow6[i - 1] * 6;
    }

    // numerator / sides^k < 5^pi / (3 * 6^pi)  <=>  3 * numerator * 6^pi < 5^pi * sides^k
    PropositionSweep out;
    run_dp(config, primes, [&](const DpLayer& layer) {
        if (out.witness) return;
        for (std::uint64_t n = layer.first(); n <= layer.last(); ++n) {
            if (!layer.is_state(n)) continue;
            const std::uint64_t pi = primes.pi_strict(n);
            ++out.states_checked;
            if (!(3 * layer.numerator(n) * pow6[pi] < pow5[pi] * layer.denominator())) {
                out.passed = false;
                out.witness = std::make_pair(layer.k(), n);
                return;
            }
        }
    });
    return out;
}

std::vector<std::vector<std::uint64_t>> enumerate_surviving(int sides, int k_max,
                                                            const PrimeTable& primes) {
    std::vector<std::vector<std::uint64_t>> counts(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max; ++k) {
        auto& row = counts[static_cast<std::size_t>(k)];
        row.assign(static_cast<std::size_t>(sides) * k + 1, 0);
        std::vector<int> faces(static_cast<std::size_t>(k), 1);
        while (true) {
            std::uint64_t sum = 0;
            bool alive = true;
            for (int f : faces) {
                sum += static_cast<std::uint64_t>(f);
                if (primes.is_prime(sum)) {
                    alive = false;
                    break;
                }
            }
            if (alive) ++row[sum];
            // odometer increment
            int pos = 0;
            while (pos < k && faces[static_cast<std::size_t>(pos)] == sides) {
                faces[static_cast<std::size_t>(pos)] = 1;
                ++pos;
            }
            if (pos == k) break;
            ++faces[static_cast<std::size_t>(pos)];
        }
    }
    return counts;
}

OracleSweep verify_dp_against_enumeration(const PrimeTable& primes, int k_max, int sides) {
    const auto counts = enumerate_surviving(sides, k_max, primes);
    DpConfig config{sides, k_max, TargetSet::primes()};
    OracleSweep out;
    run_dp(config, primes, [&](const DpLayer& layer) {
        if (out.mismatch) return;
        const auto& row = counts[static_cast<std::size_t>(layer.k())];
        mpz_class total = 0;
        for (std::uint64_t n = 0; n < row.size(); ++n) {
            ++out.values_compared;
            total += row[n];
            if (layer.numerator(n) != row[n]) {
                out.passed = false;
                out.mismatch = std::make_pair(layer.k(), n);
                return;
            }
        }
        ++out.values_compared;
        if (layer.mass() != total) {
            out.passed = false;
            out.mismatch = std::make_pair(layer.k(), std::uint64_t{0});
        }
    });
    return out;
}

ScanSweep verify_tail_scans(std::uint64_t to, std::uint64_t expected_f_argmax,
                            std::uint64_t expected_g_argmax, mpfr_prec_t precision) {
    constexpr std::uint64_t k_cut = 1000;
    const SurrogateTable table = build_surrogate_table(k_cut, to + halving_step(to), precision);
    ScanSweep out;
    out.f_argmax = scan_argmax(table, TailKind::first_moment, k_cut, k_cut, to);
    out.g_argmax = scan_argmax(table, TailKind::second_moment, k_cut, k_cut, to);
    out.f_ratio = scan_halving_ratio(table, TailKind::first_moment, k_cut, expected_f_argmax, to);
    out.g_ratio = scan_halving_ratio(table, TailKind::second_moment, k_cut, expected_g_argmax, to);
    out.passed = out.f_argmax.unique && out.f_argmax.argmax == expected_f_argmax &&
                 out.g_argmax.unique && out.g_argmax.argmax == expected_g_argmax &&
                 out.f_ratio.passed && out.g_ratio.passed;
    return out;
}

std::vector<SweepResult> run_all_sweeps(const PrimeTable& primes, const VerifyOptions& options) {
    std::vector<SweepResult> results;

    results.push_back(timed("proposition", [&] {
        const PropositionSweep s = verify_proposition(primes, options.proposition_k_max);
        SweepResult r;
        r.passed = s.passed;
        r.detail = std::to_string(s.states_checked) + " states with k <= " +
                   std::to_string(options.proposition_k_max);
        if (s.witness) {
            r.detail += "; violated at (k=" + std::to_string(s.witness->first) +
                        ", n=" + std::to_string(s.witness->second) + ")";
        }
        return r;
    }));

    results.push_back(timed("pnt", [&] {
        SweepResult r;
        if (primes.limit() <= 1000) {
            r.passed = false;
            r.detail = "sieve limit must exceed 1000";
            return r;
        }
        const PntCheck c = verify_pnt_lower_bound(primes, 1001, primes.limit());
        r.passed = c.passed;
        r.detail = "pi_strict(n) > 0.9 n/ln n on [1001, " + std::to_string(primes.limit()) + "]";
        if (c.counterexample) {
            r.detail += "; fails at n=" + std::to_string(*c.counterexample);
        }
        return r;
    }));

    results.push_back(timed("tail_scans", [&] {
        const ScanSweep s = verify_tail_scans(options.scan_to, 1050, 1051, options.precision);
        SweepResult r;
        r.passed = s.passed;
        r.detail = "argmax f=" + std::to_string(s.f_argmax.argmax) +
                   (s.f_argmax.unique ? " (unique)" : " (not separated)") +
                   ", argmax g=" + std::to_string(s.g_argmax.argmax) +
                   (s.g_argmax.unique ? " (unique)" : " (not separated)") +
                   ", halving f " + (s.f_ratio.passed ? "ok" : "fails at " + std::to_string(s.f_ratio.first_failure)) +
                   ", halving g " + (s.g_ratio.passed ? "ok" : "fails at " + std::to_string(s.g_ratio.first_failure)) +
                   " over [1000, " + std::to_string(options.scan_to) + "]";
        return r;
    }));

    results.push_back(timed("dp_enumeration", [&] {
        const OracleSweep s = verify_dp_against_enumeration(primes, options.enumeration_k_max);
        SweepResult r;
        r.passed = s.passed;
        r.detail = std::to_string(s.values_compared) + " values for k <= " +
                   std::to_string(options.enumeration_k_max);
        if (s.mismatch) {
            r.detail += "; mismatch at (k=" + std::to_string(s.mismatch->first) +
                        ", n=" + std::to_string(s.mismatch->second) + ")";
        }
        return r;
    }));
    return results;
}

} // namespace primehit
