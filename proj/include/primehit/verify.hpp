// verify.hpp
// Verification sweeps behind the `verify` command. Each sweep is an
// independent check of an ingredient the certified result relies on.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "primehit/prime_table.hpp"
#include "primehit/tail_bounds.hpp"

namespace primehit {

// Exact check of p(k, n) < (1/3)(5/6)^pi_strict(n) for every DP state with
// k <= k_max. The first violating state, if any, is the witness.
struct PropositionSweep {
    bool passed = true;
    std::uint64_t states_checked = 0;
    std::optional<std::pair<int, std::uint64_t>> witness; // (k, n)
};
PropositionSweep verify_proposition(const PrimeTable& primes, int k_max = 30, int sides = 6);

// Brute force: counts[k][n] = number of sequences in {1..sides}^k ending at
// sum n whose partial sums all avoid the primes. Enumerates every sequence.
std::vector<std::vector<std::uint64_t>> enumerate_surviving(int sides, int k_max,
                                                            const PrimeTable& primes);

struct OracleSweep {
    bool passed = true;
    std::uint64_t values_compared = 0;
    std::optional<std::pair<int, std::uint64_t>> mismatch; // (k, n); n == 0 means layer total
};
OracleSweep verify_dp_against_enumeration(const PrimeTable& primes, int k_max = 8, int sides = 6);

struct ScanSweep {
    bool passed = false;
    ArgmaxScan f_argmax;
    ArgmaxScan g_argmax;
    RatioScan f_ratio;
    RatioScan g_ratio;
};
// Argmax and halving-ratio scans of f and g with K = 1000 over [1000, to].
ScanSweep verify_tail_scans(std::uint64_t to = 100'000, std::uint64_t expected_f_argmax = 1050,
                            std::uint64_t expected_g_argmax = 1051,
                            mpfr_prec_t precision = BigFloat::default_precision);

struct SweepResult {
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    int proposition_k_max = 30;
    int enumeration_k_max = 8;
    std::uint64_t scan_to = 100'000;
    mpfr_prec_t precision = BigFloat::default_precision;
};

// proposition, pnt, tail_scans, dp_enumeration — in that order.
std::vector<SweepResult> run_all_sweeps(const PrimeTable& primes, const VerifyOptions& options = {});

} // namespace primehit
