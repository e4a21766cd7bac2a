// tail_bounds.hpp
// Certified upper bounds on the truncation remainders of the tail-sum series
//   E(tau)   = sum_{k>=1} P(tau >= k)
//   E(tau^2) = sum_{k>=1} (2k-1) P(tau >= k)
// and the enclosing intervals for E(tau) and Var(tau) they induce.
//
// Ingredients:
//   * p(k, n) < (1/3)(5/6)^pi_strict(n) for every layer k and state n
//     (induction on k; checked exactly for small k by the verify sweep).
//   * pi_strict(n) > 0.9 n / ln n for n > 1000: sieve-verified up to the
//     table limit, taken as a theorem input above it.
// Exchanging the order of summation bounds the layers beyond K:
//   sum_{k>K} P(tau > k)          <= sum_{n>=K} f_K(n),  f_K(n) = (n - K) h(n)
//   sum_{k>K} (2k-1) P(tau > k)   <= sum_{n>=K} g_K(n),  g_K(n) = (n^2 - K^2) h(n)
// with h(n) = (1/3)(5/6)^(0.9 n / ln n). The remainders of the moment series
// also contain the mass of layer K itself, P(tau >= K+1), which the exact
// DP supplies; certify() adds it in.
// Every MPFR operation rounds in the direction that can only enlarge an
// upper bound (or shrink a lower bound).

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "primehit/bigfloat.hpp"
#include "primehit/exact_dp.hpp"
#include "primehit/prime_table.hpp"

namespace primehit {

// How the per-state bound (5/6)^pi(n) is evaluated inside the summation window.
enum class PiMode {
    surrogate, // 0.9 n / ln n everywhere
    sieve,     // exact pi_strict(n) for n <= n_cut, surrogate beyond
};

enum class TailKind { first_moment, second_moment };

struct TailOptions {
    std::uint64_t n_cut = 200'000;
    mpfr_prec_t precision = BigFloat::default_precision;
    PiMode pi_mode = PiMode::surrogate;
};

// (1/3)(5/6)^pi_strict(n), exact. Throws std::out_of_range past the table.
mpq_class proposition_bound(std::uint64_t n, const PrimeTable& primes);

// h(n) = (1/3)(5/6)^(0.9 n / ln n), rounded in direction r.
BigFloat h_surrogate(std::uint64_t n, Round r, mpfr_prec_t precision = BigFloat::default_precision);

// f_K(n) and g_K(n). n >= k_cut is required (ConfigError otherwise).
BigFloat f_tail(std::uint64_t n, Round r, std::uint64_t k_cut = 1000,
                mpfr_prec_t precision = BigFloat::default_precision);
BigFloat g_tail(std::uint64_t n, Round r, std::uint64_t k_cut = 1000,
                mpfr_prec_t precision = BigFloat::default_precision);
BigFloat tail_term(TailKind kind, std::uint64_t n, Round r, std::uint64_t k_cut,
                   mpfr_prec_t precision = BigFloat::default_precision);

// Majorant of the sum over n >= start of a tail term, by doubling blocks
// [a, 2a), each bounded by a * term-factor(2a) * (1/3)(5/6)^(0.9 a / ln 2a).
// Blocks are added until one falls below 1e-30 and the next is at most half
// of it; the rest of the series is then bounded by one more copy of the last
// block.
struct BlockTail {
    BigFloat sum;
    int blocks = 0;
};
BlockTail block_tail(TailKind kind, std::uint64_t start, std::uint64_t k_cut,
                     mpfr_prec_t precision = BigFloat::default_precision);

struct TailSum {
    BigFloat value;       // phase_a + phase_b, rounded up
    BigFloat phase_a;     // term-by-term sum over [K, n_cut]
    BigFloat phase_b;     // doubling-block majorant for n > n_cut
    BigFloat max_term;    // largest phase-a term (upper-rounded)
    std::uint64_t argmax = 0;
    int blocks = 0;
};

// Term-by-term upper sum of the tail terms over [k_cut, n_cut]; OpenMP over
// strided partitions, partial sums merged with upward rounding.
struct WindowSums {
    BigFloat first;  // sum of f_K
    BigFloat second; // sum of g_K
    BigFloat max_first;
    BigFloat max_second;
    std::uint64_t argmax_first = 0;
    std::uint64_t argmax_second = 0;
};
WindowSums window_sums(std::uint64_t k_cut, const TailOptions& options, const PrimeTable* primes);
WindowSums window_sums_reference(std::uint64_t k_cut, const TailOptions& options,
                                 const PrimeTable* primes);

// Certified upper bound on sum_{n>=K} f_K(n) (bound_r) and sum_{n>=K} g_K(n)
// (bound_r2). K >= 1000 and n_cut > K are required. PiMode::sieve needs a table
// covering n_cut.
TailSum bound_r(std::uint64_t k_cut, const PrimeTable& primes, const TailOptions& options = {});
TailSum bound_r2(std::uint64_t k_cut, const PrimeTable& primes, const TailOptions& options = {});

// Both sums from one pass over the window.
struct TailPair {
    TailSum first;
    TailSum second;
};
TailPair bound_tails(std::uint64_t k_cut, const PrimeTable& primes, const TailOptions& options = {});

// |RV_K| <= max(r2, 2 E_K r + r^2), all rounded up.
BigFloat bound_rv(const SurvivalSeries& series, const BigFloat& r_upper, const BigFloat& r2_upper);

struct Interval {
    mpq_class lower;
    mpq_class upper;
    mpq_class width() const { return upper - lower; }
    bool contains(const mpq_class& x) const { return lower <= x && x <= upper; }
};

struct TailReport {
    int k_max = 0;
    BigFloat boundary_mass;  // P(tau >= K+1), upper-rounded from the exact value
    TailSum sum_first;       // bound_r(K)
    TailSum sum_second;      // bound_r2(K)
    BigFloat r_upper;        // bound on R_K  = sum_{k>K} P(tau >= k)
    BigFloat r2_upper;       // bound on R2_K = sum_{k>K} (2k-1) P(tau >= k)
    BigFloat rv_abs_upper;   // bound on |RV_K|
    Interval expectation;    // [E_K, E_K + r_upper]
    Interval variance;       // [Var_K - rv, Var_K + rv]
    PntCheck pnt;            // sieve-verified part of the pi lower bound
    PiMode pi_mode = PiMode::surrogate;
    std::vector<std::string> assumptions;
};

// Assembles the report for a series computed to depth K = series.k_max.
// Throws CertificationUnavailable for non-prime targets, ConfigError for
// K < 1000, and std::runtime_error if the pi lower bound fails on the sieve.
TailReport certify(const SurvivalSeries& series, const PrimeTable& primes,
                   const TailOptions& options = {});

// Lower and upper enclosures of h(n) for every n in [from, to], shared by the
// argmax and ratio scans. Entries are computed in parallel.
struct SurrogateTable {
    std::uint64_t from = 0;
    std::uint64_t to = 0;
    std::vector<BigFloat> lower;
    std::vector<BigFloat> upper;

    // f_K(n) or g_K(n) from the cached h(n) enclosure.
    BigFloat term(TailKind kind, std::uint64_t n, Round r, std::uint64_t k_cut) const;
};
SurrogateTable build_surrogate_table(std::uint64_t from, std::uint64_t to,
                                     mpfr_prec_t precision = BigFloat::default_precision);

// Exhaustive argmax over [from, to] with a uniqueness certificate: the lower
// bound at the argmax exceeds the upper bound everywhere else, and the
// doubling-block majorant of everything past `to` is below it as well.
struct ArgmaxScan {
    std::uint64_t argmax = 0;
    bool unique = false;
    BigFloat peak_lower;
    BigFloat beyond_upper;
};
ArgmaxScan scan_argmax(TailKind kind, std::uint64_t k_cut, std::uint64_t from, std::uint64_t to,
                       mpfr_prec_t precision = BigFloat::default_precision);
ArgmaxScan scan_argmax(const SurrogateTable& table, TailKind kind, std::uint64_t k_cut,
                       std::uint64_t from, std::uint64_t to);

// Checks term(n + ceil(13 ln n)) < term(n) / 2 for every n in [from, to],
// comparing an upper bound on the left with a lower bound on the right.
struct RatioScan {
    bool passed = true;
    std::uint64_t first_failure = 0;
    std::uint64_t checked = 0;
};
RatioScan scan_halving_ratio(TailKind kind, std::uint64_t k_cut, std::uint64_t from,
                             std::uint64_t to, mpfr_prec_t precision = BigFloat::default_precision);
// The table must cover [from, to + halving_step(to)].
RatioScan scan_halving_ratio(const SurrogateTable& table, TailKind kind, std::uint64_t k_cut,
                             std::uint64_t from, std::uint64_t to);

// Step used by the halving-ratio scan.
std::uint64_t halving_step(std::uint64_t n);

} // namespace primehit
