// exact_dp.hpp
// Exact dynamic program for the dice-sum hitting time
//   tau = min{ n >= 1 : S_n in target },  S_n = X_1 + ... + X_n,
// with X_i uniform on 1..sides.
//
// Layer k holds, for every non-target n in [k, sides*k], the number of roll
// sequences of length k that end at n and never visited the target. Dividing
// by sides^k gives p(k, n). All arithmetic is on GMP integers; nothing is
// rounded until a value is rendered.
//
// Indexing: layer k has total mass P(tau > k) = P(tau >= k+1). The survival
// series therefore starts with P(tau >= 1) = 1 (the empty layer 0) and
// P(tau >= k) is the mass of layer k-1.

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

#include "primehit/prime_table.hpp"

namespace primehit {

// Target set: the primes (default) or an explicit finite set of integers >= 2.
class TargetSet {
public:
    static TargetSet primes() { return TargetSet(); }
    // Throws ConfigError if the set is empty or contains a member < 2.
    static TargetSet explicit_set(std::vector<std::uint64_t> members);

    bool is_primes() const { return primes_; }
    const std::vector<std::uint64_t>& members() const { return members_; }

    // For the primes target, n must be within the table.
    bool contains(std::uint64_t n, const PrimeTable& table) const;

private:
    TargetSet() = default;
    bool primes_ = true;
    std::vector<std::uint64_t> members_; // sorted, unique
};

struct DpConfig {
    int sides = 6;
    int k_max = 1000;
    TargetSet target = TargetSet::primes();

    // Throws ConfigError on sides < 2 or k_max < 1.
    void validate() const;
    // Smallest prime-table limit for which every reachable state and its
    // successors can be queried: sides * k_max + sides.
    std::uint64_t required_sieve_limit() const;
};

class DpLayer {
public:
    int k() const { return k_; }
    int sides() const { return sides_; }
    std::uint64_t first() const { return static_cast<std::uint64_t>(k_); }
    std::uint64_t last() const { return static_cast<std::uint64_t>(sides_) * k_; }
    int denominator_exponent() const { return k_; }

    // Numerator of p(k, n) over sides^k. Zero outside [k, sides*k] and for
    // target states, which are never stored.
    const mpz_class& numerator(std::uint64_t n) const;
    bool is_state(std::uint64_t n) const;

    // Dense storage over [first, last]; entries at target positions are zero.
    const std::vector<mpz_class>& numerators() const { return numerators_; }

    // Sum of numerators: P(tau > k) * sides^k.
    const mpz_class& mass() const { return mass_; }
    // Absorbed numerator mass: P(tau <= k) * sides^k.
    const mpz_class& absorbed() const { return absorbed_; }
    const mpz_class& denominator() const { return denominator_; }

private:
    friend DpLayer dp_init(const DpConfig&, const PrimeTable&);
    friend DpLayer dp_step(const DpLayer&, const DpConfig&, const PrimeTable&);
    friend DpLayer dp_step_reference(const DpLayer&, const DpConfig&, const PrimeTable&);

    DpLayer(int k, int sides);
    void finish(); // sums mass and asserts conservation

    int k_;
    int sides_;
    std::vector<mpz_class> numerators_;
    std::vector<std::uint8_t> target_; // target_[n - first] != 0 <=> n in target
    mpz_class mass_;
    mpz_class absorbed_;
    mpz_class denominator_;
};

// Layer k = 1. Throws SizingError when the prime table is smaller than
// config.required_sieve_limit() (primes target only).
DpLayer dp_init(const DpConfig& config, const PrimeTable& primes);

// Layer k from layer k-1. Sliding-window sum over each state's predecessors,
// with the state range split across OpenMP threads.
DpLayer dp_step(const DpLayer& previous, const DpConfig& config, const PrimeTable& primes);

// Serial layer step summing the predecessors of each state one by one.
DpLayer dp_step_reference(const DpLayer& previous, const DpConfig& config,
                          const PrimeTable& primes);

// P(tau > k) = mass / sides^k, in lowest terms.
mpq_class survival(const DpLayer& layer);

struct SurvivalSeries {
    int sides = 6;
    int k_max = 0;
    bool primes_target = true;

    // survival_numerators[k-1] is P(tau >= k) * sides^(k-1), k = 1..k_max.
    std::vector<mpz_class> survival_numerators;
    // P(tau >= k_max + 1) * sides^k_max: the mass of the last computed layer.
    mpz_class beyond_numerator;

    mpq_class expectation;   // E_K  = sum_{k<=K} P(tau >= k)
    mpq_class second_moment; // E2_K = sum_{k<=K} (2k-1) P(tau >= k)
    mpq_class variance;      // E2_K - E_K^2

    // P(tau >= k) for 1 <= k <= k_max + 1.
    mpq_class survival(int k) const;
    int denominator_exponent(int k) const { return k - 1; }
};

using LayerVisitor = std::function<void(const DpLayer&)>;

// Runs layers 1..k_max and accumulates the truncated moments. The optional
// visitor sees every layer in order.
SurvivalSeries run_dp(const DpConfig& config, const PrimeTable& primes,
                      const LayerVisitor& visit = {});

} // namespace primehit
