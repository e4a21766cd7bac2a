// prime_table.hpp
// Sieve-backed primality table with an O(1) strict prime-counting query.
//
// pi_strict(n) counts primes p < n, NOT p <= n. The tail bounds are stated
// in terms of the number of primes strictly below n, so pi_strict(6) == 3
// and pi_strict(7) == 3.
//
// Storage: one bit per integer in [0, limit] plus a running prime count per
// 64-bit word, so pi_strict is one table lookup and one popcount.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace primehit {

class PrimeTable {
public:
    // Builds a table from explicit primality flags (flags[n] != 0 means "n is
    // prime"). Used by the reference sieve and for fault injection in tests.
    static PrimeTable from_flags(std::span<const std::uint8_t> flags);

    std::uint64_t limit() const { return limit_; }

    // Both throw std::out_of_range for n > limit().
    bool is_prime(std::uint64_t n) const;
    std::uint64_t pi_strict(std::uint64_t n) const;

    // Number of primes <= limit().
    std::uint64_t prime_count() const;

    // Unchecked variants for hot loops whose bounds were validated up front.
    bool is_prime_unchecked(std::uint64_t n) const {
        return (words_[n >> 6] >> (n & 63)) & 1u;
    }
    std::uint64_t pi_strict_unchecked(std::uint64_t n) const {
        const std::uint64_t below = words_[n >> 6] & ((std::uint64_t{1} << (n & 63)) - 1);
        return word_prefix_[n >> 6] + static_cast<std::uint64_t>(__builtin_popcountll(below));
    }

private:
    friend PrimeTable build_prime_table_reference(std::uint64_t limit);
    friend PrimeTable build_prime_table(std::uint64_t limit, std::size_t memory_budget_bytes);

    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> words);
    void check(std::uint64_t n) const;

    std::uint64_t limit_;
    std::vector<std::uint64_t> words_;       // bit n%64 of words_[n/64] <=> n prime
    std::vector<std::uint32_t> word_prefix_; // primes below 64*w
};

inline constexpr std::size_t default_sieve_memory_budget = std::size_t{1} << 30;

// Bytes a table for `limit` occupies.
std::size_t prime_table_bytes(std::uint64_t limit);

// Segmented sieve of Eratosthenes, segments processed in parallel (OpenMP).
// Throws ConfigError if limit < 2 and ResourceError if the table would exceed
// memory_budget_bytes.
PrimeTable build_prime_table(std::uint64_t limit,
                             std::size_t memory_budget_bytes = default_sieve_memory_budget);

// Serial byte-per-integer sieve. Kept as the reference for the parallel kernel.
PrimeTable build_prime_table_reference(std::uint64_t limit);

struct PntCheck {
    bool passed = true;
    std::optional<std::uint64_t> counterexample; // smallest failing n
    std::uint64_t from = 0;
    std::uint64_t to = 0;
};

// Checks pi_strict(n) > 0.9 n / ln n for every n in [from, to], with the right
// side rounded up. Requires 1000 < from <= to <= table.limit(); otherwise
// throws ConfigError.
//
// A double-precision filter with a 1e-12 relative safety margin decides the
// clear cases; anything inside the margin is re-evaluated with MPFR using
// directed rounding.
PntCheck verify_pnt_lower_bound(const PrimeTable& table, std::uint64_t from, std::uint64_t to);

// Serial variant evaluating every n with MPFR directed rounding.
PntCheck verify_pnt_lower_bound_reference(const PrimeTable& table, std::uint64_t from,
                                          std::uint64_t to);

// True iff pi > 0.9 n / ln n, with the right side rounded up (MPFR).
bool pnt_bound_holds_exact(std::uint64_t pi, std::uint64_t n);

} // namespace primehit
