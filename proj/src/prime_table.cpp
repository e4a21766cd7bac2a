// prime_table.cpp
// Parallel segmented sieve plus the serial reference sieve.
// Parallelization: the OUTPUT word range is cut into fixed segments; each
// segment is owned by one thread, so no two threads touch the same word.

#include "primehit/prime_table.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <mpfr.h>
#include <omp.h>

#include "primehit/errors.hpp"

namespace primehit {

namespace {

constexpr std::uint64_t kSegmentWords = std::uint64_t{1} << 15; // 2^21 integers

std::uint64_t word_count(std::uint64_t limit) { return limit / 64 + 1; }

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void require_limit(std::uint64_t limit) {
    if (limit < 2) {
        throw ConfigError("prime table limit must be >= 2, got " + std::to_string(limit));
    }
}

} // namespace

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> words)
    : limit_(limit), words_(std::move(words)), word_prefix_(words_.size()) {
    std::uint64_t running = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
        word_prefix_[w] = static_cast<std::uint32_t>(running);
        running += static_cast<std::uint64_t>(__builtin_popcountll(words_[w]));
    }
}

PrimeTable PrimeTable::from_flags(std::span<const std::uint8_t> flags) {
    if (flags.size() < 3) {
        throw ConfigError("prime table needs flags for at least 0..2");
    }
    const std::uint64_t limit = flags.size() - 1;
    std::vector<std::uint64_t> words(word_count(limit), 0);
    for (std::uint64_t n = 0; n <= limit; ++n) {
        if (flags[n]) {
            words[n >> 6] |= std::uint64_t{1} << (n & 63);
        }
    }
    return PrimeTable(limit, std::move(words));
}

void PrimeTable::check(std::uint64_t n) const {
    if (n > limit_) {
        throw std::out_of_range("prime table query " + std::to_string(n) +
                                " exceeds limit " + std::to_string(limit_));
    }
}

bool PrimeTable::is_prime(std::uint64_t n) const {
    check(n);
    return is_prime_unchecked(n);
}

std::uint64_t PrimeTable::pi_strict(std::uint64_t n) const {
    check(n);
    return pi_strict_unchecked(n);
}

std::uint64_t PrimeTable::prime_count() const {
    return pi_strict_unchecked(limit_) + (is_prime_unchecked(limit_) ? 1 : 0);
}

std::size_t prime_table_bytes(std::uint64_t limit) {
    return static_cast<std::size_t>(word_count(limit)) *
           (sizeof(std::uint64_t) + sizeof(std::uint32_t));
}

PrimeTable build_prime_table(std::uint64_t limit, std::size_t memory_budget_bytes) {
    require_limit(limit);
    if (prime_table_bytes(limit) > memory_budget_bytes) {
        throw ResourceError("prime table for limit " + std::to_string(limit) + " needs " +
                            std::to_string(prime_table_bytes(limit)) +
                            " bytes, over the budget of " + std::to_string(memory_budget_bytes));
    }

    const std::uint64_t root = isqrt(limit);
    std::vector<std::uint8_t> small(root + 1, 1);
    std::vector<std::uint64_t> base_primes;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base_primes.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }

    const std::uint64_t nwords = word_count(limit);
    std::vector<std::uint64_t> words(nwords, ~std::uint64_t{0});
    const std::uint64_t nsegments = (nwords + kSegmentWords - 1) / kSegmentWords;

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t s = 0; s < static_cast<std::int64_t>(nsegments); ++s) {
        const std::uint64_t w_lo = static_cast<std::uint64_t>(s) * kSegmentWords;
        const std::uint64_t w_hi = std::min(w_lo + kSegmentWords, nwords);
        const std::uint64_t lo = w_lo * 64;
        const std::uint64_t hi = w_hi * 64; // exclusive
        for (std::uint64_t p : base_primes) {
            std::uint64_t m = std::max(p * p, (lo + p - 1) / p * p);
            for (; m < hi; m += p) {
                words[m >> 6] &= ~(std::uint64_t{1} << (m & 63));
            }
        }
    }

    words[0] &= ~std::uint64_t{3}; // 0 and 1
    const std::uint64_t tail_bits = (limit & 63) + 1;
    if (tail_bits < 64) {
        words[nwords - 1] &= (std::uint64_t{1} << tail_bits) - 1;
    }
    return PrimeTable(limit, std::move(words));
}

PrimeTable build_prime_table_reference(std::uint64_t limit) {
    require_limit(limit);
    std::vector<std::uint8_t> flags(limit + 1, 1);
    flags[0] = flags[1] = 0;
    for (std::uint64_t i = 2; i * i <= limit; ++i) {
        if (!flags[i]) continue;
        for (std::uint64_t j = i * i; j <= limit; j += i) flags[j] = 0;
    }
    return PrimeTable::from_flags(flags);
}

bool pnt_bound_holds_exact(std::uint64_t pi, std::uint64_t n) {
    // rhs = 9n / (10 ln n): ln rounded down, quotient rounded up.
    mpfr_t ln, rhs;
    mpfr_inits2(96, ln, rhs, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(ln, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_log(ln, ln, MPFR_RNDD);
    mpfr_mul_ui(ln, ln, 10, MPFR_RNDD);
    mpfr_set_ui(rhs, static_cast<unsigned long>(n), MPFR_RNDN);
    mpfr_mul_ui(rhs, rhs, 9, MPFR_RNDU);
    mpfr_div(rhs, rhs, ln, MPFR_RNDU);
    const bool holds = mpfr_cmp_ui(rhs, static_cast<unsigned long>(pi)) < 0;
    mpfr_clears(ln, rhs, static_cast<mpfr_ptr>(nullptr));
    return holds;
}

namespace {

void require_pnt_range(const PrimeTable& table, std::uint64_t from, std::uint64_t to) {
    if (from <= 1000 || from > to || to > table.limit()) {
        throw ConfigError("PNT sweep needs 1000 < from <= to <= sieve limit; got [" +
                          std::to_string(from) + ", " + std::to_string(to) + "] with limit " +
                          std::to_string(table.limit()));
    }
}

} // namespace

PntCheck verify_pnt_lower_bound(const PrimeTable& table, std::uint64_t from, std::uint64_t to) {
    require_pnt_range(table, from, to);
    constexpr double kMargin = 1.0 + 1e-12;
    std::uint64_t first_bad = UINT64_MAX;

#pragma omp parallel for schedule(static) reduction(min : first_bad)
    for (std::int64_t i = static_cast<std::int64_t>(from); i <= static_cast<std::int64_t>(to); ++i) {
        const auto n = static_cast<std::uint64_t>(i);
        const std::uint64_t pi = table.pi_strict_unchecked(n);
        const double nd = static_cast<double>(n);
        const double rhs = 9.0 * nd / (10.0 * std::log(nd));
        if (static_cast<double>(pi) > rhs * kMargin) continue;
        if (!pnt_bound_holds_exact(pi, n)) first_bad = std::min(first_bad, n);
    }

    PntCheck out{true, std::nullopt, from, to};
    if (first_bad != UINT64_MAX) {
        out.passed = false;
        out.counterexample = first_bad;
    }
    return out;
}

PntCheck verify_pnt_lower_bound_reference(const PrimeTable& table, std::uint64_t from,
                                          std::uint64_t to) {
    require_pnt_range(table, from, to);
    for (std::uint64_t n = from; n <= to; ++n) {
        if (!pnt_bound_holds_exact(table.pi_strict(n), n)) {
            return PntCheck{false, n, from, to};
        }
    }
    return PntCheck{true, std::nullopt, from, to};
}

} // namespace primehit
