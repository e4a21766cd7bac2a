#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "primehit/errors.hpp"
#include "primehit/prime_table.hpp"

using namespace primehit;

TEST_CASE("small tables match trial division") {
    const PrimeTable t = build_prime_table(10);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t n = 0; n <= 10; ++n) {
        if (t.is_prime(n)) primes.push_back(n);
    }
    CHECK(primes == std::vector<std::uint64_t>{2, 3, 5, 7});

    const PrimeTable two = build_prime_table(2);
    CHECK(two.limit() == 2);
    CHECK(two.is_prime(2));
    CHECK_FALSE(two.is_prime(0));
    CHECK_FALSE(two.is_prime(1));
    CHECK_THROWS_AS(two.is_prime(3), std::out_of_range);
    CHECK_THROWS_AS(two.pi_strict(3), std::out_of_range);
}

TEST_CASE("first rolls 1, 4 and 6 are not prime") {
    const PrimeTable t = build_prime_table(100);
    CHECK_FALSE(t.is_prime(1));
    CHECK_FALSE(t.is_prime(4));
    CHECK_FALSE(t.is_prime(6));
    CHECK(t.is_prime(2));
}

TEST_CASE("both sieves agree with trial division up to 10^4") {
    const PrimeTable fast = build_prime_table(10'000);
    const PrimeTable ref = build_prime_table_reference(10'000);
    for (std::uint64_t n = 0; n <= 10'000; ++n) {
        const bool expected = oracle::trial_division_prime(n);
        REQUIRE(fast.is_prime(n) == expected);
        REQUIRE(ref.is_prime(n) == expected);
    }
}

TEST_CASE("pi_strict counts primes strictly below n") {
    const PrimeTable t = build_prime_table(2000);
    CHECK(t.pi_strict(0) == 0);
    CHECK(t.pi_strict(1) == 0);
    CHECK(t.pi_strict(2) == 0);
    CHECK(t.pi_strict(3) == 1);
    CHECK(t.pi_strict(4) == 2);
    CHECK(t.pi_strict(6) == 3);
    CHECK(t.pi_strict(7) == 3);
    CHECK(t.pi_strict(8) == 4);
    CHECK(t.pi_strict(1000) == oracle::count_primes_below(1000));
    CHECK(t.pi_strict(1000) == 168);
    CHECK(t.pi_strict(1001) == 168);
}

TEST_CASE("prefix increments are exactly the primality bits") {
    const PrimeTable t = build_prime_table(50'000);
    for (std::uint64_t n = 0; n < t.limit(); ++n) {
        const std::uint64_t step = t.pi_strict(n + 1) - t.pi_strict(n);
        REQUIRE(step == (t.is_prime(n) ? 1u : 0u));
    }
}

TEST_CASE("segmented sieve equals the reference at awkward limits") {
    std::vector<std::uint64_t> limits = {2, 3, 63, 64, 65, 127, 128, 129, 4095, (1u << 21) - 1,
                                         1u << 21, (1u << 21) + 1, 3'000'017};
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 8; ++i) limits.push_back(2 + rng() % 5'000'000);
    for (std::uint64_t limit : limits) {
        CAPTURE(limit);
        const PrimeTable a = build_prime_table(limit);
        const PrimeTable b = build_prime_table_reference(limit);
        REQUIRE(a.prime_count() == b.prime_count());
        for (int probe = 0; probe < 2000; ++probe) {
            const std::uint64_t n = rng() % (limit + 1);
            REQUIRE(a.is_prime(n) == b.is_prime(n));
            REQUIRE(a.pi_strict(n) == b.pi_strict(n));
        }
        REQUIRE(a.pi_strict(limit) == b.pi_strict(limit));
    }
}

TEST_CASE("primes below 10^7 from two independent sieves") {
    const PrimeTable a = build_prime_table(10'000'000);
    const PrimeTable b = build_prime_table_reference(10'000'000);
    CHECK(a.pi_strict(10'000'000) == 664'579);
    CHECK(b.pi_strict(10'000'000) == 664'579);
}

TEST_CASE("table construction errors") {
    CHECK_THROWS_AS(build_prime_table(1), ConfigError);
    CHECK_THROWS_AS(build_prime_table(0), ConfigError);
    CHECK_THROWS_AS(build_prime_table_reference(1), ConfigError);
    CHECK_THROWS_AS(build_prime_table(1'000'000, 1024), ResourceError);
    CHECK(prime_table_bytes(10'000'000) < default_sieve_memory_budget);
}

TEST_CASE("from_flags builds arbitrary tables") {
    std::vector<std::uint8_t> flags(20, 0);
    flags[1] = flags[9] = 1;
    const PrimeTable t = PrimeTable::from_flags(flags);
    CHECK(t.limit() == 19);
    CHECK(t.is_prime(9));
    CHECK(t.pi_strict(9) == 1);
    CHECK(t.pi_strict(10) == 2);
}

TEST_CASE("pnt lower bound: exact comparison") {
    // 0.9 * 1001 / ln(1001) = 130.40...
    CHECK_FALSE(pnt_bound_holds_exact(130, 1001));
    CHECK(pnt_bound_holds_exact(131, 1001));
}

TEST_CASE("pnt lower bound sweep") {
    const PrimeTable t = build_prime_table(1'000'000);
    const PntCheck single = verify_pnt_lower_bound(t, 1001, 1001);
    CHECK(single.passed);
    CHECK_FALSE(single.counterexample);

    CHECK_THROWS_AS(verify_pnt_lower_bound(t, 2000, 1500), ConfigError);
    CHECK_THROWS_AS(verify_pnt_lower_bound(t, 1000, 1500), ConfigError);
    CHECK_THROWS_AS(verify_pnt_lower_bound(t, 1001, 1'000'001), ConfigError);

    CHECK(verify_pnt_lower_bound(t, 1001, t.limit()).passed);
    const PntCheck ref = verify_pnt_lower_bound_reference(t, 1001, 100'000);
    CHECK(ref.passed);
}

TEST_CASE("pnt sweep reports the smallest counterexample") {
    // Table with no primes at all: every n fails, the first is `from`.
    std::vector<std::uint8_t> flags(5000, 0);
    const PrimeTable empty = PrimeTable::from_flags(flags);
    const PntCheck fast = verify_pnt_lower_bound(empty, 1500, 4000);
    const PntCheck ref = verify_pnt_lower_bound_reference(empty, 1500, 4000);
    REQUIRE_FALSE(fast.passed);
    CHECK(*fast.counterexample == 1500);
    CHECK(*ref.counterexample == 1500);
}
