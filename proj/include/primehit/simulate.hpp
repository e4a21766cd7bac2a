// simulate.hpp
// Seeded Monte Carlo estimate of the hitting-time distribution.
//
// Stream rule: episodes are grouped into fixed chunks of `chunk_size`
// episodes. Chunk c draws from its own std::mt19937_64 seeded with
// std::seed_seq{seed_lo, seed_hi, c_lo, c_hi}. Chunks are independent of the
// worker count, and all statistics merge as exact integers, so a summary
// depends only on (reps, seed, chunk_size, sides, cap) and not on `workers`.

#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "primehit/prime_table.hpp"

namespace primehit {

struct EpisodeOutcome {
    bool absorbed = false; // false: the cap was reached first
    std::uint32_t tau = 0; // hitting time when absorbed; number of rolls made otherwise
};

// Rolls until the running sum is prime. `roll` returns the next face in
// 1..sides. Requires cap * sides <= primes.limit() (SizingError otherwise).
template <class RollFn>
EpisodeOutcome roll_until_prime(RollFn&& roll, int sides, const PrimeTable& primes,
                                 std::uint32_t cap);

// Histogram of tau values plus the integer sums needed for the moments.
struct EpisodeTally {
    std::uint64_t episodes = 0;
    std::uint64_t overflowed = 0; // episodes that hit the cap
    std::uint64_t sum = 0;
    std::uint64_t sum_squares = 0;
    std::uint32_t max = 0;
    std::vector<std::uint64_t> histogram; // histogram[t] = #{tau == t}, t < size
    std::uint64_t histogram_overflow = 0; // absorbed with tau >= size

    explicit EpisodeTally(std::size_t histogram_bins = 0) : histogram(histogram_bins, 0) {}
    void record(const EpisodeOutcome& e);
    void merge(const EpisodeTally& other);
};

struct SimulationConfig {
    std::uint64_t reps = 1'000'000;
    std::uint64_t seed = 42;
    int sides = 6;
    int workers = 1;
    std::uint32_t cap = 10'000;
    std::uint64_t chunk_size = 1 << 16;
    std::size_t histogram_bins = 128;
    bool fail_on_overflow = true;

    void validate() const;
};

struct SimulationSummary {
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    int workers = 1;
    std::uint64_t chunk_size = 0;
    std::uint64_t absorbed = 0;
    std::uint64_t overflowed = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased; 0 with `degenerate` set when absorbed < 2
    bool degenerate = false;
    std::uint32_t max = 0;
    std::vector<std::uint64_t> histogram;
    std::uint64_t histogram_overflow = 0;
    EpisodeTally tally;

    // Empirical P(tau >= k) over all reps; overflowed episodes count as >= k.
    double survival(std::uint32_t k) const;
};

// Parallel over chunks (OpenMP, `workers` threads). Throws std::runtime_error
// if any episode reaches the cap while fail_on_overflow is set.
SimulationSummary run_simulation(const SimulationConfig& config, const PrimeTable& primes);

// Same streams processed serially in chunk order.
SimulationSummary run_simulation_reference(const SimulationConfig& config,
                                           const PrimeTable& primes);

// The generator used for chunk `chunk` of a run with `seed`.
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk);

// ---------------------------------------------------------------------------

void require_episode_table(int sides, const PrimeTable& primes, std::uint32_t cap);

template <class RollFn>
EpisodeOutcome roll_until_prime(RollFn&& roll, int sides, const PrimeTable& primes,
                                std::uint32_t cap) {
    require_episode_table(sides, primes, cap);
    std::uint64_t sum = 0;
    for (std::uint32_t n = 1; n <= cap; ++n) {
        sum += static_cast<std::uint64_t>(roll());
        if (primes.is_prime_unchecked(sum)) {
            return EpisodeOutcome{true, n};
        }
    }
    return EpisodeOutcome{false, cap};
}

} // namespace primehit
