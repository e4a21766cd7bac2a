// simulate.cpp

#include "primehit/simulate.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "primehit/errors.hpp"

namespace primehit {

void require_episode_table(int sides, const PrimeTable& primes, std::uint32_t cap) {
    if (sides < 2) {
        throw ConfigError("sides must be >= 2");
    }
    const std::uint64_t needed = static_cast<std::uint64_t>(cap) * static_cast<std::uint64_t>(sides);
    if (primes.limit() < needed) {
        throw SizingError("prime table too small for the episode cap", needed);
    }
}

void EpisodeTally::record(const EpisodeOutcome& e) {
    ++episodes;
    if (!e.absorbed) {
        ++overflowed;
        return;
    }
    sum += e.tau;
    sum_squares += static_cast<std::uint64_t>(e.tau) * e.tau;
    max = std::max(max, e.tau);
    if (e.tau < histogram.size()) {
        ++histogram[e.tau];
    } else {
        ++histogram_overflow;
    }
}

void EpisodeTally::merge(const EpisodeTally& other) {
    episodes += other.episodes;
    overflowed += other.overflowed;
    sum += other.sum;
    sum_squares += other.sum_squares;
    max = std::max(max, other.max);
    if (histogram.size() < other.histogram.size()) {
        histogram.resize(other.histogram.size(), 0);
    }
    for (std::size_t i = 0; i < other.histogram.size(); ++i) {
        histogram[i] += other.histogram[i];
    }
    histogram_overflow += other.histogram_overflow;
}

void SimulationConfig::validate() const {
    if (reps < 1) throw ConfigError("reps must be >= 1");
    if (workers < 1) throw ConfigError("workers must be >= 1");
    if (sides < 2) throw ConfigError("sides must be >= 2");
    if (cap < 1) throw ConfigError("cap must be >= 1");
    if (chunk_size < 1) throw ConfigError("chunk_size must be >= 1");
}

double SimulationSummary::survival(std::uint32_t k) const {
    if (k <= 1) return 1.0;
    std::uint64_t below = 0; // absorbed with tau < k
    for (std::size_t t = 0; t < histogram.size() && t < k; ++t) {
        below += histogram[t];
    }
    if (k > histogram.size()) {
        throw std::out_of_range("survival beyond the histogram range");
    }
    return static_cast<double>(reps - below) / static_cast<double>(reps);
}

std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return std::mt19937_64(seq);
}

namespace {

EpisodeTally run_chunk(const SimulationConfig& config, const PrimeTable& primes, std::uint64_t chunk,
                       std::uint64_t episodes) {
    std::mt19937_64 engine = chunk_engine(config.seed, chunk);
    std::uniform_int_distribution<int> die(1, config.sides);
    auto roll = [&] { return die(engine); };
    EpisodeTally tally(config.histogram_bins);
    for (std::uint64_t i = 0; i < episodes; ++i) {
        tally.record(roll_until_prime(roll, config.sides, primes, config.cap));
    }
    return tally;
}

std::uint64_t chunk_count(const SimulationConfig& c) {
    return (c.reps + c.chunk_size - 1) / c.chunk_size;
}

std::uint64_t chunk_episodes(const SimulationConfig& c, std::uint64_t chunk) {
    return std::min(c.chunk_size, c.reps - chunk * c.chunk_size);
}

SimulationSummary summarize(const SimulationConfig& config, EpisodeTally&& tally) {
    if (config.fail_on_overflow && tally.overflowed > 0) {
        throw std::runtime_error(std::to_string(tally.overflowed) +
                                 " episode(s) reached the cap of " + std::to_string(config.cap) +
                                 " rolls");
    }
    SimulationSummary s;
    s.reps = config.reps;
    s.seed = config.seed;
    s.workers = config.workers;
    s.chunk_size = config.chunk_size;
    s.overflowed = tally.overflowed;
    s.absorbed = tally.episodes - tally.overflowed;
    s.max = tally.max;
    s.histogram = tally.histogram;
    s.histogram_overflow = tally.histogram_overflow;
    if (s.absorbed > 0) {
        const double n = static_cast<double>(s.absorbed);
        s.mean = static_cast<double>(tally.sum) / n;
    }
    if (s.absorbed >= 2) {
        // n * sum_sq - sum^2 is exact in 128-bit integers.
        const unsigned __int128 n = s.absorbed;
        const unsigned __int128 num = n * tally.sum_squares -
                                      static_cast<unsigned __int128>(tally.sum) * tally.sum;
        s.variance = static_cast<double>(static_cast<long double>(num) /
                                         (static_cast<long double>(s.absorbed) *
                                          static_cast<long double>(s.absorbed - 1)));
    } else {
        s.degenerate = true;
    }
    s.tally = std::move(tally);
    return s;
}

} // namespace

SimulationSummary run_simulation(const SimulationConfig& config, const PrimeTable& primes) {
    config.validate();
    require_episode_table(config.sides, primes, config.cap);
    const std::uint64_t chunks = chunk_count(config);
    std::vector<EpisodeTally> parts(chunks);

#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
        const auto chunk = static_cast<std::uint64_t>(c);
        parts[chunk] = run_chunk(config, primes, chunk, chunk_episodes(config, chunk));
    }

    EpisodeTally total(config.histogram_bins);
    for (const auto& p : parts) {
        total.merge(p);
    }
    return summarize(config, std::move(total));
}

SimulationSummary run_simulation_reference(const SimulationConfig& config,
                                           const PrimeTable& primes) {
    config.validate();
    require_episode_table(config.sides, primes, config.cap);
    EpisodeTally total(config.histogram_bins);
    for (std::uint64_t c = 0; c < chunk_count(config); ++c) {
        total.merge(run_chunk(config, primes, c, chunk_episodes(config, c)));
    }
    return summarize(config, std::move(total));
}

} // namespace primehit
