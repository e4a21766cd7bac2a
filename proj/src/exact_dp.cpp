// exact_dp.cpp

#include "primehit/exact_dp.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "primehit/errors.hpp"

namespace primehit {

namespace {

const mpz_class& zero_numerator() {
    static const mpz_class zero = 0;
    return zero;
}

constexpr std::uint64_t kChunk = 512;

void require_table(const DpConfig& config, const PrimeTable& primes, std::uint64_t needed) {
    if (config.target.is_primes() && primes.limit() < needed) {
        throw SizingError("prime table too small for the dynamic program", needed);
    }
}

} // namespace

TargetSet TargetSet::explicit_set(std::vector<std::uint64_t> members) {
    if (members.empty()) {
        throw ConfigError("explicit target set is empty");
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    if (members.front() < 2) {
        throw ConfigError("target members must be >= 2, got " + std::to_string(members.front()));
    }
    TargetSet t;
    t.primes_ = false;
    t.members_ = std::move(members);
    return t;
}

bool TargetSet::contains(std::uint64_t n, const PrimeTable& table) const {
    if (primes_) {
        return table.is_prime(n);
    }
    return std::binary_search(members_.begin(), members_.end(), n);
}

void DpConfig::validate() const {
    if (sides < 2) {
        throw ConfigError("sides must be >= 2, got " + std::to_string(sides));
    }
    if (k_max < 1) {
        throw ConfigError("k_max must be >= 1, got " + std::to_string(k_max));
    }
}

std::uint64_t DpConfig::required_sieve_limit() const {
    return static_cast<std::uint64_t>(sides) * static_cast<std::uint64_t>(k_max) +
           static_cast<std::uint64_t>(sides);
}

DpLayer::DpLayer(int k, int sides)
    : k_(k), sides_(sides),
      numerators_(static_cast<std::size_t>(sides) * k - k + 1),
      target_(numerators_.size(), 0) {}

const mpz_class& DpLayer::numerator(std::uint64_t n) const {
    if (n < first() || n > last()) {
        return zero_numerator();
    }
    return numerators_[n - first()];
}

bool DpLayer::is_state(std::uint64_t n) const {
    return n >= first() && n <= last() && target_[n - first()] == 0;
}

void DpLayer::finish() {
    mass_ = 0;
    for (const auto& v : numerators_) {
        mass_ += v;
    }
    if (mass_ + absorbed_ != denominator_) {
        throw std::logic_error("mass conservation violated at layer " + std::to_string(k_));
    }
}

DpLayer dp_init(const DpConfig& config, const PrimeTable& primes) {
    config.validate();
    require_table(config, primes, config.required_sieve_limit());
    DpLayer layer(1, config.sides);
    layer.absorbed_ = 0;
    for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(config.sides); ++n) {
        if (config.target.contains(n, primes)) {
            layer.target_[n - 1] = 1;
            layer.absorbed_ += 1;
        } else {
            layer.numerators_[n - 1] = 1;
        }
    }
    layer.denominator_ = config.sides;
    layer.finish();
    return layer;
}

DpLayer dp_step(const DpLayer& previous, const DpConfig& config, const PrimeTable& primes) {
    const int k = previous.k() + 1;
    const auto sides = static_cast<std::uint64_t>(config.sides);
    DpLayer layer(k, config.sides);
    require_table(config, primes, layer.last());

    const std::uint64_t first = layer.first();
    const std::uint64_t count = layer.numerators_.size();
    const std::uint64_t nchunks = (count + kChunk - 1) / kChunk;
    std::vector<mpz_class> absorbed_parts(nchunks);

    for (std::uint64_t i = 0; i < count; ++i) {
        layer.target_[i] = config.target.contains(first + i, primes) ? 1 : 0;
    }

#pragma omp parallel for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
        const std::uint64_t lo = first + static_cast<std::uint64_t>(c) * kChunk;
        const std::uint64_t hi = std::min(lo + kChunk, first + count); // exclusive
        // window = sum of previous numerators over [n - sides, n - 1]
        mpz_class window = 0;
        for (std::uint64_t m = lo - std::min(lo, sides); m < lo; ++m) {
            window += previous.numerator(m);
        }
        mpz_class& absorbed = absorbed_parts[static_cast<std::size_t>(c)];
        for (std::uint64_t n = lo; n < hi; ++n) {
            if (layer.target_[n - first]) {
                absorbed += window;
            } else {
                layer.numerators_[n - first] = window;
            }
            window += previous.numerator(n);
            if (n >= sides) {
                window -= previous.numerator(n - sides);
            }
        }
    }

    layer.absorbed_ = previous.absorbed() * config.sides;
    for (const auto& part : absorbed_parts) {
        layer.absorbed_ += part;
    }
    layer.denominator_ = previous.denominator() * config.sides;
    layer.finish();
    return layer;
}

DpLayer dp_step_reference(const DpLayer& previous, const DpConfig& config,
                          const PrimeTable& primes) {
    const int k = previous.k() + 1;
    const auto sides = static_cast<std::uint64_t>(config.sides);
    DpLayer layer(k, config.sides);
    require_table(config, primes, layer.last());

    layer.absorbed_ = previous.absorbed() * config.sides;
    for (std::uint64_t n = layer.first(); n <= layer.last(); ++n) {
        mpz_class sum = 0;
        for (std::uint64_t face = 1; face <= sides && face <= n; ++face) {
            if (previous.is_state(n - face)) {
                sum += previous.numerator(n - face);
            }
        }
        if (config.target.contains(n, primes)) {
            layer.target_[n - layer.first()] = 1;
            layer.absorbed_ += sum;
        } else {
            layer.numerators_[n - layer.first()] = sum;
        }
    }
    layer.denominator_ = previous.denominator() * config.sides;
    layer.finish();
    return layer;
}

mpq_class survival(const DpLayer& layer) {
    mpq_class q(layer.mass(), layer.denominator());
    q.canonicalize();
    return q;
}

mpq_class SurvivalSeries::survival(int k) const {
    if (k < 1 || k > k_max + 1) {
        throw std::out_of_range("survival index " + std::to_string(k) + " outside 1.." +
                                std::to_string(k_max + 1));
    }
    const mpz_class& num = k == k_max + 1 ? beyond_numerator
                                          : survival_numerators[static_cast<std::size_t>(k - 1)];
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(sides),
                  static_cast<unsigned long>(k - 1));
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

SurvivalSeries run_dp(const DpConfig& config, const PrimeTable& primes, const LayerVisitor& visit) {
    config.validate();
    SurvivalSeries series;
    series.sides = config.sides;
    series.k_max = config.k_max;
    series.primes_target = config.target.is_primes();
    series.survival_numerators.reserve(static_cast<std::size_t>(config.k_max));
    series.survival_numerators.emplace_back(1);

    DpLayer layer = dp_init(config, primes);
    if (visit) visit(layer);
    for (int k = 2; k <= config.k_max; ++k) {
        series.survival_numerators.push_back(layer.mass());
        layer = dp_step(layer, config, primes);
        if (visit) visit(layer);
    }
    series.beyond_numerator = layer.mass();

    // Horner accumulation over the common denominator sides^(K-1).
    mpz_class first = 0;
    mpz_class second = 0;
    for (int k = 1; k <= config.k_max; ++k) {
        const mpz_class& s = series.survival_numerators[static_cast<std::size_t>(k - 1)];
        first = first * config.sides + s;
        second = second * config.sides + s * (2 * k - 1);
    }
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(config.sides),
                  static_cast<unsigned long>(config.k_max - 1));
    series.expectation = mpq_class(first, den);
    series.expectation.canonicalize();
    series.second_moment = mpq_class(second, den);
    series.second_moment.canonicalize();
    series.variance = series.second_moment - series.expectation * series.expectation;
    return series;
}

} // namespace primehit
