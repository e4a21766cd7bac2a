// tail_bounds.cpp

#include "primehit/tail_bounds.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <omp.h>

#include "primehit/errors.hpp"

namespace primehit {

namespace {

constexpr std::uint64_t kWindowChunk = 4096;
constexpr int kMaxBlocks = 48;

BigFloat five_sixths(mpfr_prec_t precision, Round r) {
    return div(BigFloat(5, precision), 6, r);
}

// 0.9 a / ln b, rounded in direction r (a, b exact integers).
BigFloat surrogate_exponent(std::uint64_t a, std::uint64_t b, Round r, mpfr_prec_t precision) {
    const Round inner = opposite(r);
    BigFloat den = mul(log(BigFloat(b, precision), inner), 10, inner);
    BigFloat num = mul(BigFloat(a, precision), 9, r);
    return div(num, den, r);
}

// (1/3)(5/6)^x with x = 0.9 a / ln b. An upper bound needs the exponent
// rounded down and the base rounded up.
BigFloat surrogate_power(std::uint64_t a, std::uint64_t b, Round r, mpfr_prec_t precision) {
    BigFloat x = surrogate_exponent(a, b, opposite(r), precision);
    return div(pow(five_sixths(precision, r), x, r), 3, r);
}

// (1/3)(5/6)^pi, rounded in direction r.
BigFloat pi_power(std::uint64_t pi, Round r, mpfr_prec_t precision) {
    return div(pow(five_sixths(precision, r), pi, r), 3, r);
}

BigFloat term_factor(TailKind kind, std::uint64_t n, std::uint64_t k_cut, Round r,
                     mpfr_prec_t precision) {
    if (kind == TailKind::first_moment) {
        return BigFloat(n - k_cut, precision, r);
    }
    const mpz_class nn = n;
    const mpz_class kk = k_cut;
    return BigFloat(mpz_class(nn * nn - kk * kk), precision, r);
}

void require_tail_args(std::uint64_t k_cut, const TailOptions& options, const PrimeTable* primes) {
    if (k_cut < 1000) {
        throw ConfigError("tail bounds need K >= 1000 (pi lower bound holds for n > 1000), got " +
                          std::to_string(k_cut));
    }
    if (options.n_cut <= k_cut) {
        throw ConfigError("n_cut must exceed K");
    }
    if (options.precision < 80) {
        throw ConfigError("tail bounds need at least 80 bits of working precision");
    }
    if (options.pi_mode == PiMode::sieve && (primes == nullptr || primes->limit() < options.n_cut)) {
        throw SizingError("sieve-backed tail bound needs pi(n) up to n_cut", options.n_cut);
    }
}

BigFloat per_state_bound(std::uint64_t n, const TailOptions& options, const PrimeTable* primes) {
    if (options.pi_mode == PiMode::sieve) {
        return pi_power(primes->pi_strict_unchecked(n), Round::up, options.precision);
    }
    return h_surrogate(n, Round::up, options.precision);
}

struct ChunkSums {
    BigFloat first;
    BigFloat second;
    BigFloat max_first;
    BigFloat max_second;
    std::uint64_t argmax_first = 0;
    std::uint64_t argmax_second = 0;
};

ChunkSums sum_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t k_cut,
                    const TailOptions& options, const PrimeTable* primes) {
    const mpfr_prec_t prec = options.precision;
    ChunkSums out{BigFloat(prec), BigFloat(prec), BigFloat(prec), BigFloat(prec)};
    for (std::uint64_t n = lo; n <= hi; ++n) {
        const BigFloat h = per_state_bound(n, options, primes);
        BigFloat f = mul(term_factor(TailKind::first_moment, n, k_cut, Round::up, prec), h, Round::up);
        BigFloat g = mul(term_factor(TailKind::second_moment, n, k_cut, Round::up, prec), h, Round::up);
        if (f > out.max_first) {
            out.max_first = f;
            out.argmax_first = n;
        }
        if (g > out.max_second) {
            out.max_second = g;
            out.argmax_second = n;
        }
        out.first = add(out.first, f, Round::up);
        out.second = add(out.second, g, Round::up);
    }
    return out;
}

WindowSums to_window(ChunkSums&& c) {
    return WindowSums{std::move(c.first), std::move(c.second), std::move(c.max_first),
                      std::move(c.max_second), c.argmax_first, c.argmax_second};
}

void merge(ChunkSums& into, const ChunkSums& part) {
    into.first = add(into.first, part.first, Round::up);
    into.second = add(into.second, part.second, Round::up);
    if (part.max_first > into.max_first) {
        into.max_first = part.max_first;
        into.argmax_first = part.argmax_first;
    }
    if (part.max_second > into.max_second) {
        into.max_second = part.max_second;
        into.argmax_second = part.argmax_second;
    }
}

TailSum make_tail(const BigFloat& phase_a, const BigFloat& max_term, std::uint64_t argmax,
                  BlockTail&& tail) {
    TailSum out{add(phase_a, tail.sum, Round::up), phase_a, std::move(tail.sum), max_term};
    out.argmax = argmax;
    out.blocks = tail.blocks;
    return out;
}

} // namespace

mpq_class proposition_bound(std::uint64_t n, const PrimeTable& primes) {
    const std::uint64_t pi = primes.pi_strict(n);
    mpz_class num;
    mpz_class den;
    mpz_ui_pow_ui(num.get_mpz_t(), 5, static_cast<unsigned long>(pi));
    mpz_ui_pow_ui(den.get_mpz_t(), 6, static_cast<unsigned long>(pi));
    mpq_class q(num, den * 3);
    q.canonicalize();
    return q;
}

BigFloat h_surrogate(std::uint64_t n, Round r, mpfr_prec_t precision) {
    return surrogate_power(n, n, r, precision);
}

BigFloat tail_term(TailKind kind, std::uint64_t n, Round r, std::uint64_t k_cut,
                   mpfr_prec_t precision) {
    if (n < k_cut) {
        throw ConfigError("tail term needs n >= K");
    }
    return mul(term_factor(kind, n, k_cut, r, precision), h_surrogate(n, r, precision), r);
}

BigFloat f_tail(std::uint64_t n, Round r, std::uint64_t k_cut, mpfr_prec_t precision) {
    return tail_term(TailKind::first_moment, n, r, k_cut, precision);
}

BigFloat g_tail(std::uint64_t n, Round r, std::uint64_t k_cut, mpfr_prec_t precision) {
    return tail_term(TailKind::second_moment, n, r, k_cut, precision);
}

BlockTail block_tail(TailKind kind, std::uint64_t start, std::uint64_t k_cut,
                     mpfr_prec_t precision) {
    if (start <= k_cut || start < 3) {
        throw ConfigError("block tail must start above K");
    }
    // Majorant of the sum over [a, 2a): length a, largest factor at 2a, and
    // the smallest exponent 0.9 a / ln(2a) (n / ln n increases for n >= 3).
    auto block_bound = [&](std::uint64_t a) {
        const std::uint64_t b = 2 * a;
        BigFloat len(a, precision);
        BigFloat factor = term_factor(kind, b, k_cut, Round::up, precision);
        BigFloat h = surrogate_power(a, b, Round::up, precision);
        return mul(mul(len, factor, Round::up), h, Round::up);
    };

    const BigFloat threshold(mpq_class(1, mpz_class("1000000000000000000000000000000")), precision,
                             Round::down);
    BlockTail out{BigFloat(precision), 0};
    std::uint64_t a = start;
    for (int j = 0; j < kMaxBlocks; ++j, a *= 2) {
        BigFloat current = block_bound(a);
        out.sum = add(out.sum, current, Round::up);
        ++out.blocks;
        if (current < threshold) {
            // The block majorant ratio B(2a) / B(a) shrinks as a grows, so one
            // ratio <= 1/2 bounds all later blocks by a geometric series whose
            // total is at most `current`.
            BigFloat next = block_bound(2 * a);
            if (mul(next, 2, Round::up) <= current) {
                out.sum = add(out.sum, current, Round::up);
                return out;
            }
        }
        if (a > (std::uint64_t{1} << 60)) {
            break;
        }
    }
    throw std::runtime_error("doubling-block tail did not certify convergence");
}

WindowSums window_sums_reference(std::uint64_t k_cut, const TailOptions& options,
                                 const PrimeTable* primes) {
    require_tail_args(k_cut, options, primes);
    return to_window(sum_range(k_cut, options.n_cut, k_cut, options, primes));
}

WindowSums window_sums(std::uint64_t k_cut, const TailOptions& options, const PrimeTable* primes) {
    require_tail_args(k_cut, options, primes);
    const std::uint64_t count = options.n_cut - k_cut + 1;
    const std::uint64_t nchunks = (count + kWindowChunk - 1) / kWindowChunk;
    std::vector<ChunkSums> parts;
    parts.reserve(nchunks);
    for (std::uint64_t c = 0; c < nchunks; ++c) {
        const mpfr_prec_t p = options.precision;
        parts.push_back(ChunkSums{BigFloat(p), BigFloat(p), BigFloat(p), BigFloat(p)});
    }

#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(nchunks); ++c) {
        const std::uint64_t lo = k_cut + static_cast<std::uint64_t>(c) * kWindowChunk;
        const std::uint64_t hi = std::min(lo + kWindowChunk - 1, options.n_cut);
        parts[static_cast<std::size_t>(c)] = sum_range(lo, hi, k_cut, options, primes);
    }

    // Fixed merge order keeps the result independent of the thread count.
    ChunkSums total = std::move(parts.front());
    for (std::size_t c = 1; c < parts.size(); ++c) {
        merge(total, parts[c]);
    }
    return to_window(std::move(total));
}

TailPair bound_tails(std::uint64_t k_cut, const PrimeTable& primes, const TailOptions& options) {
    WindowSums window = window_sums(k_cut, options, &primes);
    BlockTail first = block_tail(TailKind::first_moment, options.n_cut + 1, k_cut, options.precision);
    BlockTail second = block_tail(TailKind::second_moment, options.n_cut + 1, k_cut, options.precision);
    return TailPair{
        make_tail(window.first, window.max_first, window.argmax_first, std::move(first)),
        make_tail(window.second, window.max_second, window.argmax_second, std::move(second))};
}

TailSum bound_r(std::uint64_t k_cut, const PrimeTable& primes, const TailOptions& options) {
    return std::move(bound_tails(k_cut, primes, options).first);
}

TailSum bound_r2(std::uint64_t k_cut, const PrimeTable& primes, const TailOptions& options) {
    return std::move(bound_tails(k_cut, primes, options).second);
}

BigFloat bound_rv(const SurvivalSeries& series, const BigFloat& r_upper, const BigFloat& r2_upper) {
    if (r_upper.sign() < 0 || r2_upper.sign() < 0) {
        throw ConfigError("remainder bounds must be non-negative");
    }
    const mpfr_prec_t prec = std::max(r_upper.precision(), r2_upper.precision());
    const BigFloat e_k(series.expectation, prec, Round::up);
    BigFloat cross = mul(mul(e_k, 2, Round::up), r_upper, Round::up);
    BigFloat square = mul(r_upper, r_upper, Round::up);
    return max(r2_upper, add(cross, square, Round::up));
}

TailReport certify(const SurvivalSeries& series, const PrimeTable& primes,
                   const TailOptions& options) {
    if (!series.primes_target) {
        throw CertificationUnavailable();
    }
    const auto k_cut = static_cast<std::uint64_t>(series.k_max);
    if (k_cut < 1000) {
        throw ConfigError("certification needs K >= 1000, got " + std::to_string(k_cut));
    }
    if (series.sides != 6) {
        throw ConfigError("certification is only available for six-sided dice");
    }
    require_tail_args(k_cut, options, &primes);

    TailReport report;
    report.k_max = series.k_max;
    report.pi_mode = options.pi_mode;
    report.pnt = verify_pnt_lower_bound(primes, k_cut + 1, primes.limit());
    if (!report.pnt.passed) {
        throw std::runtime_error("pi lower bound fails at n = " +
                                 std::to_string(*report.pnt.counterexample));
    }

    const mpfr_prec_t prec = options.precision;
    TailPair tails = bound_tails(k_cut, primes, options);
    report.sum_first = std::move(tails.first);
    report.sum_second = std::move(tails.second);
    report.boundary_mass = BigFloat(series.survival(series.k_max + 1), prec, Round::up);

    // R_K  = P(tau >= K+1) + sum_{k>K} P(tau > k)
    // R2_K = (2K+1) P(tau >= K+1) + sum_{k>K} (2k-1) P(tau > k) + 2 sum_{k>K} P(tau > k)
    report.r_upper = add(report.boundary_mass, report.sum_first.value, Round::up);
    BigFloat boundary_weighted = mul(report.boundary_mass, 2 * k_cut + 1, Round::up);
    report.r2_upper = add(add(boundary_weighted, report.sum_second.value, Round::up),
                          mul(report.sum_first.value, 2, Round::up), Round::up);
    report.rv_abs_upper = bound_rv(series, report.r_upper, report.r2_upper);

    const mpq_class r = report.r_upper.to_rational();
    const mpq_class rv = report.rv_abs_upper.to_rational();
    report.expectation = Interval{series.expectation, series.expectation + r};
    report.variance = Interval{series.variance - rv, series.variance + rv};

    report.assumptions.push_back(
        "pi_strict(n) > 0.9 n/ln n for n > " + std::to_string(primes.limit()) +
        " (prime number theorem; sieve-verified on (" + std::to_string(k_cut) + ", " +
        std::to_string(primes.limit()) + "])");
    report.assumptions.push_back(
        "p(k,n) < (1/3)(5/6)^pi_strict(n) for every k and non-prime n "
        "(induction on k; checked exactly for k <= 30 by the verify command)");
    return report;
}

BigFloat SurrogateTable::term(TailKind kind, std::uint64_t n, Round r, std::uint64_t k_cut) const {
    if (n < from || n > to || n < k_cut) {
        throw std::out_of_range("surrogate table does not cover n = " + std::to_string(n));
    }
    const BigFloat& h = (r == Round::down ? lower : upper)[n - from];
    return mul(term_factor(kind, n, k_cut, r, h.precision()), h, r);
}

SurrogateTable build_surrogate_table(std::uint64_t from, std::uint64_t to, mpfr_prec_t precision) {
    if (from < 3 || from > to) {
        throw ConfigError("surrogate table needs 3 <= from <= to");
    }
    SurrogateTable table;
    table.from = from;
    table.to = to;
    const std::uint64_t count = to - from + 1;
    table.lower.assign(count, BigFloat(precision));
    table.upper.assign(count, BigFloat(precision));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
        const std::uint64_t n = from + static_cast<std::uint64_t>(i);
        table.lower[static_cast<std::size_t>(i)] = h_surrogate(n, Round::down, precision);
        table.upper[static_cast<std::size_t>(i)] = h_surrogate(n, Round::up, precision);
    }
    return table;
}

ArgmaxScan scan_argmax(const SurrogateTable& table, TailKind kind, std::uint64_t k_cut,
                       std::uint64_t from, std::uint64_t to) {
    if (from < k_cut || from > to || from < table.from || to > table.to) {
        throw ConfigError("argmax scan range outside the surrogate table");
    }
    const mpfr_prec_t prec = table.upper.front().precision();
    ArgmaxScan out{0, false, BigFloat(prec), BigFloat(prec)};
    for (std::uint64_t n = from; n <= to; ++n) {
        BigFloat lo = table.term(kind, n, Round::down, k_cut);
        if (out.argmax == 0 || lo > out.peak_lower) {
            out.peak_lower = std::move(lo);
            out.argmax = n;
        }
    }
    bool separated = true;
    for (std::uint64_t n = from; n <= to && separated; ++n) {
        if (n != out.argmax && table.term(kind, n, Round::up, k_cut) >= out.peak_lower) {
            separated = false;
        }
    }
    out.beyond_upper = block_tail(kind, to + 1, k_cut, prec).sum;
    out.unique = separated && out.beyond_upper < out.peak_lower;
    return out;
}

ArgmaxScan scan_argmax(TailKind kind, std::uint64_t k_cut, std::uint64_t from, std::uint64_t to,
                       mpfr_prec_t precision) {
    return scan_argmax(build_surrogate_table(from, to, precision), kind, k_cut, from, to);
}

std::uint64_t halving_step(std::uint64_t n) {
    BigFloat x = mul(log(BigFloat(n, 64), Round::up), 13, Round::up);
    mpfr_ceil(x.get(), x.get());
    return static_cast<std::uint64_t>(mpfr_get_ui(x.get(), MPFR_RNDU));
}

RatioScan scan_halving_ratio(const SurrogateTable& table, TailKind kind, std::uint64_t k_cut,
                             std::uint64_t from, std::uint64_t to) {
    if (from <= k_cut || from > to || from < table.from || to + halving_step(to) > table.to) {
        throw ConfigError("ratio scan range outside the surrogate table");
    }
    RatioScan out;
    for (std::uint64_t n = from; n <= to; ++n) {
        const BigFloat ahead = table.term(kind, n + halving_step(n), Round::up, k_cut);
        const BigFloat here = table.term(kind, n, Round::down, k_cut);
        ++out.checked;
        if (!(mul(ahead, 2, Round::up) < here)) {
            out.passed = false;
            out.first_failure = n;
            break;
        }
    }
    return out;
}

RatioScan scan_halving_ratio(TailKind kind, std::uint64_t k_cut, std::uint64_t from,
                             std::uint64_t to, mpfr_prec_t precision) {
    const SurrogateTable table = build_surrogate_table(from, to + halving_step(to), precision);
    return scan_halving_ratio(table, kind, k_cut, from, to);
}

} // namespace primehit
