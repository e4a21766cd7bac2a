// bigfloat.hpp
// Thin RAII wrapper over an MPFR number. Every arithmetic helper takes an
// explicit rounding direction; there are no implicitly rounded operators.

#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace primehit {

enum class Round { down, up, nearest };

inline mpfr_rnd_t to_mpfr(Round r) {
    switch (r) {
    case Round::down: return MPFR_RNDD;
    case Round::up: return MPFR_RNDU;
    case Round::nearest: break;
    }
    return MPFR_RNDN;
}

inline Round opposite(Round r) {
    return r == Round::up ? Round::down : r == Round::down ? Round::up : r;
}

class BigFloat {
public:
    static constexpr mpfr_prec_t default_precision = 128;

    explicit BigFloat(mpfr_prec_t precision = default_precision);
    BigFloat(std::uint64_t value, mpfr_prec_t precision, Round r = Round::nearest);
    BigFloat(const mpq_class& value, mpfr_prec_t precision, Round r);
    BigFloat(const mpz_class& value, mpfr_prec_t precision, Round r);

    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }

    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    int sign() const { return mpfr_sgn(value_); }

    // Exact: every finite binary float is a dyadic rational.
    mpq_class to_rational() const;
    double to_double(Round r) const;

    friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.value_, b.value_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return compare(a, b) > 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return compare(a, b) >= 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return compare(a, b) == 0; }

private:
    mpfr_t value_;
};

// Results take the larger of the operand precisions.
BigFloat add(const BigFloat& a, const BigFloat& b, Round r);
BigFloat sub(const BigFloat& a, const BigFloat& b, Round r);
BigFloat mul(const BigFloat& a, const BigFloat& b, Round r);
BigFloat div(const BigFloat& a, const BigFloat& b, Round r);
BigFloat mul(const BigFloat& a, std::uint64_t b, Round r);
BigFloat div(const BigFloat& a, std::uint64_t b, Round r);
BigFloat log(const BigFloat& a, Round r);
BigFloat pow(const BigFloat& base, const BigFloat& exponent, Round r);
BigFloat pow(const BigFloat& base, std::uint64_t exponent, Round r);
BigFloat max(const BigFloat& a, const BigFloat& b);

// Scientific notation with `significant` digits, e.g. "3.96372903e-08".
std::string to_scientific(const BigFloat& x, int significant, Round r);

} // namespace primehit
