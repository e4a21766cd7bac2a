// bigfloat.cpp

#include "primehit/bigfloat.hpp"

#include <algorithm>
#include <memory>

namespace primehit {

BigFloat::BigFloat(mpfr_prec_t precision) {
    mpfr_init2(value_, precision);
    mpfr_set_zero(value_, 1);
}

BigFloat::BigFloat(std::uint64_t value, mpfr_prec_t precision, Round r) : BigFloat(precision) {
    static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
    mpfr_set_ui(value_, static_cast<unsigned long>(value), to_mpfr(r));
}

BigFloat::BigFloat(const mpq_class& value, mpfr_prec_t precision, Round r) : BigFloat(precision) {
    mpfr_set_q(value_, value.get_mpq_t(), to_mpfr(r));
}

BigFloat::BigFloat(const mpz_class& value, mpfr_prec_t precision, Round r) : BigFloat(precision) {
    mpfr_set_z(value_, value.get_mpz_t(), to_mpfr(r));
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    // Leave `other` as a valid 2-bit zero so its destructor stays well-defined.
    mpfr_init2(value_, MPFR_PREC_MIN);
    mpfr_swap(value_, other.value_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(value_, other.precision());
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    mpfr_swap(value_, other.value_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(value_); }

mpq_class BigFloat::to_rational() const {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), value_);
    return q;
}

double BigFloat::to_double(Round r) const { return mpfr_get_d(value_, to_mpfr(r)); }

namespace {

mpfr_prec_t wider(const BigFloat& a, const BigFloat& b) {
    return std::max(a.precision(), b.precision());
}

} // namespace

BigFloat add(const BigFloat& a, const BigFloat& b, Round r) {
    BigFloat out(wider(a, b));
    mpfr_add(out.get(), a.get(), b.get(), to_mpfr(r));
    return out;
}

BigFloat sub(const BigFloat& a, const BigFloat& b, Round r) {
    BigFloat out(wider(a, b));
    mpfr_sub(out.get(), a.get(), b.get(), to_mpfr(r));
    return out;
}

BigFloat mul(const BigFloat& a, const BigFloat& b, Round r) {
    BigFloat out(wider(a, b));
    mpfr_mul(out.get(), a.get(), b.get(), to_mpfr(r));
    return out;
}

BigFloat div(const BigFloat& a, const BigFloat& b, Round r) {
    BigFloat out(wider(a, b));
    mpfr_div(out.get(), a.get(), b.get(), to_mpfr(r));
    return out;
}

BigFloat mul(const BigFloat& a, std::uint64_t b, Round r) {
    BigFloat out(a.precision());
    mpfr_mul_ui(out.get(), a.get(), static_cast<unsigned long>(b), to_mpfr(r));
    return out;
}

BigFloat div(const BigFloat& a, std::uint64_t b, Round r) {
    BigFloat out(a.precision());
    mpfr_div_ui(out.get(), a.get(), static_cast<unsigned long>(b), to_mpfr(r));
    return out;
}

BigFloat log(const BigFloat& a, Round r) {
    BigFloat out(a.precision());
    mpfr_log(out.get(), a.get(), to_mpfr(r));
    return out;
}

BigFloat pow(const BigFloat& base, const BigFloat& exponent, Round r) {
    BigFloat out(wider(base, exponent));
    mpfr_pow(out.get(), base.get(), exponent.get(), to_mpfr(r));
    return out;
}

BigFloat pow(const BigFloat& base, std::uint64_t exponent, Round r) {
    BigFloat out(base.precision());
    mpfr_pow_ui(out.get(), base.get(), static_cast<unsigned long>(exponent), to_mpfr(r));
    return out;
}

BigFloat max(const BigFloat& a, const BigFloat& b) { return a < b ? b : a; }

std::string to_scientific(const BigFloat& x, int significant, Round r) {
    if (x.is_zero()) {
        return "0";
    }
    mpfr_exp_t exp10 = 0;
    std::unique_ptr<char, void (*)(char*)> digits(
        mpfr_get_str(nullptr, &exp10, 10, static_cast<size_t>(significant), x.get(), to_mpfr(r)),
        mpfr_free_str);
    std::string s(digits.get());
    std::string sign;
    if (!s.empty() && s.front() == '-') {
        sign = "-";
        s.erase(0, 1);
    }
    // mpfr_get_str yields 0.DDDD x 10^exp10; shift to D.DDD x 10^(exp10-1).
    long e = static_cast<long>(exp10) - 1;
    std::string out = sign + s.substr(0, 1);
    if (s.size() > 1) {
        out += "." + s.substr(1);
    }
    std::string es = std::to_string(e < 0 ? -e : e);
    if (es.size() < 2) {
        es.insert(0, "0");
    }
    out += (e < 0 ? "e-" : "e+") + es;
    return out;
}

} // namespace primehit
