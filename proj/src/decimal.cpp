// decimal.cpp

#include "primehit/decimal.hpp"

#include "primehit/errors.hpp"

namespace primehit {

std::string render_decimal(const mpq_class& x, int digits, Round mode) {
    if (digits < 1) {
        throw ConfigError("render_decimal: digits must be >= 1");
    }
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const mpz_class num = x.get_num() * scale;
    const mpz_class& den = x.get_den();

    mpz_class q;
    switch (mode) {
    case Round::down:
        mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        break;
    case Round::up:
        mpz_cdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        break;
    case Round::nearest: {
        // |q| = floor((2|num| + den) / (2 den)), sign restored afterwards.
        mpz_class a = abs(num);
        mpz_class twice = 2 * a + den;
        mpz_class d2 = 2 * den;
        mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), d2.get_mpz_t());
        if (sgn(num) < 0) {
            q = -q;
        }
        break;
    }
    }

    const bool negative = sgn(q) < 0;
    std::string body = mpz_class(abs(q)).get_str();
    if (body.size() <= static_cast<size_t>(digits)) {
        body.insert(0, static_cast<size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<size_t>(digits), ".");
    return negative ? "-" + body : body;
}

} // namespace primehit
