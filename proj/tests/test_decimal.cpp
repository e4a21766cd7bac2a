#include <doctest.h>

#include <random>

#include "primehit/decimal.hpp"
#include "primehit/errors.hpp"

using namespace primehit;

namespace {

mpq_class parse_decimal(const std::string& s) {
    const bool neg = s.front() == '-';
    std::string body = neg ? s.substr(1) : s;
    const auto dot = body.find('.');
    const std::size_t frac = body.size() - dot - 1;
    body.erase(dot, 1);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac);
    mpq_class q(mpz_class(body, 10), scale);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

} // namespace

TEST_CASE("basic renderings") {
    CHECK(render_decimal(mpq_class(1, 2), 3, Round::nearest) == "0.500");
    CHECK(render_decimal(mpq_class(1, 3), 5, Round::up) == "0.33334");
    CHECK(render_decimal(mpq_class(1, 3), 5, Round::down) == "0.33333");
    CHECK(render_decimal(mpq_class(2, 3), 5, Round::nearest) == "0.66667");
    CHECK(render_decimal(mpq_class(0), 2, Round::nearest) == "0.00");
    CHECK(render_decimal(mpq_class(17, 4), 1, Round::down) == "4.2");
    CHECK(render_decimal(mpq_class(1), 15, Round::nearest) == "1.000000000000000");
}

TEST_CASE("negative values and ties") {
    CHECK(render_decimal(mpq_class(-1, 3), 5, Round::up) == "-0.33333");
    CHECK(render_decimal(mpq_class(-1, 3), 5, Round::down) == "-0.33334");
    CHECK(render_decimal(mpq_class(-2, 3), 2, Round::nearest) == "-0.67");
    CHECK(render_decimal(mpq_class(1, 8), 2, Round::nearest) == "0.13");
    CHECK(render_decimal(mpq_class(-1, 8), 2, Round::nearest) == "-0.13");
    CHECK(render_decimal(mpq_class(-1, 1000), 2, Round::nearest) == "0.00");
}

TEST_CASE("digits must be positive") {
    CHECK_THROWS_AS(render_decimal(mpq_class(1, 2), 0, Round::nearest), ConfigError);
}

TEST_CASE("property: rendering error is within one unit, half a unit for nearest") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const long num = static_cast<long>(rng() % 2'000'001) - 1'000'000;
        const long den = static_cast<long>(rng() % 999'999) + 1;
        mpq_class x(num, den);
        x.canonicalize();
        const int digits = 1 + static_cast<int>(rng() % 12);
        mpz_class scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
        const mpq_class ulp(1, scale);

        const mpq_class up = parse_decimal(render_decimal(x, digits, Round::up));
        const mpq_class down = parse_decimal(render_decimal(x, digits, Round::down));
        const mpq_class near = parse_decimal(render_decimal(x, digits, Round::nearest));
        REQUIRE(up >= x);
        REQUIRE(up - x < ulp);
        REQUIRE(down <= x);
        REQUIRE(x - down < ulp);
        REQUIRE(abs(mpq_class(near - x)) <= ulp / 2);
    }
}
