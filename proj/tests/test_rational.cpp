#include <random>

#include "doctest.h"
#include "libdex/error.hpp"
#include "libdex/rational.hpp"

using namespace libdex;

TEST_CASE("parse_rational accepts integers, decimals, exponents and fractions") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-1.25") == Rational(-5, 4));
    CHECK(parse_rational("0.33") == Rational(33, 100));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("47/6") == Rational(47, 6));
    CHECK(parse_rational(" -2 / 4 ") == Rational(-1, 2));
    CHECK_THROWS_AS(parse_rational("abc"), Error);
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational(""), Error);
}

TEST_CASE("to_fixed rounds half away from zero") {
    CHECK(to_fixed(Rational(85, 12), 2) == "7.08");
    CHECK(to_fixed(Rational(67, 4), 2) == "16.75");
    CHECK(to_fixed(Rational(1, 3), 2) == "0.33");
    CHECK(to_fixed(Rational(5, 3), 2) == "1.67");
    CHECK(to_fixed(Rational(-2, 3), 2) == "-0.67");
    CHECK(to_fixed(Rational(5, 8), 2) == "0.63");
    CHECK(to_fixed(Rational(-1, 1000), 2) == "0.00");
    CHECK(to_fixed(Rational(-29), 2) == "-29.00");
    CHECK(to_fixed(Rational(3, 2), 0) == "2");
}

TEST_CASE("rational JSON encoding round-trips") {
    CHECK(rational_to_json(Rational(3)) == 3);
    CHECK(rational_to_json(Rational(3, 4)) == 0.75);
    CHECK(rational_to_json(Rational(47, 6)) == "47/6");

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> num(-100000, 100000);
    std::uniform_int_distribution<int> den_pick(0, 8);
    const long long dens[] = {1, 2, 3, 4, 6, 8, 12, 1000, 3125};
    for (int i = 0; i < 500; ++i) {
        const Rational value(num(rng), dens[den_pick(rng)]);
        const auto encoded = rational_to_json(value);
        CHECK(rational_from_json(nlohmann::json::parse(encoded.dump())) == value);
    }
}
