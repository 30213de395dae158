#include "libdex/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "libdex/error.hpp"

namespace libdex {

namespace {

using boost::multiprecision::cpp_int;

cpp_int pow10(unsigned exponent) {
    cpp_int result = 1;
    for (unsigned i = 0; i < exponent; ++i) {
        result *= 10;
    }
    return result;
}

[[noreturn]] void bad_number(std::string_view text) {
    throw Error(ErrorCode::Parse, "not a number: '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view text) {
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    cpp_int mantissa = 0;
    int scale = 0;
    bool digits = false;
    bool in_fraction = false;
    for (; pos < text.size(); ++pos) {
        const char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            digits = true;
            if (in_fraction) {
                ++scale;
            }
        } else if (c == '.' && !in_fraction) {
            in_fraction = true;
        } else {
            break;
        }
    }
    if (!digits) {
        bad_number(text);
    }
    int exponent = 0;
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E') {
            bad_number(text);
        }
        ++pos;
        bool exp_negative = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
            exp_negative = text[pos] == '-';
            ++pos;
        }
        if (pos == text.size()) {
            bad_number(text);
        }
        for (; pos < text.size(); ++pos) {
            if (!std::isdigit(static_cast<unsigned char>(text[pos])) || exponent > 4000) {
                bad_number(text);
            }
            exponent = exponent * 10 + (text[pos] - '0');
        }
        if (exp_negative) {
            exponent = -exponent;
        }
    }
    const int shift = exponent - scale;
    Rational result = shift >= 0 ? Rational(mantissa * pow10(static_cast<unsigned>(shift)))
                                 : Rational(mantissa, pow10(static_cast<unsigned>(-shift)));
    return negative ? Rational(-result) : result;
}

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return std::string(text.substr(begin, end - begin));
}

}  // namespace

Rational parse_rational(std::string_view raw) {
    const std::string text = trim(raw);
    if (text.empty()) {
        bad_number(raw);
    }
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        return parse_decimal(text);
    }
    const Rational numerator = parse_decimal(trim(std::string_view(text).substr(0, slash)));
    const Rational denominator = parse_decimal(trim(std::string_view(text).substr(slash + 1)));
    if (denominator == 0) {
        throw Error(ErrorCode::Parse, "zero denominator in '" + text + "'");
    }
    return numerator / denominator;
}

std::string to_exact_string(const Rational& value) {
    const cpp_int num = boost::multiprecision::numerator(value);
    const cpp_int den = boost::multiprecision::denominator(value);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

std::string to_fixed(const Rational& value, int decimals) {
    const cpp_int scale = pow10(static_cast<unsigned>(decimals));
    const Rational scaled = abs(value) * scale;
    const cpp_int num = boost::multiprecision::numerator(scaled);
    const cpp_int den = boost::multiprecision::denominator(scaled);
    cpp_int units = num / den;
    if ((num % den) * 2 >= den) {
        ++units;
    }
    std::string digits = units.str();
    if (decimals > 0) {
        if (digits.size() <= static_cast<std::size_t>(decimals)) {
            digits.insert(0, static_cast<std::size_t>(decimals) - digits.size() + 1, '0');
        }
        digits.insert(digits.size() - static_cast<std::size_t>(decimals), ".");
    }
    if (value < 0 && units != 0) {
        digits.insert(0, "-");
    }
    return digits;
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

bool is_short_decimal(const Rational& value) {
    cpp_int den = boost::multiprecision::denominator(value);
    unsigned twos = 0;
    unsigned fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) {
        return false;
    }
    const unsigned places = std::max(twos, fives);
    const cpp_int scaled = boost::multiprecision::numerator(abs(value) * pow10(places));
    return scaled.str().size() <= 15;
}

nlohmann::json rational_to_json(const Rational& value) {
    if (boost::multiprecision::denominator(value) == 1) {
        const cpp_int num = boost::multiprecision::numerator(value);
        if (num.str().size() <= 15) {
            return num.convert_to<long long>();
        }
        return num.str();
    }
    if (is_short_decimal(value)) {
        return to_double(value);
    }
    return to_exact_string(value);
}

Rational rational_from_json(const nlohmann::json& value) {
    if (value.is_number_integer()) {
        return Rational(value.get<long long>());
    }
    if (value.is_number_float()) {
        return parse_decimal(value.dump());
    }
    if (value.is_string()) {
        return parse_rational(value.get<std::string>());
    }
    throw Error(ErrorCode::Parse, "expected a number, got " + value.dump());
}

Rational abs(const Rational& value) {
    return value < 0 ? Rational(-value) : value;
}

}  // namespace libdex
