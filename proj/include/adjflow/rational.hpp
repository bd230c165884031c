#pragma once

// Exact rational arithmetic used throughout the library.
// Backed by GMP; every value is kept canonical (gcd-reduced, positive
// denominator) so that equality of values is equality of representations.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace adjflow {

using Rat = mpq_class;

inline Rat make_rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline bool rat_is_integer(const Rat& r) { return r.get_den() == 1; }

inline std::optional<long> rat_to_long(const Rat& r) {
    if (!rat_is_integer(r) || !r.get_num().fits_slong_p()) return std::nullopt;
    return r.get_num().get_si();
}

// mpq_get_d truncates toward zero; round to nearest so that text round trips
// of doubles (17 significant digits) are fixed points.
inline double rat_to_double(const Rat& r) {
    double d0 = r.get_d();
    if (!std::isfinite(d0)) return d0;
    double d1 = std::nextafter(d0, r < 0 ? -HUGE_VAL : HUGE_VAL);
    Rat e0 = r - Rat(d0);
    Rat e1 = r - Rat(d1);
    if (e0 < 0) e0 = -e0;
    if (e1 < 0) e1 = -e1;
    return e1 < e0 ? d1 : d0;
}

inline std::string rat_to_string(const Rat& r) { return r.get_str(); }

// Parses "123", "-4", "1.5", "0.25". Fractions like 3/4 are handled by the
// expression parser as a division of integer literals.
inline std::optional<Rat> rat_from_decimal(const std::string& text) {
    if (text.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    std::size_t frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) ++frac_digits;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;
    mpz_class num(digits, 10);
    mpz_class den = 1;
    for (std::size_t k = 0; k < frac_digits; ++k) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    if (negative) r = -r;
    return r;
}

// base^e for integer e; e < 0 requires base != 0.
inline std::optional<Rat> rat_pow(const Rat& base, long e) {
    if (e < 0 && base == 0) return std::nullopt;
    mpz_class num, den;
    unsigned long mag = static_cast<unsigned long>(e < 0 ? -e : e);
    mpz_pow_ui(num.get_mpz_t(), base.get_num().get_mpz_t(), mag);
    mpz_pow_ui(den.get_mpz_t(), base.get_den().get_mpz_t(), mag);
    Rat r = e < 0 ? Rat(den, num) : Rat(num, den);
    r.canonicalize();
    return r;
}

// Exact q-th root when it exists (q >= 1).
inline std::optional<Rat> rat_root(const Rat& value, unsigned long q) {
    if (q == 0) return std::nullopt;
    if (q == 1) return value;
    if (value < 0 && q % 2 == 0) return std::nullopt;
    mpz_class num_root, den_root;
    mpz_class num = value.get_num(), den = value.get_den();
    bool negative = num < 0;
    if (negative) num = -num;
    if (mpz_root(num_root.get_mpz_t(), num.get_mpz_t(), q) == 0) return std::nullopt;
    if (mpz_root(den_root.get_mpz_t(), den.get_mpz_t(), q) == 0) return std::nullopt;
    if (negative) num_root = -num_root;
    Rat r(num_root, den_root);
    r.canonicalize();
    return r;
}

}  // namespace adjflow
