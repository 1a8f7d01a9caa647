#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oklab/errors.hpp"

namespace oklab {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using RatVec = std::vector<Rat>;

inline double to_double(const Rat& q) { return q.template convert_to<double>(); }

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

/// Canonical "num/den" form, denominator always printed (byte-stable files).
inline std::string format_rat(const Rat& q) {
    return rat_num(q).str() + "/" + rat_den(q).str();
}

/// Short human form: omits "/1".
inline std::string format_rat_short(const Rat& q) {
    if (rat_den(q) == 1) return rat_num(q).str();
    return format_rat(q);
}

/// Parses "3", "-3", "3/4", "-3/4". Whitespace is not accepted.
inline Rat parse_rat(std::string_view text) {
    if (text.empty()) throw InputError("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rat(Int(std::string(text)));
        Int n{std::string(text.substr(0, slash))};
        Int d{std::string(text.substr(slash + 1))};
        if (d == 0) throw InputError("rational with zero denominator: " + std::string(text));
        return Rat(n, d);
    } catch (const std::runtime_error&) {
        throw InputError("bad rational literal: " + std::string(text));
    }
}

inline Rat dot(const RatVec& a, const RatVec& b) {
    if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline std::vector<double> to_doubles(const RatVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_double(v[i]);
    return out;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    Int r = 1;
    for (unsigned i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline Int int_pow(Int base, unsigned e) {
    Int r = 1;
    while (e--) r *= base;
    return r;
}

} // namespace oklab
