#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fairflow {

// Exact rational scalar used on the gadget / oracle path. The general solver
// path works in double; results cross the boundary through to_double().
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

// Every finite double is an exact dyadic rational; conversion is lossless.
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite value");
    return Rat(x);
}

inline Rat rat_pow(const Rat& base, unsigned exp) {
    Rat acc(1);
    Rat b = base;
    unsigned e = exp;
    while (e) {
        if (e & 1u) acc *= b;
        b *= b;
        e >>= 1u;
    }
    return acc;
}

inline std::string rat_to_string(const Rat& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

// Accepts "p/q" as well as plain integers.
inline Rat rat_from_string(const std::string& s) {
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("rat_from_string: cannot parse '" + s + "'");
    }
}

// True when the rational converts to double and back without loss.
inline bool rat_fits_double(const Rat& r) {
    const double d = to_double(r);
    if (!std::isfinite(d)) return false;
    return Rat(d) == r;
}

}  // namespace fairflow
