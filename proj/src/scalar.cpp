#include "csd/scalar.hpp"

#include <stdexcept>

namespace csd {

std::string to_string(const Scalar& s) { return s.get_str(10); }

Scalar parse_scalar(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty scalar");
    auto dot_pos = text.find('.');
    if (dot_pos != std::string::npos) {
        if (text.find('/') != std::string::npos) throw std::invalid_argument("bad scalar: " + text);
        std::string digits = text.substr(0, dot_pos) + text.substr(dot_pos + 1);
        std::size_t frac = text.size() - dot_pos - 1;
        Integer num;
        if (num.set_str(digits, 10) != 0) throw std::invalid_argument("bad scalar: " + text);
        Integer den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
        Scalar out(num, den);
        out.canonicalize();
        return out;
    }
    Scalar out;
    if (out.set_str(text, 10) != 0) throw std::invalid_argument("bad scalar: " + text);
    if (out.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    out.canonicalize();
    return out;
}

Scalar dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Scalar s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

int sign(const Scalar& s) { return sgn(s); }

Scalar abs_value(const Scalar& s) { return s < 0 ? Scalar(-s) : s; }

unsigned ceil_log2(const Scalar& value) {
    if (value <= 0) throw std::invalid_argument("ceil_log2 of non-positive value");
    unsigned e = 0;
    Scalar p = 1;
    while (p < value) {
        p *= 2;
        ++e;
    }
    return e;
}

unsigned bits_for(const Integer& count) {
    if (count <= 1) return 0;
    return ceil_log2(Scalar(count));
}

}  // namespace csd
