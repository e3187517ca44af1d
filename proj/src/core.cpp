#include "nlsubdiv/differences.hpp"
#include "nlsubdiv/errors.hpp"
#include "nlsubdiv/rational.hpp"
#include "nlsubdiv/sequence.hpp"

#include <cctype>

namespace nlsd {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::EmptyResult: return "EmptyResult";
        case ErrorKind::InvalidStencil: return "InvalidStencil";
        case ErrorKind::NotAFunctionGraph: return "NotAFunctionGraph";
        case ErrorKind::IncompatibleWindow: return "IncompatibleWindow";
        case ErrorKind::CorruptPyramid: return "CorruptPyramid";
        case ErrorKind::NotDifferenceRepresentable: return "NotDifferenceRepresentable";
        case ErrorKind::DegenerateDecay: return "DegenerateDecay";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

std::string to_string(const Rational& r) {
    const auto num = boost::multiprecision::numerator(r);
    const auto den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational parse_rational(const std::string& text) {
    auto bad = [&] { return Error(ErrorKind::ParseError, "not a rational: '" + text + "'"); };
    const auto slash = text.find('/');
    auto parse_int = [&](const std::string& s) {
        std::size_t i = 0;
        if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) throw bad();
        for (std::size_t k = i; k < s.size(); ++k) {
            if (!std::isdigit(static_cast<unsigned char>(s[k]))) throw bad();
        }
        return boost::multiprecision::cpp_int(s[0] == '+' ? s.substr(1) : s);
    };
    if (slash == std::string::npos) return Rational(parse_int(text));
    const auto num = parse_int(text.substr(0, slash));
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(num, den);
}

std::string_view to_string(Boundary b) {
    switch (b) {
        case Boundary::Periodic: return "periodic";
        case Boundary::ConstantExtend: return "constant_extend";
        case Boundary::Shrink: return "shrink";
    }
    return "periodic";
}

Boundary parse_boundary(std::string_view text) {
    std::string s(text);
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "periodic") return Boundary::Periodic;
    if (s == "constant_extend" || s == "constantextend" || s == "constant") return Boundary::ConstantExtend;
    if (s == "shrink") return Boundary::Shrink;
    throw Error(ErrorKind::ParseError, "unknown boundary '" + std::string(text) + "'");
}

std::string DiffOrder::name() const {
    if (is_first()) return "d";
    return l == 1 ? std::string("D") : "D^" + std::to_string(l);
}

DiffOrder DiffOrder::parse(const std::string& text) {
    if (text == "d" || text == "first") return first();
    if (text == "D") return iterated(1);
    if (text.rfind("D^", 0) == 0 || text.rfind("D", 0) == 0) {
        const std::string digits = text.substr(text.rfind("D^", 0) == 0 ? 2 : 1);
        if (!digits.empty() && digits.find_first_not_of("0123456789") == std::string::npos) {
            const int l = std::stoi(digits);
            if (l >= 1) return iterated(l);
        }
    }
    throw Error(ErrorKind::ParseError, "unknown difference operator '" + text + "'");
}

Rational binomial(int n, int k) {
    if (k < 0 || k > n) return Rational(0);
    boost::multiprecision::cpp_int c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return Rational(c);
}

namespace detail {

std::vector<std::int64_t> iterated_second_diff_weights(int l) {
    if (l < 1 || l > 30) {
        throw Error(ErrorKind::InvalidArgument, "D^l supported for 1 <= l <= 30");
    }
    std::vector<std::int64_t> w(static_cast<std::size_t>(2 * l + 1));
    std::int64_t c = 1;
    for (int i = 0; i <= 2 * l; ++i) {
        w[static_cast<std::size_t>(i)] = (i % 2 == 0) ? c : -c;
        c = c * (2 * l - i) / (i + 1);
    }
    return w;
}

}  // namespace detail

}  // namespace nlsd
