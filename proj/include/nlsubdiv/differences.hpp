#pragma once

#include "nlsubdiv/sequence.hpp"

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

namespace nlsd {

/// Either the first difference d, or the l-th iterate D^l of the centered
/// second difference.
struct DiffOrder {
    enum class Kind { First, Iterated };

    Kind kind = Kind::First;
    int l = 0;

    static DiffOrder first() { return {Kind::First, 0}; }
    static DiffOrder iterated(int order) {
        if (order < 1) {
            throw Error(ErrorKind::InvalidArgument, "D^l needs l >= 1");
        }
        return {Kind::Iterated, order};
    }

    bool is_first() const noexcept { return kind == Kind::First; }

    /// Degree of the symbol (1 - z)^k: 1 for d, 2l for D^l.
    int symbol_degree() const noexcept { return is_first() ? 1 : 2 * l; }

    /// Leftmost and rightmost sample offsets read by the operator at index n.
    std::pair<int, int> extent() const noexcept {
        return is_first() ? std::pair{0, 1} : std::pair{-l, l};
    }

    std::string name() const;
    static DiffOrder parse(const std::string& text);

    bool operator==(const DiffOrder&) const = default;
};

/// C(n, k) as an exact integer-valued rational.
Rational binomial(int n, int k);

namespace detail {

template <class T>
BasicSequence<T> apply_stencil(const BasicSequence<T>& f, int lo, int hi,
                               const std::vector<std::int64_t>& weights, const char* what) {
    std::int64_t out_first = f.first_index();
    std::int64_t out_last = f.last_index();
    if (f.boundary() == Boundary::Shrink) {
        out_first = f.first_index() - lo;
        out_last = f.last_index() - hi;
        if (out_last < out_first) {
            throw Error(ErrorKind::EmptyResult,
                        std::string(what) + ": window of " + std::to_string(f.size()) +
                            " samples is too small under Shrink");
        }
    }
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(out_last - out_first + 1));
    for (std::int64_t n = out_first; n <= out_last; ++n) {
        T acc = T(0);
        for (int i = lo; i <= hi; ++i) {
            const std::int64_t w = weights[static_cast<std::size_t>(i - lo)];
            if (w != 0) acc += T(w) * f.at_index(n + i);
        }
        out.push_back(acc);
    }
    return BasicSequence<T>(std::move(out), out_first, f.level(), f.boundary());
}

std::vector<std::int64_t> iterated_second_diff_weights(int l);

}  // namespace detail

/// (df)_n = f_{n+1} - f_n. Under Shrink the last index is dropped.
template <class T>
BasicSequence<T> first_diff(const BasicSequence<T>& f) {
    if (f.boundary() == Boundary::Shrink && f.size() < 2) {
        throw Error(ErrorKind::EmptyResult, "first_diff needs at least 2 samples under Shrink");
    }
    std::int64_t out_last = f.boundary() == Boundary::Shrink ? f.last_index() - 1 : f.last_index();
    std::vector<T> out;
    out.reserve(static_cast<std::size_t>(out_last - f.first_index() + 1));
    for (std::int64_t n = f.first_index(); n <= out_last; ++n) {
        out.push_back(f.at_index(n + 1) - f.at_index(n));
    }
    return BasicSequence<T>(std::move(out), f.first_index(), f.level(), f.boundary());
}

/// (D^l f)_n = sum_{i=0}^{2l} (-1)^i C(2l, i) f_{n-l+i}, evaluated in one pass.
/// Under Shrink the window loses l samples on each side.
template <class T>
BasicSequence<T> second_diff_iter(const BasicSequence<T>& f, int l) {
    if (l < 1) {
        throw Error(ErrorKind::InvalidArgument, "second_diff_iter needs l >= 1");
    }
    return detail::apply_stencil(f, -l, l, detail::iterated_second_diff_weights(l),
                                 "second_diff_iter");
}

template <class T>
BasicSequence<T> apply_diff(const BasicSequence<T>& f, DiffOrder order) {
    return order.is_first() ? first_diff(f) : second_diff_iter(f, order.l);
}

inline double sup_norm(const Sequence& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline Rational sup_norm(const ExactSequence& f) {
    Rational m = 0;
    for (const Rational& v : f.values()) {
        const Rational a = abs(v);
        if (a > m) m = a;
    }
    return m;
}

}  // namespace nlsd
