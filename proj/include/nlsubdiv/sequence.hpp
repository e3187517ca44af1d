#pragma once

#include "nlsubdiv/errors.hpp"
#include "nlsubdiv/rational.hpp"

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

namespace nlsd {

/// How a finite window stands in for a bi-infinite grid sequence.
enum class Boundary {
    Periodic,        // indices wrap modulo the window length
    ConstantExtend,  // reads outside the window return the nearest endpoint
    Shrink,          // operations keep only indices whose stencil fits
};

std::string_view to_string(Boundary b);
Boundary parse_boundary(std::string_view text);

/// Samples f_n^j on the dyadic grid n 2^{-j}, for n in [first_index, first_index + size).
template <class T>
class BasicSequence {
public:
    using value_type = T;

    BasicSequence(std::vector<T> values, std::int64_t first_index = 0, int level = 0,
                  Boundary boundary = Boundary::Periodic)
        : values_(std::move(values)), first_index_(first_index), level_(level), boundary_(boundary) {
        if (values_.empty()) {
            throw Error(ErrorKind::InvalidArgument, "sequence must hold at least one sample");
        }
        if (level_ < 0) {
            throw Error(ErrorKind::InvalidArgument, "sequence level must be non-negative");
        }
        if constexpr (std::is_floating_point_v<T>) {
            for (const T& v : values_) {
                if (!std::isfinite(v)) {
                    throw Error(ErrorKind::InvalidArgument, "sequence samples must be finite");
                }
            }
        }
    }

    const std::vector<T>& values() const noexcept { return values_; }
    std::int64_t first_index() const noexcept { return first_index_; }
    std::int64_t last_index() const noexcept {
        return first_index_ + static_cast<std::int64_t>(values_.size()) - 1;
    }
    int level() const noexcept { return level_; }
    Boundary boundary() const noexcept { return boundary_; }
    std::size_t size() const noexcept { return values_.size(); }

    const T& operator[](std::size_t k) const { return values_[k]; }

    bool contains(std::int64_t n) const noexcept {
        return n >= first_index_ && n <= last_index();
    }

    /// Sample at absolute grid index n, extended according to the boundary policy.
    const T& at_index(std::int64_t n) const {
        if (contains(n)) {
            return values_[static_cast<std::size_t>(n - first_index_)];
        }
        switch (boundary_) {
            case Boundary::Periodic: {
                const auto len = static_cast<std::int64_t>(values_.size());
                auto k = (n - first_index_) % len;
                if (k < 0) k += len;
                return values_[static_cast<std::size_t>(k)];
            }
            case Boundary::ConstantExtend:
                return n < first_index_ ? values_.front() : values_.back();
            case Boundary::Shrink:
                break;
        }
        throw Error(ErrorKind::EmptyResult,
                    "index " + std::to_string(n) + " outside a Shrink window");
    }

    /// Grid abscissa (first_index + k) 2^{-level}.
    double abscissa(std::size_t k) const {
        return std::ldexp(static_cast<double>(first_index_ + static_cast<std::int64_t>(k)), -level_);
    }

    /// Same window metadata, new samples (size may differ).
    BasicSequence with_values(std::vector<T> values) const {
        return BasicSequence(std::move(values), first_index_, level_, boundary_);
    }

    bool operator==(const BasicSequence&) const = default;

private:
    std::vector<T> values_;
    std::int64_t first_index_;
    int level_;
    Boundary boundary_;
};

using Sequence = BasicSequence<double>;
using ExactSequence = BasicSequence<Rational>;

template <class T, class U>
BasicSequence<U> convert_sequence(const BasicSequence<T>& f) {
    std::vector<U> out;
    out.reserve(f.size());
    for (const T& v : f.values()) {
        if constexpr (std::is_same_v<T, Rational> && std::is_same_v<U, double>) {
            out.push_back(to_double(v));
        } else {
            out.push_back(static_cast<U>(v));
        }
    }
    return BasicSequence<U>(std::move(out), f.first_index(), f.level(), f.boundary());
}

}  // namespace nlsd
