#pragma once

#include "nlsubdiv/differences.hpp"
#include "nlsubdiv/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlsd {

/// One term c * (op f)_{n+offset}; op is the identity when `order` is empty.
struct MaskTerm {
    std::optional<DiffOrder> order;
    int offset = 0;
    Rational coefficient;

    bool operator==(const MaskTerm&) const = default;
};

/// Exact finite linear combination of samples or differences around index n.
class CoeffMask {
public:
    CoeffMask() = default;
    explicit CoeffMask(std::vector<MaskTerm> terms);

    /// Identity terms from raw sample weights keyed by offset.
    static CoeffMask from_samples(const std::map<int, Rational>& weights);

    const std::vector<MaskTerm>& terms() const noexcept { return terms_; }
    bool empty() const noexcept { return terms_.empty(); }

    /// Like terms merged, zero terms dropped, ordered by (operator, offset).
    CoeffMask simplified() const;

    /// Raw sample weights: every difference term expanded via its binomial stencil.
    std::map<int, Rational> expand() const;

    CoeffMask operator+(const CoeffMask& other) const;
    CoeffMask operator-(const CoeffMask& other) const;
    CoeffMask scaled(const Rational& factor) const;

    /// Structural equality after simplification.
    bool operator==(const CoeffMask& other) const;

    /// Evaluate at index n through `sample(k)` returning f_k.
    template <class T, class Sampler>
    T evaluate(Sampler&& sample, std::int64_t n) const {
        T acc = T(0);
        for (const auto& [offset, w] : expand()) {
            if constexpr (std::is_same_v<T, Rational>) {
                acc += w * sample(n + offset);
            } else {
                acc += to_double(w) * sample(n + offset);
            }
        }
        return acc;
    }

    /// "-3/16 D f[n+1] + 1/16 D f[n+2]".
    std::string to_string() const;

private:
    std::vector<MaskTerm> terms_;
};

/// Raw-sample expansion of a single difference term (op f)_{n+offset}.
std::map<int, Rational> expand_term(const std::optional<DiffOrder>& order, int offset);

}  // namespace nlsd
