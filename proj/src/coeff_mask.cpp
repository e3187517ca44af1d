#include "nlsubdiv/coeff_mask.hpp"

#include <algorithm>
#include <tuple>

namespace nlsd {

namespace {

int operator_rank(const std::optional<DiffOrder>& order) {
    if (!order) return 0;
    return order->is_first() ? 1 : 1 + order->l;
}

std::string index_label(int offset) {
    if (offset == 0) return "f[n]";
    return offset > 0 ? "f[n+" + std::to_string(offset) + "]" : "f[n" + std::to_string(offset) + "]";
}

}  // namespace

CoeffMask::CoeffMask(std::vector<MaskTerm> terms) : terms_(std::move(terms)) {}

CoeffMask CoeffMask::from_samples(const std::map<int, Rational>& weights) {
    std::vector<MaskTerm> terms;
    for (const auto& [offset, w] : weights) {
        if (w != 0) terms.push_back({std::nullopt, offset, w});
    }
    return CoeffMask(std::move(terms));
}

std::map<int, Rational> expand_term(const std::optional<DiffOrder>& order, int offset) {
    std::map<int, Rational> out;
    if (!order) {
        out[offset] = 1;
    } else if (order->is_first()) {
        out[offset] = -1;
        out[offset + 1] = 1;
    } else {
        const auto w = detail::iterated_second_diff_weights(order->l);
        for (int i = 0; i <= 2 * order->l; ++i) {
            out[offset - order->l + i] = Rational(w[static_cast<std::size_t>(i)]);
        }
    }
    return out;
}

CoeffMask CoeffMask::simplified() const {
    std::vector<MaskTerm> merged;
    for (const auto& t : terms_) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const MaskTerm& m) {
            return m.order == t.order && m.offset == t.offset;
        });
        if (it == merged.end()) {
            merged.push_back(t);
        } else {
            it->coefficient += t.coefficient;
        }
    }
    std::erase_if(merged, [](const MaskTerm& m) { return m.coefficient == 0; });
    std::sort(merged.begin(), merged.end(), [](const MaskTerm& a, const MaskTerm& b) {
        return std::tuple(operator_rank(a.order), a.offset) < std::tuple(operator_rank(b.order), b.offset);
    });
    return CoeffMask(std::move(merged));
}

std::map<int, Rational> CoeffMask::expand() const {
    std::map<int, Rational> out;
    for (const auto& t : terms_) {
        for (const auto& [k, w] : expand_term(t.order, t.offset)) {
            out[k] += t.coefficient * w;
        }
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

CoeffMask CoeffMask::operator+(const CoeffMask& other) const {
    std::vector<MaskTerm> all = terms_;
    all.insert(all.end(), other.terms_.begin(), other.terms_.end());
    return CoeffMask(std::move(all)).simplified();
}

CoeffMask CoeffMask::operator-(const CoeffMask& other) const {
    return *this + other.scaled(Rational(-1));
}

CoeffMask CoeffMask::scaled(const Rational& factor) const {
    std::vector<MaskTerm> out = terms_;
    for (auto& t : out) t.coefficient *= factor;
    return CoeffMask(std::move(out));
}

bool CoeffMask::operator==(const CoeffMask& other) const {
    return simplified().terms_ == other.simplified().terms_;
}

std::string CoeffMask::to_string() const {
    const auto s = simplified();
    if (s.terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : s.terms_) {
        const bool neg = t.coefficient < 0;
        if (first) {
            out += neg ? "-" : "";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        out += nlsd::to_string(abs(t.coefficient)) + " ";
        if (t.order) out += t.order->name() + " ";
        out += index_label(t.offset);
    }
    return out;
}

}  // namespace nlsd
