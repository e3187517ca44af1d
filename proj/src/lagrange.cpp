#include "nlsubdiv/lagrange.hpp"

namespace nlsd {

namespace {

Rational factorial(int n) {
    if (n < 0) {
        throw Error(ErrorKind::InvalidStencil, "negative factorial in printed closed form");
    }
    boost::multiprecision::cpp_int f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return Rational(f);
}

Rational pow2(int e) {
    Rational r = 1;
    for (int i = 0; i < e; ++i) r *= 2;
    return r;
}

void require_range(int points, int lo, int hi, const char* what) {
    if (points < lo || points > hi) {
        throw Error(ErrorKind::InvalidStencil, std::string(what) + ": points must lie in [" +
                                                   std::to_string(lo) + ", " + std::to_string(hi) +
                                                   "], got " + std::to_string(points));
    }
}

MaskTerm basis_term(int k, const Rational& c) {
    if (k % 2 == 1) {
        const int l = (k + 1) / 2;
        return {DiffOrder::iterated(l), l, c};
    }
    const int l = k / 2;
    return {DiffOrder::iterated(l), l + 1, c};
}

// Triangular solve of lagrange(P, 0) - midpoint over the difference basis.
CoeffMask decompose(int points) {
    if (points == 2) return CoeffMask();
    auto residual = (lagrange_midpoint_coeffs(points, 0) - two_point_midpoint()).expand();
    std::vector<MaskTerm> terms;
    for (int k = points - 2; k >= 1; --k) {
        const Rational c = residual.count(k + 1) ? residual[k + 1] : Rational(0);
        if (c == 0) continue;
        const MaskTerm t = basis_term(k, c);
        for (const auto& [off, w] : expand_term(t.order, t.offset)) residual[off] -= c * w;
        terms.push_back(t);
    }
    for (const auto& [off, w] : residual) {
        if (w != 0) {
            throw Error(ErrorKind::InvalidStencil, "difference-basis decomposition left a residual");
        }
    }
    return CoeffMask(std::move(terms)).simplified();
}

}  // namespace

CoeffMask lagrange_midpoint_coeffs(int points, int leftmost_offset) {
    if (points < 2) {
        throw Error(ErrorKind::InvalidStencil, "Lagrange rule needs at least 2 points");
    }
    if (points > 64) {
        throw Error(ErrorKind::InvalidStencil, "Lagrange rule limited to 64 points");
    }
    const Rational half(1, 2);
    std::map<int, Rational> w;
    for (int j = 0; j < points; ++j) {
        const int xj = leftmost_offset + j;
        Rational num = 1;
        Rational den = 1;
        for (int m = 0; m < points; ++m) {
            if (m == j) continue;
            const int xm = leftmost_offset + m;
            num *= half - xm;
            den *= Rational(xj - xm);
        }
        w[xj] = num / den;
    }
    return CoeffMask::from_samples(w);
}

CoeffMask two_point_midpoint() {
    return lagrange_midpoint_coeffs(2, 0);
}

CoeffMask uncentered_perturbation(int points) {
    require_range(points, 4, 12, "uncentered_perturbation");
    return decompose(points);
}

int step_base(int points) {
    return points % 2 == 0 ? points - 2 : points - 1;
}

CoeffMask step_perturbation(int points) {
    require_range(points, 4, 12, "step_perturbation");
    return decompose(points) - decompose(step_base(points));
}

CoeffMask chained_perturbation(int points) {
    require_range(points, 4, 12, "chained_perturbation");
    CoeffMask total;
    for (int p = points; p > 2; p = step_base(p)) {
        total = total + step_perturbation(p);
    }
    return total;
}

CoeffMask printed_closed_form_perturbation(int points) {
    require_range(points, 4, 12, "printed_closed_form_perturbation");
    const int P = points;
    const int N = P;
    const bool even = P % 2 == 0;
    std::vector<MaskTerm> terms;
    const int even_hi = even ? P - 2 : P - 3;
    const int odd_hi = even ? P - 3 : P - 4;
    for (int k = 2; k <= even_hi; k += 2) {
        const Rational c = factorial(2 * k - 1) / (pow2(2 * k) * factorial(k - 1) * factorial(k + 1));
        terms.push_back({DiffOrder::iterated(k / 2), k / 2 + 1, c});
    }
    for (int k = 1; k <= odd_hi; k += 2) {
        const Rational c = Rational(4 * k + 5) * factorial(2 * k - 1) /
                           (pow2(2 * k + 1) * factorial(k - 1) * factorial(k + 2));
        terms.push_back({DiffOrder::iterated((k + 1) / 2), (k + 1) / 2, -c});
    }
    if (!even) {
        const Rational c = factorial(2 * N - 3) / (pow2(2 * (N - 2)) * factorial(N - 3) * factorial(N - 1));
        terms.push_back({DiffOrder::iterated((P - 1) / 2), (N - 1) / 2, -c});
    }
    return CoeffMask(std::move(terms)).simplified();
}

CoeffMask printed_step_perturbation(int points) {
    require_range(points, 4, 12, "printed_step_perturbation");
    const int P = points;
    std::vector<MaskTerm> terms;
    const Rational lead = factorial(2 * P - 3) / (pow2(2 * (P - 2)) * factorial(P - 3) * factorial(P - 1));
    if (P % 2 == 0) {
        const Rational second = Rational(4 * P - 8) * factorial(2 * P - 7) /
                                (pow2(2 * P - 5) * factorial(P - 4) * factorial(P - 1));
        terms.push_back({DiffOrder::iterated((P - 2) / 2), P / 2, lead});
        terms.push_back({DiffOrder::iterated((P - 2) / 2), P / 2 - 1, -second});
    } else {
        terms.push_back({DiffOrder::iterated((P - 1) / 2), (P - 1) / 2, -lead});
    }
    return CoeffMask(std::move(terms)).simplified();
}

std::vector<MaskTerm> mask_discrepancies(const CoeffMask& actual, const CoeffMask& expected) {
    return (actual - expected).terms();
}

}  // namespace nlsd
