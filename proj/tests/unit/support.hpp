#pragma once

#include <random>

#include "galilei/algebra.hpp"

namespace galilei::testing {

inline Series xi(int n) { return Series::variable(param::xi, n); }
inline Series var(ParameterId p, int n) { return Series::variable(p, n); }
inline Series num(long a, long b, int n) { return Series(Rational(a, b), n); }
inline AlgebraElement gen(Generator g, int n) { return AlgebraElement::generator(g, n); }

/// Random series in the first `params` core parameters with small integer
/// coefficients and a zero constant term unless `with_constant`.
inline Series random_series(std::mt19937_64& rng, int order, int params, bool with_constant) {
    std::uniform_int_distribution<int> coeff(-3, 3), deg(0, order), pick(0, params - 1);
    Series s(order);
    int count = std::uniform_int_distribution<int>(1, 5)(rng);
    for (int t = 0; t < count; ++t) {
        Exponents e;
        int d = deg(rng);
        for (int k = 0; k < d; ++k) {
            ParameterId p{static_cast<std::uint8_t>(pick(rng))};
            e.set(p, e[p] + 1);
        }
        if (!with_constant && e.is_zero()) continue;
        s += Series::monomial(Rational(coeff(rng), 1 + std::abs(coeff(rng))), e, order);
    }
    return s;
}

/// Random element of degree <= max_degree with scalar series coefficients.
inline AlgebraElement random_element(std::mt19937_64& rng, int order, int max_degree) {
    std::uniform_int_distribution<int> d(0, max_degree), coeff(-2, 2);
    AlgebraElement a(order);
    int count = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int t = 0; t < count; ++t) {
        Monomial m;
        int k = d(rng);
        for (int i = 0; i < k; ++i) m.e[std::uniform_int_distribution<int>(0, 3)(rng)]++;
        a.add_term(m, Series(Rational(coeff(rng)), order) + random_series(rng, order, 3, false));
    }
    return a;
}

}  // namespace galilei::testing
