#include "galilei/tables.hpp"

#include <vector>

namespace galilei {

namespace {

Rational factorial(int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Rational(f);
}

// a_k = 1/(k+1)!, the coefficients of (e^y - 1)/y.
std::vector<Rational> expm1_over_coeffs(int n) {
    std::vector<Rational> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = 1 / factorial(k + 1);
    return c;
}

AlgebraElement gen(Generator g, int order) { return AlgebraElement::generator(g, order); }

std::array<AlgebraElement, 6> zero_brackets(int order) {
    return {AlgebraElement(order), AlgebraElement(order), AlgebraElement(order),
            AlgebraElement(order), AlgebraElement(order), AlgebraElement(order)};
}

int slot(Generator a, Generator b) { return CommutationTable::pair_index(a, b); }

}  // namespace

AlgebraElement exp_of(Generator g, const Series& s) {
    auto c = univariate::exp(s.order());
    return generator_function(g, s, c);
}

AlgebraElement expm1_over(Generator g, const Series& s) {
    return generator_function(g, s, expm1_over_coeffs(s.order()), 1);
}

AlgebraElement expm1_over_squared(Generator g, const Series& s) {
    const int n = s.order();
    auto a = expm1_over_coeffs(n);
    std::vector<Rational> sq(n + 1);
    for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j) sq[i + j] += a[i] * a[j];
    return generator_function(g, s, sq, 2);
}

AlgebraElement sinh_over(Generator g, const Series& s) {
    const int n = s.order();
    std::vector<Rational> c(n + 1);
    for (int k = 0; k <= n; k += 2) c[k] = 1 / factorial(k + 1);
    return generator_function(g, s, c, 1);
}

CommutationTable undeformed_table(int order, int degree_cap) {
    auto b = zero_brackets(order);
    b[slot(Generator::K, Generator::H)] = gen(Generator::P, order);
    b[slot(Generator::K, Generator::P)] = gen(Generator::M, order);
    return CommutationTable("undeformed", order, std::move(b), degree_cap);
}

CommutationTable standard_table(int order, int degree_cap) {
    auto b = zero_brackets(order);
    b[slot(Generator::K, Generator::H)] = gen(Generator::P, order);
    b[slot(Generator::K, Generator::P)] = expm1_over(Generator::M, Series::variable(param::xi, order) * Rational(2));
    return CommutationTable("Ia-standard", order, std::move(b), degree_cap);
}

CommutationTable nonstandard_table(int order, int degree_cap) {
    auto b = zero_brackets(order);
    b[slot(Generator::K, Generator::H)] =
        gen(Generator::P, order) +
        AlgebraElement::term(Monomial::of(Generator::M, 2), Series::variable(param::beta3, order) * Rational(1, 2));
    b[slot(Generator::K, Generator::P)] = gen(Generator::M, order);
    return CommutationTable("Ia-nonstandard", order, std::move(b), degree_cap);
}

CommutationTable ib_table(int order, int degree_cap) {
    auto b = zero_brackets(order);
    const Series xi = Series::variable(param::xi, order);
    b[slot(Generator::K, Generator::H)] =
        gen(Generator::P, order) +
        expm1_over_squared(Generator::M, xi) * (Series::variable(param::beta3, order) * Rational(1, 2));
    b[slot(Generator::K, Generator::P)] = expm1_over(Generator::M, xi * Rational(2));
    return CommutationTable("Ib", order, std::move(b), degree_cap);
}

CommutationTable iib_table(int order, int degree_cap) {
    auto b = zero_brackets(order);
    const Series alpha = Series::variable(param::alpha, order);
    // (1 - e^{-αP})/α = (e^{-αP} - 1)/(-α)
    b[slot(Generator::K, Generator::H)] = expm1_over(Generator::P, -alpha);
    b[slot(Generator::K, Generator::P)] = gen(Generator::M, order);
    b[slot(Generator::K, Generator::M)] =
        AlgebraElement::term(Monomial::of(Generator::M, 2), alpha * Rational(-1, 2));
    return CommutationTable("IIb", order, std::move(b), degree_cap);
}

}  // namespace galilei
