#include <random>

#include "doctest.h"
#include "galilei/algebra.hpp"
#include "galilei/tables.hpp"
#include "support.hpp"

using namespace galilei;
using galilei::testing::gen;
using galilei::testing::random_element;
using galilei::testing::var;
using galilei::testing::xi;

namespace {

constexpr Generator K = Generator::K, H = Generator::H, P = Generator::P, M = Generator::M;

AlgebraElement mono(std::initializer_list<int> e, int n, const Series& c) {
    Monomial m;
    int i = 0;
    for (int x : e) m.e[i++] = static_cast<std::uint8_t>(x);
    return AlgebraElement::term(m, c);
}

AlgebraElement mono(std::initializer_list<int> e, int n) { return mono(e, n, Series(Rational(1), n)); }

// (e^{2ξM}-1)/(2ξ) summed term by term.
AlgebraElement deformed_mass(int n) {
    AlgebraElement r(n);
    Series coeff(Rational(1), n);
    Rational fact = 1;
    for (int k = 1; k <= n + 1; ++k) {
        fact *= k;
        r += AlgebraElement::term(Monomial::of(M, k), coeff * (1 / fact));
        coeff = coeff * xi(n) * Rational(2);
    }
    return r;
}

std::vector<const CommutationTable*> all_tables(const std::vector<CommutationTable>& ts) {
    std::vector<const CommutationTable*> out;
    for (const auto& t : ts) out.push_back(&t);
    return out;
}

}  // namespace

TEST_CASE("normal ordering under the undeformed table") {
    auto t = undeformed_table(4);
    std::vector<Generator> pk{P, K}, mk{M, K};
    Series one(Rational(1), 4);
    CHECK(normal_order(pk, one, t) == mono({1, 0, 1, 0}, 4) - gen(M, 4));
    CHECK(normal_order(mk, one, t) == mono({1, 0, 0, 1}, 4));
}

TEST_CASE("normal ordering under the standard table") {
    const int n = 6;
    auto t = standard_table(n);
    std::vector<Generator> pk{P, K};
    auto expect = mono({1, 0, 1, 0}, n) - deformed_mass(n);
    CHECK(normal_order(pk, Series(Rational(1), n), t) == expect);
    CHECK(multiply(gen(P, n), gen(K, n), t) == expect);
}

TEST_CASE("commutators") {
    auto t = undeformed_table(4);
    CHECK(commutator(gen(K, 4), gen(H, 4), t) == gen(P, 4));
    auto p2 = multiply(gen(P, 4), gen(P, 4), t);
    // [K,P^2] = [K,P]P + P[K,P]
    auto leibniz = multiply(commutator(gen(K, 4), gen(P, 4), t), gen(P, 4), t) +
                   multiply(gen(P, 4), commutator(gen(K, 4), gen(P, 4), t), t);
    CHECK(commutator(gen(K, 4), p2, t) == leibniz);
    CHECK(leibniz == mono({0, 0, 1, 1}, 4) * Rational(2));
}

TEST_CASE("M is central in every family-I table and in the undeformed one") {
    std::vector<CommutationTable> ts{undeformed_table(5), standard_table(5), nonstandard_table(5), ib_table(5)};
    std::mt19937_64 rng(5);
    for (const auto* t : all_tables(ts)) {
        for (auto g : kGenerators) CHECK(commutator(gen(M, 5), gen(g, 5), *t).is_zero());
        auto m3 = mono({0, 0, 0, 3}, 5);
        for (int i = 0; i < 10; ++i) CHECK(commutator(m3, random_element(rng, 5, 3), *t).is_zero());
    }
}

TEST_CASE("Jacobi identity for all family tables") {
    for (int n : {2, 4, 6}) {
        CHECK(verify_jacobi(undeformed_table(n)).passed());
        CHECK(verify_jacobi(standard_table(n)).passed());
        CHECK(verify_jacobi(nonstandard_table(n)).passed());
        CHECK(verify_jacobi(ib_table(n)).passed());
        CHECK(verify_jacobi(iib_table(n)).passed());
    }
}

TEST_CASE("Jacobi failure is reported for a tampered table") {
    const int n = 3;
    auto b = undeformed_table(n).brackets();
    b[CommutationTable::pair_index(H, M)] = gen(H, n);  // [H,M] = H
    CommutationTable bad("tampered", n, b);
    auto report = verify_jacobi(bad);
    CHECK_FALSE(report.passed());
    // (K,H,M): [[K,H],M] + [[H,M],K] + [[M,K],H] = 0 + [H,K] + 0 = -P
    bool found = false;
    for (const auto& e : report.entries)
        if (e.triple == std::array<Generator, 3>{K, H, M}) {
            CHECK(e.residual == -gen(P, n));
            found = true;
        }
    CHECK(found);
}

TEST_CASE("replacing [H,P]=0 by [H,P]=K still gives a Lie algebra") {
    const int n = 3;
    auto b = undeformed_table(n).brackets();
    b[CommutationTable::pair_index(H, P)] = gen(K, n);
    CHECK(verify_jacobi(CommutationTable("alt", n, b)).passed());
}

TEST_CASE("normal ordering is confluent across swap strategies") {
    std::mt19937_64 rng(11);
    std::vector<CommutationTable> ts{undeformed_table(4), standard_table(4), nonstandard_table(4), ib_table(4),
                                     iib_table(4)};
    for (const auto* t : all_tables(ts)) {
        for (int trial = 0; trial < 15; ++trial) {
            std::vector<Generator> w(std::uniform_int_distribution<int>(2, 6)(rng));
            for (auto& g : w) g = kGenerators[std::uniform_int_distribution<int>(0, 3)(rng)];
            Series one(Rational(1), 4);
            auto left = normal_order(w, one, *t, SwapStrategy::Leftmost);
            CHECK(normal_order(w, one, *t, SwapStrategy::Rightmost) == left);
            CHECK(normal_order(w, one, *t, SwapStrategy::Random, rng()) == left);
            AlgebraElement prod = AlgebraElement::scalar(one);
            for (auto g : w) prod = multiply(prod, gen(g, 4), *t);
            CHECK(prod == left);
        }
    }
}

TEST_CASE("multiplication is associative") {
    std::mt19937_64 rng(3);
    std::vector<CommutationTable> ts{undeformed_table(4), standard_table(4), nonstandard_table(4), ib_table(4),
                                     iib_table(4)};
    for (const auto* t : all_tables(ts))
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_element(rng, 4, 2), b = random_element(rng, 4, 2), c = random_element(rng, 4, 2);
            CHECK(multiply(multiply(a, b, *t), c, *t) == multiply(a, multiply(b, c, *t), *t));
        }
}

TEST_CASE("degree cap") {
    auto t = undeformed_table(2, 4);
    std::vector<Generator> w{P, P, P, K, K};
    CHECK_THROWS_AS(normal_order(w, Series(Rational(1), 2), t), CapExceededError);
    CHECK_THROWS_AS(t.multiply(mono({0, 0, 3, 0}, 2).terms().begin()->first, Monomial::of(K, 2)),
                    CapExceededError);
}

TEST_CASE("tensor products are legwise") {
    const int n = 3;
    auto t = undeformed_table(n);
    auto one = AlgebraElement::scalar(Rational(1), n);
    auto kp = TensorElement::outer(gen(K, n), gen(P, n));
    auto r = tensor_multiply(kp, TensorElement::outer(one, gen(M, n)), t);
    CHECK(r == TensorElement::outer(gen(K, n), mono({0, 0, 1, 1}, n)));

    auto pk = tensor_multiply(TensorElement::outer(gen(P, n), one), TensorElement::outer(gen(K, n), one), t);
    CHECK(pk == TensorElement::outer(mono({1, 0, 1, 0}, n), one) - TensorElement::outer(gen(M, n), one));

    CHECK(flip(kp) == TensorElement::outer(gen(P, n), gen(K, n)));
    CHECK_THROWS_AS(tensor_multiply(kp, TensorElement::identity(3, n), t), RankMismatchError);
}

TEST_CASE("wedge") {
    const int n = 2;
    CHECK(wedge(gen(K, n), gen(P, n)) ==
          TensorElement::outer(gen(K, n), gen(P, n)) - TensorElement::outer(gen(P, n), gen(K, n)));
    for (auto g : kGenerators) CHECK(wedge(gen(g, n), gen(g, n)).is_zero());
    CHECK((wedge(gen(P, n), gen(M, n)) + wedge(gen(M, n), gen(P, n))).is_zero());
    CHECK(is_skew(wedge(gen(H, n), gen(M, n))));
    CHECK_FALSE(is_skew(TensorElement::outer(gen(H, n), gen(M, n))));
}

TEST_CASE("Schouten bracket of the generic skew element") {
    const int n = 3;
    auto t = undeformed_table(n);
    Series a[7];
    for (int i = 1; i <= 6; ++i) a[i] = var(intern_parameter("a" + std::to_string(i)), n);
    auto w = [&](Generator x, Generator y) { return wedge(gen(x, n), gen(y, n)); };
    auto w3 = [&](Generator x, Generator y, Generator z) { return wedge(gen(x, n), gen(y, n), gen(z, n)); };

    auto r = w(K, P) * a[1] + w(K, M) * a[2] + w(K, H) * a[3] + w(P, M) * a[4] + w(P, H) * a[5] + w(M, H) * a[6];
    auto expect = w3(K, P, H) * -(a[3] * a[3]) + w3(K, P, M) * (a[1] * a[1] - a[2] * a[3]) +
                  w3(K, H, M) * (a[1] * a[3]) + w3(P, H, M) * (a[1] * a[5] - a[3] * a[6]);
    CHECK(schouten(r, t) == expect);

    CHECK(schouten(w(K, P), t) == w3(K, P, M));
    CHECK(schouten(w(H, M), t).is_zero());
    CHECK_THROWS_AS(schouten(TensorElement::outer(gen(K, n), gen(P, n)), t), SkewnessError);
}

TEST_CASE("Schouten bracket is totally antisymmetric") {
    const int n = 2;
    auto t = undeformed_table(n);
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        TensorElement r(2, n);
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                r += wedge(gen(kGenerators[i], n), gen(kGenerators[j], n)) *
                     Rational(std::uniform_int_distribution<int>(-3, 3)(rng));
        auto s = schouten(r, t);
        TensorElement swap12(3, n), swap23(3, n);
        for (const auto& [k, c] : s.terms()) {
            swap12.add_term({k[1], k[0], k[2]}, c);
            swap23.add_term({k[0], k[2], k[1]}, c);
        }
        CHECK((s + swap12).is_zero());
        CHECK((s + swap23).is_zero());
    }
}

TEST_CASE("tensor exponential and inverse") {
    const int n = 4;
    auto t = nonstandard_table(n);
    auto a = TensorElement::outer(gen(H, n), gen(M, n)) * var(param::beta1, n) -
             TensorElement::outer(gen(K, n), gen(M, n)) * var(param::beta3, n);
    auto e = exp(a, t);
    auto ei = exp(-a, t);
    CHECK(tensor_multiply(e, ei, t) == TensorElement::identity(2, n));
    CHECK(inverse(e, t) == ei);
    CHECK_THROWS_AS(exp(TensorElement::identity(2, n), t), NonNilpotentExponentError);
}

TEST_CASE("rendering") {
    const int n = 2;
    auto e = gen(K, n) * xi(n) + mono({0, 0, 2, 1}, n) * Rational(-3);
    CHECK(e.to_string() == "ξ K - 3 P^2 M");
    auto r = TensorElement::outer(gen(K, n), gen(P, n)) - TensorElement::outer(gen(P, n), gen(K, n));
    CHECK(r.to_string() == "K ⊗ P - P ⊗ K");
    CHECK(e.to_string(true) == "ξ k - 3 p^2 m");
}
