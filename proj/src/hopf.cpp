#include "galilei/hopf.hpp"

#include <algorithm>
#include <set>

#include "galilei/tables.hpp"

namespace galilei {

namespace {

constexpr Generator K = Generator::K, H = Generator::H, P = Generator::P, M = Generator::M;

Series sym(ParameterId p, int n) { return Series::variable(p, n); }
Series one(int n) { return Series(Rational(1), n); }
AlgebraElement gen(Generator g, int n) { return AlgebraElement::generator(g, n); }
AlgebraElement unit(int n) { return AlgebraElement::scalar(Rational(1), n); }

TensorElement rank1(const AlgebraElement& x) {
    std::array<AlgebraElement, 1> legs{x};
    return TensorElement::outer(legs);
}

TensorElement tensor(const AlgebraElement& a, const AlgebraElement& b) { return TensorElement::outer(a, b); }

TensorElement prim(Generator g, int n) { return primitive(gen(g, n), 2); }

bool coefficients_vanish_at_zero(const AlgebraElement& x) {
    return std::all_of(x.terms().begin(), x.terms().end(),
                       [](const auto& t) { return t.second.constant_term() == 0; });
}

std::string pair_label(Generator x, Generator y) { return "(" + generator_name(x) + "," + generator_name(y) + ")"; }

}  // namespace

Coproduct primitive_coproduct(int n) { return {prim(K, n), prim(H, n), prim(P, n), prim(M, n)}; }

// ---------------------------------------------------------------- LM method

std::vector<std::vector<AlgebraElement>> matrix_exponential(const LMMatrix& a, const CommutationTable& table) {
    const std::size_t d = a.generators.size();
    if (a.entries.size() != d) throw PreconditionError("LM matrix must be square over its generators");
    for (const auto& row : a.entries)
        if (row.size() != d) throw PreconditionError("LM matrix must be square over its generators");
    const int n = a.order();

    std::vector<const AlgebraElement*> flat;
    for (const auto& row : a.entries)
        for (const auto& e : row) {
            if (!coefficients_vanish_at_zero(e))
                throw PreconditionError("LM matrix entries must vanish when the parameters do");
            flat.push_back(&e);
        }
    for (std::size_t i = 0; i < flat.size(); ++i)
        for (std::size_t j = i + 1; j < flat.size(); ++j)
            if (!commutator(*flat[i], *flat[j], table).is_zero())
                throw PreconditionError("LM matrix entries do not commute");

    using Matrix = std::vector<std::vector<AlgebraElement>>;
    Matrix result(d, std::vector<AlgebraElement>(d, AlgebraElement(n)));
    for (std::size_t i = 0; i < d; ++i) result[i][i] = unit(n);
    Matrix term = result;
    for (int k = 1; k <= n; ++k) {
        Matrix next(d, std::vector<AlgebraElement>(d, AlgebraElement(n)));
        bool zero = true;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                for (std::size_t l = 0; l < d; ++l) next[i][j] += multiply(term[i][l], a.entries[l][j], table);
                next[i][j] *= Rational(1, k);
                zero = zero && next[i][j].is_zero();
                result[i][j] += next[i][j];
            }
        if (zero) break;
        term = std::move(next);
    }
    return result;
}

Coproduct lm_coproduct(const LMMatrix& a, const CommutationTable& table) {
    const int n = a.order();
    auto e = matrix_exponential(a, table);
    Coproduct delta = primitive_coproduct(n);
    for (std::size_t i = 0; i < a.generators.size(); ++i) {
        TensorElement d = tensor(unit(n), gen(a.generators[i], n));
        for (std::size_t j = 0; j < a.generators.size(); ++j) d += tensor(gen(a.generators[j], n), e[i][j]);
        delta[index_of(a.generators[i])] = std::move(d);
    }
    return delta;
}

LMMatrix family_ia_matrix(int n) {
    auto m = [n](const Series& s) { return gen(M, n) * s; };
    const Series xi = sym(param::xi, n), b1 = sym(param::beta1, n), b2 = sym(param::beta2, n),
                 b3 = sym(param::beta3, n), b4 = sym(param::beta4, n), b5 = sym(param::beta5, n);
    return {{K, H, P},
            {{m(xi), m(b2), m(b1)}, {m(b5), m(b4 - xi), m(b3)}, {AlgebraElement(n), AlgebraElement(n), m(b4)}}};
}

LMMatrix ib_partial_matrix(int n) {
    auto m = [n](const Series& s) { return gen(M, n) * s; };
    const Series xi = sym(param::xi, n), b3 = sym(param::beta3, n);
    AlgebraElement z(n);
    return {{K, H, P}, {{m(xi), z, z}, {z, z, m(b3)}, {z, z, m(xi)}}};
}

LMMatrix iib_matrix(int n) {
    const Series alpha = sym(param::alpha, n), b1 = sym(param::beta1, n), b2 = sym(param::beta2, n);
    AlgebraElement diag = gen(P, n) * -alpha;
    return {{K, M}, {{diag, gen(P, n) * -b1 - gen(H, n) * b2}, {AlgebraElement(n), diag}}};
}

Coproduct ib_coproduct_completion(const Coproduct& partial, const CommutationTable& table) {
    const int n = table.order();
    const Series xi = sym(param::xi, n), nu = sym(param::nu, n), b3 = sym(param::beta3, n);
    AlgebraElement e = exp_of(M, xi);
    Coproduct delta = partial;
    delta[index_of(K)] += tensor(gen(P, n), multiply(gen(H, n), e, table)) * nu;
    delta[index_of(K)] += tensor(multiply(gen(P, n), gen(P, n), table), multiply(expm1_over(M, xi), e, table)) *
                          (nu * b3 * Rational(1, 2));
    if (!verify_coassociativity(delta, table).passed())
        throw CompletionError("completed coproduct is not coassociative");
    return delta;
}

// ---------------------------------------------------------------- families

QuantumFamily undeformed_family(int n, int cap) {
    auto t = undeformed_table(n, cap);
    AlgebraElement c2 = multiply(gen(P, n), gen(P, n), t) - multiply(gen(M, n), gen(H, n), t) * Rational(2);
    return {Family::Trivial, t, primitive_coproduct(n), gen(M, n), c2};
}

QuantumFamily quantum_family(Family f, int n, int cap) {
    const Series xi = sym(param::xi, n), alpha = sym(param::alpha, n), b3 = sym(param::beta3, n);
    auto square = [](const AlgebraElement& x, const CommutationTable& t) { return multiply(x, x, t); };
    switch (f) {
        case Family::IaStandard: {
            auto t = standard_table(n, cap);
            auto zero = Series(n);
            LMMatrix a = family_ia_matrix(n);
            for (auto& row : a.entries)
                for (auto& e : row)
                    e = e.substitute(param::beta4, xi)
                            .substitute(param::beta2, zero)
                            .substitute(param::beta3, zero)
                            .substitute(param::beta5, zero);
            AlgebraElement c2 = square(gen(P, n), t) - multiply(expm1_over(M, xi * Rational(2)), gen(H, n), t) * Rational(2);
            return {f, t, lm_coproduct(a, t), gen(M, n), c2};
        }
        case Family::IaNonstandard: {
            auto t = nonstandard_table(n, cap);
            auto zero = Series(n);
            LMMatrix a = family_ia_matrix(n);
            for (auto& row : a.entries)
                for (auto& e : row)
                    e = e.substitute(param::xi, zero).substitute(param::beta4, zero).substitute(param::beta5, zero);
            AlgebraElement shifted = gen(P, n) + multiply(gen(M, n), gen(M, n), t) * (b3 * Rational(1, 2));
            AlgebraElement c2 = square(shifted, t) - multiply(gen(M, n), gen(H, n), t) * Rational(2);
            return {f, t, lm_coproduct(a, t), gen(M, n), c2};
        }
        case Family::Ib: {
            auto t = ib_table(n, cap);
            auto delta = ib_coproduct_completion(lm_coproduct(ib_partial_matrix(n), t), t);
            AlgebraElement shifted = gen(P, n) + expm1_over_squared(M, xi) * (b3 * Rational(1, 2));
            AlgebraElement c2 = square(shifted, t) - multiply(expm1_over(M, xi * Rational(2)), gen(H, n), t) * Rational(2);
            return {f, t, std::move(delta), gen(M, n), c2};
        }
        case Family::IIb: {
            auto t = iib_table(n, cap);
            AlgebraElement half = exp_of(P, alpha * Rational(1, 2));
            AlgebraElement c1 = multiply(half, gen(M, n), t);
            AlgebraElement c2 = square(sinh_over(P, alpha * Rational(1, 4)), t) -
                                multiply(c1, gen(H, n), t) * Rational(2);
            return {f, t, lm_coproduct(iib_matrix(n), t), c1, c2};
        }
        case Family::IIa:
            throw NotImplementedError("family IIa: only the dual Lie brackets are available");
        default: throw PreconditionError("no quantum deformation for family " + family_name(f));
    }
}

TensorElement apply_coproduct(const Coproduct& delta, const AlgebraElement& x, const CommutationTable& table) {
    const int n = x.order();
    std::array<std::vector<TensorElement>, 4> powers;
    auto power_of = [&](Generator g, int k) -> const TensorElement& {
        auto& v = powers[index_of(g)];
        if (v.empty()) v.push_back(TensorElement::identity(2, n));
        while (static_cast<int>(v.size()) <= k) v.push_back(tensor_multiply(v.back(), delta[index_of(g)], table));
        return v[k];
    };
    TensorElement out(2, n);
    for (const auto& [m, c] : x.terms()) {
        TensorElement t = TensorElement::identity(2, n);
        for (auto g : kGenerators)
            if (m[g] > 0) t = tensor_multiply(t, power_of(g, m[g]), table);
        out += t * c;
    }
    return out;
}

// ---------------------------------------------------------------- checks

bool CheckReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const LabeledResidual& e) { return e.residual.is_zero(); });
}

CheckReport verify_homomorphism(const Coproduct& delta, const CommutationTable& table) {
    CheckReport report{"homomorphism", {}};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Generator x = kGenerators[i], y = kGenerators[j];
            TensorElement r = apply_coproduct(delta, table.bracket(x, y), table) -
                              tensor_commutator(delta[i], delta[j], table);
            report.entries.push_back({pair_label(x, y), std::move(r)});
        }
    return report;
}

CheckReport verify_homomorphism(const QuantumFamily& q) { return verify_homomorphism(q.coproduct, q.table); }

CheckReport verify_coassociativity(const Coproduct& delta, const CommutationTable& table) {
    CheckReport report{"coassociativity", {}};
    auto image = [&](const Monomial& m) {
        return apply_coproduct(delta, AlgebraElement::term(m, one(table.order())), table);
    };
    for (auto g : kGenerators) {
        const auto& d = delta[index_of(g)];
        report.entries.push_back({generator_name(g), expand_leg(d, 0, image) - expand_leg(d, 1, image)});
    }
    return report;
}

CheckReport verify_counit(const Coproduct& delta) {
    CheckReport report{"counit", {}};
    for (auto g : kGenerators) {
        const auto& d = delta[index_of(g)];
        const int n = d.order();
        AlgebraElement left(n), right(n);
        for (const auto& [k, c] : d.terms()) {
            if (k[0].is_identity()) left.add_term(k[1], c);
            if (k[1].is_identity()) right.add_term(k[0], c);
        }
        report.entries.push_back({"(ε⊗id)Δ(" + generator_name(g) + ")", rank1(left - gen(g, n))});
        report.entries.push_back({"(id⊗ε)Δ(" + generator_name(g) + ")", rank1(right - gen(g, n))});
    }
    return report;
}

CheckReport verify_casimir(const AlgebraElement& c, const CommutationTable& table, const std::string& name) {
    CheckReport report{"casimirs", {}};
    for (auto g : kGenerators)
        report.entries.push_back({"[" + name + "," + generator_name(g) + "]",
                                  rank1(commutator(c, gen(g, table.order()), table))});
    return report;
}

CheckReport verify_casimirs(const QuantumFamily& q) {
    CheckReport report = verify_casimir(q.c1, q.table, "C1");
    auto second = verify_casimir(q.c2, q.table, "C2");
    report.entries.insert(report.entries.end(), second.entries.begin(), second.entries.end());
    return report;
}

AlgebraElement apply_antipode(const std::array<AlgebraElement, 4>& s, const Monomial& m,
                              const CommutationTable& table) {
    AlgebraElement out = unit(table.order());
    for (int i = 3; i >= 0; --i)
        for (int k = 0; k < m.e[i]; ++k) out = multiply(out, s[i], table);
    return out;
}

std::array<AlgebraElement, 4> derive_antipode(const Coproduct& delta, const CommutationTable& table) {
    const int n = table.order();
    std::array<AlgebraElement, 4> s{-gen(K, n), -gen(H, n), -gen(P, n), -gen(M, n)};
    Coproduct rest = delta;
    for (auto g : kGenerators) rest[index_of(g)] -= prim(g, n);
    for (int iter = 0; iter <= n; ++iter) {
        std::array<AlgebraElement, 4> next = s;
        auto left = [&](const Monomial& m) { return apply_antipode(s, m, table); };
        for (auto g : kGenerators) next[index_of(g)] = -gen(g, n) - contract(rest[index_of(g)], table, left);
        if (next == s) break;
        s = std::move(next);
    }
    return s;
}

CheckReport verify_antipode(const Coproduct& delta, const std::array<AlgebraElement, 4>& s,
                            const CommutationTable& table) {
    CheckReport report{"antipode", {}};
    auto sm = [&](const Monomial& m) { return apply_antipode(s, m, table); };
    for (auto g : kGenerators) {
        const auto& d = delta[index_of(g)];
        report.entries.push_back({"m(S⊗id)Δ(" + generator_name(g) + ")", rank1(contract(d, table, sm))});
        report.entries.push_back({"m(id⊗S)Δ(" + generator_name(g) + ")", rank1(contract(d, table, {}, sm))});
    }
    return report;
}

CheckReport verify_semiclassical(const Coproduct& delta, const Cocommutator& classical) {
    CheckReport report{"semiclassical", {}};
    for (auto g : kGenerators) {
        const auto& d = delta[index_of(g)];
        report.entries.push_back(
            {"δ(" + generator_name(g) + ")", (d - flip(d)).homogeneous_part(1) - classical(g).homogeneous_part(1)});
    }
    return report;
}

// ---------------------------------------------------------------- R-matrices

UniversalR build_standard_R(int n) {
    if (n < 2) throw std::invalid_argument("standard R-matrix needs order >= 2");
    // x = ξ M⊗1 and y = ξ 1⊗M as commuting formal symbols.
    const ParameterId px = intern_parameter("x₁"), py = intern_parameter("x₂");
    const int m = n - 1;
    const Series x = sym(px, m), y = sym(py, m);
    const Series half_sum = (x + y) * Rational(1, 2);
    auto cosh = [](const Series& s) { return (exp(s) + exp(-s)) * Rational(1, 2); };
    auto sinh = [](const Series& s) { return (exp(s) - exp(-s)) * Rational(1, 2); };
    const Series c2m1 = pow(cosh(half_sum), 2) - Series(Rational(1), m);
    const Series inv_c = compose(univariate::inv_sqrt_one_plus(m), c2m1);
    const Series inv_c2 = compose(univariate::inv_one_plus(m), c2m1);
    const Series z = sinh(x) * sinh(y) * inv_c2;
    const Series f = exp(-half_sum) * inv_c * compose(univariate::arcsin_sqrt_over_sqrt(m), z);

    auto table = standard_table(n, kQuantumDegreeCap);
    const Series xi = sym(param::xi, n);
    TensorElement ft(2, n);
    for (const auto& [e, c] : f.terms()) {
        const int a = e[px], b = e[py];
        ft.add_term({Monomial::of(M, a), Monomial::of(M, b)}, pow(xi, a + b) * c);
    }
    TensorElement a = tensor_multiply(wedge(gen(K, n), gen(P, n)) * xi, ft, table);
    return {RKind::Standard, exp(a, table)};
}

std::array<TensorElement, 3> nonstandard_exponents(int n) {
    const Series b1 = sym(param::beta1, n), b2 = sym(param::beta2, n), b3 = sym(param::beta3, n);
    auto t = [n](Generator a, Generator b) { return tensor(gen(a, n), gen(b, n)); };
    return {t(H, M) * b1 - t(K, M) * b3, wedge(gen(H, n), gen(P, n)) * b2, t(M, H) * -b1 + t(M, K) * b3};
}

UniversalR build_nonstandard_R(int n) {
    auto table = nonstandard_table(n, kQuantumDegreeCap);
    auto a = nonstandard_exponents(n);
    auto r = tensor_multiply(tensor_multiply(exp(a[2], table), exp(a[1], table), table), exp(a[0], table), table);
    return {RKind::Nonstandard, r};
}

QuantumFamily r_matrix_family(RKind kind, int n, int cap) {
    if (kind == RKind::Nonstandard) return quantum_family(Family::IaNonstandard, n, cap);
    auto q = quantum_family(Family::IaStandard, n, cap);
    for (auto& d : q.coproduct) d = d.substitute(param::beta1, Series(n));
    return q;
}

CheckReport verify_r_semiclassical(const UniversalR& r) {
    const int n = r.r.order();
    const TensorElement classical = r.kind == RKind::Standard
                                        ? wedge(gen(K, n), gen(P, n)) * Series::variable(param::xi, n)
                                        : nonstandard_r(n);
    CheckReport report{"r-semiclassical", {}};
    report.entries.push_back({"order 0", r.r.homogeneous_part(0) - TensorElement::identity(2, n)});
    report.entries.push_back({"order 1", r.r.homogeneous_part(1) - classical.homogeneous_part(1)});
    return report;
}

CheckReport verify_intertwining(const UniversalR& r, const QuantumFamily& q) {
    CheckReport report{"intertwining", {}};
    for (auto g : kGenerators) {
        const auto& d = q.delta(g);
        report.entries.push_back({"RΔ(" + generator_name(g) + ")R⁻¹ - σΔ(" + generator_name(g) + ")",
                                  tensor_multiply(r.r, d, q.table) - tensor_multiply(flip(d), r.r, q.table)});
    }
    return report;
}

CheckReport verify_nonstandard_stages(const QuantumFamily& q) {
    const int n = q.order();
    const auto& t = q.table;
    const Series b1 = sym(param::beta1, n), b2 = sym(param::beta2, n), b3 = sym(param::beta3, n);
    auto a = nonstandard_exponents(n);
    std::vector<TensorElement> e, ei;
    for (int i = 0; i < 3; ++i) {
        e.push_back(exp(a[i], t));
        ei.push_back(exp(-a[i], t));
    }
    auto conj = [&](int i, const TensorElement& x) { return tensor_multiply(tensor_multiply(e[i], x, t), ei[i], t); };
    auto g = [n](Generator x) { return gen(x, n); };
    auto m2 = multiply(g(M), g(M), t);
    auto sym_m3 = tensor(m2, g(M)) + tensor(g(M), m2);

    TensorElement h = prim(P, n) - tensor(g(M), g(M)) * b3;
    TensorElement f = prim(H, n) - sym_m3 * (b3 * b3 * Rational(1, 2));
    TensorElement common = prim(K, n) - sym_m3 * (b1 * b3 * Rational(1, 2)) -
                           tensor(m2, m2) * (b2 * b3 * b3 * Rational(1, 2));
    TensorElement g1 = common + tensor(g(H), g(M)) * b2 - tensor(g(P), m2) * (b2 * b3 * Rational(1, 2));
    TensorElement g2 = common + tensor(g(M), g(H)) * b2 - tensor(m2, g(P)) * (b2 * b3 * Rational(1, 2));

    CheckReport report{"stages", {}};
    report.entries.push_back({"e^{A1}Δ(P)e^{-A1} - h", conj(0, q.delta(P)) - h});
    report.entries.push_back({"e^{A2}he^{-A2} - h", conj(1, h) - h});
    report.entries.push_back({"e^{A3}he^{-A3} - σΔ(P)", conj(2, h) - flip(q.delta(P))});
    report.entries.push_back({"e^{A1}Δ(H)e^{-A1} - f", conj(0, q.delta(H)) - f});
    report.entries.push_back({"e^{A2}fe^{-A2} - f", conj(1, f) - f});
    report.entries.push_back({"e^{A3}fe^{-A3} - σΔ(H)", conj(2, f) - flip(q.delta(H))});
    report.entries.push_back({"e^{A1}Δ(K)e^{-A1} - g1", conj(0, q.delta(K)) - g1});
    report.entries.push_back({"e^{A2}g1e^{-A2} - g2", conj(1, g1) - g2});
    report.entries.push_back({"e^{A3}g2e^{-A3} - σΔ(K)", conj(2, g2) - flip(q.delta(K))});
    return report;
}

QYBEReport qybe_residual(const TensorElement& r, const CommutationTable& table) {
    auto r12 = embed(r, 0, 1), r13 = embed(r, 0, 2), r23 = embed(r, 1, 2);
    auto lhs = tensor_multiply(tensor_multiply(r12, r13, table), r23, table);
    auto rhs = tensor_multiply(tensor_multiply(r23, r13, table), r12, table);
    QYBEReport report{lhs - rhs, std::nullopt, {}};
    report.lowest_order = report.residual.lowest_order();
    if (report.lowest_order) {
        std::set<std::string> names;
        auto leading = report.residual.homogeneous_part(*report.lowest_order);
        for (const auto& [k, c] : leading.terms())
            for (const auto& [e, v] : c.terms()) names.insert(Series::monomial(Rational(1), e, 1 + e.degree()).to_string());
        report.leading_monomials.assign(names.begin(), names.end());
    }
    return report;
}

}  // namespace galilei
