#include "galilei/bialgebra.hpp"

#include <algorithm>
#include <cctype>

#include "galilei/tables.hpp"

namespace galilei {

namespace {

constexpr Generator K = Generator::K, H = Generator::H, P = Generator::P, M = Generator::M;

AlgebraElement gen(Generator g, int n) { return AlgebraElement::generator(g, n); }
TensorElement wedge_of(Generator a, Generator b, int n) { return wedge(gen(a, n), gen(b, n)); }
Series sym(ParameterId p, int n) { return Series::variable(p, n); }

// Linear map on degree-one monomials, extended to a tensor leg.
AlgebraElement linear_image(const Monomial& m, const std::function<AlgebraElement(Generator)>& f) {
    if (m.degree() != 1) throw std::invalid_argument("linear map applied to a non-generator monomial");
    return f(m.letters().front());
}

Rational value_of(const ParameterValues& v, ParameterId p) {
    auto it = v.find(p);
    return it == v.end() ? Rational(0) : it->second;
}

}  // namespace

std::string family_name(Family f) {
    switch (f) {
        case Family::Trivial: return "trivial";
        case Family::Ia: return "Ia";
        case Family::IaStandard: return "Ia-standard";
        case Family::IaNonstandard: return "Ia-nonstandard";
        case Family::Ib: return "Ib";
        case Family::IIa: return "IIa";
        case Family::IIb: return "IIb";
        case Family::General: return "general";
    }
    return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    static const std::pair<const char*, Family> names[] = {
        {"ia", Family::Ia},
        {"ia-standard", Family::IaStandard},
        {"standard", Family::IaStandard},
        {"ia-nonstandard", Family::IaNonstandard},
        {"ia-non-standard", Family::IaNonstandard},
        {"nonstandard", Family::IaNonstandard},
        {"non-standard", Family::IaNonstandard},
        {"ib", Family::Ib},
        {"iia", Family::IIa},
        {"iib", Family::IIb},
        {"trivial", Family::Trivial},
        {"none", Family::Trivial},
        {"zero", Family::Trivial},
        {"undeformed", Family::Trivial},
        {"general", Family::General},
    };
    for (const auto& [n, f] : names)
        if (s == n) return f;
    return std::nullopt;
}

// ---------------------------------------------------------------- Cocommutator

Cocommutator::Cocommutator(int order)
    : images_{TensorElement(2, order), TensorElement(2, order), TensorElement(2, order), TensorElement(2, order)} {}

Cocommutator::Cocommutator(std::array<TensorElement, 4> images) : images_(std::move(images)) {
    for (const auto& t : images_) {
        if (t.rank() != 2) throw RankMismatchError("cocommutator images must be rank 2");
        if (t.order() != images_[0].order()) throw OrderMismatchError("cocommutator images differ in order");
    }
}

bool Cocommutator::is_zero() const {
    return std::all_of(images_.begin(), images_.end(), [](const TensorElement& t) { return t.is_zero(); });
}

TensorElement Cocommutator::apply(const AlgebraElement& x) const {
    TensorElement r(2, order());
    for (const auto& [m, s] : x.terms()) {
        if (m.degree() != 1) throw std::invalid_argument("cocommutator applied to a non-linear element");
        r += images_[index_of(m.letters().front())] * s;
    }
    return r;
}

Series Cocommutator::coefficient(Generator i, Generator j, Generator k) const {
    return images_[index_of(i)].coefficient({Monomial::of(j), Monomial::of(k), Monomial{}});
}

Cocommutator Cocommutator::map_coefficients(const std::function<Series(const Series&)>& f) const {
    std::array<TensorElement, 4> out = images_;
    for (auto& t : out) t = t.map_coefficients(f);
    return Cocommutator(std::move(out));
}

Cocommutator Cocommutator::substitute(ParameterId p, const Series& value) const {
    return map_coefficients([&](const Series& s) { return s.substitute(p, value); });
}

Cocommutator Cocommutator::substitute(const ParameterValues& values) const {
    Cocommutator r = *this;
    for (const auto& [p, v] : values) r = r.substitute(p, Series(v, order()));
    return r;
}

std::string Cocommutator::to_string(Generator g) const { return images_[index_of(g)].to_string(); }

Cocommutator nine_parameter_cocommutator(int n) {
    const Series xi = sym(param::xi, n), nu = sym(param::nu, n), alpha = sym(param::alpha, n);
    const Series b1 = sym(param::beta1, n), b2 = sym(param::beta2, n), b3 = sym(param::beta3, n);
    const Series b4 = sym(param::beta4, n), b5 = sym(param::beta5, n), b6 = sym(param::beta6, n);
    Cocommutator d(n);
    d[K] = wedge_of(K, P, n) * b6 + wedge_of(K, M, n) * xi + wedge_of(P, H, n) * nu + wedge_of(P, M, n) * b1 +
           wedge_of(H, M, n) * b2;
    d[H] = wedge_of(K, M, n) * b5 - wedge_of(P, H, n) * (b6 + alpha) + wedge_of(P, M, n) * b3 +
           wedge_of(H, M, n) * (b4 - xi);
    d[P] = wedge_of(P, M, n) * b4 + wedge_of(H, M, n) * (b6 + alpha);
    d[M] = wedge_of(P, M, n) * alpha;
    return d;
}

Cocommutator family_unreduced(Family f, int n) {
    Cocommutator d = nine_parameter_cocommutator(n);
    const Series zero(n);
    auto set0 = [&](std::initializer_list<ParameterId> ps) {
        for (auto p : ps) d = d.substitute(p, zero);
    };
    switch (f) {
        case Family::Trivial: return Cocommutator(n);
        case Family::General: return d;
        case Family::Ia: set0({param::alpha, param::beta6, param::nu}); return d;
        case Family::IaStandard:
            set0({param::alpha, param::beta6, param::nu, param::beta2, param::beta3, param::beta5});
            return d.substitute(param::beta4, sym(param::xi, n));
        case Family::IaNonstandard:
            set0({param::alpha, param::beta6, param::nu, param::xi, param::beta4, param::beta5});
            return d;
        case Family::Ib:
            set0({param::alpha, param::beta6, param::beta5});
            return d.substitute(param::beta4, sym(param::xi, n));
        case Family::IIa: set0({param::beta5, param::beta6, param::xi, param::beta4}); return d;
        case Family::IIb:
            set0({param::beta5});
            d = d.substitute(param::beta6, -sym(param::alpha, n));
            return d.substitute(param::beta4, sym(param::xi, n));
    }
    return d;
}

Cocommutator family_cocommutator(Family f, int n) {
    const Series xi = sym(param::xi, n), nu = sym(param::nu, n), alpha = sym(param::alpha, n);
    const Series b1 = sym(param::beta1, n), b2 = sym(param::beta2, n), b3 = sym(param::beta3, n);
    Cocommutator d(n);
    switch (f) {
        case Family::Ib:
            d[K] = wedge_of(K, M, n) * xi + wedge_of(P, H, n) * nu;
            d[H] = wedge_of(P, M, n) * b3;
            d[P] = wedge_of(P, M, n) * xi;
            return d;
        case Family::IIa:
            d[H] = wedge_of(P, H, n) * -alpha;
            d[P] = wedge_of(H, M, n) * alpha;
            d[M] = wedge_of(P, M, n) * alpha;
            return d;
        case Family::IIb:
            d[K] = wedge_of(K, P, n) * -alpha + wedge_of(P, M, n) * b1 + wedge_of(H, M, n) * b2;
            d[M] = wedge_of(P, M, n) * alpha;
            return d;
        default: return family_unreduced(f, n);
    }
}

// ---------------------------------------------------------------- cocycle

bool CocycleReport::passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const PairResidual& e) { return e.residual.is_zero(); });
}

CocycleReport cocycle_residual(const Cocommutator& delta, const CommutationTable& table) {
    const int n = delta.order();
    CocycleReport report;
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Generator x = kGenerators[i], y = kGenerators[j];
            TensorElement r = delta.apply(table.bracket(x, y)) -
                              tensor_commutator(delta(x), primitive(gen(y, n), 2), table) -
                              tensor_commutator(primitive(gen(x, n), 2), delta(y), table);
            report.entries.push_back({x, y, std::move(r)});
        }
    return report;
}

CommutationTable dual_table(const Cocommutator& delta) {
    const int n = delta.order();
    std::array<AlgebraElement, 6> b{AlgebraElement(n), AlgebraElement(n), AlgebraElement(n),
                                    AlgebraElement(n), AlgebraElement(n), AlgebraElement(n)};
    for (int j = 0; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k) {
            AlgebraElement e(n);
            for (auto gi : kGenerators)
                e.add_term(Monomial::of(gi), delta.coefficient(gi, kGenerators[j], kGenerators[k]));
            b[CommutationTable::pair_index(kGenerators[j], kGenerators[k])] = std::move(e);
        }
    return CommutationTable("dual", n, std::move(b), kDefaultDegreeCap, true);
}

std::vector<Series> cojacobi_constraints(const Cocommutator& delta, const CommutationTable& table) {
    if (!cocycle_residual(delta, table).passed())
        throw PreconditionError("co-Jacobi constraints requested for a cochain that is not a cocycle");
    std::vector<Series> out;
    for (const auto& entry : verify_jacobi(dual_table(delta)).entries)
        for (const auto& [m, s] : entry.residual.terms()) {
            Series c = primitive_part(s);
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(std::move(c));
        }
    std::sort(out.begin(), out.end(),
              [](const Series& a, const Series& b) { return a.to_string() < b.to_string(); });
    return out;
}

std::vector<Series> canonical_basis(const std::vector<Series>& polys) {
    if (polys.empty()) return {};
    const int order = polys.front().order();
    std::vector<Exponents> columns;
    for (const auto& q : polys)
        for (const auto& [e, c] : q.terms()) columns.push_back(e);
    std::sort(columns.begin(), columns.end(), [](const Exponents& a, const Exponents& b) { return graded_lex_less(b, a); });
    columns.erase(std::unique(columns.begin(), columns.end()), columns.end());
    std::vector<std::vector<Rational>> rows;
    for (const auto& q : polys) {
        std::vector<Rational> row(columns.size());
        for (std::size_t k = 0; k < columns.size(); ++k) row[k] = q.coefficient(columns[k]);
        rows.push_back(std::move(row));
    }
    rref(rows);
    std::vector<Series> out;
    for (const auto& row : rows) {
        Series s(order);
        for (std::size_t k = 0; k < columns.size(); ++k)
            if (row[k] != 0) s += Series::monomial(row[k], columns[k], order);
        out.push_back(primitive_part(s));
    }
    std::sort(out.begin(), out.end(), [](const Series& a, const Series& b) { return a.to_string() < b.to_string(); });
    return out;
}

std::vector<Series> violated_constraints(const std::vector<Series>& constraints, const ParameterValues& values) {
    std::vector<Series> out;
    for (const auto& c : constraints) {
        Series v = c;
        for (const auto& [p, x] : values) v = v.substitute(p, Series(x, v.order()));
        if (!v.is_zero()) out.push_back(c);
    }
    return out;
}

CommutationTable dual_brackets(const Cocommutator& delta, const CommutationTable& table) {
    if (!cojacobi_constraints(delta, table).empty())
        throw PreconditionError("dual brackets violate the Jacobi identity");
    return dual_table(delta);
}

// ---------------------------------------------------------------- linear algebra

int rref(std::vector<std::vector<Rational>>& rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        Rational inv = 1 / rows[rank][c];
        for (auto& v : rows[rank]) v *= inv;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            Rational f = rows[r][c];
            for (std::size_t k = 0; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
        }
        ++rank;
    }
    rows.resize(rank);
    return static_cast<int>(rank);
}

std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> rows, int columns) {
    rref(rows);
    std::vector<int> pivot_of_row;
    std::vector<bool> is_pivot(columns, false);
    for (const auto& row : rows) {
        int c = 0;
        while (row[c] == 0) ++c;
        pivot_of_row.push_back(c);
        is_pivot[c] = true;
    }
    std::vector<std::vector<Rational>> basis;
    for (int free = 0; free < columns; ++free) {
        if (is_pivot[free]) continue;
        std::vector<Rational> v(columns);
        v[free] = 1;
        for (std::size_t r = 0; r < rows.size(); ++r) v[pivot_of_row[r]] = -rows[r][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

AnsatzSolution solve_cocycle_ansatz(const CommutationTable& table) {
    const int n = table.order();
    constexpr int kUnknowns = 24;
    std::map<std::pair<int, TensorElement::Key>, int> row_index;
    std::vector<std::map<int, Rational>> columns(kUnknowns);

    auto wedge_pair = [](int p) {
        for (int j = 0; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k)
                if (CommutationTable::pair_index(kGenerators[j], kGenerators[k]) == p)
                    return std::pair{kGenerators[j], kGenerators[k]};
        throw std::logic_error("bad pair index");
    };

    for (int u = 0; u < kUnknowns; ++u) {
        Cocommutator d(n);
        auto [a, b] = wedge_pair(u % 6);
        d[kGenerators[u / 6]] = wedge_of(a, b, n);
        auto report = cocycle_residual(d, table);
        for (std::size_t e = 0; e < report.entries.size(); ++e)
            for (const auto& [key, s] : report.entries[e].residual.terms()) {
                auto [it, inserted] =
                    row_index.try_emplace({static_cast<int>(e), key}, static_cast<int>(row_index.size()));
                columns[u][it->second] = s.constant_term();
            }
    }

    AnsatzSolution sol;
    sol.unknowns = kUnknowns;
    sol.equations = static_cast<int>(row_index.size());
    std::vector<std::vector<Rational>> rows(row_index.size(), std::vector<Rational>(kUnknowns));
    for (int u = 0; u < kUnknowns; ++u)
        for (const auto& [r, v] : columns[u]) rows[r][u] = v;
    sol.nullspace = nullspace(rows, kUnknowns);

    const Cocommutator nine = nine_parameter_cocommutator(n);
    for (std::size_t p = 0; p < param::kCoreCount; ++p) {
        Cocommutator d = nine;
        for (std::size_t q = 0; q < param::kCoreCount; ++q)
            d = d.substitute(ParameterId{static_cast<std::uint8_t>(q)}, Series(Rational(p == q ? 1 : 0), n));
        std::vector<Rational> v(kUnknowns);
        for (int u = 0; u < kUnknowns; ++u) {
            auto [a, b] = wedge_pair(u % 6);
            v[u] = d.coefficient(kGenerators[u / 6], a, b).constant_term();
        }
        sol.nine_parameter_directions.push_back(std::move(v));
    }

    auto rank_of = [](std::vector<std::vector<Rational>> m) { return rref(m); };
    auto joined = sol.nullspace;
    joined.insert(joined.end(), sol.nine_parameter_directions.begin(), sol.nine_parameter_directions.end());
    const int r_null = static_cast<int>(sol.nullspace.size());
    sol.matches_nine_parameter = r_null == rank_of(sol.nine_parameter_directions) && r_null == rank_of(joined);
    return sol;
}

// ---------------------------------------------------------------- automorphisms

Automorphism::Automorphism(int order)
    : lambda{Series(order), Series(order), Series(order), Series(order), Series(order)} {}

AlgebraElement Automorphism::image(Generator g) const {
    const int n = order();
    switch (g) {
        case K: return gen(K, n) + gen(H, n) * lambda[0] + gen(P, n) * lambda[1] + gen(M, n) * lambda[2];
        case H: return gen(H, n) + gen(P, n) * lambda[3] + gen(M, n) * lambda[4];
        case P: return gen(P, n) + gen(M, n) * lambda[3];
        case M: return gen(M, n);
    }
    return AlgebraElement(n);
}

AlgebraElement Automorphism::inverse_image(Generator g) const {
    const int n = order();
    // A = I + N with N strictly upper triangular; A^{-1} = I - N + N^2 - N^3.
    using Row = std::array<Series, 4>;
    std::array<Row, 4> N;
    for (auto& row : N) row.fill(Series(n));
    for (int i = 0; i < 4; ++i) {
        AlgebraElement img = image(kGenerators[i]);
        for (int j = i + 1; j < 4; ++j) N[i][j] = img.coefficient(Monomial::of(kGenerators[j]));
    }
    auto mul = [&](const std::array<Row, 4>& a, const std::array<Row, 4>& b) {
        std::array<Row, 4> c;
        for (auto& row : c) row.fill(Series(n));
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) {
                if (a[i][k].is_zero()) continue;
                for (int j = 0; j < 4; ++j) c[i][j] += a[i][k] * b[k][j];
            }
        return c;
    };
    auto n2 = mul(N, N), n3 = mul(n2, N);
    const int i = index_of(g);
    AlgebraElement r = gen(g, n);
    for (int j = 0; j < 4; ++j) {
        Series c = -N[i][j] + n2[i][j] - n3[i][j];
        r.add_term(Monomial::of(kGenerators[j]), laurent_reduce(c));
    }
    return r;
}

namespace {

AlgebraElement apply_linear(const AlgebraElement& x, const std::function<AlgebraElement(Generator)>& f) {
    AlgebraElement r(x.order());
    for (const auto& [m, s] : x.terms()) r += linear_image(m, f) * s;
    return r;
}

TensorElement reduce(const TensorElement& t) { return t.map_coefficients(laurent_reduce); }

TensorElement to_new_basis(const TensorElement& t, const Automorphism& phi) {
    std::array<AlgebraElement, 4> inv;
    for (auto g : kGenerators) inv[index_of(g)] = phi.inverse_image(g);
    auto f = [&](const Monomial& m) { return linear_image(m, [&](Generator g) { return inv[index_of(g)]; }); };
    return reduce(map_leg(map_leg(t, 0, f), 1, f));
}

}  // namespace

bool preserves_table(const Automorphism& phi, const CommutationTable& table) {
    auto img = [&](Generator g) { return phi.image(g); };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) {
            Generator x = kGenerators[i], y = kGenerators[j];
            AlgebraElement lhs = apply_linear(table.bracket(x, y), img);
            AlgebraElement rhs = commutator(phi.image(x), phi.image(y), table);
            if (!(lhs - rhs).map_coefficients(laurent_reduce).is_zero()) return false;
        }
    return true;
}

Cocommutator apply_automorphism(const Cocommutator& delta, const Automorphism& phi, const CommutationTable& table) {
    if (!preserves_table(phi, table)) throw PreconditionError("map does not preserve the commutation table");
    Cocommutator out(delta.order());
    for (auto g : kGenerators) out[g] = to_new_basis(delta.apply(phi.image(g)), phi);
    return out;
}

TensorElement apply_automorphism(const TensorElement& r, const Automorphism& phi, const CommutationTable& table) {
    if (!preserves_table(phi, table)) throw PreconditionError("map does not preserve the commutation table");
    return to_new_basis(r, phi);
}

ParameterId inverse_symbol(ParameterId p) { return intern_parameter(parameter_name(p) + "⁻¹"); }

Series laurent_reduce(const Series& s) {
    Series r = s;
    for (std::size_t i = 0; i < param::kCoreCount; ++i) {
        ParameterId p{static_cast<std::uint8_t>(i)};
        if (auto inv = find_parameter(parameter_name(p) + "⁻¹")) r = r.cancel_inverse(p, *inv);
    }
    return r;
}

// ---------------------------------------------------------------- coboundaries

RMatrixCandidate::RMatrixCandidate(int order)
    : a{Series(order), Series(order), Series(order), Series(order), Series(order), Series(order)},
      tau{Series(order), Series(order), Series(order)} {}

TensorElement RMatrixCandidate::tensor() const {
    const int n = order();
    TensorElement r = wedge_of(K, P, n) * a[0] + wedge_of(K, M, n) * a[1] + wedge_of(K, H, n) * a[2] +
                      wedge_of(P, M, n) * a[3] + wedge_of(P, H, n) * a[4] + wedge_of(M, H, n) * a[5];
    TensorElement eta = (TensorElement::outer(gen(P, n), gen(P, n)) - TensorElement::outer(gen(M, n), gen(H, n)) -
                         TensorElement::outer(gen(H, n), gen(M, n))) *
                            tau[0] +
                        TensorElement::outer(gen(M, n), gen(M, n)) * tau[1] + wedge_of(P, M, n) * tau[2];
    return r + eta;
}

RMatrixCandidate RMatrixCandidate::symbolic(int order) {
    RMatrixCandidate c(order);
    for (int i = 0; i < 6; ++i) c.a[i] = sym(intern_parameter("a" + std::to_string(i + 1)), order);
    for (int i = 0; i < 3; ++i) c.tau[i] = sym(intern_parameter("τ" + std::to_string(i + 1)), order);
    return c;
}

Cocommutator coboundary_delta(const TensorElement& r, const CommutationTable& table) {
    if (r.rank() != 2) throw RankMismatchError("r-matrix must be rank 2");
    Cocommutator d(r.order());
    for (auto g : kGenerators) d[g] = tensor_commutator(primitive(gen(g, r.order()), 2), r, table);
    return d;
}

std::string mcybe_name(MCYBEClass c) {
    switch (c) {
        case MCYBEClass::Triangular: return "triangular";
        case MCYBEClass::QuasiTriangular: return "quasi-triangular";
        case MCYBEClass::Fails: return "fails";
    }
    return "unknown";
}

MCYBEReport mcybe_check(const TensorElement& r, const CommutationTable& table) {
    const int n = r.order();
    TensorElement s = schouten(r, table);
    std::array<TensorElement, 4> ad{TensorElement(3, n), TensorElement(3, n), TensorElement(3, n),
                                    TensorElement(3, n)};
    bool invariant = true;
    for (auto g : kGenerators) {
        ad[index_of(g)] = tensor_commutator(primitive(gen(g, n), 3), s, table);
        invariant = invariant && ad[index_of(g)].is_zero();
    }
    MCYBEClass c = s.is_zero() ? MCYBEClass::Triangular : invariant ? MCYBEClass::QuasiTriangular : MCYBEClass::Fails;
    return MCYBEReport{c, std::move(s), std::move(ad)};
}

TensorElement standard_r(int n) {
    return wedge_of(K, P, n) * sym(param::xi, n) + wedge_of(H, M, n) * sym(param::beta1, n);
}

TensorElement nonstandard_r(int n) {
    return wedge_of(H, M, n) * sym(param::beta1, n) + wedge_of(H, P, n) * sym(param::beta2, n) +
           wedge_of(M, K, n) * sym(param::beta3, n);
}

// ---------------------------------------------------------------- classification

Family identify_family(const ParameterValues& values) {
    const int n = 2;
    ParameterValues full;
    for (std::size_t i = 0; i < param::kCoreCount; ++i) {
        ParameterId p{static_cast<std::uint8_t>(i)};
        full[p] = value_of(values, p);
    }
    Cocommutator d = nine_parameter_cocommutator(n).substitute(full);
    if (d.is_zero()) return Family::Trivial;
    if (!cojacobi_constraints(d, undeformed_table(n)).empty())
        return Family::General;

    auto v = [&](ParameterId p) { return full[p]; };
    if (v(param::alpha) == 0) {
        if (v(param::nu) != 0) return Family::Ib;
        const bool coboundary_shape = v(param::beta4) == v(param::xi) && v(param::beta5) == 0;
        if (coboundary_shape && v(param::xi) != 0 && v(param::beta2) == 0 && v(param::beta3) == 0)
            return Family::IaStandard;
        if (coboundary_shape && v(param::xi) == 0) return Family::IaNonstandard;
        return Family::Ia;
    }
    return v(param::beta6) == 0 ? Family::IIa : Family::IIb;
}

std::optional<ParameterValues> nine_parameter_coordinates(const Cocommutator& delta) {
    const int n = delta.order();
    const Cocommutator base = nine_parameter_cocommutator(n);
    std::vector<Cocommutator> directions;
    for (std::size_t i = 0; i < param::kCoreCount; ++i) {
        ParameterValues point;
        for (std::size_t j = 0; j < param::kCoreCount; ++j)
            point[ParameterId{static_cast<std::uint8_t>(j)}] = i == j ? 1 : 0;
        directions.push_back(base.substitute(point));
    }
    std::vector<std::vector<Rational>> rows;
    for (auto gi : kGenerators)
        for (int j = 0; j < 4; ++j)
            for (int k = j + 1; k < 4; ++k) {
                const Series c = delta.coefficient(gi, kGenerators[j], kGenerators[k]);
                if (c.lowest_degree().value_or(0) > 0 || c.size() > 1)
                    throw PreconditionError("cocommutator depends on deformation parameters");
                std::vector<Rational> row;
                for (const auto& d : directions)
                    row.push_back(d.coefficient(gi, kGenerators[j], kGenerators[k]).constant_term());
                row.push_back(c.constant_term());
                rows.push_back(std::move(row));
            }
    rref(rows);
    const std::size_t cols = param::kCoreCount;
    ParameterValues out;
    for (const auto& row : rows) {
        std::size_t pivot = 0;
        while (pivot <= cols && row[pivot] == 0) ++pivot;
        if (pivot == cols) return std::nullopt;
        if (pivot < cols) out[ParameterId{static_cast<std::uint8_t>(pivot)}] = row[cols];
    }
    for (std::size_t i = 0; i < cols; ++i) out.try_emplace(ParameterId{static_cast<std::uint8_t>(i)}, 0);
    return out;
}

std::optional<TensorElement> coboundary_r(const ParameterValues& values, int n) {
    auto v = [&](ParameterId p) { return value_of(values, p); };
    if (v(param::alpha) != 0 || v(param::beta6) != 0 || v(param::nu) != 0) return std::nullopt;
    if (v(param::beta4) != v(param::xi) || v(param::beta5) != 0) return std::nullopt;
    auto c = [&](ParameterId p) { return Series(v(p), n); };
    return wedge_of(K, P, n) * c(param::xi) - wedge_of(K, M, n) * c(param::beta3) -
           wedge_of(P, H, n) * c(param::beta2) - wedge_of(M, H, n) * c(param::beta1);
}

}  // namespace galilei
