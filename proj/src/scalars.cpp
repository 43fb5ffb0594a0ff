#include "galilei/scalars.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <numeric>
#include <sstream>

namespace galilei {

namespace {

struct SymbolTable {
    std::mutex mutex;
    std::deque<std::string> names{"ξ", "ν", "α", "β1", "β2", "β3", "β4", "β5", "β6"};
};

SymbolTable& symbols() {
    static SymbolTable table;
    return table;
}

// ASCII spellings accepted on input.
std::string_view canonical_alias(std::string_view name) {
    static const std::pair<std::string_view, std::string_view> aliases[] = {
        {"xi", "ξ"},     {"nu", "ν"},     {"alpha", "α"},  {"beta1", "β1"}, {"beta2", "β2"},
        {"beta3", "β3"}, {"beta4", "β4"}, {"beta5", "β5"}, {"beta6", "β6"},
    };
    for (const auto& [ascii, utf8] : aliases)
        if (name == ascii) return utf8;
    return name;
}

}  // namespace

ParameterId intern_parameter(std::string_view name) {
    name = canonical_alias(name);
    auto& table = symbols();
    std::lock_guard lock(table.mutex);
    for (std::size_t i = 0; i < table.names.size(); ++i)
        if (table.names[i] == name) return ParameterId{static_cast<std::uint8_t>(i)};
    if (table.names.size() >= kMaxParameters)
        throw std::length_error("parameter table full: cannot intern '" + std::string(name) + "'");
    table.names.emplace_back(name);
    return ParameterId{static_cast<std::uint8_t>(table.names.size() - 1)};
}

std::optional<ParameterId> find_parameter(std::string_view name) {
    name = canonical_alias(name);
    auto& table = symbols();
    std::lock_guard lock(table.mutex);
    for (std::size_t i = 0; i < table.names.size(); ++i)
        if (table.names[i] == name) return ParameterId{static_cast<std::uint8_t>(i)};
    return std::nullopt;
}

std::string parameter_name(ParameterId id) {
    auto& table = symbols();
    std::lock_guard lock(table.mutex);
    if (id.index >= table.names.size()) return "p" + std::to_string(id.index);
    return table.names[id.index];
}

std::size_t parameter_count() {
    auto& table = symbols();
    std::lock_guard lock(table.mutex);
    return table.names.size();
}

// ---------------------------------------------------------------- Exponents

Exponents Exponents::unit(ParameterId p, int power) {
    Exponents e;
    e.set(p, power);
    return e;
}

void Exponents::set(ParameterId p, int power) {
    if (power < 0 || power > 255) throw std::out_of_range("exponent out of range");
    e_[p.index] = static_cast<std::uint8_t>(power);
}

int Exponents::degree() const {
    int d = 0;
    for (auto v : e_) d += v;
    return d;
}

Exponents Exponents::operator+(const Exponents& o) const {
    Exponents r;
    for (std::size_t i = 0; i < kMaxParameters; ++i) {
        int v = e_[i] + o.e_[i];
        if (v > 255) throw std::overflow_error("exponent overflow");
        r.e_[i] = static_cast<std::uint8_t>(v);
    }
    return r;
}

bool graded_lex_less(const Exponents& a, const Exponents& b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    for (std::size_t i = 0; i < kMaxParameters; ++i)
        if (a.e_[i] != b.e_[i]) return a.e_[i] > b.e_[i];
    return false;
}

// ---------------------------------------------------------------- Series

namespace {

// GMP arithmetic assumes canonical operands; user-built values such as
// mpq_class(2, 4) are not.
Rational canonical(Rational c) {
    c.canonicalize();
    return c;
}

}  // namespace

Series::Series(int order) : order_(order) {
    if (order < 0) throw std::invalid_argument("negative truncation order");
}

Series::Series(const Rational& c, int order) : Series(order) {
    if (c != 0) terms_.emplace(Exponents{}, canonical(c));
}

Series Series::variable(ParameterId p, int order) {
    return monomial(Rational(1), Exponents::unit(p), order);
}

Series Series::monomial(const Rational& c, const Exponents& e, int order) {
    Series s(order);
    if (c != 0 && e.degree() <= order) s.terms_.emplace(e, canonical(c));
    return s;
}

bool Series::is_one() const {
    return terms_.size() == 1 && terms_.begin()->first.is_zero() && terms_.begin()->second == 1;
}

Rational Series::constant_term() const { return coefficient(Exponents{}); }

Rational Series::coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<int> Series::lowest_degree() const {
    if (terms_.empty()) return std::nullopt;
    return terms_.begin()->first.degree();
}

bool Series::depends_on(ParameterId p) const {
    return std::any_of(terms_.begin(), terms_.end(), [p](const auto& t) { return t.first[p] > 0; });
}

Series Series::homogeneous_part(int d) const {
    Series r(order_);
    for (const auto& [e, c] : terms_)
        if (e.degree() == d) r.terms_.emplace_hint(r.terms_.end(), e, c);
    return r;
}

Series Series::truncated(int m) const {
    if (m > order_) throw OrderMismatchError("cannot raise truncation order by truncating");
    Series r(m);
    for (const auto& [e, c] : terms_)
        if (e.degree() <= m) r.terms_.emplace_hint(r.terms_.end(), e, c);
    return r;
}

Series Series::with_order(int m) const {
    Series r(m);
    for (const auto& [e, c] : terms_)
        if (e.degree() <= m) r.terms_.emplace_hint(r.terms_.end(), e, c);
    return r;
}

void Series::check_order(const Series& o) const {
    if (order_ != o.order_)
        throw OrderMismatchError("series truncation orders differ: " + std::to_string(order_) + " vs " +
                                 std::to_string(o.order_));
}

void Series::add_term(const Exponents& e, const Rational& c) {
    if (c == 0 || e.degree() > order_) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Series Series::operator-() const {
    Series r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

Series& Series::operator+=(const Series& o) {
    check_order(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

Series& Series::operator-=(const Series& o) {
    check_order(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

Series& Series::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    const Rational k = canonical(c);
    for (auto& [e, v] : terms_) v *= k;
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    a.check_order(b);
    Series r(a.order_);
    if (a.terms_.empty() || b.terms_.empty()) return r;
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    Rational prod;
    for (const auto& [ea, ca] : a.terms_) {
        const int da = ea.degree();
        for (const auto& [eb, cb] : b.terms_) {
            // graded order: once the degree overflows, later terms do too
            if (da + eb.degree() > a.order_) break;
            prod = ca * cb;
            r.add_term(ea + eb, prod);
        }
    }
    return r;
}

Series& Series::operator*=(const Series& o) { return *this = *this * o; }

bool operator==(const Series& a, const Series& b) { return a.order_ == b.order_ && a.terms_ == b.terms_; }

Series Series::substitute(ParameterId p, const Series& value) const {
    check_order(value);
    Series r(order_);
    std::vector<Series> powers{Series(Rational(1), order_)};
    for (const auto& [e, c] : terms_) {
        int k = e[p];
        if (k == 0) {
            r.add_term(e, c);
            continue;
        }
        while (static_cast<int>(powers.size()) <= k) powers.push_back(powers.back() * value);
        Exponents rest = e;
        rest.set(p, 0);
        r += monomial(c, rest, order_) * powers[k];
    }
    return r;
}

Series Series::cancel_inverse(ParameterId p, ParameterId inv) const {
    Series r(order_);
    for (const auto& [e, c] : terms_) {
        Exponents reduced = e;
        int common = std::min(e[p], e[inv]);
        reduced.set(p, e[p] - common);
        reduced.set(inv, e[inv] - common);
        r.add_term(reduced, c);
    }
    return r;
}

double Series::evaluate(std::span<const double> values) const {
    double total = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.get_d();
        for (std::size_t i = 0; i < kMaxParameters; ++i) {
            if (e.at(i) == 0) continue;
            double v = i < values.size() ? values[i] : 0.0;
            term *= std::pow(v, e.at(i));
        }
        total += term;
    }
    return total;
}

std::string Series::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational mag = abs(c);
        bool negative = c < 0;
        if (first)
            out << (negative ? "-" : "");
        else
            out << (negative ? " - " : " + ");
        first = false;
        std::ostringstream vars;
        bool any = false;
        for (std::size_t i = 0; i < kMaxParameters; ++i) {
            if (e.at(i) == 0) continue;
            if (any) vars << ' ';
            any = true;
            vars << parameter_name(ParameterId{static_cast<std::uint8_t>(i)});
            if (e.at(i) > 1) vars << '^' << e.at(i);
        }
        if (!any)
            out << mag.get_str();
        else if (mag == 1)
            out << vars.str();
        else
            out << mag.get_str() << " * " << vars.str();
    }
    return out.str();
}

Series pow(const Series& a, int k) {
    if (k < 0) throw std::invalid_argument("negative power");
    Series r(Rational(1), a.order());
    Series base = a;
    while (k > 0) {
        if (k & 1) r *= base;
        k >>= 1;
        if (k) base = base * base;
    }
    return r;
}

Series exp(const Series& a) {
    if (a.constant_term() != 0)
        throw NonNilpotentExponentError("exp of a series with nonzero constant term");
    auto coeffs = univariate::exp(a.order());
    return compose(coeffs, a);
}

Series compose(std::span<const Rational> outer, const Series& inner) {
    if (inner.constant_term() != 0)
        throw CompositionDomainError("composition requires an inner series with zero constant term");
    const int n = inner.order();
    Series result(inner.order());
    // Horner: c0 + x(c1 + x(c2 + ...))
    int top = std::min<int>(n, static_cast<int>(outer.size()) - 1);
    if (top < 0) return result;
    Series acc(outer[top], n);
    for (int k = top - 1; k >= 0; --k) acc = acc * inner + Series(outer[k], n);
    return acc;
}

Series primitive_part(const Series& s) {
    if (s.is_zero()) return s;
    mpz_class den_lcm = 1, num_gcd = 0;
    for (const auto& [e, c] : s.terms()) {
        mpz_class d = c.get_den();
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
    }
    for (const auto& [e, c] : s.terms()) {
        mpz_class n = c.get_num() * (den_lcm / c.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    if (s.terms().begin()->second < 0) scale = -scale;
    return s * scale;
}

namespace univariate {

namespace {
Rational factorial(int k) {
    mpz_class f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Rational(f);
}

Rational binomial_half(const Rational& a, int k) {
    // generalized binomial coefficient C(a, k)
    Rational r = 1;
    for (int i = 0; i < k; ++i) r *= (a - i) / Rational(i + 1);
    return r;
}
}  // namespace

std::vector<Rational> exp(int n) {
    std::vector<Rational> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = 1 / factorial(k);
    return c;
}

std::vector<Rational> sin(int n) {
    std::vector<Rational> c(n + 1, Rational(0));
    for (int k = 1; k <= n; k += 2) c[k] = Rational(((k - 1) / 2) % 2 == 0 ? 1 : -1) / factorial(k);
    return c;
}

std::vector<Rational> arcsin(int n) {
    // arcsin x = Σ (2j)! / (4^j (j!)^2 (2j+1)) x^(2j+1)
    std::vector<Rational> c(n + 1, Rational(0));
    for (int j = 0; 2 * j + 1 <= n; ++j) {
        Rational num = factorial(2 * j);
        Rational den = factorial(j) * factorial(j) * (2 * j + 1);
        mpz_class four_j = 1;
        for (int i = 0; i < j; ++i) four_j *= 4;
        c[2 * j + 1] = num / (den * Rational(four_j));
    }
    return c;
}

std::vector<Rational> arcsin_sqrt_over_sqrt(int n) {
    auto a = arcsin(2 * n + 1);
    std::vector<Rational> c(n + 1);
    for (int j = 0; j <= n; ++j) c[j] = a[2 * j + 1];
    return c;
}

std::vector<Rational> inv_sqrt_one_plus(int n) {
    std::vector<Rational> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = binomial_half(Rational(-1, 2), k);
    return c;
}

std::vector<Rational> inv_one_plus(int n) {
    std::vector<Rational> c(n + 1);
    for (int k = 0; k <= n; ++k) c[k] = Rational(k % 2 == 0 ? 1 : -1);
    return c;
}

}  // namespace univariate

}  // namespace galilei
