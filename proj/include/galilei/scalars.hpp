#pragma once

// Truncated multivariate formal power series with exact rational
// coefficients. This is the scalar ring for every symbolic computation in
// the library: deformation parameters are the series variables, and all
// arithmetic is truncated at a fixed total degree.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace galilei {

using Rational = mpq_class;

inline constexpr int kDefaultOrder = 6;
inline constexpr std::size_t kMaxParameters = 32;

class OrderMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonNilpotentExponentError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class CompositionDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Index of a deformation parameter (series variable). The first nine are
/// fixed; further symbols can be interned at runtime by name.
struct ParameterId {
    std::uint8_t index = 0;
    friend bool operator==(ParameterId, ParameterId) = default;
    friend auto operator<=>(ParameterId, ParameterId) = default;
};

namespace param {
inline constexpr ParameterId xi{0};
inline constexpr ParameterId nu{1};
inline constexpr ParameterId alpha{2};
inline constexpr ParameterId beta1{3};
inline constexpr ParameterId beta2{4};
inline constexpr ParameterId beta3{5};
inline constexpr ParameterId beta4{6};
inline constexpr ParameterId beta5{7};
inline constexpr ParameterId beta6{8};
inline constexpr std::size_t kCoreCount = 9;
}  // namespace param

/// Returns the id for `name`, registering a new symbol if needed.
/// Throws std::length_error when the symbol table is full.
ParameterId intern_parameter(std::string_view name);
std::optional<ParameterId> find_parameter(std::string_view name);
std::string parameter_name(ParameterId id);
std::size_t parameter_count();

/// Dense exponent vector over all parameter slots.
class Exponents {
public:
    Exponents() { e_.fill(0); }
    static Exponents unit(ParameterId p, int power = 1);

    int operator[](ParameterId p) const { return e_[p.index]; }
    int at(std::size_t i) const { return e_[i]; }
    void set(ParameterId p, int power);
    int degree() const;
    bool is_zero() const { return degree() == 0; }

    Exponents operator+(const Exponents& o) const;

    friend bool operator==(const Exponents&, const Exponents&) = default;
    /// Graded-lexicographic: lower total degree first, then larger exponent
    /// in the lower-indexed parameter first.
    friend bool graded_lex_less(const Exponents& a, const Exponents& b);

private:
    std::array<std::uint8_t, kMaxParameters> e_;
};

struct GradedLex {
    bool operator()(const Exponents& a, const Exponents& b) const { return graded_lex_less(a, b); }
};

class Series {
public:
    using TermMap = std::map<Exponents, Rational, GradedLex>;

    explicit Series(int order = kDefaultOrder);
    Series(const Rational& c, int order);

    static Series constant(const Rational& c, int order) { return Series(c, order); }
    static Series variable(ParameterId p, int order);
    static Series monomial(const Rational& c, const Exponents& e, int order);

    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const;
    Rational constant_term() const;
    Rational coefficient(const Exponents& e) const;
    /// Lowest total degree carrying a nonzero coefficient; nullopt for 0.
    std::optional<int> lowest_degree() const;
    bool depends_on(ParameterId p) const;

    /// Terms of total degree exactly d (same truncation order).
    Series homogeneous_part(int d) const;
    /// Re-truncate at a lower order M <= order().
    Series truncated(int m) const;
    /// Same terms, higher truncation order. Only valid when no information
    /// has been lost, i.e. the caller knows the value is exact.
    Series with_order(int m) const;

    Series operator-() const;
    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    Series& operator*=(const Series& o);
    Series& operator*=(const Rational& c);
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator*(Series a, const Rational& c) { return a *= c; }
    friend Series operator*(const Rational& c, Series a) { return a *= c; }
    friend bool operator==(const Series& a, const Series& b);

    /// Replace every occurrence of `p` by `value`.
    Series substitute(ParameterId p, const Series& value) const;
    /// Apply p * inv -> 1 in every monomial (Laurent reduction).
    Series cancel_inverse(ParameterId p, ParameterId inv) const;
    /// Numeric evaluation; `values` is indexed by parameter slot.
    double evaluate(std::span<const double> values) const;

    /// "c * ξ^a ν^b + ..." in graded-lex order.
    std::string to_string() const;

private:
    void check_order(const Series& o) const;
    void add_term(const Exponents& e, const Rational& c);

    int order_;
    TermMap terms_;
};

Series pow(const Series& a, int k);

/// Σ_{k<=N} a^k / k!; requires a zero constant term.
Series exp(const Series& a);

/// Formal composition Σ outer[k] * inner^k truncated at inner.order().
/// `inner` must have zero constant term.
Series compose(std::span<const Rational> outer, const Series& inner);

/// Content-free form: integer coefficients with gcd 1 and positive leading
/// (graded-lex smallest) coefficient.
Series primitive_part(const Series& s);

/// Univariate coefficient sequences c[0..n] for composition.
namespace univariate {
std::vector<Rational> exp(int n);
std::vector<Rational> sin(int n);
std::vector<Rational> arcsin(int n);
/// arcsin(√z)/√z as a series in z.
std::vector<Rational> arcsin_sqrt_over_sqrt(int n);
/// (1+u)^(-1/2)
std::vector<Rational> inv_sqrt_one_plus(int n);
/// (1+u)^(-1)
std::vector<Rational> inv_one_plus(int n);
}  // namespace univariate

}  // namespace galilei
