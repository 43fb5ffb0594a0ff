#pragma once

// PBW-ordered enveloping algebra on the generators {K, H, P, M} with a
// pluggable commutation table, together with rank-2/3 tensor products.
//
// Elements are maps from normal-ordered monomials K^a H^b P^c M^d to
// truncated deformation series. Products are computed by right-multiplying
// with one generator at a time and moving it left past larger generators
// with G_j G_i = G_i G_j - [G_i, G_j]. Monomial products are memoized in the
// table.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "galilei/scalars.hpp"

namespace galilei {

inline constexpr int kDefaultDegreeCap = 12;

class CapExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RankMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SkewnessError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Generator : std::uint8_t { K = 0, H = 1, P = 2, M = 3 };

inline constexpr std::array<Generator, 4> kGenerators{Generator::K, Generator::H, Generator::P, Generator::M};

inline int index_of(Generator g) { return static_cast<int>(g); }
/// "K", "H", "P", "M"; lowercase names when `dual` is set.
std::string generator_name(Generator g, bool dual = false);

struct Monomial {
    std::array<std::uint8_t, 4> e{0, 0, 0, 0};

    static Monomial identity() { return {}; }
    static Monomial of(Generator g, int power = 1);

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }
    bool is_identity() const { return degree() == 0; }
    int operator[](Generator g) const { return e[index_of(g)]; }
    /// Letters of the monomial in normal order.
    std::vector<Generator> letters() const;
    std::string to_string(bool dual = false) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
    /// Degree first, then K-exponent descending, etc.
    friend bool operator<(const Monomial& a, const Monomial& b);
};

class AlgebraElement {
public:
    using TermMap = std::map<Monomial, Series>;

    explicit AlgebraElement(int order = kDefaultOrder) : order_(order) {}

    static AlgebraElement scalar(const Series& s);
    static AlgebraElement scalar(const Rational& c, int order);
    static AlgebraElement generator(Generator g, int order);
    static AlgebraElement term(const Monomial& m, const Series& s);

    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Series coefficient(const Monomial& m) const;
    void add_term(const Monomial& m, const Series& s);
    int max_degree() const;
    /// Lowest parameter degree among all coefficients.
    std::optional<int> lowest_order() const;

    AlgebraElement operator-() const;
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    AlgebraElement& operator*=(const Series& s);
    AlgebraElement& operator*=(const Rational& c);
    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(AlgebraElement a, const Series& s) { return a *= s; }
    friend AlgebraElement operator*(const Series& s, AlgebraElement a) { return a *= s; }
    friend AlgebraElement operator*(AlgebraElement a, const Rational& c) { return a *= c; }
    friend AlgebraElement operator*(const Rational& c, AlgebraElement a) { return a *= c; }
    friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
        return a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    AlgebraElement substitute(ParameterId p, const Series& value) const;
    AlgebraElement map_coefficients(const std::function<Series(const Series&)>& f) const;
    AlgebraElement homogeneous_part(int d) const;
    /// All deformation parameters set to zero.
    AlgebraElement undeformed() const;

    std::string to_string(bool dual = false) const;

private:
    int order_;
    TermMap terms_;
};

/// Lie brackets [G_i, G_j] for i < j, expressed in PBW normal form.
class CommutationTable {
public:
    CommutationTable(std::string name, int order, std::array<AlgebraElement, 6> brackets,
                     int degree_cap = kDefaultDegreeCap, bool dual_names = false);

    static int pair_index(Generator a, Generator b);

    const std::string& name() const { return name_; }
    int order() const { return order_; }
    int degree_cap() const { return degree_cap_; }
    bool dual_names() const { return dual_names_; }

    /// [a, b] for any pair, using antisymmetry.
    AlgebraElement bracket(Generator a, Generator b) const;
    const std::array<AlgebraElement, 6>& brackets() const { return brackets_; }

    /// Memoized product of two normal-ordered monomials. The reference
    /// stays valid for the lifetime of the table.
    const AlgebraElement& multiply(const Monomial& a, const Monomial& b) const;

    CommutationTable substitute(ParameterId p, const Series& value) const;

private:
    AlgebraElement multiply_generator(const Monomial& m, Generator g) const;

    struct Cache {
        std::recursive_mutex mutex;
        std::map<std::pair<Monomial, Monomial>, AlgebraElement> products;
    };

    std::string name_;
    int order_;
    std::array<AlgebraElement, 6> brackets_;
    int degree_cap_;
    bool dual_names_;
    std::shared_ptr<Cache> cache_;
};

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b, const CommutationTable& table);
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b, const CommutationTable& table);
AlgebraElement power(const AlgebraElement& a, int k, const CommutationTable& table);

enum class SwapStrategy { Leftmost, Rightmost, Random };

/// Rewrites a word to PBW normal form by adjacent transpositions. This is an
/// independent route from `multiply`; the strategy selects which inversion
/// is resolved first.
AlgebraElement normal_order(std::span<const Generator> word, const Series& scalar, const CommutationTable& table,
                            SwapStrategy strategy = SwapStrategy::Leftmost, std::uint64_t seed = 0);

struct JacobiReport {
    struct Entry {
        std::array<Generator, 3> triple;
        AlgebraElement residual;
    };
    std::vector<Entry> entries;
    bool passed() const;
};

/// [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] for every generator triple.
JacobiReport verify_jacobi(const CommutationTable& table);

/// Σ_k coeffs[k] * scale^k * g^(k + shift); `scale` must have zero
/// constant term unless only finitely many coefficients are given.
AlgebraElement generator_function(Generator g, const Series& scale, std::span<const Rational> coeffs, int shift = 0);

// ---------------------------------------------------------------- tensors

class TensorElement {
public:
    using Key = std::array<Monomial, 3>;
    using TermMap = std::map<Key, Series>;

    TensorElement(int rank, int order);

    static TensorElement identity(int rank, int order);
    /// a_1 ⊗ a_2 (⊗ a_3).
    static TensorElement outer(std::span<const AlgebraElement> legs);
    static TensorElement outer(const AlgebraElement& a, const AlgebraElement& b);
    static TensorElement outer(const AlgebraElement& a, const AlgebraElement& b, const AlgebraElement& c);

    int rank() const { return rank_; }
    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Series coefficient(const Key& k) const;
    void add_term(const Key& k, const Series& s);
    std::optional<int> lowest_order() const;

    TensorElement operator-() const;
    TensorElement& operator+=(const TensorElement& o);
    TensorElement& operator-=(const TensorElement& o);
    TensorElement& operator*=(const Series& s);
    TensorElement& operator*=(const Rational& c);
    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }
    friend TensorElement operator*(TensorElement a, const Series& s) { return a *= s; }
    friend TensorElement operator*(const Series& s, TensorElement a) { return a *= s; }
    friend TensorElement operator*(TensorElement a, const Rational& c) { return a *= c; }
    friend TensorElement operator*(const Rational& c, TensorElement a) { return a *= c; }
    friend bool operator==(const TensorElement& a, const TensorElement& b) {
        return a.rank_ == b.rank_ && a.order_ == b.order_ && a.terms_ == b.terms_;
    }

    TensorElement substitute(ParameterId p, const Series& value) const;
    TensorElement map_coefficients(const std::function<Series(const Series&)>& f) const;
    TensorElement homogeneous_part(int d) const;
    TensorElement undeformed() const;

    /// Legs separated by " ⊗ ".
    std::string to_string(bool dual = false) const;

private:
    void check_compatible(const TensorElement& o) const;

    int rank_;
    int order_;
    TermMap terms_;
};

TensorElement tensor_multiply(const TensorElement& a, const TensorElement& b, const CommutationTable& table);
TensorElement tensor_commutator(const TensorElement& a, const TensorElement& b, const CommutationTable& table);

/// x ⊗ y - y ⊗ x (no 1/2).
TensorElement wedge(const AlgebraElement& x, const AlgebraElement& y);
/// Full antisymmetrization Σ_σ sgn(σ) x_σ1 ⊗ x_σ2 ⊗ x_σ3.
TensorElement wedge(const AlgebraElement& x, const AlgebraElement& y, const AlgebraElement& z);

/// σ(a ⊗ b) = b ⊗ a.
TensorElement flip(const TensorElement& t);
/// Rank-2 tensor placed on legs (i, j) of a rank-3 tensor, 0-based, i < j.
TensorElement embed(const TensorElement& r, int i, int j);
/// X ⊗ 1 + 1 ⊗ X (⊗ 1 ...) for the given rank.
TensorElement primitive(const AlgebraElement& x, int rank);

bool is_skew(const TensorElement& r);
/// [r12, r13] + [r12, r23] + [r13, r23]; throws SkewnessError for non-skew r.
TensorElement schouten(const TensorElement& r, const CommutationTable& table);

/// Linear map applied to one leg.
TensorElement map_leg(const TensorElement& t, int leg, const std::function<AlgebraElement(const Monomial&)>& f);
/// Replaces one leg by a rank-2 tensor, raising the rank by one.
TensorElement expand_leg(const TensorElement& t, int leg, const std::function<TensorElement(const Monomial&)>& f);
/// m(a ⊗ b) = a b, optionally after applying `left` to the first leg.
AlgebraElement contract(const TensorElement& t, const CommutationTable& table,
                        const std::function<AlgebraElement(const Monomial&)>& left = {},
                        const std::function<AlgebraElement(const Monomial&)>& right = {});

/// Σ A^k / k!; coefficients of A must have zero constant term.
TensorElement exp(const TensorElement& a, const CommutationTable& table);
/// Formal inverse of a tensor with unit leading term.
TensorElement inverse(const TensorElement& r, const CommutationTable& table);

}  // namespace galilei
