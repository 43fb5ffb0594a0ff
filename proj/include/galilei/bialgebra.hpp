#pragma once

// Lie bialgebra structures on the extended Galilei algebra: cocommutators,
// the cocycle condition, dual-Jacobi constraints, automorphism
// equivalences and coboundary (r-matrix) analysis.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "galilei/algebra.hpp"

namespace galilei {

class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Family { Trivial, Ia, IaStandard, IaNonstandard, Ib, IIa, IIb, General };

std::string family_name(Family f);
/// Accepts "Ia", "Ia-standard", "standard", "Ia-nonstandard", "nonstandard",
/// "Ib", "IIa", "IIb", "trivial", "none", "general" (case-insensitive).
std::optional<Family> parse_family(std::string_view name);

using ParameterValues = std::map<ParameterId, Rational>;

/// δ on the four generators; images are rank-2 tensors.
class Cocommutator {
public:
    explicit Cocommutator(int order);
    Cocommutator(std::array<TensorElement, 4> images);

    int order() const { return images_[0].order(); }
    const TensorElement& operator()(Generator g) const { return images_[index_of(g)]; }
    TensorElement& operator[](Generator g) { return images_[index_of(g)]; }
    bool is_zero() const;
    /// δ extended linearly to a linear combination of generators.
    TensorElement apply(const AlgebraElement& x) const;
    /// Coefficient of X_j ⊗ X_k (j < k) in δ(X_i).
    Series coefficient(Generator i, Generator j, Generator k) const;

    Cocommutator map_coefficients(const std::function<Series(const Series&)>& f) const;
    Cocommutator substitute(ParameterId p, const Series& value) const;
    Cocommutator substitute(const ParameterValues& values) const;

    friend bool operator==(const Cocommutator&, const Cocommutator&) = default;
    std::string to_string(Generator g) const;

private:
    std::array<TensorElement, 4> images_;
};

/// The general cocycle depending on ξ, ν, α, β1..β6.
Cocommutator nine_parameter_cocommutator(int order = kDefaultOrder);
/// Reduced cocommutator of a family in its own free parameters.
Cocommutator family_cocommutator(Family f, int order = kDefaultOrder);
/// The nine-parameter cocycle restricted by a family's defining
/// conditions, before any automorphism reduction.
Cocommutator family_unreduced(Family f, int order = kDefaultOrder);

// ---------------------------------------------------------------- cocycle

struct PairResidual {
    Generator x, y;
    TensorElement residual;
};

struct CocycleReport {
    std::vector<PairResidual> entries;
    bool passed() const;
};

/// δ([X,Y]) - [δX, Y⊗1 + 1⊗Y] - [X⊗1 + 1⊗X, δY] for all pairs X < Y.
CocycleReport cocycle_residual(const Cocommutator& delta, const CommutationTable& table);

/// Dual Lie brackets [x^j, x^k] = Σ_i c_i^{jk} x^i read off from δ. The
/// table uses lowercase generator names; Jacobi is not enforced.
CommutationTable dual_table(const Cocommutator& delta);

/// Content-free, deduplicated, sorted polynomial conditions whose vanishing
/// is equivalent to the Jacobi identity of the dual brackets. Throws
/// PreconditionError if δ is not a cocycle for `table`.
std::vector<Series> cojacobi_constraints(const Cocommutator& delta, const CommutationTable& table);

/// Canonical basis of the linear span of a constraint set: reduced row
/// echelon form over monomials, highest monomial first, each row made
/// content-free and the result sorted. Equal spans give equal bases.
std::vector<Series> canonical_basis(const std::vector<Series>& polys);

/// Constraints that do not vanish at the given numeric point.
std::vector<Series> violated_constraints(const std::vector<Series>& constraints, const ParameterValues& values);

/// Dual table; throws PreconditionError when the dual Jacobi identity fails.
CommutationTable dual_brackets(const Cocommutator& delta, const CommutationTable& table);

// ---------------------------------------------------------------- ansatz

struct AnsatzSolution {
    /// 24 unknowns f_i^{jk}: index 6*i + pair_index(j,k).
    int unknowns = 0;
    int equations = 0;
    std::vector<std::vector<Rational>> nullspace;
    /// Nine-parameter directions written in the same coordinates.
    std::vector<std::vector<Rational>> nine_parameter_directions;
    /// True when the nullspace equals the span of the nine directions.
    bool matches_nine_parameter = false;
};

/// Solves the cocycle condition for the generic skew ansatz δ(X_i) =
/// Σ_{j<k} f_i^{jk} X_j ∧ X_k over the rationals.
AnsatzSolution solve_cocycle_ansatz(const CommutationTable& table);

/// Row-reduced echelon form in place; returns the rank.
int rref(std::vector<std::vector<Rational>>& rows);
std::vector<std::vector<Rational>> nullspace(std::vector<std::vector<Rational>> rows, int columns);

// ---------------------------------------------------------------- automorphisms

/// K' = K + λ1 H + λ2 P + λ3 M, H' = H + λ4 P + λ5 M, P' = P + λ4 M, M' = M.
struct Automorphism {
    std::array<Series, 5> lambda;

    explicit Automorphism(int order);
    Automorphism(std::array<Series, 5> l) : lambda(std::move(l)) {}

    int order() const { return lambda[0].order(); }
    /// X' written in the old generators.
    AlgebraElement image(Generator g) const;
    /// Old generator X written in the new generators.
    AlgebraElement inverse_image(Generator g) const;
};

/// O([X,Y]) = [O X, O Y] for all pairs.
bool preserves_table(const Automorphism& phi, const CommutationTable& table);

/// δ'(X') = (O^{-1} ⊗ O^{-1}) δ(O X'); output legs are in the new basis.
/// Throws PreconditionError when phi does not preserve the table.
Cocommutator apply_automorphism(const Cocommutator& delta, const Automorphism& phi, const CommutationTable& table);
/// r' = (O^{-1} ⊗ O^{-1}) r.
TensorElement apply_automorphism(const TensorElement& r, const Automorphism& phi, const CommutationTable& table);

/// Inverse symbol for ν, α or ξ ("ν⁻¹", ...), interned on first use.
ParameterId inverse_symbol(ParameterId p);
/// Cancels p·p⁻¹ for every parameter whose inverse symbol was interned.
Series laurent_reduce(const Series& s);

// ---------------------------------------------------------------- coboundaries

/// r = a1 K∧P + a2 K∧M + a3 K∧H + a4 P∧M + a5 P∧H + a6 M∧H
///   + τ1 (P⊗P - M⊗H - H⊗M) + τ2 M⊗M + τ3 P∧M
struct RMatrixCandidate {
    std::array<Series, 6> a;
    std::array<Series, 3> tau;

    explicit RMatrixCandidate(int order);
    int order() const { return a[0].order(); }
    TensorElement tensor() const;
    /// Coefficients a1..a6 and τ1..τ3 as free symbols.
    static RMatrixCandidate symbolic(int order);
};

/// δ(X) = [X⊗1 + 1⊗X, r].
Cocommutator coboundary_delta(const TensorElement& r, const CommutationTable& table);

enum class MCYBEClass { Triangular, QuasiTriangular, Fails };
std::string mcybe_name(MCYBEClass c);

struct MCYBEReport {
    MCYBEClass classification = MCYBEClass::Fails;
    TensorElement schouten;
    /// [X⊗1⊗1 + 1⊗X⊗1 + 1⊗1⊗X, [[r,r]]] for each generator.
    std::array<TensorElement, 4> ad_residuals;
};

/// Triangular if [[r,r]] = 0, quasi-triangular if it is nonzero and
/// ad-invariant, fails otherwise. Coefficients must be numeric or the
/// classification refers to generic parameter values.
MCYBEReport mcybe_check(const TensorElement& r, const CommutationTable& table);

/// Standard r = ξ K∧P + β1 H∧M.
TensorElement standard_r(int order);
/// Non-standard r = β1 H∧M + β2 H∧P + β3 M∧K.
TensorElement nonstandard_r(int order);

// ---------------------------------------------------------------- classification

/// Family of the nine-parameter cocycle at a numeric point, or General if
/// the dual Jacobi constraints fail there.
Family identify_family(const ParameterValues& values);

/// Values of ξ, ν, α, β1..β6 reproducing a parameter-free cocommutator, or
/// nullopt if δ lies outside the nine-parameter family. Throws
/// PreconditionError if δ still depends on parameters.
std::optional<ParameterValues> nine_parameter_coordinates(const Cocommutator& delta);

/// For family Ia points with β4 = ξ and β5 = 0, the r-matrix
/// ξ K∧P - β3 K∧M - β2 P∧H - β1 M∧H generating δ.
std::optional<TensorElement> coboundary_r(const ParameterValues& values, int order);

}  // namespace galilei
