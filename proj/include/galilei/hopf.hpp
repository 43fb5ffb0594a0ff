#pragma once

// Quantum deformations of the extended Galilei algebra: coproducts from
// the Lyakhovsky-Mudrov matrix exponential, deformed commutation rules and
// Casimirs, Hopf axiom checks and universal R-matrices.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "galilei/bialgebra.hpp"

namespace galilei {

class NotImplementedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class CompletionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Coproduct = std::array<TensorElement, 4>;

/// Degree cap used by the quantum families. Memoized monomial products
/// carry deformed brackets to high powers of M before truncation, so this
/// is larger than the general default.
inline constexpr int kQuantumDegreeCap = 32;

/// Δ(X) = 1 ⊗ X + X ⊗ 1 for every generator.
Coproduct primitive_coproduct(int order);

/// Square matrix of mutually commuting algebra elements acting on the
/// listed generators (K, H, P for family I; K, M for family IIb).
struct LMMatrix {
    std::vector<Generator> generators;
    std::vector<std::vector<AlgebraElement>> entries;

    int order() const { return entries.at(0).at(0).order(); }
};

/// Matrix exponential Σ A^k/k! with entries multiplied in `table`.
/// Throws PreconditionError when two entries fail to commute.
std::vector<std::vector<AlgebraElement>> matrix_exponential(const LMMatrix& a, const CommutationTable& table);

/// Δ(X_i) = 1 ⊗ X_i + Σ_j X_j ⊗ E_ij with E = exp(A); generators outside
/// the matrix stay primitive.
Coproduct lm_coproduct(const LMMatrix& a, const CommutationTable& table);

/// Family Ia matrix in ξ, β1..β5 acting on (K, H, P).
LMMatrix family_ia_matrix(int order);
/// Family Ib matrix without the ν-terms.
LMMatrix ib_partial_matrix(int order);
/// Family IIb matrix acting on (K, M).
LMMatrix iib_matrix(int order);

/// Adds νP⊗He^{ξM} + (νβ3/2)P²⊗((e^{ξM}-1)/ξ)e^{ξM} to Δ(K) and checks
/// coassociativity; throws CompletionError if the result fails it.
Coproduct ib_coproduct_completion(const Coproduct& partial, const CommutationTable& table);

struct QuantumFamily {
    Family family;
    CommutationTable table;
    Coproduct coproduct;
    AlgebraElement c1;
    AlgebraElement c2;

    int order() const { return table.order(); }
    const TensorElement& delta(Generator g) const { return coproduct[index_of(g)]; }
};

/// Ia-standard, Ia-nonstandard, Ib or IIb. IIa throws NotImplementedError;
/// other tags throw PreconditionError.
QuantumFamily quantum_family(Family f, int order = kDefaultOrder, int degree_cap = kQuantumDegreeCap);

/// The undeformed algebra with the primitive coproduct and C2 = P² - 2MH.
QuantumFamily undeformed_family(int order = kDefaultOrder, int degree_cap = kQuantumDegreeCap);

/// Δ extended multiplicatively to a PBW element.
TensorElement apply_coproduct(const Coproduct& delta, const AlgebraElement& x, const CommutationTable& table);

// ---------------------------------------------------------------- checks

struct LabeledResidual {
    std::string label;
    TensorElement residual;
};

struct CheckReport {
    std::string name;
    std::vector<LabeledResidual> entries;
    bool passed() const;
};

/// Δ([X,Y]) - [Δ(X), Δ(Y)] for every pair X < Y.
CheckReport verify_homomorphism(const QuantumFamily& q);
CheckReport verify_homomorphism(const Coproduct& delta, const CommutationTable& table);
/// (Δ⊗id)Δ(X) - (id⊗Δ)Δ(X).
CheckReport verify_coassociativity(const Coproduct& delta, const CommutationTable& table);
/// (ε⊗id)Δ(X) - X and (id⊗ε)Δ(X) - X with ε(X) = 0.
CheckReport verify_counit(const Coproduct& delta);
/// [C_i, X] for each Casimir and generator.
CheckReport verify_casimirs(const QuantumFamily& q);
CheckReport verify_casimir(const AlgebraElement& c, const CommutationTable& table, const std::string& name = "C");

/// Antipode on generators obtained from m(S⊗id)Δ = ε by fixed-point
/// iteration in the deformation parameters.
std::array<AlgebraElement, 4> derive_antipode(const Coproduct& delta, const CommutationTable& table);
/// S extended as an anti-homomorphism.
AlgebraElement apply_antipode(const std::array<AlgebraElement, 4>& s, const Monomial& m, const CommutationTable& table);
/// m(S⊗id)Δ(X) and m(id⊗S)Δ(X) for every generator.
CheckReport verify_antipode(const Coproduct& delta, const std::array<AlgebraElement, 4>& s,
                            const CommutationTable& table);

/// First order of Δ(X) - σΔ(X) against δ(X).
CheckReport verify_semiclassical(const Coproduct& delta, const Cocommutator& delta_classical);

// ---------------------------------------------------------------- R-matrices

enum class RKind { Standard, Nonstandard };

struct UniversalR {
    RKind kind;
    TensorElement r;
};

/// exp(ξ K∧P f(M, ξ)) with f expanded over the commuting pair M⊗1, 1⊗M.
UniversalR build_standard_R(int order = kDefaultOrder);
/// e^{A3} e^{A2} e^{A1} in β1, β2, β3.
UniversalR build_nonstandard_R(int order = kDefaultOrder);

/// The three exponents A1, A2, A3 of the non-standard R-matrix.
std::array<TensorElement, 3> nonstandard_exponents(int order);

/// The quantum algebra an R-matrix belongs to: standard with β1 = 0, or
/// the full non-standard family.
QuantumFamily r_matrix_family(RKind kind, int order = kDefaultOrder, int degree_cap = kQuantumDegreeCap);

/// Zeroth order of R against 1⊗1 and first order against the classical
/// r-matrix (standard with β1 = 0, or non-standard).
CheckReport verify_r_semiclassical(const UniversalR& r);

/// R Δ(X) - σΔ(X) R for every generator.
CheckReport verify_intertwining(const UniversalR& r, const QuantumFamily& q);

/// Staged conjugations e^{A_k}(·)e^{-A_k} of the non-standard R-matrix
/// against their closed forms.
CheckReport verify_nonstandard_stages(const QuantumFamily& q);

struct QYBEReport {
    TensorElement residual;
    /// Lowest parameter degree with a nonzero coefficient.
    std::optional<int> lowest_order;
    /// Parameter monomials present at that degree.
    std::vector<std::string> leading_monomials;
};

/// R12 R13 R23 - R23 R13 R12.
QYBEReport qybe_residual(const TensorElement& r, const CommutationTable& table);

}  // namespace galilei
