#pragma once

// Commutation tables of the undeformed extended Galilei algebra and of its
// quantum deformations, plus the one-generator functions that appear in
// them. Functions such as (e^{2ξM}-1)/(2ξ) are stored as polynomials in the
// generator with the division already carried out.

#include "galilei/algebra.hpp"

namespace galilei {

/// e^{s·g} = Σ s^k g^k / k!
AlgebraElement exp_of(Generator g, const Series& s);
/// (e^{s·g} - 1)/s = Σ_{k>=1} s^{k-1} g^k / k!
AlgebraElement expm1_over(Generator g, const Series& s);
/// ((e^{s·g} - 1)/s)^2
AlgebraElement expm1_over_squared(Generator g, const Series& s);
/// sinh(s·g)/s = Σ s^{2k} g^{2k+1} / (2k+1)!
AlgebraElement sinh_over(Generator g, const Series& s);

/// [K,H]=P, [K,P]=M, all other brackets zero.
CommutationTable undeformed_table(int order = kDefaultOrder, int degree_cap = kDefaultDegreeCap);
/// [K,P] = (e^{2ξM}-1)/(2ξ).
CommutationTable standard_table(int order = kDefaultOrder, int degree_cap = kDefaultDegreeCap);
/// [K,H] = P + (β3/2) M^2.
CommutationTable nonstandard_table(int order = kDefaultOrder, int degree_cap = kDefaultDegreeCap);
/// [K,H] = P + (β3/2)((e^{ξM}-1)/ξ)^2, [K,P] = (e^{2ξM}-1)/(2ξ).
CommutationTable ib_table(int order = kDefaultOrder, int degree_cap = kDefaultDegreeCap);
/// [K,H] = (1-e^{-αP})/α, [K,P] = M, [M,K] = αM^2/2.
CommutationTable iib_table(int order = kDefaultOrder, int degree_cap = kDefaultDegreeCap);

}  // namespace galilei
