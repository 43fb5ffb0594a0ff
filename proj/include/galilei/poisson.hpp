#pragma once

// Poisson-coalgebra phase-space realizations of the deformed extended
// Galilei algebras and the integrable N-particle systems they generate.
// Derivatives come from forward-mode dual numbers.

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <unsupported/Eigen/AutoDiff>

#include "galilei/bialgebra.hpp"

namespace galilei::poisson {

/// Up to 8 particles, i.e. 16 phase-space coordinates.
inline constexpr int kMaxParticles = 8;

using Gradient = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 2 * kMaxParticles, 1>;
using Dual = Eigen::AutoDiffScalar<Gradient>;

/// A function on phase space; coordinates are (q_1..q_N, p_1..p_N).
using PhaseFunction = std::function<Dual(std::span<const Dual>)>;

class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BlowUpError : public std::runtime_error {
public:
    BlowUpError(const std::string& what, double last_valid_time)
        : std::runtime_error(what), last_valid_time(last_valid_time) {}
    double last_valid_time;
};

struct Deformation {
    double xi = 0, nu = 0, alpha = 0, beta1 = 0, beta2 = 0, beta3 = 0;
};

/// (e^{x v} - 1)/x, switching to a 4-term Taylor series when |x v| < 1e-6.
double deformed_mass(double x, double m);
Dual deformed_mass(double x, const Dual& v);

/// Values of the four generators on phase space.
template <class T>
struct Generators {
    T k, h, p, m;
};

/// One- and many-particle realizations for the undeformed algebra
/// (Family::Trivial), Ia-standard, Ia-nonstandard, Ib and IIb.
class PhaseRealization {
public:
    PhaseRealization(Family family, Deformation params, std::vector<double> masses);

    Family family() const { return family_; }
    const Deformation& params() const { return params_; }
    const std::vector<double>& masses() const { return masses_; }
    int particles() const { return static_cast<int>(masses_.size()); }

    Generators<Dual> one_particle(int i, const Dual& q, const Dual& p) const;
    /// (D⊗D)Δ evaluated on two groups of particles.
    Generators<Dual> combine(const Generators<Dual>& a, const Generators<Dual>& b) const;
    /// Left-nested coproduct over particles 1..k.
    Generators<Dual> compose(std::span<const Dual> z, int k) const;

    Dual casimir1(const Generators<Dual>& v) const;
    Dual casimir2(const Generators<Dual>& v) const;

    /// f_X^{(k)} as a phase function.
    PhaseFunction generator_function(Generator g, int k) const;
    /// C_i^{(k)} as a phase function, i = 1 or 2.
    PhaseFunction casimir_function(int i, int k) const;

    /// The family's deformed Poisson bracket {X, Y} written in the
    /// generator values.
    double deformed_bracket(Generator x, Generator y, const Generators<double>& v) const;

private:
    Family family_;
    Deformation params_;
    std::vector<double> masses_;
};

/// Two-particle C2 exactly as tabulated; it depends on the momenta only.
double tabulated_casimir2(const PhaseRealization& r, double p1, double p2);

// ---------------------------------------------------------------- calculus

double value(const PhaseFunction& f, std::span<const double> z);
Eigen::VectorXd gradient(const PhaseFunction& f, std::span<const double> z);
/// Σ ∂F/∂q_i ∂G/∂p_i - ∂F/∂p_i ∂G/∂q_i; throws EvaluationError when not finite.
double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, std::span<const double> z);
/// |{F,G}| divided by Σ |∂F/∂q_i ∂G/∂p_i| + |∂F/∂p_i ∂G/∂q_i|.
double relative_bracket(const PhaseFunction& f, const PhaseFunction& g, std::span<const double> z);

// ---------------------------------------------------------------- systems

struct Potential {
    std::string name;
    std::function<Dual(const Dual&)> f;
};

Potential harmonic_potential();
Potential exponential_potential();
Potential monomial_potential(int k);
Potential zero_potential();
/// "harmonic", "exponential", "monomial:<k>" or "none".
std::optional<Potential> find_potential(std::string_view name);
/// Throws std::invalid_argument when F or F' is not finite on [-2, 2].
void check_potential(const Potential& f);

struct HamiltonianSystem {
    PhaseRealization realization;
    Potential potential;
    /// H^{(N)} = f_H^{(N)} + F(f_K^{(N)}).
    PhaseFunction hamiltonian;
    /// C_1^{(N)} followed by C_2^{(2)} .. C_2^{(N)}.
    std::vector<PhaseFunction> integrals;
    std::vector<std::string> integral_names;

    int particles() const { return realization.particles(); }
};

HamiltonianSystem build_hamiltonian(const PhaseRealization& r, const Potential& f);

struct InvolutionEntry {
    std::string pair;
    double max_relative = 0;
};

struct InvolutionReport {
    std::vector<InvolutionEntry> entries;
    int points = 0;
    double max_relative() const;
};

/// {H, C2^{(k)}} and {C2^{(k)}, C2^{(l)}} at `points` random points.
InvolutionReport certify_involution(const HamiltonianSystem& s, int points, std::uint64_t seed);

enum class Integrator { RK4, Midpoint };

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    /// Per step: H followed by each integral.
    std::vector<std::vector<double>> conserved;

    /// max |value - initial| / max(|initial|, 1e-300) for column `i` of
    /// `conserved`.
    double relative_drift(std::size_t i) const;
};

Trajectory integrate(const HamiltonianSystem& s, std::vector<double> z0, double t_end, double dt,
                     Integrator method = Integrator::RK4);

/// Hamiltonian vector field (∂H/∂p, -∂H/∂q).
std::vector<double> vector_field(const HamiltonianSystem& s, std::span<const double> z);

}  // namespace galilei::poisson
