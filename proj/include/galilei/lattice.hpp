#pragma once

// Differential-difference realization of the IIb quantum algebra on a
// uniform 1-D grid and the space-discretized heat-Schrödinger equation
//   {(sinh(α∂/4)/(α/4))² - 2m∂_t} Ψ = 0.
// The grid spacing is h = α/(2r) for a positive integer r, so every shift
// e^{±α∂/2} moves by exactly r nodes.

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

namespace galilei::lattice {

using cplx = std::complex<double>;
using Field = std::vector<cplx>;

inline constexpr std::int64_t kMaxNodes = std::int64_t{1} << 22;

class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Boundary { Periodic, Dirichlet };
enum class Mode { Heat, Schrodinger };
enum class Scheme { Exact, CrankNicolson, Explicit };

struct Grid {
    double alpha = 1;
    /// α/(2h); shifts by α/2 are `ratio` nodes.
    int ratio = 1;
    std::int64_t nodes = 0;
    Boundary boundary = Boundary::Periodic;

    double spacing() const { return alpha / (2.0 * ratio); }
    double length() const { return spacing() * static_cast<double>(nodes); }
    /// Nodes are centred: x_j = (j - nodes/2) h.
    double x(std::int64_t j) const { return spacing() * static_cast<double>(j - nodes / 2); }
    /// Angular wavenumber of FFT bin n on the periodic grid.
    double wavenumber(std::int64_t n) const;
};

/// Grid of about `length` with spacing α/(2·ratio). Throws
/// std::invalid_argument for α ≤ 0, ratio < 1, fewer than 4·ratio nodes or
/// more than kMaxNodes.
Grid make_grid(double alpha, double length, int ratio = 1, Boundary boundary = Boundary::Periodic);
/// Grid from an explicit spacing; throws std::invalid_argument unless α/(2h)
/// is a positive integer.
Grid grid_from_spacing(double alpha, double spacing, std::int64_t nodes, Boundary boundary = Boundary::Periodic);

struct LatticeField {
    Grid grid;
    double mass = 1;
    double time = 0;
    Field values;
};

/// Throws std::invalid_argument on a size mismatch, m ≤ 0 or non-finite values.
void validate(const LatticeField& f);

/// -(sin(kα/4)/(α/4))², the plane-wave multiplier of the deformed Laplacian.
double symbol(double alpha, double k);

// ---------------------------------------------------------------- operators

/// (e^{s h ∂}Ψ)_j = Ψ_{j+s}; zero outside a Dirichlet grid.
Field shift(const Grid& g, const Field& psi, std::int64_t steps);
/// (4/α²)(Ψ_{j+r} - 2Ψ_j + Ψ_{j-r}).
Field deformed_laplacian(const Grid& g, const Field& psi);
Eigen::SparseMatrix<double> laplacian_matrix(const Grid& g);

/// Multiplier f(k) applied through FFTW; periodic grids only.
Field fourier_multiply(const Grid& g, const Field& psi, const std::function<cplx(double)>& f);
/// Spectral ∂ with the Nyquist bin removed.
Field spectral_derivative(const Grid& g, const Field& psi);

/// P = ∂, M = m e^{-α∂/2}, K = -τ(1 - e^{-α∂})/α - m x e^{-α∂/2}, with
/// the multiplication by x applied after the shift. τ = t in heat mode and
/// τ = i t in Schrödinger mode, where H = ∂_τ.
Field apply_p(const Grid& g, const Field& psi);
Field apply_m(const Grid& g, double mass, const Field& psi);
Field apply_k(const Grid& g, double mass, double t, const Field& psi, Mode mode = Mode::Heat);
/// (1 - e^{-α∂})/α as a difference.
Field apply_d(const Grid& g, const Field& psi);

// ---------------------------------------------------------------- evolution

struct HSEOptions {
    Mode mode = Mode::Heat;
    Scheme scheme = Scheme::CrankNicolson;
    double t_end = 1;
    double dt = 1e-2;
    /// Number of equally spaced snapshots after t = 0 (the last is t_end).
    int snapshots = 1;
};

/// ∂_tΨ = c LΨ/(2m) with c = 1 (heat) or i (Schrödinger). The first
/// snapshot is the initial field. Explicit stepping throws StabilityError
/// when the norm grows.
std::vector<LatticeField> solve_hse(const LatticeField& initial, const HSEOptions& options);

/// e^{c t L/(2m)} applied exactly: FFT on periodic grids, DST-I on
/// Dirichlet grids with ratio 1.
Field evolve_exact(const Grid& g, double mass, Mode mode, const Field& psi, double t);

// ---------------------------------------------------------------- checks

struct Deviation {
    std::string name;
    double deviation = 0;
    double tolerance = 0;
    bool passed() const { return deviation <= tolerance; }
};

/// Largest |(LΨ)_j - λ(k)Ψ_j| / (4/α²) over every grid mode Ψ = e^{ikx}.
double plane_wave_deviation(const Grid& g);
/// Largest |L - L^T| entry.
double laplacian_asymmetry(const Grid& g);

struct SymmetryReport {
    /// Algebra relations and Casimirs as operator identities on the grid.
    std::vector<Deviation> identities;
    /// g(t)U Ψ0 against U g(0)Ψ0 for g = P, M, K.
    std::vector<Deviation> commuting;
    bool passed() const;
};

/// Periodic grids only; throws std::invalid_argument otherwise.
SymmetryReport verify_symmetry(const LatticeField& initial, const HSEOptions& options);

/// e^{-x²/(2σ²)} sampled on the grid.
Field gaussian(const Grid& g, double sigma);
/// Continuum solution of ∂_x²Ψ = 2m c⁻¹∂_tΨ from the same Gaussian.
cplx continuum_gaussian(double x, double t, double sigma, double mass, Mode mode);

/// Grid-free bound on max_j |Ψ_lattice - Ψ_continuum| for Gaussian data,
/// from the difference of the two multipliers over the Gaussian spectrum.
double continuum_deviation_bound(double alpha, double sigma, double mass, double t, Mode mode);

struct ConvergenceStudy {
    std::vector<double> alphas;
    std::vector<double> errors;
    /// log2 of successive error ratios.
    std::vector<double> exponents;
};

/// Exact lattice evolution of Gaussian data against the continuum solution
/// for α, α/2, ..., measured on the coarsest nodes.
ConvergenceStudy convergence_study(double alpha, int levels, double mass, double length, double sigma, double t,
                                   Mode mode = Mode::Heat, int ratio = 1);

const char* mode_name(Mode m);
const char* scheme_name(Scheme s);
const char* boundary_name(Boundary b);

}  // namespace galilei::lattice
