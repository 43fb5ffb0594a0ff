#include "galilei/poisson.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include <boost/numeric/odeint.hpp>

namespace galilei::poisson {

namespace {

constexpr double kTaylorThreshold = 1e-6;

Dual constant(double x) { return Dual(x); }

template <class T>
T sinh_over(double s, const T& x) {
    using std::sinh;
    if (s == 0) return x;
    return sinh(x * s) / s;
}

std::vector<Dual> seeded(std::span<const double> z) {
    const int n = static_cast<int>(z.size());
    std::vector<Dual> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) v.emplace_back(z[i], n, i);
    return v;
}

void check_particles(int k, int n) {
    if (k < 1 || k > n) throw std::invalid_argument("particle count out of range");
}

}  // namespace

double deformed_mass(double x, double m) {
    if (std::abs(x * m) < kTaylorThreshold) return m + x * m * m / 2 + x * x * m * m * m / 6 + x * x * x * m * m * m * m / 24;
    return std::expm1(x * m) / x;
}

Dual deformed_mass(double x, const Dual& v) {
    if (std::abs(x * v.value()) < kTaylorThreshold)
        return v + v * v * (x / 2) + v * v * v * (x * x / 6) + v * v * v * v * (x * x * x / 24);
    using std::exp;
    return (exp(v * x) - 1.0) / x;
}

// ---------------------------------------------------------------- realization

PhaseRealization::PhaseRealization(Family family, Deformation params, std::vector<double> masses)
    : family_(family), params_(params), masses_(std::move(masses)) {
    switch (family_) {
        case Family::Trivial:
        case Family::IaStandard:
        case Family::IaNonstandard:
        case Family::Ib:
        case Family::IIb: break;
        default: throw std::invalid_argument("no phase-space realization for family " + family_name(family_));
    }
    if (masses_.empty() || static_cast<int>(masses_.size()) > kMaxParticles)
        throw std::invalid_argument("particle count must be between 1 and " + std::to_string(kMaxParticles));
    for (double m : masses_)
        if (!(m > 0) || !std::isfinite(m)) throw std::invalid_argument("masses must be positive");
    if (family_ == Family::IIb && params_.alpha == 0) throw std::invalid_argument("family IIb needs alpha != 0");
}

Generators<Dual> PhaseRealization::one_particle(int i, const Dual& q, const Dual& p) const {
    const double m = masses_.at(i);
    const auto& d = params_;
    using std::exp;
    switch (family_) {
        case Family::IaStandard: {
            const double m2 = deformed_mass(2 * d.xi, m);
            return {q * m2, p * p / (2 * m2), p, constant(m)};
        }
        case Family::IaNonstandard:
            return {q * m, p * p / (2 * m), p - d.beta3 / 2 * m * m, constant(m)};
        case Family::Ib: {
            const double m2 = deformed_mass(2 * d.xi, m), m1 = deformed_mass(d.xi, m);
            return {q * m2, p * p / (2 * m2), p - d.beta3 / 2 * m1 * m1, constant(m)};
        }
        case Family::IIb: {
            Dual e = exp(p * (-d.alpha / 2));
            Dual s = sinh_over(d.alpha / 4, p);
            return {e * q * m, s * s / (2 * m), p, e * m};
        }
        default: return {q * m, p * p / (2 * m), p, constant(m)};
    }
}

Generators<Dual> PhaseRealization::combine(const Generators<Dual>& a, const Generators<Dual>& b) const {
    const auto& d = params_;
    using std::exp;
    switch (family_) {
        case Family::IaStandard: {
            Dual e = exp(b.m * d.xi);
            return {b.k + a.k * e + a.p * b.m * e * d.beta1, a.h + b.h, b.p + a.p * e, a.m + b.m};
        }
        case Family::IaNonstandard:
            return {a.k + b.k + a.p * b.m * d.beta1 + a.h * b.m * d.beta2 + a.p * b.m * b.m * (d.beta2 * d.beta3 / 2),
                    a.h + b.h + a.p * b.m * d.beta3, a.p + b.p, a.m + b.m};
        case Family::Ib: {
            Dual e = exp(b.m * d.xi);
            Dual k = b.k + a.k * e + a.p * b.h * e * d.nu +
                     a.p * a.p * deformed_mass(d.xi, b.m) * e * (d.nu * d.beta3 / 2);
            return {k, a.h + b.h + a.p * deformed_mass(d.xi, b.m) * d.beta3, b.p + a.p * e, a.m + b.m};
        }
        case Family::IIb: {
            Dual e = exp(b.p * -d.alpha);
            return {b.k + a.k * e - a.m * (b.p * d.beta1 + b.h * d.beta2) * e, a.h + b.h, a.p + b.p, b.m + a.m * e};
        }
        default: return {a.k + b.k, a.h + b.h, a.p + b.p, a.m + b.m};
    }
}

Generators<Dual> PhaseRealization::compose(std::span<const Dual> z, int k) const {
    const int n = particles();
    check_particles(k, n);
    if (static_cast<int>(z.size()) != 2 * n) throw std::invalid_argument("phase point has the wrong dimension");
    Generators<Dual> v = one_particle(0, z[0], z[n]);
    for (int i = 1; i < k; ++i) v = combine(v, one_particle(i, z[i], z[n + i]));
    return v;
}

Dual PhaseRealization::casimir1(const Generators<Dual>& v) const {
    using std::exp;
    if (family_ == Family::IIb) return exp(v.p * (params_.alpha / 2)) * v.m;
    return v.m;
}

Dual PhaseRealization::casimir2(const Generators<Dual>& v) const {
    const auto& d = params_;
    using std::exp;
    switch (family_) {
        case Family::IaStandard: return v.p * v.p - deformed_mass(2 * d.xi, v.m) * v.h * 2.0;
        case Family::IaNonstandard: {
            Dual s = v.p + v.m * v.m * (d.beta3 / 2);
            return s * s - v.m * v.h * 2.0;
        }
        case Family::Ib: {
            Dual m1 = deformed_mass(d.xi, v.m);
            Dual s = v.p + m1 * m1 * (d.beta3 / 2);
            return s * s - deformed_mass(2 * d.xi, v.m) * v.h * 2.0;
        }
        case Family::IIb: {
            Dual s = sinh_over(d.alpha / 4, v.p);
            return s * s - exp(v.p * (d.alpha / 2)) * v.m * v.h * 2.0;
        }
        default: return v.p * v.p - v.m * v.h * 2.0;
    }
}

PhaseFunction PhaseRealization::generator_function(Generator g, int k) const {
    check_particles(k, particles());
    return [self = *this, g, k](std::span<const Dual> z) {
        auto v = self.compose(z, k);
        switch (g) {
            case Generator::K: return v.k;
            case Generator::H: return v.h;
            case Generator::P: return v.p;
            default: return v.m;
        }
    };
}

PhaseFunction PhaseRealization::casimir_function(int i, int k) const {
    check_particles(k, particles());
    if (i != 1 && i != 2) throw std::invalid_argument("Casimir index must be 1 or 2");
    return [self = *this, i, k](std::span<const Dual> z) {
        auto v = self.compose(z, k);
        return i == 1 ? self.casimir1(v) : self.casimir2(v);
    };
}

double PhaseRealization::deformed_bracket(Generator x, Generator y, const Generators<double>& v) const {
    if (x == y) return 0;
    if (index_of(x) > index_of(y)) return -deformed_bracket(y, x, v);
    const auto& d = params_;
    if (x == Generator::K && y == Generator::H) {
        switch (family_) {
            case Family::IaNonstandard: return v.p + d.beta3 / 2 * v.m * v.m;
            case Family::Ib: {
                double m1 = deformed_mass(d.xi, v.m);
                return v.p + d.beta3 / 2 * m1 * m1;
            }
            case Family::IIb: return -std::expm1(-d.alpha * v.p) / d.alpha;
            default: return v.p;
        }
    }
    if (x == Generator::K && y == Generator::P) {
        if (family_ == Family::IaStandard || family_ == Family::Ib) return deformed_mass(2 * d.xi, v.m);
        return v.m;
    }
    if (x == Generator::K && y == Generator::M && family_ == Family::IIb) return -d.alpha / 2 * v.m * v.m;
    return 0;
}

double tabulated_casimir2(const PhaseRealization& r, double p1, double p2) {
    if (r.particles() < 2) throw std::invalid_argument("two particles needed");
    const double m1 = r.masses()[0], m2 = r.masses()[1];
    const auto& d = r.params();
    switch (r.family()) {
        case Family::IaStandard: {
            const double a = deformed_mass(2 * d.xi, m2) * p1 - deformed_mass(2 * d.xi, m1) * std::exp(d.xi * m2) * p2;
            return -a * a / (deformed_mass(2 * d.xi, m1) * deformed_mass(2 * d.xi, m2));
        }
        case Family::IaNonstandard: {
            const double a = m2 * p1 - m1 * p2;
            return -a * a / (m1 * m2) + 2 * d.beta3 * m2 * (m1 * p2 - m2 * p1) +
                   d.beta3 * d.beta3 * m1 * m1 * m2 * (m1 + 2 * m2);
        }
        case Family::Ib: {
            const double x = d.xi;
            const double a1 = deformed_mass(x, m1), a2 = deformed_mass(x, m2);
            const double b1 = deformed_mass(2 * x, m1), b2 = deformed_mass(2 * x, m2);
            const double a = b2 * p1 - b1 * std::exp(x * m2) * p2;
            const double brace = a2 * (2 + x * a1) * (2 + x * a1) * (1 + x * a2) * (1 + x * a2) + 4 * b1 + 4 * b2 +
                                 8 * x * b1 * b2;
            return -a * a / (b1 * b2) - 2 * d.beta3 * a2 * a + d.beta3 * d.beta3 / 4 * a1 * a1 * a2 * brace;
        }
        case Family::IIb: {
            const double s1 = sinh_over(d.alpha / 4, p1), s2 = sinh_over(d.alpha / 4, p2);
            const double a = m2 * s1 * std::exp(d.alpha * p1 / 4) - m1 * s2 * std::exp(-d.alpha * p2 / 4);
            return -a * a / (m1 * m2);
        }
        default: {
            const double a = m2 * p1 - m1 * p2;
            return -a * a / (m1 * m2);
        }
    }
}

// ---------------------------------------------------------------- calculus

double value(const PhaseFunction& f, std::span<const double> z) {
    std::vector<Dual> v(z.begin(), z.end());
    return f(v).value();
}

Eigen::VectorXd gradient(const PhaseFunction& f, std::span<const double> z) {
    auto v = seeded(z);
    Dual r = f(v);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(z.size()));
    if (r.derivatives().size() == g.size()) g = r.derivatives();
    return g;
}

namespace {

struct BracketParts {
    double value = 0, scale = 0;
};

BracketParts bracket_parts(const PhaseFunction& f, const PhaseFunction& g, std::span<const double> z) {
    if (z.size() % 2 != 0) throw std::invalid_argument("phase point must have even dimension");
    const std::size_t n = z.size() / 2;
    auto df = gradient(f, z), dg = gradient(g, z);
    BracketParts b;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = df[i] * dg[n + i], y = df[n + i] * dg[i];
        b.value += x - y;
        b.scale += std::abs(x) + std::abs(y);
    }
    if (!std::isfinite(b.value)) throw EvaluationError("Poisson bracket is not finite");
    return b;
}

}  // namespace

double poisson_bracket(const PhaseFunction& f, const PhaseFunction& g, std::span<const double> z) {
    return bracket_parts(f, g, z).value;
}

double relative_bracket(const PhaseFunction& f, const PhaseFunction& g, std::span<const double> z) {
    auto b = bracket_parts(f, g, z);
    return b.scale == 0 ? std::abs(b.value) : std::abs(b.value) / b.scale;
}

// ---------------------------------------------------------------- potentials

Potential harmonic_potential() {
    return {"harmonic", [](const Dual& u) { return u * u / 2.0; }};
}

Potential exponential_potential() {
    return {"exponential", [](const Dual& u) {
                using std::exp;
                return exp(u);
            }};
}

Potential monomial_potential(int k) {
    if (k < 1) throw std::invalid_argument("monomial potential needs k >= 1");
    return {"monomial:" + std::to_string(k), [k](const Dual& u) {
                Dual r = u;
                for (int i = 1; i < k; ++i) r = r * u;
                return r;
            }};
}

Potential zero_potential() {
    return {"none", [](const Dual& u) { return u * 0.0; }};
}

std::optional<Potential> find_potential(std::string_view name) {
    if (name == "harmonic") return harmonic_potential();
    if (name == "exponential") return exponential_potential();
    if (name == "none" || name == "zero") return zero_potential();
    if (name.starts_with("monomial:")) {
        int k = 0;
        auto rest = name.substr(9);
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), k);
        if (ec == std::errc() && ptr == rest.data() + rest.size() && k >= 1) return monomial_potential(k);
    }
    return std::nullopt;
}

void check_potential(const Potential& f) {
    for (double u = -2; u <= 2; u += 0.25) {
        Dual x(u, 1, 0);
        Dual r = f.f(x);
        if (!std::isfinite(r.value()) || r.derivatives().size() != 1 || !std::isfinite(r.derivatives()[0]))
            throw std::invalid_argument("potential '" + f.name + "' is not differentiable at " + std::to_string(u));
    }
}

// ---------------------------------------------------------------- systems

HamiltonianSystem build_hamiltonian(const PhaseRealization& r, const Potential& f) {
    check_potential(f);
    const int n = r.particles();
    HamiltonianSystem s{r, f, {}, {}, {}};
    s.hamiltonian = [r, f, n](std::span<const Dual> z) {
        auto v = r.compose(z, n);
        return v.h + f.f(v.k);
    };
    s.integrals.push_back(r.casimir_function(1, n));
    s.integral_names.push_back("C1^(" + std::to_string(n) + ")");
    for (int k = 2; k <= n; ++k) {
        s.integrals.push_back(r.casimir_function(2, k));
        s.integral_names.push_back("C2^(" + std::to_string(k) + ")");
    }
    return s;
}

double InvolutionReport::max_relative() const {
    double m = 0;
    for (const auto& e : entries) m = std::max(m, e.max_relative);
    return m;
}

InvolutionReport certify_involution(const HamiltonianSystem& s, int points, std::uint64_t seed) {
    const int n = s.particles();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<std::vector<double>> pts(points, std::vector<double>(2 * n));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);

    InvolutionReport report;
    report.points = points;
    auto measure = [&](const std::string& label, const PhaseFunction& f, const PhaseFunction& g) {
        InvolutionEntry e{label, 0};
        for (const auto& p : pts) e.max_relative = std::max(e.max_relative, relative_bracket(f, g, p));
        report.entries.push_back(e);
    };
    for (std::size_t i = 1; i < s.integrals.size(); ++i) {
        measure("{H," + s.integral_names[i] + "}", s.hamiltonian, s.integrals[i]);
        for (std::size_t j = i + 1; j < s.integrals.size(); ++j)
            measure("{" + s.integral_names[i] + "," + s.integral_names[j] + "}", s.integrals[i], s.integrals[j]);
    }
    return report;
}

std::vector<double> vector_field(const HamiltonianSystem& s, std::span<const double> z) {
    const std::size_t n = z.size() / 2;
    auto g = gradient(s.hamiltonian, z);
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = g[n + i];
        out[n + i] = -g[i];
    }
    return out;
}

double Trajectory::relative_drift(std::size_t i) const {
    if (conserved.empty()) return 0;
    const double c0 = conserved.front().at(i);
    double m = 0;
    for (const auto& row : conserved) m = std::max(m, std::abs(row.at(i) - c0));
    return m / std::max(std::abs(c0), 1e-300);
}

Trajectory integrate(const HamiltonianSystem& s, std::vector<double> z, double t_end, double dt, Integrator method) {
    if (!(dt > 0)) throw std::invalid_argument("dt must be positive");
    if (static_cast<int>(z.size()) != 2 * s.particles()) throw std::invalid_argument("initial point has wrong size");
    using State = std::vector<double>;
    Trajectory traj;
    auto record = [&](double t, const State& x) {
        traj.times.push_back(t);
        traj.states.push_back(x);
        std::vector<double> c{value(s.hamiltonian, x)};
        for (const auto& f : s.integrals) c.push_back(value(f, x));
        traj.conserved.push_back(std::move(c));
    };
    auto rhs = [&s](const State& x, State& dxdt, double) { dxdt = vector_field(s, x); };
    boost::numeric::odeint::runge_kutta4<State> rk4;

    const long steps = std::lround(t_end / dt);
    double t = 0;
    record(t, z);
    for (long step = 0; step < steps; ++step) {
        State next = z;
        if (method == Integrator::RK4) {
            rk4.do_step(rhs, next, t, dt);
        } else {
            // Implicit midpoint by fixed-point iteration.
            State guess = z, f0 = vector_field(s, z);
            for (std::size_t i = 0; i < z.size(); ++i) guess[i] = z[i] + dt * f0[i];
            for (int it = 0; it < 100; ++it) {
                State mid(z.size());
                for (std::size_t i = 0; i < z.size(); ++i) mid[i] = (z[i] + guess[i]) / 2;
                auto f = vector_field(s, mid);
                double change = 0;
                for (std::size_t i = 0; i < z.size(); ++i) {
                    double v = z[i] + dt * f[i];
                    change = std::max(change, std::abs(v - guess[i]));
                    guess[i] = v;
                }
                if (change < 1e-15) break;
            }
            next = guess;
        }
        if (!std::all_of(next.begin(), next.end(), [](double v) { return std::isfinite(v); }))
            throw BlowUpError("trajectory left the finite domain", t);
        z = std::move(next);
        t = (step + 1) * dt;
        record(t, z);
    }
    return traj;
}

}  // namespace galilei::poisson
