#include "galilei/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <Eigen/SparseLU>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fftw3.h>

namespace galilei::lattice {

namespace {

using std::numbers::pi;

// Plan creation in FFTW is not thread-safe.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int n, fftw_complex* in, fftw_complex* out, int sign) {
        std::lock_guard lock(plan_mutex());
        plan_ = fftw_plan_dft_1d(n, in, out, sign, FFTW_ESTIMATE);
    }
    Plan(int n, double* in, double* out) {
        std::lock_guard lock(plan_mutex());
        plan_ = fftw_plan_r2r_1d(n, in, out, FFTW_RODFT00, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    void run() { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

fftw_complex* as_fftw(Field& f) { return reinterpret_cast<fftw_complex*>(f.data()); }

void require_periodic(const Grid& g, const char* what) {
    if (g.boundary != Boundary::Periodic) throw std::invalid_argument(std::string(what) + " needs a periodic grid");
}

cplx rate(Mode mode, double mass) { return mode == Mode::Heat ? cplx(1.0 / (2 * mass)) : cplx(0, 1.0 / (2 * mass)); }

double max_abs(const Field& f) {
    double m = 0;
    for (const auto& v : f) m = std::max(m, std::abs(v));
    return m;
}

double max_diff(const Field& a, const Field& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Field operator-(Field a, const Field& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

Field operator+(Field a, const Field& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

Field operator*(cplx s, Field a) {
    for (auto& v : a) v *= s;
    return a;
}

/// |a - b| relative to the largest of the listed terms.
Deviation compare(std::string name, const Field& a, const Field& b, std::initializer_list<const Field*> terms,
                  double tolerance) {
    double scale = 0;
    for (const auto* t : terms) scale = std::max(scale, max_abs(*t));
    return {std::move(name), scale > 0 ? max_diff(a, b) / scale : max_diff(a, b), tolerance};
}

Field evolve_dst(const Grid& g, double mass, Mode mode, const Field& psi, double t) {
    if (g.ratio != 1) throw std::invalid_argument("exact Dirichlet evolution needs ratio 1");
    const int n = static_cast<int>(g.nodes);
    std::vector<double> in(n), out(n);
    Plan plan(n, in.data(), out.data());
    const cplx c = rate(mode, mass);
    Field result(n);
    for (int part = 0; part < 2; ++part) {
        for (int j = 0; j < n; ++j) in[j] = part == 0 ? psi[j].real() : psi[j].imag();
        plan.run();
        Field spectrum(n);
        for (int k = 0; k < n; ++k) {
            const double kk = pi * (k + 1) / ((n + 1) * g.spacing());
            spectrum[k] = out[k] * std::exp(c * symbol(g.alpha, kk) * t);
        }
        // DST-I is its own inverse up to 2(n+1); real and imaginary parts
        // of the evolved spectrum are transformed separately.
        for (int half = 0; half < 2; ++half) {
            for (int k = 0; k < n; ++k) in[k] = half == 0 ? spectrum[k].real() : spectrum[k].imag();
            plan.run();
            const cplx unit = (half == 0 ? cplx(1) : cplx(0, 1)) * (part == 0 ? cplx(1) : cplx(0, 1));
            for (int j = 0; j < n; ++j) result[j] += unit * out[j] / (2.0 * (n + 1));
        }
    }
    return result;
}

}  // namespace

double Grid::wavenumber(std::int64_t n) const {
    const std::int64_t m = n <= nodes / 2 ? n : n - nodes;
    return 2 * pi * static_cast<double>(m) / length();
}

Grid make_grid(double alpha, double length, int ratio, Boundary boundary) {
    if (!(alpha > 0) || !std::isfinite(alpha)) throw std::invalid_argument("alpha must be positive");
    if (ratio < 1) throw std::invalid_argument("ratio must be a positive integer");
    if (!(length > 0)) throw std::invalid_argument("length must be positive");
    const double h = alpha / (2.0 * ratio);
    const double n = std::round(length / h / 2) * 2;
    if (n > static_cast<double>(kMaxNodes)) throw std::invalid_argument("grid exceeds " + std::to_string(kMaxNodes) + " nodes");
    Grid g{alpha, ratio, static_cast<std::int64_t>(n), boundary};
    if (g.nodes < 4 * ratio) throw std::invalid_argument("grid needs at least 4*ratio nodes");
    return g;
}

Grid grid_from_spacing(double alpha, double spacing, std::int64_t nodes, Boundary boundary) {
    if (!(alpha > 0) || !(spacing > 0)) throw std::invalid_argument("alpha and spacing must be positive");
    const double r = alpha / (2 * spacing);
    const double ri = std::round(r);
    if (ri < 1 || std::abs(r - ri) > 1e-9 * ri)
        throw std::invalid_argument("alpha/(2h) = " + std::to_string(r) + " is not a positive integer");
    if (nodes < 4 * ri || nodes > kMaxNodes) throw std::invalid_argument("node count out of range");
    return Grid{alpha, static_cast<int>(ri), nodes, boundary};
}

void validate(const LatticeField& f) {
    if (static_cast<std::int64_t>(f.values.size()) != f.grid.nodes)
        throw std::invalid_argument("field size does not match the grid");
    if (!(f.mass > 0)) throw std::invalid_argument("mass must be positive");
    for (const auto& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw std::invalid_argument("non-finite field value");
}

double symbol(double alpha, double k) {
    const double s = std::sin(k * alpha / 4) / (alpha / 4);
    return -s * s;
}

Field shift(const Grid& g, const Field& psi, std::int64_t steps) {
    const std::int64_t n = g.nodes;
    Field out(n);
    for (std::int64_t j = 0; j < n; ++j) {
        std::int64_t i = j + steps;
        if (g.boundary == Boundary::Periodic)
            i = ((i % n) + n) % n;
        else if (i < 0 || i >= n)
            continue;
        out[j] = psi[i];
    }
    return out;
}

Field deformed_laplacian(const Grid& g, const Field& psi) {
    const double c = 4 / (g.alpha * g.alpha);
    Field up = shift(g, psi, g.ratio), down = shift(g, psi, -g.ratio);
    Field out(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) out[j] = c * (up[j] - 2.0 * psi[j] + down[j]);
    return out;
}

Eigen::SparseMatrix<double> laplacian_matrix(const Grid& g) {
    const std::int64_t n = g.nodes;
    const double c = 4 / (g.alpha * g.alpha);
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(3 * n);
    for (std::int64_t j = 0; j < n; ++j) {
        t.emplace_back(j, j, -2 * c);
        for (std::int64_t s : {std::int64_t{g.ratio}, -std::int64_t{g.ratio}}) {
            std::int64_t i = j + s;
            if (g.boundary == Boundary::Periodic)
                i = ((i % n) + n) % n;
            else if (i < 0 || i >= n)
                continue;
            t.emplace_back(j, i, c);
        }
    }
    Eigen::SparseMatrix<double> m(n, n);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

Field fourier_multiply(const Grid& g, const Field& psi, const std::function<cplx(double)>& f) {
    require_periodic(g, "Fourier multiplier");
    const int n = static_cast<int>(g.nodes);
    Field buf(psi), spectrum(n);
    Plan forward(n, as_fftw(buf), as_fftw(spectrum), FFTW_FORWARD);
    Plan backward(n, as_fftw(spectrum), as_fftw(buf), FFTW_BACKWARD);
    forward.run();
    for (int k = 0; k < n; ++k) spectrum[k] *= f(g.wavenumber(k)) / static_cast<double>(n);
    backward.run();
    return buf;
}

Field spectral_derivative(const Grid& g, const Field& psi) {
    const double nyquist = pi / g.spacing();
    return fourier_multiply(g, psi, [nyquist](double k) {
        return std::abs(std::abs(k) - nyquist) < 1e-9 * nyquist ? cplx(0) : cplx(0, k);
    });
}

Field apply_p(const Grid& g, const Field& psi) { return spectral_derivative(g, psi); }

Field apply_m(const Grid& g, double mass, const Field& psi) { return mass * shift(g, psi, -g.ratio); }

Field apply_d(const Grid& g, const Field& psi) { return (1 / g.alpha) * (psi - shift(g, psi, -2 * g.ratio)); }

Field apply_k(const Grid& g, double mass, double t, const Field& psi, Mode mode) {
    const cplx tau = mode == Mode::Heat ? cplx(t) : cplx(0, t);
    Field out = -tau * apply_d(g, psi);
    Field s = shift(g, psi, -g.ratio);
    for (std::int64_t j = 0; j < g.nodes; ++j) out[j] -= mass * g.x(j) * s[j];
    return out;
}

Field evolve_exact(const Grid& g, double mass, Mode mode, const Field& psi, double t) {
    if (g.boundary == Boundary::Dirichlet) return evolve_dst(g, mass, mode, psi, t);
    const cplx c = rate(mode, mass);
    return fourier_multiply(g, psi, [&](double k) { return std::exp(c * symbol(g.alpha, k) * t); });
}

std::vector<LatticeField> solve_hse(const LatticeField& initial, const HSEOptions& o) {
    validate(initial);
    if (!(o.t_end >= 0) || !(o.dt > 0)) throw std::invalid_argument("need t_end >= 0 and dt > 0");
    if (o.snapshots < 1) throw std::invalid_argument("need at least one snapshot");
    const Grid& g = initial.grid;
    const std::int64_t steps = std::max<std::int64_t>(1, std::llround(o.t_end / o.dt));
    const double dt = o.t_end / static_cast<double>(steps);

    std::vector<std::int64_t> marks;
    for (int i = 1; i <= o.snapshots; ++i) marks.push_back(std::llround(static_cast<double>(i) * steps / o.snapshots));

    std::vector<LatticeField> out{initial};
    auto record = [&](const Field& v, std::int64_t step) {
        LatticeField f = initial;
        f.time = initial.time + static_cast<double>(step) * dt;
        f.values = v;
        out.push_back(std::move(f));
    };

    if (o.scheme == Scheme::Exact) {
        for (auto s : marks) record(evolve_exact(g, initial.mass, o.mode, initial.values, s * dt), s);
        return out;
    }

    const cplx c = rate(o.mode, initial.mass);
    const auto n = static_cast<Eigen::Index>(g.nodes);
    using Vec = Eigen::Matrix<cplx, Eigen::Dynamic, 1>;
    Vec psi = Eigen::Map<const Vec>(initial.values.data(), n);
    auto to_field = [](const Vec& v) { return Field(v.data(), v.data() + v.size()); };
    const Eigen::SparseMatrix<cplx> lap = laplacian_matrix(g).cast<cplx>();
    Eigen::SparseMatrix<cplx> id(n, n);
    id.setIdentity();
    std::size_t next = 0;

    if (o.scheme == Scheme::CrankNicolson) {
        Eigen::SparseMatrix<cplx> a = id - (0.5 * dt * c) * lap, b = id + (0.5 * dt * c) * lap;
        Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) throw std::runtime_error("Crank-Nicolson factorization failed");
        for (std::int64_t s = 1; s <= steps; ++s) {
            psi = lu.solve(b * psi);
            while (next < marks.size() && marks[next] == s) record(to_field(psi), marks[next++]);
        }
        return out;
    }

    const double n0 = psi.norm();
    for (std::int64_t s = 1; s <= steps; ++s) {
        psi += (dt * c) * (lap * psi);
        const double nr = psi.norm();
        if (!std::isfinite(nr) || nr > n0 * (1 + 1e-6) + 1e-300)
            throw StabilityError("explicit step unstable at t = " + std::to_string(initial.time + s * dt) +
                                 " (dt = " + std::to_string(dt) + ", limit m h^2 = " +
                                 std::to_string(initial.mass * g.spacing() * g.spacing()) +
                                 "); use the crank-nicolson or exact scheme");
        while (next < marks.size() && marks[next] == s) record(to_field(psi), marks[next++]);
    }
    return out;
}

double plane_wave_deviation(const Grid& g) {
    require_periodic(g, "plane-wave check");
    const double scale = 4 / (g.alpha * g.alpha);
    double worst = 0;
    Field wave(g.nodes);
    for (std::int64_t n = 0; n < g.nodes; ++n) {
        const double k = g.wavenumber(n);
        // k x_j = 2π n (j - N/2) / N, reduced mod N in integers.
        for (std::int64_t j = 0; j < g.nodes; ++j) {
            const std::int64_t turns = ((n * (j - g.nodes / 2)) % g.nodes + g.nodes) % g.nodes;
            wave[j] = std::polar(1.0, 2 * pi * static_cast<double>(turns) / static_cast<double>(g.nodes));
        }
        const Field lw = deformed_laplacian(g, wave);
        const double lambda = symbol(g.alpha, k);
        for (std::int64_t j = 0; j < g.nodes; ++j) worst = std::max(worst, std::abs(lw[j] - lambda * wave[j]) / scale);
    }
    return worst;
}

double laplacian_asymmetry(const Grid& g) {
    Eigen::SparseMatrix<double> l = laplacian_matrix(g);
    Eigen::SparseMatrix<double> d = l - Eigen::SparseMatrix<double>(l.transpose());
    double worst = 0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(d, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

bool SymmetryReport::passed() const {
    return std::all_of(identities.begin(), identities.end(), [](const Deviation& d) { return d.passed(); }) &&
           std::all_of(commuting.begin(), commuting.end(), [](const Deviation& d) { return d.passed(); });
}

SymmetryReport verify_symmetry(const LatticeField& initial, const HSEOptions& o) {
    validate(initial);
    const Grid& g = initial.grid;
    require_periodic(g, "symmetry verification");
    const double m = initial.mass, t0 = initial.time, a = g.alpha;
    const Field& psi = initial.values;
    constexpr double kRoundOff = 1e-12;

    auto P = [&](const Field& f) { return apply_p(g, f); };
    auto M = [&](const Field& f) { return apply_m(g, m, f); };
    auto K = [&](double t, const Field& f) { return apply_k(g, m, t, f, o.mode); };
    const cplx dtau = o.mode == Mode::Heat ? cplx(1) : cplx(0, 1);
    auto L = [&](const Field& f) { return deformed_laplacian(g, f); };
    auto D = [&](const Field& f) { return apply_d(g, f); };

    SymmetryReport r;
    // Operator-norm bounds on the grid; each identity is measured against
    // the size of the products it involves.
    double xmax = 0;
    for (std::int64_t j = 0; j < g.nodes; ++j) xmax = std::max(xmax, std::abs(g.x(j)));
    const double amp = max_abs(psi);
    const double nP = pi / g.spacing(), nL = 16 / (a * a), nM = m, nD = 2 / a;
    const double nK = std::abs(t0) * nD + m * xmax;
    auto identity = [&](std::string name, const Field& lhs, const Field& rhs, double bound) {
        r.identities.push_back({std::move(name), max_diff(lhs, rhs) / std::max(bound * amp, 1e-300), kRoundOff});
    };
    const Field zero(psi.size());

    identity("[K,P] = M", K(t0, P(psi)) - P(K(t0, psi)), M(psi), 2 * nK * nP + nM);
    identity("[M,K] = (alpha/2) M^2", M(K(t0, psi)) - K(t0, M(psi)), (a / 2) * M(M(psi)), 2 * nM * nK + a / 2 * nM * nM);
    // H = ∂_τ acts on the explicit time dependence of K.
    identity("[K,H] = (1 - e^{-alpha P})/alpha", (-1.0 / dtau) * (K(t0 + 1, psi) - K(t0, psi)),
             fourier_multiply(g, psi, [a](double k) { return (1.0 - std::exp(cplx(0, -a * k))) / a; }), 2 * nD);
    identity("[M,P] = 0", M(P(psi)), P(M(psi)), 2 * nM * nP);
    identity("C1 = e^{alpha P/2} M = m", fourier_multiply(g, M(psi), [a](double k) { return std::exp(cplx(0, a * k / 2)); }),
             m * psi, 2 * nM);
    identity("(sinh(alpha P/4)/(alpha/4))^2 = stencil", fourier_multiply(g, psi, [a](double k) {
                 const cplx sh = std::sinh(cplx(0, a * k / 4)) / (a / 4);
                 return sh * sh;
             }),
             L(psi), 2 * nL);
    // C2 = L - 2m e^{αP/2}MH/m = L - 2mH, so [C2,K] = [L,K] + 2m[K,H].
    identity("[C2,K] = 0", L(K(t0, psi)) - K(t0, L(psi)) + (2 * m) * D(psi), zero, 2 * nL * nK + 2 * m * nD);
    identity("[C2,P] = 0", L(P(psi)), P(L(psi)), 2 * nL * nP);
    identity("[C2,M] = 0", L(M(psi)), M(L(psi)), 2 * nL * nM);

    HSEOptions single = o;
    single.snapshots = 1;
    const double t1 = t0 + o.t_end;
    auto evolve = [&](const Field& f) {
        LatticeField in = initial;
        in.values = f;
        return solve_hse(in, single).back().values;
    };
    auto stepping_error = [&](const Field& f, const Field& evolved) {
        if (o.scheme == Scheme::Exact) return 0.0;
        Field exact = evolve_exact(g, m, o.mode, f, o.t_end);
        return max_diff(exact, evolved) / std::max(max_abs(exact), 1e-300);
    };

    const Field u = evolve(psi);
    {
        Field a1 = P(u), b1 = evolve(P(psi));
        r.commuting.push_back(compare("P", a1, b1, {&a1, &b1}, 1e-10));
    }
    {
        Field a1 = M(u), b1 = evolve(M(psi));
        r.commuting.push_back(compare("M", a1, b1, {&a1, &b1}, 1e-10));
    }
    {
        const Field kpsi = K(t0, psi);
        Field a1 = K(t1, u), b1 = evolve(kpsi);
        const double step = std::max(stepping_error(psi, u), stepping_error(kpsi, b1));
        r.commuting.push_back(compare("K", a1, b1, {&a1, &b1}, 1e-10 + 10 * step));
    }
    return r;
}

Field gaussian(const Grid& g, double sigma) {
    Field f(g.nodes);
    for (std::int64_t j = 0; j < g.nodes; ++j) {
        const double x = g.x(j);
        f[j] = std::exp(-x * x / (2 * sigma * sigma));
    }
    return f;
}

cplx continuum_gaussian(double x, double t, double sigma, double mass, Mode mode) {
    const cplx s2 = sigma * sigma + (mode == Mode::Heat ? cplx(1) : cplx(0, 1)) * (t / mass);
    return std::sqrt(sigma * sigma / s2) * std::exp(-x * x / (2.0 * s2));
}

double continuum_deviation_bound(double alpha, double sigma, double mass, double t, Mode mode) {
    const cplx c = rate(mode, mass);
    const double h = alpha / 2;
    const double cutoff = std::min(pi / h, 40 / sigma);
    auto integrand = [&](double k) {
        const double amp = sigma * std::sqrt(2 * pi) * std::exp(-sigma * sigma * k * k / 2);
        return amp * std::abs(std::exp(c * symbol(alpha, k) * t) - std::exp(-c * k * k * t));
    };
    const double inside =
        2 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, cutoff, 15, 1e-14);
    // Aliased and out-of-zone spectrum, each bounded by |ψ̂|.
    const double tail = 2 * std::erfc(sigma * cutoff / std::sqrt(2.0));
    return inside / (2 * pi) + tail;
}

ConvergenceStudy convergence_study(double alpha, int levels, double mass, double length, double sigma, double t,
                                   Mode mode, int ratio) {
    if (levels < 2) throw std::invalid_argument("a convergence study needs at least two levels");
    const Grid coarse = make_grid(alpha, length, ratio);
    ConvergenceStudy s;
    for (int l = 0; l < levels; ++l) {
        const std::int64_t f = std::int64_t{1} << l;
        const Grid g = grid_from_spacing(alpha / f, coarse.spacing() / f, coarse.nodes * f);
        const Field u = evolve_exact(g, mass, mode, gaussian(g, sigma), t);
        double err = 0;
        for (std::int64_t j = 0; j < coarse.nodes; ++j)
            err = std::max(err, std::abs(u[j * f] - continuum_gaussian(coarse.x(j), t, sigma, mass, mode)));
        s.alphas.push_back(g.alpha);
        s.errors.push_back(err);
        if (l > 0) s.exponents.push_back(std::log2(s.errors[l - 1] / err));
    }
    return s;
}

const char* mode_name(Mode m) { return m == Mode::Heat ? "heat" : "schrodinger"; }

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Exact: return "exact";
        case Scheme::CrankNicolson: return "crank-nicolson";
        case Scheme::Explicit: return "explicit";
    }
    return "?";
}

const char* boundary_name(Boundary b) { return b == Boundary::Periodic ? "periodic" : "dirichlet"; }

}  // namespace galilei::lattice
