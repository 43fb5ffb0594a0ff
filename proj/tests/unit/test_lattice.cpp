#include <cmath>
#include <numbers>

#include "doctest.h"
#include "galilei/lattice.hpp"

using namespace galilei::lattice;
using std::numbers::pi;

namespace {

double max_abs_diff(const Field& a, const Field& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double max_abs(const Field& a) { return max_abs_diff(a, Field(a.size())); }

LatticeField field(const Grid& g, Field v, double mass = 1) { return {g, mass, 0, std::move(v)}; }

}  // namespace

TEST_CASE("grid construction") {
    auto g = make_grid(0.1, 10);
    CHECK(g.spacing() == doctest::Approx(0.05));
    CHECK(g.nodes == 200);
    CHECK(g.x(100) == 0.0);
    auto g2 = make_grid(0.1, 10, 2);
    CHECK(g2.spacing() == doctest::Approx(0.025));
    CHECK(g2.nodes == 400);
    CHECK_THROWS_AS(make_grid(0, 10), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0.1, 10, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1e-9, 20), std::invalid_argument);
    CHECK(grid_from_spacing(0.1, 0.025, 64).ratio == 2);
    CHECK_THROWS_AS(grid_from_spacing(0.1, 0.03, 64), std::invalid_argument);
    CHECK_THROWS_AS(grid_from_spacing(0.1, 0.1, 64), std::invalid_argument);
}

TEST_CASE("deformed Laplacian: constants, plane waves, symmetry") {
    for (int ratio : {1, 2, 3}) {
        auto g = make_grid(0.2, 8, ratio);
        CHECK(max_abs(deformed_laplacian(g, Field(g.nodes, 2.5))) < 1e-12);
        CHECK(plane_wave_deviation(g) < 1e-12);
        CHECK(laplacian_asymmetry(g) == 0.0);
        CHECK(laplacian_asymmetry(make_grid(0.2, 8, ratio, Boundary::Dirichlet)) == 0.0);
    }
    // Symbol against its Taylor series -k² + α²k⁴/48.
    const double a = 1e-3, k = 2.0;
    CHECK(symbol(a, k) == doctest::Approx(-k * k + a * a * std::pow(k, 4) / 48).epsilon(1e-12));
    CHECK(symbol(0.4, 0.0) == 0.0);
}

TEST_CASE("stencil matches the sparse matrix") {
    auto g = make_grid(0.3, 6, 1, Boundary::Dirichlet);
    Field f(g.nodes);
    for (std::int64_t j = 0; j < g.nodes; ++j) f[j] = {std::cos(0.3 * j), std::sin(0.7 * j)};
    Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(f.data(), g.nodes);
    Eigen::VectorXcd w = laplacian_matrix(g).cast<cplx>() * v;
    CHECK(max_abs_diff(Field(w.data(), w.data() + w.size()), deformed_laplacian(g, f)) < 1e-12);
}

TEST_CASE("continuum limit of the stencil is second order") {
    auto error = [](double a) {
        auto g = make_grid(a, 2 * pi);
        Field f(g.nodes), exact(g.nodes);
        for (std::int64_t j = 0; j < g.nodes; ++j) {
            f[j] = std::sin(3 * g.x(j));
            exact[j] = -9 * std::sin(3 * g.x(j));
        }
        return max_abs_diff(deformed_laplacian(g, f), exact);
    };
    const double e1 = error(2 * pi / 100), e2 = error(2 * pi / 200);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("single Fourier mode decays at the lattice rate") {
    auto g = make_grid(0.25, 10);
    const double m = 1.5, k = g.wavenumber(7), t = 0.8;
    Field mode(g.nodes);
    for (std::int64_t j = 0; j < g.nodes; ++j) mode[j] = std::cos(k * g.x(j));
    const double decay = std::exp(symbol(g.alpha, k) * t / (2 * m));
    Field expected(g.nodes);
    for (std::int64_t j = 0; j < g.nodes; ++j) expected[j] = decay * mode[j];

    HSEOptions o;
    o.t_end = t;
    o.scheme = Scheme::Exact;
    CHECK(max_abs_diff(solve_hse(field(g, mode, m), o).back().values, expected) < 1e-13);

    o.scheme = Scheme::CrankNicolson;
    o.dt = 1e-3;
    auto cn = solve_hse(field(g, mode, m), o);
    CHECK(cn.size() == 2);
    CHECK(cn.back().time == doctest::Approx(t));
    CHECK(max_abs_diff(cn.back().values, expected) < 1e-6);

    o.scheme = Scheme::Explicit;
    o.dt = 1e-4;
    CHECK(max_abs_diff(solve_hse(field(g, mode, m), o).back().values, expected) < 1e-4);
}

TEST_CASE("Dirichlet exact evolution") {
    auto g = make_grid(0.2, 4, 1, Boundary::Dirichlet);
    const auto n = g.nodes;
    const double m = 1, t = 0.3;
    Field mode(n), expected(n);
    const double k = pi * 3 / ((n + 1) * g.spacing());
    for (std::int64_t j = 0; j < n; ++j) {
        mode[j] = cplx(std::sin(pi * 3 * (j + 1) / static_cast<double>(n + 1)), 0.5 * std::sin(pi * 3 * (j + 1) / double(n + 1)));
        expected[j] = mode[j] * std::exp(symbol(g.alpha, k) * t / (2 * m));
    }
    CHECK(max_abs_diff(evolve_exact(g, m, Mode::Heat, mode, t), expected) < 1e-13);
    CHECK_THROWS_AS(evolve_exact(make_grid(0.2, 4, 2, Boundary::Dirichlet), m, Mode::Heat, Field(40), t),
                    std::invalid_argument);

    HSEOptions o;
    o.t_end = t;
    o.dt = 1e-3;
    Field bump = gaussian(g, 0.5);
    auto cn = solve_hse(field(g, bump), o).back().values;
    CHECK(max_abs_diff(cn, evolve_exact(g, m, Mode::Heat, bump, t)) < 1e-6);
}

TEST_CASE("zero data stays zero") {
    auto g = make_grid(0.1, 5);
    for (auto s : {Scheme::Exact, Scheme::CrankNicolson, Scheme::Explicit}) {
        HSEOptions o;
        o.scheme = s;
        o.dt = 1e-4;
        o.t_end = 0.01;
        o.snapshots = 3;
        auto out = solve_hse(field(g, Field(g.nodes)), o);
        CHECK(out.size() == 4);
        for (const auto& f : out) CHECK(max_abs(f.values) == 0.0);
    }
}

TEST_CASE("explicit stepping beyond the stability limit is rejected") {
    auto g = make_grid(0.1, 5);
    HSEOptions o;
    o.scheme = Scheme::Explicit;
    o.dt = 4 * g.spacing() * g.spacing();
    o.t_end = 1;
    Field noisy = gaussian(g, 0.3);
    for (std::int64_t j = 0; j < g.nodes; j += 2) noisy[j] += 1e-3;
    CHECK_THROWS_AS(solve_hse(field(g, noisy), o), StabilityError);
}

TEST_CASE("Schrodinger mode is unitary under Crank-Nicolson") {
    auto g = make_grid(0.1, 20);
    HSEOptions o;
    o.mode = Mode::Schrodinger;
    o.dt = 1e-2;
    o.t_end = 1;
    auto in = gaussian(g, 1.0);
    auto out = solve_hse(field(g, in), o).back().values;
    double n0 = 0, n1 = 0;
    for (std::int64_t j = 0; j < g.nodes; ++j) {
        n0 += std::norm(in[j]);
        n1 += std::norm(out[j]);
    }
    CHECK(n1 == doctest::Approx(n0).epsilon(1e-12));
    // Against the continuum free-particle spreading.
    double err = 0;
    for (std::int64_t j = 0; j < g.nodes; ++j)
        err = std::max(err, std::abs(out[j] - continuum_gaussian(g.x(j), 1, 1, 1, Mode::Schrodinger)));
    CHECK(err < 5e-3);
}

TEST_CASE("continuum limit convergence") {
    auto s = convergence_study(0.05, 3, 1.0, 20, 1.0, 1.0);
    REQUIRE(s.exponents.size() == 2);
    for (double p : s.exponents) {
        CHECK(p >= 1.8);
        CHECK(p <= 2.2);
    }
    CHECK(s.errors.back() < s.errors.front());
    auto q = convergence_study(0.1, 3, 2.0, 20, 1.0, 0.5, Mode::Schrodinger);
    for (double p : q.exponents) CHECK(p == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("continuum deviation bound") {
    CHECK(continuum_deviation_bound(1e-9, 1, 1, 1, Mode::Heat) < 1e-8);
    for (double a : {0.2, 0.1}) {
        auto g = make_grid(a, 20);
        auto u = evolve_exact(g, 1, Mode::Heat, gaussian(g, 1), 1);
        double err = 0;
        for (std::int64_t j = 0; j < g.nodes; ++j)
            err = std::max(err, std::abs(u[j] - continuum_gaussian(g.x(j), 1, 1, 1, Mode::Heat)));
        const double bound = continuum_deviation_bound(a, 1, 1, 1, Mode::Heat);
        CHECK(err <= bound * (1 + 1e-9));
        CHECK(bound < 10 * err);
    }
}

TEST_CASE("generator realization on the grid") {
    auto g = make_grid(0.1, 20, 1);
    const double m = 1.3;
    Field psi = gaussian(g, 1.0);
    // M is a pure shift by half of α.
    auto mp = apply_m(g, m, psi);
    CHECK(mp[g.nodes / 2] == m * psi[g.nodes / 2 - 1]);
    // [K,P] = M computed directly.
    auto kp = apply_k(g, m, 0.4, apply_p(g, psi));
    auto pk = apply_p(g, apply_k(g, m, 0.4, psi));
    Field lhs(g.nodes);
    for (std::int64_t j = 0; j < g.nodes; ++j) lhs[j] = kp[j] - pk[j];
    CHECK(max_abs_diff(lhs, mp) < 1e-11);
    // A shift in the wrong direction breaks [M,K] = (α/2)M².
    auto wrong_m = [&](const Field& f) {
        auto s = shift(g, f, 1);
        for (auto& v : s) v *= m;
        return s;
    };
    auto mk = wrong_m(apply_k(g, m, 0, psi)), km = apply_k(g, m, 0, wrong_m(psi)), mm = wrong_m(wrong_m(psi));
    double dev = 0;
    for (std::int64_t j = 0; j < g.nodes; ++j) dev = std::max(dev, std::abs(mk[j] - km[j] - g.alpha / 2 * mm[j]));
    CHECK(dev > 1e-3);
}

TEST_CASE("symmetry verification") {
    auto g = make_grid(0.1, 20, 1);
    Field psi = gaussian(g, 1.0);
    for (std::int64_t j = 0; j < g.nodes; ++j) psi[j] *= std::polar(1.0, 0.8 * g.x(j));
    for (auto mode : {Mode::Heat, Mode::Schrodinger})
        for (auto scheme : {Scheme::Exact, Scheme::CrankNicolson}) {
            CAPTURE(mode_name(mode));
            CAPTURE(scheme_name(scheme));
            HSEOptions o;
            o.mode = mode;
            o.scheme = scheme;
            o.t_end = 0.5;
            o.dt = 1e-2;
            auto r = verify_symmetry({g, 1.2, 0.3, psi}, o);
            CHECK(r.identities.size() == 9);
            CHECK(r.commuting.size() == 3);
            for (const auto& d : r.identities) {
                CAPTURE(d.name);
                CAPTURE(d.deviation);
                CHECK(d.passed());
            }
            for (const auto& d : r.commuting) {
                CAPTURE(d.name);
                CAPTURE(d.deviation);
                CHECK(d.passed());
            }
            CHECK(r.commuting[1].deviation < 1e-12);
        }
    CHECK_THROWS_AS(verify_symmetry({make_grid(0.1, 20, 1, Boundary::Dirichlet), 1, 0, psi}, {}), std::invalid_argument);
}

TEST_CASE("field validation") {
    auto g = make_grid(0.1, 5);
    CHECK_THROWS_AS(validate({g, 1, 0, Field(3)}), std::invalid_argument);
    CHECK_THROWS_AS(validate({g, -1, 0, Field(g.nodes)}), std::invalid_argument);
    Field bad(g.nodes);
    bad[3] = std::nan("");
    CHECK_THROWS_AS(validate({g, 1, 0, bad}), std::invalid_argument);
}
