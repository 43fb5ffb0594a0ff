#include <cmath>
#include <random>

#include "doctest.h"
#include "galilei/poisson.hpp"

using namespace galilei;
using namespace galilei::poisson;

namespace {

constexpr Generator K = Generator::K, H = Generator::H, P = Generator::P, M = Generator::M;

double mass_fn(double x, double m) { return x == 0 ? m : (std::exp(x * m) - 1) / x; }
double shx(double a, double p) { return std::sinh(a * p / 4) / (a / 4); }

Deformation sample(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    Deformation d;
    d.xi = u(rng);
    d.nu = u(rng);
    d.alpha = u(rng);
    d.beta1 = u(rng);
    d.beta2 = u(rng);
    d.beta3 = u(rng);
    if (std::abs(d.alpha) < 0.05) d.alpha = 0.3;
    return d;
}

std::vector<double> random_point(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> z(2 * n);
    for (auto& x : z) x = u(rng);
    return z;
}

std::vector<double> random_masses(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.5, 2);
    std::vector<double> m(n);
    for (auto& x : m) x = u(rng);
    return m;
}

Generators<double> values(const PhaseRealization& r, std::span<const double> z, int k) {
    std::vector<Dual> v(z.begin(), z.end());
    auto g = r.compose(v, k);
    return {g.k.value(), g.h.value(), g.p.value(), g.m.value()};
}

const std::array<Family, 5> kFamilies{Family::Trivial, Family::IaStandard, Family::IaNonstandard, Family::Ib,
                                      Family::IIb};

}  // namespace

TEST_CASE("deformed mass function") {
    for (double m : {0.5, 1.0, 3.0}) {
        CHECK(deformed_mass(0.0, m) == m);
        // Both sides of the switchover agree.
        const double x = 1e-6 / m;
        const double below = deformed_mass(x * (1 - 1e-9), m), above = deformed_mass(x * (1 + 1e-9), m);
        CHECK(std::abs(below - above) / m < 1e-14);
        CHECK(deformed_mass(0.3, m) == doctest::Approx((std::exp(0.3 * m) - 1) / 0.3).epsilon(1e-15));
    }
}

TEST_CASE("one-particle realizations reduce to the undeformed one") {
    const double q = 0.7, p = -0.4, m = 1.3;
    Deformation zero;
    for (auto f : {Family::Trivial, Family::IaStandard, Family::IaNonstandard, Family::Ib}) {
        PhaseRealization r(f, zero, {m});
        auto g = r.one_particle(0, Dual(q), Dual(p));
        CHECK(g.k.value() == doctest::Approx(m * q));
        CHECK(g.h.value() == doctest::Approx(p * p / (2 * m)));
        CHECK(g.p.value() == doctest::Approx(p));
        CHECK(g.m.value() == doctest::Approx(m));
    }
    Deformation tiny;
    tiny.alpha = 1e-9;
    auto g = PhaseRealization(Family::IIb, tiny, {m}).one_particle(0, Dual(q), Dual(p));
    CHECK(g.k.value() == doctest::Approx(m * q));
    CHECK(g.h.value() == doctest::Approx(p * p / (2 * m)));
}

TEST_CASE("two-particle functions against the tabulated forms") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        auto d = sample(rng);
        auto ms = random_masses(rng, 2);
        auto z = random_point(rng, 2);
        const double m1 = ms[0], m2 = ms[1], q1 = z[0], q2 = z[1], p1 = z[2], p2 = z[3];
        const double tol = 1e-12;

        auto u = values(PhaseRealization(Family::Trivial, d, ms), z, 2);
        CHECK(u.p == doctest::Approx(p1 + p2).epsilon(tol));
        CHECK(u.k == doctest::Approx(m1 * q1 + m2 * q2).epsilon(tol));
        CHECK(u.h == doctest::Approx(p1 * p1 / (2 * m1) + p2 * p2 / (2 * m2)).epsilon(tol));

        auto s = values(PhaseRealization(Family::IaStandard, d, ms), z, 2);
        const double e = std::exp(d.xi * m2);
        CHECK(s.k == doctest::Approx(e * mass_fn(2 * d.xi, m1) * q1 + mass_fn(2 * d.xi, m2) * q2 + d.beta1 * e * m2 * p1)
                         .epsilon(tol));
        CHECK(s.p == doctest::Approx(e * p1 + p2).epsilon(tol));
        CHECK(s.h == doctest::Approx(p1 * p1 / (2 * mass_fn(2 * d.xi, m1)) + p2 * p2 / (2 * mass_fn(2 * d.xi, m2)))
                         .epsilon(tol));

        auto n = values(PhaseRealization(Family::IaNonstandard, d, ms), z, 2);
        const double sp1 = p1 - d.beta3 / 2 * m1 * m1;
        CHECK(n.k == doctest::Approx(m1 * q1 + m2 * q2 + sp1 * (d.beta1 * m2 + d.beta2 * d.beta3 * m2 * m2 / 2) +
                                     d.beta2 * m2 * p1 * p1 / (2 * m1))
                         .epsilon(tol));
        CHECK(n.h == doctest::Approx(p1 * p1 / (2 * m1) + p2 * p2 / (2 * m2) + d.beta3 * m2 * sp1).epsilon(tol));
        CHECK(n.p == doctest::Approx(p1 + p2 - d.beta3 / 2 * (m1 * m1 + m2 * m2)).epsilon(tol));

        auto b = values(PhaseRealization(Family::Ib, d, ms), z, 2);
        const double a1 = mass_fn(d.xi, m1), a2 = mass_fn(d.xi, m2);
        const double bp1 = p1 - d.beta3 / 2 * a1 * a1;
        CHECK(b.k == doctest::Approx(e * mass_fn(2 * d.xi, m1) * q1 + mass_fn(2 * d.xi, m2) * q2 +
                                     d.nu * e * bp1 * p2 * p2 / (2 * mass_fn(2 * d.xi, m2)) +
                                     d.nu * d.beta3 / 2 * e * bp1 * bp1 * a2)
                         .epsilon(tol));
        CHECK(b.h == doctest::Approx(p1 * p1 / (2 * mass_fn(2 * d.xi, m1)) + p2 * p2 / (2 * mass_fn(2 * d.xi, m2)) +
                                     d.beta3 * bp1 * a2)
                         .epsilon(tol));
        CHECK(b.p == doctest::Approx(e * p1 + p2 - d.beta3 / 2 * (a1 * a1 * e + a2 * a2)).epsilon(tol));

        auto i = values(PhaseRealization(Family::IIb, d, ms), z, 2);
        const double ea = std::exp(-d.alpha * p1 / 2) * std::exp(-d.alpha * p2);
        CHECK(i.m == doctest::Approx(m1 * ea + m2 * std::exp(-d.alpha * p2 / 2)).epsilon(tol));
        CHECK(i.k == doctest::Approx(m1 * ea * q1 + m2 * std::exp(-d.alpha * p2 / 2) * q2 -
                                     m1 * ea * (d.beta1 * p2 + d.beta2 / (2 * m2) * shx(d.alpha, p2) * shx(d.alpha, p2)))
                         .epsilon(tol));
        CHECK(i.h == doctest::Approx(shx(d.alpha, p1) * shx(d.alpha, p1) / (2 * m1) +
                                     shx(d.alpha, p2) * shx(d.alpha, p2) / (2 * m2))
                         .epsilon(tol));
        PhaseRealization iib(Family::IIb, d, ms);
        CHECK(value(iib.casimir_function(1, 2), z) ==
              doctest::Approx(m1 * std::exp(-d.alpha * p2 / 2) + m2 * std::exp(d.alpha * p1 / 2)).epsilon(tol));
    }
}

TEST_CASE("canonical and deformed brackets") {
    PhaseFunction q1 = [](std::span<const Dual> z) { return z[0]; };
    PhaseFunction p1 = [](std::span<const Dual> z) { return z[1]; };
    std::vector<double> z{0.3, -0.2};
    CHECK(poisson_bracket(q1, p1, z) == 1.0);
    CHECK(poisson_bracket(p1, q1, z) == -1.0);

    Deformation d;
    d.alpha = 0.4;
    PhaseRealization r(Family::IIb, d, {1.5});
    auto fk = r.generator_function(K, 1), fp = r.generator_function(P, 1);
    CHECK(poisson_bracket(fk, fp, z) == doctest::Approx(std::exp(-0.4 * -0.2 / 2) * 1.5).epsilon(1e-14));

    PhaseFunction bad = [](std::span<const Dual> z) { return sqrt(z[0] * 0.0); };
    CHECK_THROWS_AS(poisson_bracket(bad, p1, z), EvaluationError);
}

TEST_CASE("Casimirs: one-particle values and the undeformed example") {
    std::mt19937_64 rng(7);
    for (auto f : kFamilies) {
        auto d = sample(rng);
        PhaseRealization r(f, d, {1.7});
        auto z = random_point(rng, 1);
        CHECK(value(r.casimir_function(1, 1), z) == doctest::Approx(1.7));
        CHECK(std::abs(value(r.casimir_function(2, 1), z)) < 1e-12);
    }
    PhaseRealization u(Family::Trivial, {}, {1, 2});
    std::vector<double> z{0.1, 0.2, 3, 1};
    CHECK(value(u.casimir_function(2, 2), z) == doctest::Approx(-12.5));
    CHECK(tabulated_casimir2(u, 3, 1) == doctest::Approx(-12.5));
}

TEST_CASE("composed C2 matches the tabulated closed forms") {
    std::mt19937_64 rng(11);
    for (auto f : kFamilies)
        for (int trial = 0; trial < 10; ++trial) {
            CAPTURE(family_name(f));
            PhaseRealization r(f, sample(rng), random_masses(rng, 2));
            auto z = random_point(rng, 2);
            const double composed = value(r.casimir_function(2, 2), z);
            CHECK(composed == doctest::Approx(tabulated_casimir2(r, z[2], z[3])).epsilon(1e-11));
        }
}

TEST_CASE("two-particle functions close the deformed brackets") {
    std::mt19937_64 rng(13);
    for (auto f : kFamilies)
        for (int trial = 0; trial < 20; ++trial) {
            CAPTURE(family_name(f));
            PhaseRealization r(f, sample(rng), random_masses(rng, 2));
            auto z = random_point(rng, 2);
            auto v = values(r, z, 2);
            for (int i = 0; i < 4; ++i)
                for (int j = i + 1; j < 4; ++j) {
                    auto x = kGenerators[i], y = kGenerators[j];
                    const double got = poisson_bracket(r.generator_function(x, 2), r.generator_function(y, 2), z);
                    const double want = r.deformed_bracket(x, y, v);
                    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
                }
        }
}

TEST_CASE("involution for N = 2..4 and every potential") {
    std::mt19937_64 rng(17);
    std::vector<Potential> potentials{harmonic_potential(), exponential_potential(), monomial_potential(3),
                                      zero_potential()};
    for (auto f : kFamilies)
        for (int n = 2; n <= 4; ++n)
            for (const auto& pot : potentials) {
                CAPTURE(family_name(f));
                CAPTURE(n);
                CAPTURE(pot.name);
                auto s = build_hamiltonian(PhaseRealization(f, sample(rng), random_masses(rng, n)), pot);
                auto report = certify_involution(s, 20, rng());
                CHECK(report.entries.size() == static_cast<std::size_t>((n - 1) + (n - 1) * (n - 2) / 2));
                CHECK(report.max_relative() < 1e-10);
            }
}

TEST_CASE("deformed Hamiltonians in closed form") {
    const double m1 = 1.2, m2 = 0.8;
    std::vector<double> z{0.3, -0.5, 0.7, 0.2};
    Deformation d;
    d.xi = 0.25;
    d.beta1 = 0.1;
    auto s = build_hamiltonian(PhaseRealization(Family::IaStandard, d, {m1, m2}), harmonic_potential());
    const double e = std::exp(d.xi * m2);
    const double arg = e * mass_fn(2 * d.xi, m1) * z[0] + mass_fn(2 * d.xi, m2) * z[1] + d.beta1 * e * m2 * z[2];
    const double h = z[2] * z[2] / (2 * mass_fn(2 * d.xi, m1)) + z[3] * z[3] / (2 * mass_fn(2 * d.xi, m2)) + arg * arg / 2;
    CHECK(value(s.hamiltonian, z) == doctest::Approx(h).epsilon(1e-13));

    Deformation a;
    a.alpha = 0.6;
    auto t = build_hamiltonian(PhaseRealization(Family::IIb, a, {m1, m2}), zero_potential());
    const double kin = shx(0.6, z[2]) * shx(0.6, z[2]) / (2 * m1) + shx(0.6, z[3]) * shx(0.6, z[3]) / (2 * m2);
    CHECK(value(t.hamiltonian, z) == doctest::Approx(kin).epsilon(1e-13));
}

TEST_CASE("N-particle standard constants") {
    Deformation d;
    d.xi = 0.2;
    std::vector<double> ms{1.0, 0.5, 2.0};
    PhaseRealization r(Family::IaStandard, d, ms);
    std::vector<double> z{0.4, -0.3, 0.9, 0, 0, 0};
    const double fk = value(r.generator_function(K, 3), z);
    const double a1 = std::exp(d.xi * (ms[1] + ms[2])), a2 = std::exp(d.xi * ms[2]);
    CHECK(fk == doctest::Approx(a1 * mass_fn(2 * d.xi, ms[0]) * z[0] + a2 * mass_fn(2 * d.xi, ms[1]) * z[1] +
                                mass_fn(2 * d.xi, ms[2]) * z[2]));
}

TEST_CASE("deformed quantities tend to the undeformed ones linearly") {
    std::vector<double> z{0.3, -0.4, 0.8, -0.6};
    std::vector<double> ms{1.1, 0.7};
    const double c0 = value(PhaseRealization(Family::Trivial, {}, ms).casimir_function(2, 2), z);
    auto gap = [&](double eps) {
        Deformation d;
        d.xi = eps;
        d.beta1 = eps;
        return std::abs(value(PhaseRealization(Family::IaStandard, d, ms).casimir_function(2, 2), z) - c0);
    };
    const double ratio = gap(1e-3) / gap(5e-4);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.01));

    auto gap_iib = [&](double eps) {
        Deformation d;
        d.alpha = eps;
        return std::abs(value(PhaseRealization(Family::IIb, d, ms).generator_function(M, 2), z) - (ms[0] + ms[1]));
    };
    CHECK(gap_iib(1e-3) / gap_iib(5e-4) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("free motion is ballistic") {
    std::vector<double> ms{1.0, 2.0};
    auto s = build_hamiltonian(PhaseRealization(Family::Trivial, {}, ms), zero_potential());
    std::vector<double> z0{0.1, -0.2, 0.5, -0.3};
    auto traj = integrate(s, z0, 2.0, 0.01);
    const auto& z = traj.states.back();
    CHECK(traj.times.back() == doctest::Approx(2.0));
    CHECK(z[0] == doctest::Approx(0.1 + 0.5 * 2.0 / 1.0).epsilon(1e-12));
    CHECK(z[1] == doctest::Approx(-0.2 - 0.3 * 2.0 / 2.0).epsilon(1e-12));
    CHECK(z[2] == 0.5);
    for (std::size_t i = 0; i < traj.conserved.front().size(); ++i) CHECK(traj.relative_drift(i) < 1e-12);
}

TEST_CASE("standard harmonic system conserves C2") {
    Deformation d;
    d.xi = 0.3;
    d.beta1 = 0.2;
    auto s = build_hamiltonian(PhaseRealization(Family::IaStandard, d, {1.0, 1.5}), harmonic_potential());
    auto traj = integrate(s, {0.5, -0.3, 0.2, 0.4}, 10.0, 1e-3);
    REQUIRE(s.integral_names.at(1) == "C2^(2)");
    CHECK(traj.relative_drift(2) < 1e-8);
    CHECK(traj.relative_drift(0) < 1e-8);

    auto mid = integrate(s, {0.5, -0.3, 0.2, 0.4}, 2.0, 1e-3, Integrator::Midpoint);
    CHECK(mid.relative_drift(0) < 1e-6);
    CHECK(mid.relative_drift(2) < 1e-6);
}

TEST_CASE("IIb trajectories approach the undeformed ones at first order") {
    std::vector<double> ms{1.0, 1.3};
    std::vector<double> z0{0.4, -0.1, 0.3, -0.5};
    auto base = integrate(build_hamiltonian(PhaseRealization(Family::Trivial, {}, ms), harmonic_potential()), z0, 2.0,
                          1e-2);
    auto deviation = [&](double a) {
        Deformation d;
        d.alpha = a;
        auto t = integrate(build_hamiltonian(PhaseRealization(Family::IIb, d, ms), harmonic_potential()), z0, 2.0, 1e-2);
        double m = 0;
        for (std::size_t i = 0; i < z0.size(); ++i) m = std::max(m, std::abs(t.states.back()[i] - base.states.back()[i]));
        return m;
    };
    const double d1 = deviation(2e-3), d2 = deviation(1e-3);
    CHECK(d1 < 1e-2);
    CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("potential registry and rejection") {
    CHECK(find_potential("harmonic").has_value());
    CHECK(find_potential("monomial:4")->name == "monomial:4");
    CHECK_FALSE(find_potential("monomial:x").has_value());
    CHECK_FALSE(find_potential("cubic").has_value());
    Potential cusp{"cusp", [](const Dual& u) {
                       using std::abs;
                       using std::sqrt;
                       return sqrt(abs(u));
                   }};
    CHECK_THROWS_AS(check_potential(cusp), std::invalid_argument);
    CHECK_THROWS_AS(build_hamiltonian(PhaseRealization(Family::Trivial, {}, {1.0}), cusp), std::invalid_argument);
}

TEST_CASE("blow-up is reported with the last valid time") {
    Potential quartic{"-u^4", [](const Dual& u) { return -(u * u * u * u); }};
    auto s = build_hamiltonian(PhaseRealization(Family::Trivial, {}, {1.0}), quartic);
    try {
        integrate(s, {2.0, 0.0}, 10.0, 0.05);
        FAIL("expected a blow-up");
    } catch (const BlowUpError& e) {
        CHECK(e.last_valid_time >= 0);
        CHECK(e.last_valid_time < 10.0);
    }
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(PhaseRealization(Family::IIa, {}, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseRealization(Family::Trivial, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseRealization(Family::Trivial, {}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PhaseRealization(Family::IIb, {}, {1.0}), std::invalid_argument);
    auto s = build_hamiltonian(PhaseRealization(Family::Trivial, {}, {1.0}), zero_potential());
    CHECK_THROWS_AS(integrate(s, {0, 0}, 1, 0), std::invalid_argument);
}
