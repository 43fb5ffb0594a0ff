#include "cli.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "galilei/bialgebra.hpp"
#include "galilei/hopf.hpp"
#include "galilei/lattice.hpp"
#include "galilei/poisson.hpp"
#include "galilei/tables.hpp"

namespace galilei::cli {

namespace {

using json = nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

const std::array<std::pair<const char*, ParameterId>, 9> kParameters{{{"xi", param::xi},
                                                                      {"nu", param::nu},
                                                                      {"alpha", param::alpha},
                                                                      {"beta1", param::beta1},
                                                                      {"beta2", param::beta2},
                                                                      {"beta3", param::beta3},
                                                                      {"beta4", param::beta4},
                                                                      {"beta5", param::beta5},
                                                                      {"beta6", param::beta6}}};

/// Integers, fractions p/q and decimals with an optional exponent, read
/// exactly.
Rational parse_rational(const std::string& text) {
    if (text.find('/') != std::string::npos) {
        Rational r;
        if (r.set_str(text, 10) != 0 || r.get_den() == 0) throw UsageError("not a rational number: " + text);
        r.canonicalize();
        return r;
    }
    std::string mantissa = text;
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string::npos) {
        mantissa = text.substr(0, e);
        try {
            exponent = std::stol(text.substr(e + 1));
        } catch (const std::exception&) {
            throw UsageError("not a rational number: " + text);
        }
    }
    std::string digits;
    bool negative = false;
    std::size_t i = 0;
    if (i < mantissa.size() && (mantissa[i] == '-' || mantissa[i] == '+')) negative = mantissa[i++] == '-';
    bool seen_point = false, seen_digit = false;
    for (; i < mantissa.size(); ++i) {
        const char c = mantissa[i];
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            seen_digit = true;
            if (seen_point) --exponent;
        } else {
            throw UsageError("not a rational number: " + text);
        }
    }
    if (!seen_digit) throw UsageError("not a rational number: " + text);
    Rational r(mpz_class(digits, 10));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0)
        r *= scale;
    else
        r /= scale;
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

void emit(const json& report, const std::string& path, std::ostream& out) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw UsageError("cannot write " + path);
    f << text;
}

json check_json(const CheckReport& r) {
    json failures = json::array();
    for (const auto& e : r.entries)
        if (!e.residual.is_zero()) failures.push_back({{"label", e.label}, {"lowest_order", e.residual.lowest_order().value_or(-1)}});
    return {{"passed", r.passed()}, {"entries", r.entries.size()}, {"failures", failures}};
}

/// Prints the first failing entry of the first failing check.
void report_offender(const std::string& command, const std::vector<CheckReport>& checks, std::ostream& err) {
    for (const auto& c : checks)
        for (const auto& e : c.entries)
            if (!e.residual.is_zero()) {
                err << command << ": " << c.name << " fails at " << e.label << ", lowest nonzero order "
                    << e.residual.lowest_order().value_or(-1) << "\n";
                return;
            }
}

json not_implemented(const std::string& command, Family f) {
    return {{"schema", "v1"},
            {"command", command},
            {"family", family_name(f)},
            {"status", "not-implemented"},
            {"message", "the quantum deformation of family IIa is not constructed"}};
}

Family parse_family_or_throw(const std::string& name) {
    auto f = parse_family(name);
    if (!f) throw UsageError("unknown family '" + name + "'");
    return *f;
}

std::string to_str(const Rational& r) { return r.get_str(); }

// ---------------------------------------------------------------- classify

struct ClassifyOptions {
    std::string family, delta, r, json;
    int order = 2;
    std::map<std::string, std::string> params;
};

ParameterValues full_point(const ParameterValues& given) {
    ParameterValues v = given;
    for (const auto& [name, id] : kParameters) v.try_emplace(id, 0);
    return v;
}

TensorElement parse_r(const std::string& text, int n) {
    RMatrixCandidate c(n);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("expected name=value in --r, got '" + item + "'");
        const std::string name = item.substr(0, eq);
        const Series v(parse_rational(item.substr(eq + 1)), n);
        if (name.size() == 2 && name[0] == 'a' && name[1] >= '1' && name[1] <= '6')
            c.a[name[1] - '1'] = v;
        else if (name.size() == 4 && name.starts_with("tau") && name[3] >= '1' && name[3] <= '3')
            c.tau[name[3] - '1'] = v;
        else
            throw UsageError("unknown r-matrix coefficient '" + name + "'");
    }
    return c.tensor();
}

bool family_compatible(Family requested, Family identified) {
    if (requested == identified || requested == Family::General) return true;
    if (requested == Family::Ia)
        return identified == Family::IaStandard || identified == Family::IaNonstandard || identified == Family::Trivial;
    return identified == Family::Trivial;
}

int cmd_classify(const ClassifyOptions& o, std::ostream& out, std::ostream& err) {
    if (o.order < 2) throw UsageError("classify needs --order >= 2");
    const int n = o.order;
    const CommutationTable table = undeformed_table(n);
    ParameterValues given;
    for (const auto& [name, text] : o.params) {
        for (const auto& [pname, id] : kParameters)
            if (name == pname) given[id] = parse_rational(text);
    }
    std::optional<Family> requested;
    if (!o.family.empty()) requested = parse_family_or_throw(o.family);
    if (!o.r.empty() && (!o.delta.empty() || requested || !given.empty()))
        throw UsageError("--r cannot be combined with --family, --delta or parameter values");
    if (!o.delta.empty() && o.delta != "zero" && o.delta != "nine-parameter")
        throw UsageError("--delta must be 'zero' or 'nine-parameter'");
    if (o.delta == "zero" && (requested || !given.empty()))
        throw UsageError("--delta zero takes no family or parameter values");

    json report{{"schema", "v1"}, {"command", "classify"}, {"order", n}};
    json input = json::object();
    if (requested) input["family"] = family_name(*requested);
    if (!o.delta.empty()) input["delta"] = o.delta;
    if (!o.r.empty()) input["r"] = o.r;
    json given_json = json::object();
    for (const auto& [name, id] : kParameters)
        if (given.count(id)) given_json[name] = to_str(given.at(id));
    input["parameters"] = given_json;
    report["input"] = input;

    Cocommutator delta(n);
    std::optional<TensorElement> r;
    bool symbolic = false;
    if (!o.r.empty()) {
        r = parse_r(o.r, n);
        delta = coboundary_delta(*r, table);
    } else if (o.delta == "zero") {
        delta = Cocommutator(n);
    } else if (requested) {
        delta = family_cocommutator(*requested, n);
        for (const auto& [name, id] : kParameters)
            if (given.count(id) && delta.substitute(ParameterValues{{id, Rational(1)}}) == delta)
                throw UsageError("family " + family_name(*requested) + " has no parameter --" + name);
        symbolic = given.empty();
        if (!symbolic) delta = delta.substitute(full_point(given));
    } else if (o.delta == "nine-parameter" || !given.empty()) {
        delta = nine_parameter_cocommutator(n);
        symbolic = given.empty();
        if (!symbolic) delta = delta.substitute(full_point(given));
    } else {
        throw UsageError("classify needs --family, --delta, --r or parameter values");
    }

    json d = json::object();
    for (auto g : kGenerators) d[generator_name(g)] = delta.to_string(g);
    report["delta"] = d;

    json checks = json::object();
    bool ok = true;
    const bool cocycle = cocycle_residual(delta, table).passed();
    checks["cocycle"] = cocycle ? "pass" : "fail";
    ok &= cocycle;
    json constraints = json::array();
    if (cocycle) {
        auto cs = cojacobi_constraints(delta, table);
        for (const auto& c : cs) constraints.push_back(c.to_string());
        checks["cojacobi"] = cs.empty() ? "pass" : "fail";
        ok &= cs.empty();
    } else {
        checks["cojacobi"] = "skipped";
    }
    report["constraints"] = constraints;

    json type = nullptr;
    if (symbolic) {
        const Family f = requested.value_or(Family::General);
        report["family"] = family_name(f);
        std::optional<TensorElement> generic;
        if (f == Family::IaStandard) generic = standard_r(n);
        if (f == Family::IaNonstandard) generic = nonstandard_r(n);
        if (generic) {
            const bool same = coboundary_delta(*generic, table) == delta;
            report["coboundary"] = {{"r", generic->to_string()}, {"reproduces_delta", same}};
            ok &= same;
            type = mcybe_name(mcybe_check(*generic, table).classification);
        } else if (f == Family::Ib || f == Family::IIa || f == Family::IIb) {
            type = "non-coboundary";
        }
    } else {
        auto coords = nine_parameter_coordinates(delta);
        if (!coords) {
            report["family"] = nullptr;
            ok = false;
        } else {
            const Family identified = identify_family(*coords);
            report["family"] = family_name(identified);
            json p = json::object();
            for (const auto& [name, id] : kParameters) p[name] = to_str(coords->at(id));
            report["parameters"] = p;
            if (checks["cojacobi"] == "fail") {
                const auto symbolic_cs = cojacobi_constraints(nine_parameter_cocommutator(n), table);
                json violated = json::array();
                for (const auto& c : violated_constraints(symbolic_cs, *coords)) violated.push_back(c.to_string());
                report["constraints"] = violated;
            }
            if (requested) {
                const bool match = family_compatible(*requested, identified);
                report["family_match"] = match;
                ok &= match;
            }
            if (!r && identified != Family::Trivial && identified != Family::General) {
                auto cob = coboundary_r(*coords, n);
                if (cob) {
                    const bool same = coboundary_delta(*cob, table) == delta;
                    report["coboundary"] = {{"r", cob->to_string()}, {"reproduces_delta", same}};
                    ok &= same;
                    type = mcybe_name(mcybe_check(*cob, table).classification);
                } else {
                    type = "non-coboundary";
                }
            }
        }
    }
    if (r) {
        const auto cls = mcybe_check(*r, table).classification;
        checks["mcybe"] = cls == MCYBEClass::Fails ? "fail" : "pass";
        ok &= cls != MCYBEClass::Fails;
        type = mcybe_name(cls);
        report["coboundary"] = {{"r", r->to_string()}, {"reproduces_delta", true}};
    }
    report["type"] = type;
    report["checks"] = checks;
    report["claims"] = {"cocycle: d([X,Y]) = [dX, Y(x)1 + 1(x)Y] + [X(x)1 + 1(x)X, dY] for all generator pairs",
                        "cojacobi: the dual brackets read off from d satisfy the Jacobi identity",
                        "mcybe: [[r,r]] vanishes (triangular) or is ad-invariant (quasi-triangular)"};
    report["passed"] = ok;
    emit(report, o.json, out);
    if (!ok) err << "classify: checks failed\n";
    return ok ? kPass : kFail;
}

// ---------------------------------------------------------------- verify-hopf

struct HopfOptions {
    std::string family, json;
    int order = kDefaultOrder;
};

int cmd_verify_hopf(const HopfOptions& o, std::ostream& out, std::ostream& err) {
    const Family f = parse_family_or_throw(o.family);
    if (f == Family::IIa) {
        emit(not_implemented("verify-hopf", f), o.json, out);
        err << "verify-hopf: family IIa is not implemented\n";
        return kNotImplemented;
    }
    if (o.order < 1) throw UsageError("--order must be positive");
    QuantumFamily q = [&] {
        if (f == Family::Trivial) return undeformed_family(o.order);
        try {
            return quantum_family(f, o.order);
        } catch (const PreconditionError& e) {
            throw UsageError(e.what());
        }
    }();
    const Cocommutator classical = f == Family::Trivial ? Cocommutator(o.order) : family_cocommutator(f, o.order);
    std::vector<CheckReport> checks{verify_homomorphism(q), verify_coassociativity(q.coproduct, q.table),
                                    verify_counit(q.coproduct),
                                    verify_antipode(q.coproduct, derive_antipode(q.coproduct, q.table), q.table),
                                    verify_casimirs(q), verify_semiclassical(q.coproduct, classical)};
    const std::array<const char*, 6> names{"homomorphism", "coassociativity", "counit", "antipode", "casimirs",
                                           "semiclassical"};
    json report{{"schema", "v1"}, {"command", "verify-hopf"}, {"family", family_name(f)}, {"order", o.order}};
    json cj = json::object();
    bool ok = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        cj[names[i]] = check_json(checks[i]);
        ok &= checks[i].passed();
    }
    report["checks"] = cj;
    report["casimirs"] = {{"C1", q.c1.to_string()}, {"C2", q.c2.to_string()}};
    report["claims"] = {"homomorphism: D([X,Y]) = [D(X), D(Y)] with the deformed brackets",
                        "coassociativity: (D(x)id)D = (id(x)D)D",
                        "counit: (e(x)id)D = (id(x)e)D = id",
                        "antipode: m(S(x)id)D = m(id(x)S)D = e",
                        "casimirs: C1 and C2 are central",
                        "semiclassical: D - sD agrees with the cocommutator at first order"};
    report["passed"] = ok;
    emit(report, o.json, out);
    if (!ok) report_offender("verify-hopf", checks, err);
    return ok ? kPass : kFail;
}

// ---------------------------------------------------------------- verify-rmatrix

struct RMatrixOptions {
    std::string type = "nonstandard", json;
    int order = kDefaultOrder;
    bool qybe = false;
};

int cmd_verify_rmatrix(const RMatrixOptions& o, std::ostream& out, std::ostream& err) {
    RKind kind;
    if (o.type == "standard")
        kind = RKind::Standard;
    else if (o.type == "nonstandard" || o.type == "non-standard")
        kind = RKind::Nonstandard;
    else
        throw UsageError("--type must be 'standard' or 'nonstandard'");
    if (o.order < 2) throw UsageError("--order must be at least 2");
    const QuantumFamily q = r_matrix_family(kind, o.order);
    const UniversalR r = kind == RKind::Standard ? build_standard_R(o.order) : build_nonstandard_R(o.order);

    std::vector<CheckReport> checks{verify_intertwining(r, q), verify_r_semiclassical(r)};
    std::vector<std::string> names{"intertwining", "semiclassical"};
    if (kind == RKind::Nonstandard) {
        checks.push_back(verify_nonstandard_stages(q));
        names.push_back("stages");
    }
    json report{{"schema", "v1"},
                {"command", "verify-rmatrix"},
                {"type", kind == RKind::Standard ? "standard" : "nonstandard"},
                {"order", o.order}};
    json cj = json::object();
    bool ok = true;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        cj[names[i]] = check_json(checks[i]);
        ok &= checks[i].passed();
    }
    if (o.qybe) {
        const auto y = qybe_residual(r.r, q.table);
        json lowest = y.lowest_order ? json(*y.lowest_order) : json(nullptr);
        cj["qybe"] = {{"lowest_nonzero_order", lowest}, {"leading_monomials", y.leading_monomials}};
    }
    report["checks"] = cj;
    report["claims"] = {"intertwining: R D(X) = sD(X) R for every generator",
                        "semiclassical: R = 1(x)1 + r + higher orders",
                        "qybe: R12 R13 R23 - R23 R13 R12 is reported, not asserted"};
    report["passed"] = ok;
    emit(report, o.json, out);
    if (!ok) report_offender("verify-rmatrix", checks, err);
    return ok ? kPass : kFail;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string family = "none", potential = "harmonic", integrator = "rk4", csv, json;
    int particles = 2, every = 100, points = 20;
    double xi = 0, nu = 0, alpha = 0, beta1 = 0, beta2 = 0, beta3 = 0;
    double t_end = 10, dt = 1e-3;
    std::uint64_t seed = 1;
    std::vector<double> masses, q0, p0;
};

int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
    using namespace poisson;
    const Family f = parse_family_or_throw(o.family);
    if (f == Family::IIa) {
        emit(not_implemented("simulate", f), o.json, out);
        err << "simulate: family IIa is not implemented\n";
        return kNotImplemented;
    }
    if (o.particles < 1 || o.particles > kMaxParticles)
        throw UsageError("--N must be between 1 and " + std::to_string(kMaxParticles));
    if (o.every < 1 || o.points < 1) throw UsageError("--every and --points must be positive");
    const int n = o.particles;
    std::vector<double> masses = o.masses.empty() ? std::vector<double>(n, 1.0) : o.masses;
    if (static_cast<int>(masses.size()) != n) throw UsageError("--masses needs N values");
    auto potential = find_potential(o.potential);
    if (!potential) throw UsageError("unknown potential '" + o.potential + "'");

    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<double> z0(2 * n);
    for (auto& v : z0) v = u(rng);
    if (!o.q0.empty()) {
        if (static_cast<int>(o.q0.size()) != n) throw UsageError("--q0 needs N values");
        std::copy(o.q0.begin(), o.q0.end(), z0.begin());
    }
    if (!o.p0.empty()) {
        if (static_cast<int>(o.p0.size()) != n) throw UsageError("--p0 needs N values");
        std::copy(o.p0.begin(), o.p0.end(), z0.begin() + n);
    }
    Integrator method;
    if (o.integrator == "rk4")
        method = Integrator::RK4;
    else if (o.integrator == "midpoint")
        method = Integrator::Midpoint;
    else
        throw UsageError("--integrator must be 'rk4' or 'midpoint'");

    const Deformation d{o.xi, o.nu, o.alpha, o.beta1, o.beta2, o.beta3};
    HamiltonianSystem s = [&] {
        try {
            return build_hamiltonian(PhaseRealization(f, d, masses), *potential);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    json report{{"schema", "v1"}, {"command", "simulate"}, {"family", family_name(f)}, {"N", n}};
    report["masses"] = masses;
    report["parameters"] = {{"xi", o.xi}, {"nu", o.nu}, {"alpha", o.alpha}, {"beta1", o.beta1}, {"beta2", o.beta2},
                            {"beta3", o.beta3}};
    report["potential"] = potential->name;
    report["integrator"] = o.integrator;
    report["dt"] = o.dt;
    report["t_end"] = o.t_end;
    report["seed"] = o.seed;
    report["initial_state"] = z0;

    const PhaseFunction kinetic = s.realization.generator_function(Generator::H, n);
    double undeformed = 0;
    for (int i = 0; i < n; ++i) undeformed += z0[n + i] * z0[n + i] / (2 * masses[i]);
    const double t0 = value(kinetic, z0), h0 = value(s.hamiltonian, z0);
    report["energy_breakdown"] = {{"kinetic", t0}, {"kinetic_undeformed", undeformed}, {"potential", h0 - t0}};

    const InvolutionReport inv = certify_involution(s, o.points, o.seed);
    json entries = json::array();
    for (const auto& e : inv.entries) entries.push_back({{"pair", e.pair}, {"max_relative", e.max_relative}});
    const bool involutive = inv.max_relative() < 1e-10;
    report["involution"] = {{"points", inv.points},
                            {"tolerance", 1e-10},
                            {"max_relative", inv.max_relative()},
                            {"passed", involutive},
                            {"entries", entries}};

    Trajectory traj;
    try {
        traj = integrate(s, z0, o.t_end, o.dt, method);
    } catch (const BlowUpError& e) {
        report["blow_up"] = {{"message", e.what()}, {"last_valid_time", e.last_valid_time}};
        report["passed"] = false;
        emit(report, o.json, out);
        err << "simulate: " << e.what() << " (last valid time " << e.last_valid_time << ")\n";
        return kFail;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::vector<std::string> conserved_names{"H"};
    conserved_names.insert(conserved_names.end(), s.integral_names.begin(), s.integral_names.end());
    json drift = json::object();
    for (std::size_t i = 0; i < conserved_names.size(); ++i) drift[conserved_names[i]] = traj.relative_drift(i);
    report["relative_drift"] = drift;
    report["final_state"] = traj.states.back();

    if (!o.csv.empty()) {
        std::ofstream csv(o.csv);
        if (!csv) throw UsageError("cannot write " + o.csv);
        csv << std::setprecision(17) << "t";
        for (int i = 1; i <= n; ++i) csv << ",q" << i;
        for (int i = 1; i <= n; ++i) csv << ",p" << i;
        csv << ",H,kinetic,potential";
        for (const auto& name : s.integral_names) csv << "," << name;
        csv << "\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            if (k % o.every != 0 && k + 1 != traj.times.size()) continue;
            const auto& z = traj.states[k];
            const auto& c = traj.conserved[k];
            const double kin = value(kinetic, z);
            csv << traj.times[k];
            for (double v : z) csv << "," << v;
            csv << "," << c[0] << "," << kin << "," << c[0] - kin;
            for (std::size_t i = 1; i < c.size(); ++i) csv << "," << c[i];
            csv << "\n";
        }
        report["csv"] = o.csv;
    }
    report["claims"] = {"involution: {H, C2^(k)} and {C2^(k), C2^(l)} vanish at seeded random points",
                        "conservation: H and every C2^(k) stay constant along the flow"};
    report["passed"] = involutive;
    emit(report, o.json, out);
    if (!involutive) err << "simulate: involution certificate failed\n";
    return involutive ? kPass : kFail;
}

// ---------------------------------------------------------------- pde

struct PdeOptions {
    double alpha = 0.05, mass = 1, length = 20, t_end = 1, dt = 1e-2, sigma = 1;
    int ratio = 1, refine = 0, snapshots = 1;
    std::string boundary = "periodic", mode = "heat", scheme = "crank-nicolson", csv, json;
    bool check_symmetry = false;
};

json deviations_json(const std::vector<lattice::Deviation>& ds) {
    json a = json::array();
    for (const auto& d : ds)
        a.push_back({{"name", d.name}, {"deviation", d.deviation}, {"tolerance", d.tolerance}, {"passed", d.passed()}});
    return a;
}

int cmd_pde(const PdeOptions& o, std::ostream& out, std::ostream& err) {
    using namespace lattice;
    Mode mode;
    if (o.mode == "heat")
        mode = Mode::Heat;
    else if (o.mode == "schrodinger")
        mode = Mode::Schrodinger;
    else
        throw UsageError("--mode must be 'heat' or 'schrodinger'");
    Scheme scheme;
    if (o.scheme == "exact")
        scheme = Scheme::Exact;
    else if (o.scheme == "crank-nicolson")
        scheme = Scheme::CrankNicolson;
    else if (o.scheme == "explicit")
        scheme = Scheme::Explicit;
    else
        throw UsageError("--scheme must be 'exact', 'crank-nicolson' or 'explicit'");
    Boundary boundary;
    if (o.boundary == "periodic")
        boundary = Boundary::Periodic;
    else if (o.boundary == "dirichlet")
        boundary = Boundary::Dirichlet;
    else
        throw UsageError("--boundary must be 'periodic' or 'dirichlet'");
    if (!(o.alpha > 0) || !(o.mass > 0) || !(o.length > 0) || !(o.sigma > 0) || !(o.t_end >= 0) || !(o.dt > 0))
        throw UsageError("alpha, mass, length, sigma and dt must be positive and t-end non-negative");
    if (o.refine == 1 || o.refine < 0) throw UsageError("--refine takes 0 (off) or at least 2 levels");
    if (o.check_symmetry && boundary != Boundary::Periodic) throw UsageError("--check-symmetry needs a periodic grid");

    json report{{"schema", "v1"}, {"command", "pde"}};
    report["settings"] = {{"alpha", o.alpha}, {"mass", o.mass},       {"length", o.length},
                          {"ratio", o.ratio}, {"boundary", o.boundary}, {"mode", o.mode},
                          {"scheme", o.scheme}, {"t_end", o.t_end},   {"dt", o.dt},
                          {"sigma", o.sigma}};
    bool ok = true;

    const double h = o.alpha / (2.0 * o.ratio);
    const bool fits = o.ratio >= 1 && o.length / h <= static_cast<double>(kMaxNodes);
    if (o.ratio < 1) throw UsageError("--ratio must be a positive integer");

    if (!fits) {
        if (o.check_symmetry || !o.csv.empty() || o.refine > 0)
            throw UsageError("grid exceeds " + std::to_string(kMaxNodes) + " nodes; only the continuum comparison is available");
        report["grid"] = nullptr;
        report["continuum"] = {{"method", "fourier-bound"},
                               {"max_deviation", continuum_deviation_bound(o.alpha, o.sigma, o.mass, o.t_end, mode)}};
    } else {
        Grid g;
        try {
            g = make_grid(o.alpha, o.length, o.ratio, boundary);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        report["grid"] = {{"nodes", g.nodes}, {"spacing", g.spacing()}, {"length", g.length()}};
        if (boundary == Boundary::Periodic && g.nodes <= 8192)
            report["plane_wave_deviation"] = plane_wave_deviation(g);
        report["laplacian_asymmetry"] = laplacian_asymmetry(g);

        const LatticeField initial{g, o.mass, 0, gaussian(g, o.sigma)};
        HSEOptions ho{mode, scheme, o.t_end, o.dt, std::max(1, o.snapshots)};
        std::vector<LatticeField> snaps;
        try {
            snaps = solve_hse(initial, ho);
        } catch (const StabilityError& e) {
            report["instability"] = e.what();
            report["passed"] = false;
            emit(report, o.json, out);
            err << "pde: " << e.what() << "\n";
            return kFail;
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        double dev = 0;
        const auto& last = snaps.back();
        for (std::int64_t j = 0; j < g.nodes; ++j)
            dev = std::max(dev, std::abs(last.values[j] - continuum_gaussian(g.x(j), last.time, o.sigma, o.mass, mode)));
        report["continuum"] = {{"method", "grid"}, {"max_deviation", dev}};

        if (!o.csv.empty()) {
            std::ofstream csv(o.csv);
            if (!csv) throw UsageError("cannot write " + o.csv);
            csv << std::setprecision(17) << "t,x,re,im\n";
            for (const auto& s : snaps)
                for (std::int64_t j = 0; j < g.nodes; ++j)
                    csv << s.time << "," << g.x(j) << "," << s.values[j].real() << "," << s.values[j].imag() << "\n";
            report["csv"] = o.csv;
        }

        if (o.check_symmetry) {
            Field psi = initial.values;
            const SymmetryReport sr = verify_symmetry({g, o.mass, 0, psi}, ho);
            report["symmetry"] = {{"identities", deviations_json(sr.identities)},
                                  {"commuting", deviations_json(sr.commuting)},
                                  {"passed", sr.passed()}};
            ok &= sr.passed();
        }
    }

    if (o.refine >= 2) {
        const ConvergenceStudy cs = convergence_study(o.alpha, o.refine, o.mass, o.length, o.sigma, o.t_end, mode, o.ratio);
        bool in_range = true;
        for (double p : cs.exponents) in_range &= p >= 1.8 && p <= 2.2;
        report["convergence"] = {{"alphas", cs.alphas},
                                 {"errors", cs.errors},
                                 {"exponents", cs.exponents},
                                 {"expected_range", {1.8, 2.2}},
                                 {"passed", in_range}};
        ok &= in_range;
    }
    report["claims"] = {"stencil: (sinh(alpha d/4)/(alpha/4))^2 acts as (4/alpha^2)(S^-1 - 2 + S) with S = e^{-alpha d/2}",
                        "symmetry: K, P, M map solutions to solutions and satisfy the deformed brackets on the grid",
                        "continuum: lattice solutions converge to the heat kernel at second order in alpha"};
    report["passed"] = ok;
    emit(report, o.json, out);
    if (!ok) err << "pde: checks failed\n";
    return ok ? kPass : kFail;
}

const char* kSimulateColumns =
    "CSV columns: t, q1..qN, p1..pN, H, kinetic (f_H of the coproduct), potential (H - kinetic), C1^(N), "
    "C2^(2)..C2^(N).";
const char* kPdeColumns = "CSV columns: t, x, re, im (one row per node and snapshot; snapshot 0 is the initial field).";

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Extended Galilei bialgebras, quantum deformations, integrable systems and lattice HSE"};
    app.name("galilei");
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML/INI file; flags override it");

    ClassifyOptions co;
    auto* classify = app.add_subcommand("classify", "Cocycle, co-Jacobi, family and coboundary analysis");
    classify->add_option("--family", co.family, "Family tag (Ia, Ia-standard, Ia-nonstandard, Ib, IIa, IIb, trivial)");
    classify->add_option("--delta", co.delta, "'zero' or 'nine-parameter'");
    classify->add_option("--r", co.r, "r-matrix coefficients, e.g. a1=1,a3=2,tau1=1/2");
    classify->add_option("--order", co.order, "Truncation order")->capture_default_str();
    classify->add_option("--json", co.json, "Write the report here instead of stdout");
    for (const auto& [name, id] : kParameters) {
        classify->add_option_function<std::string>(
            std::string("--") + name, [&co, n = std::string(name)](const std::string& v) { co.params[n] = v; },
            "Parameter value (integer, p/q or decimal)");
    }

    HopfOptions ho;
    auto* hopf = app.add_subcommand("verify-hopf", "Hopf-algebra residual suite at truncation order N");
    hopf->add_option("--family", ho.family, "Ia-standard, Ia-nonstandard, Ib, IIb (IIa exits 3)")->required();
    hopf->add_option("--order", ho.order, "Truncation order")->capture_default_str();
    hopf->add_option("--json", ho.json, "Write the report here instead of stdout");

    RMatrixOptions ro;
    auto* rmat = app.add_subcommand("verify-rmatrix", "Universal R-matrix intertwining and QYBE residual");
    rmat->add_option("--type", ro.type, "standard or nonstandard")->capture_default_str();
    rmat->add_option("--order", ro.order, "Truncation order")->capture_default_str();
    rmat->add_flag("--qybe", ro.qybe, "Report the lowest nonzero order of the QYBE residual");
    rmat->add_option("--json", ro.json, "Write the report here instead of stdout");

    SimulateOptions so;
    auto* sim = app.add_subcommand("simulate", "Integrable N-particle system: involution certificate and trajectory");
    sim->footer(kSimulateColumns);
    sim->add_option("--family", so.family, "none, standard, nonstandard, Ib or IIb")->capture_default_str();
    sim->add_option("--N", so.particles, "Number of particles (1-8)")->capture_default_str();
    sim->add_option("--masses", so.masses, "Comma-separated masses (default 1)")->delimiter(',');
    sim->add_option("--potential", so.potential, "harmonic, exponential, monomial:<k> or none")->capture_default_str();
    for (auto [name, ptr] : {std::pair{"--xi", &so.xi}, {"--nu", &so.nu}, {"--alpha", &so.alpha},
                             {"--beta1", &so.beta1}, {"--beta2", &so.beta2}, {"--beta3", &so.beta3}})
        sim->add_option(name, *ptr, "Deformation parameter")->capture_default_str();
    sim->add_option("--t-end", so.t_end, "Final time")->capture_default_str();
    sim->add_option("--dt", so.dt, "Time step")->capture_default_str();
    sim->add_option("--integrator", so.integrator, "rk4 or midpoint")->capture_default_str();
    sim->add_option("--q0", so.q0, "Initial positions")->delimiter(',');
    sim->add_option("--p0", so.p0, "Initial momenta")->delimiter(',');
    sim->add_option("--seed", so.seed, "Seed for initial data and certification points")->capture_default_str();
    sim->add_option("--points", so.points, "Random points for the involution certificate")->capture_default_str();
    sim->add_option("--every", so.every, "Write every k-th step to the CSV")->capture_default_str();
    sim->add_option("--csv", so.csv, "Trajectory CSV path");
    sim->add_option("--json", so.json, "Write the report here instead of stdout");

    PdeOptions po;
    auto* pde = app.add_subcommand("pde", "Lattice heat-Schrodinger equation with quantum-algebra symmetry");
    pde->footer(kPdeColumns);
    pde->add_option("--alpha", po.alpha, "Deformation parameter")->capture_default_str();
    pde->add_option("--ratio", po.ratio, "alpha/(2h), a positive integer")->capture_default_str();
    pde->add_option("--mass", po.mass, "Mass m")->capture_default_str();
    pde->add_option("--length", po.length, "Domain length")->capture_default_str();
    pde->add_option("--boundary", po.boundary, "periodic or dirichlet")->capture_default_str();
    pde->add_option("--mode", po.mode, "heat or schrodinger")->capture_default_str();
    pde->add_option("--scheme", po.scheme, "exact, crank-nicolson or explicit")->capture_default_str();
    pde->add_option("--t-end", po.t_end, "Final time")->capture_default_str();
    pde->add_option("--dt", po.dt, "Time step")->capture_default_str();
    pde->add_option("--sigma", po.sigma, "Width of the Gaussian initial data")->capture_default_str();
    pde->add_option("--snapshots", po.snapshots, "Snapshots after t = 0")->capture_default_str();
    pde->add_option("--refine", po.refine, "Levels of the convergence study (0 = off)")->capture_default_str();
    pde->add_flag("--check-symmetry", po.check_symmetry, "Verify the generator identities and commuting diagrams");
    pde->add_option("--csv", po.csv, "Snapshot CSV path");
    pde->add_option("--json", po.json, "Write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (classify->parsed()) return cmd_classify(co, out, err);
        if (hopf->parsed()) return cmd_verify_hopf(ho, out, err);
        if (rmat->parsed()) return cmd_verify_rmatrix(ro, out, err);
        if (sim->parsed()) return cmd_simulate(so, out, err);
        if (pde->parsed()) return cmd_pde(po, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const NotImplementedError& e) {
        err << e.what() << "\n";
        return kNotImplemented;
    }
    return kUsage;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv{"galilei"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace galilei::cli
