#include "selfcheck.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

#include "collision.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "thermo.hpp"

namespace coheat {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return std::string(buf);
}

CollisionConfig make_config(double t_hot, double t_cold, double p, double dphi,
                            double gamma, double delta) {
    CollisionConfig cfg;
    cfg.hot.temperature = t_hot;
    cfg.cold.temperature = t_cold;
    cfg.hot.coherence_weight = p;
    cfg.cold.coherence_weight = p;
    cfg.cold.phase = 0.0;
    cfg.hot.phase = dphi;
    cfg.coupling.gamma = gamma;
    cfg.coupling.delta = delta;
    return cfg;
}

double steady_hot(const CollisionConfig& cfg) {
    SteadyOptions opts;
    return steady_state(cfg, opts).current_hot;
}

CheckResult run_one(const std::string& name,
                    const std::function<CheckResult()>& body) {
    try {
        CheckResult r = body();
        r.name = name;
        return r;
    } catch (const std::exception& e) {
        return {name, false, std::string("exception: ") + e.what()};
    }
}

CheckResult check_full_swap_formula() {
    struct Spot {
        double p, beta_h, beta_c, delta, dphi;
    };
    const Spot spots[] = {
        {0.0, 0.5, 1.0, kPi / 4, 0.0},
        {0.8, 1.0, 1.0, kPi / 4, kPi / 2},
        {0.8, 0.5, 1.0, kPi / 4, 5 * kPi / 4},
        {0.3, 0.5, 1.0, kPi / 3, 3 * kPi / 2},
    };
    double worst = 0.0;
    for (const Spot& s : spots) {
        CollisionConfig cfg = make_config(1.0 / s.beta_h, 1.0 / s.beta_c, s.p,
                                          s.dphi, kPi / 2, s.delta);
        const double sim = steady_hot(cfg);
        const double exact = steady_current_full_swap(s.p, s.beta_h, s.beta_c,
                                                      s.delta, s.dphi);
        worst = std::max(worst, std::abs(sim - exact));
    }
    return {"", worst <= 1e-10, fmt("max |sim - formula| = %.3g", worst)};
}

CheckResult check_critical_p() {
    const double beta_h = 0.5, beta_c = 1.0;
    const double delta = kPi / 4, dphi = 3 * kPi / 2;
    auto exact = critical_p_full_swap(beta_h, beta_c, delta, dphi);
    if (!exact)
        return {"", false, "closed form reports the reversal as unreachable"};
    CollisionConfig cfg = make_config(1.0 / beta_h, 1.0 / beta_c, 0.0, dphi,
                                      kPi / 2, delta);
    SteadyOptions opts;
    auto numeric = critical_p_numeric(cfg, dphi, 1e-8, opts);
    if (!numeric)
        return {"", false, "bisection reports the reversal as unreachable"};
    const double dev = std::abs(*numeric - *exact);
    return {"", dev <= 1e-6, fmt("|bisection - formula| = %.3g", dev)};
}

CheckResult check_full_swap_conductance() {
    double worst = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
        for (double delta : {kPi / 8, kPi / 4, kPi / 2}) {
            const double closed = conductance_thermal_analytic(t, kPi / 2, delta);
            const double s = 1.0 / std::cosh(0.5 / t);
            const double first_order =
                s * s * std::sin(delta) * std::sin(delta) / (4 * t * t);
            worst = std::max(worst,
                             std::abs(closed - first_order) / first_order);
        }
    }
    return {"", worst <= 1e-12, fmt("max rel dev = %.3g", worst)};
}

CheckResult check_high_t_limit() {
    const double gamma = kPi / 32, delta = kPi / 4;
    const double exact = conductance_thermal_analytic(50.0, gamma, delta);
    const double limit = conductance_high_t_limit(gamma, delta, 50.0);
    const double rel = std::abs(limit - exact) / exact;
    if (rel > 1e-3)
        return {"", false, fmt("rel dev at T=50 is %.3g", rel)};
    const double ratio = conductance_high_t_limit(gamma, delta, 6.0) /
                         conductance_high_t_limit(gamma, delta, 3.0);
    const double law = std::abs(ratio - 0.25);
    return {"", law <= 1e-12,
            fmt("rel dev %.3g, quarter-law dev %.3g", rel, law)};
}

CheckResult check_phase_covariance() {
    const double dphi = kPi / 2;
    CollisionConfig a = make_config(2.0, 1.0, 0.8, dphi, kPi / 32, kPi / 4);
    CollisionConfig b = a;
    b.cold.phase = 1.1;
    b.hot.phase = 1.1 + dphi;
    const double dev = std::abs(steady_hot(a) - steady_hot(b));
    return {"", dev <= 1e-10, fmt("|J(0,dphi) - J(s,s+dphi)| = %.3g", dev)};
}

CheckResult check_composition() {
    CollisionConfig cfg = make_config(2.0, 1.0, 0.8, kPi / 2, 0.37, 0.61);
    const Mat u = collision_unitary(cfg.coupling);
    const Mat defect = u * u.adjoint() - Mat::Identity(16, 16);
    const double unitary_dev = defect.cwiseAbs().maxCoeff();

    std::mt19937_64 rng(42);
    std::normal_distribution<double> gauss;
    Mat a(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            a(i, j) = cplx(gauss(rng), gauss(rng));
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();

    Mat composed = rho;
    const Eigen::Matrix4cd v = swap_gate(cfg.coupling.delta);
    const Eigen::Matrix4cd ua = swap_gate(cfg.coupling.gamma);
    apply_pair_gate(composed, v, 0, 1, 4);
    apply_pair_gate(composed, ua, 0, 2, 4);
    apply_pair_gate(composed, ua, 1, 3, 4);
    const Mat direct = u * rho * u.adjoint();
    const double dev = (composed - direct).cwiseAbs().maxCoeff();
    return {"", dev <= 1e-12 && unitary_dev <= 1e-12,
            fmt("gate-path dev %.3g, unitarity dev %.3g", dev, unitary_dev)};
}

CheckResult check_energy_commutator() {
    // The pair coupling is the exchange interaction XX + YY + ZZ; it must
    // commute with the resonant local Hamiltonian, which is what makes the
    // swapped quantum worth omega on both sides of every collision.
    Mat sx(2, 2), sy(2, 2), sz(2, 2), id = Mat::Identity(2, 2);
    sx << 0, 1, 1, 0;
    sy << 0, cplx(0, -1), cplx(0, 1), 0;
    sz << 1, 0, 0, -1;
    const Mat h_int = kron(sx, sx) + kron(sy, sy) + kron(sz, sz);
    const Mat h_loc = 0.5 * (kron(sz, id) + kron(id, sz));
    const double dev = (h_int * h_loc - h_loc * h_int).cwiseAbs().maxCoeff();
    return {"", dev <= 1e-12, fmt("commutator max entry %.3g", dev)};
}

CheckResult check_zero_weight_reservoir() {
    AncillaSpec spec;
    spec.temperature = 1.7;
    spec.phase = 2.3;
    spec.coherence_weight = 0.0;
    const Mat coh = coherent_ancilla(spec).mat();
    const Mat therm = thermal_state(spec).mat();
    const double dev = (coh - therm).cwiseAbs().maxCoeff();
    return {"", dev <= 1e-15, fmt("max entry dev %.3g", dev)};
}

CheckResult check_equal_temperature_antisymmetry() {
    // At beta_h = beta_c the thermal term of the current vanishes and the
    // coherent term is odd in the phase difference.
    const double dphi = 0.7;
    CollisionConfig plus = make_config(1.0, 1.0, 0.8, dphi, kPi / 32, kPi / 4);
    CollisionConfig minus =
        make_config(1.0, 1.0, 0.8, 2 * kPi - dphi, kPi / 32, kPi / 4);
    const double sum = steady_hot(plus) + steady_hot(minus);
    return {"", std::abs(sum) <= 1e-10,
            fmt("|J(dphi) + J(-dphi)| = %.3g", std::abs(sum))};
}

CheckResult check_direction_rule() {
    // Both closed-form terms are negative for phase differences inside
    // (0, pi), for any coherence weight.
    double worst = -1.0;
    for (double dphi : {0.3 * kPi, 0.6 * kPi, 0.9 * kPi}) {
        for (double p : {0.2, 0.9}) {
            CollisionConfig cfg =
                make_config(2.0, 1.0, p, dphi, kPi / 2, kPi / 4);
            worst = std::max(worst, steady_hot(cfg));
        }
    }
    return {"", worst < 0.0, fmt("max J over the grid = %.3g", worst)};
}

}  // namespace

std::vector<CheckResult> run_selfcheck() {
    std::vector<CheckResult> out;
    out.push_back(run_one("full swap current matches the closed form",
                          check_full_swap_formula));
    out.push_back(run_one("critical weight: bisection matches the closed form",
                          check_critical_p));
    out.push_back(run_one("full swap conductance reduces to the linear term",
                          check_full_swap_conductance));
    out.push_back(run_one("high temperature conductance limit",
                          check_high_t_limit));
    out.push_back(run_one("current depends only on the phase difference",
                          check_phase_covariance));
    out.push_back(run_one("composed pair gates equal the monolithic unitary",
                          check_composition));
    out.push_back(run_one("exchange coupling conserves local energy",
                          check_energy_commutator));
    out.push_back(run_one("zero coherence weight gives the thermal reservoir",
                          check_zero_weight_reservoir));
    out.push_back(run_one("equal temperature current is odd in the phase",
                          check_equal_temperature_antisymmetry));
    out.push_back(run_one("heat flows hot to cold inside the thermal phase range",
                          check_direction_rule));
    return out;
}

}  // namespace coheat
