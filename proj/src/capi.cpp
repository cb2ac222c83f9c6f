#include "../include/coheat.h"

#include <cstdio>
#include <cstring>
#include <new>
#include <string>
#include <vector>

#include "collision.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "selfcheck.hpp"
#include "thermo.hpp"

using namespace coheat;

struct coheat_config {
    CollisionConfig cfg;
    SteadyOptions opts;
};

struct coheat_trajectory {
    std::vector<TrajectoryRecord> records;
};

namespace {

thread_local std::string g_last_error = "no error";

coheat_status fail(coheat_status s, const std::string& msg) {
    g_last_error = msg;
    return s;
}

template <typename F>
coheat_status wrap(F&& body) {
    try {
        body();
        return COHEAT_OK;
    } catch (const Error& e) {
        return fail(static_cast<coheat_status>(e.status()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(COHEAT_ERR_RESOURCE, "out of memory");
    } catch (const std::exception& e) {
        return fail(COHEAT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(COHEAT_ERR_INTERNAL, "unknown failure");
    }
}

coheat_status require(bool ok, const char* what) {
    if (ok) return COHEAT_OK;
    return fail(COHEAT_ERR_ARGUMENT, std::string("null or invalid argument: ") + what);
}

AncillaSpec& pick_reservoir(coheat_config* cfg, int which) {
    if (which == COHEAT_RES_HOT) return cfg->cfg.hot;
    if (which == COHEAT_RES_COLD) return cfg->cfg.cold;
    throw ArgumentError("reservoir selector must be COHEAT_RES_HOT or COHEAT_RES_COLD");
}

const AncillaSpec& pick_reservoir(const coheat_config* cfg, int which) {
    return pick_reservoir(const_cast<coheat_config*>(cfg), which);
}

void write_matrix(const Mat& m, double* re, double* im) {
    const int n = static_cast<int>(m.rows());
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            re[i * n + j] = m(i, j).real();
            im[i * n + j] = m(i, j).imag();
        }
    }
}

coheat_steady_result to_c(const SteadyResult& r) {
    return {r.current_hot, r.current_cold, r.converged_at, r.tolerance_used};
}

}  // namespace

extern "C" {

const char* coheat_last_error(void) { return g_last_error.c_str(); }

const char* coheat_status_name(coheat_status s) {
    switch (s) {
        case COHEAT_OK: return "ok";
        case COHEAT_ERR_INTERNAL: return "internal";
        case COHEAT_ERR_PARSE: return "parse";
        case COHEAT_ERR_VALIDATION: return "validation";
        case COHEAT_ERR_CONVERGENCE: return "convergence";
        case COHEAT_ERR_RESOURCE: return "resource";
        case COHEAT_ERR_NUMERICAL: return "numerical";
        case COHEAT_ERR_ARGUMENT: return "argument";
        default: return "unknown";
    }
}

coheat_status coheat_config_create(coheat_config** out) {
    if (coheat_status s = require(out != nullptr, "out")) return s;
    return wrap([&] { *out = new coheat_config(); });
}

void coheat_config_destroy(coheat_config* cfg) { delete cfg; }

coheat_status coheat_config_copy(const coheat_config* cfg, coheat_config** out) {
    if (coheat_status s = require(cfg && out, "cfg/out")) return s;
    return wrap([&] { *out = new coheat_config(*cfg); });
}

coheat_status coheat_config_set_reservoir(coheat_config* cfg, int which,
                                          double temperature, double phase,
                                          double coherence_weight, double omega) {
    if (coheat_status s = require(cfg != nullptr, "cfg")) return s;
    return wrap([&] {
        AncillaSpec next;
        next.temperature = temperature;
        next.phase = phase;
        next.coherence_weight = coherence_weight;
        next.frequency = omega;
        next.validate();
        pick_reservoir(cfg, which) = next;
    });
}

coheat_status coheat_config_set_coupling(coheat_config* cfg, double gamma, double delta) {
    if (coheat_status s = require(cfg != nullptr, "cfg")) return s;
    return wrap([&] {
        CouplingParams next{gamma, delta};
        next.validate();
        cfg->cfg.coupling = next;
    });
}

coheat_status coheat_config_set_initial_system(coheat_config* cfg,
                                               const double* re, const double* im) {
    if (coheat_status s = require(cfg != nullptr, "cfg")) return s;
    return wrap([&] {
        if (!re && !im) {
            cfg->cfg.initial_system = ground_state_system();
            return;
        }
        if (!re || !im)
            throw ArgumentError("initial system needs both re and im or neither");
        Mat m(4, 4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                m(i, j) = cplx(re[i * 4 + j], im[i * 4 + j]);
        cfg->cfg.initial_system = DensityMatrix(m, {2, 2});
    });
}

coheat_status coheat_config_set_steady_opts(coheat_config* cfg, double tol,
                                            int window, long max_steps) {
    if (coheat_status s = require(cfg != nullptr, "cfg")) return s;
    return wrap([&] {
        SteadyOptions next{tol, window, max_steps};
        next.validate();
        cfg->opts = next;
    });
}

coheat_status coheat_config_get(const coheat_config* cfg, const char* key, double* out) {
    if (coheat_status s = require(cfg && key && out, "cfg/key/out")) return s;
    return wrap([&] {
        const std::string k(key);
        auto spec_field = [&](const AncillaSpec& spec,
                              const std::string& field) -> double {
            if (field == "temperature") return spec.temperature;
            if (field == "phase") return spec.phase;
            if (field == "coherence_weight") return spec.coherence_weight;
            if (field == "frequency") return spec.frequency;
            throw ArgumentError("unknown config key: " + k);
        };
        if (k.rfind("hot.", 0) == 0) {
            *out = spec_field(cfg->cfg.hot, k.substr(4));
        } else if (k.rfind("cold.", 0) == 0) {
            *out = spec_field(cfg->cfg.cold, k.substr(5));
        } else if (k == "coupling.gamma") {
            *out = cfg->cfg.coupling.gamma;
        } else if (k == "coupling.delta") {
            *out = cfg->cfg.coupling.delta;
        } else if (k == "steady.tol") {
            *out = cfg->opts.tol;
        } else if (k == "steady.window") {
            *out = static_cast<double>(cfg->opts.window);
        } else if (k == "steady.cap") {
            *out = static_cast<double>(cfg->opts.cap);
        } else {
            throw ArgumentError("unknown config key: " + k);
        }
    });
}

coheat_status coheat_thermal_state(const coheat_config* cfg, int which,
                                   double* re, double* im) {
    if (coheat_status s = require(cfg && re && im, "cfg/re/im")) return s;
    return wrap([&] {
        write_matrix(thermal_state(pick_reservoir(cfg, which)).mat(), re, im);
    });
}

coheat_status coheat_ancilla_state(const coheat_config* cfg, int which,
                                   double* re, double* im) {
    if (coheat_status s = require(cfg && re && im, "cfg/re/im")) return s;
    return wrap([&] {
        write_matrix(coherent_ancilla(pick_reservoir(cfg, which)).mat(), re, im);
    });
}

coheat_status coheat_run_trajectory(const coheat_config* cfg, long n_max,
                                    coheat_trajectory** out) {
    if (coheat_status s = require(cfg && out, "cfg/out")) return s;
    return wrap([&] {
        if (n_max < 1) throw ArgumentError("n_max must be at least 1");
        auto traj = new coheat_trajectory();
        try {
            traj->records = run_trajectory(cfg->cfg, n_max);
        } catch (...) {
            delete traj;
            throw;
        }
        *out = traj;
    });
}

void coheat_trajectory_destroy(coheat_trajectory* traj) { delete traj; }

long coheat_trajectory_length(const coheat_trajectory* traj) {
    return traj ? static_cast<long>(traj->records.size()) : 0;
}

coheat_status coheat_trajectory_heats(const coheat_trajectory* traj,
                                      double* heat_hot, double* heat_cold) {
    if (coheat_status s = require(traj && heat_hot && heat_cold, "traj/heat arrays"))
        return s;
    for (size_t i = 0; i < traj->records.size(); ++i) {
        heat_hot[i] = traj->records[i].heat_hot;
        heat_cold[i] = traj->records[i].heat_cold;
    }
    return COHEAT_OK;
}

coheat_status coheat_trajectory_state(const coheat_trajectory* traj, long step,
                                      double* re, double* im) {
    if (coheat_status s = require(traj && re && im, "traj/re/im")) return s;
    if (step < 1 || step > static_cast<long>(traj->records.size()))
        return fail(COHEAT_ERR_ARGUMENT, "step out of range (1-based)");
    write_matrix(traj->records[step - 1].system_state.mat(), re, im);
    return COHEAT_OK;
}

coheat_status coheat_steady_state(const coheat_config* cfg, coheat_steady_result* out) {
    if (coheat_status s = require(cfg && out, "cfg/out")) return s;
    return wrap([&] { *out = to_c(steady_state(cfg->cfg, cfg->opts)); });
}

coheat_status coheat_steady_batch(const coheat_config* cfg,
                                  const double* base_t, const double* delta_t,
                                  const double* dphi, const double* p,
                                  long n, int workers,
                                  coheat_steady_result* out) {
    if (coheat_status s = require(cfg && out, "cfg/out")) return s;
    return wrap([&] {
        if (n < 1) throw ArgumentError("batch size must be at least 1");
        std::vector<SteadyPoint> points(n);
        for (long i = 0; i < n; ++i) {
            if (base_t) points[i].base_t = base_t[i];
            if (delta_t) points[i].delta_t = delta_t[i];
            if (dphi) points[i].dphi = dphi[i];
            if (p) points[i].p = p[i];
        }
        auto results = steady_batch(cfg->cfg, cfg->opts, points, workers);
        for (long i = 0; i < n; ++i) out[i] = to_c(results[i]);
    });
}

double coheat_steady_full_swap(double p, double beta_h, double beta_c,
                               double delta, double dphi) {
    return steady_current_full_swap(p, beta_h, beta_c, delta, dphi);
}

coheat_status coheat_critical_p_full_swap(double beta_h, double beta_c,
                                          double delta, double dphi,
                                          double* p_out, int* reachable) {
    if (coheat_status s = require(p_out && reachable, "p_out/reachable")) return s;
    return wrap([&] {
        auto p = critical_p_full_swap(beta_h, beta_c, delta, dphi);
        *reachable = p.has_value() ? 1 : 0;
        if (p) *p_out = *p;
    });
}

coheat_status coheat_critical_p_numeric(const coheat_config* cfg, double dphi,
                                        double bisection_tol,
                                        double* p_out, int* reachable) {
    if (coheat_status s = require(cfg && p_out && reachable, "cfg/p_out/reachable"))
        return s;
    return wrap([&] {
        auto p = critical_p_numeric(cfg->cfg, dphi, bisection_tol, cfg->opts);
        *reachable = p.has_value() ? 1 : 0;
        if (p) *p_out = *p;
    });
}

coheat_status coheat_conductance_fit(const coheat_config* cfg, double base_t,
                                     double dphi, double p,
                                     const double* dt_grid, int n_grid,
                                     int workers, coheat_fit_result* out) {
    if (coheat_status s = require(cfg && out, "cfg/out")) return s;
    return wrap([&] {
        std::vector<double> grid;
        if (dt_grid) {
            if (n_grid < 2) throw ArgumentError("fit grid needs at least 2 points");
            grid.assign(dt_grid, dt_grid + n_grid);
        } else {
            grid = default_dt_grid();
        }
        LinearFit fit =
            conductance_fit(cfg->cfg, base_t, dphi, p, grid, cfg->opts, workers);
        *out = {fit.slope, fit.intercept, fit.residual_rms};
    });
}

double coheat_conductance_thermal(double temperature, double gamma, double delta) {
    return conductance_thermal_analytic(temperature, gamma, delta);
}

double coheat_conductance_high_t(double gamma, double delta, double temperature) {
    return conductance_high_t_limit(gamma, delta, temperature);
}

void coheat_linear_response_full_swap(double temperature, double p, double delta,
                                      double dphi, double* lambda1, double* c1) {
    ResponseCoefficients r = linear_response_full_swap(temperature, p, delta, dphi);
    if (lambda1) *lambda1 = r.lambda1;
    if (c1) *c1 = r.c1;
}

coheat_status coheat_entropy_ledger(const coheat_config* cfg, long n_collisions,
                                    long cap, coheat_entropy_row* rows) {
    if (coheat_status s = require(cfg && rows, "cfg/rows")) return s;
    return wrap([&] {
        if (n_collisions < 1) throw ArgumentError("n_collisions must be at least 1");
        const int use_cap = cap > 0 ? static_cast<int>(cap) : kJointCapDefault;
        auto series = entropy_ledger_series(cfg->cfg, static_cast<int>(n_collisions),
                                            use_cap);
        for (size_t i = 0; i < series.size(); ++i) {
            const EntropyLedgerRow& r = series[i];
            rows[i] = {r.n,           r.ds_system,   r.ds_production,
                       r.ds_flow_total, r.ds_flow_hot, r.ds_flow_cold,
                       r.support_violated ? 1 : 0};
        }
    });
}

coheat_status coheat_entropy_global_drift(const coheat_config* cfg, long n_collisions,
                                          long cap, double* drift) {
    if (coheat_status s = require(cfg && drift, "cfg/drift")) return s;
    return wrap([&] {
        if (n_collisions < 1) throw ArgumentError("n_collisions must be at least 1");
        const int use_cap = cap > 0 ? static_cast<int>(cap) : kJointCapDefault;
        JointState joint = joint_trajectory(cfg->cfg, static_cast<int>(n_collisions),
                                            use_cap);
        *drift = global_entropy_drift(joint, cfg->cfg);
    });
}

coheat_status coheat_energy_bookkeeping(const coheat_config* cfg, long n_collisions,
                                        long cap, double* resid_hot, double* resid_cold) {
    if (coheat_status s = require(cfg && resid_hot && resid_cold, "cfg/resid"))
        return s;
    return wrap([&] {
        if (n_collisions < 1) throw ArgumentError("n_collisions must be at least 1");
        const int use_cap = cap > 0 ? static_cast<int>(cap) : kJointCapDefault;
        BookkeepingReport rep = energy_bookkeeping_check(
            cfg->cfg, static_cast<int>(n_collisions), use_cap);
        *resid_hot = rep.residual_hot;
        *resid_cold = rep.residual_cold;
    });
}

coheat_status coheat_selfcheck(int verbose, int* checks, int* failed) {
    return wrap([&] {
        auto results = run_selfcheck();
        int bad = 0;
        for (const CheckResult& r : results) {
            if (!r.pass) ++bad;
            if (verbose)
                std::printf("[%s] %s (%s)\n", r.pass ? "PASS" : "FAIL",
                            r.name.c_str(), r.detail.c_str());
        }
        if (checks) *checks = static_cast<int>(results.size());
        if (failed) *failed = bad;
        if (verbose) std::fflush(stdout);
    });
}

}  /* extern "C" */
