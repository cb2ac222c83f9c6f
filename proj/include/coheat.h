/* coheat: collision-model heat transport between two qubits coupled to
 * coherence-bearing reservoirs. C API over the simulation core.
 *
 * Conventions baked into the library:
 *   - H = (omega/2) sigma_z with sigma_z|0> = +|0>, so |1> is the ground state.
 *   - Heat is positive when energy flows into a reservoir.
 *   - Register order for one collision is (S_A, S_B, R_hot, R_cold).
 *   - Entropies are in nats.
 *
 * All functions returning coheat_status set a thread-local error message
 * readable via coheat_last_error() on failure.
 */

#ifndef COHEAT_H
#define COHEAT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef int32_t coheat_status;

enum {
    COHEAT_OK = 0,
    COHEAT_ERR_INTERNAL = 1,
    COHEAT_ERR_PARSE = 2,
    COHEAT_ERR_VALIDATION = 3,
    COHEAT_ERR_CONVERGENCE = 4,
    COHEAT_ERR_RESOURCE = 5,
    COHEAT_ERR_NUMERICAL = 6,
    COHEAT_ERR_ARGUMENT = 7
};

/* Message for the most recent failure on this thread. Never NULL. */
const char* coheat_last_error(void);
const char* coheat_status_name(coheat_status s);

/* ---- experiment configuration ---------------------------------------- */

typedef struct coheat_config coheat_config;

enum { COHEAT_RES_HOT = 0, COHEAT_RES_COLD = 1 };

/* Defaults: T_hot = T_cold = 1, phases 0, p = 0, omega = 1, gamma = pi/32,
 * delta = pi/4, initial system |11><11|, steady tol 1e-12 / window 20 /
 * cap 200000. */
coheat_status coheat_config_create(coheat_config** out);
void coheat_config_destroy(coheat_config* cfg);
coheat_status coheat_config_copy(const coheat_config* cfg, coheat_config** out);

coheat_status coheat_config_set_reservoir(coheat_config* cfg, int which,
                                          double temperature, double phase,
                                          double coherence_weight, double omega);
coheat_status coheat_config_set_coupling(coheat_config* cfg, double gamma, double delta);
/* 4x4 row-major; re/im arrays of 16. Pass NULL/NULL to reset to |11><11|. */
coheat_status coheat_config_set_initial_system(coheat_config* cfg,
                                               const double* re, const double* im);
coheat_status coheat_config_set_steady_opts(coheat_config* cfg, double tol,
                                            int window, long max_steps);

/* Readback of the resolved scalar parameters (for manifests). Keys:
 * hot.temperature hot.phase hot.coherence_weight hot.frequency (same under
 * cold.) coupling.gamma coupling.delta steady.tol steady.window steady.cap */
coheat_status coheat_config_get(const coheat_config* cfg, const char* key, double* out);

/* ---- ancilla states --------------------------------------------------- */

/* 2x2 row-major re/im of the thermal (p ignored) or coherence-bearing
 * reservoir state for the selected reservoir. */
coheat_status coheat_thermal_state(const coheat_config* cfg, int which,
                                   double* re, double* im);
coheat_status coheat_ancilla_state(const coheat_config* cfg, int which,
                                   double* re, double* im);

/* ---- trajectories ----------------------------------------------------- */

typedef struct coheat_trajectory coheat_trajectory;

coheat_status coheat_run_trajectory(const coheat_config* cfg, long n_max,
                                    coheat_trajectory** out);
void coheat_trajectory_destroy(coheat_trajectory* traj);
long coheat_trajectory_length(const coheat_trajectory* traj);
/* Per-collision heats into hot/cold reservoirs; arrays of length >= length. */
coheat_status coheat_trajectory_heats(const coheat_trajectory* traj,
                                      double* heat_hot, double* heat_cold);
/* Post-collision reduced system state after step `step` (1-based), 4x4 row-major. */
coheat_status coheat_trajectory_state(const coheat_trajectory* traj, long step,
                                      double* re, double* im);

/* ---- steady state ----------------------------------------------------- */

typedef struct {
    double current_hot;   /* window-averaged steady J_h */
    double current_cold;  /* window-averaged steady J_c */
    long converged_at;    /* collision index at which detection fired */
    double tolerance;     /* tolerance used */
} coheat_steady_result;

coheat_status coheat_steady_state(const coheat_config* cfg, coheat_steady_result* out);

/* Batch of steady-state runs over per-point parameters. Each of the arrays
 * base_t, delta_t, dphi, p has length n (any may be NULL to keep the config
 * value for every point). Temperatures per point: T_hot = base_t + delta_t/2,
 * T_cold = base_t - delta_t/2; dphi offsets the hot phase relative to the
 * cold one; p applies to both reservoirs. Results are written in input order
 * and are identical for any worker count. workers <= 0 picks a default; the
 * COHEAT_MAX_WORKERS environment variable caps the pool for CI. */
coheat_status coheat_steady_batch(const coheat_config* cfg,
                                  const double* base_t, const double* delta_t,
                                  const double* dphi, const double* p,
                                  long n, int workers,
                                  coheat_steady_result* out);

/* ---- closed forms and fits -------------------------------------------- */

/* Steady current at gamma = pi/2 (full swap). */
double coheat_steady_full_swap(double p, double beta_h, double beta_c,
                               double delta, double dphi);

/* Critical coherence weight for current reversal at full swap.
 * *reachable = 0 with *p_out unset when no p in [0,1] reverses the current.
 * dphi must lie in (pi, 2pi). */
coheat_status coheat_critical_p_full_swap(double beta_h, double beta_c,
                                          double delta, double dphi,
                                          double* p_out, int* reachable);

/* Bisection on p of the steady current sign for the configured couplings. */
coheat_status coheat_critical_p_numeric(const coheat_config* cfg, double dphi,
                                        double bisection_tol,
                                        double* p_out, int* reachable);

typedef struct {
    double slope;         /* -lambda */
    double intercept;     /* c */
    double residual_rms;
} coheat_fit_result;

/* Least-squares line J_h(dT) over dt_grid at T_hot/cold = base_t +- dT/2.
 * dt_grid NULL selects the default grid {2e-4, 4e-4, ..., 2e-3}. */
coheat_status coheat_conductance_fit(const coheat_config* cfg, double base_t,
                                     double dphi, double p,
                                     const double* dt_grid, int n_grid,
                                     int workers, coheat_fit_result* out);

/* Thermal-reservoir conductance closed form and its high-temperature limit. */
double coheat_conductance_thermal(double temperature, double gamma, double delta);
double coheat_conductance_high_t(double gamma, double delta, double temperature);

/* First-order response coefficients of the full-swap current. */
void coheat_linear_response_full_swap(double temperature, double p, double delta,
                                      double dphi, double* lambda1, double* c1);

/* ---- exact joint-state entropy accounting ----------------------------- */

typedef struct {
    long n;                /* collisions included */
    double ds_system;      /* entropy change of the two-qubit system */
    double ds_production;  /* irreversible part, >= 0 */
    double ds_flow_total;  /* reservoir-referenced flow */
    double ds_flow_hot;
    double ds_flow_cold;
    int support_violated;  /* set when a reservoir log needed clamping */
} coheat_entropy_row;

/* Rows for n = 1..n_collisions. cap limits the joint register (default 4,
 * hard max 5); exceeding it is a resource error. */
coheat_status coheat_entropy_ledger(const coheat_config* cfg, long n_collisions,
                                    long cap, coheat_entropy_row* rows);

/* |S(joint_n) - S(joint_0)| drift of the global state after n collisions. */
coheat_status coheat_entropy_global_drift(const coheat_config* cfg, long n_collisions,
                                          long cap, double* drift);

/* Joint-state reservoir energy changes vs cumulative stepwise heats.
 * resid_* receive |difference| for each reservoir. */
coheat_status coheat_energy_bookkeeping(const coheat_config* cfg, long n_collisions,
                                        long cap, double* resid_hot, double* resid_cold);

/* ---- selfcheck -------------------------------------------------------- */

/* Analytic-oracle invariant suite. Returns COHEAT_OK with *failed == 0 when
 * every check passes; verbose != 0 prints one line per check to stdout. */
coheat_status coheat_selfcheck(int verbose, int* checks, int* failed);

#ifdef __cplusplus
}
#endif

#endif /* COHEAT_H */
