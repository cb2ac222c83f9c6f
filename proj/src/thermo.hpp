#pragma once

#include <optional>
#include <vector>

#include "collision.hpp"

namespace coheat {

struct SteadyOptions {
    double tol = 1e-12;
    int window = 20;
    long cap = 200000;

    void validate() const;
};

struct SteadyResult {
    double current_hot = 0.0;   // window-averaged J_h
    double current_cold = 0.0;  // window-averaged J_c
    long converged_at = 0;      // collision index where detection fired
    double tolerance_used = 0.0;
};

// Precomputed linear map of one collision on the reduced system state,
// with the per-step reservoir heats as linear functionals. Equivalent to
// collision_step followed by tracing out the ancillas, at a fraction of
// the cost.
class StepPropagator {
public:
    explicit StepPropagator(const CollisionConfig& config);

    // Heats of the collision applied to `state`, then the post-collision
    // reduced state (rehermitized and trace-normalized).
    void step(Eigen::Matrix4cd& state, double& heat_hot, double& heat_cold) const;

private:
    Eigen::Matrix<cplx, 16, 16> map_;
    Eigen::Matrix<cplx, 1, 16> hot_functional_;
    Eigen::Matrix<cplx, 1, 16> cold_functional_;
    double hot_baseline_ = 0.0;
    double cold_baseline_ = 0.0;
};

// Detection rule shared by every steady-state entry point: over the trailing
// window, successive differences of both currents stay below tol AND the
// window-averaged |J_h + J_c| is within 10*tol. Returns the window averages.
SteadyResult detect_steady(const std::vector<TrajectoryRecord>& trajectory,
                           double tol, int window);

// Streaming detection without materializing a trajectory.
SteadyResult steady_state(const CollisionConfig& config, const SteadyOptions& opts);

// One point of a parallel steady-state batch. Unset fields take the base
// config's values. base_t/delta_t translate to T_hot/cold = base +- dt/2;
// dphi offsets the hot phase against the cold one; p sets both weights.
struct SteadyPoint {
    std::optional<double> base_t;
    std::optional<double> delta_t;
    std::optional<double> dphi;
    std::optional<double> p;
};

CollisionConfig apply_point(const CollisionConfig& base, const SteadyPoint& pt);

// Results in input order, identical for any worker count. workers <= 0 picks
// hardware concurrency; COHEAT_MAX_WORKERS caps the pool.
std::vector<SteadyResult> steady_batch(const CollisionConfig& base,
                                       const SteadyOptions& opts,
                                       const std::vector<SteadyPoint>& points,
                                       int workers);

// Closed-form steady current at gamma = pi/2.
double steady_current_full_swap(double p, double beta_h, double beta_c,
                                double delta, double dphi);

// Critical coherence weight at full swap; nullopt when unreachable on [0, 1].
// dphi must lie in (pi, 2pi).
std::optional<double> critical_p_full_swap(double beta_h, double beta_c,
                                           double delta, double dphi);

// Sign bisection of the steady current over p. The current must be monotone
// in p (checked by sampling). |J| < 1e-13 counts as a root.
std::optional<double> critical_p_numeric(const CollisionConfig& config, double dphi,
                                         double bisection_tol, const SteadyOptions& opts,
                                         int workers = 0);

struct LinearFit {
    double slope = 0.0;      // -lambda
    double intercept = 0.0;  // c
    double residual_rms = 0.0;
    std::vector<double> delta_t_grid;
};

inline const std::vector<double>& default_dt_grid() {
    static const std::vector<double> g{2e-4, 4e-4, 6e-4, 8e-4, 1e-3,
                                       1.2e-3, 1.4e-3, 1.6e-3, 1.8e-3, 2e-3};
    return g;
}

// Least-squares line over J_h(dT) with T_hot/cold = base_t +- dT/2.
// For dphi in {0, pi} or p = 0 the intercept must come out below 1e-8.
LinearFit conductance_fit(const CollisionConfig& config, double base_t,
                          double dphi, double p, const std::vector<double>& dt_grid,
                          const SteadyOptions& opts, int workers = 0);

// Thermal-reservoir conductance closed form and its high-temperature limit.
double conductance_thermal_analytic(double temperature, double gamma, double delta);
double conductance_high_t_limit(double gamma, double delta, double temperature);

struct ResponseCoefficients {
    double lambda1 = 0.0;
    double c1 = 0.0;
};

// First-order coefficients of the full-swap current in the temperature
// difference around `temperature`.
ResponseCoefficients linear_response_full_swap(double temperature, double p,
                                               double delta, double dphi);

}  // namespace coheat
