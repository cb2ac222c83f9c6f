#include "thermo.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <thread>

namespace coheat {

namespace {

constexpr double kPi = 3.14159265358979323846;

int resolve_workers(int requested, size_t njobs) {
    int n = requested > 0 ? requested
                          : static_cast<int>(std::thread::hardware_concurrency());
    if (n < 1) n = 1;
    if (const char* cap = std::getenv("COHEAT_MAX_WORKERS")) {
        int c = std::atoi(cap);
        if (c >= 1 && c < n) n = c;
    }
    if (static_cast<size_t>(n) > njobs) n = static_cast<int>(njobs);
    return n < 1 ? 1 : n;
}

// Detection over a window+1 ring of (J_h, J_c) samples.
struct WindowCheck {
    double max_diff = 0.0;
    double mean_hot = 0.0;
    double mean_cold = 0.0;
    bool converged = false;
};

template <typename Buffer>
WindowCheck check_window(const Buffer& buf, int window, double tol) {
    WindowCheck out;
    for (int i = 0; i < window; ++i) {
        double dh = std::abs(buf[i + 1].first - buf[i].first);
        double dc = std::abs(buf[i + 1].second - buf[i].second);
        out.max_diff = std::max(out.max_diff, std::max(dh, dc));
    }
    for (int i = 1; i <= window; ++i) {
        out.mean_hot += buf[i].first;
        out.mean_cold += buf[i].second;
    }
    out.mean_hot /= window;
    out.mean_cold /= window;
    out.converged = out.max_diff < tol &&
                    std::abs(out.mean_hot + out.mean_cold) <= 10.0 * tol;
    return out;
}

[[noreturn]] void throw_no_convergence(long cap, double tol, const WindowCheck& last) {
    std::ostringstream os;
    os << "no steady state within " << cap << " collisions (tol " << tol
       << "); last window: max current step " << last.max_diff
       << ", mean J_h " << last.mean_hot << ", mean J_h+J_c "
       << (last.mean_hot + last.mean_cold);
    throw ConvergenceError(os.str());
}

}  // namespace

void SteadyOptions::validate() const {
    if (!(tol > 0.0)) throw ValidationError("steady tolerance must be positive");
    if (window < 1) throw ValidationError("steady window must be at least 1");
    if (cap < window + 1)
        throw ValidationError("steady cap must exceed the detection window");
}

StepPropagator::StepPropagator(const CollisionConfig& config) {
    config.validate();
    Mat u = collision_unitary(config.coupling);
    Mat hot = coherent_ancilla(config.hot).mat();
    Mat cold = coherent_ancilla(config.cold).mat();
    Mat anc = kron(hot, cold);

    Mat hz(2, 2);
    hz << 0.5, 0.0, 0.0, -0.5;
    Mat h_hot = config.hot.frequency *
                kron(kron(Mat::Identity(4, 4), hz), Mat::Identity(2, 2));
    Mat h_cold = config.cold.frequency *
                 kron(Mat::Identity(8, 8), hz);
    hot_baseline_ = std::real((config.hot.frequency * hz * hot).trace());
    cold_baseline_ = std::real((config.cold.frequency * hz * cold).trace());

    // Column v = i*4+j of the map is the evolved image of E_ij (x) anc.
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            Mat e = Mat::Zero(4, 4);
            e(i, j) = 1.0;
            Mat big = kron(e, anc);
            Mat evolved = u * big * u.adjoint();
            Mat reduced = partial_trace(evolved, {2, 2, 2, 2}, {0, 1});
            int v = i * 4 + j;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    map_(a * 4 + b, v) = reduced(a, b);
            hot_functional_(0, v) = (h_hot * evolved).trace();
            cold_functional_(0, v) = (h_cold * evolved).trace();
        }
}

void StepPropagator::step(Eigen::Matrix4cd& state, double& heat_hot,
                          double& heat_cold) const {
    Eigen::Matrix<cplx, 16, 1> v;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) v(i * 4 + j) = state(i, j);

    heat_hot = std::real((hot_functional_ * v)(0, 0)) - hot_baseline_;
    heat_cold = std::real((cold_functional_ * v)(0, 0)) - cold_baseline_;

    Eigen::Matrix<cplx, 16, 1> w = map_ * v;
    Eigen::Matrix4cd next;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) next(i, j) = w(i * 4 + j);
    next = 0.5 * (next + next.adjoint().eval());
    next /= next.trace().real();
    state = next;
}

SteadyResult detect_steady(const std::vector<TrajectoryRecord>& trajectory,
                           double tol, int window) {
    if (!(tol > 0.0)) throw ValidationError("steady tolerance must be positive");
    if (window < 1) throw ValidationError("steady window must be at least 1");
    if (trajectory.size() < static_cast<size_t>(window) + 1)
        throw ArgumentError("trajectory shorter than the detection window");

    std::vector<std::pair<double, double>> buf;
    WindowCheck last;
    for (size_t n = window; n < trajectory.size(); ++n) {
        buf.clear();
        for (size_t k = n - window; k <= n; ++k)
            buf.emplace_back(trajectory[k].heat_hot, trajectory[k].heat_cold);
        last = check_window(buf, window, tol);
        if (last.converged)
            return {last.mean_hot, last.mean_cold,
                    trajectory[n].step, tol};
    }
    throw_no_convergence(static_cast<long>(trajectory.size()), tol, last);
}

SteadyResult steady_state(const CollisionConfig& config, const SteadyOptions& opts) {
    opts.validate();
    StepPropagator prop(config);
    Eigen::Matrix4cd state = config.initial_system.mat();

    const int window = opts.window;
    std::deque<std::pair<double, double>> buf;
    WindowCheck last;
    for (long n = 1; n <= opts.cap; ++n) {
        double jh = 0.0, jc = 0.0;
        prop.step(state, jh, jc);
        buf.emplace_back(jh, jc);
        if (static_cast<int>(buf.size()) > window + 1) buf.pop_front();

        if (n % 64 == 0) {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(state, Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < kEigFloor) {
                std::ostringstream os;
                os << "state positivity drifted below floor at collision " << n;
                throw NumericalError(os.str());
            }
        }

        if (n > window) {
            last = check_window(buf, window, opts.tol);
            if (last.converged) return {last.mean_hot, last.mean_cold, n, opts.tol};
        }
    }
    throw_no_convergence(opts.cap, opts.tol, last);
}

CollisionConfig apply_point(const CollisionConfig& base, const SteadyPoint& pt) {
    CollisionConfig cfg = base;
    if (pt.base_t || pt.delta_t) {
        double t0 = pt.base_t ? *pt.base_t
                              : 0.5 * (base.hot.temperature + base.cold.temperature);
        double dt = pt.delta_t ? *pt.delta_t
                               : base.hot.temperature - base.cold.temperature;
        cfg.hot.temperature = t0 + dt / 2.0;
        cfg.cold.temperature = t0 - dt / 2.0;
    }
    if (pt.dphi) cfg.hot.phase = cfg.cold.phase + *pt.dphi;
    if (pt.p) {
        cfg.hot.coherence_weight = *pt.p;
        cfg.cold.coherence_weight = *pt.p;
    }
    cfg.validate();
    return cfg;
}

std::vector<SteadyResult> steady_batch(const CollisionConfig& base,
                                       const SteadyOptions& opts,
                                       const std::vector<SteadyPoint>& points,
                                       int workers) {
    opts.validate();
    std::vector<SteadyResult> results(points.size());
    if (points.empty()) return results;

    int nw = resolve_workers(workers, points.size());
    std::atomic<size_t> next{0};
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            try {
                CollisionConfig cfg = apply_point(base, points[i]);
                results[i] = steady_state(cfg, opts);
            } catch (...) {
                errors[i] = std::current_exception();
                failed.store(true);
            }
        }
    };

    if (nw == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nw; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    if (failed.load()) {
        // Surface the lowest-index failure with its original error class.
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return results;
}

double steady_current_full_swap(double p, double beta_h, double beta_c,
                                double delta, double dphi) {
    double den = (1.0 + std::exp(beta_h)) * (1.0 + std::exp(beta_c));
    double thermal = std::sin(delta) * std::sin(delta) *
                     (std::exp(beta_h) - std::exp(beta_c)) / den;
    double coh = p * p * std::sin(2.0 * delta) *
                 std::exp((beta_h + beta_c) / 2.0) * std::sin(dphi) / den;
    return thermal - coh;
}

std::optional<double> critical_p_full_swap(double beta_h, double beta_c,
                                           double delta, double dphi) {
    if (!(dphi > kPi && dphi < 2.0 * kPi))
        throw ArgumentError("critical_p_full_swap: dphi must lie in (pi, 2pi)");
    double val = std::tan(delta) * (std::exp(beta_h) - std::exp(beta_c)) /
                 (2.0 * std::exp((beta_h + beta_c) / 2.0) * std::sin(dphi));
    if (!(val >= 0.0) || val > 1.0) return std::nullopt;
    return std::sqrt(val);
}

std::optional<double> critical_p_numeric(const CollisionConfig& config, double dphi,
                                         double bisection_tol, const SteadyOptions& opts,
                                         int workers) {
    if (!(bisection_tol > 0.0))
        throw ArgumentError("critical_p_numeric: bisection tolerance must be positive");

    auto current_at = [&](double p) {
        SteadyPoint pt;
        pt.dphi = dphi;
        pt.p = p;
        return steady_state(apply_point(config, pt), opts).current_hot;
    };

    // Monotonicity precheck over a coarse p grid.
    {
        std::vector<SteadyPoint> pts;
        for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            SteadyPoint pt;
            pt.dphi = dphi;
            pt.p = p;
            pts.push_back(pt);
        }
        auto res = steady_batch(config, opts, pts, workers);
        bool up = true, down = true;
        for (size_t i = 1; i < res.size(); ++i) {
            double d = res[i].current_hot - res[i - 1].current_hot;
            if (d < -1e-12) up = false;
            if (d > 1e-12) down = false;
        }
        if (!up && !down)
            throw ArgumentError(
                "critical_p_numeric: steady current is not monotone in p here");
    }

    double lo = 0.0, hi = 1.0;
    double jlo = current_at(lo);
    double jhi = current_at(hi);
    if (std::abs(jlo) < 1e-13) return lo;
    if (std::abs(jhi) < 1e-13) return hi;
    if ((jlo < 0.0) == (jhi < 0.0)) return std::nullopt;

    while (hi - lo > bisection_tol) {
        double mid = 0.5 * (lo + hi);
        double jm = current_at(mid);
        if (std::abs(jm) < 1e-13) return mid;
        if ((jm < 0.0) == (jlo < 0.0)) {
            lo = mid;
            jlo = jm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

LinearFit conductance_fit(const CollisionConfig& config, double base_t,
                          double dphi, double p, const std::vector<double>& dt_grid,
                          const SteadyOptions& opts, int workers) {
    if (dt_grid.empty())
        throw ArgumentError("conductance_fit: empty temperature-difference grid");
    if (!(base_t > 0.0))
        throw ArgumentError("conductance_fit: base temperature must be positive");
    for (double dt : dt_grid)
        if (!(dt > 0.0 && dt < 2.0 * base_t))
            throw ArgumentError(
                "conductance_fit: every dT must satisfy 0 < dT < 2*T");

    std::vector<SteadyPoint> pts;
    for (double dt : dt_grid) {
        SteadyPoint pt;
        pt.base_t = base_t;
        pt.delta_t = dt;
        pt.dphi = dphi;
        pt.p = p;
        pts.push_back(pt);
    }
    auto res = steady_batch(config, opts, pts, workers);

    const size_t n = dt_grid.size();
    double xm = 0.0, ym = 0.0;
    for (size_t i = 0; i < n; ++i) {
        xm += dt_grid[i];
        ym += res[i].current_hot;
    }
    xm /= n;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double dx = dt_grid[i] - xm;
        sxx += dx * dx;
        sxy += dx * (res[i].current_hot - ym);
    }
    LinearFit fit;
    fit.delta_t_grid = dt_grid;
    fit.slope = n > 1 ? sxy / sxx : 0.0;
    fit.intercept = ym - fit.slope * xm;

    double ss = 0.0, max_j = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double r = res[i].current_hot - (fit.slope * dt_grid[i] + fit.intercept);
        ss += r * r;
        max_j = std::max(max_j, std::abs(res[i].current_hot));
    }
    fit.residual_rms = std::sqrt(ss / n);

    double guard = std::max(1e-4 * max_j, 1e3 * opts.tol);
    if (fit.residual_rms > guard) {
        std::ostringstream os;
        os << "conductance_fit: response is not linear on this grid (residual rms "
           << fit.residual_rms << " > " << guard << "); use smaller temperature steps";
        throw NumericalError(os.str());
    }

    double m = std::fmod(std::fmod(dphi, 2.0 * kPi) + 2.0 * kPi, 2.0 * kPi);
    bool zero_intercept = p == 0.0 || std::abs(m) < 1e-12 ||
                          std::abs(m - kPi) < 1e-12 ||
                          std::abs(m - 2.0 * kPi) < 1e-12;
    if (zero_intercept && std::abs(fit.intercept) > 1e-8) {
        std::ostringstream os;
        os << "conductance_fit: intercept " << fit.intercept
           << " should vanish for this phase difference";
        throw NumericalError(os.str());
    }
    return fit;
}

double conductance_thermal_analytic(double temperature, double gamma, double delta) {
    if (!(temperature > 0.0))
        throw ArgumentError("conductance_thermal_analytic: temperature must be positive");
    double t = temperature;
    double a = 11.0 + 4.0 * std::cos(2.0 * gamma) + std::cos(4.0 * gamma) -
               16.0 * std::cos(gamma) * std::cos(gamma) * std::cos(2.0 * delta);
    double ch = std::cosh(1.0 / (2.0 * t));
    double num = 4.0 * std::exp(2.0 / t) *
                 (5.0 + std::cos(4.0 * gamma) + 4.0 * std::cos(2.0 * gamma) * ch * ch +
                  6.0 * std::cosh(1.0 / t)) *
                 std::sin(gamma) * std::sin(gamma) * std::sin(delta) * std::sin(delta);
    double e1 = std::exp(1.0 / t);
    double bracket = 20.0 + 7.0 * std::cos(2.0 * gamma) + 4.0 * std::cos(4.0 * gamma) +
                     std::cos(6.0 * gamma) -
                     32.0 * std::pow(std::cos(gamma), 4) * std::cos(2.0 * delta);
    double den = (1.0 + e1) * (1.0 + e1) * t * t *
                 (a * (1.0 + std::exp(2.0 / t)) + e1 * bracket);
    return num / den;
}

double conductance_high_t_limit(double gamma, double delta, double temperature) {
    if (!(temperature > 0.0))
        throw ArgumentError("conductance_high_t_limit: temperature must be positive");
    double num = (11.0 + 4.0 * std::cos(2.0 * gamma) + std::cos(4.0 * gamma)) *
                 std::sin(gamma) * std::sin(gamma) * std::sin(delta) * std::sin(delta);
    double den = 2.0 * (3.0 + std::cos(2.0 * gamma)) *
                 (7.0 + std::cos(4.0 * gamma) -
                  8.0 * std::cos(gamma) * std::cos(gamma) * std::cos(2.0 * delta)) *
                 temperature * temperature;
    return num / den;
}

ResponseCoefficients linear_response_full_swap(double temperature, double p,
                                               double delta, double dphi) {
    if (!(temperature > 0.0))
        throw ArgumentError("linear_response_full_swap: temperature must be positive");
    double sech = 1.0 / std::cosh(1.0 / (2.0 * temperature));
    ResponseCoefficients out;
    out.lambda1 = sech * sech * std::sin(delta) * std::sin(delta) /
                  (4.0 * temperature * temperature);
    out.c1 = -0.25 * p * p * sech * sech * std::sin(2.0 * delta) * std::sin(dphi);
    return out;
}

}  // namespace coheat
