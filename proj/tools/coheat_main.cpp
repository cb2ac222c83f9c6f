// coheat command line front end. Talks to the simulation core through the
// C API only; everything here is configuration plumbing and CSV emission.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coheat.h"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CliError {
    int exit_code;
    std::string message;
};

int exit_code_for(coheat_status s) {
    switch (s) {
        case COHEAT_ERR_PARSE: return 2;
        case COHEAT_ERR_VALIDATION: return 3;
        case COHEAT_ERR_ARGUMENT: return 3;  // bad request, reported as validation
        case COHEAT_ERR_CONVERGENCE: return 4;
        case COHEAT_ERR_RESOURCE: return 5;
        case COHEAT_ERR_NUMERICAL: return 6;
        default: return 1;
    }
}

void check(coheat_status s) {
    if (s != COHEAT_OK)
        throw CliError{exit_code_for(s), std::string(coheat_status_name(s)) + ": " +
                                             coheat_last_error()};
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double to_number(const std::string& s, const std::string& context) {
    char* end = nullptr;
    const char* c = s.c_str();
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0')
        throw CliError{2, "parse: bad number '" + s + "' " + context};
    return v;
}

// Scalars accept plain numbers or multiples of pi: "1.25pi", "pi", "pi/32",
// "3pi/2", "-pi/4".
double parse_scalar(const std::string& raw, const std::string& context) {
    std::string s = trim(raw);
    if (s.empty()) throw CliError{2, "parse: empty value " + context};
    double sign = 1.0;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
        if (s[0] == '-') sign = -1.0;
        i = 1;
    }
    std::string body = s.substr(i);
    size_t pos = body.find("pi");
    if (pos == std::string::npos) return sign * to_number(body, context);
    std::string pre = body.substr(0, pos);
    std::string post = body.substr(pos + 2);
    double a = pre.empty() ? 1.0 : to_number(pre, context);
    double b = 1.0;
    if (!post.empty()) {
        if (post[0] != '/')
            throw CliError{2, "parse: bad angle '" + s + "' " + context};
        b = to_number(post.substr(1), context);
        if (b == 0.0) throw CliError{2, "parse: zero divisor in '" + s + "' " + context};
    }
    return sign * a * kPi / b;
}

std::vector<double> parse_list(const std::string& raw, const std::string& context) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(raw);
    while (std::getline(ss, item, ','))
        out.push_back(parse_scalar(item, context));
    if (out.empty()) throw CliError{2, "parse: empty list " + context};
    return out;
}

// ---- config file ----------------------------------------------------------

struct FileConfig {
    std::optional<std::string> mode;
    std::optional<std::string> out;
    std::map<std::string, double> scalars;            // "hot.temperature" etc.
    std::map<std::string, std::vector<double>> lists; // "sweep.dphi" etc.
};

bool known_scalar(const std::string& key) {
    static const char* keys[] = {
        "hot.temperature",  "hot.phase",  "hot.coherence_weight",  "hot.frequency",
        "cold.temperature", "cold.phase", "cold.coherence_weight", "cold.frequency",
        "coupling.gamma",   "coupling.delta",
        "steady.tol",       "steady.window", "steady.max_steps",
        "run.steps",        "entropy.collisions", "entropy.cap",
        "sweep.base_t",
    };
    for (const char* k : keys)
        if (key == k) return true;
    return false;
}

bool known_list(const std::string& key) {
    static const char* keys[] = {"sweep.dphi", "sweep.p", "sweep.delta_t", "sweep.t"};
    for (const char* k : keys)
        if (key == k) return true;
    return false;
}

FileConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{2, "parse: cannot open config file '" + path + "'"};
    FileConfig fc;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "(" + path + ":" + std::to_string(lineno) + ")";
        if (line.front() == '[') {
            if (line.back() != ']')
                throw CliError{2, "parse: unterminated section header " + where};
            section = trim(line.substr(1, line.size() - 2));
            if (section != "hot" && section != "cold" && section != "coupling" &&
                section != "steady" && section != "run" && section != "sweep" &&
                section != "entropy" && section != "system")
                throw CliError{2, "parse: unknown section [" + section + "] " + where};
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw CliError{2, "parse: expected 'key = value' " + where};
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw CliError{2, "parse: expected 'key = value' " + where};
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "mode") {
            fc.mode = value;
        } else if (full == "out") {
            fc.out = value;
        } else if (full == "system.initial") {
            if (value != "ground")
                throw CliError{2, "parse: system.initial supports only 'ground' " + where};
        } else if (known_list(full)) {
            fc.lists[full] = parse_list(value, "for " + full + " " + where);
        } else if (known_scalar(full)) {
            fc.scalars[full] = parse_scalar(value, "for " + full + " " + where);
        } else {
            throw CliError{2, "parse: unknown key '" + full + "' " + where};
        }
    }
    return fc;
}

// ---- resolved experiment --------------------------------------------------

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out;
    std::optional<int> workers;
    std::optional<double> tol;
    std::optional<int> window;
    std::optional<long> max_steps;
    std::optional<long> joint_cap;
};

using ConfigHandle = std::unique_ptr<coheat_config, decltype(&coheat_config_destroy)>;

double scalar_or(const FileConfig& fc, const std::string& key, double fallback) {
    auto it = fc.scalars.find(key);
    return it == fc.scalars.end() ? fallback : it->second;
}

std::vector<double> list_or(const FileConfig& fc, const std::string& key,
                            std::vector<double> fallback) {
    auto it = fc.lists.find(key);
    return it == fc.lists.end() ? std::move(fallback) : it->second;
}

// Library defaults, then file values, then flag overrides. `fit_mode` picks
// a tighter default detection tolerance, which the linear fits need.
ConfigHandle build_config(const FileConfig& fc, const Overrides& ov, bool fit_mode) {
    coheat_config* raw = nullptr;
    check(coheat_config_create(&raw));
    ConfigHandle cfg(raw, &coheat_config_destroy);

    check(coheat_config_set_reservoir(
        cfg.get(), COHEAT_RES_HOT, scalar_or(fc, "hot.temperature", 1.0),
        scalar_or(fc, "hot.phase", 0.0), scalar_or(fc, "hot.coherence_weight", 0.0),
        scalar_or(fc, "hot.frequency", 1.0)));
    check(coheat_config_set_reservoir(
        cfg.get(), COHEAT_RES_COLD, scalar_or(fc, "cold.temperature", 1.0),
        scalar_or(fc, "cold.phase", 0.0), scalar_or(fc, "cold.coherence_weight", 0.0),
        scalar_or(fc, "cold.frequency", 1.0)));
    check(coheat_config_set_coupling(cfg.get(),
                                     scalar_or(fc, "coupling.gamma", kPi / 32.0),
                                     scalar_or(fc, "coupling.delta", kPi / 4.0)));

    double tol = ov.tol ? *ov.tol
                        : scalar_or(fc, "steady.tol", fit_mode ? 1e-13 : 1e-12);
    int window = ov.window ? *ov.window
                           : static_cast<int>(scalar_or(fc, "steady.window", 20));
    long cap = ov.max_steps ? *ov.max_steps
                            : static_cast<long>(scalar_or(fc, "steady.max_steps", 200000));
    check(coheat_config_set_steady_opts(cfg.get(), tol, window, cap));
    return cfg;
}

// ---- output ---------------------------------------------------------------

struct CsvFile {
    explicit CsvFile(const std::string& path) : path_(path), f_(std::fopen(path.c_str(), "w")) {
        if (!f_) throw CliError{5, "resource: cannot open output file '" + path + "'"};
    }
    ~CsvFile() {
        if (f_) std::fclose(f_);
    }
    CsvFile(const CsvFile&) = delete;
    CsvFile& operator=(const CsvFile&) = delete;

    void header(const std::string& h) { std::fprintf(f_, "%s\n", h.c_str()); }
    void raw(const std::string& s) { std::fprintf(f_, "%s", s.c_str()); }
    void num(double v, bool last = false) { std::fprintf(f_, "%.17g%c", v, last ? '\n' : ','); }
    void integer(long v, bool last = false) { std::fprintf(f_, "%ld%c", v, last ? '\n' : ','); }

    const std::string& path() const { return path_; }

private:
    std::string path_;
    FILE* f_;
};

std::string fmt_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& vs) {
    std::string out;
    for (size_t i = 0; i < vs.size(); ++i) {
        if (i) out += ",";
        out += fmt_num(vs[i]);
    }
    return out;
}

// Resolved-config record written next to every CSV. Deliberately free of
// timestamps and host details so reruns produce identical files.
void write_manifest(const std::string& csv_path, const coheat_config* cfg,
                    const std::string& mode,
                    const std::vector<std::pair<std::string, std::string>>& extras) {
    std::ofstream out(csv_path + ".manifest");
    if (!out)
        throw CliError{5, "resource: cannot open manifest for '" + csv_path + "'"};
    out << "# coheat run manifest (fully resolved configuration)\n";
    out << "mode = " << mode << "\n";
    static const char* keys[] = {
        "hot.temperature",  "hot.phase",  "hot.coherence_weight",  "hot.frequency",
        "cold.temperature", "cold.phase", "cold.coherence_weight", "cold.frequency",
        "coupling.gamma",   "coupling.delta",
        "steady.tol",       "steady.window", "steady.cap",
    };
    for (const char* k : keys) {
        double v = 0.0;
        check(coheat_config_get(cfg, k, &v));
        if (std::string(k) == "steady.window" || std::string(k) == "steady.cap")
            out << k << " = " << static_cast<long>(v) << "\n";
        else
            out << k << " = " << fmt_num(v) << "\n";
    }
    out << "system.initial = ground\n";
    for (const auto& [k, v] : extras) out << k << " = " << v << "\n";
}

std::string out_or(const Overrides& ov, const FileConfig& fc, const std::string& fallback) {
    if (ov.out) return *ov.out;
    if (fc.out) return *fc.out;
    return fallback;
}

int resolved_workers(const Overrides& ov) { return ov.workers ? *ov.workers : 0; }

// ---- modes ----------------------------------------------------------------

void mode_trajectory(const FileConfig& fc, const Overrides& ov) {
    ConfigHandle cfg = build_config(fc, ov, false);
    long steps = ov.max_steps ? *ov.max_steps
                              : static_cast<long>(scalar_or(fc, "run.steps", 1000));
    coheat_trajectory* traj = nullptr;
    check(coheat_run_trajectory(cfg.get(), steps, &traj));
    std::unique_ptr<coheat_trajectory, decltype(&coheat_trajectory_destroy)> guard(
        traj, &coheat_trajectory_destroy);

    long n = coheat_trajectory_length(traj);
    std::vector<double> qh(n), qc(n);
    check(coheat_trajectory_heats(traj, qh.data(), qc.data()));

    CsvFile csv(out_or(ov, fc, "trajectory.csv"));
    csv.header("n,J_h,J_c,cumulative_Q_h,cumulative_Q_c");
    double ch = 0.0, cc = 0.0;
    for (long i = 0; i < n; ++i) {
        ch += qh[i];
        cc += qc[i];
        csv.integer(i + 1);
        csv.num(qh[i]);
        csv.num(qc[i]);
        csv.num(ch);
        csv.num(cc, true);
    }
    write_manifest(csv.path(), cfg.get(), "trajectory",
                   {{"run.steps", std::to_string(steps)}});
}

void mode_steady(const FileConfig& fc, const Overrides& ov) {
    ConfigHandle cfg = build_config(fc, ov, false);
    coheat_steady_result r{};
    check(coheat_steady_state(cfg.get(), &r));
    CsvFile csv(out_or(ov, fc, "steady.csv"));
    csv.header("J_h,J_c,converged_at,tolerance");
    csv.num(r.current_hot);
    csv.num(r.current_cold);
    csv.integer(r.converged_at);
    csv.num(r.tolerance, true);
    write_manifest(csv.path(), cfg.get(), "steady", {});
}

std::vector<double> default_dphi_grid() {
    std::vector<double> g;
    for (int k = 0; k < 64; ++k) g.push_back(k * kPi / 32.0);
    return g;
}

void mode_phase_sweep(const FileConfig& fc, const Overrides& ov) {
    ConfigHandle cfg = build_config(fc, ov, false);
    std::vector<double> dphi = list_or(fc, "sweep.dphi", default_dphi_grid());
    std::vector<double> ps =
        list_or(fc, "sweep.p", {scalar_or(fc, "hot.coherence_weight", 0.0)});

    std::vector<double> col_dphi, col_p;
    for (double p : ps)
        for (double d : dphi) {
            col_p.push_back(p);
            col_dphi.push_back(d);
        }
    long n = static_cast<long>(col_p.size());
    std::vector<coheat_steady_result> res(n);
    check(coheat_steady_batch(cfg.get(), nullptr, nullptr, col_dphi.data(),
                              col_p.data(), n, resolved_workers(ov), res.data()));

    CsvFile csv(out_or(ov, fc, "phase_sweep.csv"));
    csv.header("dphi,p,J_h,J_c,converged_at");
    for (long i = 0; i < n; ++i) {
        csv.num(col_dphi[i]);
        csv.num(col_p[i]);
        csv.num(res[i].current_hot);
        csv.num(res[i].current_cold);
        csv.integer(res[i].converged_at, true);
    }
    write_manifest(csv.path(), cfg.get(), "phase-sweep",
                   {{"grid.dphi", fmt_list(dphi)}, {"grid.p", fmt_list(ps)}});
}

void mode_conductance(const FileConfig& fc, const Overrides& ov) {
    ConfigHandle cfg = build_config(fc, ov, true);
    double hot_phase = 0.0, cold_phase = 0.0, hot_p = 0.0;
    check(coheat_config_get(cfg.get(), "hot.phase", &hot_phase));
    check(coheat_config_get(cfg.get(), "cold.phase", &cold_phase));
    check(coheat_config_get(cfg.get(), "hot.coherence_weight", &hot_p));

    std::vector<double> ts =
        list_or(fc, "sweep.t", {scalar_or(fc, "sweep.base_t", 1.0)});
    std::vector<double> dphis = list_or(fc, "sweep.dphi", {hot_phase - cold_phase});
    std::vector<double> ps = list_or(fc, "sweep.p", {hot_p});
    std::vector<double> dts = list_or(fc, "sweep.delta_t", {});
    const double* grid = dts.empty() ? nullptr : dts.data();
    int n_grid = static_cast<int>(dts.size());

    CsvFile csv(out_or(ov, fc, "conductance.csv"));
    csv.header("T,dphi,p,slope,intercept,residual_rms,kappa");
    for (double t : ts)
        for (double d : dphis)
            for (double p : ps) {
                coheat_fit_result fit{};
                check(coheat_conductance_fit(cfg.get(), t, d, p, grid, n_grid,
                                             resolved_workers(ov), &fit));
                csv.num(t);
                csv.num(d);
                csv.num(p);
                csv.num(fit.slope);
                csv.num(fit.intercept);
                csv.num(fit.residual_rms);
                csv.num(-fit.slope, true);
            }
    std::vector<std::pair<std::string, std::string>> extras = {
        {"grid.t", fmt_list(ts)}, {"grid.dphi", fmt_list(dphis)},
        {"grid.p", fmt_list(ps)}};
    if (!dts.empty()) extras.emplace_back("grid.delta_t", fmt_list(dts));
    else extras.emplace_back("grid.delta_t", "default");
    write_manifest(csv.path(), cfg.get(), "conductance", extras);
}

void mode_entropy(const FileConfig& fc, const Overrides& ov) {
    ConfigHandle cfg = build_config(fc, ov, false);
    long n = static_cast<long>(scalar_or(fc, "entropy.collisions", 3));
    long cap = ov.joint_cap ? *ov.joint_cap
                            : static_cast<long>(scalar_or(fc, "entropy.cap", 4));

    std::vector<coheat_entropy_row> rows(std::max<long>(n, 1));
    check(coheat_entropy_ledger(cfg.get(), n, cap, rows.data()));

    CsvFile csv(out_or(ov, fc, "entropy.csv"));
    csv.header(
        "n,dS_system,dS_production,dS_flow_total,dS_flow_hot,dS_flow_cold,"
        "global_drift,support_violated");
    for (long i = 0; i < n; ++i) {
        double drift = 0.0;
        check(coheat_entropy_global_drift(cfg.get(), i + 1, cap, &drift));
        csv.integer(rows[i].n);
        csv.num(rows[i].ds_system);
        csv.num(rows[i].ds_production);
        csv.num(rows[i].ds_flow_total);
        csv.num(rows[i].ds_flow_hot);
        csv.num(rows[i].ds_flow_cold);
        csv.num(drift);
        csv.integer(rows[i].support_violated, true);
    }
    write_manifest(csv.path(), cfg.get(), "entropy",
                   {{"entropy.collisions", std::to_string(n)},
                    {"entropy.cap", std::to_string(cap)}});
}

// ---- presets --------------------------------------------------------------

FileConfig fig_base() {
    FileConfig fc;
    fc.scalars["hot.temperature"] = 2.0;
    fc.scalars["cold.temperature"] = 1.0;
    fc.scalars["hot.coherence_weight"] = 0.8;
    fc.scalars["cold.coherence_weight"] = 0.8;
    fc.scalars["coupling.gamma"] = kPi / 32.0;
    fc.scalars["coupling.delta"] = kPi / 4.0;
    return fc;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void preset_fig2(const std::string& dir, const Overrides& ov) {
    struct Curve {
        const char* tag;
        double dphi;
        double p;
    };
    const Curve curves[] = {
        {"dphi_0", 0.0, 0.8},          {"dphi_pi4", kPi / 4, 0.8},
        {"dphi_pi2", kPi / 2, 0.8},    {"dphi_pi", kPi, 0.8},
        {"dphi_5pi4", 5 * kPi / 4, 0.8}, {"dphi_3pi2", 3 * kPi / 2, 0.8},
        {"thermal", 0.0, 0.0},
    };

    FileConfig base = fig_base();
    std::vector<double> col_dphi, col_p;
    for (const Curve& c : curves) {
        col_dphi.push_back(c.dphi);
        col_p.push_back(c.p);
    }
    ConfigHandle batch_cfg = build_config(base, ov, false);
    std::vector<coheat_steady_result> res(std::size(curves));
    check(coheat_steady_batch(batch_cfg.get(), nullptr, nullptr, col_dphi.data(),
                              col_p.data(), static_cast<long>(res.size()),
                              resolved_workers(ov), res.data()));

    {
        CsvFile csv(join_path(dir, "fig2_steady.csv"));
        csv.header("dphi,p,J_h,J_c,converged_at");
        for (size_t i = 0; i < res.size(); ++i) {
            csv.num(col_dphi[i]);
            csv.num(col_p[i]);
            csv.num(res[i].current_hot);
            csv.num(res[i].current_cold);
            csv.integer(res[i].converged_at, true);
        }
        write_manifest(csv.path(), batch_cfg.get(), "preset fig2",
                       {{"grid.dphi", fmt_list(col_dphi)},
                        {"grid.p", fmt_list(col_p)}});
    }

    for (size_t i = 0; i < std::size(curves); ++i) {
        FileConfig fc = base;
        fc.scalars["hot.phase"] = curves[i].dphi;
        fc.scalars["cold.phase"] = 0.0;
        fc.scalars["hot.coherence_weight"] = curves[i].p;
        fc.scalars["cold.coherence_weight"] = curves[i].p;
        ConfigHandle cfg = build_config(fc, ov, false);

        coheat_trajectory* traj = nullptr;
        check(coheat_run_trajectory(cfg.get(), res[i].converged_at, &traj));
        std::unique_ptr<coheat_trajectory, decltype(&coheat_trajectory_destroy)> guard(
            traj, &coheat_trajectory_destroy);
        long n = coheat_trajectory_length(traj);
        std::vector<double> qh(n), qc(n);
        check(coheat_trajectory_heats(traj, qh.data(), qc.data()));

        CsvFile csv(join_path(dir, std::string("fig2_trajectory_") + curves[i].tag + ".csv"));
        csv.header("n,J_h,J_c,cumulative_Q_h,cumulative_Q_c");
        double ch = 0.0, cc = 0.0;
        for (long k = 0; k < n; ++k) {
            ch += qh[k];
            cc += qc[k];
            csv.integer(k + 1);
            csv.num(qh[k]);
            csv.num(qc[k]);
            csv.num(ch);
            csv.num(cc, true);
        }
        write_manifest(csv.path(), cfg.get(), "preset fig2 (trajectory)",
                       {{"run.steps", std::to_string(n)}});
    }
}

void preset_fig3(const std::string& dir, const Overrides& ov) {
    struct Curve {
        const char* tag;
        double gamma;
    };
    const Curve curves[] = {
        {"pi2", kPi / 2}, {"pi4", kPi / 4}, {"pi12", kPi / 12}, {"pi32", kPi / 32}};
    std::vector<double> dphi = default_dphi_grid();

    for (const Curve& c : curves) {
        FileConfig fc = fig_base();
        fc.scalars["coupling.gamma"] = c.gamma;
        ConfigHandle cfg = build_config(fc, ov, false);
        long n = static_cast<long>(dphi.size());
        std::vector<coheat_steady_result> res(n);
        check(coheat_steady_batch(cfg.get(), nullptr, nullptr, dphi.data(), nullptr,
                                  n, resolved_workers(ov), res.data()));
        CsvFile csv(join_path(dir, std::string("fig3_gamma_") + c.tag + ".csv"));
        csv.header("gamma,dphi,J_h,J_c,converged_at");
        for (long i = 0; i < n; ++i) {
            csv.num(c.gamma);
            csv.num(dphi[i]);
            csv.num(res[i].current_hot);
            csv.num(res[i].current_cold);
            csv.integer(res[i].converged_at, true);
        }
        write_manifest(csv.path(), cfg.get(), "preset fig3",
                       {{"grid.dphi", fmt_list(dphi)}});
    }
}

void preset_fig4(const std::string& dir, const Overrides& ov) {
    FileConfig fc = fig_base();
    ConfigHandle cfg = build_config(fc, ov, true);
    double gamma = 0.0, delta = 0.0;
    check(coheat_config_get(cfg.get(), "coupling.gamma", &gamma));
    check(coheat_config_get(cfg.get(), "coupling.delta", &delta));

    CsvFile csv(join_path(dir, "fig4_conductance.csv"));
    csv.header("T,kappa_thermal,kappa_dphi_0,kappa_dphi_pi,kappa_closed_form");
    for (int k = 0; k <= 190; ++k) {
        const double t = (10 + k) / 100.0;
        coheat_fit_result th{}, f0{}, fpi{};
        check(coheat_conductance_fit(cfg.get(), t, 0.0, 0.0, nullptr, 0,
                                     resolved_workers(ov), &th));
        check(coheat_conductance_fit(cfg.get(), t, 0.0, 0.8, nullptr, 0,
                                     resolved_workers(ov), &f0));
        check(coheat_conductance_fit(cfg.get(), t, kPi, 0.8, nullptr, 0,
                                     resolved_workers(ov), &fpi));
        csv.num(t);
        csv.num(-th.slope);
        csv.num(-f0.slope);
        csv.num(-fpi.slope);
        csv.num(coheat_conductance_thermal(t, gamma, delta), true);
    }
    write_manifest(csv.path(), cfg.get(), "preset fig4",
                   {{"grid.t", "0.1..2 step 0.01"},
                    {"grid.delta_t", "default"},
                    {"curves", "thermal,dphi=0,dphi=pi (p=0.8)"}});
}

void preset_fig5(const std::string& dir, const Overrides& ov) {
    struct Curve {
        const char* tag;
        double dphi;
    };
    const Curve curves[] = {{"pi4", kPi / 4}, {"5pi4", 5 * kPi / 4}};

    std::vector<double> ts, dts;
    for (int k = 2; k <= 20; ++k) ts.push_back(k / 4.0);
    for (int j = 1; j <= 10; ++j) dts.push_back(j / 50.0);

    for (const Curve& c : curves) {
        FileConfig fc = fig_base();
        fc.scalars["hot.phase"] = c.dphi;
        ConfigHandle cfg = build_config(fc, ov, false);

        std::vector<double> col_t, col_dt;
        for (double t : ts)
            for (double dt : dts) {
                col_t.push_back(t);
                col_dt.push_back(dt);
            }
        long n = static_cast<long>(col_t.size());
        std::vector<coheat_steady_result> res(n);
        check(coheat_steady_batch(cfg.get(), col_t.data(), col_dt.data(), nullptr,
                                  nullptr, n, resolved_workers(ov), res.data()));

        CsvFile csv(join_path(dir, std::string("fig5_current_") + c.tag + ".csv"));
        csv.header("dphi,T,delta_T,J_h,J_c");
        for (long i = 0; i < n; ++i) {
            csv.num(c.dphi);
            csv.num(col_t[i]);
            csv.num(col_dt[i]);
            csv.num(res[i].current_hot);
            csv.num(res[i].current_cold, true);
        }
        write_manifest(csv.path(), cfg.get(), "preset fig5",
                       {{"grid.t", fmt_list(ts)}, {"grid.delta_t", fmt_list(dts)}});
    }
}

void run_preset(const std::string& name, const FileConfig& fc, const Overrides& ov) {
    if (fc.mode || !fc.scalars.empty() || !fc.lists.empty())
        throw CliError{3, "validation: presets are self-contained; "
                          "drop --config or use an explicit mode"};
    std::string dir = ov.out ? *ov.out : ".";
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw CliError{5, "resource: cannot create output directory '" + dir + "'"};
    if (name == "fig2") preset_fig2(dir, ov);
    else if (name == "fig3") preset_fig3(dir, ov);
    else if (name == "fig4") preset_fig4(dir, ov);
    else if (name == "fig5") preset_fig5(dir, ov);
    else throw CliError{3, "validation: unknown preset '" + name + "'"};
}

int run_selfcheck_cmd() {
    int checks = 0, failed = 0;
    check(coheat_selfcheck(1, &checks, &failed));
    std::printf("selfcheck: %d checks, %d failed\n", checks, failed);
    return failed == 0 ? 0 : 1;
}

void dispatch_mode(const std::string& mode, const FileConfig& fc, const Overrides& ov) {
    if (mode == "trajectory" || mode == "run") mode_trajectory(fc, ov);
    else if (mode == "steady") mode_steady(fc, ov);
    else if (mode == "phase-sweep" || mode == "sweep-phase") mode_phase_sweep(fc, ov);
    else if (mode == "conductance") mode_conductance(fc, ov);
    else if (mode == "entropy") mode_entropy(fc, ov);
    else
        throw CliError{3, "validation: unknown mode '" + mode +
                              "' (trajectory|steady|phase-sweep|conductance|entropy)"};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coheat: two-qubit collision-model heat transport with "
                 "coherence-bearing reservoirs"};
    app.require_subcommand(0, 1);

    Overrides ov;
    std::string config_path, out_path;
    int workers = 0, window = 0;
    double tol = 0.0;
    long max_steps = 0, joint_cap = 0;
    auto* oc = app.add_option("--config", config_path, "experiment config file");
    auto* oo = app.add_option("--out", out_path, "output CSV path (directory for presets)");
    auto* ow = app.add_option("--workers", workers, "worker threads (0 = auto)");
    auto* ot = app.add_option("--tol", tol, "steady-detection tolerance");
    auto* owin = app.add_option("--window", window, "steady-detection window");
    auto* om = app.add_option("--max-steps", max_steps,
                              "collision cap (trajectory length for run)");
    auto* oj = app.add_option("--joint-cap", joint_cap,
                              "max collisions kept in the exact joint state");

    auto* c_run = app.add_subcommand("run", "collision trajectory with per-step heats");
    auto* c_steady = app.add_subcommand("steady", "steady-state currents");
    auto* c_sweep = app.add_subcommand("sweep-phase", "steady currents over a phase grid");
    auto* c_cond = app.add_subcommand("conductance", "linear-response conductance fits");
    auto* c_entropy = app.add_subcommand("entropy", "exact joint-state entropy ledger");
    auto* c_preset = app.add_subcommand("preset", "figure-reproduction data sets");
    std::string preset_name;
    c_preset->add_option("name", preset_name, "fig2|fig3|fig4|fig5")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5"}));
    auto* c_check = app.add_subcommand("selfcheck", "analytic-oracle invariant suite");
    for (CLI::App* sc : {c_run, c_steady, c_sweep, c_cond, c_entropy, c_preset, c_check})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::fprintf(stderr, "coheat: parse: %s\n", e.what());
        return 2;
    }

    if (oc->count()) ov.config_path = config_path;
    if (oo->count()) ov.out = out_path;
    if (ow->count()) ov.workers = workers;
    if (ot->count()) ov.tol = tol;
    if (owin->count()) ov.window = window;
    if (om->count()) ov.max_steps = max_steps;
    if (oj->count()) ov.joint_cap = joint_cap;

    try {
        FileConfig fc;
        if (ov.config_path) fc = parse_config_file(*ov.config_path);

        if (c_check->parsed()) return run_selfcheck_cmd();
        if (c_preset->parsed()) {
            run_preset(preset_name, fc, ov);
            return 0;
        }
        if (c_run->parsed()) dispatch_mode("trajectory", fc, ov);
        else if (c_steady->parsed()) dispatch_mode("steady", fc, ov);
        else if (c_sweep->parsed()) dispatch_mode("phase-sweep", fc, ov);
        else if (c_cond->parsed()) dispatch_mode("conductance", fc, ov);
        else if (c_entropy->parsed()) dispatch_mode("entropy", fc, ov);
        else {
            if (!ov.config_path)
                throw CliError{3, "validation: give a subcommand or --config with a "
                                  "'mode' key (see --help)"};
            if (!fc.mode)
                throw CliError{3, "validation: config is missing required key 'mode'"};
            dispatch_mode(*fc.mode, fc, ov);
        }
    } catch (const CliError& e) {
        std::fprintf(stderr, "coheat: %s\n", e.message.c_str());
        return e.exit_code;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "coheat: internal: %s\n", e.what());
        return 1;
    }
    return 0;
}
