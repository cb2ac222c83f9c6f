#include "entropy.hpp"

#include <cmath>
#include <sstream>

namespace coheat {

namespace {

void check_cap(int n, int cap) {
    if (n < 1) throw ArgumentError("joint trajectory needs at least one collision");
    if (cap < 1 || cap > kJointCapHardMax) {
        std::ostringstream os;
        os << "joint collision cap must lie in [1, " << kJointCapHardMax << "]";
        throw ArgumentError(os.str());
    }
    if (n > cap) {
        double dim = 4.0 * std::pow(4.0, n);
        double bytes = dim * dim * 16.0;
        std::ostringstream os;
        os << n << " collisions exceed the joint cap " << cap
           << " (state would be " << static_cast<long long>(dim) << "-dimensional, about "
           << static_cast<long long>(bytes / (1024.0 * 1024.0)) << " MiB)";
        throw ResourceError(os.str());
    }
}

void one_collision(Mat& rho, std::vector<int>& dims, const CollisionConfig& config,
                   const Mat& ancilla_pair) {
    rho = kron(rho, ancilla_pair);
    dims.push_back(2);
    dims.push_back(2);
    int k = static_cast<int>(dims.size());
    apply_pair_gate(rho, swap_gate(config.coupling.delta), 0, 1, k);
    apply_pair_gate(rho, swap_gate(config.coupling.gamma), 0, k - 2, k);
    apply_pair_gate(rho, swap_gate(config.coupling.gamma), 1, k - 1, k);
}

double entropy_from_state(const Mat& rho) { return von_neumann_entropy(rho); }

}  // namespace

JointState joint_trajectory(const CollisionConfig& config, int n, int cap) {
    config.validate();
    check_cap(n, cap);

    Mat pair = kron(coherent_ancilla(config.hot).mat(),
                    coherent_ancilla(config.cold).mat());
    JointState js{config.initial_system.mat(), {2, 2}, 0};
    for (int j = 1; j <= n; ++j) {
        one_collision(js.state, js.dims, config, pair);
        js.n_collisions = j;
    }
    return js;
}

EntropyLedgerRow entropy_ledger(const JointState& joint, const CollisionConfig& config) {
    config.validate();
    const int n = joint.n_collisions;
    if (n < 1) throw ArgumentError("entropy_ledger: joint state has no collisions");
    if (joint.dims != std::vector<int>(2 + 2 * n, 2))
        throw ArgumentError("entropy_ledger: joint state register mismatch");

    Mat eta_h = coherent_ancilla(config.hot).mat();
    Mat eta_c = coherent_ancilla(config.cold).mat();
    Mat eta_pair = kron(eta_h, eta_c);

    bool clamped_h = false, clamped_c = false, clamped_pair = false;
    Mat ln_h = matrix_log(eta_h, kLogClamp, &clamped_h);
    Mat ln_c = matrix_log(eta_c, kLogClamp, &clamped_c);
    Mat ln_pair = matrix_log(eta_pair, kLogClamp, &clamped_pair);

    EntropyLedgerRow row;
    row.n = n;
    row.support_violated = clamped_h || clamped_c || clamped_pair;

    Mat rho_s = partial_trace(joint.state, joint.dims, {0, 1});
    double s_marginal = von_neumann_entropy(rho_s);
    row.ds_system = s_marginal - von_neumann_entropy(config.initial_system.mat());

    // Production as a genuine relative entropy against the product of the
    // current system marginal with fresh reservoir states. The reference's
    // logarithm splits over the factors, so only marginals are needed, and
    // the system factor contributes exactly -S(rho_S).
    double tr_rho_ln_rho = 0.0;
    {
        Eigen::SelfAdjointEigenSolver<Mat> es(joint.state, Eigen::EigenvaluesOnly);
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            double lam = es.eigenvalues()[i];
            if (lam < kEigFloor) {
                std::ostringstream os;
                os << "entropy_ledger: joint eigenvalue " << lam
                   << " below the positivity floor";
                throw ValidationError(os.str());
            }
            if (lam > 0.0) tr_rho_ln_rho += lam * std::log(lam);
        }
    }
    double tr_rho_ln_ref = -s_marginal;
    for (int j = 0; j < n; ++j) {
        Mat pair_marg = partial_trace(joint.state, joint.dims, {2 + 2 * j, 3 + 2 * j});
        tr_rho_ln_ref += std::real((pair_marg * ln_pair).trace());
        row.ds_flow_total += std::real(((pair_marg - eta_pair) * ln_pair).trace());

        Mat h_marg = partial_trace(joint.state, joint.dims, {2 + 2 * j});
        Mat c_marg = partial_trace(joint.state, joint.dims, {3 + 2 * j});
        row.ds_flow_hot += std::real(((h_marg - eta_h) * ln_h).trace());
        row.ds_flow_cold += std::real(((c_marg - eta_c) * ln_c).trace());
    }
    row.ds_production = tr_rho_ln_rho - tr_rho_ln_ref;
    return row;
}

std::vector<EntropyLedgerRow> entropy_ledger_series(const CollisionConfig& config,
                                                    int n_collisions, int cap) {
    config.validate();
    check_cap(n_collisions, cap);

    Mat pair = kron(coherent_ancilla(config.hot).mat(),
                    coherent_ancilla(config.cold).mat());
    JointState js{config.initial_system.mat(), {2, 2}, 0};
    std::vector<EntropyLedgerRow> rows;
    for (int j = 1; j <= n_collisions; ++j) {
        one_collision(js.state, js.dims, config, pair);
        js.n_collisions = j;
        rows.push_back(entropy_ledger(js, config));
    }
    return rows;
}

EntropyIdentityReport entropy_identity_check(const EntropyLedgerRow& row) {
    EntropyIdentityReport rep;
    rep.decomposition_residual =
        std::abs(row.ds_system - row.ds_production - row.ds_flow_total);
    rep.split_residual =
        std::abs(row.ds_flow_total - row.ds_flow_hot - row.ds_flow_cold);
    rep.pass = rep.decomposition_residual < 1e-9 && rep.split_residual < 1e-9;
    return rep;
}

double global_entropy_drift(const JointState& joint, const CollisionConfig& config) {
    config.validate();
    double s_now = entropy_from_state(joint.state);
    double s_initial = von_neumann_entropy(config.initial_system.mat()) +
                       joint.n_collisions *
                           (von_neumann_entropy(coherent_ancilla(config.hot).mat()) +
                            von_neumann_entropy(coherent_ancilla(config.cold).mat()));
    return std::abs(s_now - s_initial);
}

BookkeepingReport energy_bookkeeping_check(const CollisionConfig& config, int n, int cap) {
    config.validate();
    check_cap(n, cap);

    JointState js = joint_trajectory(config, n, cap);
    Mat hz(2, 2);
    hz << 0.5, 0.0, 0.0, -0.5;
    Mat h_hot = config.hot.frequency * hz;
    Mat h_cold = config.cold.frequency * hz;

    Mat eta_h = coherent_ancilla(config.hot).mat();
    Mat eta_c = coherent_ancilla(config.cold).mat();
    double e_h0 = std::real((h_hot * eta_h).trace());
    double e_c0 = std::real((h_cold * eta_c).trace());

    BookkeepingReport rep;
    for (int j = 0; j < n; ++j) {
        Mat h_marg = partial_trace(js.state, js.dims, {2 + 2 * j});
        Mat c_marg = partial_trace(js.state, js.dims, {3 + 2 * j});
        rep.joint_energy_hot += std::real((h_hot * h_marg).trace()) - e_h0;
        rep.joint_energy_cold += std::real((h_cold * c_marg).trace()) - e_c0;
    }

    for (const TrajectoryRecord& rec : run_trajectory(config, n)) {
        rep.stepwise_heat_hot += rec.heat_hot;
        rep.stepwise_heat_cold += rec.heat_cold;
    }
    rep.residual_hot = std::abs(rep.joint_energy_hot - rep.stepwise_heat_hot);
    rep.residual_cold = std::abs(rep.joint_energy_cold - rep.stepwise_heat_cold);
    return rep;
}

}  // namespace coheat
