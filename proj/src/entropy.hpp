#pragma once

#include <vector>

#include "collision.hpp"

namespace coheat {

inline constexpr int kJointCapDefault = 4;
inline constexpr int kJointCapHardMax = 5;

// Exact global state of system plus every collided ancilla pair, in
// interaction order (S_A, S_B, h1, c1, h2, c2, ...).
struct JointState {
    Mat state;
    std::vector<int> dims;
    int n_collisions = 0;
};

// Evolves the full register through n collisions. cap defaults to 4
// (1024-dim joint state); 5 is the hard maximum and must be requested
// explicitly. n above cap is a resource error carrying a memory estimate.
JointState joint_trajectory(const CollisionConfig& config, int n,
                            int cap = kJointCapDefault);

struct EntropyLedgerRow {
    int n = 0;
    double ds_system = 0.0;      // S(rho_S after n) - S(rho_S initial)
    double ds_production = 0.0;  // relative entropy vs fresh-reservoir product
    double ds_flow_total = 0.0;  // reservoir-referenced entropy flow
    double ds_flow_hot = 0.0;
    double ds_flow_cold = 0.0;
    bool support_violated = false;  // a reservoir logarithm needed clamping
};

EntropyLedgerRow entropy_ledger(const JointState& joint, const CollisionConfig& config);

// Ledger rows for n = 1..n_collisions from one incremental evolution.
std::vector<EntropyLedgerRow> entropy_ledger_series(const CollisionConfig& config,
                                                    int n_collisions,
                                                    int cap = kJointCapDefault);

struct EntropyIdentityReport {
    double decomposition_residual = 0.0;  // |dS - dS_production - dS_flow_total|
    double split_residual = 0.0;          // |dS_flow_total - hot - cold|
    bool pass = false;                    // both residuals below 1e-9
};

EntropyIdentityReport entropy_identity_check(const EntropyLedgerRow& row);

// |S(joint after n) - S(initial product)| of the global state.
double global_entropy_drift(const JointState& joint, const CollisionConfig& config);

struct BookkeepingReport {
    double joint_energy_hot = 0.0;   // reservoir energy change from the joint state
    double joint_energy_cold = 0.0;
    double stepwise_heat_hot = 0.0;  // cumulative per-collision heats
    double stepwise_heat_cold = 0.0;
    double residual_hot = 0.0;
    double residual_cold = 0.0;
};

// Joint-state reservoir energies against cumulative stepwise heats after n
// collisions. Neither side assumes the other; the comparison is the check.
BookkeepingReport energy_bookkeeping_check(const CollisionConfig& config, int n,
                                           int cap = kJointCapDefault);

}  // namespace coheat
