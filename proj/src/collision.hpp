#pragma once

#include <vector>

#include "linalg.hpp"

namespace coheat {

// One reservoir's ancilla recipe. Effective temperature acts through the
// populations; `coherence_weight` (p) scales the off-diagonal part.
struct AncillaSpec {
    double temperature = 1.0;
    double phase = 0.0;
    double coherence_weight = 0.0;
    double frequency = 1.0;

    double beta() const { return 1.0 / temperature; }
    void validate() const;
};

struct CouplingParams {
    double gamma = 0.0;  // subsystem-reservoir strength
    double delta = 0.0;  // inter-subsystem strength

    void validate() const;
};

struct CollisionConfig {
    AncillaSpec hot;
    AncillaSpec cold;
    CouplingParams coupling;
    DensityMatrix initial_system;

    CollisionConfig();
    void validate() const;
};

// |11><11|, the joint ground state for omega > 0.
DensityMatrix ground_state_system();

DensityMatrix thermal_state(const AncillaSpec& spec);
DensityMatrix coherent_ancilla(const AncillaSpec& spec);

// cos(theta) I + i sin(theta) S_sw on the |00>,|01>,|10>,|11> basis.
Eigen::Matrix4cd swap_gate(double theta);

// Dense embedding of a two-qubit gate at qubit positions (q1, q2) of an
// n_qubits register, qubit 0 slowest.
Mat embed_pair(const Eigen::Matrix4cd& gate, int q1, int q2, int n_qubits);

// rho -> G rho G^dagger with G = embed_pair(gate, q1, q2, n_qubits), without
// forming the embedded matrix.
void apply_pair_gate(Mat& rho, const Eigen::Matrix4cd& gate, int q1, int q2,
                     int n_qubits);

// Monolithic 16x16 unitary of one collision on (S_A, S_B, R_h, R_c):
// U_B(gamma) U_A(gamma) V(delta).
Mat collision_unitary(const CouplingParams& coupling);

struct CollisionStepResult {
    DensityMatrix system;      // 4x4
    DensityMatrix hot_ancilla; // 2x2, post-collision
    DensityMatrix cold_ancilla;
};

CollisionStepResult collision_step(const DensityMatrix& system,
                                   const DensityMatrix& hot_ancilla,
                                   const DensityMatrix& cold_ancilla,
                                   const CouplingParams& coupling);

// Tr[(omega/2) sigma_z (after - before)]; positive = energy entered the reservoir.
double heat_exchange(const Mat& ancilla_after, const Mat& ancilla_before,
                     double frequency);

struct TrajectoryRecord {
    long step = 0;  // 1-based collision index
    double heat_hot = 0.0;
    double heat_cold = 0.0;
    DensityMatrix system_state;
};

// Runs n_max collisions with fresh ancillas every step. The recorded reduced
// state is rehermitized and trace-normalized each step to stop secular
// floating-point drift; invariant violations surface as numerical errors
// naming the step.
std::vector<TrajectoryRecord> run_trajectory(const CollisionConfig& config, long n_max);

}  // namespace coheat
