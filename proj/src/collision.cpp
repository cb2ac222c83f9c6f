#include "collision.hpp"

#include <cmath>
#include <sstream>

namespace coheat {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat sigma_z2() {
    Mat s(2, 2);
    s << 1.0, 0.0, 0.0, -1.0;
    return s;
}

}  // namespace

void AncillaSpec::validate() const {
    if (!(temperature > 0.0))
        throw ValidationError("ancilla temperature must be positive");
    if (!(frequency > 0.0))
        throw ValidationError("ancilla frequency must be positive");
    if (!(coherence_weight >= 0.0 && coherence_weight <= 1.0))
        throw ValidationError("coherence weight must lie in [0, 1]");
    if (!std::isfinite(phase))
        throw ValidationError("ancilla phase must be finite");
}

void CouplingParams::validate() const {
    if (!(gamma >= 0.0 && gamma <= kPi / 2.0 + 1e-15))
        throw ValidationError("gamma must lie in [0, pi/2]");
    if (!(delta >= 0.0 && delta <= kPi / 2.0 + 1e-15))
        throw ValidationError("delta must lie in [0, pi/2]");
}

DensityMatrix ground_state_system() {
    Mat m = Mat::Zero(4, 4);
    m(3, 3) = 1.0;
    return DensityMatrix(std::move(m), {2, 2}, DensityMatrix::Unchecked{});
}

CollisionConfig::CollisionConfig()
    : hot{}, cold{}, coupling{kPi / 32.0, kPi / 4.0}, initial_system(ground_state_system()) {}

void CollisionConfig::validate() const {
    hot.validate();
    cold.validate();
    coupling.validate();
    if (hot.frequency != cold.frequency)
        throw ValidationError("hot and cold frequencies must match (resonance)");
    if (initial_system.dims() != std::vector<int>{2, 2})
        throw ValidationError("initial system must factor as two qubits");
    initial_system.validate();
}

DensityMatrix thermal_state(const AncillaSpec& spec) {
    spec.validate();
    double x = spec.beta() * spec.frequency / 2.0;
    double z = std::exp(-x) + std::exp(x);
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = std::exp(-x) / z;
    m(1, 1) = std::exp(x) / z;
    return DensityMatrix(std::move(m), {2}, DensityMatrix::Unchecked{});
}

DensityMatrix coherent_ancilla(const AncillaSpec& spec) {
    spec.validate();
    double x = spec.beta() * spec.frequency / 4.0;
    double z = std::exp(-2.0 * x) + std::exp(2.0 * x);
    double sq = std::sqrt(z);
    // Amplitudes taken literally from the state definition; the populations
    // reproduce the thermal diagonal because |amp|^2 sums to Z.
    Eigen::Vector2cd psi;
    psi(0) = std::exp(-x) / sq;
    psi(1) = std::polar(1.0, spec.phase) * std::exp(x) / sq;
    double p = spec.coherence_weight;
    Mat pure = psi * psi.adjoint();
    Mat m = p * pure + (1.0 - p) * thermal_state(spec).mat();
    DensityMatrix out(std::move(m), {2}, DensityMatrix::Unchecked{});
    double tr_err = std::abs(out.mat().trace() - cplx(1.0, 0.0));
    if (tr_err > kTraceTol)
        throw NumericalError("coherent ancilla trace deviates from 1");
    return out;
}

Eigen::Matrix4cd swap_gate(double theta) {
    Eigen::Matrix4cd sw = Eigen::Matrix4cd::Zero();
    sw(0, 0) = 1.0;
    sw(1, 2) = 1.0;
    sw(2, 1) = 1.0;
    sw(3, 3) = 1.0;
    return std::cos(theta) * Eigen::Matrix4cd::Identity() + cplx(0.0, 1.0) * std::sin(theta) * sw;
}

Mat embed_pair(const Eigen::Matrix4cd& gate, int q1, int q2, int n_qubits) {
    if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n_qubits || q2 >= n_qubits)
        throw ArgumentError("embed_pair: invalid qubit pair");
    const long long dim = 1LL << n_qubits;
    const long long m1 = 1LL << (n_qubits - 1 - q1);
    const long long m2 = 1LL << (n_qubits - 1 - q2);
    Mat out = Mat::Zero(dim, dim);
    for (long long col = 0; col < dim; ++col) {
        int b1 = (col & m1) ? 1 : 0;
        int b2 = (col & m2) ? 1 : 0;
        long long base = col & ~(m1 | m2);
        int in = b1 * 2 + b2;
        for (int outb = 0; outb < 4; ++outb) {
            cplx g = gate(outb, in);
            if (g == cplx(0.0, 0.0)) continue;
            long long row = base | ((outb >> 1) ? m1 : 0) | ((outb & 1) ? m2 : 0);
            out(row, col) += g;
        }
    }
    return out;
}

void apply_pair_gate(Mat& rho, const Eigen::Matrix4cd& gate, int q1, int q2,
                     int n_qubits) {
    if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n_qubits || q2 >= n_qubits)
        throw ArgumentError("apply_pair_gate: invalid qubit pair");
    const long long dim = 1LL << n_qubits;
    if (rho.rows() != dim || rho.cols() != dim)
        throw ArgumentError("apply_pair_gate: register size mismatch");
    const long long m1 = 1LL << (n_qubits - 1 - q1);
    const long long m2 = 1LL << (n_qubits - 1 - q2);

    // Row pass: rho <- G rho.
    for (long long base = 0; base < dim; ++base) {
        if (base & (m1 | m2)) continue;
        const long long r[4] = {base, base | m2, base | m1, base | m1 | m2};
        for (long long col = 0; col < dim; ++col) {
            cplx v[4] = {rho(r[0], col), rho(r[1], col), rho(r[2], col), rho(r[3], col)};
            for (int i = 0; i < 4; ++i) {
                cplx s = 0.0;
                for (int j = 0; j < 4; ++j) s += gate(i, j) * v[j];
                rho(r[i], col) = s;
            }
        }
    }
    // Column pass: rho <- rho G^dagger.
    for (long long base = 0; base < dim; ++base) {
        if (base & (m1 | m2)) continue;
        const long long c[4] = {base, base | m2, base | m1, base | m1 | m2};
        for (long long row = 0; row < dim; ++row) {
            cplx v[4] = {rho(row, c[0]), rho(row, c[1]), rho(row, c[2]), rho(row, c[3])};
            for (int i = 0; i < 4; ++i) {
                cplx s = 0.0;
                for (int j = 0; j < 4; ++j) s += v[j] * std::conj(gate(i, j));
                rho(row, c[i]) = s;
            }
        }
    }
}

Mat collision_unitary(const CouplingParams& coupling) {
    coupling.validate();
    Mat v = embed_pair(swap_gate(coupling.delta), 0, 1, 4);
    Mat ua = embed_pair(swap_gate(coupling.gamma), 0, 2, 4);
    Mat ub = embed_pair(swap_gate(coupling.gamma), 1, 3, 4);
    return ub * ua * v;
}

CollisionStepResult collision_step(const DensityMatrix& system,
                                   const DensityMatrix& hot_ancilla,
                                   const DensityMatrix& cold_ancilla,
                                   const CouplingParams& coupling) {
    if (system.dim() != 4 || hot_ancilla.dim() != 2 || cold_ancilla.dim() != 2)
        throw ArgumentError("collision_step: register must be 4x2x2");
    coupling.validate();

    Mat rho = kron(kron(system.mat(), hot_ancilla.mat()), cold_ancilla.mat());
    apply_pair_gate(rho, swap_gate(coupling.delta), 0, 1, 4);
    apply_pair_gate(rho, swap_gate(coupling.gamma), 0, 2, 4);
    apply_pair_gate(rho, swap_gate(coupling.gamma), 1, 3, 4);

    const std::vector<int> dims{2, 2, 2, 2};
    Mat sys = partial_trace(rho, dims, {0, 1});
    Mat hot = partial_trace(rho, dims, {2});
    Mat cold = partial_trace(rho, dims, {3});
    return {DensityMatrix(std::move(sys), {2, 2}),
            DensityMatrix(std::move(hot), {2}),
            DensityMatrix(std::move(cold), {2})};
}

double heat_exchange(const Mat& ancilla_after, const Mat& ancilla_before,
                     double frequency) {
    if (ancilla_after.rows() != 2 || ancilla_before.rows() != 2)
        throw ArgumentError("heat_exchange: ancilla states must be 2x2");
    Mat h = (frequency / 2.0) * sigma_z2();
    return expectation(h, ancilla_after) - expectation(h, ancilla_before);
}

std::vector<TrajectoryRecord> run_trajectory(const CollisionConfig& config, long n_max) {
    if (n_max < 1)
        throw ArgumentError("run_trajectory: n_max must be at least 1");
    config.validate();

    DensityMatrix hot = coherent_ancilla(config.hot);
    DensityMatrix cold = coherent_ancilla(config.cold);
    DensityMatrix state = config.initial_system;

    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<size_t>(n_max));
    for (long n = 1; n <= n_max; ++n) {
        CollisionStepResult step = [&] {
            try {
                return collision_step(state, hot, cold, config.coupling);
            } catch (const ValidationError& e) {
                std::ostringstream os;
                os << "state invariant violated at collision " << n << ": " << e.what();
                throw NumericalError(os.str());
            }
        }();

        // Kill secular drift before the state is recorded or reused.
        Mat m = 0.5 * (step.system.mat() + step.system.mat().adjoint().eval());
        m /= m.trace().real();
        try {
            state = DensityMatrix(std::move(m), {2, 2});
        } catch (const ValidationError& e) {
            std::ostringstream os;
            os << "state invariant violated at collision " << n << ": " << e.what();
            throw NumericalError(os.str());
        }

        records.push_back({n,
                           heat_exchange(step.hot_ancilla.mat(), hot.mat(), config.hot.frequency),
                           heat_exchange(step.cold_ancilla.mat(), cold.mat(), config.cold.frequency),
                           state});
    }
    return records;
}

}  // namespace coheat
