#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "errors.hpp"

namespace coheat {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;

// Tolerances used by the state validators.
inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigFloor = -1e-10;
inline constexpr double kLogClamp = 1e-300;

Mat kron(const Mat& a, const Mat& b);

// A density operator together with its tensor factorization.
class DensityMatrix {
public:
    struct Unchecked {};

    DensityMatrix(Mat m, std::vector<int> dims);
    DensityMatrix(Mat m, std::vector<int> dims, Unchecked);

    const Mat& mat() const { return m_; }
    const std::vector<int>& dims() const { return dims_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    // Throws ValidationError when the Hermiticity/trace/positivity bands fail.
    void validate() const;

private:
    Mat m_;
    std::vector<int> dims_;
};

// Maximum entrywise |M - M^dagger|.
double hermiticity_defect(const Mat& m);

// Trace out every subsystem not listed in `keep` (ascending subsystem indices
// into rho.dims()). The kept subsystems stay in their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Same, on a raw matrix with an explicit factorization.
Mat partial_trace(const Mat& rho, const std::vector<int>& dims, const std::vector<int>& keep);

struct EigDecomposition {
    RVec eigenvalues;  // ascending
    Mat eigenvectors;  // columns
};

// Requires hermiticity defect <= 1e-10.
EigDecomposition hermitian_eig(const Mat& m);

// V f(diag) V^dagger with eigenvalues below `clamp` replaced by clamp.
// Sets *clamped when any eigenvalue needed clamping.
Mat matrix_log(const Mat& rho, double clamp = kLogClamp, bool* clamped = nullptr);

// -sum lambda ln lambda in nats; eigenvalues in [-1e-10, 0) count as 0,
// anything lower is a hard validation error.
double von_neumann_entropy(const Mat& rho);

// Tr rho1 (ln rho1 - ln rho2). support_violated (optional) is set when rho1
// carries weight above 1e-12 on a clamped eigendirection of rho2.
double relative_entropy(const Mat& rho1, const Mat& rho2,
                        double clamp = kLogClamp, bool* support_violated = nullptr);

// Tr(h rho) for Hermitian h; imaginary residue above 1e-10 is a numerical
// error, below that it is discarded.
double expectation(const Mat& h, const Mat& rho);

}  // namespace coheat
