#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace coheat {

namespace {

long long product(const std::vector<int>& v) {
    long long p = 1;
    for (int d : v) p *= d;
    return p;
}

void check_dims(const Mat& m, const std::vector<int>& dims) {
    if (m.rows() != m.cols())
        throw ArgumentError("matrix is not square");
    if (dims.empty())
        throw ArgumentError("empty subsystem dimension list");
    for (int d : dims)
        if (d < 1) throw ArgumentError("subsystem dimension must be positive");
    if (product(dims) != m.rows()) {
        std::ostringstream os;
        os << "dimension mismatch: matrix is " << m.rows() << "x" << m.cols()
           << " but subsystem dims multiply to " << product(dims);
        throw ArgumentError(os.str());
    }
}

}  // namespace

Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

double hermiticity_defect(const Mat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

DensityMatrix::DensityMatrix(Mat m, std::vector<int> dims)
    : m_(std::move(m)), dims_(std::move(dims)) {
    check_dims(m_, dims_);
    validate();
}

DensityMatrix::DensityMatrix(Mat m, std::vector<int> dims, Unchecked)
    : m_(std::move(m)), dims_(std::move(dims)) {
    check_dims(m_, dims_);
}

void DensityMatrix::validate() const {
    double herm = hermiticity_defect(m_);
    if (herm > kHermTol) {
        std::ostringstream os;
        os << "state is not Hermitian: defect " << herm;
        throw ValidationError(os.str());
    }
    double tr = std::abs(m_.trace() - cplx(1.0, 0.0));
    if (tr > kTraceTol) {
        std::ostringstream os;
        os << "state trace deviates from 1 by " << tr;
        throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m_, Eigen::EigenvaluesOnly);
    double lo = es.eigenvalues().minCoeff();
    if (lo < kEigFloor) {
        std::ostringstream os;
        os << "state has eigenvalue " << lo << " below the positivity floor";
        throw ValidationError(os.str());
    }
}

Mat partial_trace(const Mat& rho, const std::vector<int>& dims,
                  const std::vector<int>& keep) {
    check_dims(rho, dims);
    if (keep.empty())
        throw ArgumentError("partial_trace: keep set is empty");
    std::vector<char> seen(dims.size(), 0);
    for (int k : keep) {
        if (k < 0 || k >= static_cast<int>(dims.size()))
            throw ArgumentError("partial_trace: keep index out of range");
        if (seen[k]) throw ArgumentError("partial_trace: duplicate keep index");
        seen[k] = 1;
    }
    if (!std::is_sorted(keep.begin(), keep.end()))
        throw ArgumentError("partial_trace: keep indices must be ascending");

    const int ns = static_cast<int>(dims.size());
    std::vector<long long> stride(ns);
    long long acc = 1;
    for (int i = ns - 1; i >= 0; --i) {
        stride[i] = acc;
        acc *= dims[i];
    }

    std::vector<int> traced;
    for (int i = 0; i < ns; ++i)
        if (!seen[i]) traced.push_back(i);

    long long dk = 1;
    for (int k : keep) dk *= dims[k];
    long long dt = 1;
    for (int t : traced) dt *= dims[t];

    // Absolute index offsets for every kept and traced multi-index.
    std::vector<long long> koff(dk, 0);
    for (long long a = 0; a < dk; ++a) {
        long long rest = a;
        for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
            int sub = keep[i];
            koff[a] += (rest % dims[sub]) * stride[sub];
            rest /= dims[sub];
        }
    }
    std::vector<long long> toff(dt, 0);
    for (long long t = 0; t < dt; ++t) {
        long long rest = t;
        for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
            int sub = traced[i];
            toff[t] += (rest % dims[sub]) * stride[sub];
            rest /= dims[sub];
        }
    }

    Mat out = Mat::Zero(dk, dk);
    for (long long a = 0; a < dk; ++a)
        for (long long b = 0; b < dk; ++b) {
            cplx s = 0.0;
            for (long long t = 0; t < dt; ++t)
                s += rho(koff[a] + toff[t], koff[b] + toff[t]);
            out(a, b) = s;
        }
    return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    Mat out = partial_trace(rho.mat(), rho.dims(), keep);
    std::vector<int> kept_dims;
    for (int k : keep) kept_dims.push_back(rho.dims()[k]);
    return DensityMatrix(std::move(out), std::move(kept_dims), DensityMatrix::Unchecked{});
}

EigDecomposition hermitian_eig(const Mat& m) {
    if (m.rows() != m.cols())
        throw ArgumentError("hermitian_eig: matrix is not square");
    double herm = hermiticity_defect(m);
    if (herm > 1e-10) {
        std::ostringstream os;
        os << "hermitian_eig: input defect " << herm << " exceeds 1e-10";
        throw ArgumentError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success)
        throw NumericalError("hermitian_eig: eigensolver failed to converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Mat matrix_log(const Mat& rho, double clamp, bool* clamped) {
    if (clamp <= 0.0)
        throw ArgumentError("matrix_log: clamp must be positive");
    EigDecomposition ed = hermitian_eig(rho);
    bool hit = false;
    RVec lam = ed.eigenvalues;
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (lam[i] < clamp) {
            lam[i] = clamp;
            hit = true;
        }
    }
    if (clamped) *clamped = hit;
    Mat out = ed.eigenvectors * lam.array().log().matrix().asDiagonal() *
              ed.eigenvectors.adjoint();
    return 0.5 * (out + out.adjoint().eval());
}

double von_neumann_entropy(const Mat& rho) {
    EigDecomposition ed = hermitian_eig(rho);
    double s = 0.0;
    for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i) {
        double lam = ed.eigenvalues[i];
        if (lam < kEigFloor) {
            std::ostringstream os;
            os << "von_neumann_entropy: eigenvalue " << lam
               << " below the positivity floor";
            throw ValidationError(os.str());
        }
        if (lam <= 0.0) continue;
        s -= lam * std::log(lam);
    }
    return s;
}

double relative_entropy(const Mat& rho1, const Mat& rho2, double clamp,
                        bool* support_violated) {
    if (rho1.rows() != rho2.rows() || rho1.cols() != rho2.cols())
        throw ArgumentError("relative_entropy: dimension mismatch");

    EigDecomposition e2 = hermitian_eig(rho2);
    bool violated = false;
    RVec lam2 = e2.eigenvalues;
    for (Eigen::Index i = 0; i < lam2.size(); ++i) {
        if (lam2[i] < clamp || lam2[i] < 1e-15) {
            // Weight of rho1 along a direction rho2 barely supports.
            double w = std::real(cplx(
                (e2.eigenvectors.col(i).adjoint() * rho1 * e2.eigenvectors.col(i))(0, 0)));
            if (w > 1e-12) violated = true;
        }
        if (lam2[i] < clamp) lam2[i] = clamp;
    }
    if (support_violated) *support_violated = violated;

    Mat ln2 = e2.eigenvectors * lam2.array().log().matrix().asDiagonal() *
              e2.eigenvectors.adjoint();

    EigDecomposition e1 = hermitian_eig(rho1);
    double tr_ln1 = 0.0;
    for (Eigen::Index i = 0; i < e1.eigenvalues.size(); ++i) {
        double lam = e1.eigenvalues[i];
        if (lam > 0.0) tr_ln1 += lam * std::log(lam);
    }
    double tr_ln2 = std::real((rho1 * ln2).trace());
    return tr_ln1 - tr_ln2;
}

double expectation(const Mat& h, const Mat& rho) {
    if (h.rows() != rho.rows() || h.cols() != rho.cols())
        throw ArgumentError("expectation: dimension mismatch");
    if (hermiticity_defect(h) > 1e-10)
        throw ArgumentError("expectation: observable is not Hermitian");
    cplx tr = (h * rho).trace();
    if (std::abs(tr.imag()) > 1e-10) {
        std::ostringstream os;
        os << "expectation: imaginary residue " << tr.imag();
        throw NumericalError(os.str());
    }
    return tr.real();
}

}  // namespace coheat
