#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "collision.hpp"
#include "linalg.hpp"

using namespace coheat;

namespace {

Mat random_density(int dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            a(i, j) = cplx(gauss(rng), gauss(rng));
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

Mat random_unitary(int dim, unsigned seed) {
    Mat h = random_density(dim, seed);
    return hermitian_eig(h).eigenvectors;
}

}  // namespace

TEST_CASE("kron is left-factor major") {
    Mat a(2, 2), b(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    b << 5.0, 6.0, 7.0, 8.0;
    Mat k = kron(a, b);
    REQUIRE(k.rows() == 4);
    // block (i,j) is a(i,j) * b
    CHECK(k(0, 0) == cplx(5.0));
    CHECK(k(0, 2) == cplx(10.0));
    CHECK(k(1, 1) == cplx(8.0));
    CHECK(k(2, 0) == cplx(15.0));
    CHECK(k(3, 3) == cplx(32.0));
}

TEST_CASE("density matrix constructor validates") {
    Mat good = Mat::Zero(2, 2);
    good(0, 0) = 0.25;
    good(1, 1) = 0.75;
    CHECK_NOTHROW(DensityMatrix(good, {2}));

    Mat nonherm = good;
    nonherm(0, 1) = cplx(0.0, 1e-6);
    CHECK_THROWS_AS(DensityMatrix(nonherm, {2}), ValidationError);

    Mat offtrace = good;
    offtrace(0, 0) = 0.30;
    CHECK_THROWS_AS(DensityMatrix(offtrace, {2}), ValidationError);

    Mat negative = Mat::Zero(2, 2);
    negative(0, 0) = 1.001;
    negative(1, 1) = -0.001;
    CHECK_THROWS_AS(DensityMatrix(negative, {2}), ValidationError);

    // roundoff-scale negativity is tolerated
    Mat tiny = Mat::Zero(2, 2);
    tiny(0, 0) = 1.0 + 1e-11;
    tiny(1, 1) = -1e-11;
    CHECK_NOTHROW(DensityMatrix(tiny, {2}));

    Mat wrongdims = Mat::Identity(4, 4) / 4.0;
    CHECK_THROWS_AS(DensityMatrix(wrongdims, {2}), ArgumentError);
}

TEST_CASE("partial trace peels product factors") {
    Mat r1 = random_density(2, 11);
    Mat r2 = random_density(2, 22);
    Mat r3 = random_density(3, 33);
    DensityMatrix rho(kron(kron(r1, r2), r3), {2, 2, 3});

    DensityMatrix keep_first = partial_trace(rho, {0});
    CHECK((keep_first.mat() - r1).cwiseAbs().maxCoeff() < 1e-14);

    DensityMatrix keep_ends = partial_trace(rho, {0, 2});
    CHECK(keep_ends.dims() == std::vector<int>{2, 3});
    CHECK((keep_ends.mat() - kron(r1, r3)).cwiseAbs().maxCoeff() < 1e-14);

    DensityMatrix keep_mid = partial_trace(rho, {1});
    CHECK((keep_mid.mat() - r2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace composes and keeps trace") {
    Mat rho = random_density(8, 7);
    DensityMatrix full(rho, {2, 2, 2});
    DensityMatrix two = partial_trace(full, {0, 1});
    DensityMatrix one_direct = partial_trace(full, {1});
    DensityMatrix one_staged = partial_trace(two, {1});
    CHECK((one_direct.mat() - one_staged.mat()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(std::abs(one_direct.mat().trace().real() - 1.0) < 1e-13);
}

TEST_CASE("partial trace rejects bad keep lists") {
    DensityMatrix rho(Mat::Identity(4, 4) / 4.0, {2, 2});
    CHECK_THROWS_AS(partial_trace(rho, {}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(rho, {2}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(rho, {1, 0}), ArgumentError);
    CHECK_THROWS_AS(partial_trace(rho, {0, 0}), ArgumentError);
}

TEST_CASE("hermitian eigendecomposition") {
    Mat x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    EigDecomposition e = hermitian_eig(x);
    CHECK(e.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(e.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
    Mat rebuilt = e.eigenvectors * e.eigenvalues.asDiagonal().toDenseMatrix().cast<cplx>() *
                  e.eigenvectors.adjoint();
    CHECK((rebuilt - x).cwiseAbs().maxCoeff() < 1e-14);

    Mat nonherm(2, 2);
    nonherm << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(hermitian_eig(nonherm), ArgumentError);
}

TEST_CASE("matrix log of a diagonal state") {
    AncillaSpec spec;
    spec.temperature = 1.0;
    Mat rho = thermal_state(spec).mat();
    bool clamped = true;
    Mat lg = matrix_log(rho, kLogClamp, &clamped);
    CHECK(!clamped);
    CHECK(std::abs(lg(0, 0).real() - std::log(rho(0, 0).real())) < 1e-14);
    CHECK(std::abs(lg(1, 1).real() - std::log(rho(1, 1).real())) < 1e-14);
    CHECK(std::abs(lg(0, 1)) < 1e-14);

    Mat pure = Mat::Zero(2, 2);
    pure(0, 0) = 1.0;
    matrix_log(pure, kLogClamp, &clamped);
    CHECK(clamped);
}

TEST_CASE("von Neumann entropy") {
    Mat pure = Mat::Zero(2, 2);
    pure(0, 0) = 1.0;
    CHECK(von_neumann_entropy(pure) == doctest::Approx(0.0).epsilon(1e-14));

    Mat mixed = Mat::Identity(2, 2) / 2.0;
    CHECK(von_neumann_entropy(mixed) == doctest::Approx(std::log(2.0)).epsilon(1e-14));

    AncillaSpec spec;
    spec.temperature = 1.0;
    CHECK(von_neumann_entropy(thermal_state(spec).mat()) ==
          doctest::Approx(0.5822031088882178).epsilon(1e-13));

    AncillaSpec coh;
    coh.temperature = 2.0;
    coh.phase = 0.3;
    coh.coherence_weight = 0.6;
    CHECK(von_neumann_entropy(coherent_ancilla(coh).mat()) ==
          doctest::Approx(0.47801375569365501).epsilon(1e-13));

    Mat bad = Mat::Zero(2, 2);
    bad(0, 0) = 1.001;
    bad(1, 1) = -0.001;
    CHECK_THROWS_AS(von_neumann_entropy(bad), ValidationError);
}

TEST_CASE("entropy is unitarily invariant") {
    Mat rho = random_density(4, 5);
    Mat u = random_unitary(4, 6);
    double s0 = von_neumann_entropy(rho);
    double s1 = von_neumann_entropy(u * rho * u.adjoint());
    CHECK(std::abs(s0 - s1) < 1e-12);
}

TEST_CASE("relative entropy") {
    Mat rho = random_density(4, 3);
    CHECK(std::abs(relative_entropy(rho, rho)) < 1e-12);

    for (unsigned seed : {1u, 2u, 3u}) {
        Mat r1 = random_density(4, seed);
        Mat r2 = random_density(4, seed + 100);
        CHECK(relative_entropy(r1, r2) >= -1e-12);
    }

    AncillaSpec coh;
    coh.temperature = 2.0;
    coh.phase = 0.3;
    coh.coherence_weight = 0.6;
    AncillaSpec th;
    th.temperature = 2.0;
    CHECK(relative_entropy(coherent_ancilla(coh).mat(), thermal_state(th).mat()) ==
          doctest::Approx(0.18483356288552433).epsilon(1e-13));
}

TEST_CASE("relative entropy flags support violations") {
    Mat p0 = Mat::Zero(2, 2);
    p0(0, 0) = 1.0;
    Mat p1 = Mat::Zero(2, 2);
    p1(1, 1) = 1.0;
    bool violated = false;
    relative_entropy(p0, p1, kLogClamp, &violated);
    CHECK(violated);

    violated = true;
    relative_entropy(p0, Mat::Identity(2, 2) / 2.0, kLogClamp, &violated);
    CHECK(!violated);
}

TEST_CASE("expectation values") {
    Mat sz(2, 2);
    sz << 1.0, 0.0, 0.0, -1.0;
    AncillaSpec spec;
    spec.temperature = 1.0;
    CHECK(expectation(sz, thermal_state(spec).mat()) ==
          doctest::Approx(-0.46211715726000985).epsilon(1e-13));

    // non-Hermitian observables are rejected up front
    Mat anti(2, 2);
    anti << 0.0, cplx(0.0, 1.0), cplx(0.0, 1.0), 0.0;
    AncillaSpec coh;
    coh.temperature = 1.0;
    coh.coherence_weight = 1.0;
    CHECK_THROWS_AS(expectation(anti, coherent_ancilla(coh).mat()), ArgumentError);
    Mat wrong = Mat::Identity(4, 4);
    CHECK_THROWS_AS(expectation(wrong, coherent_ancilla(coh).mat()), ArgumentError);
}

TEST_CASE("hermiticity defect measures the asymmetry") {
    Mat m = Mat::Zero(2, 2);
    CHECK(hermiticity_defect(m) == 0.0);
    m(0, 1) = cplx(0.0, 2e-9);
    CHECK(hermiticity_defect(m) == doctest::Approx(2e-9).epsilon(1e-6));
}
