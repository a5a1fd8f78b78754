#include "qoc/weyl.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "qoc/errors.hpp"

namespace qoc {

namespace {

constexpr double pi = std::numbers::pi;

// Magic (Bell) basis change; columns are the magic states.
MatrixXcd magic_basis() {
    MatrixXcd Q = MatrixXcd::Zero(4, 4);
    const double s = 1.0 / std::sqrt(2.0);
    const cplx is(0.0, s);
    Q(0, 0) = s;
    Q(0, 3) = is;
    Q(1, 1) = is;
    Q(1, 2) = s;
    Q(2, 1) = is;
    Q(2, 2) = -s;
    Q(3, 0) = s;
    Q(3, 3) = -is;
    return Q;
}

double mod2pi(double x) {
    x = std::fmod(x, 2.0 * pi);
    if (x < 0.0) x += 2.0 * pi;
    return x;
}

}  // namespace

Vector3d weyl_coordinates(const MatrixXcd& U) {
    if (U.rows() != 4 || U.cols() != 4)
        throw ValidationError("weyl_coordinates needs a 4x4 matrix");
    if ((U.adjoint() * U - MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() > 1e-8)
        throw ValidationError("weyl_coordinates needs a unitary matrix");

    // special-unitarize, then read the spectrum of M^T M in the magic basis
    const cplx det = U.determinant();
    const MatrixXcd Usu = U * std::pow(det, cplx(-0.25));
    const MatrixXcd Q = magic_basis();
    const MatrixXcd M = Q.adjoint() * Usu * Q;
    Eigen::ComplexEigenSolver<MatrixXcd> es(M.transpose() * M);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigendecomposition failed in weyl_coordinates");

    std::array<double, 4> d{};
    for (int k = 0; k < 4; ++k) d[k] = -std::arg(es.eigenvalues()[k]) / 2.0;
    d[3] = -d[0] - d[1] - d[2];  // spectrum of a special unitary multiplies to 1

    // fold the three independent angles into the chamber; the sequence of
    // reflections below tracks how many single flips were applied so the
    // last coordinate can compensate (flips must come in pairs)
    std::array<double, 3> cs{};
    for (int k = 0; k < 3; ++k) cs[k] = mod2pi((d[k] + d[3]) / 2.0);

    std::array<double, 3> folded{};
    for (int k = 0; k < 3; ++k) {
        const double m = std::fmod(cs[k], pi / 2.0);
        folded[k] = std::min(m, pi / 2.0 - m);
    }
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return folded[a] < folded[b]; });
    // middle, largest, smallest — matches the reflection bookkeeping below
    std::array<double, 3> c{cs[order[1]], cs[order[2]], cs[order[0]]};

    int flips = 0;
    if (c[0] > pi / 2.0) c[0] -= 3.0 * pi / 2.0;
    if (c[1] > pi / 2.0) c[1] -= 3.0 * pi / 2.0;
    if (c[0] > pi / 4.0) {
        c[0] = pi / 2.0 - c[0];
        ++flips;
    }
    if (c[1] > pi / 4.0) {
        c[1] = pi / 2.0 - c[1];
        ++flips;
    }
    if (c[2] > pi / 2.0) c[2] -= 3.0 * pi / 2.0;
    if (flips == 1) c[2] = pi / 2.0 - c[2];
    if (c[2] > pi / 4.0) c[2] -= pi / 2.0;

    // doubled units: CNOT at pi/2, SWAP at (pi/2, pi/2, pi/2); |c3| folds a
    // gate onto its complex conjugate's class
    Vector3d out(2.0 * c[1], 2.0 * c[0], 2.0 * std::abs(c[2]));
    for (int k = 0; k < 3; ++k)
        if (std::abs(out[k]) < 1e-13) out[k] = 0.0;
    return out;
}

MatrixXcd canonical_gate(const Vector3d& c) {
    MatrixXcd xx = MatrixXcd::Zero(4, 4);
    xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1.0;
    MatrixXcd yy = MatrixXcd::Zero(4, 4);
    yy(0, 3) = yy(3, 0) = -1.0;
    yy(1, 2) = yy(2, 1) = 1.0;
    MatrixXcd zz = MatrixXcd::Zero(4, 4);
    zz(0, 0) = zz(3, 3) = 1.0;
    zz(1, 1) = zz(2, 2) = -1.0;

    const MatrixXcd gen = 0.5 * (c[0] * xx + c[1] * yy + c[2] * zz);
    // gen is Hermitian; exponentiate through its eigensystem
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(gen);
    const VectorXcd phases =
        (es.eigenvalues().array().cast<cplx>() * cplx(0.0, 1.0)).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace qoc
