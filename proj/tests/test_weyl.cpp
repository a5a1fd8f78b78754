#include <doctest.h>

#include <numbers>
#include <random>

#include "qoc/errors.hpp"
#include "qoc/targets.hpp"
#include "qoc/weyl.hpp"

using namespace qoc;

namespace {

constexpr double half_pi = std::numbers::pi / 2.0;

MatrixXcd random_su2(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    // uniform via normalized quaternion
    double q0 = g(rng), q1 = g(rng), q2 = g(rng), q3 = g(rng);
    const double n = std::sqrt(q0 * q0 + q1 * q1 + q2 * q2 + q3 * q3);
    q0 /= n; q1 /= n; q2 /= n; q3 /= n;
    MatrixXcd u(2, 2);
    u << cplx(q0, q3), cplx(q2, q1), cplx(-q2, q1), cplx(q0, -q3);
    return u;
}

MatrixXcd kron2(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return out;
}

}  // namespace

TEST_CASE("named gates sit at their chamber corners") {
    const Vector3d cnot = weyl_coordinates(standard_target("cnot", 2));
    CHECK((cnot - Vector3d(half_pi, 0, 0)).cwiseAbs().maxCoeff() < 1e-8);

    const Vector3d eye = weyl_coordinates(standard_target("identity", 2));
    CHECK(eye.cwiseAbs().maxCoeff() < 1e-8);

    const Vector3d swap = weyl_coordinates(standard_target("swap", 2));
    CHECK((swap - Vector3d(half_pi, half_pi, half_pi)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("coordinates are invariant under local unitaries") {
    std::mt19937_64 rng(41);
    const MatrixXcd targets[] = {standard_target("cnot", 2), standard_target("swap", 2),
                                 canonical_gate({0.9, 0.4, 0.2})};
    for (const MatrixXcd& base : targets) {
        const Vector3d ref = weyl_coordinates(base);
        for (int trial = 0; trial < 35; ++trial) {
            const MatrixXcd dressed =
                kron2(random_su2(rng), random_su2(rng)) * base *
                kron2(random_su2(rng), random_su2(rng));
            CHECK((weyl_coordinates(dressed) - ref).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("global phases never move the coordinates") {
    const MatrixXcd cnot = standard_target("cnot", 2);
    for (double phi : {0.3, 1.7, 3.0, 4.6}) {
        const Vector3d c = weyl_coordinates(std::polar(1.0, phi) * cnot);
        CHECK((c - Vector3d(half_pi, 0, 0)).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("canonical gates reproduce their own coordinates") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        // strict interior ordering keeps the fold unambiguous
        double a = 0.1 + 0.8 * u(rng), b = 0.1 + 0.8 * u(rng), c = 0.1 + 0.8 * u(rng);
        Vector3d v;
        v << a, b, c;
        std::sort(v.data(), v.data() + 3, std::greater<double>());
        v *= half_pi / (v[0] + 1.0);  // keep inside the chamber
        if (v[0] - v[1] < 1e-3 || v[1] - v[2] < 1e-3 || v[2] < 1e-3) continue;

        const MatrixXcd g = canonical_gate(v);
        CHECK((g.adjoint() * g - MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <
              1e-12);
        CHECK((weyl_coordinates(g) - v).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("conjugate gates share coordinates") {
    const Vector3d c = weyl_coordinates(canonical_gate({1.1, 0.6, 0.3}));
    const Vector3d cc = weyl_coordinates(canonical_gate({1.1, 0.6, 0.3}).conjugate());
    CHECK((c - cc).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("coordinate extraction rejects bad input") {
    CHECK_THROWS_AS(weyl_coordinates(MatrixXcd::Identity(3, 3)), ValidationError);
    MatrixXcd not_unitary = MatrixXcd::Identity(4, 4);
    not_unitary(0, 0) = 2.0;
    CHECK_THROWS_AS(weyl_coordinates(not_unitary), ValidationError);
}
