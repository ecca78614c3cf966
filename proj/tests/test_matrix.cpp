/*
 Copyright 2026 The dwellcert Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dwellcert/matrix.hpp"
#include "dwellcert/reference_example.hpp"
#include "oracles.hpp"

using namespace dwellcert;

namespace {

const SquareMatrix kA1{{0.02, 0.93}, {-0.53, -0.92}};
const SquareMatrix kA2{{0.04, 0.09}, {0.08, -0.11}};

void expect_matrix_near(const SquareMatrix& a, const SquareMatrix& b, double tol) {
    ASSERT_EQ(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            EXPECT_NEAR(a(i, j), b(i, j), tol) << "entry (" << i << ", " << j << ")";
        }
    }
}

} // namespace

TEST(SquareMatrix, RejectsBadConstruction) {
    EXPECT_THROW(SquareMatrix(0), Error);
    EXPECT_THROW(SquareMatrix(2, {1.0, 2.0, 3.0}), Error);
    EXPECT_THROW(SquareMatrix(1, {std::nan("")}), Error);
    EXPECT_THROW(SquareMatrix(1, {INFINITY}), Error);
    EXPECT_THROW((SquareMatrix{{1.0, 2.0}, {3.0}}), Error);
}

TEST(MatMul, IdentityTimesIdentity) {
    EXPECT_EQ(mat_mul(SquareMatrix::identity(2), SquareMatrix::identity(2)), SquareMatrix::identity(2));
}

TEST(MatMul, BenchmarkPairByHand) {
    // 0.02*0.04 + 0.93*0.08 = 0.0752, 0.02*0.09 - 0.93*0.11 = -0.1005,
    // -0.53*0.04 - 0.92*0.08 = -0.0948, -0.53*0.09 + 0.92*0.11 = 0.0535
    expect_matrix_near(mat_mul(kA1, kA2), SquareMatrix{{0.0752, -0.1005}, {-0.0948, 0.0535}}, 1e-15);
}

TEST(MatMul, ZeroAnnihilates) {
    EXPECT_EQ(mat_mul(kA1, SquareMatrix(2)), SquareMatrix(2));
}

TEST(MatMul, DimensionMismatch) {
    try {
        (void)mat_mul(kA1, SquareMatrix::identity(3));
        FAIL() << "expected dim-mismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "dim-mismatch");
    }
}

TEST(MatPow, ZeroPowerIsIdentity) {
    EXPECT_EQ(mat_pow(kA1, 0), SquareMatrix::identity(2));
}

TEST(MatPow, BenchmarkNorms) {
    EXPECT_NEAR(norm2(mat_pow(kA1, 3)), 0.5404, 1e-3);
    EXPECT_NEAR(norm2(mat_pow(kA2, 2)), 0.0220, 1e-3);
    EXPECT_NEAR(norm2(mat_pow(kA1, 2)), 1.1204, 1e-3);
}

TEST(MatPow, LeftFoldMatchesRepeatedProduct) {
    const SquareMatrix cube = mat_mul(mat_mul(kA1, kA1), kA1);
    EXPECT_EQ(mat_pow(kA1, 3), cube);
}

TEST(SpectralNorm, TrivialCases) {
    EXPECT_EQ(spectral_norm(SquareMatrix(2)).value, 0.0);
    EXPECT_EQ(spectral_norm(SquareMatrix(4)).value, 0.0);
    EXPECT_DOUBLE_EQ(spectral_norm(SquareMatrix{{3.0, 0.0}, {0.0, 4.0}}).value, 4.0);
    EXPECT_NEAR(spectral_norm(SquareMatrix{{-7.0}}).value, 7.0, 0.0);
}

TEST(SpectralNorm, BenchmarkMatrix) {
    const NormValue n = spectral_norm(kA1);
    EXPECT_NEAR(n.value, 1.3683, 1e-3);
    EXPECT_EQ(n.method, NormMethod::exact2x2);
    EXPECT_LE(n.relative_error_bound, 1e-10);
}

TEST(SpectralNorm, PowerIterationOnDiagonalAndOrthogonal) {
    const SquareMatrix diag{{1.0, 0.0, 0.0}, {0.0, -5.0, 0.0}, {0.0, 0.0, 2.0}};
    const NormValue n = spectral_norm(diag);
    EXPECT_EQ(n.method, NormMethod::power_iteration);
    EXPECT_NEAR(n.value, 5.0, 1e-12);

    // every singular value is 1; all-ones start is an eigenvector of a^T a = I
    const double c = std::cos(0.3);
    const double s = std::sin(0.3);
    const SquareMatrix rot{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}};
    EXPECT_NEAR(spectral_norm(rot).value, 1.0, 1e-12);
}

TEST(SpectralNorm, StartVectorOrthogonalToTopDirection) {
    // a^T a = diag(9, 1, 1) after rotation so that the all-ones vector has no component
    // along the dominant direction (1, -1, 0)/sqrt(2)
    const double r = 1.0 / std::sqrt(2.0);
    const double t = 1.0 / std::sqrt(6.0);
    const double u = 1.0 / std::sqrt(3.0);
    // columns: q1 = (r, -r, 0), q2 = (t, t, -2t), q3 = (u, u, u); a = 3 q1 q1^T + q2 q2^T + q3 q3^T
    SquareMatrix a(3);
    const double q[3][3] = {{r, -r, 0.0}, {t, t, -2.0 * t}, {u, u, u}};
    const double w[3] = {3.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
                a(i, j) += w[k] * q[k][i] * q[k][j];
            }
        }
    }
    EXPECT_NEAR(spectral_norm(a).value, 3.0, 1e-10);
}

TEST(SpectralNorm, AgreesWithJacobiOracle) {
    std::mt19937_64 rng(20261016);
    for (std::size_t d = 2; d <= 6; ++d) {
        for (int trial = 0; trial < 50; ++trial) {
            const SquareMatrix a = oracle::random_matrix(rng, d, 2.0);
            const NormValue got = spectral_norm(a);
            const double want = oracle::spectral_norm(a);
            EXPECT_NEAR(got.value, want, 1e-9 * want) << "d = " << d << ", trial " << trial;
            EXPECT_LE(got.relative_error_bound, 1e-10);
        }
    }
}

TEST(SpectralNorm, SubMultiplicativeAndSubAdditive) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
        const SquareMatrix a = oracle::random_matrix(rng, d);
        const SquareMatrix b = oracle::random_matrix(rng, d);
        EXPECT_LE(norm2(mat_mul(a, b)), norm2(a) * norm2(b) * (1.0 + 1e-10));
        EXPECT_LE(norm2(a + b), norm2(a) + norm2(b) + 1e-10);
    }
}

TEST(Commutator, SelfCommutatorVanishes) {
    EXPECT_EQ(max_abs_entry(commutator(kA1, kA1, 2, 2)), 0.0);
    EXPECT_EQ(max_abs_entry(commutator(kA2, kA2, 1, 1)), 0.0);
    // A^2 A^3 and A^3 A^2 round differently
    EXPECT_LE(max_abs_entry(commutator(kA1, kA1, 2, 3)), 1e-15 * norm2(mat_pow(kA1, 5)));
}

TEST(Commutator, BenchmarkNorms) {
    EXPECT_NEAR(norm2(commutator(kA1, kA2, 1, 1)), 0.2108, 1e-3);
    EXPECT_NEAR(norm2(commutator(kA1, kA2, 2, 2)), 0.0133, 1e-3);
}

TEST(Commutator, Antisymmetry) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t d = 2 + static_cast<std::size_t>(trial % 3);
        const SquareMatrix a = oracle::random_matrix(rng, d);
        const SquareMatrix b = oracle::random_matrix(rng, d);
        const unsigned p = 1 + static_cast<unsigned>(trial % 3);
        const unsigned q = 1 + static_cast<unsigned>((trial / 3) % 3);
        const SquareMatrix lhs = commutator(a, b, p, q);
        const SquareMatrix rhs = commutator(b, a, q, p);
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                EXPECT_NEAR(lhs(i, j), -rhs(i, j), 1e-15);
            }
        }
    }
}

TEST(Commutator, DimensionMismatch) {
    EXPECT_THROW((void)commutator(kA1, SquareMatrix::identity(3), 1, 1), Error);
}
