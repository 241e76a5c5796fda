#include <doctest.h>

#include "fermijump/linalg.hpp"
#include "test_util.hpp"

using namespace fermijump;
using testutil::random_matrix;
using testutil::taylor_expm;

namespace {

struct CapGuard {
    std::size_t saved = matrix_entry_cap();
    ~CapGuard() { set_matrix_entry_cap(saved); }
};

} // namespace

TEST_CASE("kron identity and scalar cases") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK(frob_dist(kron(i2, i2), Matrix::Identity(4, 4)) == 0.0);

    Matrix a(2, 2);
    a << 0, 1, 0, 0;
    Matrix scalar(1, 1);
    scalar << 2.0;
    Matrix expected(2, 2);
    expected << 0, 2, 0, 0;
    CHECK(frob_dist(kron(a, scalar), expected) == 0.0);
}

TEST_CASE("kron mixed-product identity against direct multiplication") {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix a = random_matrix(2, 2, rng);
        const Matrix b = random_matrix(2, 2, rng);
        const Matrix c = random_matrix(2, 2, rng);
        const Matrix d = random_matrix(2, 2, rng);
        CHECK(frob_dist(kron(a, b) * kron(c, d), kron(Matrix(a * c), Matrix(b * d))) < 1e-12);
    }
}

TEST_CASE("kron is associative") {
    std::mt19937_64 rng(102);

    // Entries are pure products of the inputs, so with exactly representable
    // integer entries both association orders agree bit for bit.
    std::uniform_int_distribution<int> digit(-3, 3);
    auto integer_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
        Matrix m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < cols; ++j) {
                m(i, j) = Complex{static_cast<double>(digit(rng)),
                                  static_cast<double>(digit(rng))};
            }
        }
        return m;
    };
    const Matrix ai = integer_matrix(2, 2);
    const Matrix bi = integer_matrix(2, 3);
    const Matrix ci = integer_matrix(3, 2);
    CHECK(frob_dist(kron(kron(ai, bi), ci), kron(ai, kron(bi, ci))) == 0.0);

    // General complex entries agree up to a rounding in the scalar triple
    // product.
    const Matrix a = random_matrix(2, 2, rng);
    const Matrix b = random_matrix(2, 3, rng);
    const Matrix c = random_matrix(3, 2, rng);
    CHECK(frob_dist(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
}

TEST_CASE("kron honors the entry cap") {
    CapGuard guard;
    set_matrix_entry_cap(8);
    const Matrix i4 = Matrix::Identity(4, 4);
    CHECK_THROWS_AS((void)kron(i4, i4), SizeLimitError);
}

TEST_CASE("expm trivial cases") {
    CHECK(frob_dist(expm(Matrix::Zero(3, 3)), Matrix::Identity(3, 3)) == 0.0);

    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = Complex{0.0, M_PI};
    Matrix expected = Matrix::Identity(2, 2);
    expected(0, 0) = -1.0;
    CHECK(frob_dist(expm(a), expected) < 1e-15);
}

TEST_CASE("expm matches the truncated Taylor oracle for small norms") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 8; ++trial) {
        Matrix a = random_matrix(4, 4, rng);
        a *= 0.9 / a.norm();
        CHECK(frob_dist(expm(a), taylor_expm(a)) < 1e-12);
    }
}

TEST_CASE("expm inverse identity for moderate norms") {
    std::mt19937_64 rng(104);
    for (int trial = 0; trial < 5; ++trial) {
        Matrix a = random_matrix(5, 5, rng);
        a *= 10.0 / a.norm();
        CHECK(frob_dist(expm(a) * expm(Matrix(-a)), Matrix::Identity(5, 5)) < 1e-10);
    }
}

TEST_CASE("expm semigroup property in the time argument") {
    std::mt19937_64 rng(105);
    std::uniform_real_distribution<double> uni(0.0, 2.0);
    const Matrix a = random_matrix(4, 4, rng);
    for (int trial = 0; trial < 5; ++trial) {
        const double s = uni(rng);
        const double t = uni(rng);
        CHECK(frob_dist(expm(Matrix((s + t) * a)), expm(Matrix(s * a)) * expm(Matrix(t * a))) <
              1e-10);
    }
}

TEST_CASE("expm of a skew-Hermitian matrix is unitary") {
    std::mt19937_64 rng(106);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix g = random_matrix(6, 6, rng);
        const Matrix skew = 0.5 * (g - g.adjoint());
        const Matrix u = expm(skew);
        CHECK(frob_dist(u.adjoint() * u, Matrix::Identity(6, 6)) < 1e-10);
    }
}

TEST_CASE("expm rejects non-square input") {
    CHECK_THROWS_AS((void)expm(Matrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("frob_dist basics") {
    std::mt19937_64 rng(107);
    const Matrix a = random_matrix(3, 3, rng);
    const Matrix b = random_matrix(3, 3, rng);
    CHECK(frob_dist(a, a) == 0.0);
    CHECK(frob_dist(Matrix::Identity(2, 2), Matrix::Zero(2, 2)) == doctest::Approx(M_SQRT2));
    CHECK(frob_dist(a, b) == frob_dist(b, a));
    CHECK_THROWS_AS((void)frob_dist(a, Matrix::Zero(2, 2)), ShapeError);
}

TEST_CASE("finiteness guard") {
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = Complex{std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS(require_finite(bad, "test"), NumericalFailure);
}
