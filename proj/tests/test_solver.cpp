#include <chrono>
#include <cmath>
#include <random>

#include "biotsim/manufactured.hpp"
#include "biotsim/sparse.hpp"
#include "doctest.h"
#include "support/dense_oracle.hpp"

using namespace biotsim;

TEST_CASE("triplet assembly sums duplicates") {
  const SparseMatrix m = SparseMatrix::from_triplets(1, 1, {{0, 0, 1.0}, {0, 0, 2.0}});
  CHECK(m.nnz() == 1);
  CHECK(m.coeff(0, 0) == 3.0);
}

TEST_CASE("empty triplet stream gives an all-zero matrix") {
  const SparseMatrix m = SparseMatrix::from_triplets(3, 3, {});
  CHECK(m.nnz() == 0);
  CHECK(m.coeff(1, 2) == 0.0);
}

TEST_CASE("assembly is independent of the triplet stream order") {
  std::vector<Triplet> triplets;
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> idx(0, 19);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int k = 0; k < 400; ++k) triplets.push_back({idx(rng), idx(rng), val(rng)});

  const SparseMatrix reference = SparseMatrix::from_triplets(20, 20, triplets);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(triplets.begin(), triplets.end(), rng);
    const SparseMatrix shuffled = SparseMatrix::from_triplets(20, 20, triplets);
    CHECK(shuffled.equal_values(reference));
  }
}

TEST_CASE("out-of-range triplets are rejected") {
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, 2, 1.0}}), std::out_of_range);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{-1, 0, 1.0}}), std::out_of_range);
}

TEST_CASE("factorization of the identity returns the rhs") {
  const SparseMatrix eye = SparseMatrix::from_triplets(3, 3, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}});
  const Factorization f(eye);
  const std::vector<double> rhs = {1.5, -2.0, 7.0};
  CHECK(f.solve(rhs) == rhs);
}

TEST_CASE("hand-solved 2x2 system") {
  const SparseMatrix a =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
  const Factorization f(a);
  const std::vector<double> x = f.solve(std::vector<double>{3.0, 3.0});
  CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("singular matrices are reported") {
  const SparseMatrix s = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}});
  CHECK_THROWS_AS(Factorization{s}, SolverError);
  const SparseMatrix rect = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}});
  CHECK_THROWS_AS(Factorization{rect}, SolverError);
}

TEST_CASE("solve rejects mismatched rhs lengths and is deterministic") {
  const SparseMatrix a =
      SparseMatrix::from_triplets(2, 2, {{0, 0, 2}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}});
  const Factorization f(a);
  CHECK_THROWS_AS(f.solve(std::vector<double>{1.0}), SolverError);

  const std::vector<double> zeros(2, 0.0);
  CHECK(f.solve(zeros) == zeros);

  const std::vector<double> rhs = {0.3, -0.7};
  const std::vector<double> x1 = f.solve(rhs);
  const std::vector<double> x2 = f.solve(rhs);
  CHECK(x1 == x2);  // bitwise
}

TEST_CASE("random systems match the dense oracle") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int n : {5, 40, 200, 1000}) {
    std::vector<Triplet> triplets;
    oracle::DenseMatrix dense;
    dense.n = n;
    dense.a.assign(static_cast<size_t>(n) * n, 0.0);
    for (int r = 0; r < n; ++r) {
      triplets.push_back({r, r, 4.0});
      dense.at(r, r) += 4.0;
      for (int k = 0; k < 3; ++k) {
        const int c = std::uniform_int_distribution<int>(0, n - 1)(rng);
        const double v = val(rng);
        triplets.push_back({r, c, v});
        dense.at(r, c) += v;
      }
    }
    std::vector<double> rhs(n);
    for (double& v : rhs) v = val(rng);

    const SparseMatrix a = SparseMatrix::from_triplets(n, n, triplets);
    const Factorization f(a);
    const std::vector<double> x = f.solve(rhs);
    const std::vector<double> x_ref = oracle::dense_solve(dense, rhs);

    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
      diff = std::max(diff, std::abs(x[i] - x_ref[i]));
      scale = std::max(scale, std::abs(x_ref[i]));
    }
    CHECK(diff <= 1e-10 * scale);

    // residual check: ||Ax - b|| / ||b|| <= 1e-10
    const std::vector<double> ax = a.multiply(x);
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < n; ++i) {
      rnorm += (ax[i] - rhs[i]) * (ax[i] - rhs[i]);
      bnorm += rhs[i] * rhs[i];
    }
    CHECK(std::sqrt(rnorm) <= 1e-10 * std::sqrt(bnorm));
  }
}

TEST_CASE("elastic block is positive definite after constraint elimination") {
  const Mesh mesh = unit_square_mesh(2);
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const CoupledSystem sys =
      assemble_coupled_system(u_space, scalar_space, mc.material, 1e-5, mc.data());

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(sys.layout.total, 0.0);
    for (int i = 0; i < sys.layout.n_u; ++i) x[i] = val(rng);
    const std::vector<double> ax = sys.matrix.multiply(x);
    double quad = 0.0;
    for (int i = 0; i < sys.layout.n_u; ++i) quad += x[i] * ax[i];
    CHECK(quad > 0.0);
  }
}

TEST_CASE("a factorization outlives many cheap back-solves") {
  // level-2 verification mesh: large enough that the comparison is stable
  Mesh mesh = unit_square_mesh(17);
  mesh = refine_uniform(refine_uniform(mesh));
  const FeSpace u_space(mesh, Family::P2Vector2);
  const FeSpace scalar_space(mesh, Family::P1Scalar);
  const ManufacturedCase mc = ManufacturedCase::make(0.3, 1.0);
  const CoupledSystem sys =
      assemble_coupled_system(u_space, scalar_space, mc.material, 1e-5, mc.data());

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const Factorization fact(sys.matrix);
  const auto t1 = clock::now();

  std::vector<double> rhs(sys.layout.total, 1.0);
  double checksum = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x = fact.solve(rhs);
    checksum += x[0];
  }
  const auto t2 = clock::now();
  CHECK(checksum == checksum);  // keep the loop alive
  CHECK(std::chrono::duration<double>(t2 - t1).count() <
        std::chrono::duration<double>(t1 - t0).count());
}
