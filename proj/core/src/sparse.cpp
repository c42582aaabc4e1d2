#include "biotsim/sparse.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace biotsim {

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::out_of_range("SparseMatrix::from_triplets: index (" + std::to_string(t.row) +
                              "," + std::to_string(t.col) + ") outside " + std::to_string(rows) +
                              "x" + std::to_string(cols));

  // Canonical order: (row, col, value bit pattern). Sorting by the bit
  // pattern fixes the summation order of duplicates, so any permutation
  // of the input stream yields a bitwise-identical matrix.
  auto value_bits = [](double v) {
    unsigned long long bits;
    std::memcpy(&bits, &v, sizeof(bits));
    return bits;
  };
  std::sort(triplets.begin(), triplets.end(), [&](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return value_bits(a.value) < value_bits(b.value);
  });

  SparseMatrix m(rows, cols);
  m.cols_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < triplets.size() && triplets[i].row == r) {
      const int c = triplets[i].col;
      double sum = 0.0;
      while (i < triplets.size() && triplets[i].row == r && triplets[i].col == c)
        sum += triplets[i++].value;
      m.cols_.push_back(c);
      m.values_.push_back(sum);
    }
    m.row_ptr_[r + 1] = static_cast<long>(m.cols_.size());
  }
  return m;
}

double SparseMatrix::coeff(int r, int c) const {
  const auto cols = row_cols(r);
  const auto it = std::lower_bound(cols.begin(), cols.end(), c);
  if (it == cols.end() || *it != c) return 0.0;
  return values_[row_ptr_[r] + (it - cols.begin())];
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_cols_)
    throw SolverError("multiply: vector length " + std::to_string(x.size()) +
                      " does not match " + std::to_string(n_cols_) + " columns");
  std::vector<double> y(n_rows_, 0.0);
  for (int r = 0; r < n_rows_; ++r) {
    double sum = 0.0;
    for (long k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) sum += values_[k] * x[cols_[k]];
    y[r] = sum;
  }
  return y;
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> triplets;
  triplets.reserve(cols_.size());
  for (int r = 0; r < n_rows_; ++r)
    for (long k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      triplets.push_back({cols_[k], r, values_[k]});
  return from_triplets(n_cols_, n_rows_, std::move(triplets));
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool SparseMatrix::equal_values(const SparseMatrix& other) const {
  return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ && row_ptr_ == other.row_ptr_ &&
         cols_ == other.cols_ &&
         std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0;
}

SparseMatrix SparseMatrix::eliminate_dirichlet(std::span<const unsigned char> constrained) const {
  if (static_cast<int>(constrained.size()) != n_rows_ || n_rows_ != n_cols_)
    throw SolverError("eliminate_dirichlet: constraint mask must match a square matrix");
  SparseMatrix m(n_rows_, n_cols_);
  m.cols_.reserve(cols_.size());
  m.values_.reserve(values_.size());
  for (int r = 0; r < n_rows_; ++r) {
    if (constrained[r]) {
      m.cols_.push_back(r);
      m.values_.push_back(1.0);
    } else {
      for (long k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        if (constrained[cols_[k]]) continue;
        m.cols_.push_back(cols_[k]);
        m.values_.push_back(values_[k]);
      }
    }
    m.row_ptr_[r + 1] = static_cast<long>(m.cols_.size());
  }
  return m;
}

struct Factorization::Impl {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

Factorization::Factorization(const SparseMatrix& A) : impl_(new Impl), dimension_(A.rows()) {
  if (A.rows() != A.cols())
    throw SolverError("factorize: matrix is " + std::to_string(A.rows()) + "x" +
                      std::to_string(A.cols()) + ", expected square");

  Eigen::SparseMatrix<double> ea(A.rows(), A.cols());
  {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(A.nnz());
    for (int r = 0; r < A.rows(); ++r) {
      const auto cols = A.row_cols(r);
      const auto vals = A.row_values(r);
      for (size_t k = 0; k < cols.size(); ++k) triplets.emplace_back(r, cols[k], vals[k]);
    }
    ea.setFromTriplets(triplets.begin(), triplets.end());
  }
  ea.makeCompressed();

  impl_->lu.analyzePattern(ea);
  impl_->lu.factorize(ea);
  if (impl_->lu.info() != Eigen::Success)
    throw SolverError("factorize: singular matrix (" + impl_->lu.lastErrorMessage() +
                      "); check Dirichlet constraints and inf-sup stability");
}

Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;

std::vector<double> Factorization::solve(std::span<const double> rhs) const {
  if (static_cast<int>(rhs.size()) != dimension_)
    throw SolverError("solve: rhs length " + std::to_string(rhs.size()) + " does not match " +
                      std::to_string(dimension_));
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), rhs.size());
  const Eigen::VectorXd x = impl_->lu.solve(b);
  return {x.data(), x.data() + x.size()};
}

}  // namespace biotsim
