#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace biotsim {

// Raised for singular systems and dimension mismatches.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

// Compressed-row sparse matrix. Within each row, column indices are
// strictly increasing and duplicates are summed at construction in a
// canonical order, so the stored matrix is bitwise independent of the
// triplet stream order. Immutable after construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols) : n_rows_(rows), n_cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);

  int rows() const { return n_rows_; }
  int cols() const { return n_cols_; }
  long nnz() const { return static_cast<long>(cols_.size()); }

  std::span<const int> row_cols(int r) const {
    return {cols_.data() + row_ptr_[r], static_cast<size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }
  std::span<const double> row_values(int r) const {
    return {values_.data() + row_ptr_[r], static_cast<size_t>(row_ptr_[r + 1] - row_ptr_[r])};
  }

  double coeff(int r, int c) const;  // 0 when the entry is not stored
  std::vector<double> multiply(std::span<const double> x) const;
  SparseMatrix transposed() const;
  double max_abs() const;
  bool equal_values(const SparseMatrix& other) const;  // same pattern and bitwise values

  // Symmetric elimination of constrained DOFs: constrained rows/columns
  // are dropped and a unit diagonal is placed on each constrained row.
  // (The right-hand side lifting is the caller's job.)
  SparseMatrix eliminate_dirichlet(std::span<const unsigned char> constrained) const;

  bool symmetric_flag = false;  // advisory

 private:
  int n_rows_ = 0;
  int n_cols_ = 0;
  std::vector<long> row_ptr_;
  std::vector<int> cols_;
  std::vector<double> values_;

  friend class Factorization;
};

// Sparse LU factorization of a square matrix with fill-reducing ordering,
// bound to the matrix snapshot it was built from. Factor once, then
// back-solve any number of right-hand sides.
class Factorization {
 public:
  explicit Factorization(const SparseMatrix& A);
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;

  std::vector<double> solve(std::span<const double> rhs) const;
  int dimension() const { return dimension_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int dimension_ = 0;
};

}  // namespace biotsim
