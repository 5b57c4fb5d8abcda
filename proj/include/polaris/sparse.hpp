#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polaris {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Square sparse matrix assembled from triplets (duplicates are summed)
/// and stored in CSR form.
class SparseOperator {
 public:
  SparseOperator() = default;
  SparseOperator(std::size_t dim, std::vector<Triplet> triplets, bool symmetric);

  std::size_t dimension() const { return dim_; }
  bool symmetric() const { return symmetric_; }

  /// Compressed entries in row-major order.
  std::vector<Triplet> entries() const;
  double coeff(std::size_t row, std::size_t col) const;
  std::vector<double> diagonal() const;

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// Sum of each row.
  std::vector<double> row_sums() const;

 private:
  std::size_t dim_ = 0;
  bool symmetric_ = false;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> cols_;
  std::vector<double> vals_;
};

struct LinearSolveReport {
  int iterations = 0;
  double residual_norm = 0.0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, LinearSolveReport report)
      : std::runtime_error(what), report_(report) {}
  const LinearSolveReport& report() const { return report_; }

 private:
  LinearSolveReport report_;
};

struct SolveOptions {
  double tolerance = 1e-12;  // relative to ||b||, absolute when b = 0
  int max_iterations = 5000;
};

/// Jacobi-preconditioned conjugate gradients. x holds the initial guess on
/// entry and the solution on exit.
LinearSolveReport solve_cg(const SparseOperator& A, std::span<const double> b, std::span<double> x,
                           const SolveOptions& opts = {});

/// Jacobi-preconditioned BiCGSTAB for nonsymmetric systems, restarted on
/// breakdown.
LinearSolveReport solve_bicgstab(const SparseOperator& A, std::span<const double> b,
                                 std::span<double> x, const SolveOptions& opts = {});

/// Dispatches on the symmetry flag and throws SolverError on failure.
std::vector<double> solve_or_throw(const SparseOperator& A, std::span<const double> b,
                                   std::vector<double> guess, const SolveOptions& opts,
                                   const char* what);

double norm2(std::span<const double> x);

}  // namespace polaris
