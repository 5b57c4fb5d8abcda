#include "polaris/sparse.hpp"

#include <algorithm>
#include <cmath>

#include "polaris/errors.hpp"

namespace polaris {

SparseOperator::SparseOperator(std::size_t dim, std::vector<Triplet> triplets, bool symmetric)
    : dim_(dim), symmetric_(symmetric) {
  for (const auto& t : triplets)
    if (t.row >= dim || t.col >= dim) throw ContractError("sparse operator: triplet out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(dim + 1, 0);
  cols_.clear();
  vals_.clear();
  std::size_t i = 0;
  for (std::size_t row = 0; row < dim; ++row) {
    row_ptr_[row] = cols_.size();
    while (i < triplets.size() && triplets[i].row == row) {
      if (cols_.size() > row_ptr_[row] && cols_.back() == triplets[i].col)
        vals_.back() += triplets[i].value;
      else {
        cols_.push_back(triplets[i].col);
        vals_.push_back(triplets[i].value);
      }
      ++i;
    }
  }
  row_ptr_[dim] = cols_.size();
}

std::vector<Triplet> SparseOperator::entries() const {
  std::vector<Triplet> out;
  out.reserve(vals_.size());
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) out.push_back({r, cols_[p], vals_[p]});
  return out;
}

double SparseOperator::coeff(std::size_t row, std::size_t col) const {
  for (std::size_t p = row_ptr_[row]; p < row_ptr_[row + 1]; ++p)
    if (cols_[p] == col) return vals_[p];
  return 0.0;
}

std::vector<double> SparseOperator::diagonal() const {
  std::vector<double> d(dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r) d[r] = coeff(r, r);
  return d;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != dim_ || y.size() != dim_) throw ContractError("sparse operator: size mismatch");
  for (std::size_t r = 0; r < dim_; ++r) {
    double s = 0.0;
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s += vals_[p] * x[cols_[p]];
    y[r] = s;
  }
}

std::vector<double> SparseOperator::apply(std::span<const double> x) const {
  std::vector<double> y(dim_);
  apply(x, y);
  return y;
}

std::vector<double> SparseOperator::row_sums() const {
  std::vector<double> s(dim_, 0.0);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t p = row_ptr_[r]; p < row_ptr_[r + 1]; ++p) s[r] += vals_[p];
  return s;
}

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> inverse_diagonal(const SparseOperator& A) {
  auto d = A.diagonal();
  for (auto& v : d) v = (v != 0.0) ? 1.0 / v : 1.0;
  return d;
}

double residual(const SparseOperator& A, std::span<const double> b, std::span<const double> x,
                std::vector<double>& r) {
  A.apply(x, r);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return norm2(r);
}

void check_sizes(const SparseOperator& A, std::span<const double> b, std::span<double> x) {
  if (b.size() != A.dimension() || x.size() != A.dimension())
    throw ContractError("linear solve: right-hand side or solution length mismatch");
}

}  // namespace

LinearSolveReport solve_cg(const SparseOperator& A, std::span<const double> b, std::span<double> x,
                           const SolveOptions& opts) {
  check_sizes(A, b, x);
  const std::size_t n = A.dimension();
  const double bnorm = norm2(b);
  const double target = bnorm > 0.0 ? opts.tolerance * bnorm : opts.tolerance;
  LinearSolveReport rep;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    return rep;
  }
  const auto dinv = inverse_diagonal(A);
  std::vector<double> r(n), z(n), p(n), q(n);
  rep.residual_norm = residual(A, b, x, r);
  if (rep.residual_norm <= target) {
    rep.converged = true;
    return rep;
  }
  for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
  p = z;
  double rz = dot(r, z);
  // Near the rounding floor the recursive residual can drift; keep the best
  // iterate by true residual and stop once it no longer improves.
  std::vector<double> best(x.begin(), x.end());
  double best_norm = rep.residual_norm;
  int since_best = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    A.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0) || !std::isfinite(pq)) break;
    const double a = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += a * p[i];
      r[i] -= a * q[i];
    }
    rep.iterations = it;
    const double rec = norm2(r);
    if (rec <= target || it % 10 == 0) {
      std::vector<double> tr(n);
      const double true_norm = residual(A, b, x, tr);
      if (true_norm < best_norm) {
        best_norm = true_norm;
        std::copy(x.begin(), x.end(), best.begin());
        since_best = 0;
      } else {
        since_best += 10;
      }
      if (true_norm <= target) break;
      if (rec <= target) r = tr;  // restart the recursion from the true residual
      if (since_best >= std::max<int>(200, 2 * static_cast<int>(n))) break;
    }
    for (std::size_t i = 0; i < n; ++i) z[i] = dinv[i] * r[i];
    const double rz_new = dot(r, z);
    if (!(rz_new > 0.0)) break;
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::vector<double> tr(n);
  const double final_norm = residual(A, b, x, tr);
  if (!(final_norm <= best_norm)) std::copy(best.begin(), best.end(), x.begin());
  rep.residual_norm = std::min(final_norm, best_norm);
  if (!std::isfinite(final_norm)) rep.residual_norm = best_norm;
  rep.converged = rep.residual_norm <= target;
  return rep;
}

LinearSolveReport solve_bicgstab(const SparseOperator& A, std::span<const double> b,
                                 std::span<double> x, const SolveOptions& opts) {
  check_sizes(A, b, x);
  const std::size_t n = A.dimension();
  const double bnorm = norm2(b);
  const double target = bnorm > 0.0 ? opts.tolerance * bnorm : opts.tolerance;
  LinearSolveReport rep;
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), 0.0);
    rep.converged = true;
    return rep;
  }
  const auto dinv = inverse_diagonal(A);
  std::vector<double> r(n), r0(n), p(n), v(n), s(n), t(n), ph(n), sh(n);
  rep.residual_norm = residual(A, b, x, r);
  int it = 0;
  int stagnant_restarts = 0;
  while (rep.residual_norm > target && it < opts.max_iterations) {
    // (re)start
    r0 = r;
    std::fill(p.begin(), p.end(), 0.0);
    std::fill(v.begin(), v.end(), 0.0);
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    const double restart_norm = rep.residual_norm;
    bool breakdown = false;
    while (it < opts.max_iterations) {
      ++it;
      const double rho_new = dot(r0, r);
      if (rho_new == 0.0 || omega == 0.0) {
        breakdown = true;
        break;
      }
      const double beta = (rho_new / rho) * (alpha / omega);
      rho = rho_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
      for (std::size_t i = 0; i < n; ++i) ph[i] = dinv[i] * p[i];
      A.apply(ph, v);
      const double r0v = dot(r0, v);
      if (r0v == 0.0) {
        breakdown = true;
        break;
      }
      alpha = rho / r0v;
      for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
      if (norm2(s) <= target) {
        for (std::size_t i = 0; i < n; ++i) x[i] += alpha * ph[i];
        break;
      }
      for (std::size_t i = 0; i < n; ++i) sh[i] = dinv[i] * s[i];
      A.apply(sh, t);
      const double tt = dot(t, t);
      omega = tt > 0.0 ? dot(t, s) / tt : 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += alpha * ph[i] + omega * sh[i];
        r[i] = s[i] - omega * t[i];
      }
      if (norm2(r) <= target) break;
    }
    rep.iterations = it;
    rep.residual_norm = residual(A, b, x, r);
    if (rep.residual_norm <= target) break;
    if (!breakdown && rep.residual_norm >= restart_norm) {
      if (++stagnant_restarts > 5) break;
    }
  }
  rep.iterations = it;
  rep.converged = rep.residual_norm <= target;
  return rep;
}

std::vector<double> solve_or_throw(const SparseOperator& A, std::span<const double> b,
                                   std::vector<double> guess, const SolveOptions& opts,
                                   const char* what) {
  if (guess.size() != A.dimension()) guess.assign(A.dimension(), 0.0);
  const auto rep = A.symmetric() ? solve_cg(A, b, guess, opts) : solve_bicgstab(A, b, guess, opts);
  bool finite = std::all_of(guess.begin(), guess.end(), [](double v) { return std::isfinite(v); });
  if (!rep.converged || !finite)
    throw SolverError(std::string(what) + ": linear solve did not converge (iterations " +
                          std::to_string(rep.iterations) + ", residual " +
                          std::to_string(rep.residual_norm) + ")",
                      rep);
  return guess;
}

}  // namespace polaris
