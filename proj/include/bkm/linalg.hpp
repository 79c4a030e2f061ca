#pragma once

// Dense linear algebra for the collocation systems: row-major matrix, LU
// factorization with partial pivoting, iterative refinement with a
// compensated residual, transpose solves, and a Hager-style 1-norm
// condition estimate. Problem sizes here are a few hundred unknowns, so a
// plain dense direct method is the right tool; the condition estimate is
// surfaced because these matrices are known to be severely ill-conditioned.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bkm/detail/double_double.hpp"

namespace bkm {

class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::fabs(v));
        return m;
    }

    double one_norm() const {  // max column sum
        double m = 0.0;
        for (std::size_t j = 0; j < cols_; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows_; ++i) s += std::fabs((*this)(i, j));
            m = std::max(m, s);
        }
        return m;
    }

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct SingularMatrixError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// LU factorization with partial pivoting. Keeps the original matrix so
// solves can run one step of iterative refinement with a double-double
// residual, which keeps ||A x - b|| at the scale of ||b|| even when the
// matrix is badly conditioned.
class LuDecomposition {
  public:
    explicit LuDecomposition(Matrix a) : a_(std::move(a)), lu_(a_), piv_(a_.rows()) {
        if (a_.rows() != a_.cols()) throw std::invalid_argument("LuDecomposition: matrix must be square");
        const std::size_t n = lu_.rows();
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (std::fabs(lu_(i, k)) > std::fabs(lu_(p, k))) p = i;
            if (std::fabs(lu_(p, k)) <= 1e-300)
                throw SingularMatrixError("LuDecomposition: zero pivot at column " + std::to_string(k));
            piv_[k] = p;
            if (p != k)
                for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            for (std::size_t i = k + 1; i < n; ++i) {
                lu_(i, k) /= lu_(k, k);
                const double l = lu_(i, k);
                for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= l * lu_(k, j);
            }
        }
    }

    std::size_t size() const { return lu_.rows(); }

    // Solve A x = b with iterative refinement. Refinement converges only
    // while cond(A) stays clear of 1/eps; collocation matrices routinely
    // blow past that, so when the corrections stop shrinking the solve is
    // redone entirely in double-double arithmetic, whose condition ceiling
    // (~1e32) is far beyond anything these systems produce.
    std::vector<double> solve(const std::vector<double>& b) const {
        check_length(b);
        std::vector<double> x = solve_raw(b);
        std::vector<double> r(x.size()), dx;
        double dnorm = 0.0, xnorm = 0.0;
        for (int iter = 0; iter < 3; ++iter) {
            residual(b, x, r);
            dx = solve_raw(r);
            dnorm = xnorm = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] += dx[i];
                dnorm = std::max(dnorm, std::fabs(dx[i]));
                xnorm = std::max(xnorm, std::fabs(x[i]));
            }
            if (dnorm <= 1e-15 * xnorm) break;
        }
        if (dnorm > 1e-12 * xnorm) return solve_extended(b);
        return x;
    }

    // Solve A x = b by LU factorization carried out in double-double
    // arithmetic. Used as the fallback when double-precision refinement
    // cannot resolve the system.
    std::vector<double> solve_extended(const std::vector<double>& b) const {
        check_length(b);
        const std::size_t n = a_.rows();
        if (!dd_ready_) {
            dd_lu_.assign(n * n, detail::dd{});
            dd_piv_.assign(n, 0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    dd_lu_[i * n + j] = detail::dd(a_(i, j));
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t p = k;
                double best = std::fabs(dd_lu_[k * n + k].hi);
                for (std::size_t i = k + 1; i < n; ++i) {
                    double cand = std::fabs(dd_lu_[i * n + k].hi);
                    if (cand > best) { best = cand; p = i; }
                }
                if (best <= 1e-300)
                    throw SingularMatrixError(
                        "matrix is singular to working precision (extended "
                        "factorization, pivot column " + std::to_string(k) + ")");
                dd_piv_[k] = p;
                if (p != k)
                    for (std::size_t j = 0; j < n; ++j)
                        std::swap(dd_lu_[k * n + j], dd_lu_[p * n + j]);
                for (std::size_t i = k + 1; i < n; ++i) {
                    detail::dd m = detail::div(dd_lu_[i * n + k], dd_lu_[k * n + k]);
                    dd_lu_[i * n + k] = m;
                    for (std::size_t j = k + 1; j < n; ++j)
                        dd_lu_[i * n + j] = detail::sub(
                            dd_lu_[i * n + j], detail::mul(m, dd_lu_[k * n + j]));
                }
            }
            dd_ready_ = true;
        }
        std::vector<detail::dd> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = detail::dd(b[i]);
        for (std::size_t k = 0; k < n; ++k)
            if (dd_piv_[k] != k) std::swap(x[k], x[dd_piv_[k]]);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = k + 1; i < n; ++i)
                x[i] = detail::sub(x[i], detail::mul(dd_lu_[i * n + k], x[k]));
        for (std::size_t k = n; k-- > 0;) {
            for (std::size_t j = k + 1; j < n; ++j)
                x[k] = detail::sub(x[k], detail::mul(dd_lu_[k * n + j], x[j]));
            x[k] = detail::div(x[k], dd_lu_[k * n + k]);
        }
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = x[i].hi + x[i].lo;
        return out;
    }

    // Solve A^T x = b (no refinement; used by the condition estimator).
    std::vector<double> solve_transposed(const std::vector<double>& b) const {
        check_length(b);
        const std::size_t n = size();
        std::vector<double> x = b;
        // A^T = U^T L^T P, so solve U^T y = b, then L^T u = y, then x = P^{-1} u.
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < i; ++k) x[i] -= lu_(k, i) * x[k];
            x[i] /= lu_(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;)
            for (std::size_t k = ii + 1; k < n; ++k) x[ii] -= lu_(k, ii) * x[k];
        for (std::size_t kk = n; kk-- > 0;)
            if (piv_[kk] != kk) std::swap(x[kk], x[piv_[kk]]);
        return x;
    }

    // 1-norm condition estimate: ||A||_1 times a Hager lower-bound estimate
    // of ||A^{-1}||_1.
    double condition_estimate() const {
        const std::size_t n = size();
        std::vector<double> x(n, 1.0 / static_cast<double>(n));
        double est = 0.0;
        std::size_t last_j = n;  // sentinel
        for (int iter = 0; iter < 5; ++iter) {
            std::vector<double> y = solve_raw(x);
            est = 0.0;
            for (double v : y) est += std::fabs(v);
            std::vector<double> xi(n);
            for (std::size_t i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
            std::vector<double> zvec = solve_transposed(xi);
            std::size_t j = 0;
            double zmax = 0.0, zx = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                zx += zvec[i] * x[i];
                if (std::fabs(zvec[i]) > zmax) {
                    zmax = std::fabs(zvec[i]);
                    j = i;
                }
            }
            if (zmax <= zx || j == last_j) break;
            last_j = j;
            std::fill(x.begin(), x.end(), 0.0);
            x[j] = 1.0;
        }
        return a_.one_norm() * est;
    }

    const Matrix& original() const { return a_; }

  private:
    void check_length(const std::vector<double>& b) const {
        if (b.size() != size()) throw std::invalid_argument("solve: right-hand side length mismatch");
    }

    std::vector<double> solve_raw(const std::vector<double>& b) const {
        const std::size_t n = size();
        std::vector<double> x = b;
        // Row interchanges must all land before substitution: the stored L
        // is the end state after every later swap has moved rows around.
        for (std::size_t k = 0; k < n; ++k)
            if (piv_[k] != k) std::swap(x[k], x[piv_[k]]);
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
        for (std::size_t ii = n; ii-- > 0;) {
            for (std::size_t j = ii + 1; j < n; ++j) x[ii] -= lu_(ii, j) * x[j];
            x[ii] /= lu_(ii, ii);
        }
        return x;
    }

    // r = b - A x, accumulated in double-double so refinement sees the true
    // residual rather than rounding noise.
    void residual(const std::vector<double>& b, const std::vector<double>& x,
                  std::vector<double>& r) const {
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            detail::dd s(b[i]);
            for (std::size_t j = 0; j < n; ++j)
                s = detail::add(s, detail::neg(detail::two_prod(a_(i, j), x[j])));
            r[i] = detail::to_double(s);
        }
    }

    Matrix a_;
    Matrix lu_;
    std::vector<std::size_t> piv_;
    mutable std::vector<detail::dd> dd_lu_;
    mutable std::vector<std::size_t> dd_piv_;
    mutable bool dd_ready_ = false;
};

}  // namespace bkm
