#pragma once

// Sparse CSR storage and the two Krylov solvers used by the pressure and
// transport systems: Jacobi-preconditioned CG (with an optional constant
// nullspace projection for the singular Neumann operator) and BiCGStab for
// the nonsymmetric upwinded transport matrix. Iterations are deterministic.

#include <vector>

#include "mds/common.hpp"

namespace mds {

struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;  // size n+1
    std::vector<int> col;
    std::vector<double> val;
};

// Row-wise accumulator; duplicate (r,c) insertions are summed.
class MatrixBuilder {
  public:
    explicit MatrixBuilder(int n) : n_(n), rows_(n) {}

    void add(int r, int c, double v) {
        auto& row = rows_[r];
        for (auto& [cc, vv] : row) {
            if (cc == c) {
                vv += v;
                return;
            }
        }
        row.emplace_back(c, v);
    }

    SparseMatrix build() const;

  private:
    int n_;
    std::vector<std::vector<std::pair<int, double>>> rows_;
};

std::vector<double> spmv(const SparseMatrix& a, const std::vector<double>& x);

struct SolveResult {
    std::vector<double> x;
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

// Jacobi-preconditioned CG. With project_nullspace the right-hand side is
// first projected to exact zero mean and iterates are kept mean-zero, so a
// compatible singular Neumann system yields the zero-mean solution.
SolveResult solve_cg(const SparseMatrix& a, const std::vector<double>& b,
                     double tol, int maxit, bool project_nullspace = false,
                     const std::vector<double>* x0 = nullptr);

// Jacobi-preconditioned BiCGStab for general nonsingular systems.
SolveResult solve_bicgstab(const SparseMatrix& a, const std::vector<double>& b,
                           double tol, int maxit,
                           const std::vector<double>* x0 = nullptr);

double norm2(const std::vector<double>& v);

}  // namespace mds
