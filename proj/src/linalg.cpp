#include "mds/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace mds {

SparseMatrix MatrixBuilder::build() const {
    SparseMatrix m;
    m.n = n_;
    m.row_ptr.assign(n_ + 1, 0);
    for (int r = 0; r < n_; ++r) m.row_ptr[r + 1] = m.row_ptr[r] + static_cast<int>(rows_[r].size());
    m.col.reserve(m.row_ptr[n_]);
    m.val.reserve(m.row_ptr[n_]);
    for (int r = 0; r < n_; ++r) {
        auto row = rows_[r];
        std::sort(row.begin(), row.end());
        for (const auto& [c, v] : row) {
            m.col.push_back(c);
            m.val.push_back(v);
        }
    }
    return m;
}

std::vector<double> spmv(const SparseMatrix& a, const std::vector<double>& x) {
    require(static_cast<int>(x.size()) == a.n, "spmv: dimension mismatch");
    std::vector<double> y(a.n, 0.0);
    for (int r = 0; r < a.n; ++r) {
        double s = 0.0;
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            s += a.val[k] * x[a.col[k]];
        y[r] = s;
    }
    return y;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

namespace {

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<double> jacobi_diag(const SparseMatrix& a) {
    std::vector<double> d(a.n, 1.0);
    for (int r = 0; r < a.n; ++r)
        for (int k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k)
            if (a.col[k] == r && a.val[k] != 0.0) d[r] = a.val[k];
    return d;
}

void remove_mean(std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double& x : v) x -= m;
}

}  // namespace

SolveResult solve_cg(const SparseMatrix& a, const std::vector<double>& b,
                     double tol, int maxit, bool project_nullspace,
                     const std::vector<double>* x0) {
    require(static_cast<int>(b.size()) == a.n, "cg: dimension mismatch");
    SolveResult res;
    std::vector<double> rhs = b;
    if (project_nullspace) remove_mean(rhs);
    double bnorm = norm2(rhs);
    res.x.assign(a.n, 0.0);
    if (x0) res.x = *x0;
    if (project_nullspace) remove_mean(res.x);
    if (bnorm == 0.0) {
        res.x.assign(a.n, 0.0);
        res.converged = true;
        return res;
    }

    std::vector<double> diag = jacobi_diag(a);
    std::vector<double> r = spmv(a, res.x);
    for (int i = 0; i < a.n; ++i) r[i] = rhs[i] - r[i];
    if (project_nullspace) remove_mean(r);
    std::vector<double> z(a.n), p(a.n), ap(a.n);
    for (int i = 0; i < a.n; ++i) z[i] = r[i] / diag[i];
    if (project_nullspace) remove_mean(z);
    p = z;
    double rz = dotv(r, z);

    for (int it = 0; it < maxit; ++it) {
        res.rel_residual = norm2(r) / bnorm;
        if (res.rel_residual <= tol) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        ap = spmv(a, p);
        double pap = dotv(p, ap);
        if (pap == 0.0) break;
        double alpha = rz / pap;
        for (int i = 0; i < a.n; ++i) {
            res.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        if (project_nullspace) {
            remove_mean(res.x);
            remove_mean(r);
        }
        for (int i = 0; i < a.n; ++i) z[i] = r[i] / diag[i];
        if (project_nullspace) remove_mean(z);
        double rz_new = dotv(r, z);
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < a.n; ++i) p[i] = z[i] + beta * p[i];
        res.iterations = it + 1;
    }
    res.rel_residual = norm2(r) / bnorm;
    res.converged = res.rel_residual <= tol;
    return res;
}

SolveResult solve_bicgstab(const SparseMatrix& a, const std::vector<double>& b,
                           double tol, int maxit,
                           const std::vector<double>* x0) {
    require(static_cast<int>(b.size()) == a.n, "bicgstab: dimension mismatch");
    SolveResult res;
    double bnorm = norm2(b);
    res.x.assign(a.n, 0.0);
    if (x0) res.x = *x0;
    if (bnorm == 0.0) {
        res.x.assign(a.n, 0.0);
        res.converged = true;
        return res;
    }

    std::vector<double> diag = jacobi_diag(a);
    std::vector<double> r = spmv(a, res.x);
    for (int i = 0; i < a.n; ++i) r[i] = b[i] - r[i];
    std::vector<double> r0 = r;
    std::vector<double> p(a.n, 0.0), v(a.n, 0.0), s(a.n), t(a.n);
    std::vector<double> phat(a.n), shat(a.n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;

    for (int it = 0; it < maxit; ++it) {
        res.rel_residual = norm2(r) / bnorm;
        if (res.rel_residual <= tol) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        double rho_new = dotv(r0, r);
        if (rho_new == 0.0 || omega == 0.0) break;  // breakdown
        double beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (int i = 0; i < a.n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        for (int i = 0; i < a.n; ++i) phat[i] = p[i] / diag[i];
        v = spmv(a, phat);
        double r0v = dotv(r0, v);
        if (r0v == 0.0) break;
        alpha = rho / r0v;
        for (int i = 0; i < a.n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) / bnorm <= tol) {
            for (int i = 0; i < a.n; ++i) res.x[i] += alpha * phat[i];
            r = s;
            res.rel_residual = norm2(r) / bnorm;
            res.converged = true;
            res.iterations = it + 1;
            return res;
        }
        for (int i = 0; i < a.n; ++i) shat[i] = s[i] / diag[i];
        t = spmv(a, shat);
        double tt = dotv(t, t);
        if (tt == 0.0) break;
        omega = dotv(t, s) / tt;
        for (int i = 0; i < a.n; ++i) {
            res.x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        res.iterations = it + 1;
    }
    res.rel_residual = norm2(r) / bnorm;
    res.converged = res.rel_residual <= tol;
    return res;
}

}  // namespace mds
