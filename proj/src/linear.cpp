#include "pftg/linear.hpp"

#include <cmath>

namespace pftg {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

namespace {

void remove_mean(std::vector<double>& v) {
    double m = 0;
    for (double x : v) m += x;
    m /= double(v.size());
    for (double& x : v) x -= m;
}

void apply_jacobi(const std::vector<double>& diag, const std::vector<double>& r,
                  std::vector<double>& z) {
    if (diag.empty()) {
        z = r;
        return;
    }
    z.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) z[i] = r[i] / diag[i];
}

} // namespace

KrylovResult cg_solve(const LinOp& apply, const std::vector<double>& rhs, std::vector<double>& x,
                      const std::vector<double>& diag_precond, double rel_tol, long max_iter,
                      bool project_mean) {
    const std::size_t n = rhs.size();
    KrylovResult res;
    x.assign(n, 0.0);
    std::vector<double> b = rhs;
    if (project_mean) remove_mean(b);
    const double bnorm = norm2(b);
    const double tol = rel_tol * bnorm;
    if (bnorm == 0) {
        res.converged = true;
        return res;
    }
    std::vector<double> r(n), z, p, Ap(n), dx(n);

    // outer refinement passes against the true residual absorb recurrence drift
    for (int pass = 0; pass < 4 && res.iterations < max_iter; ++pass) {
        apply(x, Ap);
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
        if (project_mean) remove_mean(r);
        res.residual = norm2(r);
        if (res.residual <= tol) {
            res.converged = true;
            return res;
        }
        dx.assign(n, 0.0);
        apply_jacobi(diag_precond, r, z);
        if (project_mean) remove_mean(z);
        p = z;
        double rz = dot(r, z);
        double rnorm = res.residual;
        while (res.iterations < max_iter && rnorm > 0.25 * tol) {
            apply(p, Ap);
            double pAp = dot(p, Ap);
            if (pAp <= 0) break; // lost positive definiteness; keep best iterate
            double alpha = rz / pAp;
            for (std::size_t i = 0; i < n; ++i) {
                dx[i] += alpha * p[i];
                r[i] -= alpha * Ap[i];
            }
            apply_jacobi(diag_precond, r, z);
            if (project_mean) remove_mean(z);
            double rz_new = dot(r, z);
            double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
            rnorm = norm2(r);
            ++res.iterations;
        }
        for (std::size_t i = 0; i < n; ++i) x[i] += dx[i];
        if (project_mean) remove_mean(x);
    }
    apply(x, Ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - Ap[i];
    if (project_mean) remove_mean(r);
    res.residual = norm2(r);
    res.converged = res.residual <= tol;
    return res;
}

KrylovResult bicgstab_solve(const LinOp& apply, const std::vector<double>& rhs,
                            std::vector<double>& x, const std::vector<double>& diag_precond,
                            double rel_tol, long max_iter) {
    Precond pc;
    if (!diag_precond.empty())
        pc = [&diag_precond](const std::vector<double>& r, std::vector<double>& z) {
            apply_jacobi(diag_precond, r, z);
        };
    return bicgstab_solve(apply, rhs, x, pc, rel_tol, max_iter);
}

KrylovResult bicgstab_solve(const LinOp& apply, const std::vector<double>& rhs,
                            std::vector<double>& x, const Precond& precond, double rel_tol,
                            long max_iter) {
    const std::size_t n = rhs.size();
    KrylovResult res;
    x.assign(n, 0.0);
    const double bnorm = norm2(rhs);
    const double tol = rel_tol * bnorm;
    if (bnorm == 0) {
        res.converged = true;
        return res;
    }
    auto apply_precond = [&](const std::vector<double>& r, std::vector<double>& z) {
        if (precond)
            precond(r, z);
        else
            z = r;
    };
    std::vector<double> r = rhs; // r = b - A*0
    std::vector<double> r0, p(n, 0.0), v(n, 0.0), s(n), t(n), phat, shat, tmp(n);

    for (int restart = 0; restart < 4 && res.iterations < max_iter; ++restart) {
        r0 = r;
        p = r;
        double rho = dot(r0, r);
        if (rho == 0) break;
        while (res.iterations < max_iter) {
            apply_precond(p, phat);
            apply(phat, v);
            double r0v = dot(r0, v);
            if (r0v == 0) break; // breakdown -> restart
            double alpha = rho / r0v;
            for (std::size_t i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
            if (norm2(s) <= tol) {
                for (std::size_t i = 0; i < n; ++i) x[i] += alpha * phat[i];
                r = s;
                ++res.iterations;
                break;
            }
            apply_precond(s, shat);
            apply(shat, t);
            double tt = dot(t, t);
            if (tt == 0) break;
            double omega = dot(t, s) / tt;
            if (omega == 0) break;
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * phat[i] + omega * shat[i];
                r[i] = s[i] - omega * t[i];
            }
            ++res.iterations;
            if (norm2(r) <= tol) break;
            double rho_new = dot(r0, r);
            if (rho_new == 0) break;
            double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        // verify against the true residual; restart from it if not there yet
        apply(x, tmp);
        for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - tmp[i];
        res.residual = norm2(r);
        if (res.residual <= tol) {
            res.converged = true;
            return res;
        }
    }
    apply(x, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = rhs[i] - tmp[i];
    res.residual = norm2(tmp);
    res.converged = res.residual <= tol;
    return res;
}

} // namespace pftg
