#include "nomafair/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nomafair {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

BisectResult bisect(const std::function<double(double)>& f, const Bracket& bracket) {
    if (!(bracket.lo < bracket.hi)) throw std::invalid_argument("bisect: lo must be < hi");
    if (!(bracket.tol > 0)) throw std::invalid_argument("bisect: tol must be > 0");
    double lo = bracket.lo, hi = bracket.hi;
    double flo = f(lo);
    double fhi = f(hi);
    if (std::isnan(flo) || std::isnan(fhi))
        throw std::domain_error("bisect: function evaluated to NaN at an endpoint");
    if (std::fabs(flo) <= bracket.tol) return {lo, 0, hi - lo};
    if (std::fabs(fhi) <= bracket.tol) return {hi, 0, hi - lo};
    if ((flo < 0) == (fhi < 0))
        throw InfeasibleError("bisect: no sign change in bracket");

    const double scale = std::max({1.0, std::fabs(lo), std::fabs(hi)});
    int iters = 0;
    while (true) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        ++iters;
        if (std::fabs(fm) <= bracket.tol || hi - lo <= 4.0 * scale *
                std::numeric_limits<double>::epsilon())
            return {mid, iters, (hi - lo) * 0.5};
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
}

namespace {

// All inequality constraints of a program as rows a.x <= c, bounds included.
struct Rows {
    std::vector<std::vector<double>> a;
    std::vector<double> c;
};

Rows collect_rows(const ConvexProgram& prog) {
    Rows r;
    for (size_t i = 0; i < prog.A.size(); ++i) {
        if (static_cast<int>(prog.A[i].size()) != prog.n)
            throw std::invalid_argument("minimize_convex: constraint row size != n");
        r.a.push_back(prog.A[i]);
        r.c.push_back(prog.c[i]);
    }
    auto bound_row = [&](int j, double sign, double value) {
        std::vector<double> row(static_cast<size_t>(prog.n), 0.0);
        row[static_cast<size_t>(j)] = sign;
        r.a.push_back(std::move(row));
        r.c.push_back(value);
    };
    for (int j = 0; j < prog.n; ++j) {
        if (!prog.lower.empty() && prog.lower[static_cast<size_t>(j)] > -kInf)
            bound_row(j, -1.0, -prog.lower[static_cast<size_t>(j)]);
        if (!prog.upper.empty() && prog.upper[static_cast<size_t>(j)] < kInf)
            bound_row(j, 1.0, prog.upper[static_cast<size_t>(j)]);
    }
    return r;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

}  // namespace

MinimizeResult minimize_convex(const ConvexProgram& prog, std::span<const double> x0,
                               double tol) {
    if (static_cast<int>(x0.size()) != prog.n)
        throw std::invalid_argument("minimize_convex: x0 size != n");
    const Rows rows = collect_rows(prog);
    const size_t m = rows.a.size();
    const int n = prog.n;
    constexpr long kMaxIters = 100000;

    std::vector<double> x(x0.begin(), x0.end());
    std::vector<double> slack(m);
    auto compute_slacks = [&](std::span<const double> p, std::vector<double>& s) {
        for (size_t i = 0; i < m; ++i) s[i] = rows.c[i] - dot(rows.a[i], p);
    };
    compute_slacks(x, slack);
    for (size_t i = 0; i < m; ++i)
        if (!(slack[i] > 0))
            throw InfeasibleError("minimize_convex: start point is not strictly feasible");

    std::vector<double> grad_f(static_cast<size_t>(n));
    std::vector<double> grad_phi(static_cast<size_t>(n));

    // phi_t(x) = t f(x) - sum ln(slack_i); returns value, fills grad_phi.
    auto eval_phi = [&](std::span<const double> p, double t, std::vector<double>& gphi,
                        std::vector<double>& s, double* fval) -> double {
        compute_slacks(p, s);
        for (size_t i = 0; i < m; ++i)
            if (!(s[i] > 0)) return kInf;
        double f = prog.objective(p, grad_f);
        if (fval) *fval = f;
        if (!std::isfinite(f)) return kInf;
        double phi = t * f;
        for (int j = 0; j < n; ++j) gphi[static_cast<size_t>(j)] = t * grad_f[static_cast<size_t>(j)];
        for (size_t i = 0; i < m; ++i) {
            phi -= std::log(s[i]);
            const double inv = 1.0 / s[i];
            for (int j = 0; j < n; ++j)
                gphi[static_cast<size_t>(j)] += rows.a[i][static_cast<size_t>(j)] * inv;
        }
        return phi;
    };

    long iters = 0;
    double fx = 0.0;
    const double gap_target = std::min(1e-9, tol);
    double t = 1.0;
    double t_final = (m == 0) ? 1.0 : std::max(1.0, static_cast<double>(m) / gap_target);

    std::vector<double> H(static_cast<size_t>(n) * static_cast<size_t>(n));
    std::vector<double> d(static_cast<size_t>(n)), xn(static_cast<size_t>(n)),
        gn(static_cast<size_t>(n)), sn(m), sv(static_cast<size_t>(n)),
        yv(static_cast<size_t>(n)), Hy(static_cast<size_t>(n));

    double residual = kInf;
    while (true) {
        const bool final_stage = (t >= t_final) || m == 0;
        const double inner_target = final_stage ? t * tol : std::max(t * tol, 1e-2);

        // reset inverse-Hessian approximation for the new barrier stage
        std::fill(H.begin(), H.end(), 0.0);
        for (int j = 0; j < n; ++j) H[static_cast<size_t>(j * n + j)] = 1.0;

        double phi = eval_phi(x, t, grad_phi, slack, &fx);
        int stalls = 0;
        double best_gnorm = kInf;
        int since_best = 0;
        while (true) {
            const double gnorm = norm2(grad_phi);
            if (gnorm <= inner_target) break;
            // Near machine precision the line search can keep accepting
            // no-progress steps; stop the stage once the gradient norm has
            // plateaued.
            if (gnorm < 0.9 * best_gnorm) {
                best_gnorm = gnorm;
                since_best = 0;
            } else if (++since_best > 40) {
                break;
            }
            if (++iters > kMaxIters)
                throw ConvergenceError("minimize_convex: iteration cap exceeded", x, fx,
                                       gnorm / t, iters);

            // d = -H * grad_phi
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int l = 0; l < n; ++l)
                    s += H[static_cast<size_t>(j * n + l)] * grad_phi[static_cast<size_t>(l)];
                d[static_cast<size_t>(j)] = -s;
            }
            double gd = dot(d, grad_phi);
            if (!(gd < 0)) {  // not a descent direction: fall back to steepest descent
                for (int j = 0; j < n; ++j) d[static_cast<size_t>(j)] = -grad_phi[static_cast<size_t>(j)];
                gd = -gnorm * gnorm;
                std::fill(H.begin(), H.end(), 0.0);
                for (int j = 0; j < n; ++j) H[static_cast<size_t>(j * n + j)] = 1.0;
            }

            // cap the step to stay strictly inside the feasible region
            double step_cap = kInf;
            for (size_t i = 0; i < m; ++i) {
                const double rate = dot(rows.a[i], d);
                if (rate > 0) step_cap = std::min(step_cap, slack[i] / rate);
            }
            double step = std::min(1.0, 0.995 * step_cap);

            double phin = kInf;
            bool accepted = false;
            for (int bt = 0; bt < 60 && step > 0; ++bt) {
                for (int j = 0; j < n; ++j)
                    xn[static_cast<size_t>(j)] = x[static_cast<size_t>(j)] + step * d[static_cast<size_t>(j)];
                double fn;
                phin = eval_phi(xn, t, gn, sn, &fn);
                if (phin <= phi + 1e-4 * step * gd) {
                    accepted = true;
                    fx = fn;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) {
                if (++stalls >= 2) break;
                std::fill(H.begin(), H.end(), 0.0);
                for (int j = 0; j < n; ++j) H[static_cast<size_t>(j * n + j)] = 1.0;
                continue;
            }
            stalls = 0;

            // BFGS inverse update
            for (int j = 0; j < n; ++j) {
                sv[static_cast<size_t>(j)] = xn[static_cast<size_t>(j)] - x[static_cast<size_t>(j)];
                yv[static_cast<size_t>(j)] = gn[static_cast<size_t>(j)] - grad_phi[static_cast<size_t>(j)];
            }
            const double sy = dot(sv, yv);
            if (sy > 1e-12 * norm2(sv) * norm2(yv)) {
                for (int j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (int l = 0; l < n; ++l)
                        s += H[static_cast<size_t>(j * n + l)] * yv[static_cast<size_t>(l)];
                    Hy[static_cast<size_t>(j)] = s;
                }
                const double yHy = dot(yv, Hy);
                const double a = (sy + yHy) / (sy * sy);
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l)
                        H[static_cast<size_t>(j * n + l)] +=
                            a * sv[static_cast<size_t>(j)] * sv[static_cast<size_t>(l)] -
                            (Hy[static_cast<size_t>(j)] * sv[static_cast<size_t>(l)] +
                             sv[static_cast<size_t>(j)] * Hy[static_cast<size_t>(l)]) / sy;
            }

            x = xn;
            grad_phi = gn;
            slack = sn;
            phi = phin;
        }

        residual = norm2(grad_phi) / t;
        if (final_stage) break;
        t = std::min(t * 15.0, t_final);
    }

    // report the true objective value at the solution
    double fval = prog.objective(x, grad_f);
    return {std::move(x), fval, residual, iters};
}

GridResult1D grid_search(const std::function<double(double)>& f, double lo, double hi,
                         int steps) {
    if (steps < 2 || !(lo <= hi)) throw std::invalid_argument("grid_search: empty box");
    double best_arg = lo;
    double best = -kInf;
    for (int i = 0; i < steps; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / (steps - 1);
        const double v = f(x);
        if (v > best) {
            best = v;
            best_arg = x;
        }
    }
    if (best == -kInf) best = f(lo);  // constant -inf function: fixed tie-break
    return {best_arg, best};
}

GridResult2D grid_search(const std::function<double(double, double)>& f, double lo0,
                         double hi0, int steps0, double lo1, double hi1, int steps1) {
    if (steps0 < 2 || steps1 < 2 || !(lo0 <= hi0) || !(lo1 <= hi1))
        throw std::invalid_argument("grid_search: empty box");
    double ba0 = lo0, ba1 = lo1;
    double best = -kInf;
    bool seen = false;
    for (int i = 0; i < steps0; ++i) {
        const double x0 = lo0 + (hi0 - lo0) * static_cast<double>(i) / (steps0 - 1);
        for (int j = 0; j < steps1; ++j) {
            const double x1 = lo1 + (hi1 - lo1) * static_cast<double>(j) / (steps1 - 1);
            const double v = f(x0, x1);
            if (!seen || v > best) {
                seen = true;
                best = v;
                ba0 = x0;
                ba1 = x1;
            }
        }
    }
    return {ba0, ba1, best};
}

GridResult1D golden_section_max(const std::function<double(double)>& f, double lo,
                                double hi, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace nomafair
