#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "bcsecrecy/error.hpp"

namespace bcsecrecy::lp {

enum class Status { Optimal, Infeasible, Unbounded };

struct Result {
    Status status = Status::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
};

/// Dense two-phase tableau simplex for
///
///     minimize c'x  subject to  A x = b,  x >= 0.
///
/// Bland's rule throughout, so degenerate problems terminate. Intended for
/// the small feasibility programs used by the degradedness check (tens of
/// variables), not as a general-purpose solver.
inline Result solve_standard_form(const std::vector<double>& c, const std::vector<std::vector<double>>& A,
                                  std::vector<double> b, double eps = 1e-11) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    for (const auto& row : A)
        if (row.size() != n) throw Error(Errc::DimensionMismatch, "constraint row length differs from cost length");
    if (b.size() != m) throw Error(Errc::DimensionMismatch, "rhs length differs from constraint count");

    const std::size_t cols = n + m;  // originals then artificials
    const std::size_t rhs = cols;
    std::vector<std::vector<double>> T(m, std::vector<double>(cols + 1, 0.0));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) T[i][j] = sign * A[i][j];
        T[i][n + i] = 1.0;
        T[i][rhs] = sign * b[i];
        basis[i] = n + i;
    }

    auto pivot = [&](std::size_t r, std::size_t col, std::vector<double>& red) {
        const double pv = T[r][col];
        for (auto& v : T[r]) v /= pv;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r) continue;
            const double f = T[i][col];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) T[i][j] -= f * T[r][j];
        }
        const double f = red[col];
        if (f != 0.0)
            for (std::size_t j = 0; j <= cols; ++j) red[j] -= f * T[r][j];
        basis[r] = col;
    };

    // red[j] is the reduced cost; red[rhs] holds minus the objective value.
    auto run = [&](std::vector<double>& red, std::size_t allowed_cols) -> Status {
        for (;;) {
            std::size_t enter = cols;
            for (std::size_t j = 0; j < allowed_cols; ++j) {
                if (red[j] < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols) return Status::Optimal;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                if (T[i][enter] > eps) {
                    const double ratio = T[i][rhs] / T[i][enter];
                    if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave < m && basis[i] < basis[leave])) {
                        best = ratio;
                        leave = i;
                    }
                }
            }
            if (leave == m) return Status::Unbounded;
            pivot(leave, enter, red);
        }
    };

    // Phase I: minimize the sum of artificials.
    std::vector<double> red(cols + 1, 0.0);
    for (std::size_t j = n; j < cols; ++j) red[j] = 1.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j <= cols; ++j) red[j] -= T[i][j];
    run(red, cols);

    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    Result res;
    if (-red[rhs] > 1e-9 * scale) {
        res.status = Status::Infeasible;
        return res;
    }

    // Drive remaining artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
        if (basis[i] < n) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(T[i][j]) > eps) {
                pivot(i, j, red);
                break;
            }
        }
    }

    // Phase II over the original columns only.
    std::vector<double> red2(cols + 1, 0.0);
    for (std::size_t j = 0; j < n; ++j) red2[j] = c[j];
    for (std::size_t i = 0; i < m; ++i) {
        const double cb = basis[i] < n ? c[basis[i]] : 0.0;
        if (cb == 0.0) continue;
        for (std::size_t j = 0; j <= cols; ++j) red2[j] -= cb * T[i][j];
    }
    res.status = run(red2, n);
    res.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) res.x[basis[i]] = T[i][rhs];
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.x[j];
    return res;
}

}  // namespace bcsecrecy::lp
