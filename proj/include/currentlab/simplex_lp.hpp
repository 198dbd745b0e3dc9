#pragma once

// Dense-tableau primal simplex with Bland's rule for
//
//     minimize c^T x   subject to  A x = b,  x >= 0,
//
// started from a basis whose columns already form the identity (the caller
// arranges this, e.g. with slack-like columns and b >= 0). Scalar may be a
// floating type or an exact field type such as a multiprecision rational; in
// the exact case every comparison is against zero.

#include "currentlab/errors.hpp"

#include <cstddef>
#include <limits>
#include <type_traits>
#include <vector>

namespace currentlab {

template <typename Scalar>
struct LPProblem {
    std::size_t rows = 0, cols = 0;
    std::vector<Scalar> A;  ///< row-major, rows x cols
    std::vector<Scalar> b;  ///< nonnegative
    std::vector<Scalar> c;
    std::vector<std::size_t> basis;  ///< basis[i] is the column equal to e_i

    Scalar& at(std::size_t i, std::size_t j) { return A[i * cols + j]; }
    const Scalar& at(std::size_t i, std::size_t j) const { return A[i * cols + j]; }
};

template <typename Scalar>
struct LPSolution {
    std::vector<Scalar> x;
    Scalar objective{};
    std::vector<std::size_t> basis;
    long pivots = 0;
};

template <typename Scalar>
constexpr Scalar lp_tolerance()
{
    if constexpr (std::is_floating_point_v<Scalar>)
        return Scalar(1e-11);
    else
        return Scalar(0);
}

template <typename Scalar>
LPSolution<Scalar> solve_lp(LPProblem<Scalar> P, long max_pivots = 50'000'000)
{
    const std::size_t m = P.rows, n = P.cols;
    const Scalar eps = lp_tolerance<Scalar>();
    if (P.b.size() != m || P.c.size() != n || P.basis.size() != m || P.A.size() != m * n)
        throw Error("inconsistent LP dimensions");
    for (std::size_t i = 0; i < m; ++i)
        if (P.b[i] < 0)
            throw Error("initial basis is not feasible");

    // Reduced costs d_j = c_j - c_B^T A_j, with the basic part of A the identity.
    std::vector<Scalar> d = P.c;
    for (std::size_t i = 0; i < m; ++i) {
        const Scalar cb = P.c[P.basis[i]];
        if (cb == 0)
            continue;
        for (std::size_t j = 0; j < n; ++j)
            if (P.at(i, j) != 0)
                d[j] -= cb * P.at(i, j);
    }

    std::vector<char> is_basic(n, 0);
    for (auto j : P.basis)
        is_basic[j] = 1;

    LPSolution<Scalar> out;
    std::vector<std::size_t> nz;
    for (;;) {
        std::size_t enter = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!is_basic[j] && d[j] < -eps) {
                enter = j;
                break;
            }
        if (enter == n)
            break;

        std::size_t leave = m;
        Scalar best{};
        for (std::size_t i = 0; i < m; ++i) {
            const Scalar& a = P.at(i, enter);
            if (!(a > eps))
                continue;
            const Scalar ratio = P.b[i] / a;
            if (leave == m || ratio < best - eps ||
                (!(ratio > best + eps) && P.basis[i] < P.basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m)
            throw Error("LP is unbounded");
        if (++out.pivots > max_pivots)
            throw Error("LP pivot limit exceeded");

        // Pivot on (leave, enter), touching only the nonzero pattern of the row.
        const Scalar piv = P.at(leave, enter);
        nz.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (P.at(leave, j) != 0) {
                P.at(leave, j) /= piv;
                nz.push_back(j);
            }
        P.b[leave] /= piv;
        P.at(leave, enter) = 1;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave)
                continue;
            const Scalar f = P.at(i, enter);
            if (f == 0)
                continue;
            for (auto j : nz)
                P.at(i, j) -= f * P.at(leave, j);
            P.at(i, enter) = 0;
            P.b[i] -= f * P.b[leave];
            if constexpr (std::is_floating_point_v<Scalar>)
                if (P.b[i] < 0 && P.b[i] > -eps)
                    P.b[i] = 0;
        }
        const Scalar f = d[enter];
        for (auto j : nz)
            d[j] -= f * P.at(leave, j);
        d[enter] = 0;

        is_basic[P.basis[leave]] = 0;
        is_basic[enter] = 1;
        P.basis[leave] = enter;
    }

    out.x.assign(n, Scalar(0));
    for (std::size_t i = 0; i < m; ++i)
        out.x[P.basis[i]] = P.b[i];
    out.objective = 0;
    for (std::size_t j = 0; j < n; ++j)
        out.objective += P.c[j] * out.x[j];
    out.basis = std::move(P.basis);
    return out;
}

}  // namespace currentlab
