#pragma once

#include <array>
#include <vector>

#include "meissner/errors.hpp"

namespace meissner::detail {

struct Block22 {
    double m[2][2] = {{0, 0}, {0, 0}};
};

inline Block22 inv2(const Block22& b) {
    double det = b.m[0][0] * b.m[1][1] - b.m[0][1] * b.m[1][0];
    require(std::abs(det) > 1e-300, ErrorKind::SolverFailure, "singular 2x2 block");
    Block22 inv;
    inv.m[0][0] = b.m[1][1] / det;
    inv.m[0][1] = -b.m[0][1] / det;
    inv.m[1][0] = -b.m[1][0] / det;
    inv.m[1][1] = b.m[0][0] / det;
    return inv;
}

inline Block22 mul(const Block22& a, const Block22& b) {
    Block22 c;
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) c.m[r][s] = a.m[r][0] * b.m[0][s] + a.m[r][1] * b.m[1][s];
    return c;
}

inline std::array<double, 2> mulv(const Block22& a, const std::array<double, 2>& v) {
    return {a.m[0][0] * v[0] + a.m[0][1] * v[1], a.m[1][0] * v[0] + a.m[1][1] * v[1]};
}

// Solves lower[i] x_{i-1} + diag[i] x_i + upper[i] x_{i+1} = rhs_i in place;
// the solution replaces rhs.
inline void block_thomas(std::vector<Block22>& lower, std::vector<Block22>& diag,
                         std::vector<Block22>& upper, std::vector<std::array<double, 2>>& rhs) {
    std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        Block22 w = mul(lower[i], inv2(diag[i - 1]));
        Block22 wu = mul(w, upper[i - 1]);
        for (int r = 0; r < 2; ++r)
            for (int s = 0; s < 2; ++s) diag[i].m[r][s] -= wu.m[r][s];
        auto wr = mulv(w, rhs[i - 1]);
        rhs[i][0] -= wr[0];
        rhs[i][1] -= wr[1];
    }
    std::vector<std::array<double, 2>> x(n);
    x[n - 1] = mulv(inv2(diag[n - 1]), rhs[n - 1]);
    for (std::size_t ii = n - 1; ii-- > 0;) {
        auto ux = mulv(upper[ii], x[ii + 1]);
        std::array<double, 2> r{rhs[ii][0] - ux[0], rhs[ii][1] - ux[1]};
        x[ii] = mulv(inv2(diag[ii]), r);
    }
    rhs = x;
}

// Scalar tridiagonal solve, in place into rhs.
inline void thomas(std::vector<double>& lower, std::vector<double>& diag,
                   std::vector<double>& upper, std::vector<double>& rhs) {
    std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        require(std::abs(diag[i - 1]) > 1e-300, ErrorKind::SolverFailure, "singular pivot");
        double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t ii = n - 1; ii-- > 0;) rhs[ii] = (rhs[ii] - upper[ii] * rhs[ii + 1]) / diag[ii];
}

}  // namespace meissner::detail
