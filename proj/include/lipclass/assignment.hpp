#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace lipclass {

struct Assignment {
    double cost = 0.0;
    /// row i is matched to column `column_of[i]`
    std::vector<std::size_t> column_of;
};

/// Minimum-cost perfect assignment on a square k x k cost matrix given as a
/// callable cost(row, col). Shortest augmenting path with dual potentials,
/// O(k^3). Exact up to floating-point summation order.
template <class CostFn>
Assignment min_cost_assignment(std::size_t k, CostFn&& cost) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    Assignment out;
    if (k == 0) return out;

    // 1-based internally; column 0 is the virtual source.
    std::vector<double> c(k * k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) c[i * k + j] = cost(i, j);

    std::vector<double> u(k + 1, 0.0), v(k + 1, 0.0);
    std::vector<std::size_t> row_of_col(k + 1, 0), way(k + 1, 0);
    std::vector<double> minv(k + 1);
    std::vector<char> used(k + 1);

    for (std::size_t i = 1; i <= k; ++i) {
        row_of_col[0] = i;
        std::size_t j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const std::size_t i0 = row_of_col[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= k; ++j) {
                if (used[j]) continue;
                const double cur = c[(i0 - 1) * k + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= k; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    out.column_of.assign(k, 0);
    for (std::size_t j = 1; j <= k; ++j) out.column_of[row_of_col[j] - 1] = j - 1;
    // Recompute from the original matrix rather than the potentials.
    for (std::size_t i = 0; i < k; ++i) out.cost += c[i * k + out.column_of[i]];
    return out;
}

} // namespace lipclass
