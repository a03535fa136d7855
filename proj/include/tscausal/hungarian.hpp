#pragma once

// O(n^3) Hungarian algorithm (potentials + shortest augmenting path) for
// square minimum-cost assignment.

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <vector>

namespace tscausal {

// Returns `assign` with assign[row] = column, minimizing sum cost(row, assign[row]).
inline std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int n = static_cast<int>(cost.rows());
    if (cost.cols() != n || n == 0)
        throw std::invalid_argument("solve_assignment: cost matrix must be square");
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based arrays; p[j] = row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assign(n, -1);
    for (int j = 1; j <= n; ++j) assign[p[j] - 1] = j - 1;
    return assign;
}

inline double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& assign) {
    double total = 0.0;
    for (size_t i = 0; i < assign.size(); ++i) total += cost(i, assign[i]);
    return total;
}

}  // namespace tscausal
