#include "sahitrack/assignment.hpp"

#include <algorithm>
#include <cmath>

namespace sahitrack {
namespace {

bool admissible(double c, double gate) { return std::isfinite(c) && c <= gate; }

// Dense square-or-wide solver over rows <= cols. Returns col index per row.
std::vector<int> hungarian(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials and matching as in the classic O(n^2 m) formulation.
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
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
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] != 0) col_of_row[static_cast<std::size_t>(p[j] - 1)] = j - 1;
  }
  return col_of_row;
}

}  // namespace

Assignment solve_assignment(const Eigen::MatrixXd& cost, double gate) {
  Assignment out;
  const Eigen::Index rows = cost.rows();
  const Eigen::Index cols = cost.cols();
  if (rows == 0 || cols == 0) return out;

  // Inadmissible cells get a penalty larger than any spread of admissible
  // totals, so one more admissible pair always wins over a cheaper set.
  double spread = 0.0;
  bool any = false;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (admissible(cost(i, j), gate)) {
        spread += std::abs(cost(i, j));
        any = true;
      }
    }
  }
  if (!any) return out;
  const double penalty = 2.0 * spread + 1.0;

  const bool transpose = rows > cols;
  Eigen::MatrixXd work = transpose ? Eigen::MatrixXd(cost.transpose()) : cost;
  for (Eigen::Index i = 0; i < work.rows(); ++i) {
    for (Eigen::Index j = 0; j < work.cols(); ++j) {
      if (!admissible(work(i, j), gate)) work(i, j) = penalty;
    }
  }

  const std::vector<int> match = hungarian(work);
  for (std::size_t i = 0; i < match.size(); ++i) {
    const int j = match[i];
    if (j < 0) continue;
    const int r = transpose ? j : static_cast<int>(i);
    const int c = transpose ? static_cast<int>(i) : j;
    if (admissible(cost(r, c), gate)) out.emplace_back(r, c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& pairs) {
  double total = 0.0;
  for (const auto& [r, c] : pairs) total += cost(r, c);
  return total;
}

}  // namespace sahitrack
