#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sahitrack {

using Assignment = std::vector<std::pair<int, int>>;

inline constexpr double kInadmissible = std::numeric_limits<double>::infinity();

// Optimal rectangular assignment (Kuhn-Munkres with shortest augmenting
// paths). Entries that are non-finite or exceed `gate` are inadmissible.
// The solver maximises the number of admissible pairs first and then
// minimises their total cost; inadmissible pairs never appear in the result.
// Output is sorted by row.
Assignment solve_assignment(const Eigen::MatrixXd& cost, double gate = kInadmissible);

double assignment_cost(const Eigen::MatrixXd& cost, const Assignment& pairs);

}  // namespace sahitrack
