#pragma once

#include "concord/simulation.hpp"

#include <ostream>
#include <vector>

namespace concord {

/// Line chart of the grid study: one panel per distribution
/// plus one for Kendall's tau, sigma2_hat against rho, one curve per copula
/// family (solid unshifted, dashed shifted) and dotted guides at 1, V(G)
/// and 1 + V(G).
void write_figure_svg(std::ostream& out, const std::vector<SimulationRecord>& records);

} // namespace concord
