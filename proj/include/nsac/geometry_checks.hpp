#pragma once

#include <string>
#include <vector>

#include "nsac/geometry.hpp"
#include "nsac/grid.hpp"

namespace nsac {

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;  // measured quantity
    double bound = 0.0;  // what it was compared against
    std::string detail;
};

/// Property suite for the cut-off profiles, xi, theta and the extended
/// curvature of `iface`, sampled at the cell centres of `grid` and of its
/// twice finer refinement.  The transport estimates are checked on the
/// same circle translated with iface.velocity (or (1, 0.5) when that is
/// zero) and carried by that velocity plus a rigid rotation, so that the
/// fluid velocity differs from its normal extension off the interface.
std::vector<CheckResult> geometry_property_suite(const geometry::AnalyticInterface& iface,
                                                 const geometry::GeometryParams& params, const Grid2D& grid);

}  // namespace nsac
