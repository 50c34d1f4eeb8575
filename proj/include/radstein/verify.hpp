#pragma once

#include <cstdint>
#include <vector>

#include "radstein/report.hpp"
#include "radstein/space.hpp"

namespace radstein {

// Runs the cross-module invariant battery on the given space: kernel
// contraction inequalities, weight/moment identities, isometry and chaos
// round trips, operator dualities, chain-rule pointwise bounds, bound-vs-
// oracle domination and the log-averaging identities. Roughly 10^2 checks;
// deterministic in (space, seed).
std::vector<CheckResult> run_verify_suite(const SpacePtr& space, std::uint64_t seed,
                                          double tol = 1e-10);

}  // namespace radstein
