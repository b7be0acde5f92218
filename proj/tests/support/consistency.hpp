#pragma once

// Direct check of the CSRP end-state properties: at every deadlock, a port
// is reserved iff an admitted listener is downstream of it, each listener
// knows whether it receives, and every LNR vector equals the talker's.

#include "srpmc/explorer/state_space.hpp"
#include "srpmc/models/topology.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace srpmc::testing {

struct ConsistencyResult {
    std::uint64_t deadlocks = 0;
    std::uint64_t reservation_violations = 0;
    std::uint64_t lnr_violations = 0;
    std::vector<std::string> examples;  // first few violations
};

ConsistencyResult check_csrp_deadlocks(const explorer::StateSpace& space, const models::TopologyConfig& config);

}  // namespace srpmc::testing
