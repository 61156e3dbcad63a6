#pragma once

#include "ts/policy/policy.hpp"
#include "ts/rl/features.hpp"
#include "ts/rl/network.hpp"

namespace ts::rl {

// Greedy inference: uniform head average, argmax over actions (ties toward
// the lowest cell index), target equal to the serving cell means no-HO.
// A malformed record degrades to NoOp rather than throwing.
policy::PolicyDecision act_online(const QNetwork& net, const NormalizationManifest& norms,
                                  const ric::UeStateRecord& record);

}  // namespace ts::rl
