#pragma once

#include <string>

#include "relaysim/agents.hpp"
#include "relaysim/config.hpp"

namespace relaysim {

// Binary snapshot of every network (online and target) plus normalizer
// statistics. Round-trips bit-exactly. Optimizer moments are not stored;
// checkpoints serve evaluation and deployment, not training resumption.
void save_checkpoint(const CtdeAgents& agents, const std::string& path);

// Rebuilds the bundle, taking optimizer hyperparameters from cfg. Throws
// std::runtime_error on a bad magic tag, truncation, or a shape that does not
// match cfg.
CtdeAgents load_checkpoint(const std::string& path, const RunConfig& cfg);

}  // namespace relaysim
