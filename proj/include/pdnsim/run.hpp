#pragma once

#include <iostream>
#include <optional>
#include <string>

#include "pdnsim/config.hpp"

namespace pdnsim {

struct CommandOptions {
  // SAA count for irmap; defaults to each design's unaged level.
  std::optional<int> n;
};

// cmd is one of: layout, netlist, rw, irmap, napsaa, headroom, age, lifetime,
// perf, compare. Returns 0 on success; on error prints one diagnostic line to
// err and removes any partially written outputs.
int run_command(const std::string& cmd, const RunConfig& config,
                const CommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace pdnsim
