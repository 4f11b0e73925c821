#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "msr/error.hpp"

namespace msr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// Verification and validation problems map to 1, bad input to 2.
int exit_code_for(ErrorCode code);

/// Runs the msrsim command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string shard_name(int node_id);
inline constexpr const char* kManifestName = "manifest.json";

} // namespace msr::cli
