#pragma once

#include <string>

#include "lampwalk/config.hpp"
#include "lampwalk/construction.hpp"

namespace lampwalk {

// Fixed cache location under the configured output directory; validity is
// checked against content digests inside the file, not the file name.
std::string cache_path(const RunConfig& cfg);

// Loads the cache, rejecting digest or level-count mismatches. Throws a
// config error when the file is missing.
Construction load_cache(const RunConfig& cfg);

// Loads the cache when present, otherwise builds the levels fresh and
// persists them. A present-but-mismatched cache is rejected, never rebuilt.
Construction load_or_build(const RunConfig& cfg);

// Subcommands. Each throws on failure; dispatch maps errors to exit codes.
void cmd_build(const RunConfig& cfg);
void cmd_sample(const RunConfig& cfg);
void cmd_tv(const RunConfig& cfg);
void cmd_tau(const RunConfig& cfg);
void cmd_verify(const RunConfig& cfg);
void cmd_report(const RunConfig& cfg);

// Validates the config, runs one subcommand, and maps exceptions to process
// exit codes: 0 ok, 1 internal, 2 config, 3 resource or search horizon,
// 4 verification, 5 insufficient samples, 6 search horizon on a group with
// no lamp component (structurally inapplicable).
int dispatch(const std::string& command, const RunConfig& cfg);

}  // namespace lampwalk
