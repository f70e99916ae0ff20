#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lampwalk {

// Process exit codes used by the command-line driver. Library errors map onto
// these so that scripted callers can distinguish failure classes.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitConfig = 2,
  kExitResource = 3,
  kExitVerification = 4,
  kExitSamples = 5,
  kExitInapplicable = 6,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
  virtual int exit_code() const { return kExitInternal; }
};

// Invalid or inconsistent configuration, malformed input files, digest
// mismatches between a config and a previously written artifact.
class ConfigError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitConfig; }
};

// A computation would exceed a configured cardinality or memory cap.
// `reached` reports the partial cardinality at the moment the cap tripped.
class ResourceLimitError : public Error {
 public:
  ResourceLimitError(const std::string& msg, std::size_t reached_count)
      : Error(msg + " (partial cardinality reached: " +
              std::to_string(reached_count) + ")"),
        reached(reached_count) {}
  // Re-raise with leading context, without re-appending the count suffix.
  static ResourceLimitError wrapped(const std::string& prefix,
                                    const ResourceLimitError& inner) {
    return ResourceLimitError(prefix + ": " + inner.what(), inner.reached,
                              raw_tag{});
  }
  std::size_t reached = 0;
  int exit_code() const override { return kExitResource; }

 private:
  struct raw_tag {};
  ResourceLimitError(const std::string& full, std::size_t reached_count,
                     raw_tag)
      : Error(full), reached(reached_count) {}
};

// A bounded search ran out of candidates. On the free-abelian control group
// this is the designed outcome of the separator search; the driver maps it to
// kExitInapplicable there and to kExitResource elsewhere.
class SearchHorizonError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitResource; }
};

// An exact re-verification failed, or an internal consistency assertion that
// would falsify a previously verified invariant fired.
class VerificationError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitVerification; }
};

// A statistical test was invoked with fewer resolved samples than its floor.
class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
  int exit_code() const override { return kExitSamples; }
};

// A prefix-product or tail computation touched a step whose group element is
// not resolvable at the built construction depth.
class UnresolvedStepError : public Error {
 public:
  UnresolvedStepError(const std::string& msg, std::size_t step_index)
      : Error(msg + " (first unresolved step index: " +
              std::to_string(step_index) + ")"),
        index(step_index) {}
  std::size_t index = 0;
};

}  // namespace lampwalk
