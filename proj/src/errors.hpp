#pragma once

#include <stdexcept>
#include <string>

namespace sgs {

// Error families, numbered to match process exit codes.
enum class errc {
  ok = 0,
  invalid_input = 2, // malformed files, schema violations, bad arguments
  assumption = 3,    // domain assumptions fail (e.g. potential not positive)
  numeric = 4,       // solver failures, divergence, degenerate data, resource caps
};

class error : public std::runtime_error {
public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail_invalid(const std::string& what) {
  throw error(errc::invalid_input, what);
}
[[noreturn]] inline void fail_assumption(const std::string& what) {
  throw error(errc::assumption, what);
}
[[noreturn]] inline void fail_numeric(const std::string& what) {
  throw error(errc::numeric, what);
}

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) throw error(code, what);
}

} // namespace sgs
