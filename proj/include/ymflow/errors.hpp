#pragma once

#include <stdexcept>
#include <string>

namespace ymflow {

// Error taxonomy. Every category maps to one exception type so callers can
// match on what went wrong rather than parse message strings.

struct InvalidParameter : std::runtime_error {
  explicit InvalidParameter(const std::string& m) : std::runtime_error("invalid-parameter: " + m) {}
};

struct InvalidCell : std::runtime_error {
  explicit InvalidCell(const std::string& m) : std::runtime_error("invalid-cell: " + m) {}
};

struct InvalidDegree : std::runtime_error {
  explicit InvalidDegree(const std::string& m) : std::runtime_error("invalid-degree: " + m) {}
};

struct InvalidOperands : std::runtime_error {
  explicit InvalidOperands(const std::string& m) : std::runtime_error("invalid-operands: " + m) {}
};

struct LogBranchError : std::runtime_error {
  explicit LogBranchError(const std::string& m) : std::runtime_error("log-branch-error: " + m) {}
};

struct DomainViolation : std::runtime_error {
  explicit DomainViolation(const std::string& m) : std::runtime_error("domain-violation: " + m) {}
};

struct SizeLimitExceeded : std::runtime_error {
  explicit SizeLimitExceeded(const std::string& m) : std::runtime_error("size-limit-exceeded: " + m) {}
};

struct BlowUpDetected : std::runtime_error {
  explicit BlowUpDetected(const std::string& m) : std::runtime_error("blow-up-detected: " + m) {}
};

struct ConfigParseError : std::runtime_error {
  explicit ConfigParseError(const std::string& m) : std::runtime_error("config-parse-error: " + m) {}
};

struct SchemaMismatch : std::runtime_error {
  explicit SchemaMismatch(const std::string& m) : std::runtime_error("schema-mismatch: " + m) {}
};

struct ChecksumMismatch : std::runtime_error {
  explicit ChecksumMismatch(const std::string& m) : std::runtime_error("checksum-mismatch: " + m) {}
};

}  // namespace ymflow
