#pragma once

#include <stdexcept>
#include <string>

namespace canondual {

/// Failure categories raised by the library. The C API maps each one onto a
/// status code of the same name.
enum class Errc {
  kInvalidArgument,
  kDimensionMismatch,
  kDomainError,
  kConsistencyError,
  kSingularG,
  kSingularHessian,
  kDegenerateSpectrum,
  kAllInfeasible,
  kBoxTooCoarse,
  kSchemaError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Schema violation in a problem document. `field()` is the JSON path of the
/// offending entry (e.g. "B" or "family.d").
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& detail)
      : Error(Errc::kSchemaError, "schema error at \"" + field + "\": " + detail),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace canondual
