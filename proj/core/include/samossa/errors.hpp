#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace samossa {

/// Base class for every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string_view kind, const std::string& what);
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define SAMOSSA_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what) : Error(#Name, what) {}     \
  }

SAMOSSA_DEFINE_ERROR(IngestError);
SAMOSSA_DEFINE_ERROR(ParseError);
SAMOSSA_DEFINE_ERROR(SplitError);
SAMOSSA_DEFINE_ERROR(ShapeError);
SAMOSSA_DEFINE_ERROR(IndexError);
SAMOSSA_DEFINE_ERROR(RankError);
SAMOSSA_DEFINE_ERROR(FitError);
SAMOSSA_DEFINE_ERROR(NonStationaryError);
SAMOSSA_DEFINE_ERROR(DegenerateRootsError);
SAMOSSA_DEFINE_ERROR(StateError);
SAMOSSA_DEFINE_ERROR(PersistError);
SAMOSSA_DEFINE_ERROR(SpecError);
SAMOSSA_DEFINE_ERROR(MetricError);
SAMOSSA_DEFINE_ERROR(SearchError);

#undef SAMOSSA_DEFINE_ERROR

}  // namespace samossa
