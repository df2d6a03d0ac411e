#include "samossa/errors.hpp"

namespace samossa {

Error::Error(std::string_view kind, const std::string& what)
    : std::runtime_error(what), kind_(kind) {}

}  // namespace samossa
