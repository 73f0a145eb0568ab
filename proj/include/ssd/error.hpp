#pragma once

#include <stdexcept>
#include <string>

namespace ssd {

// Malformed input: bad config, unparseable file, precondition violated by the caller.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ssd
