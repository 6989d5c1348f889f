#pragma once

#include <stdexcept>
#include <string>

namespace hyperperiods {

// Every failure raised by the library carries a module-qualified code such as
// "hypercurve.DuplicatePoint" so that scripts can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message);

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace hyperperiods
