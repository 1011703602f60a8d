#pragma once

#include <stdexcept>
#include <string>

namespace pam {

// Invalid user input (bad model parameters, malformed config). CLI exit code 2.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation refused because it would exceed a configured resource cap.
// CLI exit code 4.
struct resource_cap_error : std::runtime_error {
    explicit resource_cap_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An engine produced a non-finite value or failed internally. CLI exit code 3.
struct engine_error : std::runtime_error {
    explicit engine_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Pointwise evaluation of a kernel at its singularity.
struct singularity_error : std::domain_error {
    explicit singularity_error(const std::string& msg) : std::domain_error(msg) {}
};

} // namespace pam
