#pragma once

#include <stdexcept>
#include <string>

namespace nvp {

struct InvalidGeoPoint : std::invalid_argument {
    explicit InvalidGeoPoint(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SingularCovariance : std::runtime_error {
    explicit SingularCovariance(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DanglingReference : std::runtime_error {
    explicit DanglingReference(const std::string& msg) : std::runtime_error(msg) {}
};

struct NoPathError : std::runtime_error {
    explicit NoPathError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateGround : std::runtime_error {
    explicit DegenerateGround(const std::string& msg) : std::runtime_error(msg) {}
};

// Scenario validation collects every offending field into one message.
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nvp
