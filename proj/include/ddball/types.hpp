#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddball {

using Vec3 = Eigen::Vector3d;
using Vec = Eigen::VectorXd;
using Index = std::ptrdiff_t;
using IndexList = std::vector<int>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input; line and column are 1-based, 0 when not applicable.
struct ParseError : Error {
    ParseError(const std::string& msg, int line, int column)
        : Error(msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line(line), column(column) {}
    int line;
    int column;
};

// Evaluation outside the set where a quantity is defined.
struct DomainError : Error {
    using Error::Error;
};

// A configured size cap would be exceeded.
struct ResourceError : Error {
    using Error::Error;
};

// A geometric assumption (connectivity, overlap, cone condition) fails.
struct AssumptionError : Error {
    using Error::Error;
};

// Internally inconsistent inputs, e.g. a missing indicator that must exist.
struct InconsistencyError : Error {
    using Error::Error;
};

}  // namespace ddball
