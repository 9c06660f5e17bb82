#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ttfilter {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Thrown when an experiment/config description is inconsistent or malformed.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when an iteration fails to converge, a density collapses, or a
/// rank cap is exceeded -- anything that is a runtime numerical failure
/// rather than a misuse of the API.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace ttfilter
