#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace qmp {

struct CapacityError : std::runtime_error { using std::runtime_error::runtime_error; };
struct DomainError : std::runtime_error { using std::runtime_error::runtime_error; };
struct ShapeError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NumericError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NormalizationError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoSolutionsError : std::runtime_error { using std::runtime_error::runtime_error; };
struct EmptyFreeSpaceError : std::runtime_error { using std::runtime_error::runtime_error; };
struct SamplingError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoPathFoundError : std::runtime_error { using std::runtime_error::runtime_error; };
struct ConfigError : std::runtime_error { using std::runtime_error::runtime_error; };

// Nonlinear fit ran out of iterations; carries the best point reached.
struct FitFailure : std::runtime_error {
    std::vector<double> best_coeffs;
    double best_r2;
    FitFailure(const std::string& msg, std::vector<double> coeffs, double r2)
        : std::runtime_error(msg), best_coeffs(std::move(coeffs)), best_r2(r2) {}
};

} // namespace qmp
