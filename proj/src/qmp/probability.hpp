#pragma once
#include <cstdint>

namespace qmp {

// Closed-form error calculus for amplitude amplification over a database of
// N entries with m solutions. theta = arcsin(sqrt(m/N)).

double success_probability(uint64_t N, uint64_t m, double i); // sin^2((2i+1) theta), 0 for m=0

// bad-measurement probability at the real-valued optimal iteration count
double p_bad(uint64_t N, uint64_t m);              // m=0 returns 1
double p_bad_at(uint64_t N, uint64_t m, int i);    // integer-iteration companion form
double p_bad_limit(double r);                      // large-N limit at solution fraction r

double p_any_bad_tree(double r, int M);            // 1 - (1 - p_bad_limit)^M
double p_any_bad_path(double r, int path_len);

struct OracleErrorRates {
    double q = 0.0; // false positive
    double v = 0.0; // false negative
};

double p_good_with_errors(uint64_t N, uint64_t m, const OracleErrorRates& rates);
double p_good_limit(double r, const OracleErrorRates& rates);
double p_any_bad_tree_err(double r, int M, const OracleErrorRates& rates);
double p_any_bad_path_err(double r, int path_len, const OracleErrorRates& rates);

// linear least-squares surrogate for p_bad over the fitted fraction domain
inline constexpr double kLinearDomainLo = 0.04;
inline constexpr double kLinearDomainHi = 0.75;
double linear_approx_pbad(double x); // 1.251 x - 0.0159
bool linear_approx_in_domain(double x);

} // namespace qmp
