#include "qmp/probability.hpp"

#include <cmath>

#include "qmp/errors.hpp"

namespace qmp {

namespace {
// snap floating residue onto [0,1]
double clamp01(double p) {
    if (p < 0.0 && p > -1e-12) return 0.0;
    if (p > 1.0 && p < 1.0 + 1e-12) return 1.0;
    return p;
}

double bad_at_real(double frac, double i) {
    const double theta = std::asin(std::sqrt(frac));
    const double s = std::sin((2.0 * i + 1.0) * theta);
    return clamp01(1.0 - s * s);
}
} // namespace

double success_probability(uint64_t N, uint64_t m, double i) {
    if (N == 0 || m > N) throw DomainError("bad (N, m)");
    if (m == 0) return 0.0;
    const double theta = std::asin(std::sqrt(double(m) / double(N)));
    const double s = std::sin((2.0 * i + 1.0) * theta);
    return clamp01(s * s);
}

double p_bad(uint64_t N, uint64_t m) {
    if (N == 0 || m > N) throw DomainError("bad (N, m)");
    if (m == 0) return 1.0;
    const double frac = double(m) / double(N);
    // real-valued optimum (pi/2) sqrt(N/m): (2 i + 1) theta with
    // i = (pi/4) sqrt(N/m) - 1/2 gives argument ((pi/2) sqrt(N/m) + ... )
    // evaluated literally as published
    const double i_real = 0.5 * ((M_PI / 2.0) * std::sqrt(1.0 / frac) + 1.0) - 0.5;
    return bad_at_real(frac, i_real);
}

double p_bad_at(uint64_t N, uint64_t m, int i) {
    return clamp01(1.0 - success_probability(N, m, double(i)));
}

double p_bad_limit(double r) {
    if (r <= 0.0 || r >= 1.0) throw DomainError("p_bad_limit needs 0 < r < 1");
    const double theta = std::asin(std::sqrt(r));
    const double s = std::sin(((M_PI / 2.0) * std::sqrt(1.0 / r) + 1.0) * theta);
    return clamp01(1.0 - s * s);
}

double p_any_bad_tree(double r, int M) {
    if (M < 0) throw DomainError("negative tree size");
    if (M == 0) return 0.0;
    return clamp01(1.0 - std::pow(1.0 - p_bad_limit(r), double(M)));
}

double p_any_bad_path(double r, int path_len) { return p_any_bad_tree(r, path_len); }

double p_good_with_errors(uint64_t N, uint64_t m, const OracleErrorRates& rates) {
    const double pe = p_bad(N, m);
    return clamp01((-1.0 + rates.q + rates.v) * pe + 1.0 - rates.q);
}

double p_good_limit(double r, const OracleErrorRates& rates) {
    const double pe = p_bad_limit(r);
    return clamp01((-1.0 + rates.q + rates.v) * pe + 1.0 - rates.q);
}

double p_any_bad_tree_err(double r, int M, const OracleErrorRates& rates) {
    if (M < 0) throw DomainError("negative tree size");
    if (M == 0) return 0.0;
    return clamp01(1.0 - std::pow(p_good_limit(r, rates), double(M)));
}

double p_any_bad_path_err(double r, int path_len, const OracleErrorRates& rates) {
    return p_any_bad_tree_err(r, path_len, rates);
}

double linear_approx_pbad(double x) { return 1.251 * x - 0.0159; }

bool linear_approx_in_domain(double x) {
    return x >= kLinearDomainLo && x <= kLinearDomainHi;
}

} // namespace qmp
