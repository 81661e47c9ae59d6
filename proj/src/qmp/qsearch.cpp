#include "qmp/qsearch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmp/errors.hpp"

namespace qmp {

QuantumRegister uniform_superposition(int n) {
    if (n < 1 || n > kRegisterCap) throw CapacityError("register width outside [1,16]");
    QuantumRegister reg;
    reg.n = n;
    reg.amp.assign(std::size_t(1) << n, std::pow(2.0, -0.5 * n));
    return reg;
}

uint64_t OracleMask::m() const {
    return uint64_t(std::count(truth.begin(), truth.end(), uint8_t(1)));
}

void grover_iterate(QuantumRegister& reg, OracleMask& mask) {
    if (reg.amp.size() != mask.truth.size()) throw ShapeError("register/mask length mismatch");
    const std::size_t N = reg.amp.size();
    double sum = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        if (mask.truth[k]) reg.amp[k] = -reg.amp[k];
        sum += reg.amp[k];
    }
    const double two_mean = 2.0 * sum / double(N);
    for (std::size_t k = 0; k < N; ++k) reg.amp[k] = two_mean - reg.amp[k];
    ++mask.calls;
}

void amplify(QuantumRegister& reg, OracleMask& mask, int iterations) {
    for (int i = 0; i < iterations; ++i) grover_iterate(reg, mask);
}

int optimal_iterations(uint64_t N, uint64_t m) {
    if (m == 0) throw NoSolutionsError("no solutions: iteration count undefined");
    if (m > N) throw DomainError("m exceeds N");
    return int(std::floor(0.25 * M_PI * std::sqrt(double(N) / double(m))));
}

double marked_probability(const QuantumRegister& reg, const OracleMask& mask) {
    if (reg.amp.size() != mask.truth.size()) throw ShapeError("register/mask length mismatch");
    double p = 0.0;
    for (std::size_t k = 0; k < reg.amp.size(); ++k)
        if (mask.truth[k]) p += reg.amp[k] * reg.amp[k];
    return p;
}

namespace {
double norm_sq(const QuantumRegister& reg) {
    double s = 0.0;
    for (double a : reg.amp) s += a * a;
    return s;
}
} // namespace

std::size_t measure(const QuantumRegister& reg, Rng& g) {
    const double total = norm_sq(reg);
    if (std::fabs(total - 1.0) > 1e-6) throw NormalizationError("register norm drifted");
    const double u = runif(g) * total;
    double acc = 0.0;
    for (std::size_t k = 0; k < reg.amp.size(); ++k) {
        acc += reg.amp[k] * reg.amp[k];
        if (u < acc) return k;
    }
    return reg.amp.size() - 1;
}

std::vector<std::size_t> measure_many(const QuantumRegister& reg, std::size_t count, Rng& g) {
    const double total = norm_sq(reg);
    if (std::fabs(total - 1.0) > 1e-6) throw NormalizationError("register norm drifted");
    std::vector<double> cdf(reg.amp.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < reg.amp.size(); ++k) {
        acc += reg.amp[k] * reg.amp[k];
        cdf[k] = acc;
    }
    std::vector<std::size_t> out(count);
    for (std::size_t t = 0; t < count; ++t) {
        const double u = runif(g) * total;
        out[t] = std::size_t(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (out[t] >= reg.amp.size()) out[t] = reg.amp.size() - 1;
    }
    return out;
}

uint64_t count_solutions(const OracleMask& mask, uint64_t& counting_cost) {
    counting_cost += mask.truth.size();
    return mask.m();
}

uint64_t count_solutions_noisy(const OracleMask& mask, double epsilon, uint64_t& counting_cost) {
    counting_cost += mask.truth.size();
    double m_hat = std::round(double(mask.m()) * (1.0 + epsilon));
    m_hat = std::clamp(m_hat, 0.0, double(mask.truth.size()));
    return uint64_t(m_hat);
}

} // namespace qmp
