#pragma once
#include <cstdint>
#include <vector>

#include "qmp/rng.hpp"

namespace qmp {

inline constexpr int kRegisterCap = 16;

// Real amplitudes are enough: the uniform start, the phase oracle and the
// diffusion all preserve realness.
struct QuantumRegister {
    int n = 0;
    std::vector<double> amp;

    std::size_t size() const { return amp.size(); }
};

QuantumRegister uniform_superposition(int n);

struct OracleMask {
    std::vector<uint8_t> truth;
    uint64_t calls = 0; // grover iterates charged against this mask

    uint64_t m() const;
};

// one application of Q: phase flip marked entries, invert about the mean
void grover_iterate(QuantumRegister& reg, OracleMask& mask);
void amplify(QuantumRegister& reg, OracleMask& mask, int iterations);

int optimal_iterations(uint64_t N, uint64_t m); // floor(pi/4 sqrt(N/m))

double marked_probability(const QuantumRegister& reg, const OracleMask& mask);

// Born rule single shot
std::size_t measure(const QuantumRegister& reg, Rng& g);
// repeated sampling of the same amplitude vector (simulation convenience)
std::vector<std::size_t> measure_many(const QuantumRegister& reg, std::size_t count, Rng& g);

// Quantum Counting surrogate: exact count of the truth mask. Does not touch
// mask.calls; the consultation cost (one pass over the mask) is tallied in
// the separate counting ledger.
uint64_t count_solutions(const OracleMask& mask, uint64_t& counting_cost);
uint64_t count_solutions_noisy(const OracleMask& mask, double epsilon, uint64_t& counting_cost);

} // namespace qmp
