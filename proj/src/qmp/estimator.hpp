#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmp/lattice.hpp"
#include "qmp/rng.hpp"

namespace qmp {

// logistic connectivity surface p*(r, L)
struct PStarModel {
    double a, b, c, d, f;
};

PStarModel pstar_paper();

double p_star_raw(const PStarModel& m, double r, double L);
// clamped to (1/2^16, 1]
double p_star(const PStarModel& m, double r, double L);
// upper bound via the maximally-spread effective length factor*L/sqrt(M);
// factor 3 is the theorem's constant, factor 1 matches the planner's loop text
double p2_star(const PStarModel& m, double r, double L, int M, double factor = 3.0);

// exponential decay of connectivity with L1 distance
struct L1Model {
    double a, b, c;
    double L_fit; // side length the data was generated at
};

L1Model l1_paper_L72();

double l1_probability_raw(const L1Model& m, double r, double D);
// clamped to (0, 1]
double l1_probability(const L1Model& m, double r, double D);
// invert the decay model for an oracle budget; negative solutions clamp to 0
double l1_distance_for_budget(const L1Model& m, int n_x, double r);

struct ConnectivitySample {
    double r = 0.0;
    int L = 0;
    bool periodic = false;
    long long trials = 0; // per lattice
    int lattice_count = 0;
    double p_hat = 0.0;
    double std_err = 0.0;
    long long regenerated = 0; // empty-free-set lattices replaced
};

// x1 ~ uniform over free cells, x2 ~ uniform over the whole box; tallies
// same-component hits across lattice_count independent lattices
ConnectivitySample monte_carlo_connectivity(double r, int L, long long trials,
                                            int lattice_count, bool periodic, uint64_t seed);

enum class L1SampleMode { Boundary, Ball };

// point at (boundary mode) or within (ball mode) L1 distance D of center,
// resampled up to 100 times to stay inside the box
Vec2 sample_at_l1(const Lattice& lat, const Vec2& center, double D, L1SampleMode mode, Rng& g);

// connectivity vs L1 distance, estimated by quadrature over the L1 sphere:
// per center, the connected fraction of in-box sphere points, averaged over
// free-cell centers shared across all D values
struct L1SweepPoint {
    double r = 0.0;
    double D = 0.0;
    double p_hat = 0.0;
    long long centers = 0;
};

std::vector<L1SweepPoint> l1_sweep(double r, int L, const std::vector<double>& Ds,
                                   int lattice_count, int centers_per_lattice, uint64_t seed,
                                   double pts_per_unit = 8.0);

struct PStarFit {
    PStarModel model{};
    double r2 = 0.0;
    int iterations = 0;
};

struct L1Fit {
    L1Model model{};
    double r2 = 0.0;
    int iterations = 0;
};

struct L1Point {
    double r, D, p;
};

PStarFit fit_pstar(const std::vector<ConnectivitySample>& data, const PStarModel& init);
L1Fit fit_l1(const std::vector<L1Point>& data, const L1Model& init);

struct ModelPreset {
    std::string name;
    std::string kind; // "pstar" or "l1"
    std::vector<double> coeffs;
    double r2 = 0.0;
    std::string source;
};

ModelPreset builtin_preset(const std::string& name);
PStarModel pstar_from_preset(const ModelPreset& p);
L1Model l1_from_preset(const ModelPreset& p);
void save_presets(const std::string& path, const std::vector<ModelPreset>& presets);
std::vector<ModelPreset> load_presets(const std::string& path);

} // namespace qmp
