#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmp/dynamics.hpp"
#include "qmp/errors.hpp"
#include "qmp/estimator.hpp"
#include "qmp/lattice.hpp"
#include "qmp/qsearch.hpp"
#include "qmp/rng.hpp"

namespace qmp {

struct TreeNode {
    Vec2 state;
    int parent = -1; // -1 marks the root
    Trajectory traj; // tracking run from parent state, empty for the root
};

struct Tree {
    Vec2 root_state;
    std::vector<TreeNode> nodes;

    int size() const { return int(nodes.size()); }
};

struct PlannerReport {
    uint64_t seed = 0;
    uint64_t oracle_calls = 0;
    uint64_t counting_cost = 0;
    int nodes_added = 0;
    int retries = 0;
};

enum class IterEstimate { P1, P2, Exact };
enum class SamplerMode { Uniform, L1Boundary, L1Ball };

// candidate generator for pair databases; L1 modes pick a uniformly random
// tree node as the center of the L1 sphere/ball of radius l1_radius
struct Sampler {
    SamplerMode mode = SamplerMode::Uniform;
    double l1_radius = 0.0;
};

struct PlannerConfig {
    int n = 9;               // database size exponent
    int max_retries = 50;    // per node / per path
    bool final_check = true;
    IterEstimate iter_estimate = IterEstimate::P1;
    // optional [1/2^n, 0.75] clamp on the estimated p driving the loop
    // count; off reproduces the published algorithm text as-is
    bool clamp_p = false;
    double p2_factor = 1.0;  // effective-length factor when iter_estimate = P2
    Sampler sampler{};
    PStarModel pstar = pstar_paper();
    LinearPlannerConfig dyn{};
    int qfps_k = 8;
    double qfps_sigma = -1.0;          // < 0 means L/6
    long long rrt_sample_budget = 1000000;
};

struct PathDatabase {
    std::vector<std::vector<Vec2>> entries;
    OracleMask mask;
};

struct PairDatabase {
    std::vector<Vec2> candidates;
    std::vector<int> parents;
    OracleMask mask;
};

// tree growth stalled before reaching the node target; carries the partial
// tree and its counters
struct PartialTreeError : std::runtime_error {
    Tree tree;
    PlannerReport report;
    PartialTreeError(const std::string& msg, Tree t, PlannerReport r)
        : std::runtime_error(msg), tree(std::move(t)), report(r) {}
};

// q-FPS retry budget exhausted; carries the counters
struct QfpsError : NoPathFoundError {
    PlannerReport report;
    QfpsError(const std::string& msg, PlannerReport r) : NoPathFoundError(msg), report(r) {}
};

std::vector<Vec2> random_path(const Vec2& x0, const Vec2& xG, int k, double sigma,
                              const Lattice& lat, Rng& g);

int nearest_parent(const Tree& tree, const Vec2& point);

PathDatabase build_path_database(const Vec2& x0, const Vec2& xG, int n, const Lattice& lat,
                                 const PlannerConfig& cfg, Rng& g);

PairDatabase build_pair_database(const Tree& tree, const Lattice& lat, const ComponentLabels& cl,
                                 int n, const PlannerConfig& cfg, Rng& g);

// ground-truth re-verification of a measured entry, one oracle call
bool final_check(OracleMask& mask, std::size_t idx);

struct QfpsResult {
    std::vector<Vec2> path;
    PlannerReport report;
};

QfpsResult qfps(const Vec2& x0, const Vec2& xG, int n, const Lattice& lat,
                const PlannerConfig& cfg, Rng& g);

struct TreeResult {
    Tree tree;
    PlannerReport report;
};

TreeResult qrrt(const Vec2& x0, int n, int M, const Lattice& lat, const PlannerConfig& cfg, Rng& g);
TreeResult classical_rrt(const Vec2& x0, int M, const Lattice& lat, const PlannerConfig& cfg, Rng& g);

// re-run the reachability predicate on every stored edge; returns the number
// of violations
int verify_tree(const Tree& tree, const Lattice& lat, const ComponentLabels& cl,
                const LinearPlannerConfig& dyn);

std::string tree_csv(const Tree& tree);
void save_tree(const Tree& tree, const std::string& path);
Tree load_tree(const std::string& path);

std::string report_csv_header();
std::vector<std::string> report_csv_row(const PlannerReport& rep, const std::string& planner,
                                        int L, double r, int n, int M);

} // namespace qmp
