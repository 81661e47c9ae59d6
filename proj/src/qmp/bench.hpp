#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qmp/config.hpp"
#include "qmp/estimator.hpp"
#include "qmp/planners.hpp"

namespace qmp {
namespace bench {

struct ExperimentInfo {
    std::string id;
    uint64_t default_seed;
    std::string description;
};

const std::vector<ExperimentInfo>& known_experiments();

// per-iteration amplified good-state probability vs the closed form
struct AmplitudeRow {
    int i;
    double sim;
    double closed;
};
std::vector<AmplitudeRow> amplitude_table(int n, uint64_t m, int i_max);

struct ProbingResult {
    uint64_t N = 0, m = 0;
    long long trials = 0;
    double mean_probes = 0.0;
    double std_err = 0.0;
};
// sequential scan from a uniform start over evenly spaced marks
ProbingResult classical_probing(uint64_t N, uint64_t m, long long trials, uint64_t seed);

struct BornResult {
    long long shots = 0;
    long long marked = 0;
    double freq = 0.0;
    double expected = 0.0;
    double std_err = 0.0;
};
BornResult born_check(int n, uint64_t m, long long shots, uint64_t seed);

// one planner run within a paired comparison
struct TrialRow {
    int point = 0;
    int trial = 0;
    uint64_t seed = 0;
    std::string planner;
    int L = 0;
    double r = 0.0;
    int n = 0;
    int M = 0;
    PlannerReport report{};
    std::string status = "ok";
    double wall_ms = 0.0;
};

struct CompareParams {
    int L = 72;
    std::vector<double> rs = {0.45, 0.5, 0.55, 0.6, 0.65, 0.7};
    int M = 11;
    int n = 9;
    int trials = 50;
    PlannerConfig planner{};
};

// q-RRT vs classical RRT on identical lattices and roots
std::vector<TrialRow> oracle_comparison(const CompareParams& p, uint64_t base_seed);
// q-RRT at two database sizes on identical lattices and roots
std::vector<TrialRow> dbsize_comparison(const CompareParams& p, int n_lo, int n_hi,
                                        uint64_t base_seed);

std::vector<ConnectivitySample> pstar_grid(const std::vector<double>& rs,
                                           const std::vector<int>& Ls, long long trials,
                                           int lattices, bool periodic, uint64_t base_seed);

// solution fraction of a fresh database on a grown M-node tree vs the bound
struct P2Row {
    int rep = 0;
    uint64_t seed = 0;
    int tree_size = 0;
    double fraction = 0.0;
    double pstar = 0.0;
    double p2star = 0.0;
    std::string status = "ok";
};
std::vector<P2Row> p2star_validation(int reps, int L, double r, int M, int n, uint64_t base_seed);

std::vector<L1SweepPoint> l1_sweep_bins(const std::vector<double>& rs, int L,
                                        const std::vector<double>& Ds, int lattices, int centers,
                                        uint64_t base_seed);

struct BudgetRow {
    int n_x = 0;
    double D = 0.0;
    double target = 0.0;
    double achieved = 0.0;
    double rel_err = 0.0;
    int databases = 0;
};
std::vector<BudgetRow> l1_budget(const std::vector<int>& budgets, double r, int L, int db_exp,
                                 int databases, uint64_t base_seed);

struct BridgeRow {
    uint64_t N = 0, m = 0;
    double frac = 0.0;
    int i_used = 0;
    long long shots = 0;
    long long unmarked = 0;
    double freq = 0.0;
    double predicted = 0.0; // closed form at the integer count used
    double std_err = 0.0;
    double pbad = 0.0;      // real-optimum form
    double linear = 0.0;
};
std::vector<BridgeRow> error_bridge(const std::vector<int>& ns, long long shots,
                                    uint64_t base_seed);

struct CompletenessRow {
    int run = 0;
    uint64_t seed = 0;
    double target_x = 0.0, target_y = 0.0;
    int nodes = 0;
    int hit = 0;
    int hit_node = -1;
    int verify_violations = 0;
    std::string status = "ok";
};
std::vector<CompletenessRow> completeness(int runs, int L, double r, int n, int node_budget,
                                          uint64_t base_seed);

LinearPlannerConfig dynamics_from_config(const Config& cfg);
PlannerConfig planner_from_config(const Config& cfg);

// dispatch an experiment id: runs it, writes <out> plus <out>.meta.txt,
// returns 0 (clean) or 3 (partial rows present)
int run(const std::string& id, const Config& cfg, const std::string& out_path, bool fast);

} // namespace bench
} // namespace qmp
