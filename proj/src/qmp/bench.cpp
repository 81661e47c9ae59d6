#include "qmp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <thread>

#include "qmp/csvio.hpp"
#include "qmp/dynamics.hpp"
#include "qmp/errors.hpp"
#include "qmp/probability.hpp"
#include "qmp/qsearch.hpp"

namespace qmp {
namespace bench {

namespace {

// stream tags keeping the per-trial substreams apart
constexpr uint64_t kLatTag = 0xa1b2c3d4e5f60718ULL;
constexpr uint64_t kRootTag = 0x1122334455667788ULL;
constexpr uint64_t kQrrtTag = 0x517b1c24d5a5f00dULL;
constexpr uint64_t kRrtTag = 0x6e0aa5c3b91f2e47ULL;
constexpr uint64_t kDbTag = 0x8d2f9a4be1c7035aULL;
constexpr uint64_t kRunTag = 0x3c5e7a9bdf102468ULL;

// bounded worker pool; tasks are claimed dynamically but results land in
// index-addressed slots, so output order never depends on scheduling
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = std::min<std::size_t>(std::min<unsigned>(hw ? hw : 1, 8), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errs(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= count) break;
                    fn(i);
                }
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

Lattice fresh_lattice(int L, double r, uint64_t trial_seed, bool periodic, ComponentLabels& cl) {
    for (uint64_t attempt = 0;; ++attempt) {
        Lattice lat = generate_lattice(2, L, r, splitmix64(trial_seed ^ kLatTag) + attempt, periodic);
        cl = components(lat);
        if (!cl.free_cells.empty()) return lat;
    }
}

OracleMask prefix_mask(std::size_t N, uint64_t m) {
    OracleMask mask;
    mask.truth.assign(N, 0);
    for (uint64_t k = 0; k < m; ++k) mask.truth[k] = 1;
    return mask;
}

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int iterations_for(double p) { return int(std::floor((M_PI / 4.0) * std::sqrt(1.0 / p))); }

} // namespace

const std::vector<ExperimentInfo>& known_experiments() {
    static const std::vector<ExperimentInfo> table = {
        {"fig-amplitudes", 201, "good-state probability per amplification iteration (N=1024, m=5)"},
        {"classical-probing", 202, "mean sequential probes to hit 1 of 5 marked among 1024"},
        {"born", 203, "measurement frequency of an amplified register vs its amplitudes"},
        {"fig-pstar", 101, "Monte-Carlo connectivity over the (r, L) grid"},
        {"fig-p2star", 105, "database solution fraction on 5-node trees vs the spread-tree bound"},
        {"fig-oracle-vs-r", 106, "paired q-RRT vs RRT oracle calls across concentrations"},
        {"fig-dbsize", 107, "paired q-RRT oracle calls at database sizes 2^8 and 2^9"},
        {"l1-sweep", 108, "connectivity vs L1 distance per concentration bin"},
        {"l1-budget", 109, "achieved database fraction vs the budget-selected L1 distance"},
        {"error-bridge", 209, "measured error rates vs the closed-form error calculus"},
        {"completeness", 210, "q-RRT target-reaching rate on a fixed small lattice"},
    };
    return table;
}

std::vector<AmplitudeRow> amplitude_table(int n, uint64_t m, int i_max) {
    QuantumRegister reg = uniform_superposition(n);
    OracleMask mask = prefix_mask(reg.size(), m);
    const uint64_t N = reg.size();
    std::vector<AmplitudeRow> rows;
    rows.reserve(std::size_t(i_max) + 1);
    rows.push_back({0, marked_probability(reg, mask), success_probability(N, m, 0.0)});
    for (int i = 1; i <= i_max; ++i) {
        grover_iterate(reg, mask);
        rows.push_back({i, marked_probability(reg, mask), success_probability(N, m, double(i))});
    }
    return rows;
}

ProbingResult classical_probing(uint64_t N, uint64_t m, long long trials, uint64_t seed) {
    if (m == 0 || m > N) throw DomainError("bad (N, m)");
    if (trials < 1) throw DomainError("trials must be >= 1");
    std::vector<uint8_t> marked(N, 0);
    for (uint64_t k = 0; k < m; ++k) marked[(k * N) / m] = 1;
    Rng g(seed);
    double sum = 0.0, sumsq = 0.0;
    for (long long t = 0; t < trials; ++t) {
        uint64_t idx = runif_index(g, N);
        long long probes = 1;
        while (!marked[idx]) {
            idx = idx + 1 == N ? 0 : idx + 1;
            ++probes;
        }
        sum += double(probes);
        sumsq += double(probes) * double(probes);
    }
    ProbingResult res;
    res.N = N;
    res.m = m;
    res.trials = trials;
    res.mean_probes = sum / double(trials);
    const double var = trials > 1
                           ? (sumsq - sum * sum / double(trials)) / double(trials - 1)
                           : 0.0;
    res.std_err = std::sqrt(std::max(var, 0.0) / double(trials));
    return res;
}

BornResult born_check(int n, uint64_t m, long long shots, uint64_t seed) {
    QuantumRegister reg = uniform_superposition(n);
    OracleMask mask = prefix_mask(reg.size(), m);
    amplify(reg, mask, optimal_iterations(reg.size(), m));
    BornResult res;
    res.shots = shots;
    res.expected = marked_probability(reg, mask);
    Rng g(seed);
    for (std::size_t idx : measure_many(reg, std::size_t(shots), g))
        if (mask.truth[idx]) ++res.marked;
    res.freq = double(res.marked) / double(shots);
    res.std_err = std::sqrt(res.expected * (1.0 - res.expected) / double(shots));
    return res;
}

namespace {
TrialRow run_tree_trial(const char* planner, bool quantum, int n, const CompareParams& p,
                        std::size_t point, int trial, uint64_t trial_seed, const Lattice& lat,
                        const Vec2& root, uint64_t tag) {
    TrialRow row;
    row.point = int(point);
    row.trial = trial;
    row.seed = trial_seed;
    row.planner = planner;
    row.L = p.L;
    row.r = lat.r;
    row.n = quantum ? n : 0;
    row.M = p.M;
    Rng g(splitmix64(trial_seed ^ tag));
    const auto t0 = std::chrono::steady_clock::now();
    try {
        TreeResult res = quantum ? qrrt(root, n, p.M, lat, p.planner, g)
                                 : classical_rrt(root, p.M, lat, p.planner, g);
        row.report = res.report;
    } catch (const PartialTreeError& e) {
        row.report = e.report;
        row.status = "partial";
    }
    row.wall_ms = elapsed_ms(t0);
    row.report.seed = trial_seed;
    return row;
}
} // namespace

std::vector<TrialRow> oracle_comparison(const CompareParams& p, uint64_t base_seed) {
    const std::size_t tasks = p.rs.size() * std::size_t(p.trials);
    std::vector<TrialRow> rows(tasks * 2);
    parallel_for(tasks, [&](std::size_t task) {
        const std::size_t pt = task / std::size_t(p.trials);
        const int trial = int(task % std::size_t(p.trials));
        const uint64_t ts = mix_seed(base_seed, pt, uint64_t(trial));
        ComponentLabels cl;
        const Lattice lat = fresh_lattice(p.L, p.rs[pt], ts, false, cl);
        Rng groot(splitmix64(ts ^ kRootTag));
        const Vec2 root = sample_component(lat, cl, cl.largest, groot);
        rows[2 * task] = run_tree_trial("qrrt", true, p.n, p, pt, trial, ts, lat, root, kQrrtTag);
        rows[2 * task + 1] = run_tree_trial("rrt", false, 0, p, pt, trial, ts, lat, root, kRrtTag);
    });
    return rows;
}

std::vector<TrialRow> dbsize_comparison(const CompareParams& p, int n_lo, int n_hi,
                                        uint64_t base_seed) {
    const std::size_t tasks = p.rs.size() * std::size_t(p.trials);
    std::vector<TrialRow> rows(tasks * 2);
    parallel_for(tasks, [&](std::size_t task) {
        const std::size_t pt = task / std::size_t(p.trials);
        const int trial = int(task % std::size_t(p.trials));
        const uint64_t ts = mix_seed(base_seed, pt, uint64_t(trial));
        ComponentLabels cl;
        const Lattice lat = fresh_lattice(p.L, p.rs[pt], ts, false, cl);
        Rng groot(splitmix64(ts ^ kRootTag));
        const Vec2 root = sample_component(lat, cl, cl.largest, groot);
        rows[2 * task] =
            run_tree_trial("qrrt", true, n_lo, p, pt, trial, ts, lat, root, kQrrtTag ^ uint64_t(n_lo));
        rows[2 * task + 1] =
            run_tree_trial("qrrt", true, n_hi, p, pt, trial, ts, lat, root, kQrrtTag ^ uint64_t(n_hi));
    });
    return rows;
}

std::vector<ConnectivitySample> pstar_grid(const std::vector<double>& rs,
                                           const std::vector<int>& Ls, long long trials,
                                           int lattices, bool periodic, uint64_t base_seed) {
    std::vector<ConnectivitySample> rows(rs.size() * Ls.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        const double r = rs[i / Ls.size()];
        const int L = Ls[i % Ls.size()];
        rows[i] = monte_carlo_connectivity(r, L, trials, lattices, periodic,
                                           mix_seed(base_seed, i, 0));
    });
    return rows;
}

std::vector<P2Row> p2star_validation(int reps, int L, double r, int M, int n, uint64_t base_seed) {
    std::vector<P2Row> rows(static_cast<std::size_t>(reps));
    const PStarModel model = pstar_paper();
    parallel_for(rows.size(), [&](std::size_t k) {
        const uint64_t ts = mix_seed(base_seed, 0, k);
        ComponentLabels cl;
        const Lattice lat = fresh_lattice(L, r, ts, false, cl);
        Rng g(splitmix64(ts ^ kQrrtTag));
        const Vec2 root = sample_free(lat, cl, g);
        PlannerConfig pc;
        pc.n = n;

        P2Row row;
        row.rep = int(k);
        row.seed = ts;
        Tree tree;
        try {
            tree = qrrt(root, n, M, lat, pc, g).tree;
        } catch (const PartialTreeError& e) {
            tree = e.tree;
            row.status = "partial";
        }
        row.tree_size = tree.size();

        Rng gdb(splitmix64(ts ^ kDbTag));
        const PairDatabase db = build_pair_database(tree, lat, cl, n, pc, gdb);
        uint64_t cc = 0;
        row.fraction = double(count_solutions(db.mask, cc)) / double(db.mask.truth.size());
        row.pstar = p_star(model, r, double(L));
        row.p2star = p2_star(model, r, double(L), M, 3.0);
        rows[k] = row;
    });
    return rows;
}

std::vector<L1SweepPoint> l1_sweep_bins(const std::vector<double>& rs, int L,
                                        const std::vector<double>& Ds, int lattices, int centers,
                                        uint64_t base_seed) {
    std::vector<L1SweepPoint> rows(rs.size() * Ds.size());
    parallel_for(rs.size(), [&](std::size_t bin) {
        const auto pts =
            l1_sweep(rs[bin], L, Ds, lattices, centers, mix_seed(base_seed, bin, 0));
        std::copy(pts.begin(), pts.end(), rows.begin() + long(bin * Ds.size()));
    });
    return rows;
}

std::vector<BudgetRow> l1_budget(const std::vector<int>& budgets, double r, int L, int db_exp,
                                 int databases, uint64_t base_seed) {
    const L1Model model = l1_paper_L72();
    const long long db_size = 1LL << db_exp;
    std::vector<double> fractions(budgets.size() * std::size_t(databases));
    parallel_for(fractions.size(), [&](std::size_t task) {
        const std::size_t bi = task / std::size_t(databases);
        const uint64_t k = task % std::size_t(databases);
        const double D = l1_distance_for_budget(model, budgets[bi], r);
        const uint64_t ts = mix_seed(base_seed, bi, k);
        ComponentLabels cl;
        const Lattice lat = fresh_lattice(L, r, ts, false, cl);
        Rng g(splitmix64(ts ^ kDbTag));
        const Vec2 center = sample_free(lat, cl, g);
        long long hits = 0;
        for (long long j = 0; j < db_size; ++j) {
            const Vec2 p = sample_at_l1(lat, center, D, L1SampleMode::Boundary, g);
            if (same_component(lat, cl, center, p)) ++hits;
        }
        fractions[task] = double(hits) / double(db_size);
    });

    std::vector<BudgetRow> rows(budgets.size());
    for (std::size_t bi = 0; bi < budgets.size(); ++bi) {
        BudgetRow row;
        row.n_x = budgets[bi];
        row.D = l1_distance_for_budget(model, budgets[bi], r);
        row.target = (M_PI * M_PI) / (16.0 * double(budgets[bi]) * double(budgets[bi]));
        double sum = 0.0;
        for (int k = 0; k < databases; ++k) sum += fractions[bi * std::size_t(databases) + k];
        row.achieved = sum / double(databases);
        row.rel_err = std::fabs(row.achieved - row.target) / row.target;
        row.databases = databases;
        rows[bi] = row;
    }
    return rows;
}

std::vector<BridgeRow> error_bridge(const std::vector<int>& ns, long long shots,
                                    uint64_t base_seed) {
    struct Point {
        int n;
        uint64_t m;
    };
    std::vector<Point> points;
    for (int n : ns) {
        const uint64_t N = uint64_t(1) << n;
        const uint64_t m_lo = uint64_t(std::ceil(0.04 * double(N)));
        const uint64_t m_hi = uint64_t(std::floor(0.75 * double(N)));
        uint64_t prev = 0;
        for (int j = 0; j < 10; ++j) {
            const uint64_t m =
                uint64_t(std::llround(double(m_lo) + j * double(m_hi - m_lo) / 9.0));
            if (m == prev) continue;
            points.push_back({n, m});
            prev = m;
        }
    }

    std::vector<BridgeRow> rows(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const uint64_t N = uint64_t(1) << points[i].n;
        const uint64_t m = points[i].m;
        QuantumRegister reg = uniform_superposition(points[i].n);
        OracleMask mask = prefix_mask(reg.size(), m);
        const int i_used = optimal_iterations(N, m);
        amplify(reg, mask, i_used);
        Rng g(mix_seed(base_seed, i, 0));
        BridgeRow row;
        row.N = N;
        row.m = m;
        row.frac = double(m) / double(N);
        row.i_used = i_used;
        row.shots = shots;
        for (std::size_t idx : measure_many(reg, std::size_t(shots), g))
            if (!mask.truth[idx]) ++row.unmarked;
        row.freq = double(row.unmarked) / double(shots);
        row.predicted = p_bad_at(N, m, i_used);
        row.std_err = std::sqrt(row.predicted * (1.0 - row.predicted) / double(shots));
        row.pbad = p_bad(N, m);
        row.linear = linear_approx_pbad(row.frac);
        rows[i] = row;
    });
    return rows;
}

std::vector<CompletenessRow> completeness(int runs, int L, double r, int n, int node_budget,
                                          uint64_t base_seed) {
    std::vector<CompletenessRow> rows(static_cast<std::size_t>(runs));
    parallel_for(rows.size(), [&](std::size_t run_i) {
        const uint64_t ts = mix_seed(base_seed, 0, run_i);
        ComponentLabels cl;
        const Lattice lat = fresh_lattice(L, r, ts, false, cl);
        Rng g(splitmix64(ts ^ kRunTag));
        const Vec2 root = sample_component(lat, cl, cl.largest, g);

        std::vector<uint32_t> comp_cells;
        for (uint32_t idx : cl.free_cells)
            if (cl.label[idx] == cl.largest) comp_cells.push_back(idx);
        const uint32_t tcell = comp_cells[runif_index(g, comp_cells.size())];
        const Vec2 target{double(tcell % uint32_t(L)) + 0.5, double(tcell / uint32_t(L)) + 0.5};

        CompletenessRow row;
        row.run = int(run_i);
        row.seed = ts;
        row.target_x = target.x;
        row.target_y = target.y;

        PlannerConfig pc;
        pc.n = n;
        Tree tree;
        tree.root_state = root;
        tree.nodes.push_back(TreeNode{root, -1, Trajectory{}});
        int hit_node = dist2(root, target) <= 1.0 ? 0 : -1;
        int node_retries = 0;
        const double p = p_star(pc.pstar, lat.r, double(lat.L));
        const int iters = iterations_for(p);
        while (hit_node < 0 && tree.size() < node_budget) {
            PairDatabase db = build_pair_database(tree, lat, cl, n, pc, g);
            QuantumRegister reg = uniform_superposition(n);
            amplify(reg, db.mask, iters);
            const std::size_t idx = measure(reg, g);
            if (final_check(db.mask, idx)) {
                const int parent = db.parents[idx];
                const Vec2 cand = db.candidates[idx];
                Trajectory tr;
                try {
                    tr = track(tree.nodes[parent].state, cand, pc.dyn);
                } catch (const NumericError&) {
                }
                tree.nodes.push_back(TreeNode{cand, parent, tr});
                node_retries = 0;
                if (dist2(cand, target) <= 1.0) hit_node = tree.size() - 1;
            } else if (++node_retries > pc.max_retries) {
                row.status = "stalled";
                break;
            }
        }
        row.nodes = tree.size();
        row.hit = hit_node >= 0 ? 1 : 0;
        row.hit_node = hit_node;
        row.verify_violations = verify_tree(tree, lat, cl, pc.dyn);
        rows[run_i] = row;
    });
    return rows;
}

LinearPlannerConfig dynamics_from_config(const Config& cfg) {
    LinearPlannerConfig d;
    const auto a = cfg.vec4("dynamics.A", {d.A(0, 0), d.A(0, 1), d.A(1, 0), d.A(1, 1)});
    const auto b = cfg.vec4("dynamics.B", {d.B(0, 0), d.B(0, 1), d.B(1, 0), d.B(1, 1)});
    const auto k = cfg.vec4("dynamics.K", {d.K(0, 0), d.K(0, 1), d.K(1, 0), d.K(1, 1)});
    d.A << a[0], a[1], a[2], a[3];
    d.B << b[0], b[1], b[2], b[3];
    d.K << k[0], k[1], k[2], k[3];
    const std::string mode = cfg.str("dynamics.mode", "euler");
    if (mode == "euler")
        d.mode = DynMode::Euler;
    else if (mode == "literal-discrete")
        d.mode = DynMode::LiteralDiscrete;
    else
        throw ConfigError("dynamics.mode must be euler or literal-discrete");
    d.step_h = cfg.num("dynamics.step_h", d.step_h);
    d.eps = cfg.num("dynamics.eps", d.eps);
    d.max_steps = cfg.integer("dynamics.max_steps", d.max_steps);
    d.collide_ds = cfg.num("dynamics.collide_ds", d.collide_ds);
    return d;
}

PlannerConfig planner_from_config(const Config& cfg) {
    PlannerConfig p;
    p.n = cfg.integer("planner.n", p.n);
    p.max_retries = cfg.integer("planner.max-retries", p.max_retries);
    p.final_check = cfg.flag("planner.final-check", p.final_check);
    const std::string it = cfg.str("planner.iter-estimate", "p1");
    if (it == "p1")
        p.iter_estimate = IterEstimate::P1;
    else if (it == "p2")
        p.iter_estimate = IterEstimate::P2;
    else if (it == "exact")
        p.iter_estimate = IterEstimate::Exact;
    else
        throw ConfigError("planner.iter-estimate must be p1, p2 or exact");
    p.clamp_p = cfg.flag("planner.clamp-p", p.clamp_p);
    p.p2_factor = cfg.num("planner.p2-factor", p.p2_factor);
    const std::string sm = cfg.str("planner.sampler", "uniform");
    if (sm == "uniform")
        p.sampler.mode = SamplerMode::Uniform;
    else if (sm == "l1-boundary")
        p.sampler.mode = SamplerMode::L1Boundary;
    else if (sm == "l1-ball")
        p.sampler.mode = SamplerMode::L1Ball;
    else
        throw ConfigError("planner.sampler must be uniform, l1-boundary or l1-ball");
    p.sampler.l1_radius = cfg.num("planner.l1-radius", p.sampler.l1_radius);
    p.qfps_k = cfg.integer("planner.qfps-k", p.qfps_k);
    p.qfps_sigma = cfg.num("planner.qfps-sigma", p.qfps_sigma);
    p.rrt_sample_budget = cfg.integer("planner.rrt-budget", int(p.rrt_sample_budget));
    p.dyn = dynamics_from_config(cfg);
    return p;
}

namespace {

uint64_t default_seed_for(const std::string& id) {
    for (const auto& e : known_experiments())
        if (e.id == id) return e.default_seed;
    std::string ids;
    for (const auto& e : known_experiments()) ids += " " + e.id;
    throw ConfigError("unknown experiment id '" + id + "'; known ids:" + ids);
}

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

std::string trial_status_header() { return report_csv_header() + ",status"; }

std::vector<std::vector<std::string>> trial_rows_csv(const std::vector<TrialRow>& rows) {
    std::vector<std::vector<std::string>> out;
    out.reserve(rows.size());
    for (const auto& t : rows) {
        auto row = report_csv_row(t.report, t.planner, t.L, t.r, t.n, t.M);
        row.push_back(t.status);
        out.push_back(std::move(row));
    }
    return out;
}

struct RunOutput {
    std::string header;
    std::vector<std::vector<std::string>> rows;
    bool partial = false;
    std::vector<std::string> meta_extra;
};

RunOutput dispatch(const std::string& id, const Config& cfg, uint64_t seed, bool fast) {
    RunOutput out;
    if (id == "fig-amplitudes") {
        out.header = "i,p_good_sim,p_good_closed";
        for (const auto& row : amplitude_table(cfg.integer("bench.n", 10), cfg.u64("bench.m", 5),
                                               cfg.integer("bench.imax", 22)))
            out.rows.push_back({fmt_int(row.i), fmt_num(row.sim), fmt_num(row.closed)});
    } else if (id == "classical-probing") {
        const auto res = classical_probing(cfg.u64("bench.N", 1024), cfg.u64("bench.m", 5),
                                           cfg.integer("bench.trials", fast ? 2000 : 10000), seed);
        out.header = "N,m,trials,mean_probes,stderr";
        out.rows.push_back({std::to_string(res.N), std::to_string(res.m), fmt_int(res.trials),
                            fmt_num(res.mean_probes), fmt_num(res.std_err)});
    } else if (id == "born") {
        const auto res = born_check(cfg.integer("bench.n", 10), cfg.u64("bench.m", 5),
                                    cfg.integer("bench.shots", fast ? 20000 : 100000), seed);
        out.header = "shots,marked,freq,expected,stderr";
        out.rows.push_back({fmt_int(res.shots), fmt_int(res.marked), fmt_num(res.freq),
                            fmt_num(res.expected), fmt_num(res.std_err)});
    } else if (id == "fig-pstar") {
        std::vector<double> rs, def_rs;
        for (int i = 1; i <= 19; ++i) def_rs.push_back(0.05 * i);
        rs = cfg.num_list("bench.rs", def_rs);
        std::vector<int> Ls;
        for (double v : cfg.num_list("bench.Ls", {8, 16, 24, 32, 40, 48, 56, 64, 72, 80, 88}))
            Ls.push_back(int(v));
        const auto rows =
            pstar_grid(rs, Ls, cfg.integer("mc.trials", fast ? 200 : 1000),
                       cfg.integer("mc.lattices", fast ? 5 : 25), cfg.flag("mc.periodic", false),
                       seed);
        out.header = "r,L,periodic,trials,lattices,p_hat,stderr";
        for (const auto& s : rows)
            out.rows.push_back({fmt_num(s.r), fmt_int(s.L), s.periodic ? "1" : "0",
                                fmt_int(s.trials), fmt_int(s.lattice_count), fmt_num(s.p_hat),
                                fmt_num(s.std_err)});
    } else if (id == "fig-p2star") {
        const auto rows = p2star_validation(cfg.integer("bench.reps", fast ? 50 : 250),
                                            cfg.integer("bench.L", 32), cfg.num("bench.r", 0.6),
                                            cfg.integer("bench.M", 5), cfg.integer("bench.n", 11),
                                            seed);
        out.header = "rep,seed,tree_size,fraction,p_star,p2_star,status";
        for (const auto& row : rows) {
            out.rows.push_back({fmt_int(row.rep), std::to_string(row.seed),
                                fmt_int(row.tree_size), fmt_num(row.fraction), fmt_num(row.pstar),
                                fmt_num(row.p2star), row.status});
            if (row.status != "ok") out.partial = true;
        }
    } else if (id == "fig-oracle-vs-r" || id == "fig-dbsize") {
        CompareParams p;
        p.L = cfg.integer("bench.L", 72);
        p.rs = cfg.num_list("bench.rs", p.rs);
        p.M = cfg.integer("bench.M", 11);
        p.n = cfg.integer("bench.n", 9);
        p.trials = cfg.integer("bench.trials", fast ? 10 : 50);
        p.planner = planner_from_config(cfg);
        const auto rows = id == "fig-oracle-vs-r"
                              ? oracle_comparison(p, seed)
                              : dbsize_comparison(p, cfg.integer("bench.n-lo", 8),
                                                  cfg.integer("bench.n-hi", 9), seed);
        out.header = trial_status_header();
        out.rows = trial_rows_csv(rows);
        for (const auto& t : rows) {
            if (t.status != "ok") out.partial = true;
            out.meta_extra.push_back("trial " + t.planner + " point=" + std::to_string(t.point) +
                                     " trial=" + std::to_string(t.trial) + " n=" +
                                     std::to_string(t.n) + " wall_ms=" + fmt_num(t.wall_ms));
        }
    } else if (id == "l1-sweep") {
        std::vector<double> Ds;
        for (int i = 1; i <= 56; ++i) Ds.push_back(0.5 * i);
        const auto rows = l1_sweep_bins(cfg.num_list("bench.rs", {0.45, 0.5, 0.55, 0.6, 0.65, 0.7}),
                                        cfg.integer("bench.L", 72), Ds,
                                        cfg.integer("sweep.lattices", fast ? 5 : 25),
                                        cfg.integer("sweep.centers", fast ? 100 : 1000), seed);
        out.header = "r,D,p_hat,centers";
        for (const auto& s : rows)
            out.rows.push_back({fmt_num(s.r), fmt_num(s.D), fmt_num(s.p_hat), fmt_int(s.centers)});
    } else if (id == "l1-budget") {
        std::vector<int> budgets;
        for (double v : cfg.num_list("bench.budgets", {2, 4, 8, 16})) budgets.push_back(int(v));
        const auto rows = l1_budget(budgets, cfg.num("bench.r", 0.5), cfg.integer("bench.L", 72),
                                    cfg.integer("bench.db-exp", fast ? 10 : 14),
                                    cfg.integer("bench.databases", fast ? 10 : 100), seed);
        out.header = "n_x,D,target,achieved,rel_err,databases";
        for (const auto& row : rows)
            out.rows.push_back({fmt_int(row.n_x), fmt_num(row.D), fmt_num(row.target),
                                fmt_num(row.achieved), fmt_num(row.rel_err),
                                fmt_int(row.databases)});
    } else if (id == "error-bridge") {
        std::vector<int> ns;
        for (double v : cfg.num_list("bench.ns", {6, 8})) ns.push_back(int(v));
        const auto rows =
            error_bridge(ns, cfg.integer("bench.shots", fast ? 10000 : 100000), seed);
        out.header = "N,m,frac,i_used,shots,unmarked,freq,p_bad_at,stderr,p_bad,linear";
        for (const auto& row : rows)
            out.rows.push_back({std::to_string(row.N), std::to_string(row.m), fmt_num(row.frac),
                                fmt_int(row.i_used), fmt_int(row.shots), fmt_int(row.unmarked),
                                fmt_num(row.freq), fmt_num(row.predicted), fmt_num(row.std_err),
                                fmt_num(row.pbad), fmt_num(row.linear)});
    } else if (id == "completeness") {
        const auto rows = completeness(cfg.integer("bench.runs", fast ? 10 : 100),
                                       cfg.integer("bench.L", 16), cfg.num("bench.r", 0.4),
                                       cfg.integer("bench.n", 9),
                                       cfg.integer("bench.budget", 400), seed);
        out.header = "run,seed,target_x,target_y,nodes,hit,hit_node,verify_violations,status";
        for (const auto& row : rows) {
            out.rows.push_back({fmt_int(row.run), std::to_string(row.seed), fmt_num(row.target_x),
                                fmt_num(row.target_y), fmt_int(row.nodes), fmt_int(row.hit),
                                fmt_int(row.hit_node), fmt_int(row.verify_violations),
                                row.status});
            if (row.status != "ok") out.partial = true;
        }
    } else {
        default_seed_for(id); // throws with the known-id list
    }
    return out;
}

} // namespace

int run(const std::string& id, const Config& cfg, const std::string& out_path, bool fast) {
    const uint64_t seed = cfg.u64("seed", default_seed_for(id));
    const auto t0 = std::chrono::steady_clock::now();
    RunOutput out = dispatch(id, cfg, seed, fast);
    const double total_ms = elapsed_ms(t0);

    write_csv(out_path, out.header, out.rows);

    std::string meta;
    meta += "experiment=" + id + "\n";
    meta += "seed=" + std::to_string(seed) + "\n";
    meta += std::string("fast=") + (fast ? "1" : "0") + "\n";
    meta += "rows=" + std::to_string(out.rows.size()) + "\n";
    for (const auto& kv : cfg.values) meta += "config " + kv.first + "=" + kv.second + "\n";
    meta += "generated=" + iso_now() + "\n";
    meta += "wall_ms_total=" + fmt_num(total_ms) + "\n";
    for (const auto& line : out.meta_extra) meta += line + "\n";
    write_text_file(out_path + ".meta.txt", meta);

    return out.partial ? 3 : 0;
}

} // namespace bench
} // namespace qmp
