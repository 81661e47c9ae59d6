#include "qmp/planners.hpp"

#include <algorithm>
#include <cmath>

#include "qmp/csvio.hpp"

namespace qmp {

namespace {
bool point_free(const Lattice& lat, const Vec2& p) {
    if (!in_bounds(lat, p)) return false;
    return !lat.occ(cell_of(lat, p));
}

double clip01L(double v, double L) { return std::clamp(v, 0.0, L); }

int loop_count_from_p(double p) {
    return int(std::floor((M_PI / 4.0) * std::sqrt(1.0 / p)));
}

Trajectory edge_trajectory(const Vec2& from, const Vec2& to, const LinearPlannerConfig& dyn) {
    try {
        return track(from, to, dyn);
    } catch (const NumericError&) {
        return Trajectory{};
    }
}
} // namespace

std::vector<Vec2> random_path(const Vec2& x0, const Vec2& xG, int k, double sigma,
                              const Lattice& lat, Rng& g) {
    if (!in_bounds(lat, x0) || !in_bounds(lat, xG))
        throw DomainError("random_path endpoints must be in bounds");
    if (k < 0) throw DomainError("negative waypoint count");
    if (sigma < 0.0) throw DomainError("negative deviation scale");
    const double L = double(lat.L);
    std::vector<Vec2> path;
    path.reserve(std::size_t(k) + 2);
    path.push_back(x0);
    for (int j = 1; j <= k; ++j) {
        const double t = double(j) / (k + 1);
        double x = x0.x + t * (xG.x - x0.x) + rnorm(g) * sigma;
        double y = x0.y + t * (xG.y - x0.y) + rnorm(g) * sigma;
        path.push_back(Vec2{clip01L(x, L), clip01L(y, L)});
    }
    path.push_back(xG);
    return path;
}

int nearest_parent(const Tree& tree, const Vec2& point) {
    if (tree.nodes.empty()) throw DomainError("nearest_parent on an empty tree");
    int best = 0;
    double best_d = dist2(tree.nodes[0].state, point);
    for (int i = 1; i < tree.size(); ++i) {
        const double d = dist2(tree.nodes[i].state, point);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return best;
}

PathDatabase build_path_database(const Vec2& x0, const Vec2& xG, int n, const Lattice& lat,
                                 const PlannerConfig& cfg, Rng& g) {
    if (n < 1 || n > kRegisterCap) throw CapacityError("database exponent out of range");
    const std::size_t N = std::size_t(1) << n;
    const double sigma = cfg.qfps_sigma < 0.0 ? lat.L / 6.0 : cfg.qfps_sigma;
    PathDatabase db;
    db.entries.reserve(N);
    db.mask.truth.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        db.entries.push_back(random_path(x0, xG, cfg.qfps_k, sigma, lat, g));
        db.mask.truth[i] = path_collision_free(lat, db.entries[i], cfg.dyn.collide_ds) ? 1 : 0;
    }
    return db;
}

PairDatabase build_pair_database(const Tree& tree, const Lattice& lat, const ComponentLabels& cl,
                                 int n, const PlannerConfig& cfg, Rng& g) {
    if (tree.nodes.empty()) throw DomainError("pair database needs a nonempty tree");
    if (n < 1 || n > kRegisterCap) throw CapacityError("database exponent out of range");
    const std::size_t N = std::size_t(1) << n;
    PairDatabase db;
    db.candidates.resize(N);
    db.parents.resize(N);
    db.mask.truth.resize(N);
    for (std::size_t i = 0; i < N; ++i) {
        Vec2 t;
        switch (cfg.sampler.mode) {
        case SamplerMode::Uniform:
            t = Vec2{runif(g) * lat.L, runif(g) * lat.L};
            break;
        case SamplerMode::L1Boundary:
        case SamplerMode::L1Ball: {
            const Vec2 center = tree.nodes[runif_index(g, std::size_t(tree.size()))].state;
            const L1SampleMode m = cfg.sampler.mode == SamplerMode::L1Boundary
                                       ? L1SampleMode::Boundary
                                       : L1SampleMode::Ball;
            t = sample_at_l1(lat, center, cfg.sampler.l1_radius, m, g);
            break;
        }
        }
        const int parent = nearest_parent(tree, t);
        db.candidates[i] = t;
        db.parents[i] = parent;
        db.mask.truth[i] =
            reachable(lat, cl, tree.nodes[parent].state, t, cfg.dyn) ? 1 : 0;
    }
    return db;
}

bool final_check(OracleMask& mask, std::size_t idx) {
    ++mask.calls;
    return mask.truth[idx] != 0;
}

QfpsResult qfps(const Vec2& x0, const Vec2& xG, int n, const Lattice& lat,
                const PlannerConfig& cfg, Rng& g) {
    if (!point_free(lat, x0) || !point_free(lat, xG))
        throw DomainError("q-FPS endpoints must lie in free cells");
    const uint64_t N = uint64_t(1) << n;
    PlannerReport report;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
        report.retries = attempt;
        PathDatabase db = build_path_database(x0, xG, n, lat, cfg, g);
        const uint64_t m = count_solutions(db.mask, report.counting_cost);
        if (m == 0) continue;
        QuantumRegister reg = uniform_superposition(n);
        amplify(reg, db.mask, optimal_iterations(N, m));
        const std::size_t idx = measure(reg, g);
        const bool ok = final_check(db.mask, idx);
        report.oracle_calls += db.mask.calls;
        if (ok) return QfpsResult{db.entries[idx], report};
    }
    ++report.retries;
    throw QfpsError("q-FPS retry budget exhausted without a collision-free path", report);
}

TreeResult qrrt(const Vec2& x0, int n, int M, const Lattice& lat, const PlannerConfig& cfg, Rng& g) {
    if (!point_free(lat, x0)) throw DomainError("q-RRT root must lie in a free cell");
    if (M < 1) throw DomainError("target tree size must be >= 1");
    const ComponentLabels cl = components(lat);
    const uint64_t N = uint64_t(1) << n;

    Tree tree;
    tree.root_state = x0;
    tree.nodes.push_back(TreeNode{x0, -1, Trajectory{}});
    PlannerReport report;

    while (tree.size() < M) {
        int node_retries = 0;
        for (;;) {
            PairDatabase db = build_pair_database(tree, lat, cl, n, cfg, g);

            int iters = 0;
            bool skip_measure = false;
            if (cfg.iter_estimate == IterEstimate::Exact) {
                const uint64_t m = count_solutions(db.mask, report.counting_cost);
                if (m == 0)
                    skip_measure = true;
                else
                    iters = optimal_iterations(N, m);
            } else {
                double p = cfg.iter_estimate == IterEstimate::P1
                               ? p_star(cfg.pstar, lat.r, double(lat.L))
                               : p2_star(cfg.pstar, lat.r, double(lat.L), tree.size(), cfg.p2_factor);
                if (cfg.clamp_p) p = std::clamp(p, 1.0 / double(N), 0.75);
                iters = loop_count_from_p(p);
            }

            bool ok = false;
            std::size_t idx = 0;
            if (!skip_measure) {
                QuantumRegister reg = uniform_superposition(n);
                amplify(reg, db.mask, iters);
                idx = measure(reg, g);
                ok = cfg.final_check ? final_check(db.mask, idx) : true;
                report.oracle_calls += db.mask.calls;
            }

            if (ok) {
                const int parent = db.parents[idx];
                const Vec2 cand = db.candidates[idx];
                tree.nodes.push_back(
                    TreeNode{cand, parent, edge_trajectory(tree.nodes[parent].state, cand, cfg.dyn)});
                ++report.nodes_added;
                break;
            }
            ++node_retries;
            ++report.retries;
            if (node_retries > cfg.max_retries)
                throw PartialTreeError("q-RRT retry budget exhausted", tree, report);
        }
    }
    return TreeResult{tree, report};
}

TreeResult classical_rrt(const Vec2& x0, int M, const Lattice& lat, const PlannerConfig& cfg,
                         Rng& g) {
    if (!point_free(lat, x0)) throw DomainError("RRT root must lie in a free cell");
    if (M < 1) throw DomainError("target tree size must be >= 1");
    const ComponentLabels cl = components(lat);

    Tree tree;
    tree.root_state = x0;
    tree.nodes.push_back(TreeNode{x0, -1, Trajectory{}});
    PlannerReport report;

    long long samples = 0;
    while (tree.size() < M) {
        if (samples >= cfg.rrt_sample_budget)
            throw PartialTreeError("RRT sample budget exhausted", tree, report);
        ++samples;
        const Vec2 t{runif(g) * lat.L, runif(g) * lat.L};
        const int parent = nearest_parent(tree, t);
        ++report.oracle_calls;
        if (reachable(lat, cl, tree.nodes[parent].state, t, cfg.dyn)) {
            tree.nodes.push_back(
                TreeNode{t, parent, edge_trajectory(tree.nodes[parent].state, t, cfg.dyn)});
            ++report.nodes_added;
        } else {
            ++report.retries;
        }
    }
    return TreeResult{tree, report};
}

int verify_tree(const Tree& tree, const Lattice& lat, const ComponentLabels& cl,
                const LinearPlannerConfig& dyn) {
    int violations = 0;
    for (int i = 0; i < tree.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        if (node.parent < 0) continue;
        if (!reachable(lat, cl, tree.nodes[node.parent].state, node.state, dyn)) ++violations;
    }
    return violations;
}

std::string tree_csv(const Tree& tree) {
    std::string out = "node_id,x,y,parent_id\n";
    for (int i = 0; i < tree.size(); ++i) {
        const TreeNode& node = tree.nodes[i];
        out += csv_line({fmt_int(i), fmt_num(node.state.x), fmt_num(node.state.y),
                         fmt_int(node.parent)});
        out += '\n';
    }
    return out;
}

void save_tree(const Tree& tree, const std::string& path) { write_text_file(path, tree_csv(tree)); }

Tree load_tree(const std::string& path) {
    auto rows = parse_csv(read_text_file(path), true);
    Tree tree;
    for (const auto& row : rows) {
        if (row.size() != 4) throw ShapeError("tree row needs 4 fields");
        TreeNode node;
        node.state = Vec2{std::stod(row[1]), std::stod(row[2])};
        node.parent = std::stoi(row[3]);
        const int id = std::stoi(row[0]);
        if (id != tree.size()) throw ShapeError("tree node ids must be dense and ordered");
        if (node.parent >= id || (id == 0 && node.parent != -1))
            throw ShapeError("tree parent ids must precede children");
        tree.nodes.push_back(std::move(node));
    }
    if (tree.nodes.empty()) throw ShapeError("empty tree file");
    tree.root_state = tree.nodes[0].state;
    return tree;
}

std::string report_csv_header() {
    return "seed,planner,L,r,n,M,oracle_calls,counting_cost,nodes_added,retries";
}

std::vector<std::string> report_csv_row(const PlannerReport& rep, const std::string& planner,
                                        int L, double r, int n, int M) {
    return {std::to_string(rep.seed), planner,          fmt_int(L),
            fmt_num(r),               fmt_int(n),       fmt_int(M),
            std::to_string(rep.oracle_calls),           std::to_string(rep.counting_cost),
            fmt_int(rep.nodes_added), fmt_int(rep.retries)};
}

} // namespace qmp
