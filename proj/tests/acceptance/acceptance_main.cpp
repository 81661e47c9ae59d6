// Acceptance gate: one criterion per numbered check, full-scale data through
// the same bench entry point the CLI uses. Run with no arguments for the whole
// gate or with --criterion N for a single one. Exit 0 only if every selected
// criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmp/bench.hpp"
#include "qmp/csvio.hpp"
#include "qmp/estimator.hpp"
#include "qmp/probability.hpp"
#include "qmp/qsearch.hpp"

namespace {

using namespace qmp;

namespace fs = std::filesystem;

fs::path g_dir;

struct Outcome {
    bool pass = true;
    std::vector<std::string> detail;
};

std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double cell(const std::vector<std::string>& row, std::size_t j) {
    return std::stod(row.at(j));
}

using Rows = std::vector<std::vector<std::string>>;

Rows run_rows(const std::string& id, bool fast, const std::string& tag = "") {
    const fs::path out = g_dir / (id + tag + (fast ? "-fast" : "") + ".csv");
    const int rc = bench::run(id, Config{}, out.string(), fast);
    if (rc != 0 && rc != 3)
        throw std::runtime_error("bench run failed for " + id + " (rc " + std::to_string(rc) + ")");
    return parse_csv(read_text_file(out.string()), true);
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const auto table = bench::amplitude_table(10, 5, 22);
    const double wall = elapsed_s(t0);

    const int opt = optimal_iterations(1024, 5);
    o.pass &= opt == 11;
    o.detail.push_back("optimal iterations = " + std::to_string(opt) + " (want 11)");

    const double good = success_probability(1024, 5, opt);
    const double bad = p_bad_at(1024, 5, opt);
    const bool good_ok = std::fabs(good - 0.99857) <= 5e-4;
    const bool bad_ok = std::fabs(bad - 0.00143) <= 5e-4;
    o.pass &= good_ok && bad_ok;
    o.detail.push_back("p_good = " + num(good) + ", p_bad = " + num(bad) +
                       (good_ok && bad_ok ? " (within 5e-4)" : " OUT OF BAND"));

    double worst = 0.0;
    bool covered = table.size() >= 23;
    for (const auto& row : table)
        if (row.i <= 22) worst = std::max(worst, std::fabs(row.sim - row.closed));
    o.pass &= covered && worst <= 1e-9;
    o.detail.push_back("max |sim - closed| over i<=22 = " + num(worst) + " (gate 1e-9)");

    o.pass &= wall < 1.0;
    o.detail.push_back("simulation wall time " + num(wall) + " s (gate 1 s)");
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const Rows rows = run_rows("classical-probing", false);
    const double wall = elapsed_s(t0);
    const double mean = cell(rows.at(0), 3);
    const bool band = std::fabs(mean - 102.4) <= 0.05 * 102.4;
    o.pass = band && wall < 5.0;
    o.detail.push_back("mean probes = " + num(mean) + " (want 102.4 within 5%)");
    o.detail.push_back("wall time " + num(wall) + " s (gate 5 s)");
    return o;
}

Outcome criterion3() {
    Outcome o;
    const Rows rows = run_rows("born", false);
    const auto& r = rows.at(0);
    const double freq = cell(r, 2), expected = cell(r, 3), se = cell(r, 4);
    const double z = std::fabs(freq - expected) / se;
    o.pass = z <= 3.0;
    o.detail.push_back("frequency " + num(freq) + " vs " + num(expected) + ", z = " + num(z) +
                       " (gate 3)");
    return o;
}

Outcome criterion4() {
    Outcome o;
    const Rows rows = run_rows("fig-pstar", false);
    const PStarModel paper = pstar_paper();

    const std::vector<double> spot_rs = {0.45, 0.5, 0.55, 0.6, 0.65, 0.7};
    int spots = 0;
    double worst = 0.0;
    for (const auto& row : rows) {
        const double r = cell(row, 0);
        const int L = int(cell(row, 1));
        if (L != 32) continue;
        bool is_spot = false;
        for (double s : spot_rs) is_spot |= std::fabs(r - s) < 1e-9;
        if (!is_spot) continue;
        ++spots;
        worst = std::max(worst, std::fabs(cell(row, 5) - p_star(paper, r, 32)));
    }
    const bool spot_ok = spots == 6 && worst <= 0.05;
    o.pass &= spot_ok;
    o.detail.push_back(std::to_string(spots) +
                       " spot points at L=32, max |p_hat - model| = " + num(worst) +
                       " (gate 0.05)");

    std::vector<ConnectivitySample> samples;
    for (const auto& row : rows) {
        ConnectivitySample s;
        s.r = cell(row, 0);
        s.L = int(cell(row, 1));
        s.p_hat = cell(row, 5);
        samples.push_back(s);
    }
    const PStarFit fit = fit_pstar(samples, paper);
    o.pass &= fit.r2 >= 0.98;
    o.detail.push_back("refit over " + std::to_string(samples.size()) +
                       " grid points: R^2 = " + num(fit.r2) + " (gate 0.98)");
    return o;
}

Outcome criterion5() {
    Outcome o;
    const Rows rows = run_rows("fig-p2star", false);
    long long below = 0;
    double sum = 0.0;
    for (const auto& row : rows) {
        if (cell(row, 3) <= cell(row, 5)) ++below;
        sum += cell(row, 3);
    }
    const long long n = (long long)rows.size();
    const double mean = sum / double(n);
    const double pstar = cell(rows.at(0), 4);
    const bool rate_ok = below * 10 >= n * 9;
    const bool mean_ok = std::fabs(mean - pstar) <= 0.05;
    o.pass = rate_ok && mean_ok;
    o.detail.push_back(std::to_string(below) + "/" + std::to_string(n) +
                       " repetitions at or below the bound (gate 90%)");
    o.detail.push_back("mean fraction " + num(mean) + " vs p* " + num(pstar) +
                       " (gate |diff| 0.05)");
    return o;
}

struct GroupMean {
    double sum = 0.0;
    long long n = 0;
    double mean() const { return sum / double(n); }
};

Outcome criterion6() {
    Outcome o;
    const Rows rows = run_rows("fig-oracle-vs-r", false);
    std::map<double, GroupMean> q, c;
    double q_total = 0.0, c_total = 0.0;
    for (const auto& row : rows) {
        const double r = cell(row, 3);
        const double calls = cell(row, 6);
        if (row.at(1) == "qrrt") {
            q[r].sum += calls;
            q[r].n++;
            q_total += calls;
        } else {
            c[r].sum += calls;
            c[r].n++;
            c_total += calls;
        }
    }
    bool each = q.size() == 6;
    for (const auto& [r, gm] : q) {
        const bool win = gm.mean() < c[r].mean();
        each &= win;
        o.detail.push_back("r=" + num(r) + ": " + num(gm.mean()) + " vs " + num(c[r].mean()) +
                           (win ? "" : "  NOT BELOW"));
    }
    const double ratio = c_total / q_total;
    o.pass = each && ratio >= 5.0;
    o.detail.push_back("aggregate ratio = " + num(ratio) + " (gate 5)");
    return o;
}

Outcome criterion7() {
    Outcome o;
    const Rows rows = run_rows("fig-dbsize", false);
    std::map<std::pair<int, double>, GroupMean> by_nr;
    std::set<double> rs;
    for (const auto& row : rows) {
        if (row.at(1) != "qrrt") continue;
        const int n = int(cell(row, 4));
        const double r = cell(row, 3);
        rs.insert(r);
        by_nr[{n, r}].sum += cell(row, 6);
        by_nr[{n, r}].n++;
    }
    std::vector<double> top(rs.rbegin(), rs.rend());
    top.resize(2);
    for (double r : top) {
        const double m9 = by_nr[{9, r}].mean(), m8 = by_nr[{8, r}].mean();
        const bool ok = m9 <= m8;
        o.pass &= ok;
        o.detail.push_back("r=" + num(r) + ": n=9 mean " + num(m9) + " vs n=8 mean " + num(m8) +
                           (ok ? "" : "  NOT BELOW"));
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    const Rows sweep = run_rows("l1-sweep", false);
    std::map<double, std::vector<std::pair<double, double>>> bins;
    for (const auto& row : sweep) bins[cell(row, 0)].push_back({cell(row, 1), cell(row, 2)});
    long long increases = 0;
    for (auto& [r, pts] : bins) {
        std::sort(pts.begin(), pts.end());
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].second > pts[i - 1].second) ++increases;
    }
    o.pass &= increases == 0;
    o.detail.push_back(std::to_string(bins.size()) + " bins, " + std::to_string(increases) +
                       " increases with distance (gate 0)");

    std::vector<L1Point> pts;
    for (const auto& row : sweep) pts.push_back({cell(row, 0), cell(row, 1), cell(row, 2)});
    const L1Fit fit = fit_l1(pts, l1_paper_L72());
    o.pass &= fit.r2 >= 0.95;
    o.detail.push_back("decay refit R^2 = " + num(fit.r2) + " (gate 0.95)");

    const Rows budget = run_rows("l1-budget", false);
    bool decreasing = true;
    std::string seq;
    for (std::size_t i = 0; i < budget.size(); ++i) {
        if (i) {
            decreasing &= cell(budget[i], 4) < cell(budget[i - 1], 4);
            seq += ", ";
        }
        seq += num(cell(budget[i], 4));
    }
    o.pass &= decreasing;
    o.detail.push_back("budget relative errors: " + seq +
                       (decreasing ? " (decreasing)" : "  NOT DECREASING"));
    return o;
}

Outcome criterion9() {
    Outcome o;
    const Rows rows = run_rows("error-bridge", false);
    double worst_z = 0.0;
    for (const auto& row : rows)
        worst_z = std::max(worst_z, std::fabs(cell(row, 6) - cell(row, 7)) / cell(row, 8));
    const bool bands = worst_z <= 3.0;
    o.pass &= bands;
    o.detail.push_back(std::to_string(rows.size()) + " sweep points, max z = " + num(worst_z) +
                       " (gate 3)");

    double sup = 0.0, at = 0.0;
    for (double x = kLinearDomainLo; x <= kLinearDomainHi + 1e-12; x += 0.001) {
        const double gap = std::fabs(linear_approx_pbad(x) - p_bad_limit(x));
        if (gap > sup) {
            sup = gap;
            at = x;
        }
    }
    const bool lin = sup <= 0.02;
    o.pass &= lin;
    o.detail.push_back("sup |linear - exact| = " + num(sup) + " at x = " + num(at) +
                       " (gate 0.02)");
    return o;
}

Outcome criterion10() {
    Outcome o;
    const Rows rows = run_rows("completeness", false);
    long long hits = 0, violations = 0;
    for (const auto& row : rows) {
        hits += (long long)cell(row, 5);
        violations += (long long)cell(row, 7);
    }
    o.pass = rows.size() == 100 && hits >= 95 && violations == 0;
    o.detail.push_back(std::to_string(hits) + "/" + std::to_string(rows.size()) +
                       " runs reached the target (gate 95)");
    o.detail.push_back(std::to_string(violations) + " verification violations (gate 0)");
    return o;
}

Outcome criterion11() {
    Outcome o;
    for (const auto& info : bench::known_experiments()) {
        const bool fast = info.id == "l1-sweep"; // identical code path, shorter loops
        const fs::path a = g_dir / (info.id + "-rerun-a.csv");
        const fs::path b = g_dir / (info.id + "-rerun-b.csv");
        for (const auto& p : {a, b}) {
            const int rc = bench::run(info.id, Config{}, p.string(), fast);
            if (rc != 0 && rc != 3)
                throw std::runtime_error("bench run failed for " + info.id);
        }
        const bool same = read_text_file(a.string()) == read_text_file(b.string());
        o.pass &= same;
        o.detail.push_back(info.id + (same ? ": identical" : ": MISMATCH"));
    }
    return o;
}

struct Criterion {
    int id;
    const char* label;
    std::function<Outcome()> fn;
};

const std::vector<Criterion>& all_criteria() {
    static const std::vector<Criterion> cs = {
        {1, "search iterations and amplitude agreement", criterion1},
        {2, "classical probing baseline", criterion2},
        {3, "measured frequency of the amplified register", criterion3},
        {4, "connectivity surface spot checks and refit", criterion4},
        {5, "database-fraction bound on small trees", criterion5},
        {6, "planner oracle-call comparison", criterion6},
        {7, "database-size effect at high occupancy", criterion7},
        {8, "distance-decay model and budget inversion", criterion8},
        {9, "error-model frequencies and linear surrogate", criterion9},
        {10, "target-reach completeness and tree verification", criterion10},
        {11, "byte-identical reruns", criterion11},
    };
    return cs;
}

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }

    g_dir = fs::temp_directory_path() / "qmp-acceptance";
    fs::create_directories(g_dir);

    bool all_pass = true;
    for (const auto& c : all_criteria()) {
        if (only && c.id != only) continue;
        Outcome o;
        try {
            o = c.fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail.push_back(std::string("exception: ") + e.what());
        }
        all_pass &= o.pass;
        std::printf("[%s] criterion %d: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.label);
        for (const auto& d : o.detail) std::printf("    - %s\n", d.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
