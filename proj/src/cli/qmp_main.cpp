#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qmp/bench.hpp"
#include "qmp/config.hpp"
#include "qmp/csvio.hpp"
#include "qmp/errors.hpp"
#include "qmp/estimator.hpp"
#include "qmp/lattice.hpp"
#include "qmp/planners.hpp"
#include "qmp/probability.hpp"
#include "qmp/qsearch.hpp"
#include "qmp/rng.hpp"

namespace {

using namespace qmp;

Config cfg_from(const std::string& path) {
    return path.empty() ? Config{} : load_config(path);
}

Vec2 parse_point(const std::string& s) {
    double x = 0.0, y = 0.0;
    char extra = 0;
    if (std::sscanf(s.c_str(), " %lf , %lf %c", &x, &y, &extra) != 2)
        throw ConfigError("expected a point as 'x,y', got '" + s + "'");
    return Vec2{x, y};
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
}

std::string csv_text(const std::string& header, const std::vector<std::vector<std::string>>& rows) {
    std::string text = header + "\n";
    for (const auto& row : rows) text += csv_line(row) + "\n";
    return text;
}

void print_report(const PlannerReport& rep, const std::string& planner, const Lattice& lat, int n,
                  int M, const std::string& status) {
    std::cout << report_csv_header() << ",status\n";
    auto row = report_csv_row(rep, planner, lat.L, lat.r, n, M);
    row.push_back(status);
    std::cout << csv_line(row) << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-search motion planning laboratory"};
    app.require_subcommand(1);
    int rc = 0;

    // gen-lattice
    auto* gen = app.add_subcommand("gen-lattice", "generate a site-percolation lattice");
    struct {
        int d = 2, L = 32;
        double r = 0.5;
        bool periodic = false;
        uint64_t seed = 42;
        std::string config, out;
    } ga;
    gen->add_option("--d", ga.d, "dimension");
    gen->add_option("--L", ga.L, "side length");
    gen->add_option("--r", ga.r, "obstacle concentration");
    gen->add_flag("--periodic", ga.periodic, "periodic boundaries");
    gen->add_option("--seed", ga.seed, "lattice seed");
    gen->add_option("--config", ga.config, "config file");
    gen->add_option("--out", ga.out, "output path (default stdout)");
    gen->callback([&] {
        const Config cfg = cfg_from(ga.config);
        const Lattice lat = generate_lattice(
            cfg.integer("lattice.d", ga.d), cfg.integer("lattice.L", ga.L),
            cfg.num("lattice.r", ga.r), cfg.u64("seed", ga.seed),
            cfg.flag("lattice.periodic", ga.periodic));
        emit(ga.out, to_text(lat));
    });

    // components
    auto* comp = app.add_subcommand("components", "label connected free components");
    struct {
        std::string in, out;
    } ca;
    comp->add_option("--in", ca.in, "lattice file")->required();
    comp->add_option("--out", ca.out, "component size CSV (optional)");
    comp->callback([&] {
        const Lattice lat = load_lattice(ca.in);
        const ComponentLabels cl = components(lat);
        std::cout << "cells=" << lat.cell_count() << "\n";
        std::cout << "free=" << cl.free_cells.size() << "\n";
        std::cout << "occupied=" << (lat.cell_count() - cl.free_cells.size()) << "\n";
        std::cout << "components=" << cl.sizes.size() << "\n";
        std::cout << "largest=" << cl.largest << "\n";
        std::cout << "largest_size=" << (cl.sizes.empty() ? 0 : cl.sizes[cl.largest]) << "\n";
        if (!ca.out.empty()) {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < cl.sizes.size(); ++i)
                rows.push_back({fmt_int(static_cast<long long>(i)), fmt_int(cl.sizes[i])});
            write_csv(ca.out, "component,size", rows);
        }
    });

    // qfps
    auto* fps = app.add_subcommand("qfps", "quantum full path search between two states");
    struct {
        std::string in, start, goal, config, out;
        int n = -1;
        uint64_t seed = 1;
    } fa;
    fps->add_option("--in", fa.in, "lattice file")->required();
    fps->add_option("--start", fa.start, "start point 'x,y'")->required();
    fps->add_option("--goal", fa.goal, "goal point 'x,y'")->required();
    fps->add_option("--n", fa.n, "database size exponent (overrides config)");
    fps->add_option("--seed", fa.seed, "run seed");
    fps->add_option("--config", fa.config, "config file");
    fps->add_option("--out", fa.out, "path CSV (default stdout)");
    fps->callback([&] {
        const Config cfg = cfg_from(fa.config);
        const Lattice lat = load_lattice(fa.in);
        PlannerConfig pc = bench::planner_from_config(cfg);
        const int n = fa.n > 0 ? fa.n : pc.n;
        pc.n = n;
        const uint64_t seed = cfg.u64("seed", fa.seed);
        Rng g(seed);
        try {
            QfpsResult res = qfps(parse_point(fa.start), parse_point(fa.goal), n, lat, pc, g);
            res.report.seed = seed;
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < res.path.size(); ++i)
                rows.push_back({fmt_int(static_cast<long long>(i)), fmt_num(res.path[i].x),
                                fmt_num(res.path[i].y)});
            emit(fa.out, csv_text("point_id,x,y", rows));
            print_report(res.report, "qfps", lat, n, 0, "ok");
        } catch (const QfpsError& e) {
            std::cerr << e.what() << "\n";
            PlannerReport rep = e.report;
            rep.seed = seed;
            print_report(rep, "qfps", lat, n, 0, "no-path");
            rc = 3;
        }
    });

    // qrrt / rrt
    struct TreeArgs {
        std::string in, root, config, out;
        int n = -1, M = 11;
        uint64_t seed = 1;
    };
    auto add_tree_cmd = [&](const char* name, const char* desc, bool quantum, TreeArgs& ta) {
        auto* c = app.add_subcommand(name, desc);
        c->add_option("--in", ta.in, "lattice file")->required();
        c->add_option("--root", ta.root, "root point 'x,y' (default: sampled in the largest component)");
        if (quantum) c->add_option("--n", ta.n, "database size exponent (overrides config)");
        c->add_option("--M", ta.M, "target node count");
        c->add_option("--seed", ta.seed, "run seed");
        c->add_option("--config", ta.config, "config file");
        c->add_option("--out", ta.out, "tree CSV path");
        c->callback([&, quantum, planner_name = std::string(name)] {
            const Config cfg = cfg_from(ta.config);
            const Lattice lat = load_lattice(ta.in);
            PlannerConfig pc = bench::planner_from_config(cfg);
            if (ta.n > 0) pc.n = ta.n;
            const int M = cfg.integer("planner.M", ta.M);
            Rng g(cfg.u64("seed", ta.seed));
            Vec2 root;
            if (ta.root.empty()) {
                const ComponentLabels cl = components(lat);
                root = sample_component(lat, cl, cl.largest, g);
            } else {
                root = parse_point(ta.root);
            }
            Tree tree;
            PlannerReport rep;
            std::string status = "ok";
            try {
                const TreeResult res = quantum ? qrrt(root, pc.n, M, lat, pc, g)
                                               : classical_rrt(root, M, lat, pc, g);
                tree = res.tree;
                rep = res.report;
            } catch (const PartialTreeError& e) {
                tree = e.tree;
                rep = e.report;
                status = "partial";
                std::cerr << e.what() << "\n";
                rc = 3;
            }
            rep.seed = cfg.u64("seed", ta.seed);
            if (!ta.out.empty())
                save_tree(tree, ta.out);
            else
                std::cout << tree_csv(tree);
            print_report(rep, planner_name, lat, quantum ? pc.n : 0, M, status);
        });
    };
    TreeArgs qa, ra;
    add_tree_cmd("qrrt", "grow a quantum-search RRT", true, qa);
    add_tree_cmd("rrt", "grow a classical RRT baseline", false, ra);

    // estimate-pstar
    auto* est = app.add_subcommand("estimate-pstar", "Monte-Carlo connectivity at one (r, L) point");
    struct {
        double r = 0.5;
        int L = 32, lattices = 25;
        long long trials = 1000;
        bool periodic = false;
        uint64_t seed = 101;
        std::string config, out;
    } ea;
    est->add_option("--r", ea.r, "obstacle concentration");
    est->add_option("--L", ea.L, "side length");
    est->add_option("--trials", ea.trials, "trials per lattice");
    est->add_option("--lattices", ea.lattices, "lattice count");
    est->add_flag("--periodic", ea.periodic, "periodic boundaries");
    est->add_option("--seed", ea.seed, "base seed");
    est->add_option("--config", ea.config, "config file");
    est->add_option("--out", ea.out, "output CSV (default stdout)");
    est->callback([&] {
        const Config cfg = cfg_from(ea.config);
        const ConnectivitySample s = monte_carlo_connectivity(
            cfg.num("mc.r", ea.r), cfg.integer("mc.L", ea.L), cfg.integer("mc.trials", int(ea.trials)),
            cfg.integer("mc.lattices", ea.lattices), cfg.flag("mc.periodic", ea.periodic),
            cfg.u64("seed", ea.seed));
        emit(ea.out, csv_text("r,L,periodic,trials,lattices,p_hat,stderr",
                              {{fmt_num(s.r), fmt_int(s.L), s.periodic ? "1" : "0",
                                fmt_int(s.trials), fmt_int(s.lattice_count), fmt_num(s.p_hat),
                                fmt_num(s.std_err)}}));
    });

    // fit
    auto* fit = app.add_subcommand("fit", "refit a connectivity model to a data CSV");
    struct {
        std::string kind, in, name, out;
    } fita;
    fit->add_option("kind", fita.kind, "model kind: pstar or l1")->required();
    fit->add_option("--in", fita.in, "data CSV")->required();
    fit->add_option("--name", fita.name, "preset name for --out");
    fit->add_option("--out", fita.out, "preset CSV to write");
    fit->callback([&] {
        const auto rows = parse_csv(read_text_file(fita.in), true);
        ModelPreset preset;
        preset.source = "fit:" + fita.in;
        if (fita.kind == "pstar") {
            std::vector<ConnectivitySample> data;
            for (const auto& row : rows) {
                ConnectivitySample s;
                if (row.size() >= 6) {
                    s.r = std::stod(row[0]);
                    s.L = std::stoi(row[1]);
                    s.p_hat = std::stod(row[5]);
                } else if (row.size() == 3) {
                    s.r = std::stod(row[0]);
                    s.L = std::stoi(row[1]);
                    s.p_hat = std::stod(row[2]);
                } else {
                    throw ConfigError("pstar fit expects columns r,L,...,p_hat or r,L,p_hat");
                }
                data.push_back(s);
            }
            const PStarFit f = fit_pstar(data, pstar_from_preset(builtin_preset("pstar-paper")));
            std::cout << "a=" << fmt_num(f.model.a) << " b=" << fmt_num(f.model.b)
                      << " c=" << fmt_num(f.model.c) << " d=" << fmt_num(f.model.d)
                      << " f=" << fmt_num(f.model.f) << " r2=" << fmt_num(f.r2)
                      << " iterations=" << f.iterations << "\n";
            preset.name = fita.name.empty() ? "refit-pstar" : fita.name;
            preset.kind = "pstar";
            preset.coeffs = {f.model.a, f.model.b, f.model.c, f.model.d, f.model.f};
            preset.r2 = f.r2;
        } else if (fita.kind == "l1") {
            std::vector<L1Point> data;
            for (const auto& row : rows) {
                if (row.size() < 3) throw ConfigError("l1 fit expects columns r,D,p_hat");
                data.push_back({std::stod(row[0]), std::stod(row[1]), std::stod(row[2])});
            }
            const L1Fit f = fit_l1(data, l1_from_preset(builtin_preset("l1-paper-L72")));
            std::cout << "a=" << fmt_num(f.model.a) << " b=" << fmt_num(f.model.b)
                      << " c=" << fmt_num(f.model.c) << " L_fit=" << fmt_num(f.model.L_fit)
                      << " r2=" << fmt_num(f.r2) << " iterations=" << f.iterations << "\n";
            preset.name = fita.name.empty() ? "refit-l1" : fita.name;
            preset.kind = "l1";
            preset.coeffs = {f.model.a, f.model.b, f.model.c, f.model.L_fit};
            preset.r2 = f.r2;
        } else {
            throw ConfigError("fit kind must be pstar or l1");
        }
        if (!fita.out.empty()) save_presets(fita.out, {preset});
    });

    // theory
    auto* theo = app.add_subcommand("theory", "closed-form error calculus over a fraction grid");
    struct {
        double lo = 0.04, hi = 0.75, step = 0.001;
        uint64_t N = 1024;
        int M = 11;
        std::string config, out;
    } tha;
    theo->add_option("--lo", tha.lo, "grid start");
    theo->add_option("--hi", tha.hi, "grid end");
    theo->add_option("--step", tha.step, "grid step");
    theo->add_option("--N", tha.N, "database size for the integer-iteration column");
    theo->add_option("--M", tha.M, "tree size for the any-bad column");
    theo->add_option("--config", tha.config, "config file");
    theo->add_option("--out", tha.out, "output CSV (default stdout)");
    theo->callback([&] {
        const Config cfg = cfg_from(tha.config);
        const double lo = cfg.num("theory.lo", tha.lo);
        const double hi = cfg.num("theory.hi", tha.hi);
        const double step = cfg.num("theory.step", tha.step);
        const uint64_t N = cfg.u64("theory.N", tha.N);
        const int M = cfg.integer("theory.M", tha.M);
        if (step <= 0.0 || hi < lo) throw ConfigError("bad theory grid");
        std::vector<std::vector<std::string>> rows;
        for (long long k = 0;; ++k) {
            const double x = lo + double(k) * step;
            if (x > hi + 1e-12) break;
            uint64_t m = uint64_t(std::llround(x * double(N)));
            if (m == 0) m = 1;
            if (m > N) m = N;
            const double pb = p_bad_limit(x);
            const double pbi = p_bad_at(N, m, optimal_iterations(N, m));
            const double lin = linear_approx_pbad(x);
            rows.push_back({fmt_num(x), fmt_num(pb), fmt_num(pbi), fmt_num(lin),
                            fmt_num(std::fabs(lin - pb)),
                            linear_approx_in_domain(x) ? "1" : "0",
                            fmt_num(p_any_bad_tree(x, M))});
        }
        emit(tha.out, csv_text("x,p_bad,p_bad_int,linear_approx,abs_err,in_domain,p_any_bad_tree",
                               rows));
    });

    // bench
    auto* ben = app.add_subcommand("bench", "run a named experiment and write its data CSV");
    struct {
        std::string id, config, out;
        uint64_t seed = 0;
        bool seed_set = false, fast = false;
    } ba;
    ben->add_option("id", ba.id, "experiment id")->required();
    ben->add_option("--config", ba.config, "config file");
    auto* seed_opt = ben->add_option("--seed", ba.seed, "base seed (overrides config)");
    ben->add_option("--out", ba.out, "output CSV (default <id>.csv)");
    ben->add_flag("--fast", ba.fast, "reduced trial counts for CI");
    ben->callback([&] {
        Config cfg = cfg_from(ba.config);
        if (seed_opt->count() > 0) cfg.values["seed"] = std::to_string(ba.seed);
        const std::string out = ba.out.empty() ? ba.id + ".csv" : ba.out;
        rc = bench::run(ba.id, cfg, out, ba.fast);
    });

    // verify-tree
    auto* ver = app.add_subcommand("verify-tree", "re-verify every stored tree edge");
    struct {
        std::string tree, lattice, config;
    } va;
    ver->add_option("--tree", va.tree, "tree CSV")->required();
    ver->add_option("--lattice", va.lattice, "lattice file")->required();
    ver->add_option("--config", va.config, "config file (dynamics overrides)");
    ver->callback([&] {
        const Config cfg = cfg_from(va.config);
        const Tree tree = load_tree(va.tree);
        const Lattice lat = load_lattice(va.lattice);
        const ComponentLabels cl = components(lat);
        const int v = verify_tree(tree, lat, cl, bench::dynamics_from_config(cfg));
        std::cout << "violations=" << v << "\n";
        if (v > 0) rc = 3;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
