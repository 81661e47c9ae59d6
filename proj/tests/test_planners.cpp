#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "qmp/errors.hpp"
#include "qmp/lattice.hpp"
#include "qmp/planners.hpp"
#include "qmp/rng.hpp"

using namespace qmp;

namespace {

Lattice open_lattice(int L, double r_meta = 0.0) {
    std::string text = "qmplattice v1 d=2 L=" + std::to_string(L) + " r=" +
                       std::to_string(r_meta) + " seed=1 periodic=0\n";
    for (int y = 0; y < L; ++y) text += std::string(L, '.') + "\n";
    return from_text(text);
}

// 8x8 box split into halves by a full-height wall at x = 4
Lattice walled_lattice() {
    std::string text = "qmplattice v1 d=2 L=8 r=0.125 seed=1 periodic=0\n";
    for (int y = 0; y < 8; ++y) text += "....#...\n";
    return from_text(text);
}

} // namespace

TEST_CASE("random paths stay inside the box with the requested waypoint count") {
    const Lattice lat = open_lattice(20);
    Rng g(31);
    for (int k : {0, 1, 8}) {
        const auto path = random_path(Vec2{2.0, 2.0}, Vec2{18.0, 17.0}, k, 4.0, lat, g);
        REQUIRE(int(path.size()) == k + 2);
        CHECK(path.front().x == doctest::Approx(2.0));
        CHECK(path.back().y == doctest::Approx(17.0));
        for (const Vec2& p : path) {
            CHECK(p.x >= 0.0);
            CHECK(p.x <= 20.0);
            CHECK(p.y >= 0.0);
            CHECK(p.y <= 20.0);
        }
    }
}

TEST_CASE("random path interior waypoints center on the interpolation line") {
    const Lattice lat = open_lattice(200);
    const Vec2 x0{90.0, 90.0}, xG{110.0, 110.0};
    const int k = 8;
    const double sigma = 2.0;
    Rng g(404);
    const int draws = 10000;
    std::vector<double> sx(k, 0.0), sy(k, 0.0);
    for (int t = 0; t < draws; ++t) {
        const auto path = random_path(x0, xG, k, sigma, lat, g);
        for (int j = 0; j < k; ++j) {
            sx[j] += path[j + 1].x;
            sy[j] += path[j + 1].y;
        }
    }
    const double tol = 3.0 * sigma / std::sqrt(double(draws));
    for (int j = 0; j < k; ++j) {
        const double t = double(j + 1) / double(k + 1);
        CHECK(std::fabs(sx[j] / draws - (x0.x + t * (xG.x - x0.x))) <= tol);
        CHECK(std::fabs(sy[j] / draws - (x0.y + t * (xG.y - x0.y))) <= tol);
    }
}

TEST_CASE("nearest parent matches a brute force scan and breaks ties low") {
    Tree tree;
    tree.root_state = Vec2{5.0, 5.0};
    Rng g(12);
    tree.nodes.push_back(TreeNode{tree.root_state, -1, {}});
    for (int i = 1; i < 40; ++i)
        tree.nodes.push_back(TreeNode{Vec2{runif(g) * 10.0, runif(g) * 10.0}, 0, {}});
    for (int q = 0; q < 100; ++q) {
        const Vec2 p{runif(g) * 10.0, runif(g) * 10.0};
        int best = 0;
        double bd = dist2(tree.nodes[0].state, p);
        for (int i = 1; i < tree.size(); ++i) {
            const double d = dist2(tree.nodes[i].state, p);
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        CHECK(nearest_parent(tree, p) == best);
    }
    // exact duplicate states: the lower index wins
    Tree dup;
    dup.root_state = Vec2{1.0, 1.0};
    dup.nodes.push_back(TreeNode{Vec2{1.0, 1.0}, -1, {}});
    dup.nodes.push_back(TreeNode{Vec2{3.0, 3.0}, 0, {}});
    dup.nodes.push_back(TreeNode{Vec2{3.0, 3.0}, 0, {}});
    CHECK(nearest_parent(dup, Vec2{3.1, 3.1}) == 1);
}

TEST_CASE("path database marks exactly the collision-free entries") {
    const Lattice lat = generate_lattice(2, 12, 0.25, 8, false);
    PlannerConfig cfg;
    Rng g(21);
    const PathDatabase db = build_path_database(Vec2{0.5, 0.5}, Vec2{11.5, 11.5}, 6, lat, cfg, g);
    REQUIRE(db.entries.size() == 64);
    REQUIRE(db.mask.truth.size() == 64);
    for (std::size_t i = 0; i < db.entries.size(); ++i) {
        CHECK(bool(db.mask.truth[i]) ==
              path_collision_free(lat, db.entries[i], cfg.dyn.collide_ds));
    }
    CHECK(db.mask.calls == 0);
    CHECK_THROWS_AS(build_path_database(Vec2{0.5, 0.5}, Vec2{1.5, 1.5}, 0, lat, cfg, g),
                    CapacityError);
    CHECK_THROWS_AS(build_path_database(Vec2{0.5, 0.5}, Vec2{1.5, 1.5}, 17, lat, cfg, g),
                    CapacityError);
}

TEST_CASE("pair database pairs candidates with their nearest node and truth oracle") {
    const Lattice lat = generate_lattice(2, 16, 0.3, 44, false);
    const ComponentLabels cl = components(lat);
    Rng gs(3);
    Tree tree;
    tree.root_state = sample_component(lat, cl, cl.largest, gs);
    tree.nodes.push_back(TreeNode{tree.root_state, -1, {}});
    tree.nodes.push_back(TreeNode{sample_component(lat, cl, cl.largest, gs), 0, {}});
    PlannerConfig cfg;
    Rng g(91);
    const PairDatabase db = build_pair_database(tree, lat, cl, 7, cfg, g);
    REQUIRE(db.candidates.size() == 128);
    REQUIRE(db.parents.size() == 128);
    for (std::size_t i = 0; i < db.candidates.size(); ++i) {
        CHECK(db.parents[i] == nearest_parent(tree, db.candidates[i]));
        CHECK(bool(db.mask.truth[i]) ==
              reachable(lat, cl, tree.nodes[db.parents[i]].state, db.candidates[i], cfg.dyn));
    }
}

TEST_CASE("final check spends one oracle call") {
    OracleMask mask;
    mask.truth = {0, 1, 0};
    CHECK_FALSE(final_check(mask, 0));
    CHECK(final_check(mask, 1));
    CHECK(mask.calls == 2);
}

TEST_CASE("q-FPS finds a verified path on an open lattice") {
    const Lattice lat = open_lattice(16);
    PlannerConfig cfg;
    cfg.n = 6;
    Rng g(55);
    const QfpsResult res = qfps(Vec2{1.5, 1.5}, Vec2{14.5, 13.5}, 6, lat, cfg, g);
    REQUIRE(res.path.size() >= 2);
    CHECK(res.path.front().x == doctest::Approx(1.5));
    CHECK(res.path.back().x == doctest::Approx(14.5));
    CHECK(path_collision_free(lat, res.path, cfg.dyn.collide_ds));
    CHECK(res.report.oracle_calls >= 1);
    CHECK(res.report.counting_cost >= 64);
}

TEST_CASE("q-FPS refuses blocked endpoints and reports exhausted retries") {
    const Lattice lat = walled_lattice();
    PlannerConfig cfg;
    cfg.n = 5;
    cfg.max_retries = 3;
    Rng g(77);
    CHECK_THROWS_AS(qfps(Vec2{4.5, 0.5}, Vec2{6.5, 6.5}, 5, lat, cfg, g), DomainError);
    // endpoints on opposite sides of the wall: no straight-ish path exists
    try {
        qfps(Vec2{1.5, 4.5}, Vec2{6.5, 4.5}, 5, lat, cfg, g);
        FAIL("expected QfpsError");
    } catch (const QfpsError& e) {
        CHECK(e.report.retries == cfg.max_retries + 1);
        CHECK(e.report.counting_cost == uint64_t(cfg.max_retries + 1) * 32);
    }
}

TEST_CASE("q-RRT grows to the requested size deterministically") {
    const Lattice lat = generate_lattice(2, 24, 0.3, 1234, false);
    const ComponentLabels cl = components(lat);
    Rng gs(6);
    const Vec2 root = sample_component(lat, cl, cl.largest, gs);
    PlannerConfig cfg;
    cfg.n = 7;

    Rng g1(5150), g2(5150);
    const TreeResult a = qrrt(root, 7, 9, lat, cfg, g1);
    const TreeResult b = qrrt(root, 7, 9, lat, cfg, g2);
    CHECK(a.tree.size() == 9);
    CHECK(a.report.nodes_added == 8);
    CHECK(tree_csv(a.tree) == tree_csv(b.tree));
    CHECK(a.report.oracle_calls == b.report.oracle_calls);
    CHECK(a.report.retries == b.report.retries);

    // every stored edge replays cleanly
    CHECK(verify_tree(a.tree, lat, cl, cfg.dyn) == 0);
    for (int i = 1; i < a.tree.size(); ++i) {
        CHECK(a.tree.nodes[i].parent >= 0);
        CHECK(a.tree.nodes[i].parent < i);
    }
}

TEST_CASE("q-RRT exhausts retries on an unreachable-everything lattice") {
    // only the root cell is free, so nearly every candidate is unreachable
    std::string text = "qmplattice v1 d=2 L=32 r=0.999 seed=1 periodic=0\n";
    for (int y = 0; y < 32; ++y) {
        std::string row(32, '#');
        if (y == 16) row[16] = '.';
        text += row + "\n";
    }
    const Lattice lat = from_text(text);
    PlannerConfig cfg;
    cfg.n = 5;
    cfg.max_retries = 2;
    Rng g(424242);
    try {
        qrrt(Vec2{16.5, 16.5}, 5, 5, lat, cfg, g);
        FAIL("expected PartialTreeError");
    } catch (const PartialTreeError& e) {
        CHECK(e.tree.size() >= 1);
        CHECK(e.report.nodes_added == e.tree.size() - 1);
        CHECK(e.report.retries >= cfg.max_retries + 1);
    }
}

TEST_CASE("classical RRT accounts one oracle call per candidate") {
    const Lattice lat = generate_lattice(2, 24, 0.35, 88, false);
    const ComponentLabels cl = components(lat);
    Rng gs(2);
    const Vec2 root = sample_component(lat, cl, cl.largest, gs);
    PlannerConfig cfg;
    Rng g(31337);
    const TreeResult res = classical_rrt(root, 8, lat, cfg, g);
    CHECK(res.tree.size() == 8);
    CHECK(res.report.nodes_added == 7);
    CHECK(res.report.oracle_calls ==
          uint64_t(res.report.nodes_added) + uint64_t(res.report.retries));
    CHECK(verify_tree(res.tree, lat, cl, cfg.dyn) == 0);
}

TEST_CASE("classical RRT surfaces an exhausted sample budget as a partial tree") {
    const Lattice lat = generate_lattice(2, 24, 0.35, 88, false);
    PlannerConfig cfg;
    cfg.rrt_sample_budget = 0;
    Rng g(1);
    try {
        classical_rrt(Vec2{0.5, 0.5}, 5, lat, cfg, g);
        FAIL("expected PartialTreeError");
    } catch (const PartialTreeError& e) {
        CHECK(e.tree.size() == 1);
        CHECK(e.report.oracle_calls == 0);
    }
}

TEST_CASE("blind growth without the final check is caught by verification") {
    const Lattice lat = walled_lattice();
    const ComponentLabels cl = components(lat);
    PlannerConfig cfg;
    cfg.n = 6;
    cfg.final_check = false;
    Rng g(777);
    const TreeResult res = qrrt(Vec2{1.5, 1.5}, 6, 12, lat, cfg, g);
    CHECK(res.tree.size() == 12);
    // unreachable candidates were accepted blindly; verification flags them
    CHECK(verify_tree(res.tree, lat, cl, cfg.dyn) > 0);
}

TEST_CASE("tree serialization round trips and validates") {
    const Lattice lat = open_lattice(10);
    PlannerConfig cfg;
    cfg.n = 5;
    Rng g(64);
    const TreeResult res = qrrt(Vec2{5.0, 5.0}, 5, 6, lat, cfg, g);
    const std::string path = "test_tree_roundtrip.tmp";
    save_tree(res.tree, path);
    const Tree back = load_tree(path);
    REQUIRE(back.size() == res.tree.size());
    for (int i = 0; i < back.size(); ++i) {
        CHECK(back.nodes[i].parent == res.tree.nodes[i].parent);
        CHECK(back.nodes[i].state.x == doctest::Approx(res.tree.nodes[i].state.x).epsilon(1e-9));
        CHECK(back.nodes[i].state.y == doctest::Approx(res.tree.nodes[i].state.y).epsilon(1e-9));
    }
    std::remove(path.c_str());

    CHECK_THROWS(load_tree("no_such_tree_file.tmp"));
}

TEST_CASE("malformed tree files are rejected") {
    const std::string path = "test_tree_malformed.tmp";
    auto write = [&](const std::string& body) {
        std::FILE* f = std::fopen(path.c_str(), "wb");
        std::fwrite(body.data(), 1, body.size(), f);
        std::fclose(f);
    };
    write("node_id,x,y,parent_id\n");
    CHECK_THROWS(load_tree(path));
    write("node_id,x,y,parent_id\n0,1,1,5\n");
    CHECK_THROWS(load_tree(path));
    write("node_id,x,y,parent_id\n0,1,1,-1\n1,2,2,3\n");
    CHECK_THROWS(load_tree(path));
    write("node_id,x,y,parent_id\n0,1,1,-1\n2,2,2,0\n");
    CHECK_THROWS(load_tree(path));
    std::remove(path.c_str());
}

TEST_CASE("report rows line up with the header") {
    const std::string header = report_csv_header();
    std::size_t commas = std::count(header.begin(), header.end(), ',');
    PlannerReport rep;
    const auto row = report_csv_row(rep, "qrrt", 72, 0.5, 9, 11);
    CHECK(row.size() == commas + 1);
}

TEST_CASE("verify tree flags corrupted edges") {
    const Lattice lat = walled_lattice();
    const ComponentLabels cl = components(lat);
    PlannerConfig cfg;
    cfg.n = 6;
    Rng g(99);
    TreeResult res = qrrt(Vec2{1.5, 1.5}, 6, 6, lat, cfg, g);
    REQUIRE(verify_tree(res.tree, lat, cl, cfg.dyn) == 0);
    // teleport one node across the wall
    res.tree.nodes[3].state = Vec2{6.5, 6.5};
    CHECK(verify_tree(res.tree, lat, cl, cfg.dyn) >= 1);
}
