#include "qmp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "qmp/csvio.hpp"
#include "qmp/errors.hpp"

namespace qmp {

PStarModel pstar_paper() { return PStarModel{-0.1597, -54.59, 0.3212, 1.195, 0.9542}; }

double p_star_raw(const PStarModel& m, double r, double L) {
    if (!(L > 0.0)) throw DomainError("p_star needs L > 0");
    const double u = m.a * (L - m.b) * (r - m.c);
    return m.f / (1.0 + std::exp(-u)) + m.d / (L * L);
}

double p_star(const PStarModel& m, double r, double L) {
    const double lo = 1.0 / 65536.0;
    double v = p_star_raw(m, r, L);
    if (v < lo) v = lo;
    if (v > 1.0) v = 1.0;
    return v;
}

double p2_star(const PStarModel& m, double r, double L, int M, double factor) {
    if (M < 1) throw DomainError("p2_star needs M >= 1");
    return p_star(m, r, factor * L / std::sqrt(double(M)));
}

L1Model l1_paper_L72() { return L1Model{0.479, -1.72, 0.674, 72.0}; }

double l1_probability_raw(const L1Model& m, double r, double D) {
    if (D < 0.0) throw DomainError("l1_probability needs D >= 0");
    return m.a * std::exp((m.b * r + m.c) * D);
}

double l1_probability(const L1Model& m, double r, double D) {
    double v = l1_probability_raw(m, r, D);
    if (v > 1.0) v = 1.0;
    if (v <= 0.0) v = std::numeric_limits<double>::min();
    return v;
}

double l1_distance_for_budget(const L1Model& m, int n_x, double r) {
    if (n_x < 1) throw DomainError("budget must be >= 1");
    const double slope = m.b * r + m.c;
    if (slope >= 0.0) throw DomainError("L1 model does not decay at this r");
    const double target = (M_PI * M_PI) / (16.0 * double(n_x) * double(n_x));
    const double D = std::log(target / m.a) / slope;
    return D < 0.0 ? 0.0 : D;
}

ConnectivitySample monte_carlo_connectivity(double r, int L, long long trials,
                                            int lattice_count, bool periodic, uint64_t seed) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    if (lattice_count < 1) throw DomainError("lattice_count must be >= 1");
    if (r >= 1.0) throw DomainError("connectivity is degenerate at r = 1");

    ConnectivitySample out;
    out.r = r;
    out.L = L;
    out.periodic = periodic;
    out.trials = trials;
    out.lattice_count = lattice_count;

    long long hits = 0;
    for (int i = 0; i < lattice_count; ++i) {
        Lattice lat;
        ComponentLabels cl;
        uint64_t lat_seed = 0;
        for (uint64_t attempt = 0;; ++attempt) {
            lat_seed = mix_seed(seed, uint64_t(i), attempt);
            lat = generate_lattice(2, L, r, lat_seed, periodic);
            cl = components(lat);
            if (!cl.free_cells.empty()) break;
            ++out.regenerated;
        }
        Rng g(splitmix64(lat_seed + 0x6a09e667f3bcc909ULL));
        for (long long t = 0; t < trials; ++t) {
            const Vec2 x1 = sample_free(lat, cl, g);
            const Vec2 x2{runif(g) * L, runif(g) * L};
            if (same_component(lat, cl, x1, x2)) ++hits;
        }
    }
    const double total = double(trials) * double(lattice_count);
    out.p_hat = double(hits) / total;
    out.std_err = std::sqrt(out.p_hat * (1.0 - out.p_hat) / total);
    return out;
}

Vec2 sample_at_l1(const Lattice& lat, const Vec2& center, double D, L1SampleMode mode, Rng& g) {
    if (D < 0.0) throw DomainError("L1 distance must be >= 0");
    for (int attempt = 0; attempt < 100; ++attempt) {
        double radius = D;
        if (mode == L1SampleMode::Ball) radius = D * std::sqrt(runif(g));
        const double dx = (2.0 * runif(g) - 1.0) * radius;
        const double rem = radius - std::fabs(dx);
        const double dy = runif(g) < 0.5 ? rem : -rem;
        const Vec2 p{center.x + dx, center.y + dy};
        if (in_bounds(lat, p)) return p;
    }
    throw SamplingError("no in-bounds point at the requested L1 distance in 100 attempts");
}

namespace {
// midpoint quadrature nodes on the L1 sphere of radius D
std::vector<Vec2> diamond_offsets(double D, double pts_per_unit) {
    if (D == 0.0) return {Vec2{0.0, 0.0}};
    const Vec2 verts[4] = {{D, 0.0}, {0.0, D}, {-D, 0.0}, {0.0, -D}};
    const int n_edge = std::max(16, int(std::ceil(pts_per_unit * D * std::sqrt(2.0))));
    std::vector<Vec2> out;
    out.reserve(std::size_t(4) * n_edge);
    for (int e = 0; e < 4; ++e) {
        const Vec2& a = verts[e];
        const Vec2& b = verts[(e + 1) % 4];
        for (int j = 0; j < n_edge; ++j) {
            const double t = (j + 0.5) / n_edge;
            out.push_back(Vec2{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}
} // namespace

std::vector<L1SweepPoint> l1_sweep(double r, int L, const std::vector<double>& Ds,
                                   int lattice_count, int centers_per_lattice, uint64_t seed,
                                   double pts_per_unit) {
    if (lattice_count < 1 || centers_per_lattice < 1)
        throw DomainError("l1_sweep needs at least one lattice and one center");

    std::vector<std::vector<Vec2>> offsets;
    offsets.reserve(Ds.size());
    for (double D : Ds) offsets.push_back(diamond_offsets(D, pts_per_unit));

    std::vector<double> acc(Ds.size(), 0.0);
    std::vector<long long> cnt(Ds.size(), 0);

    for (int i = 0; i < lattice_count; ++i) {
        Lattice lat;
        ComponentLabels cl;
        uint64_t lat_seed = 0;
        for (uint64_t attempt = 0;; ++attempt) {
            lat_seed = mix_seed(seed, uint64_t(i), attempt);
            lat = generate_lattice(2, L, r, lat_seed, false);
            cl = components(lat);
            if (!cl.free_cells.empty()) break;
        }
        Rng g(splitmix64(lat_seed + 0xbb67ae8584caa73bULL));
        for (int c = 0; c < centers_per_lattice; ++c) {
            // centers shared across every D (common random numbers)
            const Vec2 x1 = sample_free(lat, cl, g);
            for (std::size_t k = 0; k < Ds.size(); ++k) {
                long long nin = 0, nconn = 0;
                for (const Vec2& off : offsets[k]) {
                    const Vec2 p{x1.x + off.x, x1.y + off.y};
                    if (!in_bounds(lat, p)) continue;
                    ++nin;
                    if (same_component(lat, cl, x1, p)) ++nconn;
                }
                if (nin == 0) continue;
                acc[k] += double(nconn) / double(nin);
                ++cnt[k];
            }
        }
    }

    std::vector<L1SweepPoint> out(Ds.size());
    for (std::size_t k = 0; k < Ds.size(); ++k) {
        out[k].r = r;
        out[k].D = Ds[k];
        out[k].centers = cnt[k];
        out[k].p_hat = cnt[k] ? acc[k] / double(cnt[k]) : 0.0;
    }
    return out;
}

namespace {
struct LsqResult {
    std::vector<double> coeffs;
    double r2 = 0.0;
    int iterations = 0;
};

// EvalFn: (coeffs, point) -> model value, writing d(model)/d(coeff) into grad
template <class Point, class EvalFn>
LsqResult damped_lsq(const std::vector<Point>& pts, const std::vector<double>& ys,
                     std::vector<double> coeffs, EvalFn eval) {
    const int np = int(coeffs.size());
    const int nd = int(pts.size());
    std::vector<double> grad(np);

    auto sse_of = [&](const std::vector<double>& cs) {
        double s = 0.0;
        for (int i = 0; i < nd; ++i) {
            const double res = ys[i] - eval(cs, pts[i], grad.data());
            s += res * res;
        }
        return s;
    };

    double mean_y = 0.0;
    for (double y : ys) mean_y += y;
    mean_y /= nd;
    double sst = 0.0;
    for (double y : ys) sst += (y - mean_y) * (y - mean_y);
    auto r2_of = [&](double sse) {
        if (sst == 0.0) return sse == 0.0 ? 1.0 : 0.0;
        return 1.0 - sse / sst;
    };

    double sse = sse_of(coeffs);
    std::vector<double> best = coeffs;
    double best_sse = sse;

    double lambda = 1e-3;
    const int cap = 500;
    for (int iter = 1; iter <= cap; ++iter) {
        Eigen::MatrixXd jtj = Eigen::MatrixXd::Zero(np, np);
        Eigen::VectorXd jtr = Eigen::VectorXd::Zero(np);
        for (int i = 0; i < nd; ++i) {
            const double res = ys[i] - eval(coeffs, pts[i], grad.data());
            for (int a = 0; a < np; ++a) {
                jtr(a) += grad[a] * res;
                for (int b = a; b < np; ++b) jtj(a, b) += grad[a] * grad[b];
            }
        }
        for (int a = 0; a < np; ++a)
            for (int b = 0; b < a; ++b) jtj(a, b) = jtj(b, a);

        Eigen::MatrixXd damped = jtj;
        for (int a = 0; a < np; ++a) {
            const double di = std::max(jtj(a, a), 1e-12);
            damped(a, a) += lambda * di;
        }
        const Eigen::VectorXd delta = damped.ldlt().solve(jtr);
        if (!delta.allFinite()) {
            lambda *= 10.0;
            continue;
        }

        double cn = 0.0;
        for (int a = 0; a < np; ++a) cn += coeffs[a] * coeffs[a];
        const double rel = delta.norm() / (std::sqrt(cn) + 1e-12);
        if (rel < 1e-10) return {coeffs, r2_of(sse), iter};

        std::vector<double> trial = coeffs;
        for (int a = 0; a < np; ++a) trial[a] += delta(a);
        const double trial_sse = sse_of(trial);
        if (std::isfinite(trial_sse) && trial_sse <= sse) {
            coeffs = trial;
            sse = trial_sse;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (sse < best_sse) {
                best = coeffs;
                best_sse = sse;
            }
        } else {
            lambda *= 10.0;
        }
    }
    throw FitFailure("least-squares iteration cap reached", best, r2_of(best_sse));
}
} // namespace

PStarFit fit_pstar(const std::vector<ConnectivitySample>& data, const PStarModel& init) {
    if (data.size() < 20) throw DomainError("fit_pstar needs at least 20 samples");
    std::vector<ConnectivitySample> sorted = data;
    std::sort(sorted.begin(), sorted.end(), [](const ConnectivitySample& a, const ConnectivitySample& b) {
        if (a.r != b.r) return a.r < b.r;
        if (a.L != b.L) return a.L < b.L;
        return a.p_hat < b.p_hat;
    });
    std::vector<double> ys(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) ys[i] = sorted[i].p_hat;

    auto eval = [](const std::vector<double>& cs, const ConnectivitySample& s, double* grad) {
        const double a = cs[0], b = cs[1], c = cs[2], d = cs[3], f = cs[4];
        const double L = double(s.L);
        const double u = a * (L - b) * (s.r - c);
        const double sig = 1.0 / (1.0 + std::exp(-u));
        const double w = f * sig * (1.0 - sig);
        grad[0] = w * (L - b) * (s.r - c);
        grad[1] = -w * a * (s.r - c);
        grad[2] = -w * a * (L - b);
        grad[3] = 1.0 / (L * L);
        grad[4] = sig;
        return f * sig + d / (L * L);
    };

    LsqResult res = damped_lsq(sorted, ys, {init.a, init.b, init.c, init.d, init.f}, eval);
    PStarFit out;
    out.model = PStarModel{res.coeffs[0], res.coeffs[1], res.coeffs[2], res.coeffs[3], res.coeffs[4]};
    out.r2 = res.r2;
    out.iterations = res.iterations;
    return out;
}

L1Fit fit_l1(const std::vector<L1Point>& data, const L1Model& init) {
    if (data.size() < 20) throw DomainError("fit_l1 needs at least 20 samples");
    std::vector<L1Point> sorted = data;
    std::sort(sorted.begin(), sorted.end(), [](const L1Point& a, const L1Point& b) {
        if (a.r != b.r) return a.r < b.r;
        if (a.D != b.D) return a.D < b.D;
        return a.p < b.p;
    });
    std::vector<double> ys(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) ys[i] = sorted[i].p;

    auto eval = [](const std::vector<double>& cs, const L1Point& s, double* grad) {
        const double a = cs[0], b = cs[1], c = cs[2];
        const double e = std::exp((b * s.r + c) * s.D);
        grad[0] = e;
        grad[1] = a * s.r * s.D * e;
        grad[2] = a * s.D * e;
        return a * e;
    };

    LsqResult res = damped_lsq(sorted, ys, {init.a, init.b, init.c}, eval);
    L1Fit out;
    out.model = L1Model{res.coeffs[0], res.coeffs[1], res.coeffs[2], init.L_fit};
    out.r2 = res.r2;
    out.iterations = res.iterations;
    return out;
}

ModelPreset builtin_preset(const std::string& name) {
    if (name == "pstar-paper")
        return ModelPreset{name, "pstar", {-0.1597, -54.59, 0.3212, 1.195, 0.9542}, 0.9957, "builtin"};
    if (name == "l1-paper-L72")
        return ModelPreset{name, "l1", {0.479, -1.72, 0.674, 72.0}, 0.981, "builtin"};
    throw DomainError("unknown model preset '" + name + "'");
}

PStarModel pstar_from_preset(const ModelPreset& p) {
    if (p.kind != "pstar" || p.coeffs.size() != 5)
        throw ShapeError("preset '" + p.name + "' is not a pstar model");
    return PStarModel{p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3], p.coeffs[4]};
}

L1Model l1_from_preset(const ModelPreset& p) {
    if (p.kind != "l1" || p.coeffs.size() != 4)
        throw ShapeError("preset '" + p.name + "' is not an l1 model");
    return L1Model{p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3]};
}

void save_presets(const std::string& path, const std::vector<ModelPreset>& presets) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : presets) {
        std::vector<std::string> row{p.name, p.kind};
        for (double c : p.coeffs) row.push_back(fmt_num(c));
        row.push_back(fmt_num(p.r2));
        row.push_back(p.source);
        rows.push_back(std::move(row));
    }
    write_csv(path, "name,model_kind,coeffs...,R2,source", rows);
}

std::vector<ModelPreset> load_presets(const std::string& path) {
    auto rows = parse_csv(read_text_file(path), true);
    std::vector<ModelPreset> out;
    for (const auto& row : rows) {
        if (row.size() < 5) throw ShapeError("malformed preset row in '" + path + "'");
        ModelPreset p;
        p.name = row[0];
        p.kind = row[1];
        for (std::size_t i = 2; i + 2 < row.size(); ++i) p.coeffs.push_back(std::stod(row[i]));
        p.r2 = std::stod(row[row.size() - 2]);
        p.source = row.back();
        const std::size_t want = p.kind == "pstar" ? 5 : p.kind == "l1" ? 4 : 0;
        if (want == 0 || p.coeffs.size() != want)
            throw ShapeError("preset '" + p.name + "': bad model kind or coefficient count");
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace qmp
