#include "qmp/dynamics.hpp"

#include <cmath>

#include "qmp/errors.hpp"

namespace qmp {

LinearPlannerConfig::LinearPlannerConfig() {
    A << -1.5, -2.0,
          1.0,  3.0;
    B <<  0.5,  0.25,
          0.0,  1.0;
    K <<  1.9, -7.5,
          1.0,  7.0;
}

Eigen::Matrix2d LinearPlannerConfig::closed_loop() const { return A - B * K; }

Eigen::Matrix2d LinearPlannerConfig::step_matrix() const {
    if (mode == DynMode::Euler)
        return Eigen::Matrix2d::Identity() + step_h * closed_loop();
    return closed_loop();
}

Trajectory track(const Vec2& from, const Vec2& to, const LinearPlannerConfig& cfg) {
    if (cfg.max_steps < 0) throw DomainError("max_steps must be nonnegative");
    if (!(cfg.eps > 0.0)) throw DomainError("eps must be positive");
    const Eigen::Matrix2d Phi = cfg.step_matrix();
    Eigen::Vector2d e(from.x - to.x, from.y - to.y);
    if (!e.allFinite()) throw NumericError("non-finite tracking endpoint");

    Trajectory tr;
    tr.points.push_back(from);
    for (int k = 0; k < cfg.max_steps; ++k) {
        if (e.norm() <= cfg.eps) {
            tr.converged = true;
            tr.steps = k;
            return tr;
        }
        e = Phi * e;
        if (!e.allFinite()) throw NumericError("tracking state diverged");
        tr.points.push_back(Vec2{to.x + e.x(), to.y + e.y()});
        tr.steps = k + 1;
    }
    tr.converged = e.norm() <= cfg.eps;
    return tr;
}

namespace {
bool point_free(const Lattice& lat, const Vec2& p) {
    if (!in_bounds(lat, p)) return false;
    return !lat.occ(cell_of(lat, p));
}
} // namespace

bool path_collision_free(const Lattice& lat, const std::vector<Vec2>& pts, double ds) {
    if (!(ds > 0.0)) throw DomainError("collision sample spacing must be positive");
    if (pts.empty()) return true;
    if (!point_free(lat, pts.front())) return false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2& a = pts[i];
        const Vec2& b = pts[i + 1];
        const double len = std::sqrt(dist2(a, b));
        const int parts = std::max(1, int(std::ceil(len / ds)));
        for (int j = 1; j <= parts; ++j) {
            const double t = double(j) / parts;
            const Vec2 p{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
            if (!point_free(lat, p)) return false;
        }
    }
    return true;
}

bool reachable(const Lattice& lat, const ComponentLabels& labels, const Vec2& from,
               const Vec2& to, const LinearPlannerConfig& cfg) {
    if (!point_free(lat, from) || !point_free(lat, to)) return false;
    if (!same_component(lat, labels, from, to)) return false;
    Trajectory tr;
    try {
        tr = track(from, to, cfg);
    } catch (const NumericError&) {
        return false;
    }
    if (!tr.converged) return false;
    tr.points.push_back(to);
    return path_collision_free(lat, tr.points, cfg.collide_ds);
}

} // namespace qmp
