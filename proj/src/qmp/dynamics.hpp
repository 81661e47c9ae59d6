#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qmp/lattice.hpp"

namespace qmp {

enum class DynMode { Euler, LiteralDiscrete };

// Closed-loop linear tracking model. The continuous plant
//   x' = A x + B u,  u = -K (x - x_ref)
// is stepped either by forward Euler with step_h (default) or by treating
// the closed-loop matrix as a discrete map directly.
struct LinearPlannerConfig {
    Eigen::Matrix2d A;
    Eigen::Matrix2d B;
    Eigen::Matrix2d K;
    DynMode mode = DynMode::Euler;
    double step_h = 0.1;
    double eps = 0.05;       // convergence radius around the target
    int max_steps = 500;
    double collide_ds = 0.1; // collision-check sample spacing

    LinearPlannerConfig();

    Eigen::Matrix2d closed_loop() const; // A - B K
    Eigen::Matrix2d step_matrix() const; // per-step error map
};

struct Trajectory {
    std::vector<Vec2> points; // visited states, points.front() == start
    bool converged = false;
    int steps = 0;
};

// Simulate tracking from `from` toward `to`. Throws NumericError if the
// state leaves the representable range (diverging closed loop).
Trajectory track(const Vec2& from, const Vec2& to, const LinearPlannerConfig& cfg);

// True when every resampled point along the polyline (spacing <= ds) lies
// inside the workspace and in a free cell.
bool path_collision_free(const Lattice& lat, const std::vector<Vec2>& pts, double ds);

// Edge test used by the planners: endpoint admissibility, shared component,
// convergent tracking, and collision-free swept path.
bool reachable(const Lattice& lat, const ComponentLabels& labels, const Vec2& from,
               const Vec2& to, const LinearPlannerConfig& cfg);

} // namespace qmp
