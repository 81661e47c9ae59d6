#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "qmp/rng.hpp"

namespace qmp {

// Occupancy grid of L^d unit cells. Axis 0 varies fastest in the linear
// index; for d=2 the cell (x, y) sits at index y*L + x.
struct Lattice {
    int d = 2;
    int L = 0;
    double r = 0.0;
    uint64_t seed = 0;
    bool periodic = false;
    std::vector<uint8_t> occupied;

    std::size_t cell_count() const { return occupied.size(); }
    bool occ(std::size_t idx) const { return occupied[idx] != 0; }
    std::size_t idx2(int x, int y) const { return std::size_t(y) * L + x; }
};

Lattice generate_lattice(int d, int L, double r, uint64_t seed, bool periodic);

struct ComponentLabels {
    // -1 for occupied cells, else a dense component id assigned in cell scan
    // order (so the smallest id belongs to the first-seen component)
    std::vector<int32_t> label;
    std::vector<int64_t> sizes;         // cells per component id
    int32_t largest = -1;               // max cardinality, ties to smallest id
    std::vector<uint32_t> free_cells;   // linear indices, scan order
};

ComponentLabels components(const Lattice& lat);

struct Vec2 {
    double x = 0.0, y = 0.0;
};

inline double dist2(const Vec2& a, const Vec2& b) {
    double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

// closed domain [0, L]^2; the far boundary belongs to the last cell
bool in_bounds(const Lattice& lat, const Vec2& p);
std::size_t cell_of(const Lattice& lat, const Vec2& p); // throws DomainError out of bounds

Vec2 sample_free(const Lattice& lat, const ComponentLabels& cl, Rng& g);
// uniform point over the cells of one component id
Vec2 sample_component(const Lattice& lat, const ComponentLabels& cl, int32_t comp, Rng& g);
bool same_component(const Lattice& lat, const ComponentLabels& cl, const Vec2& a, const Vec2& b);

// text format round trip, see README
std::string to_text(const Lattice& lat);
Lattice from_text(const std::string& text);
void save_lattice(const Lattice& lat, const std::string& path);
Lattice load_lattice(const std::string& path);

} // namespace qmp
