#include "qmp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "qmp/errors.hpp"

namespace qmp {

namespace {
constexpr std::size_t kCellGuard = std::size_t(1) << 26;

std::size_t pow_cells(int d, int L) {
    std::size_t n = 1;
    for (int k = 0; k < d; ++k) {
        if (n > kCellGuard / std::size_t(L)) throw CapacityError("lattice exceeds cell guard");
        n *= std::size_t(L);
    }
    return n;
}

struct UnionFind {
    std::vector<int32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int32_t find(int32_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int32_t a, int32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};
} // namespace

Lattice generate_lattice(int d, int L, double r, uint64_t seed, bool periodic) {
    if (d < 2) throw DomainError("lattice dimension must be >= 2");
    if (L < 2) throw DomainError("lattice side must be >= 2");
    if (r < 0.0 || r > 1.0) throw DomainError("concentration outside [0,1]");
    Lattice lat;
    lat.d = d;
    lat.L = L;
    lat.r = r;
    lat.seed = seed;
    lat.periodic = periodic;
    std::size_t n = pow_cells(d, L);
    lat.occupied.resize(n);
    Rng g(seed);
    for (std::size_t i = 0; i < n; ++i) lat.occupied[i] = runif(g) < r ? 1 : 0;
    return lat;
}

ComponentLabels components(const Lattice& lat) {
    const std::size_t n = lat.cell_count();
    UnionFind uf(n);
    // unite along +1 face neighbors per axis; strides are L^k
    std::size_t stride = 1;
    for (int axis = 0; axis < lat.d; ++axis) {
        const std::size_t span = stride * std::size_t(lat.L); // one full period of this axis
        for (std::size_t i = 0; i < n; ++i) {
            if (lat.occ(i)) continue;
            const int coord = int((i / stride) % std::size_t(lat.L));
            if (coord + 1 < lat.L) {
                std::size_t j = i + stride;
                if (!lat.occ(j)) uf.unite(int32_t(i), int32_t(j));
            } else if (lat.periodic) {
                std::size_t j = i + stride - span;
                if (!lat.occ(j)) uf.unite(int32_t(i), int32_t(j));
            }
        }
        stride *= std::size_t(lat.L);
    }
    ComponentLabels cl;
    cl.label.assign(n, -1);
    cl.free_cells.reserve(n);
    std::vector<int32_t> root_to_id(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (lat.occ(i)) continue;
        cl.free_cells.push_back(uint32_t(i));
        int32_t root = uf.find(int32_t(i));
        if (root_to_id[root] < 0) {
            root_to_id[root] = int32_t(cl.sizes.size());
            cl.sizes.push_back(0);
        }
        cl.label[i] = root_to_id[root];
        ++cl.sizes[root_to_id[root]];
    }
    for (std::size_t id = 0; id < cl.sizes.size(); ++id)
        if (cl.largest < 0 || cl.sizes[id] > cl.sizes[cl.largest]) cl.largest = int32_t(id);
    return cl;
}

bool in_bounds(const Lattice& lat, const Vec2& p) {
    return p.x >= 0.0 && p.y >= 0.0 && p.x <= double(lat.L) && p.y <= double(lat.L);
}

std::size_t cell_of(const Lattice& lat, const Vec2& p) {
    if (!in_bounds(lat, p)) throw DomainError("point outside lattice domain");
    int cx = std::min(int(p.x), lat.L - 1);
    int cy = std::min(int(p.y), lat.L - 1);
    return lat.idx2(cx, cy);
}

Vec2 sample_free(const Lattice& lat, const ComponentLabels& cl, Rng& g) {
    if (cl.free_cells.empty()) throw EmptyFreeSpaceError("lattice has no free cells");
    std::size_t idx = cl.free_cells[runif_index(g, cl.free_cells.size())];
    int cx = int(idx % std::size_t(lat.L));
    int cy = int(idx / std::size_t(lat.L));
    return Vec2{double(cx) + runif(g), double(cy) + runif(g)};
}

Vec2 sample_component(const Lattice& lat, const ComponentLabels& cl, int32_t comp, Rng& g) {
    std::vector<uint32_t> cells;
    for (uint32_t idx : cl.free_cells)
        if (cl.label[idx] == comp) cells.push_back(idx);
    if (cells.empty()) throw EmptyFreeSpaceError("component has no cells");
    std::size_t idx = cells[runif_index(g, cells.size())];
    int cx = int(idx % std::size_t(lat.L));
    int cy = int(idx / std::size_t(lat.L));
    return Vec2{double(cx) + runif(g), double(cy) + runif(g)};
}

bool same_component(const Lattice& lat, const ComponentLabels& cl, const Vec2& a, const Vec2& b) {
    if (!in_bounds(lat, a) || !in_bounds(lat, b)) return false;
    int32_t la = cl.label[cell_of(lat, a)];
    int32_t lb = cl.label[cell_of(lat, b)];
    return la >= 0 && la == lb;
}

std::string to_text(const Lattice& lat) {
    if (lat.d != 2) throw DomainError("text format is defined for d=2");
    std::ostringstream os;
    os << "qmplattice v1 d=" << lat.d << " L=" << lat.L << " r=" << lat.r
       << " seed=" << lat.seed << " periodic=" << (lat.periodic ? 1 : 0) << "\n";
    for (int y = 0; y < lat.L; ++y) {
        for (int x = 0; x < lat.L; ++x) os << (lat.occ(lat.idx2(x, y)) ? '#' : '.');
        os << "\n";
    }
    return os.str();
}

Lattice from_text(const std::string& text) {
    std::istringstream is(text);
    std::string magic, version;
    is >> magic >> version;
    if (magic != "qmplattice" || version != "v1")
        throw ConfigError("not a qmplattice v1 file");
    Lattice lat;
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ConfigError("bad lattice header token: " + tok);
        std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "d") lat.d = std::stoi(val);
        else if (key == "L") lat.L = std::stoi(val);
        else if (key == "r") lat.r = std::stod(val);
        else if (key == "seed") lat.seed = std::stoull(val);
        else if (key == "periodic") lat.periodic = val != "0";
        else throw ConfigError("unknown lattice header key: " + key);
        if (is.peek() == '\n') break;
    }
    if (lat.d != 2) throw ConfigError("text format supports d=2 only");
    if (lat.L < 2) throw ConfigError("bad lattice side");
    is.ignore();
    lat.occupied.assign(std::size_t(lat.L) * lat.L, 0);
    std::string line;
    for (int y = 0; y < lat.L; ++y) {
        if (!std::getline(is, line) || int(line.size()) < lat.L)
            throw ConfigError("truncated lattice body");
        for (int x = 0; x < lat.L; ++x) {
            char c = line[x];
            if (c != '#' && c != '.') throw ConfigError("bad lattice cell char");
            lat.occupied[lat.idx2(x, y)] = c == '#' ? 1 : 0;
        }
    }
    return lat;
}

void save_lattice(const Lattice& lat, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path);
    os << to_text(lat);
}

Lattice load_lattice(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return from_text(buf.str());
}

} // namespace qmp
