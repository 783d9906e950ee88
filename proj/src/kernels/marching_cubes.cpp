#include "vizpipe/errors.hpp"
#include "vizpipe/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace vizpipe {

namespace {

using Corner = std::array<int, 3>;

constexpr std::array<Corner, 8> kCorners{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

constexpr std::array<std::array<int, 2>, 12> kEdgeCorners{{
    {0, 1}, {1, 2}, {3, 2}, {0, 3}, {4, 5}, {5, 6}, {7, 6}, {4, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
}};

// Corner cycles of the six cube faces.
constexpr std::array<std::array<int, 4>, 6> kFaces{{
    {0, 1, 2, 3}, {4, 5, 6, 7}, {0, 1, 5, 4}, {3, 2, 6, 7}, {0, 3, 7, 4}, {1, 2, 6, 5},
}};

using CaseTable = std::array<std::vector<std::array<std::uint8_t, 3>>, 256>;

int edge_between(int a, int b) {
    for (int e = 0; e < 12; ++e) {
        auto [p, q] = kEdgeCorners[e];
        if ((p == a && q == b) || (p == b && q == a)) return e;
    }
    return -1;
}

bool adjacent(int a, int b) { return edge_between(a, b) >= 0; }

std::array<double, 3> edge_midpoint(int e) {
    auto [p, q] = kEdgeCorners[e];
    std::array<double, 3> m{};
    for (int a = 0; a < 3; ++a) m[a] = 0.5 * (kCorners[p][a] + kCorners[q][a]);
    return m;
}

// Loops around each edge-connected component of the high corners. Corners
// that only touch diagonally end up in separate loops. Each loop is oriented
// so its normal points toward its component.
std::vector<std::vector<int>> trace_loops(unsigned high) {
    std::vector<std::vector<int>> loops;
    unsigned seen = 0;
    for (int start = 0; start < 8; ++start) {
        if (!(high >> start & 1u) || (seen >> start & 1u)) continue;
        unsigned component = 0;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            if (component >> c & 1u) continue;
            component |= 1u << c;
            for (int n = 0; n < 8; ++n)
                if ((high >> n & 1u) && adjacent(c, n) && !(component >> n & 1u)) stack.push_back(n);
        }
        seen |= component;

        // One segment per face that holds part of the component.
        std::vector<std::array<int, 2>> segments;
        for (const auto& face : kFaces) {
            std::vector<int> crossing;
            for (int i = 0; i < 4; ++i) {
                int a = face[i], b = face[(i + 1) % 4];
                bool ia = component >> a & 1u, ib = component >> b & 1u;
                if (ia != ib) crossing.push_back(edge_between(a, b));
            }
            if (crossing.size() == 2) segments.push_back({crossing[0], crossing[1]});
        }

        // Chain the segments into cycles.
        std::vector<bool> used(segments.size(), false);
        for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
            if (used[s0]) continue;
            used[s0] = true;
            std::vector<int> loop{segments[s0][0], segments[s0][1]};
            for (;;) {
                bool extended = false;
                for (std::size_t s = 0; s < segments.size(); ++s) {
                    if (used[s]) continue;
                    int tail = loop.back();
                    if (segments[s][0] == tail || segments[s][1] == tail) {
                        int next = segments[s][0] == tail ? segments[s][1] : segments[s][0];
                        used[s] = true;
                        extended = true;
                        if (next == loop.front()) break;
                        loop.push_back(next);
                    }
                }
                if (!extended) break;
            }

            // Newell normal of the midpoint polygon against the direction to the component.
            std::array<double, 3> normal{0, 0, 0}, centre{0, 0, 0}, target{0, 0, 0};
            for (std::size_t i = 0; i < loop.size(); ++i) {
                auto p = edge_midpoint(loop[i]);
                auto q = edge_midpoint(loop[(i + 1) % loop.size()]);
                normal[0] += (p[1] - q[1]) * (p[2] + q[2]);
                normal[1] += (p[2] - q[2]) * (p[0] + q[0]);
                normal[2] += (p[0] - q[0]) * (p[1] + q[1]);
                for (int a = 0; a < 3; ++a) centre[a] += p[a] / static_cast<double>(loop.size());
            }
            int count = 0;
            for (int c = 0; c < 8; ++c)
                if (component >> c & 1u) {
                    for (int a = 0; a < 3; ++a) target[a] += kCorners[c][a];
                    ++count;
                }
            double dot = 0;
            for (int a = 0; a < 3; ++a) dot += normal[a] * (target[a] / count - centre[a]);
            if (dot < 0) std::reverse(loop.begin(), loop.end());
            loops.push_back(std::move(loop));
        }
    }
    return loops;
}

std::vector<std::array<std::uint8_t, 3>> fan(const std::vector<std::vector<int>>& loops, bool flip) {
    std::vector<std::array<std::uint8_t, 3>> tris;
    for (const auto& loop : loops) {
        for (std::size_t i = 1; i + 1 < loop.size(); ++i) {
            std::array<std::uint8_t, 3> t{static_cast<std::uint8_t>(loop[0]), static_cast<std::uint8_t>(loop[i]),
                                          static_cast<std::uint8_t>(loop[i + 1])};
            if (flip) std::swap(t[1], t[2]);
            tris.push_back(t);
        }
    }
    return tris;
}

CaseTable build_case_table() {
    CaseTable table;
    for (unsigned c = 0; c < 256; ++c) {
        const int high = std::popcount(c);
        if (high <= 4) {
            table[c] = fan(trace_loops(c), false);
        } else {
            // Complement symmetry: surround the low corners and flip orientation.
            table[c] = fan(trace_loops(~c & 0xFFu), true);
        }
    }
    return table;
}

const CaseTable& case_table() {
    static const CaseTable table = build_case_table();
    return table;
}

} // namespace

const std::vector<std::array<std::uint8_t, 3>>& marching_cubes_case(std::uint8_t config) {
    return case_table()[config];
}

PolyData marching_cubes(const ImageData& grid, double level) {
    if (!grid.point_scalars()) throw DatasetAttributeError("marching cubes requires point scalars");
    const auto& dims = grid.dims();
    if (dims[0] < 2 || dims[1] < 2 || dims[2] < 2)
        throw DatasetParamError("marching cubes requires at least 2 points per axis");

    const auto values = grid.point_scalars()->doubles();
    const auto& table = case_table();
    const std::size_t nx = dims[0], ny = dims[1], nz = dims[2];
    const auto& origin = grid.origin();
    const auto& spacing = grid.spacing();

    auto linear = [&](std::size_t i, std::size_t j, std::size_t k) { return i + nx * (j + ny * k); };

    PolyData mesh;
    std::unordered_map<std::uint64_t, std::int32_t> edge_vertex;

    auto vertex_on_edge = [&](std::size_t i, std::size_t j, std::size_t k, int edge) -> std::int32_t {
        auto [c0, c1] = kEdgeCorners[edge];
        const auto& lo = kCorners[c0];
        const auto& hi = kCorners[c1];
        std::size_t li = i + lo[0], lj = j + lo[1], lk = k + lo[2];
        int axis = lo[0] != hi[0] ? 0 : (lo[1] != hi[1] ? 1 : 2);
        std::uint64_t key = 3 * static_cast<std::uint64_t>(linear(li, lj, lk)) + static_cast<std::uint64_t>(axis);
        auto [it, inserted] = edge_vertex.try_emplace(key, 0);
        if (!inserted) return it->second;

        const double v0 = values[linear(li, lj, lk)];
        const double v1 = values[linear(i + hi[0], j + hi[1], k + hi[2])];
        const double t = v1 == v0 ? 0.5 : (level - v0) / (v1 - v0);
        Vec3 p{origin[0] + spacing[0] * static_cast<double>(li), origin[1] + spacing[1] * static_cast<double>(lj),
               origin[2] + spacing[2] * static_cast<double>(lk)};
        p[axis] += t * spacing[axis];
        it->second = static_cast<std::int32_t>(mesh.points.size());
        mesh.points.push_back(p);
        return it->second;
    };

    std::array<double, 8> cube{};
    for (std::size_t k = 0; k + 1 < nz; ++k) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            for (std::size_t i = 0; i + 1 < nx; ++i) {
                unsigned config = 0;
                for (int c = 0; c < 8; ++c) {
                    cube[c] = values[linear(i + kCorners[c][0], j + kCorners[c][1], k + kCorners[c][2])];
                    if (cube[c] > level) config |= 1u << c;
                }
                for (const auto& tri : table[config]) {
                    Triangle t{};
                    for (int v = 0; v < 3; ++v) t[v] = vertex_on_edge(i, j, k, tri[v]);
                    mesh.triangles.push_back(t);
                }
            }
        }
    }
    mesh.point_scalars = std::vector<double>(mesh.points.size(), level);
    mesh.scalars_name = grid.scalars_name();
    return mesh;
}

} // namespace vizpipe
