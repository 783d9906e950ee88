#include "vizpipe/errors.hpp"
#include "vizpipe/kernels.hpp"

#include <cmath>
#include <numbers>

namespace vizpipe {

std::vector<double> auto_levels(double lo, double hi, int n) {
    if (lo > hi) throw RangeError("auto levels: min exceeds max");
    if (n < 1) throw RangeError("auto levels: count must be at least 1");
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) levels.push_back(lo + k * (hi - lo) / (n + 1));
    return levels;
}

PolyData compute_normals(const PolyData& mesh) {
    PolyData out = mesh;
    std::vector<Vec3> acc(mesh.points.size(), Vec3{0, 0, 0});
    for (const auto& t : mesh.triangles) {
        const Vec3& a = mesh.points[t[0]];
        const Vec3& b = mesh.points[t[1]];
        const Vec3& c = mesh.points[t[2]];
        Vec3 u{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        Vec3 v{c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        // Unnormalised cross product: its length is twice the area.
        Vec3 n{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
        for (auto i : t)
            for (int a3 = 0; a3 < 3; ++a3) acc[i][a3] += n[a3];
    }
    std::vector<Vec3> normals(mesh.points.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        const double len = std::sqrt(acc[i][0] * acc[i][0] + acc[i][1] * acc[i][1] + acc[i][2] * acc[i][2]);
        normals[i] = len > 0 ? Vec3{acc[i][0] / len, acc[i][1] / len, acc[i][2] / len} : Vec3{0, 0, 1};
    }
    out.point_normals = std::move(normals);
    return out;
}

PolyData curve(int n_turns, int sample_count) {
    if (sample_count < 2) throw RangeError("curve needs at least 2 samples");
    PolyData line;
    line.points.reserve(static_cast<std::size_t>(sample_count));
    Polyline indices;
    indices.reserve(static_cast<std::size_t>(sample_count));
    const double n = n_turns;
    for (int i = 0; i < sample_count; ++i) {
        // Same spacing as linspace(0, 2*pi, sample_count).
        const double phi = i == sample_count - 1 ? 2 * std::numbers::pi
                                                 : 2 * std::numbers::pi * i / (sample_count - 1);
        const double r = 1 + 0.5 * std::cos(n * phi);
        line.points.push_back({std::cos(phi) * r, std::sin(phi) * r, 0.5 * std::sin(n * phi)});
        indices.push_back(i);
    }
    line.lines.push_back(std::move(indices));
    return line;
}

PolyData outline_bounds(const Dataset& d) {
    if (dataset_empty(d)) throw DatasetEmptyError("outline of an empty dataset");
    const auto [lo, hi] = dataset_bounds(d);
    PolyData box;
    for (int k = 0; k < 2; ++k)
        for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i) box.points.push_back({i ? hi[0] : lo[0], j ? hi[1] : lo[1], k ? hi[2] : lo[2]});
    // Corner index = i + 2j + 4k.
    static constexpr std::array<std::array<std::int32_t, 2>, 12> kEdges{{
        {0, 1}, {2, 3}, {4, 5}, {6, 7}, {0, 2}, {1, 3}, {4, 6}, {5, 7}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
    }};
    for (const auto& e : kEdges) box.lines.push_back({e[0], e[1]});
    return box;
}

} // namespace vizpipe
