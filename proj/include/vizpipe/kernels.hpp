#pragma once

#include "vizpipe/dataset.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace vizpipe {

/// Iso-surface of the point scalars at `level`. Cells are visited x-fastest and
/// vertices are shared through their lattice edge, so the result is manifold
/// wherever the case table is. Every vertex carries `level` as its scalar.
/// Throws DatasetAttributeError without scalars, DatasetParamError when an
/// axis has fewer than two points.
PolyData marching_cubes(const ImageData& grid, double level);

/// Triangles emitted for one cube sign configuration (bit i set when corner i
/// lies above the level). Edge numbering follows the usual corner order
/// (0,0,0) (1,0,0) (1,1,0) (0,1,0) (0,0,1) (1,0,1) (1,1,1) (0,1,1).
const std::vector<std::array<std::uint8_t, 3>>& marching_cubes_case(std::uint8_t config);

/// `n` levels strictly inside (lo, hi): lo + k*(hi-lo)/(n+1). Throws RangeError
/// when lo > hi or n < 1.
std::vector<double> auto_levels(double lo, double hi, int n);

/// Area-weighted vertex normals. Points not used by any triangle get (0,0,1).
PolyData compute_normals(const PolyData& mesh);

/// Closed parametric curve sampled at `sample_count` points over [0, 2*pi].
PolyData curve(int n_turns, int sample_count);

/// Axis-aligned bounding box as 8 corner points and 12 segments. Throws
/// DatasetEmptyError for a PolyData without points.
PolyData outline_bounds(const Dataset& d);

enum class Colormap { BlueRed, Gray };

std::string to_string(Colormap map);
Colormap colormap_from_string(const std::string& name);

using Color = std::array<double, 4>;

/// 256-row colour table with a scalar range.
class LookupTable {
public:
    static constexpr int kRows = 256;

    LookupTable(Colormap map, double lo, double hi);

    Colormap colormap() const noexcept { return map_; }
    double range_min() const noexcept { return lo_; }
    double range_max() const noexcept { return hi_; }
    const Color& row(int i) const { return table_.at(static_cast<std::size_t>(i)); }

    /// Row index a scalar maps to.
    int row_index(double s) const noexcept;

private:
    Colormap map_;
    double lo_;
    double hi_;
    std::array<Color, kRows> table_{};
};

std::vector<Color> lut_map(const LookupTable& lut, const std::vector<double>& scalars);

} // namespace vizpipe
