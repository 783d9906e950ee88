#include "vizpipe/errors.hpp"
#include "vizpipe/kernels.hpp"

#include <cmath>

namespace vizpipe {

std::string to_string(Colormap map) { return map == Colormap::BlueRed ? "blue_red" : "gray"; }

Colormap colormap_from_string(const std::string& name) {
    if (name == "blue_red") return Colormap::BlueRed;
    if (name == "gray") return Colormap::Gray;
    throw ValidationError("unknown colormap '" + name + "'");
}

LookupTable::LookupTable(Colormap map, double lo, double hi) : map_(map), lo_(lo), hi_(hi) {
    if (lo > hi) throw RangeError("lookup table range is inverted");
    for (int i = 0; i < kRows; ++i) {
        const double t = static_cast<double>(i) / (kRows - 1);
        table_[static_cast<std::size_t>(i)] =
            map == Colormap::BlueRed ? Color{t, 0.0, 1.0 - t, 1.0} : Color{t, t, t, 1.0};
    }
}

int LookupTable::row_index(double s) const noexcept {
    if (hi_ == lo_ || std::isnan(s)) return 0;
    if (s <= lo_) return 0;
    if (s >= hi_) return kRows - 1;
    const int row = static_cast<int>(std::floor((kRows - 1) * (s - lo_) / (hi_ - lo_)));
    return row < 0 ? 0 : (row > kRows - 1 ? kRows - 1 : row);
}

std::vector<Color> lut_map(const LookupTable& lut, const std::vector<double>& scalars) {
    std::vector<Color> colors;
    colors.reserve(scalars.size());
    for (double s : scalars) colors.push_back(lut.row(lut.row_index(s)));
    return colors;
}

} // namespace vizpipe
