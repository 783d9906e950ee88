#include "vizpipe/dataset.hpp"

#include "vizpipe/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vizpipe {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
    std::size_t n = 1;
    for (auto e : shape) n *= e;
    return n;
}

std::string shape_text(const std::vector<std::size_t>& shape) {
    std::string s = "(";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + ")";
}

} // namespace

NumericArray::NumericArray(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (shape_product(shape_) != std::get<0>(values_).size())
        throw DatasetShapeError("array shape " + shape_text(shape_) + " does not match " +
                                std::to_string(std::get<0>(values_).size()) + " values");
}

NumericArray::NumericArray(std::vector<std::size_t> shape, std::vector<std::int32_t> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
    if (shape_product(shape_) != std::get<1>(values_).size())
        throw DatasetShapeError("array shape " + shape_text(shape_) + " does not match " +
                                std::to_string(std::get<1>(values_).size()) + " values");
}

NumericArray NumericArray::vector(std::vector<double> values) {
    auto n = values.size();
    return NumericArray({n}, std::move(values));
}

std::size_t NumericArray::size() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, values_);
}

ElementKind NumericArray::element_kind() const noexcept {
    return values_.index() == 0 ? ElementKind::Float64 : ElementKind::Int32;
}

double NumericArray::at(std::size_t flat_index) const {
    if (flat_index >= size()) throw IndexError("array index " + std::to_string(flat_index) + " out of range");
    return std::visit([&](const auto& v) { return static_cast<double>(v[flat_index]); }, values_);
}

std::span<const double> NumericArray::doubles() const {
    if (values_.index() != 0) throw DatasetShapeError("array is not float64");
    return std::get<0>(values_);
}

std::span<const std::int32_t> NumericArray::ints() const {
    if (values_.index() != 1) throw DatasetShapeError("array is not int32");
    return std::get<1>(values_);
}

std::vector<double> NumericArray::to_doubles() const {
    return std::visit([](const auto& v) { return std::vector<double>(v.begin(), v.end()); }, values_);
}

std::array<Vec3, 2> ImageData::bounds() const {
    std::array<Vec3, 2> b{};
    for (int a = 0; a < 3; ++a) {
        b[0][a] = origin_[a];
        b[1][a] = origin_[a] + static_cast<double>(dims_[a] - 1) * spacing_[a];
    }
    return b;
}

std::array<Vec3, 2> PolyData::bounds() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::array<Vec3, 2> b{Vec3{inf, inf, inf}, Vec3{-inf, -inf, -inf}};
    for (const auto& p : points) {
        for (int a = 0; a < 3; ++a) {
            b[0][a] = std::min(b[0][a], p[a]);
            b[1][a] = std::max(b[1][a], p[a]);
        }
    }
    return b;
}

void PolyData::validate() const {
    const auto n = static_cast<std::int64_t>(points.size());
    auto check = [n](std::int32_t i) {
        if (i < 0 || i >= n)
            throw DatasetShapeError("connectivity index " + std::to_string(i) + " out of range [0," +
                                    std::to_string(n) + ")");
    };
    for (const auto& t : triangles)
        for (auto i : t) check(i);
    for (const auto& l : lines)
        for (auto i : l) check(i);
    if (point_scalars && point_scalars->size() != points.size())
        throw DatasetShapeError("point scalars length " + std::to_string(point_scalars->size()) +
                                " != point count " + std::to_string(points.size()));
    if (point_normals) {
        if (point_normals->size() != points.size())
            throw DatasetShapeError("point normals length " + std::to_string(point_normals->size()) +
                                    " != point count " + std::to_string(points.size()));
        for (const auto& v : *point_normals) {
            double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
            if (!(std::abs(len - 1.0) <= 1e-6)) throw DatasetParamError("point normal is not unit length");
        }
    }
}

std::string to_string(DatasetKind kind) {
    return kind == DatasetKind::ImageData ? "image_data" : "poly_data";
}

ImageData image_data_new(Dims dims, Vec3 origin, Vec3 spacing, std::optional<NumericArray> scalars,
                         std::string scalars_name) {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] < 1) throw DatasetParamError("image dims must be >= 1 on every axis");
        if (!(spacing[a] > 0) || !std::isfinite(spacing[a]))
            throw DatasetParamError("image spacing must be positive and finite");
        if (!std::isfinite(origin[a])) throw DatasetParamError("image origin must be finite");
    }
    const std::size_t n = dims[0] * dims[1] * dims[2];
    if (scalars && scalars->size() != n)
        throw DatasetShapeError("image has " + std::to_string(n) + " points but " +
                                std::to_string(scalars->size()) + " scalars");
    ImageData d;
    d.dims_ = dims;
    d.origin_ = origin;
    d.spacing_ = spacing;
    if (scalars) d.scalars_ = NumericArray({n}, scalars->to_doubles());
    d.scalars_name_ = std::move(scalars_name);
    return d;
}

DatasetInfo dataset_info(const ImageData& d) {
    DatasetInfo info{DatasetKind::ImageData, {"point"}, {}};
    if (d.point_scalars()) info.attributes.push_back("scalars");
    return info;
}

DatasetInfo dataset_info(const PolyData& d) {
    DatasetInfo info{DatasetKind::PolyData, {"point"}, {}};
    if (d.point_scalars) info.attributes.push_back("scalars");
    if (d.point_normals) info.attributes.push_back("normals");
    return info;
}

DatasetInfo dataset_info(const Dataset& d) {
    return std::visit([](const auto& x) { return dataset_info(x); }, d);
}

std::array<std::size_t, 3> lattice_index(const ImageData& d, std::size_t linear_index) {
    const auto& n = d.dims();
    if (linear_index >= d.point_count())
        throw IndexError("point index " + std::to_string(linear_index) + " out of range");
    std::size_t i = linear_index % n[0];
    std::size_t rest = linear_index / n[0];
    return {i, rest % n[1], rest / n[1]};
}

Vec3 point_position(const ImageData& d, std::size_t linear_index) {
    auto ijk = lattice_index(d, linear_index);
    Vec3 p{};
    for (int a = 0; a < 3; ++a) p[a] = d.origin()[a] + d.spacing()[a] * static_cast<double>(ijk[a]);
    return p;
}

std::array<Vec3, 2> dataset_bounds(const Dataset& d) {
    return std::visit([](const auto& x) { return x.bounds(); }, d);
}

bool dataset_empty(const Dataset& d) {
    if (auto* p = std::get_if<PolyData>(&d)) return p->empty();
    return false;
}

} // namespace vizpipe
