#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace vizpipe {

using Vec3 = std::array<double, 3>;
using Dims = std::array<std::size_t, 3>;

enum class ElementKind { Float64, Int32 };

/// N-dimensional array value with a flat row-major buffer. The shape is fixed
/// at construction; int32 arrays are kept in their own buffer.
class NumericArray {
public:
    NumericArray() = default;
    NumericArray(std::vector<std::size_t> shape, std::vector<double> values);
    NumericArray(std::vector<std::size_t> shape, std::vector<std::int32_t> values);

    /// 1-D float64 array.
    static NumericArray vector(std::vector<double> values);

    const std::vector<std::size_t>& shape() const noexcept { return shape_; }
    std::size_t rank() const noexcept { return shape_.size(); }
    std::size_t size() const noexcept;
    ElementKind element_kind() const noexcept;

    /// Element as double regardless of storage kind.
    double at(std::size_t flat_index) const;

    /// Float64 view; throws DatasetShapeError for int32 arrays.
    std::span<const double> doubles() const;
    std::span<const std::int32_t> ints() const;

    /// Elements widened to double.
    std::vector<double> to_doubles() const;

    friend bool operator==(const NumericArray&, const NumericArray&) = default;

private:
    std::vector<std::size_t> shape_;
    std::variant<std::vector<double>, std::vector<std::int32_t>> values_;
};

/// Regular 3-D lattice with optional point scalars in x-fastest order.
class ImageData {
public:
    ImageData() = default;

    const Dims& dims() const noexcept { return dims_; }
    const Vec3& origin() const noexcept { return origin_; }
    const Vec3& spacing() const noexcept { return spacing_; }
    const std::optional<NumericArray>& point_scalars() const noexcept { return scalars_; }
    const std::string& scalars_name() const noexcept { return scalars_name_; }

    std::size_t point_count() const noexcept { return dims_[0] * dims_[1] * dims_[2]; }
    std::array<Vec3, 2> bounds() const;

    friend bool operator==(const ImageData&, const ImageData&) = default;

private:
    friend ImageData image_data_new(Dims, Vec3, Vec3, std::optional<NumericArray>, std::string);

    Dims dims_{1, 1, 1};
    Vec3 origin_{0, 0, 0};
    Vec3 spacing_{1, 1, 1};
    std::optional<NumericArray> scalars_;
    std::string scalars_name_ = "scalars";
};

using Triangle = std::array<std::int32_t, 3>;
using Polyline = std::vector<std::int32_t>;

/// Points with triangle and polyline connectivity and optional point attributes.
struct PolyData {
    std::vector<Vec3> points;
    std::vector<Triangle> triangles;
    std::vector<Polyline> lines;
    std::optional<std::vector<double>> point_scalars;
    std::optional<std::vector<Vec3>> point_normals;
    std::string scalars_name = "scalars";

    bool empty() const noexcept { return points.empty(); }
    std::array<Vec3, 2> bounds() const;

    /// Throws DatasetShapeError on out-of-range indices or attribute length
    /// mismatches, DatasetParamError on non-unit normals.
    void validate() const;

    friend bool operator==(const PolyData&, const PolyData&) = default;
};

using Dataset = std::variant<ImageData, PolyData>;
using DatasetPtr = std::shared_ptr<const Dataset>;

enum class DatasetKind { ImageData, PolyData };

struct DatasetInfo {
    DatasetKind dataset_kind = DatasetKind::ImageData;
    std::vector<std::string> attribute_types; // subset of {"point"}
    std::vector<std::string> attributes;      // subset of {"scalars", "normals"}

    friend bool operator==(const DatasetInfo&, const DatasetInfo&) = default;
};

std::string to_string(DatasetKind kind);

/// Validating constructor. Throws DatasetShapeError when the scalar count
/// differs from nx*ny*nz and DatasetParamError for zero dims or spacing <= 0.
ImageData image_data_new(Dims dims, Vec3 origin, Vec3 spacing,
                         std::optional<NumericArray> scalars = std::nullopt,
                         std::string scalars_name = "scalars");

DatasetInfo dataset_info(const ImageData& d);
DatasetInfo dataset_info(const PolyData& d);
DatasetInfo dataset_info(const Dataset& d);

/// World position of point i + nx*(j + ny*k).
Vec3 point_position(const ImageData& d, std::size_t linear_index);

/// Inverse of the x-fastest linear index.
std::array<std::size_t, 3> lattice_index(const ImageData& d, std::size_t linear_index);

std::array<Vec3, 2> dataset_bounds(const Dataset& d);
bool dataset_empty(const Dataset& d);

} // namespace vizpipe
