#pragma once

#include "vizpipe/pipeline.hpp"
#include "vizpipe/registry.hpp"

namespace vizpipe {

/// Image data built from an inline 3-D array. The array is indexed [i][j][k]
/// with k varying fastest, as numpy lays it out; the output lattice has
/// dims equal to the array shape.
class ArraySource final : public Node {
public:
    static constexpr std::string_view kClassName = "ArraySource";
    ArraySource();

    std::vector<std::string> data_slots() const override { return {"scalars"}; }

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
    void validate_data(const DataSlots& slots) const override;
};

/// The trefoil-like closed curve used by the animation example.
class ParametricCurveSource final : public Node {
public:
    static constexpr std::string_view kClassName = "ParametricCurveSource";
    ParametricCurveSource();

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

/// One polyline through the points (x[i], y[i], z[i]).
class LineSource final : public Node {
public:
    static constexpr std::string_view kClassName = "LineSource";
    LineSource();

    std::vector<std::string> data_slots() const override { return {"x", "y", "z"}; }

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
    void validate_data(const DataSlots& slots) const override;
};

class VtkFileReader final : public Node {
public:
    static constexpr std::string_view kClassName = "VtkFileReader";
    VtkFileReader();

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

/// Whitespace-separated numbers, one grid row per line.
class ArrayTextReader final : public Node {
public:
    static constexpr std::string_view kClassName = "ArrayTextReader";
    ArrayTextReader();

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

class PolyDataNormals final : public Node {
public:
    static constexpr std::string_view kClassName = "PolyDataNormals";
    PolyDataNormals();

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

/// Level surfaces of the input scalars. Explicit `contours` win; otherwise
/// `n_auto` levels spread over the scalar range when `auto_contours` is set.
class IsoSurface final : public ModuleNode {
public:
    static constexpr std::string_view kClassName = "IsoSurface";
    IsoSurface();

    std::vector<double> levels(const ImageData& grid) const;
    Representation representation() const override;

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

class Surface final : public ModuleNode {
public:
    static constexpr std::string_view kClassName = "Surface";
    Surface();

    Representation representation() const override;

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

class Outline final : public ModuleNode {
public:
    static constexpr std::string_view kClassName = "Outline";
    Outline();

    Representation representation() const override { return Representation::Wireframe; }

protected:
    std::vector<DatasetPtr> compute(const std::vector<DatasetPtr>& inputs) override;
};

/// Adds the built-in sources, filters and modules to `registry`.
void register_builtins(Registry& registry);

/// Process-wide registry holding exactly the built-ins.
const Registry& builtin_registry();

} // namespace vizpipe
