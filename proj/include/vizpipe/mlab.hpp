#pragma once

#include "vizpipe/engine.hpp"
#include "vizpipe/render.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace vizpipe {

struct Contour3dOptions {
    std::optional<std::vector<double>> contours;
    std::optional<std::string> colormap;
    std::optional<std::string> representation;
    std::optional<Triplet> origin;
    std::optional<Triplet> spacing;
};

struct Plot3dOptions {
    std::optional<std::string> colormap;
};

struct PipelineArgs {
    /// Attachment point for filters and modules; current_object when null.
    Node* parent = nullptr;
    DataSlots data;
    PropertyList properties;
};

/// Handle on the arrays a source was built from.
class MlabSource {
public:
    explicit MlabSource(Node& source) : source_(&source) {}

    Node& source() const noexcept { return *source_; }
    std::vector<std::string> slots() const { return source_->data_slots(); }
    const NumericArray& get(const std::string& slot) const;

    /// Replaces all given slots at once: one data_changed for the whole call.
    /// Throws UnknownSlotError, or ShapeError when a shape would change.
    void set(DataSlots arrays);

private:
    Node* source_;
};

/// Scripting façade over an engine. Without an explicit engine one is created
/// on first use and owned by the context.
class Mlab {
public:
    Mlab() = default;
    explicit Mlab(Engine& engine) : engine_(&engine) {}

    Engine& engine();

    /// The current scene, created when there is none.
    Scene& figure();

    /// Scalar field source plus iso-surface; returns the IsoSurface module.
    /// Throws ShapeError unless `scalars` is 3-D with at least 2 points per axis.
    Node& contour3d(const NumericArray& scalars, const Contour3dOptions& options = {});

    /// Polyline source plus a wireframe Surface; returns the Surface module.
    Node& plot3d(const NumericArray& x, const NumericArray& y, const NumericArray& z, const Plot3dOptions& options = {});

    /// Creates a registry node by scripting name and attaches it per engine
    /// rules. Sources go to the current figure; filters become current_object.
    Node& pipeline(std::string_view name, PipelineArgs args = {});
    Node& pipeline(std::string_view name, const NumericArray& scalars);
    Node& pipeline(std::string_view name, Node& parent);

    /// Every name `pipeline` accepts: registry factory ids plus aliases.
    std::vector<std::string> pipeline_names();

    /// Source feeding `handle` (the handle itself when it is a source).
    MlabSource mlab_source(Node& handle);

    Image render(int width, int height);
    void save_png(const std::filesystem::path& path, int width, int height);

private:
    std::unique_ptr<Engine> owned_;
    Engine* engine_ = nullptr;
};

/// Factory id behind a scripting name, resolving aliases such as scalar_field.
std::string resolve_pipeline_name(std::string_view name);

} // namespace vizpipe
