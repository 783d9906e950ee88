#pragma once

#include "vizpipe/dataset.hpp"
#include "vizpipe/kernels.hpp"
#include "vizpipe/pipeline.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace vizpipe {

struct Camera {
    Vec3 focal_point{0, 0, 0};
    double azimuth = 45;   // degrees
    double elevation = 30; // degrees, (-90, 90)
    double distance = 10;
    double view_angle = 30; // vertical field of view, degrees

    Vec3 position() const;
    /// Unit vector from the position towards the focal point.
    Vec3 direction() const;
    /// World +z made perpendicular to the view direction.
    Vec3 view_up() const;
    Vec3 right() const;
};

/// One module's drawable geometry with a colour per point.
struct RenderableActor {
    std::shared_ptr<const Dataset> mesh; // always PolyData
    std::vector<Color> colors;
    Representation representation = Representation::Surface;
    std::shared_ptr<const LookupTable> lut; // null when flat coloured
    ObjectId module_id = 0;

    const PolyData& poly() const { return std::get<PolyData>(*mesh); }
};

inline constexpr Color kFlatColor{0.8, 0.8, 0.8, 1.0};

/// Actors of every healthy module with a non-empty mesh, in tree pre-order.
std::vector<RenderableActor> collect_actors(const Scene& scene);

/// The scene's camera properties; with auto_fit the focal point and distance
/// are derived from the actor bounds instead.
Camera scene_camera(const Scene& scene, const std::vector<RenderableActor>& actors);

struct FrameSpec {
    int width = 640;
    int height = 480;
    Rgba background{0, 0, 0, 1};
};

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;
    /// Index into the actor list for each pixel, -1 for background.
    std::vector<std::int32_t> actor_index;

    std::array<std::uint8_t, 4> pixel(int x, int y) const;
};

/// Z-buffered perspective rasterization. Pure: equal inputs give equal pixels.
Image render_frame(const std::vector<RenderableActor>& actors, const Camera& camera, const FrameSpec& spec);

/// Everything needed to draw a scene, detached from the live tree.
struct SceneSnapshot {
    std::vector<RenderableActor> actors;
    Camera camera;
    Rgba background{0, 0, 0, 1};
    std::uint64_t revision = 0;
};

SceneSnapshot snapshot_scene(const Scene& scene);
Image render_snapshot(const SceneSnapshot& snapshot, int width, int height);

/// RGBA8 non-interlaced PNG bytes.
std::string encode_png(const Image& image);

/// X3D 3.0 document: one IndexedFaceSet per triangle actor, an IndexedLineSet
/// per line actor and a Viewpoint for the camera.
std::string export_x3d(const std::vector<RenderableActor>& actors, const Camera& camera);

} // namespace vizpipe
