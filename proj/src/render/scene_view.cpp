#include "vizpipe/render.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace vizpipe {

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
Vec3 normalized(const Vec3& v) {
    const double n = std::sqrt(dot(v, v));
    return {v[0] / n, v[1] / n, v[2] / n};
}

/// Unit offset of the position from the focal point.
Vec3 eye_offset(const Camera& c) {
    const double az = c.azimuth * kDegree;
    const double el = c.elevation * kDegree;
    return {std::cos(el) * std::sin(az), -std::cos(el) * std::cos(az), std::sin(el)};
}

} // namespace

Vec3 Camera::position() const {
    const Vec3 o = eye_offset(*this);
    return {focal_point[0] + distance * o[0], focal_point[1] + distance * o[1], focal_point[2] + distance * o[2]};
}

Vec3 Camera::direction() const {
    const Vec3 o = eye_offset(*this);
    return normalized({-o[0], -o[1], -o[2]});
}

Vec3 Camera::view_up() const {
    const Vec3 f = direction();
    const double k = f[2];
    return normalized({-k * f[0], -k * f[1], 1.0 - k * f[2]});
}

Vec3 Camera::right() const { return normalized(cross(direction(), view_up())); }

std::array<std::uint8_t, 4> Image::pixel(int x, int y) const {
    const std::size_t i = 4 * (static_cast<std::size_t>(y) * width + x);
    return {rgba[i], rgba[i + 1], rgba[i + 2], rgba[i + 3]};
}

std::vector<RenderableActor> collect_actors(const Scene& scene) {
    std::vector<RenderableActor> actors;
    scene.visit_preorder([&](const Node& n) {
        if (n.kind() != NodeKind::Module || n.status() != NodeStatus::Ok || n.outputs().empty()) return;
        const DatasetPtr& out = n.outputs().front();
        const auto* poly = out ? std::get_if<PolyData>(out.get()) : nullptr;
        if (!poly || poly->points.empty()) return;
        const auto& module = static_cast<const ModuleNode&>(n);
        RenderableActor a;
        a.representation = module.representation();
        if (poly->triangles.empty() && poly->lines.empty() && a.representation != Representation::Points) return;
        a.mesh = out;
        a.module_id = n.object_id();
        const auto* manager = n.parent() && n.parent()->kind() == NodeKind::ModuleManager
                                  ? static_cast<const ModuleManager*>(n.parent())
                                  : nullptr;
        if (poly->point_scalars && manager) {
            a.lut = manager->lut();
            a.colors = lut_map(*a.lut, *poly->point_scalars);
        } else {
            a.colors.assign(poly->points.size(), kFlatColor);
        }
        actors.push_back(std::move(a));
    });
    return actors;
}

Camera scene_camera(const Scene& scene, const std::vector<RenderableActor>& actors) {
    Camera c;
    c.azimuth = scene.get_as<double>("azimuth");
    c.elevation = scene.get_as<double>("elevation");
    c.distance = scene.get_as<double>("distance");
    c.view_angle = scene.get_as<double>("view_angle");
    c.focal_point = scene.get_as<Triplet>("focal_point");
    if (!scene.get_as<bool>("auto_fit") || actors.empty()) return c;
    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi{-lo[0], -lo[1], -lo[2]};
    for (const auto& a : actors) {
        const auto b = a.poly().bounds();
        for (int k = 0; k < 3; ++k) {
            lo[k] = std::min(lo[k], b[0][k]);
            hi[k] = std::max(hi[k], b[1][k]);
        }
    }
    for (int k = 0; k < 3; ++k) c.focal_point[k] = 0.5 * (lo[k] + hi[k]);
    const Vec3 diag = sub(hi, lo);
    const double r = 0.5 * std::sqrt(dot(diag, diag));
    if (r > 0 && std::isfinite(r)) c.distance = 1.5 * r / std::tan(0.5 * c.view_angle * kDegree);
    return c;
}

SceneSnapshot snapshot_scene(const Scene& scene) {
    SceneSnapshot s;
    s.actors = collect_actors(scene);
    s.camera = scene_camera(scene, s.actors);
    s.background = scene.get_as<Rgba>("background");
    s.revision = scene.revision();
    return s;
}

Image render_snapshot(const SceneSnapshot& snapshot, int width, int height) {
    return render_frame(snapshot.actors, snapshot.camera, FrameSpec{width, height, snapshot.background});
}

} // namespace vizpipe
