#include "vizpipe/render.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace vizpipe {

namespace {

constexpr double kAmbient = 0.2;
constexpr double kDiffuse = 0.8;
constexpr std::int64_t kSubpixel = 256; // 8 fractional bits
constexpr double kCoordLimit = 268435456.0; // 2^28 in fixed-point units

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Color lerp(const Color& a, const Color& b, double t) {
    return {a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t, a[3] + (b[3] - a[3]) * t};
}

Color scaled(const Color& c, double k) { return {c[0] * k, c[1] * k, c[2] * k, c[3]}; }

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

/// Vertex in camera coordinates: x right, y up, z along the view direction.
struct CamVertex {
    Vec3 p;
    Color c;
};

struct ScreenVertex {
    double sx, sy, invz;
    Color c;
};

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t snap(double v) { return std::llround(std::clamp(v * kSubpixel, -kCoordLimit, kCoordLimit)); }

class Rasterizer {
public:
    Rasterizer(const Camera& camera, const FrameSpec& spec)
        : w_(spec.width), h_(spec.height), depth_(static_cast<std::size_t>(w_) * h_, 0.0) {
        eye_ = camera.position();
        right_ = camera.right();
        up_ = camera.view_up();
        forward_ = camera.direction();
        near_ = camera.distance * 1e-3;
        fy_ = 1.0 / std::tan(0.5 * camera.view_angle * std::numbers::pi / 180.0);
        aspect_ = static_cast<double>(w_) / h_;
        image_.width = w_;
        image_.height = h_;
        image_.rgba.resize(depth_.size() * 4);
        image_.actor_index.assign(depth_.size(), -1);
        const std::array<std::uint8_t, 4> bg{to_byte(spec.background[0]), to_byte(spec.background[1]),
                                             to_byte(spec.background[2]), to_byte(spec.background[3])};
        for (std::size_t i = 0; i < depth_.size(); ++i) std::copy(bg.begin(), bg.end(), image_.rgba.begin() + 4 * i);
    }

    void draw(const RenderableActor& actor, std::int32_t id) {
        id_ = id;
        const PolyData& poly = actor.poly();
        cam_.resize(poly.points.size());
        for (std::size_t i = 0; i < poly.points.size(); ++i) {
            const Vec3 v = sub(poly.points[i], eye_);
            cam_[i] = {{dot(v, right_), dot(v, up_), dot(v, forward_)}, actor.colors[i]};
        }
        const Vec3 light{-forward_[0], -forward_[1], -forward_[2]};
        switch (actor.representation) {
        case Representation::Surface:
            for (const auto& t : poly.triangles) {
                Vec3 facet{0, 0, 0};
                if (!poly.point_normals) {
                    facet = cross(sub(poly.points[t[1]], poly.points[t[0]]), sub(poly.points[t[2]], poly.points[t[0]]));
                    const double n = std::sqrt(dot(facet, facet));
                    if (n > 0) facet = {facet[0] / n, facet[1] / n, facet[2] / n};
                }
                std::array<CamVertex, 3> tri;
                for (int k = 0; k < 3; ++k) {
                    const Vec3& n = poly.point_normals ? (*poly.point_normals)[t[k]] : facet;
                    const double shade = kAmbient + kDiffuse * std::max(0.0, dot(n, light));
                    tri[k] = {cam_[t[k]].p, scaled(cam_[t[k]].c, shade)};
                }
                triangle(tri);
            }
            break;
        case Representation::Wireframe:
            for (const auto& t : poly.triangles) {
                segment(cam_[t[0]], cam_[t[1]]);
                segment(cam_[t[1]], cam_[t[2]]);
                segment(cam_[t[2]], cam_[t[0]]);
            }
            break;
        case Representation::Points:
            for (const auto& v : cam_)
                if (v.p[2] >= near_) {
                    const ScreenVertex s = project(v);
                    if (s.sx >= 0 && s.sy >= 0 && s.sx < w_ && s.sy < h_)
                        plot(static_cast<int>(s.sx), static_cast<int>(s.sy), s.invz, s.c, 1.0);
                }
            break;
        }
        if (actor.representation != Representation::Points)
            for (const auto& line : poly.lines)
                for (std::size_t i = 1; i < line.size(); ++i) segment(cam_[line[i - 1]], cam_[line[i]]);
    }

    Image take() { return std::move(image_); }

private:
    ScreenVertex project(const CamVertex& v) const {
        const double ndc_x = v.p[0] * fy_ / (aspect_ * v.p[2]);
        const double ndc_y = v.p[1] * fy_ / v.p[2];
        return {(ndc_x + 1.0) * 0.5 * w_, (1.0 - ndc_y) * 0.5 * h_, 1.0 / v.p[2], v.c};
    }

    CamVertex at_near(const CamVertex& a, const CamVertex& b) const {
        const double t = (near_ - a.p[2]) / (b.p[2] - a.p[2]);
        return {{a.p[0] + (b.p[0] - a.p[0]) * t, a.p[1] + (b.p[1] - a.p[1]) * t, near_}, lerp(a.c, b.c, t)};
    }

    void plot(int x, int y, double invz, const Color& c, double bias) {
        const std::size_t i = static_cast<std::size_t>(y) * w_ + x;
        if (!(invz * bias > depth_[i])) return;
        depth_[i] = invz;
        image_.rgba[4 * i] = to_byte(c[0]);
        image_.rgba[4 * i + 1] = to_byte(c[1]);
        image_.rgba[4 * i + 2] = to_byte(c[2]);
        image_.rgba[4 * i + 3] = 255;
        image_.actor_index[i] = id_;
    }

    void triangle(const std::array<CamVertex, 3>& tri) {
        // Clip against the near plane; the result is a convex polygon of up to 4 vertices.
        std::array<CamVertex, 4> poly;
        int n = 0;
        for (int k = 0; k < 3; ++k) {
            const CamVertex& a = tri[k];
            const CamVertex& b = tri[(k + 1) % 3];
            const bool a_in = a.p[2] >= near_;
            const bool b_in = b.p[2] >= near_;
            if (a_in) poly[n++] = a;
            if (a_in != b_in) poly[n++] = at_near(a, b);
        }
        if (n < 3) return;
        const ScreenVertex s0 = project(poly[0]);
        for (int k = 1; k + 1 < n; ++k) fill(s0, project(poly[k]), project(poly[k + 1]));
    }

    void fill(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2) {
        std::int64_t x[3] = {snap(v0.sx), snap(v1.sx), snap(v2.sx)};
        std::int64_t y[3] = {snap(v0.sy), snap(v1.sy), snap(v2.sy)};
        auto edge = [&](int a, int b, std::int64_t px, std::int64_t py) {
            return (x[b] - x[a]) * (py - y[a]) - (y[b] - y[a]) * (px - x[a]);
        };
        std::int64_t area = edge(0, 1, x[2], y[2]);
        if (area == 0) return;
        if (area < 0) {
            std::swap(x[1], x[2]);
            std::swap(y[1], y[2]);
            std::swap(v1, v2);
            area = -area;
        }
        // Top-left rule: pixels exactly on an edge belong to its top or left side only.
        auto top_left = [&](int a, int b) {
            const std::int64_t dx = x[b] - x[a], dy = y[b] - y[a];
            return (dy == 0 && dx > 0) || dy < 0;
        };
        const std::int64_t bias0 = top_left(1, 2) ? 0 : -1;
        const std::int64_t bias1 = top_left(2, 0) ? 0 : -1;
        const std::int64_t bias2 = top_left(0, 1) ? 0 : -1;

        const std::int64_t half = kSubpixel / 2;
        const std::int64_t min_x = std::min({x[0], x[1], x[2]}), max_x = std::max({x[0], x[1], x[2]});
        const std::int64_t min_y = std::min({y[0], y[1], y[2]}), max_y = std::max({y[0], y[1], y[2]});
        const std::int64_t px0 = std::max<std::int64_t>(0, floor_div(min_x - half + kSubpixel - 1, kSubpixel));
        const std::int64_t px1 = std::min<std::int64_t>(w_ - 1, floor_div(max_x - half, kSubpixel));
        const std::int64_t py0 = std::max<std::int64_t>(0, floor_div(min_y - half + kSubpixel - 1, kSubpixel));
        const std::int64_t py1 = std::min<std::int64_t>(h_ - 1, floor_div(max_y - half, kSubpixel));
        const double inv_area = 1.0 / static_cast<double>(area);

        for (std::int64_t py = py0; py <= py1; ++py) {
            const std::int64_t cy = py * kSubpixel + half;
            for (std::int64_t px = px0; px <= px1; ++px) {
                const std::int64_t cx = px * kSubpixel + half;
                const std::int64_t w0 = edge(1, 2, cx, cy);
                const std::int64_t w1 = edge(2, 0, cx, cy);
                const std::int64_t w2 = edge(0, 1, cx, cy);
                if (w0 + bias0 < 0 || w1 + bias1 < 0 || w2 + bias2 < 0) continue;
                const double b0 = static_cast<double>(w0) * inv_area;
                const double b1 = static_cast<double>(w1) * inv_area;
                const double b2 = static_cast<double>(w2) * inv_area;
                const double invz = b0 * v0.invz + b1 * v1.invz + b2 * v2.invz;
                const Color c{b0 * v0.c[0] + b1 * v1.c[0] + b2 * v2.c[0], b0 * v0.c[1] + b1 * v1.c[1] + b2 * v2.c[1],
                              b0 * v0.c[2] + b1 * v1.c[2] + b2 * v2.c[2], 1.0};
                plot(static_cast<int>(px), static_cast<int>(py), invz, c, 1.0);
            }
        }
    }

    void segment(CamVertex a, CamVertex b) {
        const bool a_in = a.p[2] >= near_, b_in = b.p[2] >= near_;
        if (!a_in && !b_in) return;
        if (!a_in) a = at_near(a, b);
        if (!b_in) b = at_near(b, a);
        ScreenVertex s = project(a), e = project(b);
        // Liang-Barsky against a slightly enlarged viewport keeps the integer walk short.
        double t0 = 0, t1 = 1;
        const double dx = e.sx - s.sx, dy = e.sy - s.sy;
        const double p[4] = {-dx, dx, -dy, dy};
        const double q[4] = {s.sx + 1, w_ + 1 - s.sx, s.sy + 1, h_ + 1 - s.sy};
        for (int k = 0; k < 4; ++k) {
            if (p[k] == 0) {
                if (q[k] < 0) return;
                continue;
            }
            const double r = q[k] / p[k];
            if (p[k] < 0) t0 = std::max(t0, r);
            else t1 = std::min(t1, r);
        }
        if (t0 > t1) return;
        auto at = [&](double t) -> ScreenVertex {
            return {s.sx + dx * t, s.sy + dy * t, s.invz + (e.invz - s.invz) * t, lerp(s.c, e.c, t)};
        };
        const ScreenVertex from = at(t0), to = at(t1);
        const std::int64_t x0 = floor_div(snap(from.sx), kSubpixel), y0 = floor_div(snap(from.sy), kSubpixel);
        const std::int64_t x1 = floor_div(snap(to.sx), kSubpixel), y1 = floor_div(snap(to.sy), kSubpixel);
        const std::int64_t adx = std::abs(x1 - x0), ady = -std::abs(y1 - y0);
        const std::int64_t sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
        const std::int64_t steps = std::max(adx, -ady);
        std::int64_t err = adx + ady;
        std::int64_t x = x0, y = y0;
        for (std::int64_t i = 0;; ++i) {
            if (x >= 0 && y >= 0 && x < w_ && y < h_) {
                const double t = steps ? static_cast<double>(i) / static_cast<double>(steps) : 0.0;
                plot(static_cast<int>(x), static_cast<int>(y), from.invz + (to.invz - from.invz) * t,
                     lerp(from.c, to.c, t), 1.0 + 1e-6);
            }
            if (x == x1 && y == y1) break;
            const std::int64_t e2 = 2 * err;
            if (e2 >= ady) {
                err += ady;
                x += sx;
            }
            if (e2 <= adx) {
                err += adx;
                y += sy;
            }
        }
    }

    int w_, h_;
    std::vector<double> depth_;
    Image image_;
    std::vector<CamVertex> cam_;
    Vec3 eye_, right_, up_, forward_;
    double near_, fy_, aspect_;
    std::int32_t id_ = -1;
};

} // namespace

Image render_frame(const std::vector<RenderableActor>& actors, const Camera& camera, const FrameSpec& spec) {
    FrameSpec s = spec;
    s.width = std::max(1, s.width);
    s.height = std::max(1, s.height);
    Rasterizer r(camera, s);
    for (std::size_t i = 0; i < actors.size(); ++i) r.draw(actors[i], static_cast<std::int32_t>(i));
    return r.take();
}

} // namespace vizpipe
