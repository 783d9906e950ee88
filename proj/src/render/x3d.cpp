#include "vizpipe/render.hpp"

#include "vizpipe/vtkio.hpp"

#include <Eigen/Geometry>

#include <sstream>

namespace vizpipe {

namespace {

void write_points(std::ostringstream& os, const PolyData& poly) {
    os << "<Coordinate point='";
    for (std::size_t i = 0; i < poly.points.size(); ++i) {
        if (i) os << ", ";
        const auto& p = poly.points[i];
        os << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]);
    }
    os << "'/>\n";
}

void write_colors(std::ostringstream& os, const std::vector<Color>& colors) {
    os << "<Color color='";
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (i) os << ", ";
        os << format_double(colors[i][0]) << ' ' << format_double(colors[i][1]) << ' ' << format_double(colors[i][2]);
    }
    os << "'/>\n";
}

} // namespace

std::string export_x3d(const std::vector<RenderableActor>& actors, const Camera& camera) {
    std::ostringstream os;
    os << "<?xml version='1.0' encoding='UTF-8'?>\n"
       << "<X3D profile='Interchange' version='3.0'>\n<Scene>\n";

    // X3D cameras look down -z with +y up; rotate that frame onto ours.
    const Vec3 r = camera.right(), u = camera.view_up(), f = camera.direction();
    Eigen::Matrix3d m;
    m << r[0], u[0], -f[0], r[1], u[1], -f[1], r[2], u[2], -f[2];
    const Eigen::AngleAxisd aa(m);
    const Vec3 pos = camera.position();
    os << "<Viewpoint position='" << format_double(pos[0]) << ' ' << format_double(pos[1]) << ' '
       << format_double(pos[2]) << "' orientation='" << format_double(aa.axis()[0]) << ' '
       << format_double(aa.axis()[1]) << ' ' << format_double(aa.axis()[2]) << ' ' << format_double(aa.angle())
       << "' fieldOfView='" << format_double(camera.view_angle * 3.14159265358979323846 / 180.0) << "'/>\n";

    for (const auto& actor : actors) {
        const PolyData& poly = actor.poly();
        if (!poly.triangles.empty()) {
            os << "<Shape>\n<IndexedFaceSet solid='false' colorPerVertex='true' coordIndex='";
            for (std::size_t i = 0; i < poly.triangles.size(); ++i) {
                const auto& t = poly.triangles[i];
                os << (i ? " " : "") << t[0] << ' ' << t[1] << ' ' << t[2] << " -1";
            }
            os << "'>\n";
            write_points(os, poly);
            write_colors(os, actor.colors);
            os << "</IndexedFaceSet>\n</Shape>\n";
        }
        if (!poly.lines.empty()) {
            os << "<Shape>\n<IndexedLineSet colorPerVertex='true' coordIndex='";
            bool first = true;
            for (const auto& line : poly.lines) {
                for (auto id : line) {
                    os << (first ? "" : " ") << id;
                    first = false;
                }
                os << " -1";
            }
            os << "'>\n";
            write_points(os, poly);
            write_colors(os, actor.colors);
            os << "</IndexedLineSet>\n</Shape>\n";
        }
    }
    os << "</Scene>\n</X3D>\n";
    return os.str();
}

} // namespace vizpipe
