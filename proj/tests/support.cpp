#include "support.hpp"

#include "vizpipe/errors.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace testing {

using namespace vizpipe;

double ellipsoid(double x, double y, double z, double c) { return 0.5 * x * x + y * y + c * z * z; }

namespace {

double mgrid(std::size_t i, std::size_t n) { return -10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(n - 1); }

} // namespace

NumericArray ellipsoid_array(std::size_t n, double c) {
    std::vector<double> v(n * n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) v[(i * n + j) * n + k] = ellipsoid(mgrid(i, n), mgrid(j, n), mgrid(k, n), c);
    return NumericArray({n, n, n}, std::move(v));
}

ImageData ellipsoid_grid(std::size_t n, double c) {
    std::vector<double> v(n * n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) v[i + n * (j + n * k)] = ellipsoid(mgrid(i, n), mgrid(j, n), mgrid(k, n), c);
    const double h = 20.0 / static_cast<double>(n - 1);
    const std::size_t count = v.size();
    return image_data_new({n, n, n}, {-10, -10, -10}, {h, h, h}, NumericArray({count}, std::move(v)));
}

double trilinear(const ImageData& grid, const Vec3& p) {
    const auto& d = grid.dims();
    const auto values = grid.point_scalars()->to_doubles();
    std::array<std::size_t, 3> base{};
    std::array<double, 3> frac{};
    for (int a = 0; a < 3; ++a) {
        const double u = (p[a] - grid.origin()[a]) / grid.spacing()[a];
        auto b = static_cast<long>(std::floor(u));
        b = std::clamp<long>(b, 0, static_cast<long>(d[a]) - 2);
        base[a] = static_cast<std::size_t>(b);
        frac[a] = u - static_cast<double>(b);
    }
    auto at = [&](std::size_t i, std::size_t j, std::size_t k) { return values[i + d[0] * (j + d[1] * k)]; };
    double acc = 0;
    for (int c = 0; c < 8; ++c) {
        const std::size_t di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
        const double w = (di ? frac[0] : 1 - frac[0]) * (dj ? frac[1] : 1 - frac[1]) * (dk ? frac[2] : 1 - frac[2]);
        acc += w * at(base[0] + di, base[1] + dj, base[2] + dk);
    }
    return acc;
}

std::pair<std::size_t, std::size_t> edge_share_range(const PolyData& mesh) {
    std::map<std::pair<std::int32_t, std::int32_t>, std::size_t> count;
    for (const auto& t : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            auto a = t[e], b = t[(e + 1) % 3];
            if (a > b) std::swap(a, b);
            ++count[{a, b}];
        }
    if (count.empty()) return {0, 0};
    std::size_t lo = SIZE_MAX, hi = 0;
    for (const auto& [edge, n] : count) {
        lo = std::min(lo, n);
        hi = std::max(hi, n);
    }
    return {lo, hi};
}

DecodedPng decode_png(const std::string& bytes) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()))
        throw std::runtime_error(std::string("png decode failed: ") + image.message);
    image.format = PNG_FORMAT_RGBA;
    DecodedPng out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.rgba.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.rgba.data(), 0, nullptr))
        throw std::runtime_error(std::string("png decode failed: ") + image.message);
    return out;
}

namespace {

void walk(const boost::property_tree::ptree& tree, const std::string& name, std::size_t& indices, std::size_t& sets) {
    for (const auto& [key, child] : tree) {
        if (key == "IndexedFaceSet") {
            ++sets;
            std::istringstream in(child.get<std::string>("<xmlattr>.coordIndex", ""));
            long v;
            while (in >> v) ++indices;
        }
        walk(child, key, indices, sets);
    }
    (void)name;
}

} // namespace

std::size_t x3d_coord_index_count(const std::string& xml, std::size_t* face_sets) {
    boost::property_tree::ptree tree;
    std::istringstream in(xml);
    boost::property_tree::read_xml(in, tree);
    if (tree.get_child_optional("X3D.Scene") == boost::none) throw std::runtime_error("no X3D/Scene element");
    std::size_t indices = 0, sets = 0;
    walk(tree, "", indices, sets);
    if (face_sets) *face_sets = sets;
    return indices;
}

std::string fingerprint(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

// ---------------------------------------------------------------------------

std::vector<Node*> all_nodes(const Engine& engine) {
    std::vector<Node*> out;
    for (const auto& s : engine.scenes()) s->visit_preorder([&](Node& n) { out.push_back(&n); });
    return out;
}

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& items) {
    return items[std::uniform_int_distribution<std::size_t>(0, items.size() - 1)(rng)];
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

} // namespace

NumericArray small_grid(Rng& rng) {
    std::vector<std::size_t> shape{static_cast<std::size_t>(2 + rng() % 3), static_cast<std::size_t>(2 + rng() % 3),
                                   static_cast<std::size_t>(2 + rng() % 3)};
    std::vector<double> v(shape[0] * shape[1] * shape[2]);
    for (auto& x : v) x = std::round(uniform(rng, 0, 4) * 8) / 8;
    return NumericArray(std::move(shape), std::move(v));
}

DataSlots line_data(Rng& rng, std::size_t n) {
    DataSlots slots;
    for (const char* axis : {"x", "y", "z"}) {
        std::vector<double> v(n);
        for (auto& x : v) x = uniform(rng, -2, 2);
        slots.emplace(axis, NumericArray::vector(std::move(v)));
    }
    return slots;
}

Value random_value(Rng& rng, const PropertyDescriptor& d) {
    const bool wild = coin(rng, 0.15);
    const double lo = d.bounds ? d.bounds->first : -5.0;
    const double hi = d.bounds ? std::min(d.bounds->second, lo + 400.0) : 5.0;
    switch (d.kind) {
    case PropertyKind::Float: return wild ? uniform(rng, -1e3, 1e3) : uniform(rng, lo, hi);
    case PropertyKind::Int: {
        const auto a = static_cast<std::int64_t>(std::ceil(lo));
        const auto b = static_cast<std::int64_t>(std::floor(hi));
        if (wild) return static_cast<std::int64_t>(rng() % 2000) - 1000;
        return std::uniform_int_distribution<std::int64_t>(a, std::min(b, a + 60))(rng);
    }
    case PropertyKind::Bool: return coin(rng);
    case PropertyKind::Enum: return wild ? std::string("bogus") : pick(rng, d.choices);
    case PropertyKind::ColorRgba: return Rgba{uniform(rng, 0, 1), uniform(rng, 0, 1), uniform(rng, 0, 1), 1.0};
    case PropertyKind::FloatTriplet: {
        const double a = d.bounds ? d.bounds->first : -3.0;
        return Triplet{uniform(rng, std::max(a, 0.1), 3), uniform(rng, std::max(a, 0.1), 3), uniform(rng, std::max(a, 0.1), 3)};
    }
    case PropertyKind::FloatList: {
        FloatList v(rng() % 3);
        for (auto& x : v) x = std::round(uniform(rng, 0, 4) * 4) / 4;
        return v;
    }
    case PropertyKind::Text: return std::string(d.name == "file_name" ? "" : "field") + std::to_string(rng() % 4);
    }
    return false;
}

void random_mutations(Engine& engine, Rng& rng, int n_ops) {
    static const std::vector<std::string> sources{"array_source", "parametric_curve_source", "line_source"};
    static const std::vector<std::string> modules{"iso_surface", "outline", "surface"};
    for (int op = 0; op < n_ops; ++op) {
        std::vector<Node*> nodes = all_nodes(engine);
        const int choice = static_cast<int>(rng() % 12);
        try {
            if (choice == 0 || engine.scenes().empty()) {
                if (engine.scenes().size() < 3) engine.new_scene();
            } else if (choice <= 2) {
                auto src = engine.create(pick(rng, sources));
                if (src->factory_id() == "array_source") src->load_data({{"scalars", small_grid(rng)}});
                if (src->factory_id() == "line_source") src->load_data(line_data(rng, 2 + rng() % 6));
                if (src->factory_id() == "parametric_curve_source") src->set_property("sample_count", std::int64_t(16 + rng() % 40));
                engine.add_source(std::move(src));
            } else if (choice == 3) {
                engine.add_filter(engine.create("poly_data_normals"));
            } else if (choice <= 5) {
                engine.add_module(engine.create(pick(rng, modules)));
            } else if (choice <= 7) {
                Node* n = pick(rng, nodes);
                if (n->descriptors().empty()) continue;
                const auto& d = n->descriptors()[rng() % n->descriptors().size()];
                n->set_property(d.name, random_value(rng, d));
            } else if (choice == 8) {
                Node* n = pick(rng, nodes);
                if (n->kind() != NodeKind::Scene || coin(rng, 0.1)) engine.remove_node(*n);
            } else if (choice == 9) {
                engine.reparent(*pick(rng, nodes), *pick(rng, nodes));
            } else if (choice == 10) {
                Node* n = pick(rng, nodes);
                if (n->factory_id() == "array_source") {
                    const auto& shape = n->data().count("scalars") ? n->data().at("scalars").shape()
                                                                   : std::vector<std::size_t>{2, 2, 2};
                    std::vector<double> v(shape[0] * shape[1] * shape[2]);
                    for (auto& x : v) x = std::round(uniform(rng, 0, 4) * 8) / 8;
                    n->load_data({{"scalars", NumericArray(shape, std::move(v))}});
                } else if (n->factory_id() == "line_source") {
                    n->load_data(line_data(rng, 2 + rng() % 6));
                }
            } else {
                engine.set_current_object(coin(rng, 0.9) ? pick(rng, nodes) : nullptr);
            }
        } catch (const Error&) {
        }
    }
}

// ---------------------------------------------------------------------------

Dataset random_dataset(Rng& rng) {
    auto number = [&] {
        switch (rng() % 4) {
        case 0: return std::round(uniform(rng, -100, 100));
        case 1: return uniform(rng, -1, 1);
        case 2: return uniform(rng, -1, 1) * std::pow(10.0, static_cast<double>(rng() % 40) - 20);
        default: return static_cast<double>(rng() % 7) / 8.0;
        }
    };
    const std::string name = "field_" + std::to_string(rng() % 100);
    if (coin(rng)) {
        Dims dims{1 + rng() % 4, 1 + rng() % 4, 1 + rng() % 4};
        Vec3 origin{number(), number(), number()};
        Vec3 spacing{uniform(rng, 0.01, 5), uniform(rng, 0.01, 5), uniform(rng, 0.01, 5)};
        std::optional<NumericArray> scalars;
        if (coin(rng, 0.8)) {
            std::vector<double> v(dims[0] * dims[1] * dims[2]);
            for (auto& x : v) x = number();
            const std::size_t count = v.size();
            scalars = NumericArray({count}, std::move(v));
        }
        return image_data_new(dims, origin, spacing, std::move(scalars), scalars ? name : "scalars");
    }
    PolyData p;
    const std::size_t n = rng() % 20;
    for (std::size_t i = 0; i < n; ++i) p.points.push_back({number(), number(), number()});
    if (n > 0) {
        const auto idx = [&] { return static_cast<std::int32_t>(rng() % n); };
        for (std::size_t t = rng() % 10; t > 0; --t) p.triangles.push_back({idx(), idx(), idx()});
        for (std::size_t l = rng() % 3; l > 0; --l) {
            Polyline line(2 + rng() % 4);
            for (auto& v : line) v = idx();
            p.lines.push_back(std::move(line));
        }
        if (coin(rng)) {
            p.point_scalars.emplace();
            for (std::size_t i = 0; i < n; ++i) p.point_scalars->push_back(number());
            p.scalars_name = name;
        }
        if (coin(rng)) {
            p.point_normals.emplace();
            for (std::size_t i = 0; i < n; ++i) {
                Vec3 v{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1) + 2};
                const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
                p.point_normals->push_back({v[0] / len, v[1] / len, v[2] / len});
            }
        }
    }
    return p;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("vizpipe_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

namespace {

int corner_at(const std::array<int, 3>& p) {
    for (int c = 0; c < 8; ++c)
        if (kCorner[c] == p) return c;
    return -1;
}

} // namespace

/// The 48 symmetries of the cube as corner permutations: every axis
/// permutation combined with every set of axis flips.
std::vector<std::array<int, 8>> cube_symmetries() {
    std::vector<std::array<int, 8>> out;
    std::array<int, 3> axes{0, 1, 2};
    do {
        for (int flips = 0; flips < 8; ++flips) {
            std::array<int, 8> perm{};
            for (int c = 0; c < 8; ++c) {
                std::array<int, 3> p{};
                for (int a = 0; a < 3; ++a) {
                    const int v = kCorner[c][axes[a]];
                    p[a] = (flips >> a & 1) ? 1 - v : v;
                }
                perm[c] = corner_at(p);
            }
            out.push_back(perm);
        }
    } while (std::next_permutation(axes.begin(), axes.end()));
    return out;
}

/// Triangle counts for every configuration, expanded from the 15 base
/// cases by symmetry and sign complement.
std::map<unsigned, std::size_t> base_case_oracle() {
    const std::vector<std::pair<std::vector<int>, std::size_t>> base{
        {{}, 0},           {{0}, 1},          {{0, 1}, 2},       {{0, 2}, 2},       {{0, 6}, 2},
        {{1, 2, 3}, 3},    {{0, 1, 7}, 3},    {{1, 3, 6}, 3},    {{0, 1, 2, 3}, 2}, {{0, 1, 3, 4}, 4},
        {{0, 1, 6, 7}, 4}, {{0, 1, 2, 6}, 4}, {{0, 1, 3, 7}, 4}, {{0, 1, 2, 7}, 4}, {{0, 2, 5, 7}, 4},
    };
    std::map<unsigned, std::size_t> oracle;
    const auto syms = cube_symmetries();
    for (const auto& [corners, count] : base) {
        unsigned mask = 0;
        for (int c : corners) mask |= 1u << c;
        for (const auto& perm : syms) {
            unsigned image = 0;
            for (int c = 0; c < 8; ++c)
                if (mask >> c & 1u) image |= 1u << perm[c];
            for (unsigned m : {image, ~image & 0xffu}) {
                auto [it, fresh] = oracle.emplace(m, count);
                if (it->second != count) throw std::logic_error("base cases disagree under symmetry");
            }
        }
    }
    return oracle;
}

ImageData single_cell(unsigned config) {
    std::vector<double> v(8);
    for (int c = 0; c < 8; ++c) v[c] = (config >> c & 1u) ? 1.0 : 0.0;
    // Corner c sits at lattice point kCorner[c]; store x-fastest.
    std::vector<double> lattice(8);
    for (int c = 0; c < 8; ++c) lattice[kCorner[c][0] + 2 * (kCorner[c][1] + 2 * kCorner[c][2])] = v[c];
    return image_data_new({2, 2, 2}, {0, 0, 0}, {1, 1, 1}, NumericArray({8}, std::move(lattice)));
}

} // namespace testing
