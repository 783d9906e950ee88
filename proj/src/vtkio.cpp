#include "vizpipe/vtkio.hpp"

#include "vizpipe/errors.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

namespace vizpipe {

namespace {

struct Token {
    std::string_view text;
    std::size_t line;
};

class TokenStream {
public:
    TokenStream(std::vector<Token> tokens, std::size_t last_line)
        : tokens_(std::move(tokens)), last_line_(last_line) {}

    bool done() const noexcept { return pos_ >= tokens_.size(); }
    std::size_t remaining() const noexcept { return tokens_.size() - pos_; }
    std::size_t line() const noexcept { return done() ? last_line_ : tokens_[pos_].line; }

    const Token& peek() const {
        if (done()) throw ParseError(last_line_, "unexpected end of file");
        return tokens_[pos_];
    }

    const Token& next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }

    void expect(std::string_view keyword) {
        const Token& t = next();
        if (t.text != keyword)
            throw ParseError(t.line, "expected '" + std::string(keyword) + "', found '" + std::string(t.text) + "'");
    }

    double number() {
        const Token& t = next();
        double v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            throw ParseError(t.line, "invalid number '" + std::string(t.text) + "'");
        return v;
    }

    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const Token& t = next();
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size())
            throw ParseError(t.line, "invalid integer '" + std::string(t.text) + "'");
        if (v < lo || v > hi) throw ParseError(t.line, "integer " + std::string(t.text) + " out of range");
        return v;
    }

    /// Count that must be backed by at least `per_item * count` further tokens.
    std::size_t count(std::size_t per_item) {
        const std::size_t at = line();
        auto v = static_cast<std::size_t>(integer(0, std::numeric_limits<std::int32_t>::max()));
        if (per_item && v > remaining() / per_item) throw ParseError(at, "count exceeds the data present");
        return v;
    }

private:
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::size_t last_line_;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; }

const std::vector<std::string_view> kNumericTypes{"bit",  "unsigned_char", "char",          "unsigned_short",
                                                  "short", "unsigned_int", "int",           "unsigned_long",
                                                  "long", "float",         "double",        "vtkIdType"};

void expect_type(TokenStream& ts) {
    const Token& t = ts.next();
    for (auto name : kNumericTypes)
        if (t.text == name) return;
    throw ParseError(t.line, "unknown data type '" + std::string(t.text) + "'");
}

template <typename F>
auto wrap_dataset_errors(std::size_t line, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(line, e.what());
    }
}

struct PointAttributes {
    std::optional<std::vector<double>> scalars;
    std::string scalars_name = "scalars";
    std::optional<std::vector<Vec3>> normals;
};

PointAttributes read_point_data(TokenStream& ts, std::size_t expected_points) {
    PointAttributes attrs;
    if (ts.done()) return attrs;
    const Token& head = ts.next();
    if (head.text == "CELL_DATA") throw UnsupportedDatasetError(head.line, "CELL_DATA is not supported");
    if (head.text != "POINT_DATA")
        throw ParseError(head.line, "expected POINT_DATA, found '" + std::string(head.text) + "'");
    const std::size_t n_line = ts.line();
    const auto n = static_cast<std::size_t>(ts.integer(0, std::numeric_limits<std::int32_t>::max()));
    if (n != expected_points)
        throw ParseError(n_line, "POINT_DATA " + std::to_string(n) + " does not match " +
                                     std::to_string(expected_points) + " points");
    while (!ts.done()) {
        const Token& section = ts.next();
        if (section.text == "SCALARS") {
            if (attrs.scalars) throw ParseError(section.line, "duplicate SCALARS section");
            attrs.scalars_name = std::string(ts.next().text);
            expect_type(ts);
            if (!ts.done() && ts.peek().text != "LOOKUP_TABLE") {
                const std::size_t at = ts.line();
                if (ts.integer(1, 4) != 1) throw UnsupportedDatasetError(at, "multi-component scalars");
            }
            if (!ts.done() && ts.peek().text == "LOOKUP_TABLE") {
                ts.next();
                ts.next();
            }
            if (n > ts.remaining()) throw ParseError(ts.line(), "not enough scalar values");
            std::vector<double> values(n);
            for (auto& v : values) v = ts.number();
            attrs.scalars = std::move(values);
        } else if (section.text == "NORMALS") {
            if (attrs.normals) throw ParseError(section.line, "duplicate NORMALS section");
            ts.next();
            expect_type(ts);
            if (n > ts.remaining() / 3) throw ParseError(ts.line(), "not enough normal values");
            std::vector<Vec3> values(n);
            for (auto& v : values)
                for (auto& c : v) c = ts.number();
            attrs.normals = std::move(values);
        } else {
            throw UnsupportedDatasetError(section.line,
                                          "unsupported point attribute '" + std::string(section.text) + "'");
        }
    }
    return attrs;
}

Dataset read_structured_points(TokenStream& ts) {
    const std::size_t dims_line = ts.line();
    ts.expect("DIMENSIONS");
    Dims dims{};
    for (auto& d : dims) d = static_cast<std::size_t>(ts.integer(1, 1 << 20));
    const std::size_t points = dims[0] * dims[1] * dims[2];
    if (points > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw ParseError(dims_line, "grid too large");
    Vec3 origin{0, 0, 0}, spacing{1, 1, 1};
    bool have_origin = false, have_spacing = false;
    while (!ts.done() && (ts.peek().text == "ORIGIN" || ts.peek().text == "SPACING" ||
                          ts.peek().text == "ASPECT_RATIO")) {
        const Token& key = ts.next();
        bool is_origin = key.text == "ORIGIN";
        bool& seen = is_origin ? have_origin : have_spacing;
        if (seen) throw ParseError(key.line, "duplicate " + std::string(key.text));
        seen = true;
        Vec3& target = is_origin ? origin : spacing;
        for (auto& c : target) c = ts.number();
    }
    const std::size_t attr_line = ts.line();
    auto attrs = read_point_data(ts, points);
    if (attrs.normals) throw UnsupportedDatasetError(attr_line, "normals on structured points are not supported");
    return wrap_dataset_errors(dims_line, [&] {
        std::optional<NumericArray> scalars;
        if (attrs.scalars) scalars = NumericArray({points}, std::move(*attrs.scalars));
        return Dataset(image_data_new(dims, origin, spacing, std::move(scalars), attrs.scalars_name));
    });
}

Dataset read_polydata(TokenStream& ts) {
    const std::size_t points_line = ts.line();
    ts.expect("POINTS");
    const std::size_t n = ts.count(3);
    expect_type(ts);
    PolyData poly;
    poly.points.resize(n);
    for (auto& p : poly.points)
        for (auto& c : p) c = ts.number();

    bool have_lines = false, have_polys = false;
    while (!ts.done() && ts.peek().text != "POINT_DATA" && ts.peek().text != "CELL_DATA") {
        const Token& section = ts.next();
        if (section.text == "VERTICES" || section.text == "TRIANGLE_STRIPS")
            throw UnsupportedCellError(section.line, std::string(section.text) + " cells are not supported");
        const bool lines = section.text == "LINES";
        if (!lines && section.text != "POLYGONS")
            throw ParseError(section.line, "unexpected section '" + std::string(section.text) + "'");
        bool& seen = lines ? have_lines : have_polys;
        if (seen) throw ParseError(section.line, "duplicate " + std::string(section.text) + " section");
        seen = true;
        const std::size_t cells = ts.count(1);
        const std::size_t size_line = ts.line();
        const std::size_t size = ts.count(1);
        std::size_t consumed = 0;
        for (std::size_t c = 0; c < cells; ++c) {
            const std::size_t cell_line = ts.line();
            const auto k = static_cast<std::size_t>(ts.integer(0, std::numeric_limits<std::int32_t>::max()));
            if (k > ts.remaining()) throw ParseError(cell_line, "cell runs past the end of file");
            consumed += k + 1;
            if (consumed > size) throw ParseError(size_line, "cell list longer than its declared size");
            if (!lines && k != 3) throw UnsupportedCellError(cell_line, "only triangle polygons are supported");
            Polyline ids(k);
            for (auto& id : ids) {
                const std::size_t at = ts.line();
                id = static_cast<std::int32_t>(ts.integer(0, std::numeric_limits<std::int32_t>::max()));
                if (static_cast<std::size_t>(id) >= n) throw ParseError(at, "point index out of range");
            }
            if (lines) {
                if (k < 2) throw ParseError(cell_line, "a line needs at least two points");
                poly.lines.push_back(std::move(ids));
            } else {
                poly.triangles.push_back({ids[0], ids[1], ids[2]});
            }
        }
        if (consumed != size) throw ParseError(size_line, "declared size does not match the cell list");
    }
    auto attrs = read_point_data(ts, n);
    poly.point_scalars = std::move(attrs.scalars);
    poly.point_normals = std::move(attrs.normals);
    poly.scalars_name = attrs.scalars_name;
    wrap_dataset_errors(points_line, [&] {
        poly.validate();
        return 0;
    });
    return poly;
}

std::string token_name(const std::string& name) {
    std::string out = name.empty() ? "scalars" : name;
    for (auto& c : out)
        if (is_space(c)) c = '_';
    return out;
}

void write_point_data(std::ostringstream& os, std::size_t n, const std::vector<double>* scalars,
                      const std::string& scalars_name, const std::vector<Vec3>* normals) {
    if (!scalars && !normals) return;
    os << "POINT_DATA " << n << '\n';
    if (scalars) {
        os << "SCALARS " << token_name(scalars_name) << " double 1\nLOOKUP_TABLE default\n";
        for (double v : *scalars) os << format_double(v) << '\n';
    }
    if (normals) {
        os << "NORMALS Normals double\n";
        for (const auto& v : *normals)
            os << format_double(v[0]) << ' ' << format_double(v[1]) << ' ' << format_double(v[2]) << '\n';
    }
}

std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

Dataset read_legacy(std::string_view text) {
    // Header and title are whole lines; everything after is whitespace-separated.
    std::size_t pos = 0;
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::optional<std::string_view> {
        if (pos >= text.size()) return std::nullopt;
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto l = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        return l;
    };
    auto header = next_line();
    if (!header || header->substr(0, 22) != "# vtk DataFile Version")
        throw ParseError(1, "missing '# vtk DataFile Version' header");
    if (!next_line()) throw ParseError(2, "missing title line");

    std::vector<Token> tokens;
    std::size_t line = line_no + 1;
    std::size_t i = pos < text.size() ? pos : text.size();
    while (i < text.size()) {
        if (text[i] == '\n') {
            ++line;
            ++i;
            continue;
        }
        if (is_space(text[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && !is_space(text[j])) ++j;
        tokens.push_back({text.substr(i, j - i), line});
        i = j;
    }
    TokenStream ts(std::move(tokens), line);

    const Token& format = ts.next();
    if (format.text == "BINARY") throw UnsupportedFormatError(format.line, "BINARY legacy files are not supported");
    if (format.text != "ASCII") throw ParseError(format.line, "expected ASCII, found '" + std::string(format.text) + "'");
    ts.expect("DATASET");
    const Token& kind = ts.next();
    if (kind.text == "STRUCTURED_POINTS") return read_structured_points(ts);
    if (kind.text == "POLYDATA") return read_polydata(ts);
    throw UnsupportedDatasetError(kind.line, "unsupported dataset type '" + std::string(kind.text) + "'");
}

std::string write_legacy(const Dataset& d) {
    std::ostringstream os;
    os << "# vtk DataFile Version 2.0\nvizpipe dataset\nASCII\n";
    if (const auto* img = std::get_if<ImageData>(&d)) {
        const auto& n = img->dims();
        os << "DATASET STRUCTURED_POINTS\n";
        os << "DIMENSIONS " << n[0] << ' ' << n[1] << ' ' << n[2] << '\n';
        os << "ORIGIN " << format_double(img->origin()[0]) << ' ' << format_double(img->origin()[1]) << ' '
           << format_double(img->origin()[2]) << '\n';
        os << "SPACING " << format_double(img->spacing()[0]) << ' ' << format_double(img->spacing()[1]) << ' '
           << format_double(img->spacing()[2]) << '\n';
        if (img->point_scalars()) {
            auto values = img->point_scalars()->to_doubles();
            write_point_data(os, img->point_count(), &values, img->scalars_name(), nullptr);
        }
        return os.str();
    }
    const auto& poly = std::get<PolyData>(d);
    os << "DATASET POLYDATA\nPOINTS " << poly.points.size() << " double\n";
    for (const auto& p : poly.points)
        os << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << '\n';
    if (!poly.lines.empty()) {
        std::size_t size = 0;
        for (const auto& l : poly.lines) size += l.size() + 1;
        os << "LINES " << poly.lines.size() << ' ' << size << '\n';
        for (const auto& l : poly.lines) {
            os << l.size();
            for (auto id : l) os << ' ' << id;
            os << '\n';
        }
    }
    if (!poly.triangles.empty()) {
        os << "POLYGONS " << poly.triangles.size() << ' ' << 4 * poly.triangles.size() << '\n';
        for (const auto& t : poly.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
    }
    write_point_data(os, poly.points.size(), poly.point_scalars ? &*poly.point_scalars : nullptr, poly.scalars_name,
                     poly.point_normals ? &*poly.point_normals : nullptr);
    return os.str();
}

Dataset read_legacy_file(const std::filesystem::path& path) { return read_legacy(read_whole_file(path)); }

void write_legacy_file(const std::filesystem::path& path, const Dataset& d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << write_legacy(d);
}

ImageData read_array_text(std::string_view text) {
    std::vector<double> values;
    std::size_t cols = 0, rows = 0, line = 0, pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        auto l = text.substr(pos, end - pos);
        pos = end + 1;
        ++line;
        std::size_t row_cols = 0;
        std::size_t i = 0;
        while (i < l.size() && is_space(l[i])) ++i;
        if (i == l.size() || l[i] == '#') {
            if (end == text.size()) break;
            continue;
        }
        while (i < l.size()) {
            std::size_t j = i;
            while (j < l.size() && !is_space(l[j])) ++j;
            double v = 0;
            auto [ptr, ec] = std::from_chars(l.data() + i, l.data() + j, v);
            if (ec != std::errc() || ptr != l.data() + j)
                throw ParseError(line, "invalid number '" + std::string(l.substr(i, j - i)) + "'");
            values.push_back(v);
            ++row_cols;
            i = j;
            while (i < l.size() && is_space(l[i])) ++i;
        }
        if (rows == 0) cols = row_cols;
        else if (row_cols != cols) throw ParseError(line, "row has " + std::to_string(row_cols) + " columns, expected " + std::to_string(cols));
        ++rows;
        if (end == text.size()) break;
    }
    if (rows == 0) throw ParseError(line, "no data rows");
    const std::size_t n = values.size();
    return image_data_new({cols, rows, 1}, {0, 0, 0}, {1, 1, 1}, NumericArray({n}, std::move(values)));
}

ImageData read_array_text_file(const std::filesystem::path& path) { return read_array_text(read_whole_file(path)); }

} // namespace vizpipe
