#include "vizpipe/render.hpp"

#include "vizpipe/errors.hpp"

#include <zlib.h>

namespace vizpipe {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    out += static_cast<char>((v >> 24) & 0xff);
    out += static_cast<char>((v >> 16) & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
    out += static_cast<char>(v & 0xff);
}

void chunk(std::string& out, const char* type, const std::string& data) {
    put_u32(out, static_cast<std::uint32_t>(data.size()));
    const std::size_t start = out.size();
    out.append(type, 4);
    out += data;
    const auto crc = crc32(0L, reinterpret_cast<const Bytef*>(out.data() + start), static_cast<uInt>(out.size() - start));
    put_u32(out, static_cast<std::uint32_t>(crc));
}

} // namespace

std::string encode_png(const Image& image) {
    const auto w = static_cast<std::size_t>(image.width);
    const auto h = static_cast<std::size_t>(image.height);
    if (w == 0 || h == 0 || image.rgba.size() != 4 * w * h) throw Error("encode_png: image size mismatch");

    std::string raw;
    raw.reserve(h * (4 * w + 1));
    for (std::size_t y = 0; y < h; ++y) {
        raw += '\0'; // filter type None
        raw.append(reinterpret_cast<const char*>(image.rgba.data() + 4 * w * y), 4 * w);
    }
    uLongf packed_size = compressBound(static_cast<uLong>(raw.size()));
    std::string packed(packed_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(packed.data()), &packed_size, reinterpret_cast<const Bytef*>(raw.data()),
                  static_cast<uLong>(raw.size()), 6) != Z_OK)
        throw Error("encode_png: deflate failed");
    packed.resize(packed_size);

    std::string ihdr;
    put_u32(ihdr, static_cast<std::uint32_t>(w));
    put_u32(ihdr, static_cast<std::uint32_t>(h));
    ihdr += static_cast<char>(8); // bit depth
    ihdr += static_cast<char>(6); // RGBA
    ihdr += '\0';                 // deflate
    ihdr += '\0';                 // adaptive filtering
    ihdr += '\0';                 // no interlace

    std::string out("\x89PNG\r\n\x1a\n", 8);
    chunk(out, "IHDR", ihdr);
    chunk(out, "IDAT", packed);
    chunk(out, "IEND", {});
    return out;
}

} // namespace vizpipe
