#pragma once

// Helpers shared by the test binaries: the ellipsoid field, independent
// oracles (trilinear sampling, PNG decoding, XML checks) and random
// mutation drivers.

#include "vizpipe/engine.hpp"
#include "vizpipe/render.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace testing {

using Rng = std::mt19937_64;

/// 0.5x^2 + y^2 + c*z^2.
double ellipsoid(double x, double y, double z, double c = 2.0);

/// The field sampled like numpy's mgrid[-10:10:nj] on each axis, laid out
/// [i][j][k] with k fastest.
vizpipe::NumericArray ellipsoid_array(std::size_t n, double c = 2.0);

/// Same samples as an ImageData (x-fastest), computed independently of ArraySource.
vizpipe::ImageData ellipsoid_grid(std::size_t n, double c = 2.0);

/// Trilinear interpolation of the grid's scalars at a world position.
double trilinear(const vizpipe::ImageData& grid, const vizpipe::Vec3& p);

/// Count of triangles sharing each undirected edge; returns the (min, max)
/// over all edges.
std::pair<std::size_t, std::size_t> edge_share_range(const vizpipe::PolyData& mesh);

struct DecodedPng {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgba;
};

/// Decodes with libpng, never with the library's own code.
DecodedPng decode_png(const std::string& bytes);

/// Parses with Boost.PropertyTree's XML reader; throws on malformed input.
/// Returns the number of integers in every coordIndex attribute summed.
std::size_t x3d_coord_index_count(const std::string& xml, std::size_t* face_sets = nullptr);

/// FNV-1a 64 as hex.
std::string fingerprint(const std::string& bytes);

/// Applies `n_ops` random engine operations. Rejected operations are part of
/// the workload and are swallowed.
void random_mutations(vizpipe::Engine& engine, Rng& rng, int n_ops);

/// All nodes of the engine in scene pre-order.
std::vector<vizpipe::Node*> all_nodes(const vizpipe::Engine& engine);

/// A random dataset inside the legacy VTK subset.
vizpipe::Dataset random_dataset(Rng& rng);

/// Small 3-D array (2 to 4 points per axis) on a 1/8 value lattice.
vizpipe::NumericArray small_grid(Rng& rng);
/// Random x, y, z slots of length `n` for a line source.
vizpipe::DataSlots line_data(Rng& rng, std::size_t n);
/// Mostly in-range value for `d`; about 15% fall outside its bounds or choices.
vizpipe::Value random_value(Rng& rng, const vizpipe::PropertyDescriptor& d);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Fresh directory under the build tree's temp area.
std::string temp_dir(const std::string& name);

/// Cell corner c sits at lattice offset kCorner[c].
inline constexpr std::array<std::array<int, 3>, 8> kCorner{{
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
}};

/// The 48 cube symmetries as corner permutations.
std::vector<std::array<int, 8>> cube_symmetries();

/// Triangle count for each of the 256 corner configurations, expanded from
/// the 15 base cases by symmetry and sign complement.
std::map<unsigned, std::size_t> base_case_oracle();

/// One 2x2x2 cell with value 1 at the corners set in `config`, 0 elsewhere.
vizpipe::ImageData single_cell(unsigned config);

} // namespace testing
