#pragma once

// Phantoms, run configuration files and the on-disk dataset format.
//
// Dataset layout: one text line "bsar-dataset key=value ...", an empty
// line, then the payload as little-endian IEEE float32 values in memory
// order. The header carries a CRC-32 of the payload.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bsar/cutoffs.hpp"
#include "bsar/geometry.hpp"
#include "bsar/grid.hpp"
#include "bsar/transform.hpp"

namespace bsar {

// ---------------------------------------------------------------------------
// Phantoms

enum class PhantomKind { point, disk, grid_of_points };

struct PhantomComponent {
  PhantomKind kind = PhantomKind::point;
  Point2 center;           ///< grid_of_points: first point
  double radius = 0.0;     ///< disk
  double amplitude = 1.0;  ///< point: integrated mass; disk: value
  Point2 spacing;          ///< grid_of_points
  int n1 = 1;
  int n2 = 1;
};

struct Phantom {
  std::vector<PhantomComponent> parts;
};

/// Gaussian standard deviation of point scatterers, in pixels.
inline constexpr double kPointWidthPixels = 1.5;

/// Semicolon-separated list of point(x1,x2[,amp]), disk(x1,x2,r[,amp]),
/// grid(x1,x2,dx1,dx2,n1,n2[,amp]). ConfigError on malformed text.
Phantom parse_phantom(std::string_view text);

/// Points are Gaussians of width kPointWidthPixels per axis, truncated at
/// 4 widths and scaled to integrate to their amplitude. Disks set pixel
/// centres inside the radius. DomainError when a centre is outside the grid.
Image build_phantom(const Phantom& phantom, const GridSpec& grid);

// ---------------------------------------------------------------------------
// Run configuration

struct RunConfig {
  AcquisitionConfig acq;
  GridSpec grid;
  Region region = Region::none;
  int ellipse_samples = 0;
  int g_samples = kDefaultMuteSamples;
  std::uint64_t seed = 0;
  std::optional<double> s1;  ///< slow time of the collar selection

  /// Collar selection for alpha < -1, nullopt otherwise. ConfigError when
  /// s1 (default s_min) does not exceed s0.
  [[nodiscard]] std::optional<EpsilonSelection> selection() const;
  [[nodiscard]] OperatorOptions operator_options(int threads) const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// key=value lines with '#' comments. Required: alpha, h, s_min, s_max,
/// x1_min, x1_max, x2_min, x2_max, nx1, nx2. Defaults: ns=128, nt=256,
/// t_min = ground threshold at s_min, t_max = largest travel time from the
/// scene corners over the aperture ends, ellipse_samples=0 (auto),
/// f_margin=1e-3, window_taper=0.05, region=none, seed=0, g_samples=512,
/// s1=s_min. ConfigError (with line number) on syntax errors and unknown
/// or duplicate keys; DomainError on invalid physics (alpha=1, h<=0).
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);
/// Normalized form with every key; parse_config(render_config(c)) == c.
std::string render_config(const RunConfig& cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

// ---------------------------------------------------------------------------
// Datasets

enum class ArrayRole { image, sinogram };

inline constexpr int kDatasetVersion = 1;

struct DatasetHeader {
  int version = kDatasetVersion;
  ArrayRole role = ArrayRole::image;
  GridSpec grid;
  double alpha = 0.0;
  double h = 0.0;
  std::optional<EpsilonSelection> selection;
  std::uint64_t count = 0;
  std::uint32_t checksum = 0;

  [[nodiscard]] std::string render() const;
  /// CorruptHeader / VersionMismatch on malformed lines.
  static DatasetHeader parse(std::string_view line);
};

void save_image(const std::filesystem::path& path, const Image& img,
                const AcquisitionConfig& cfg,
                const std::optional<EpsilonSelection>& sel = std::nullopt);
void save_sinogram(const std::filesystem::path& path, const Sinogram& sino,
                   const AcquisitionConfig& cfg,
                   const std::optional<EpsilonSelection>& sel = std::nullopt);

/// RoleMismatch when the file holds the other array kind; ChecksumMismatch
/// on truncated or altered payloads.
Image load_image(const std::filesystem::path& path, DatasetHeader* header = nullptr);
Sinogram load_sinogram(const std::filesystem::path& path,
                       DatasetHeader* header = nullptr);
DatasetHeader read_header(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Exports

enum class Normalization { minmax, absmax };

/// 16-bit binary PGM. Images: width nx1, height nx2, top row at x2_max.
/// Sinograms: width ns, height nt, top row at t_min.
/// minmax maps [min, max] to [0, 65535] (a constant array maps to 0);
/// absmax maps v to 65535 * (1 + v / max|v|) / 2 (all-zero maps to 0).
void export_pgm(const Image& img, const std::filesystem::path& path,
                Normalization norm = Normalization::minmax);
void export_pgm(const Sinogram& sino, const std::filesystem::path& path,
                Normalization norm = Normalization::minmax);

/// Memory order rows (x1 rows for images, s rows for sinograms), values
/// with 9 significant digits.
void export_csv(const Image& img, const std::filesystem::path& path);
void export_csv(const Sinogram& sino, const std::filesystem::path& path);

}  // namespace bsar
