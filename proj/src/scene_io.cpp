#include "bsar/scene_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>

#include "bsar/error.hpp"

namespace bsar {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

template <class Int>
bool parse_integer(std::string_view text, Int& out) {
  text = trim(text);
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.push_back(s.substr(pos, next == std::string_view::npos ? next : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

// ---------------------------------------------------------------------------
// Phantoms

Phantom parse_phantom(std::string_view text) {
  Phantom ph;
  for (auto item : split(text, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto open = item.find('(');
    if (open == std::string_view::npos || item.back() != ')') {
      throw ConfigError("phantom item '" + std::string(item) +
                        "' must look like kind(a,b,...)");
    }
    const auto kind = trim(item.substr(0, open));
    std::vector<double> args;
    for (auto a : split(item.substr(open + 1, item.size() - open - 2), ',')) {
      double v = 0.0;
      if (!parse_number(a, v)) {
        throw ConfigError("phantom item '" + std::string(item) + "' has a bad number");
      }
      args.push_back(v);
    }
    PhantomComponent c;
    auto need = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) {
        throw ConfigError("phantom item '" + std::string(item) +
                          "' has the wrong number of arguments");
      }
    };
    if (kind == "point") {
      need(2, 3);
      c.kind = PhantomKind::point;
      c.center = {args[0], args[1]};
      if (args.size() == 3) c.amplitude = args[2];
    } else if (kind == "disk") {
      need(3, 4);
      c.kind = PhantomKind::disk;
      c.center = {args[0], args[1]};
      c.radius = args[2];
      if (!(c.radius > 0.0)) throw ConfigError("disk radius must be positive");
      if (args.size() == 4) c.amplitude = args[3];
    } else if (kind == "grid") {
      need(6, 7);
      c.kind = PhantomKind::grid_of_points;
      c.center = {args[0], args[1]};
      c.spacing = {args[2], args[3]};
      c.n1 = static_cast<int>(args[4]);
      c.n2 = static_cast<int>(args[5]);
      if (c.n1 < 1 || c.n2 < 1 || c.n1 != args[4] || c.n2 != args[5]) {
        throw ConfigError("grid counts must be positive integers");
      }
      if (args.size() == 7) c.amplitude = args[6];
    } else {
      throw ConfigError("unknown phantom kind '" + std::string(kind) + "'");
    }
    ph.parts.push_back(c);
  }
  return ph;
}

namespace {

void require_inside(const GridSpec& g, Point2 c) {
  if (c.x1 < g.x1.lo || c.x1 > g.x1.hi || c.x2 < g.x2.lo || c.x2 > g.x2.hi) {
    throw DomainError("phantom centre (" + format_double(c.x1) + ", " +
                      format_double(c.x2) + ") lies outside the scene grid");
  }
}

void add_point(Image& img, Point2 c, double amplitude) {
  const auto& g = img.grid;
  const double w1 = kPointWidthPixels * g.x1.step();
  const double w2 = kPointWidthPixels * g.x2.step();
  const double norm = amplitude / (2.0 * std::numbers::pi * w1 * w2);
  const int lo1 = std::max(0, static_cast<int>(std::floor(g.x1.index_of(c.x1 - 4 * w1))));
  const int hi1 = std::min(g.x1.n - 1, static_cast<int>(std::ceil(g.x1.index_of(c.x1 + 4 * w1))));
  const int lo2 = std::max(0, static_cast<int>(std::floor(g.x2.index_of(c.x2 - 4 * w2))));
  const int hi2 = std::min(g.x2.n - 1, static_cast<int>(std::ceil(g.x2.index_of(c.x2 + 4 * w2))));
  for (int i1 = lo1; i1 <= hi1; ++i1) {
    for (int i2 = lo2; i2 <= hi2; ++i2) {
      const double u = (g.x1.at(i1) - c.x1) / w1;
      const double v = (g.x2.at(i2) - c.x2) / w2;
      const double r2 = u * u + v * v;
      if (r2 > 16.0) continue;
      img.at(i1, i2) += norm * std::exp(-0.5 * r2);
    }
  }
}

}  // namespace

Image build_phantom(const Phantom& phantom, const GridSpec& grid) {
  grid.validate();
  Image img = Image::zeros(grid);
  for (const auto& c : phantom.parts) {
    if (!std::isfinite(c.amplitude)) throw DomainError("phantom amplitude must be finite");
    switch (c.kind) {
      case PhantomKind::point:
        require_inside(grid, c.center);
        add_point(img, c.center, c.amplitude);
        break;
      case PhantomKind::disk:
        require_inside(grid, c.center);
        for (int i1 = 0; i1 < grid.x1.n; ++i1) {
          for (int i2 = 0; i2 < grid.x2.n; ++i2) {
            const Point2 x = grid.pixel(i1, i2);
            if (std::hypot(x.x1 - c.center.x1, x.x2 - c.center.x2) <= c.radius) {
              img.at(i1, i2) += c.amplitude;
            }
          }
        }
        break;
      case PhantomKind::grid_of_points:
        for (int j1 = 0; j1 < c.n1; ++j1) {
          for (int j2 = 0; j2 < c.n2; ++j2) {
            const Point2 p{c.center.x1 + j1 * c.spacing.x1, c.center.x2 + j2 * c.spacing.x2};
            require_inside(grid, p);
            add_point(img, p, c.amplitude);
          }
        }
        break;
    }
  }
  return img;
}

// ---------------------------------------------------------------------------
// Run configuration

std::optional<EpsilonSelection> RunConfig::selection() const {
  if (!(acq.alpha < -1.0)) return std::nullopt;
  const double s = s1.value_or(acq.s_min);
  if (!(s > acq.s0())) {
    throw ConfigError("collar selection needs s1 > s0 = " + format_double(acq.s0()) +
                      "; set s1 (defaults to s_min = " + format_double(acq.s_min) + ")");
  }
  return select_epsilon(acq, s);
}

OperatorOptions RunConfig::operator_options(int threads) const {
  OperatorOptions o;
  o.region = region;
  o.ellipse_samples = ellipse_samples;
  o.g_samples = g_samples;
  o.threads = threads;
  return o;
}

namespace {

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "alpha",  "h",      "s_min",  "s_max",  "ns",     "t_min",  "t_max",
      "nt",     "x1_min", "x1_max", "x2_min", "x2_max", "nx1",    "nx2",
      "ellipse_samples",  "f_margin", "window_taper", "region", "seed",
      "g_samples", "s1"};
  return keys;
}

double default_t_max(const AcquisitionConfig& acq, const GridSpec& g) {
  double best = 0.0;
  for (double s : {acq.s_min, acq.s_max}) {
    for (double x1 : {g.x1.lo, g.x1.hi}) {
      for (double x2 : {g.x2.lo, g.x2.hi}) {
        best = std::max(best, travel_time(acq, s, {x1, x2}));
      }
    }
  }
  return best;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  std::map<std::string, std::pair<std::string, int>> kv;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (std::find(config_keys().begin(), config_keys().end(), key) == config_keys().end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
    }
    if (!kv.emplace(key, std::make_pair(value, line_no)).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }

  auto where = [&](const std::string& key) {
    return "line " + std::to_string(kv.at(key).second) + ": ";
  };
  auto get_double = [&](const std::string& key, std::optional<double> fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (!fallback) throw ConfigError("missing required key '" + key + "'");
      return *fallback;
    }
    double v = 0.0;
    if (!parse_number(it->second.first, v)) {
      throw ConfigError(where(key) + "'" + key + "' is not a number");
    }
    return v;
  };
  auto get_int = [&](const std::string& key, std::optional<long long> fallback) {
    const auto it = kv.find(key);
    if (it == kv.end()) {
      if (!fallback) throw ConfigError("missing required key '" + key + "'");
      return *fallback;
    }
    long long v = 0;
    if (!parse_integer(it->second.first, v)) {
      throw ConfigError(where(key) + "'" + key + "' is not an integer");
    }
    return v;
  };

  RunConfig rc;
  auto& a = rc.acq;
  a.alpha = get_double("alpha", std::nullopt);
  a.h = get_double("h", std::nullopt);
  a.s_min = get_double("s_min", std::nullopt);
  a.s_max = get_double("s_max", std::nullopt);
  a.f_margin = get_double("f_margin", 1e-3);
  a.window_taper = get_double("window_taper", 0.05);
  if (a.alpha == 1.0) {
    throw DomainError(where("alpha") +
                      "alpha=1 is the monostatic case, which is excluded");
  }
  if (!(a.h > 0.0)) throw DomainError(where("h") + "height h must be positive");

  auto& g = rc.grid;
  g.x1 = {get_double("x1_min", std::nullopt), get_double("x1_max", std::nullopt),
          static_cast<int>(get_int("nx1", std::nullopt))};
  g.x2 = {get_double("x2_min", std::nullopt), get_double("x2_max", std::nullopt),
          static_cast<int>(get_int("nx2", std::nullopt))};
  a.t_min = get_double("t_min", ground_threshold(a, a.s_min));
  a.t_max = get_double("t_max", default_t_max(a, g));
  g.s = {a.s_min, a.s_max, static_cast<int>(get_int("ns", 128))};
  g.t = {a.t_min, a.t_max, static_cast<int>(get_int("nt", 256))};

  rc.ellipse_samples = static_cast<int>(get_int("ellipse_samples", 0));
  rc.g_samples = static_cast<int>(get_int("g_samples", kDefaultMuteSamples));
  const long long seed = get_int("seed", 0);
  if (seed < 0) throw ConfigError(where("seed") + "seed must be non-negative");
  rc.seed = static_cast<std::uint64_t>(seed);
  if (kv.count("region")) rc.region = parse_region(kv.at("region").first);
  if (kv.count("s1")) rc.s1 = get_double("s1", std::nullopt);

  try {
    a.validate();
    g.validate();
  } catch (const GridMismatch& e) {
    throw ConfigError(e.what());
  }
  if (!(a.t_max > a.t_min)) throw ConfigError("t_max must exceed t_min");
  if (rc.ellipse_samples != 0 && rc.ellipse_samples < 8) {
    throw ConfigError("ellipse_samples must be 0 (auto) or >= 8");
  }
  if (rc.g_samples < 8) throw ConfigError("g_samples must be >= 8");
  return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_config(text);
}

std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  const auto& a = c.acq;
  const auto& g = c.grid;
  os << "alpha=" << format_double(a.alpha) << "\n"
     << "h=" << format_double(a.h) << "\n"
     << "s_min=" << format_double(a.s_min) << "\n"
     << "s_max=" << format_double(a.s_max) << "\n"
     << "ns=" << g.s.n << "\n"
     << "t_min=" << format_double(a.t_min) << "\n"
     << "t_max=" << format_double(a.t_max) << "\n"
     << "nt=" << g.t.n << "\n"
     << "x1_min=" << format_double(g.x1.lo) << "\n"
     << "x1_max=" << format_double(g.x1.hi) << "\n"
     << "x2_min=" << format_double(g.x2.lo) << "\n"
     << "x2_max=" << format_double(g.x2.hi) << "\n"
     << "nx1=" << g.x1.n << "\n"
     << "nx2=" << g.x2.n << "\n"
     << "ellipse_samples=" << c.ellipse_samples << "\n"
     << "f_margin=" << format_double(a.f_margin) << "\n"
     << "window_taper=" << format_double(a.window_taper) << "\n"
     << "region=" << to_string(c.region) << "\n"
     << "seed=" << c.seed << "\n"
     << "g_samples=" << c.g_samples << "\n";
  if (c.s1) os << "s1=" << format_double(*c.s1) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Datasets

namespace {

constexpr std::string_view kMagic = "bsar-dataset";

std::string_view role_name(ArrayRole r) {
  return r == ArrayRole::image ? "image" : "sinogram";
}

std::uint32_t crc_of(const std::string& bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), chunk);
    off += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string encode_payload(const std::vector<double>& values) {
  std::string out(values.size() * 4, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(values[i]));
    for (int b = 0; b < 4; ++b) {
      out[4 * i + b] = static_cast<char>((bits >> (8 * b)) & 0xffu);
    }
  }
  return out;
}

std::vector<double> decode_payload(const std::string& bytes) {
  std::vector<double> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::uint32_t bits = 0;
    for (int b = 0; b < 4; ++b) {
      bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[4 * i + b])) << (8 * b);
    }
    out[i] = std::bit_cast<float>(bits);
  }
  return out;
}

void write_dataset(const std::filesystem::path& path, ArrayRole role,
                   const GridSpec& grid, const std::vector<double>& values,
                   const AcquisitionConfig& cfg,
                   const std::optional<EpsilonSelection>& sel) {
  DatasetHeader h;
  h.role = role;
  h.grid = grid;
  h.alpha = cfg.alpha;
  h.h = cfg.h;
  h.selection = sel;
  const std::string payload = encode_payload(values);
  h.count = values.size();
  h.checksum = crc_of(payload);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << h.render() << "\n\n";
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

struct RawDataset {
  DatasetHeader header;
  std::string payload;
};

RawDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw CorruptHeader("empty dataset file");
  RawDataset raw;
  raw.header = DatasetHeader::parse(line);
  std::string blank;
  if (!std::getline(in, blank) || !blank.empty()) {
    throw CorruptHeader("dataset header must be followed by an empty line");
  }
  raw.payload.assign((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.payload.size() != raw.header.count * 4) {
    throw ChecksumMismatch("payload holds " + std::to_string(raw.payload.size()) +
                           " bytes, header announces " +
                           std::to_string(raw.header.count * 4));
  }
  if (crc_of(raw.payload) != raw.header.checksum) {
    throw ChecksumMismatch("payload checksum does not match the header");
  }
  return raw;
}

}  // namespace

std::string DatasetHeader::render() const {
  std::ostringstream os;
  os << kMagic << " version=" << version << " role=" << role_name(role);
  auto axis = [&](const char* name, const Axis& a) {
    os << " " << name << "_min=" << format_double(a.lo) << " " << name
       << "_max=" << format_double(a.hi) << " n" << name << "=" << a.n;
  };
  axis("x1", grid.x1);
  axis("x2", grid.x2);
  axis("s", grid.s);
  axis("t", grid.t);
  os << " alpha=" << format_double(alpha) << " h=" << format_double(h);
  if (selection) {
    os << " eps_s1=" << format_double(selection->s1)
       << " eps_k1=" << format_double(selection->k1)
       << " eps=" << format_double(selection->epsilon)
       << " eps_beta=" << format_double(selection->beta);
  }
  os << " count=" << count << " crc32=" << checksum;
  return os.str();
}

DatasetHeader DatasetHeader::parse(std::string_view line) {
  line = trim(line);
  auto tokens = split(line, ' ');
  if (tokens.empty() || tokens.front() != kMagic) {
    throw CorruptHeader("missing dataset magic");
  }
  std::map<std::string, std::string> kv;
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    if (tokens[i].empty()) continue;
    const auto eq = tokens[i].find('=');
    if (eq == std::string_view::npos) throw CorruptHeader("malformed header token");
    kv[std::string(tokens[i].substr(0, eq))] = std::string(tokens[i].substr(eq + 1));
  }
  auto num = [&](const std::string& key) {
    const auto it = kv.find(key);
    double v = 0.0;
    if (it == kv.end() || !parse_number(it->second, v)) {
      throw CorruptHeader("header field '" + key + "' missing or malformed");
    }
    return v;
  };
  auto integer = [&](const std::string& key) {
    const auto it = kv.find(key);
    unsigned long long v = 0;
    if (it == kv.end() || !parse_integer(it->second, v)) {
      throw CorruptHeader("header field '" + key + "' missing or malformed");
    }
    return v;
  };
  DatasetHeader h;
  h.version = static_cast<int>(integer("version"));
  if (h.version != kDatasetVersion) {
    throw VersionMismatch("dataset version " + std::to_string(h.version) +
                          " is not supported (expected " +
                          std::to_string(kDatasetVersion) + ")");
  }
  const auto role = kv.find("role");
  if (role == kv.end()) throw CorruptHeader("header field 'role' missing");
  if (role->second == "image") {
    h.role = ArrayRole::image;
  } else if (role->second == "sinogram") {
    h.role = ArrayRole::sinogram;
  } else {
    throw CorruptHeader("unknown role '" + role->second + "'");
  }
  auto axis = [&](const std::string& name) {
    return Axis{num(name + "_min"), num(name + "_max"),
                static_cast<int>(integer("n" + name))};
  };
  h.grid = {axis("x1"), axis("x2"), axis("s"), axis("t")};
  h.alpha = num("alpha");
  h.h = num("h");
  if (kv.count("eps")) {
    h.selection = EpsilonSelection{num("eps_s1"), num("eps_k1"), num("eps"), num("eps_beta")};
  }
  h.count = integer("count");
  h.checksum = static_cast<std::uint32_t>(integer("crc32"));
  try {
    h.grid.validate();
  } catch (const GridMismatch& e) {
    throw CorruptHeader(e.what());
  }
  const std::uint64_t expect =
      h.role == ArrayRole::image ? h.grid.scene_size() : h.grid.data_size();
  if (h.count != expect) throw CorruptHeader("header count does not match the grid");
  return h;
}

void save_image(const std::filesystem::path& path, const Image& img,
                const AcquisitionConfig& cfg,
                const std::optional<EpsilonSelection>& sel) {
  img.check();
  write_dataset(path, ArrayRole::image, img.grid, img.values, cfg, sel);
}

void save_sinogram(const std::filesystem::path& path, const Sinogram& sino,
                   const AcquisitionConfig& cfg,
                   const std::optional<EpsilonSelection>& sel) {
  sino.check();
  write_dataset(path, ArrayRole::sinogram, sino.grid, sino.values, cfg, sel);
}

Image load_image(const std::filesystem::path& path, DatasetHeader* header) {
  auto raw = read_dataset(path);
  if (raw.header.role != ArrayRole::image) {
    throw RoleMismatch("'" + path.string() + "' holds a sinogram, not an image");
  }
  if (header) *header = raw.header;
  return {raw.header.grid, decode_payload(raw.payload)};
}

Sinogram load_sinogram(const std::filesystem::path& path, DatasetHeader* header) {
  auto raw = read_dataset(path);
  if (raw.header.role != ArrayRole::sinogram) {
    throw RoleMismatch("'" + path.string() + "' holds an image, not a sinogram");
  }
  if (header) *header = raw.header;
  return {raw.header.grid, decode_payload(raw.payload)};
}

DatasetHeader read_header(const std::filesystem::path& path) {
  return read_dataset(path).header;
}

// ---------------------------------------------------------------------------
// Exports

namespace {

void write_pgm(const std::filesystem::path& path, int width, int height,
               const std::vector<double>& pixels, Normalization norm) {
  for (double v : pixels) {
    if (!std::isfinite(v)) throw DomainError("cannot export non-finite values");
  }
  std::vector<std::uint16_t> q(pixels.size(), 0);
  if (!pixels.empty()) {
    if (norm == Normalization::minmax) {
      const auto [lo, hi] = std::minmax_element(pixels.begin(), pixels.end());
      const double range = *hi - *lo;
      if (range > 0.0) {
        for (std::size_t i = 0; i < pixels.size(); ++i) {
          q[i] = static_cast<std::uint16_t>(std::lround(65535.0 * (pixels[i] - *lo) / range));
        }
      }
    } else {
      double amax = 0.0;
      for (double v : pixels) amax = std::max(amax, std::abs(v));
      if (amax > 0.0) {
        for (std::size_t i = 0; i < pixels.size(); ++i) {
          q[i] = static_cast<std::uint16_t>(
              std::lround(65535.0 * 0.5 * (1.0 + pixels[i] / amax)));
        }
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "P5\n" << width << " " << height << "\n65535\n";
  for (auto v : q) {
    const char be[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
    out.write(be, 2);
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

void write_csv(const std::filesystem::path& path, int rows, int cols,
               const std::vector<double>& values) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  char buf[32];
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.9g", values[static_cast<std::size_t>(r) * cols + c]);
      if (c) out << ',';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace

void export_pgm(const Image& img, const std::filesystem::path& path,
                Normalization norm) {
  img.check();
  const int w = img.grid.x1.n;
  const int hgt = img.grid.x2.n;
  std::vector<double> px(img.values.size());
  for (int row = 0; row < hgt; ++row) {
    for (int col = 0; col < w; ++col) {
      px[static_cast<std::size_t>(row) * w + col] = img.at(col, hgt - 1 - row);
    }
  }
  write_pgm(path, w, hgt, px, norm);
}

void export_pgm(const Sinogram& sino, const std::filesystem::path& path,
                Normalization norm) {
  sino.check();
  const int w = sino.grid.s.n;
  const int hgt = sino.grid.t.n;
  std::vector<double> px(sino.values.size());
  for (int row = 0; row < hgt; ++row) {
    for (int col = 0; col < w; ++col) {
      px[static_cast<std::size_t>(row) * w + col] = sino.at(col, row);
    }
  }
  write_pgm(path, w, hgt, px, norm);
}

void export_csv(const Image& img, const std::filesystem::path& path) {
  img.check();
  write_csv(path, img.grid.x1.n, img.grid.x2.n, img.values);
}

void export_csv(const Sinogram& sino, const std::filesystem::path& path) {
  sino.check();
  write_csv(path, sino.grid.s.n, sino.grid.t.n, sino.values);
}

}  // namespace bsar
