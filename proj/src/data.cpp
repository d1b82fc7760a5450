#include "sinefield/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sinefield/errors.hpp"

namespace sf {

Matrix gather_cols(const Matrix& m, std::span<const Index> idx) {
  Matrix out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out.col(static_cast<Index>(i)) = m.col(idx[i]);
  return out;
}

namespace {

// Reads one whitespace-delimited PGM header token, honoring '#' comments.
std::string pgm_token(std::istream& in, std::size_t& offset) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    ++offset;
    if (ch == '#') {
      while ((ch = in.get()) != EOF) {
        ++offset;
        if (ch == '\n') break;
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) break;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  return tok;
}

long parse_header_int(const std::string& tok, std::size_t offset, const char* what) {
  try {
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError(std::string("pgm: bad ") + what + " near byte offset " +
                      std::to_string(offset));
  }
}

}  // namespace

Matrix load_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_pgm: cannot open " + path);
  std::size_t offset = 0;
  const std::string magic = pgm_token(f, offset);
  if (magic != "P5")
    throw FormatError("pgm: unsupported magic '" + magic + "' at byte offset 0 (binary P5 only)");
  const long w = parse_header_int(pgm_token(f, offset), offset, "width");
  const long h = parse_header_int(pgm_token(f, offset), offset, "height");
  const long maxval = parse_header_int(pgm_token(f, offset), offset, "maxval");
  if (w < 1 || h < 1)
    throw FormatError("pgm: non-positive dimensions at byte offset " + std::to_string(offset));
  if (maxval != 255)
    throw FormatError("pgm: maxval must be 255, got " + std::to_string(maxval) +
                      " at byte offset " + std::to_string(offset));
  std::vector<unsigned char> buf(static_cast<std::size_t>(w) * static_cast<std::size_t>(h));
  f.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(f.gcount()) != buf.size())
    throw FormatError("pgm: payload truncated at byte offset " +
                      std::to_string(offset + static_cast<std::size_t>(f.gcount())));
  Matrix img(h, w);
  for (long r = 0; r < h; ++r)
    for (long c = 0; c < w; ++c)
      img(r, c) = buf[static_cast<std::size_t>(r * w + c)] / 255.0;
  return img;
}

void save_pgm(const Matrix& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("save_pgm: cannot open " + path);
  f << "P5\n" << img.cols() << ' ' << img.rows() << "\n255\n";
  for (Index r = 0; r < img.rows(); ++r)
    for (Index c = 0; c < img.cols(); ++c) {
      const double v = std::clamp(img(r, c), 0.0, 1.0);
      const unsigned char byte = static_cast<unsigned char>(std::lround(v * 255.0));
      f.put(static_cast<char>(byte));
    }
  if (!f) throw IoError("save_pgm: write failed for " + path);
}

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace

std::vector<double> load_wav_pcm16_mono(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_wav_pcm16_mono: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw FormatError("wav: not a RIFF/WAVE file");

  bool have_fmt = false;
  std::size_t at = 12;
  std::vector<double> samples;
  while (at + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + at);
    const std::uint32_t len = read_u32(bytes.data() + at + 4);
    const std::size_t body = at + 8;
    if (body + len > bytes.size()) throw FormatError("wav: chunk overruns file");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw FormatError("wav: fmt chunk too short");
      const std::uint16_t audio_format = read_u16(bytes.data() + body);
      const std::uint16_t channels = read_u16(bytes.data() + body + 2);
      const std::uint16_t bits = read_u16(bytes.data() + body + 14);
      if (audio_format != 1)
        throw FormatError("wav: unsupported audioFormat " + std::to_string(audio_format) +
                          " (PCM=1 only)");
      if (channels != 1)
        throw FormatError("wav: unsupported channels " + std::to_string(channels) +
                          " (mono only)");
      if (bits != 16)
        throw FormatError("wav: unsupported bitsPerSample " + std::to_string(bits) +
                          " (16 only)");
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_fmt) throw FormatError("wav: data chunk before fmt chunk");
      if (len % 2 != 0) throw FormatError("wav: data chunk length is odd");
      samples.reserve(len / 2);
      for (std::size_t i = 0; i < len; i += 2) {
        const std::int16_t s =
            static_cast<std::int16_t>(read_u16(bytes.data() + body + i));
        samples.push_back(static_cast<double>(s) / 32768.0);
      }
      return samples;
    }
    at = body + len + (len % 2);  // chunks are word-aligned
  }
  throw FormatError("wav: missing data chunk");
}

SignalDataset make_image_dataset(const Matrix& img, Index train_stride) {
  if (train_stride < 1) throw InvalidArgument("make_image_dataset: stride must be >= 1");
  const Index h = img.rows(), w = img.cols();
  if (h < train_stride || w < train_stride)
    throw InvalidArgument("make_image_dataset: image smaller than stride");
  SignalDataset d;
  d.coords.resize(2, h * w);
  d.targets.resize(1, h * w);
  Index at = 0;
  for (Index r = 0; r < h; ++r)
    for (Index c = 0; c < w; ++c, ++at) {
      d.coords(0, at) = 2.0 * (static_cast<double>(c) + 0.5) / static_cast<double>(w) - 1.0;
      d.coords(1, at) = 2.0 * (static_cast<double>(r) + 0.5) / static_cast<double>(h) - 1.0;
      d.targets(0, at) = img(r, c);
      if (r % train_stride == 0 && c % train_stride == 0)
        d.train_idx.push_back(at);
      else
        d.test_idx.push_back(at);
    }
  return d;
}

SignalDataset make_audio_dataset(std::span<const double> samples) {
  const Index n = static_cast<Index>(samples.size());
  if (n < 1) throw InvalidArgument("make_audio_dataset: empty sample sequence");
  SignalDataset d;
  d.coords.resize(1, n);
  d.targets.resize(1, n);
  d.train_idx.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    d.coords(0, i) = 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n) - 1.0;
    d.targets(0, i) = (samples[static_cast<std::size_t>(i)] + 1.0) / 2.0;
    d.train_idx[static_cast<std::size_t>(i)] = i;
  }
  return d;
}

SignalDataset make_sphere_dataset(std::span<const double> phi, std::span<const double> theta,
                                  std::span<const double> values) {
  const std::size_t n = phi.size();
  if (n == 0) throw InvalidArgument("make_sphere_dataset: empty grid");
  if (theta.size() != n || values.size() != n)
    throw ShapeError("make_sphere_dataset: phi/theta/values lengths differ");
  constexpr double half_pi = std::numbers::pi / 2.0;
  constexpr double slack = 1e-6;  // grids parsed from rounded text graze the bounds
  double lo = values[0], hi = values[0];
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo))
    throw InvalidArgument("make_sphere_dataset: constant values, normalization undefined");
  SignalDataset d;
  d.coords.resize(3, static_cast<Index>(n));
  d.targets.resize(1, static_cast<Index>(n));
  d.train_idx.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(phi[i] >= -half_pi - slack && phi[i] <= half_pi + slack))
      throw InvalidArgument("make_sphere_dataset: phi outside [-pi/2, pi/2]");
    if (!(theta[i] >= -std::numbers::pi - slack && theta[i] <= std::numbers::pi + slack))
      throw InvalidArgument("make_sphere_dataset: theta outside [-pi, pi]");
    const Index c = static_cast<Index>(i);
    d.coords(0, c) = std::cos(phi[i]) * std::cos(theta[i]);
    d.coords(1, c) = std::cos(phi[i]) * std::sin(theta[i]);
    d.coords(2, c) = std::sin(phi[i]);
    d.targets(0, c) = (values[i] - lo) / (hi - lo);
    d.train_idx[i] = c;
  }
  return d;
}

VoxelGrid analytic_sphere_grid(Index n, double radius) {
  if (n < 1) throw InvalidArgument("analytic_sphere_grid: n must be >= 1");
  VoxelGrid g;
  g.nx = g.ny = g.nz = n;
  g.occupied.resize(static_cast<std::size_t>(n * n * n));
  auto center = [n](Index i) {
    return 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n) - 1.0;
  };
  std::size_t at = 0;
  for (Index z = 0; z < n; ++z)
    for (Index y = 0; y < n; ++y)
      for (Index x = 0; x < n; ++x, ++at) {
        const double cx = center(x), cy = center(y), cz = center(z);
        g.occupied[at] = (cx * cx + cy * cy + cz * cz <= radius * radius) ? 1 : 0;
      }
  return g;
}

SignalDataset make_occupancy_dataset(const VoxelGrid& grid) {
  const Index n = grid.nx * grid.ny * grid.nz;
  if (n < 1 || grid.occupied.size() != static_cast<std::size_t>(n))
    throw InvalidArgument("make_occupancy_dataset: empty or inconsistent grid");
  SignalDataset d;
  d.coords.resize(3, n);
  d.targets.resize(1, n);
  d.train_idx.resize(static_cast<std::size_t>(n));
  auto center = [](Index i, Index dim) {
    return 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(dim) - 1.0;
  };
  Index at = 0;
  for (Index z = 0; z < grid.nz; ++z)
    for (Index y = 0; y < grid.ny; ++y)
      for (Index x = 0; x < grid.nx; ++x, ++at) {
        d.coords(0, at) = center(x, grid.nx);
        d.coords(1, at) = center(y, grid.ny);
        d.coords(2, at) = center(z, grid.nz);
        d.targets(0, at) = grid.at(x, y, z) ? 1.0 : 0.0;
        d.train_idx[static_cast<std::size_t>(at)] = at;
      }
  return d;
}

SignalDataset synth_signal(std::span<const SynthComponent> components, Index n) {
  if (components.empty()) throw InvalidArgument("synth_signal: empty component list");
  if (n < 2) throw InvalidArgument("synth_signal: need at least two samples");
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(n);  // [0,1)
    double s = 0.0;
    for (const auto& c : components)
      s += c.amplitude * std::sin(2.0 * std::numbers::pi * c.frequency * u + c.phase);
    raw[static_cast<std::size_t>(j)] = s;
  }
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  if (!(*hi_it > *lo_it))
    throw InvalidArgument("synth_signal: degenerate signal, min-max normalization undefined");
  const double lo = *lo_it, span = *hi_it - *lo_it;
  SignalDataset d;
  d.coords.resize(1, n);
  d.targets.resize(1, n);
  d.train_idx.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    d.coords(0, j) = 2.0 * static_cast<double>(j) / static_cast<double>(n) - 1.0;
    d.targets(0, j) = (raw[static_cast<std::size_t>(j)] - lo) / span;
    d.train_idx[static_cast<std::size_t>(j)] = j;
  }
  return d;
}

std::vector<std::array<double, 3>> load_sphere_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("load_sphere_csv: cannot open " + path);
  std::vector<std::array<double, 3>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::array<double, 3> row{};
    char extra;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf %c", &row[0], &row[1], &row[2], &extra) != 3)
      throw FormatError("sphere csv: malformed row at line " + std::to_string(lineno));
    rows.push_back(row);
  }
  if (rows.empty()) throw FormatError("sphere csv: no data rows");
  return rows;
}

void write_dataset_csv(const SignalDataset& data, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("write_dataset_csv: cannot open " + path);
  for (Index r = 0; r < data.coords.rows(); ++r) f << 'x' << r << ',';
  f << "target\n";
  char buf[32];
  for (Index c = 0; c < data.coords.cols(); ++c) {
    for (Index r = 0; r < data.coords.rows(); ++r) {
      std::snprintf(buf, sizeof buf, "%.10g", data.coords(r, c));
      f << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.10g", data.targets(0, c));
    f << buf << '\n';
  }
  if (!f) throw IoError("write_dataset_csv: write failed for " + path);
}

}  // namespace sf
