#include "sinefield/dft.hpp"

#include <cmath>
#include <numbers>

#include "sinefield/errors.hpp"

namespace sf {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<std::complex<double>> direct_complex(const std::vector<std::complex<double>>& in) {
  const std::size_t n = in.size();
  std::vector<std::complex<double>> out(n);
  const double w = -2.0 * std::numbers::pi / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      // exponent reduced mod n keeps the angle small for long signals
      const double ang = w * static_cast<double>((k * j) % n);
      acc += in[j] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

std::vector<std::complex<double>> transform(std::vector<std::complex<double>> buf) {
  if (buf.empty()) throw InvalidArgument("dft1d: empty input");
  if (is_pow2(buf.size())) {
    fft_radix2(buf);
    return buf;
  }
  return direct_complex(buf);
}

}  // namespace

std::vector<std::complex<double>> dft_direct(std::span<const double> signal) {
  if (signal.empty()) throw InvalidArgument("dft_direct: empty input");
  std::vector<std::complex<double>> in(signal.begin(), signal.end());
  return direct_complex(in);
}

void fft_radix2(std::vector<std::complex<double>>& buf) {
  const std::size_t n = buf.size();
  if (!is_pow2(n)) throw InvalidArgument("fft_radix2: size must be a power of two");
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(buf[i], buf[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = buf[i + k];
        const std::complex<double> v = buf[i + k + len / 2] * w;
        buf[i + k] = u + v;
        buf[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

std::vector<double> dft1d(std::span<const double> signal) {
  if (signal.empty()) throw InvalidArgument("dft1d: empty input");
  auto spec = transform({signal.begin(), signal.end()});
  std::vector<double> mag(spec.size());
  for (std::size_t k = 0; k < spec.size(); ++k) mag[k] = std::abs(spec[k]);
  return mag;
}

Matrix dft2d_magnitude(const Matrix& img) {
  const Index h = img.rows(), w = img.cols();
  if (h == 0 || w == 0) throw InvalidArgument("dft2d_magnitude: empty input");
  Eigen::MatrixXcd tmp(h, w);
  std::vector<std::complex<double>> line(static_cast<std::size_t>(w));
  for (Index r = 0; r < h; ++r) {
    for (Index c = 0; c < w; ++c) line[static_cast<std::size_t>(c)] = img(r, c);
    auto spec = transform(line);
    for (Index c = 0; c < w; ++c) tmp(r, c) = spec[static_cast<std::size_t>(c)];
  }
  Matrix out(h, w);
  std::vector<std::complex<double>> col(static_cast<std::size_t>(h));
  for (Index c = 0; c < w; ++c) {
    for (Index r = 0; r < h; ++r) col[static_cast<std::size_t>(r)] = tmp(r, c);
    auto spec = transform(col);
    for (Index r = 0; r < h; ++r) out(r, c) = std::abs(spec[static_cast<std::size_t>(r)]);
  }
  return out;
}

}  // namespace sf
