// Regenerates the bundled deterministic test assets under data/.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "sinefield/data.hpp"

namespace {

// Small grayscale test pattern: smooth ramp, oriented tones and a bright
// blob, loosely mimicking a natural image crop. All components stay below
// the Nyquist limit of a stride-2 train grid so interpolation between seen
// pixels is well posed.
sf::Matrix test_pattern(sf::Index n) {
  sf::Matrix img(n, n);
  for (sf::Index r = 0; r < n; ++r)
    for (sf::Index c = 0; c < n; ++c) {
      const double u = (static_cast<double>(c) + 0.5) / static_cast<double>(n);
      const double v = (static_cast<double>(r) + 0.5) / static_cast<double>(n);
      constexpr double tau = 2.0 * std::numbers::pi;
      double s = 0.42 + 0.25 * u - 0.18 * v;
      s += 0.16 * std::sin(tau * (3.0 * u + 1.0 * v) + 0.4);
      s += 0.11 * std::sin(tau * (1.5 * u + 3.0 * v) + 1.9);
      s += 0.05 * std::sin(tau * (3.5 * u - 2.5 * v) + 0.7);
      const double dx = u - 0.62, dy = v - 0.3;
      s += 0.25 * std::exp(-(dx * dx + dy * dy) / 0.02);
      img(r, c) = std::clamp(s, 0.0, 1.0);
    }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  sf::save_pgm(test_pattern(32), dir + "/image32.pgm");
  sf::save_pgm(test_pattern(16), dir + "/image16.pgm");
  std::printf("wrote %s/image32.pgm and %s/image16.pgm\n", dir.c_str(), dir.c_str());
  return 0;
}
