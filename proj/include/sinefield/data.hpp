#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sinefield/types.hpp"

namespace sf {

// Coordinates normalized to [-1,1]^d0 (one per column), targets in [0,1]
// with PSNR peak 1. train_idx and test_idx are disjoint column index sets.
struct SignalDataset {
  Matrix coords;   // d0 x N
  Matrix targets;  // dout x N
  std::vector<Index> train_idx;
  std::vector<Index> test_idx;
  double peak = 1.0;
};

Matrix gather_cols(const Matrix& m, std::span<const Index> idx);

// Binary PGM (P5, maxval 255) as an H x W matrix of pixel/255 values.
// Format problems raise FormatError carrying the byte offset.
Matrix load_pgm(const std::string& path);
void save_pgm(const Matrix& img, const std::string& path);

// RIFF/WAVE, PCM, mono, 16-bit only; samples become int16/32768 in [-1,1).
// Unsupported layouts raise FormatError naming the offending field.
std::vector<double> load_wav_pcm16_mono(const std::string& path);

// Pixel centers map affinely to [-1,1]^2; pixels with
// (row mod stride, col mod stride) == (0,0) train, the rest test. stride 1
// puts every pixel in train and leaves test empty.
SignalDataset make_image_dataset(const Matrix& img, Index train_stride);

// 1D temporal signal; sample positions map like 1D pixel centers and
// amplitudes shift from [-1,1) to [0,1]. Everything trains.
SignalDataset make_audio_dataset(std::span<const double> samples);

// Each sample is (phi, theta, value) with phi in [-pi/2, pi/2], theta in
// [-pi, pi]. Coordinates lift to the unit sphere,
// (cos phi cos theta, cos phi sin theta, sin phi); values min-max normalize
// to [0,1].
SignalDataset make_sphere_dataset(std::span<const double> phi, std::span<const double> theta,
                                  std::span<const double> values);

struct VoxelGrid {
  Index nx = 0, ny = 0, nz = 0;
  std::vector<std::uint8_t> occupied;  // x-fastest, size nx*ny*nz

  std::uint8_t at(Index x, Index y, Index z) const {
    return occupied[static_cast<std::size_t>((z * ny + y) * nx + x)];
  }
};

// Ball of the given radius (in [-1,1]^3 units) voxelized on an n^3 grid.
VoxelGrid analytic_sphere_grid(Index n, double radius);

// Voxel centers normalized to [-1,1]^3 with binary {0,1} targets.
SignalDataset make_occupancy_dataset(const VoxelGrid& grid);

struct SynthComponent {
  double amplitude = 1.0;
  double frequency = 1.0;  // cycles across the [-1,1] domain
  double phase = 0.0;
};

// Deterministic 1D fixture: s_j = sum_m a_m sin(2 pi f_m j/n + phi_m) on n
// uniform positions over [-1,1), min-max normalized to [0,1]. Frequencies
// count cycles per domain, so an integer frequency f lands in DFT bin f.
SignalDataset synth_signal(std::span<const SynthComponent> components, Index n);

// Rows "phi,theta,value"; a '#' starts a comment line.
std::vector<std::array<double, 3>> load_sphere_csv(const std::string& path);

// Header "x0,...,xd,target"; one row per sample column.
void write_dataset_csv(const SignalDataset& data, const std::string& path);

}  // namespace sf
