#include "sinefield/model.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "sinefield/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace sf {

std::vector<Index> SnfParams::dims() const {
  std::vector<Index> d;
  if (layers.empty()) return d;
  d.push_back(layers.front().weight.cols());
  for (const auto& l : layers) d.push_back(l.weight.rows());
  return d;
}

Index SnfParams::param_count() const {
  Index n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  return n;
}

Index SnfParams::coord_dim() const {
  if (layers.empty()) return 0;
  const Index d_in = layers.front().weight.cols();
  if (activation == Activation::ReluPosEnc) return d_in / (2 * posenc_freqs);
  return d_in;
}

void validate(const SnfParams& params) {
  if (params.layers.empty()) throw ShapeError("model: no layers");
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& l = params.layers[i];
    // size-0 bias marks a bias-free layer (the analysis toys use them)
    if (l.bias.size() != l.weight.rows() && l.bias.size() != 0)
      throw ShapeError("model: bias length does not match weight rows at layer " +
                       std::to_string(i + 1));
    if (i > 0 && l.weight.cols() != params.layers[i - 1].weight.rows())
      throw ShapeError("model: layer dimensions do not chain at layer " +
                       std::to_string(i + 1));
  }
  if (!(params.omega0 > 0.0) || !(params.omega_h > 0.0))
    throw ShapeError("model: frequency multipliers must be positive");
  if (params.activation == Activation::ReluPosEnc) {
    if (params.posenc_freqs < 1)
      throw ShapeError("model: ReluPosEnc requires posenc_freqs >= 1");
    if (params.layers.front().weight.cols() % (2 * params.posenc_freqs) != 0)
      throw ShapeError("model: first layer width is not a multiple of 2K");
  }
}

namespace {

Matrix encode_batch(const Matrix& X, int K) {
  Matrix E(2 * K * X.rows(), X.cols());
  for (Index c = 0; c < X.cols(); ++c)
    E.col(c) = positional_encode(X.col(c), K);
  return E;
}

void warn_once_out_of_range() {
  static std::atomic<bool> warned{false};
  if (!warned.exchange(true))
    std::fprintf(stderr,
                 "sinefield: warning: coordinates outside [-1,1] fed to a sine field\n");
}

}  // namespace

ForwardTrace forward(const SnfParams& params, const Matrix& X) {
  validate(params);
  if (X.cols() < 1) throw ShapeError("forward: input has no columns");
  const bool sine = params.activation == Activation::SineField;
  if (sine && X.rows() != params.layers.front().weight.cols())
    throw ShapeError("forward: input dimension does not match first layer");
  if (!sine && X.rows() != params.coord_dim())
    throw ShapeError("forward: input dimension does not match encoded first layer");
  if (sine && X.size() > 0 && (X.minCoeff() < -1.0 || X.maxCoeff() > 1.0))
    warn_once_out_of_range();

  ForwardTrace t;
  t.acts.reserve(params.layers.size());
  t.pre.reserve(params.layers.size());
  t.acts.push_back(sine ? X : encode_batch(X, params.posenc_freqs));

  const Index l = params.depth();
  for (Index i = 0; i < l; ++i) {
    const auto& layer = params.layers[static_cast<std::size_t>(i)];
    Matrix z = layer.weight * t.acts.back();
    if (layer.bias.size() > 0) z.colwise() += layer.bias;
    t.pre.push_back(z);
    if (i == l - 1) break;  // linear output layer
    if (sine) {
      const double om = (i == 0) ? params.omega0 : params.omega_h;
      t.acts.push_back((om * z.array()).sin().matrix());
    } else {
      t.acts.push_back(z.cwiseMax(0.0));
    }
  }
  t.output = t.pre.back();
  return t;
}

std::vector<Layer> backward(const SnfParams& params, const ForwardTrace& trace,
                            const Matrix& residual) {
  const Index l = params.depth();
  if (residual.rows() != trace.output.rows() || residual.cols() != trace.output.cols())
    throw ShapeError("backward: residual shape does not match output");
  const bool sine = params.activation == Activation::SineField;

  std::vector<Layer> grads(static_cast<std::size_t>(l));
  Matrix delta = residual;  // d(1/2 ||r||^2) / d(pre activation of layer i)
  for (Index i = l - 1; i >= 0; --i) {
    auto& g = grads[static_cast<std::size_t>(i)];
    g.weight.noalias() = delta * trace.acts[static_cast<std::size_t>(i)].transpose();
    if (params.layers[static_cast<std::size_t>(i)].bias.size() > 0)
      g.bias = delta.rowwise().sum();
    else
      g.bias.resize(0);
    if (i == 0) break;
    Matrix dz = params.layers[static_cast<std::size_t>(i)].weight.transpose() * delta;
    const Matrix& pre = trace.pre[static_cast<std::size_t>(i - 1)];
    if (sine) {
      const double om = (i - 1 == 0) ? params.omega0 : params.omega_h;
      delta = (dz.array() * (om * (om * pre.array()).cos())).matrix();
    } else {
      delta = (dz.array() * (pre.array() > 0.0).cast<double>()).matrix();
    }
  }
  return grads;
}

Vector flatten(const std::vector<Layer>& layers) {
  Index n = 0;
  for (const auto& l : layers) n += l.weight.size() + l.bias.size();
  Vector v(n);
  Index at = 0;
  for (const auto& l : layers) {
    for (Index r = 0; r < l.weight.rows(); ++r)
      for (Index c = 0; c < l.weight.cols(); ++c) v(at++) = l.weight(r, c);
    for (Index r = 0; r < l.bias.size(); ++r) v(at++) = l.bias(r);
  }
  return v;
}

Vector per_example_grad(const SnfParams& params, const Matrix& x) {
  if (x.cols() != 1) throw InvalidArgument("per_example_grad: expected a single column");
  if (params.layers.back().weight.rows() != 1)
    throw InvalidArgument("per_example_grad: output dimension must be 1");
  ForwardTrace t = forward(params, x);
  Matrix one = Matrix::Ones(1, 1);
  return flatten(backward(params, t, one));
}

Vector positional_encode(const Vector& x, int K) {
  if (K < 1) throw InvalidArgument("positional_encode: K must be >= 1");
  Vector out(2 * K * x.size());
  Index at = 0;
  for (Index i = 0; i < x.size(); ++i) {
    double freq = std::numbers::pi;
    for (int k = 0; k < K; ++k) {
      out(at++) = std::sin(freq * x(i));
      out(at++) = std::cos(freq * x(i));
      freq *= 2.0;
    }
  }
  return out;
}

void save_checkpoint(const SnfParams& params, const std::string& path) {
  validate(params);
  for (const auto& l : params.layers)
    if (l.bias.size() == 0)
      throw InvalidArgument("save_checkpoint: bias-free layers are not representable");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("save_checkpoint: cannot open " + path);
  char buf[64];
  std::ostringstream header;
  if (params.activation == Activation::SineField) {
    header << "SNF1 " << params.depth();
    for (Index d : params.dims()) header << ' ' << d;
    std::snprintf(buf, sizeof buf, " %.17g %.17g", params.omega0, params.omega_h);
    header << buf;
  } else {
    header << "RPE1 " << params.posenc_freqs << ' ' << params.depth();
    for (Index d : params.dims()) header << ' ' << d;
  }
  header << '\n';
  f << header.str();
  const Vector v = flatten(params.layers);
  f.write(reinterpret_cast<const char*>(v.data()),
          static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(v.size())));
  if (!f) throw IoError("save_checkpoint: write failed for " + path);
}

SnfParams load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("load_checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(f, line)) throw FormatError("load_checkpoint: missing header");
  std::istringstream hs(line);
  std::string magic;
  hs >> magic;
  SnfParams p;
  Index depth = 0;
  if (magic == "SNF1") {
    p.activation = Activation::SineField;
  } else if (magic == "RPE1") {
    p.activation = Activation::ReluPosEnc;
    if (!(hs >> p.posenc_freqs)) throw FormatError("load_checkpoint: bad RPE1 header");
  } else {
    throw FormatError("load_checkpoint: bad magic '" + magic + "'");
  }
  if (!(hs >> depth) || depth < 1) throw FormatError("load_checkpoint: bad depth");
  std::vector<Index> dims(static_cast<std::size_t>(depth) + 1);
  for (auto& d : dims)
    if (!(hs >> d) || d < 1) throw FormatError("load_checkpoint: bad dimension list");
  if (p.activation == Activation::SineField) {
    if (!(hs >> p.omega0 >> p.omega_h))
      throw FormatError("load_checkpoint: missing frequency multipliers");
  }
  p.layers.resize(static_cast<std::size_t>(depth));
  for (Index i = 0; i < depth; ++i) {
    auto& l = p.layers[static_cast<std::size_t>(i)];
    l.weight.resize(dims[static_cast<std::size_t>(i) + 1], dims[static_cast<std::size_t>(i)]);
    l.bias.resize(dims[static_cast<std::size_t>(i) + 1]);
    for (Index r = 0; r < l.weight.rows(); ++r)
      for (Index c = 0; c < l.weight.cols(); ++c)
        if (!f.read(reinterpret_cast<char*>(&l.weight(r, c)), sizeof(double)))
          throw FormatError("load_checkpoint: truncated parameter stream");
    for (Index r = 0; r < l.bias.size(); ++r)
      if (!f.read(reinterpret_cast<char*>(&l.bias(r)), sizeof(double)))
        throw FormatError("load_checkpoint: truncated parameter stream");
  }
  validate(p);
  return p;
}

}  // namespace sf
