#pragma once

#include "grid.hpp"
#include "quadrature.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

namespace wbfv {

enum class ConvolutionMethod { automatic, direct, fft };

/// Gauss-node quadrature of a convolution over the computational interval:
///
///   out(x_i^j) = sum_l sum_m dx alpha_m w(x_i^j - x_l^m) f(x_l^m)
///
/// Node values are laid out cell-major, index 3*i + j. The self-node entry
/// (zero separation) uses `self_value(dx * alpha_j)` so that singular kernels
/// stay finite. The FFT path exploits that, for a fixed pair of node offsets
/// (j, m), the weights are Toeplitz in the cell index.
class NodeConvolution {
public:
  static constexpr int kAutoFftCells = 128;

  NodeConvolution(const Grid& grid, std::function<double(double)> kernel,
                  std::function<double(double)> self_value,
                  ConvolutionMethod method = ConvolutionMethod::automatic)
      : n_cells_(grid.size()) {
    if (method == ConvolutionMethod::automatic)
      method = n_cells_ >= kAutoFftCells ? ConvolutionMethod::fft : ConvolutionMethod::direct;
    method_ = method;
    const double dx = grid.dx();
    auto weight = [&](int d, int j, int m) {
      const double sep = (d + GaussRule::offsets[j] - GaussRule::offsets[m]) * dx;
      const double w = (d == 0 && j == m) ? self_value(dx * GaussRule::weights[m]) : kernel(sep);
      return dx * GaussRule::weights[m] * w;
    };
    const int n = 3 * n_cells_;
    if (method_ == ConvolutionMethod::direct) {
      dense_.assign(static_cast<std::size_t>(n) * n, 0.0);
      for (int i = 0; i < n_cells_; ++i)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < n_cells_; ++l)
            for (int m = 0; m < 3; ++m)
              dense_[static_cast<std::size_t>(3 * i + j) * n + 3 * l + m] = weight(i - l, j, m);
    } else {
      fft_ = std::make_shared<FftPlan>(n_cells_, weight);
    }
  }

  int cells() const { return n_cells_; }
  ConvolutionMethod method() const { return method_; }

  std::vector<double> apply(std::span<const double> node_values) const {
    const int n = 3 * n_cells_;
    if (static_cast<int>(node_values.size()) != n)
      throw std::invalid_argument("node vector length does not match grid");
    std::vector<double> out(n, 0.0);
    if (method_ == ConvolutionMethod::direct) {
      for (int t = 0; t < n; ++t) {
        const double* row = &dense_[static_cast<std::size_t>(t) * n];
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += row[k] * node_values[k];
        out[t] = s;
      }
    } else {
      fft_->apply(node_values, out);
    }
    return out;
  }

private:
  using Complex = std::complex<double>;

  class FftPlan {
  public:
    template <class Weight>
    FftPlan(int n_cells, Weight&& weight) : n_(n_cells) {
      len_ = 1;
      while (len_ < 2 * n_) len_ *= 2;
      spec_ = len_ / 2 + 1;
      std::vector<double> buf(len_);
      std::vector<Complex> cbuf(spec_);
      forward_ = fftw_plan_dft_r2c_1d(len_, buf.data(), reinterpret_cast<fftw_complex*>(cbuf.data()),
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
      backward_ = fftw_plan_dft_c2r_1d(len_, reinterpret_cast<fftw_complex*>(cbuf.data()), buf.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
      kernels_.resize(9);
      for (int j = 0; j < 3; ++j)
        for (int m = 0; m < 3; ++m) {
          std::fill(buf.begin(), buf.end(), 0.0);
          for (int d = -(n_ - 1); d <= n_ - 1; ++d) buf[(d + len_) % len_] = weight(d, j, m);
          auto& k = kernels_[3 * j + m];
          k.resize(spec_);
          fftw_execute_dft_r2c(forward_, buf.data(), reinterpret_cast<fftw_complex*>(k.data()));
        }
    }
    ~FftPlan() {
      fftw_destroy_plan(forward_);
      fftw_destroy_plan(backward_);
    }
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    void apply(std::span<const double> v, std::vector<double>& out) const {
      std::vector<double> buf(len_);
      std::array<std::vector<Complex>, 3> src;
      for (int m = 0; m < 3; ++m) {
        std::fill(buf.begin(), buf.end(), 0.0);
        for (int l = 0; l < n_; ++l) buf[l] = v[3 * l + m];
        src[m].resize(spec_);
        fftw_execute_dft_r2c(forward_, buf.data(), reinterpret_cast<fftw_complex*>(src[m].data()));
      }
      std::vector<Complex> acc(spec_);
      const double scale = 1.0 / len_;
      for (int j = 0; j < 3; ++j) {
        std::fill(acc.begin(), acc.end(), Complex{});
        for (int m = 0; m < 3; ++m) {
          const auto& k = kernels_[3 * j + m];
          for (int f = 0; f < spec_; ++f) acc[f] += k[f] * src[m][f];
        }
        fftw_execute_dft_c2r(backward_, reinterpret_cast<fftw_complex*>(acc.data()), buf.data());
        for (int i = 0; i < n_; ++i) out[3 * i + j] = buf[i] * scale;
      }
    }

  private:
    int n_;
    int len_ = 0;
    int spec_ = 0;
    fftw_plan forward_ = nullptr;
    fftw_plan backward_ = nullptr;
    std::vector<std::vector<Complex>> kernels_;
  };

  int n_cells_;
  ConvolutionMethod method_ = ConvolutionMethod::direct;
  std::vector<double> dense_;
  std::shared_ptr<const FftPlan> fft_;
};

/// H_dx at every Gauss node plus its per-cell Gauss averages.
struct DiscretePotentialField {
  std::vector<double> nodes;
  std::vector<double> cell_average;
};

/// Node positions of the Gauss rule, cell-major.
inline std::vector<double> gauss_nodes(const Grid& grid) {
  std::vector<double> x(3 * grid.size());
  for (int i = 0; i < grid.size(); ++i)
    for (int j = 0; j < 3; ++j) x[3 * i + j] = GaussRule::node(grid.center(i), grid.dx(), j);
  return x;
}

inline std::vector<double> node_averages(std::span<const double> nodes) {
  std::vector<double> avg(nodes.size() / 3);
  for (std::size_t i = 0; i < avg.size(); ++i)
    avg[i] = GaussRule::weights[0] * nodes[3 * i] + GaussRule::weights[1] * nodes[3 * i + 1] +
             GaussRule::weights[2] * nodes[3 * i + 2];
  return avg;
}

} // namespace wbfv
