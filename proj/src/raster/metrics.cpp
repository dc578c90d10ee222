#include <array>
#include <cmath>
#include <cstdlib>

#include "svgloop/error.hpp"
#include "svgloop/raster.hpp"

namespace svgloop {
namespace {

void require_same_size(const Raster& a, const Raster& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorKind::DimensionMismatch, std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                                  " vs " + std::to_string(b.width()) + "x" +
                                                  std::to_string(b.height()));
  }
}

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;

std::array<double, kWindow> gaussian_kernel() {
  std::array<double, kWindow> k{};
  double sum = 0.0;
  for (int i = 0; i < kWindow; ++i) {
    double d = i - kWindow / 2;
    k[i] = std::exp(-(d * d) / (2.0 * kSigma * kSigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> luma(const Raster& r) {
  std::vector<double> y(static_cast<std::size_t>(r.width()) * r.height());
  auto px = r.pixels();
  for (std::size_t i = 0; i < y.size(); ++i)
    y[i] = 0.299 * px[i * 4] + 0.587 * px[i * 4 + 1] + 0.114 * px[i * 4 + 2];
  return y;
}

// Separable "valid" Gaussian filter.
std::vector<double> blur(const std::vector<double>& img, int w, int h, const std::array<double, kWindow>& k) {
  int ow = w - kWindow + 1;
  int oh = h - kWindow + 1;
  std::vector<double> tmp(static_cast<std::size_t>(ow) * h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < kWindow; ++i) s += k[i] * img[static_cast<std::size_t>(y) * w + x + i];
      tmp[static_cast<std::size_t>(y) * ow + x] = s;
    }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y)
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < kWindow; ++i) s += k[i] * tmp[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = s;
    }
  return out;
}

}  // namespace

double pixel_diff(const Raster& a, const Raster& b) {
  require_same_size(a, b);
  auto pa = a.pixels();
  auto pb = b.pixels();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < pa.size(); i += 4) {
    total += static_cast<std::uint64_t>(std::abs(pa[i] - pb[i]) + std::abs(pa[i + 1] - pb[i + 1]) +
                                        std::abs(pa[i + 2] - pb[i + 2]));
  }
  double denom = 3.0 * 255.0 * static_cast<double>(a.width()) * a.height();
  return static_cast<double>(total) / denom;
}

double mse(const Raster& a, const Raster& b) {
  require_same_size(a, b);
  auto pa = a.pixels();
  auto pb = b.pixels();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < pa.size(); i += 4) {
    for (int c = 0; c < 3; ++c) {
      std::int64_t d = pa[i + c] - pb[i + c];
      total += static_cast<std::uint64_t>(d * d);
    }
  }
  double denom = 3.0 * 255.0 * 255.0 * static_cast<double>(a.width()) * a.height();
  return static_cast<double>(total) / denom;
}

double ssim(const Raster& a, const Raster& b) {
  require_same_size(a, b);
  if (a.width() < kWindow || a.height() < kWindow)
    throw Error(ErrorKind::TooSmall, "SSIM needs at least 11x11 pixels");
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  const int w = a.width();
  const int h = a.height();
  auto k = gaussian_kernel();
  std::vector<double> x = luma(a);
  std::vector<double> y = luma(b);
  std::vector<double> xx(x.size()), yy(x.size()), xy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  auto mu_x = blur(x, w, h, k);
  auto mu_y = blur(y, w, h, k);
  auto e_xx = blur(xx, w, h, k);
  auto e_yy = blur(yy, w, h, k);
  auto e_xy = blur(xy, w, h, k);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    double mx = mu_x[i];
    double my = mu_y[i];
    double vx = e_xx[i] - mx * mx;
    double vy = e_yy[i] - my * my;
    double cov = e_xy[i] - mx * my;
    sum += ((2.0 * mx * my + c1) * (2.0 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return sum / static_cast<double>(mu_x.size());
}

}  // namespace svgloop
