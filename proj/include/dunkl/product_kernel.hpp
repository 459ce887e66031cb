#pragma once

#include <vector>

#include "dunkl/rank1_kernel.hpp"
#include "dunkl/root_system.hpp"

namespace dunkl {

/// Heat kernel of Z_2^N: the coordinatewise product of rank-one kernels.
class ProductKernel {
 public:
  explicit ProductKernel(std::vector<double> ks) : rs_(build_product_a1(static_cast<int>(ks.size()), ks)) {
    for (double k : ks) factors_.emplace_back(k);
  }

  int dim() const { return rs_.dim; }
  const RootSystem& root_system() const { return rs_; }
  const Rank1Kernel& factor(int i) const { return factors_[i]; }

  double log_h(const Vec& x, const Vec& y, double t) const {
    check(x, y);
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += factors_[i].log_h(x[i], y[i], t);
    return s;
  }
  double h(const Vec& x, const Vec& y, double t) const { return std::exp(log_h(x, y, t)); }

  double log_h_rosler(const Vec& x, const Vec& y, double t) const {
    check(x, y);
    double s = 0.0;
    for (int i = 0; i < dim(); ++i) s += factors_[i].log_h_rosler(x[i], y[i], t);
    return s;
  }

 private:
  void check(const Vec& x, const Vec& y) const {
    if (x.size() != dim() || y.size() != dim())
      throw InvalidParameter("heat_kernel_product: dimension mismatch");
  }

  RootSystem rs_;
  std::vector<Rank1Kernel> factors_;
};

inline double heat_kernel_product(const std::vector<double>& ks, const Vec& x, const Vec& y, double t) {
  if (x.size() != static_cast<Eigen::Index>(ks.size()) || y.size() != x.size())
    throw InvalidParameter("heat_kernel_product: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) s += detail::rank1_cached(ks[i]).log_h(x[i], y[i], t);
  return std::exp(s);
}

}  // namespace dunkl
