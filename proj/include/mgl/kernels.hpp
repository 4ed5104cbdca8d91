#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mgl/orthopoly.hpp"
#include "mgl/sphere.hpp"

namespace mgl {

enum class KernelForm { Zonal, FeatureMap, LegendreSeries };

struct KernelSpec {
  KernelForm form = KernelForm::Zonal;
  std::string name;
  std::map<std::string, double> params;

  std::function<double(double)> profile;   // Zonal / LegendreSeries, before normalization
  std::function<Vec(const Vec&)> feature;  // FeatureMap
  int feature_dim = 0;

  std::vector<double> legendre;  // LegendreSeries coefficients
  int legendre_d = 0;

  bool normalize = true;
  double scale = 1.0;  // divisor applied to every value

  bool zonal() const { return form != KernelForm::FeatureMap; }
  /// Normalized zonal profile; only for zonal kernels.
  double kappa(double s) const;
  double operator()(const Vec& x, const Vec& y) const;
};

struct TabulatedProfile {
  std::vector<double> s;  // Chebyshev grid, descending from 1 to -1
  std::vector<double> value;
  std::vector<double> std_err;

  double operator()(double t) const;
};

namespace kernels {

KernelSpec linear_kernel();
/// 1 / (1 - s/2), divided by its value 2 at s = 1 when normalized.
KernelSpec sss_kernel(bool normalize = true);
KernelSpec rbf_kernel(double sigma);
/// ((1 + s) / 2)^degree
KernelSpec poly_kernel(int degree);
KernelSpec legendre_series_kernel(int d, std::vector<double> b, bool normalize = true);
/// <psi(x), psi(y)>; normalized by the largest diagonal on a fixed probe set of S^{d-1}.
KernelSpec feature_map_kernel(std::function<Vec(const Vec&)> psi, int m, int d, bool normalize = true);
KernelSpec tabulated_kernel(const TabulatedProfile& table);

/// Kernel by name: linear, sss, rbf (sigma), poly (degree).
KernelSpec make_kernel(const std::string& name, const std::map<std::string, double>& params = {});

double kernel_eval(const KernelSpec& k, const Vec& x, const Vec& y);

Mat gram(const KernelSpec& k, const std::vector<Vec>& points);
Mat cross_gram(const KernelSpec& k, const std::vector<Vec>& rows, const std::vector<Vec>& cols);

struct PsdCheck {
  std::string method;  // "eigen", "schoenberg", "feature-map"
  double min_eigenvalue = 0.0;  // eigen method only
  double jitter = 0.0;
};

/// Verifies G is PSD (eigenvalues for moderate n, Schoenberg coefficients of the
/// profile in dimension d for larger zonal Gram matrices) and repairs tiny
/// negative eigenvalues with a diagonal jitter.
PsdCheck ensure_psd(const KernelSpec& k, Mat& G, int d, int eigen_limit = 1500);

/// Legendre coefficients of a profile on S^{d-1}.
std::vector<double> profile_to_legendre(const std::function<double(double)>& kappa, int d,
                                        int nmax = 64, double tail_tol = 1e-8);

}  // namespace kernels

struct RkhsProfile {
  int d = 3;
  std::vector<double> b;
  double threshold_rel = 1e-12;

  static RkhsProfile from_kernel(const KernelSpec& k, int d, int nmax = 64);

  bool in_index_set(int n) const;
  /// a_n^2 = N_{d,n} / (|S^{d-1}| b_n); +inf outside the index set.
  double a_sq(int n) const;
  double total() const;
};

namespace kernels {

/// sqrt(sum alpha_n^2 / b_n); InfiniteNormError when some alpha_n != 0 outside I.
double rkhs_norm_symmetric(const orthopoly::PolyCoeffs& f, const RkhsProfile& profile);

struct Symmetrized {
  KernelSpec kernel;
  TabulatedProfile table;
};

/// Haar average of k(Ax, Ay), tabulated in s = <x, y>.
Symmetrized symmetrize_mc(const KernelSpec& k, int d, int n_rotations, RngStream& rng);

/// 257-point grid s_j = cos(j pi / 256).
std::vector<double> chebyshev_grid(int n = 257);

}  // namespace kernels
}  // namespace mgl
