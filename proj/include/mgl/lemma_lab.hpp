#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mgl/kernels.hpp"
#include "mgl/learners.hpp"

namespace mgl {

struct BandReport {
  double f_bar_plus = 0.0;   // band average at +gamma
  double f_bar_minus = 0.0;  // band average at -gamma
  double gap = 0.0;
  double bound = 0.0;
  double l1_norm = 0.0;
  double coeff_bound = 0.0;
  double std_err_plus = 0.0;
  double std_err_minus = 0.0;
  double tolerance = 0.0;  // Monte-Carlo allowance added to the bound
  bool holds = false;
  std::string method;      // "exact" or "monte-carlo"
};

namespace lemma_lab {

/// Band difference of a zonal Legendre series against the explicit bound.
/// When a profile is given the coefficient bound is the RKHS norm, else max |alpha_n|.
BandReport check_band_gap(const orthopoly::PolyCoeffs& f, double gamma, int K,
                          const RkhsProfile* profile = nullptr);

/// Band-averaged Legendre coefficients of a kernel model around e:
/// c_n = b_n sum_i alpha_i P_{d,n}(<e, x_i>), degrees outside the index set dropped.
orthopoly::PolyCoeffs band_coefficients(const KernelModel& model, const Vec& e, const RkhsProfile& profile);

/// Trained model (bias excluded). Zonal kernels use the exact expansion, others Monte Carlo.
BandReport check_band_gap(const KernelModel& model, const Vec& e, double gamma, int K, int n_mc,
                          RngStream& rng);

struct ZonalEstimate {
  std::vector<double> a;
  std::vector<double> value;
  std::vector<double> std_err;

  double operator()(double t) const;
};

/// Average of f over rotations fixing e, tabulated on heights a.
ZonalEstimate symmetrize_function(const std::function<double(const Vec&)>& f, const Vec& e,
                                  int n_rotations, RngStream& rng, std::vector<double> heights = {});

/// Random rotation fixing e: H diag(1, A) H^T with A Haar on O(d-1).
Mat stabilizer_rotation(const Mat& completion, RngStream& rng);

struct DirectionSearch {
  Vec worst_direction;
  BandReport worst;
  int directions = 0;
};

/// Largest band gap over n_dir Haar directions.
DirectionSearch search_directions(const KernelModel& model, double gamma, int K, int n_dir, int n_mc,
                                  RngStream& rng);

}  // namespace lemma_lab
}  // namespace mgl
