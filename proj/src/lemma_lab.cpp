#include "mgl/lemma_lab.hpp"

#include <algorithm>
#include <cmath>

#include "mgl/error.hpp"
#include "mgl/measures.hpp"

namespace mgl::lemma_lab {
namespace {

double lead_term(double gamma, int K) { return 32.0 * gamma * std::pow(static_cast<double>(K), 3.5); }

}  // namespace

BandReport check_band_gap(const orthopoly::PolyCoeffs& f, double gamma, int K, const RkhsProfile* profile) {
  const auto sc = orthopoly::changes_slowly_gap(f, gamma, K);
  BandReport r;
  r.method = "exact";
  r.f_bar_plus = f(gamma);
  r.f_bar_minus = f(-gamma);
  r.gap = sc.gap;
  r.l1_norm = sc.l1_norm;
  r.coeff_bound = profile ? kernels::rkhs_norm_symmetric(f, *profile) : sc.sup_coeff;
  r.bound = orthopoly::band_difference_bound(gamma, K, f.d, r.l1_norm, r.coeff_bound);
  r.holds = r.gap <= r.bound;
  return r;
}

orthopoly::PolyCoeffs band_coefficients(const KernelModel& model, const Vec& e, const RkhsProfile& profile) {
  const int nmax = static_cast<int>(profile.b.size()) - 1;
  std::vector<double> acc(profile.b.size(), 0.0);
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const double a = model.alpha[static_cast<Eigen::Index>(i)];
    if (a == 0.0) continue;
    const auto p = orthopoly::legendre_all(profile.d, nmax, std::clamp(e.dot(model.support[i]), -1.0, 1.0));
    for (int n = 0; n <= nmax; ++n) acc[n] += a * p[n];
  }
  for (int n = 0; n <= nmax; ++n) acc[n] = profile.in_index_set(n) ? profile.b[n] * acc[n] : 0.0;
  return orthopoly::PolyCoeffs(profile.d, std::move(acc));
}

BandReport check_band_gap(const KernelModel& model, const Vec& e, double gamma, int K, int n_mc,
                          RngStream& rng) {
  const int d = static_cast<int>(e.size());
  if (d < 5) throw DomainError("band-gap check needs d >= 5");
  if (model.kernel.zonal()) {
    const auto profile = RkhsProfile::from_kernel(model.kernel, d);
    return check_band_gap(band_coefficients(model, e, profile), gamma, K, &profile);
  }

  auto f = [&](const Vec& x) { return model.score(x) - model.b; };
  BandReport r;
  r.method = "monte-carlo";
  const auto plus = sphere::band_average(f, e, gamma, n_mc, rng);
  const auto minus = sphere::band_average(f, e, -gamma, n_mc, rng);
  r.f_bar_plus = plus.mean;
  r.f_bar_minus = minus.mean;
  r.std_err_plus = plus.std_err;
  r.std_err_minus = minus.std_err;
  r.gap = std::abs(plus.mean - minus.mean);

  // L1 norm under the pulled-back arcsine measure
  const Mat H = sphere::orthonormal_completion(e);
  double mean = 0.0, m2 = 0.0;
  for (int i = 0; i < n_mc; ++i) {
    const double v = std::abs(f(sphere::sample_band(H, e, measures::sample_arcsine(rng), rng)));
    const double delta = v - mean;
    mean += delta / (i + 1);
    m2 += delta * (v - mean);
  }
  const double se_l1 = std::sqrt(m2 / (n_mc - 1) / n_mc);
  r.l1_norm = mean;
  r.coeff_bound = model.norm;
  r.bound = orthopoly::band_difference_bound(gamma, K, d, r.l1_norm, r.coeff_bound);
  r.tolerance = 4.0 * (plus.std_err + minus.std_err + lead_term(gamma, K) * se_l1);
  r.holds = r.gap <= r.bound + r.tolerance;
  return r;
}

double ZonalEstimate::operator()(double t) const {
  if (a.empty()) throw DomainError("empty zonal estimate");
  t = std::clamp(t, a.front(), a.back());
  const auto it = std::lower_bound(a.begin(), a.end(), t);
  std::size_t j = static_cast<std::size_t>(it - a.begin());
  if (j == 0) return value.front();
  if (j >= a.size()) return value.back();
  const double w = (t - a[j - 1]) / (a[j] - a[j - 1]);
  return (1.0 - w) * value[j - 1] + w * value[j];
}

Mat stabilizer_rotation(const Mat& completion, RngStream& rng) {
  const auto d = completion.rows();
  Mat D = Mat::Zero(d, d);
  D(0, 0) = 1.0;
  if (d > 1) D.bottomRightCorner(d - 1, d - 1) = sphere::haar_orthogonal(static_cast<int>(d - 1), rng);
  return completion * D * completion.transpose();
}

ZonalEstimate symmetrize_function(const std::function<double(const Vec&)>& f, const Vec& e,
                                  int n_rotations, RngStream& rng, std::vector<double> heights) {
  if (n_rotations < 16) throw DomainError("symmetrize_function needs at least 16 rotations");
  const int d = static_cast<int>(e.size());
  if (d < 2) throw DomainError("symmetrize_function needs d >= 2");
  if (heights.empty()) {
    for (int j = 0; j <= 64; ++j) heights.push_back(-1.0 + 2.0 * j / 64.0);
  }
  std::sort(heights.begin(), heights.end());
  const Mat H = sphere::orthonormal_completion(e);
  // reference point on each band: a e + sqrt(1 - a^2) h_1, h_1 the second completion column
  const Vec h1 = H.col(1);
  ZonalEstimate z;
  z.a = heights;
  const std::size_t g = heights.size();
  std::vector<double> mean(g, 0.0), m2(g, 0.0);
  for (int r = 0; r < n_rotations; ++r) {
    const Mat A = stabilizer_rotation(H, rng);
    const Vec Ae = A * e;
    const Vec Ah = A * h1;
    for (std::size_t j = 0; j < g; ++j) {
      const double a = heights[j];
      const double v = f(a * Ae + std::sqrt(std::max(0.0, 1.0 - a * a)) * Ah);
      const double delta = v - mean[j];
      mean[j] += delta / (r + 1);
      m2[j] += delta * (v - mean[j]);
    }
  }
  z.value = mean;
  z.std_err.resize(g);
  for (std::size_t j = 0; j < g; ++j) z.std_err[j] = std::sqrt(m2[j] / (n_rotations - 1) / n_rotations);
  return z;
}

DirectionSearch search_directions(const KernelModel& model, double gamma, int K, int n_dir, int n_mc,
                                  RngStream& rng) {
  if (model.support.empty()) throw DomainError("model has no support points");
  const int d = static_cast<int>(model.support.front().size());
  DirectionSearch out;
  for (int i = 0; i < n_dir; ++i) {
    const Vec e = sphere::sample_unit_sphere(d, rng);
    auto rep = check_band_gap(model, e, gamma, K, n_mc, rng);
    if (out.directions == 0 || rep.gap > out.worst.gap) {
      out.worst = rep;
      out.worst_direction = e;
    }
    ++out.directions;
  }
  return out;
}

}  // namespace mgl::lemma_lab
