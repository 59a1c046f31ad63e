#include "conespec/cross_section.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "conespec/errors.hpp"
#include "conespec/linalg.hpp"
#include "conespec/specfun.hpp"

namespace conespec {
namespace {

constexpr double kPi = std::numbers::pi;

// Angular separation on a circle of the given length, folded into [0, L/2].
double separation(double phi, double phi_prime, double length) {
  double d = std::fmod(std::abs(phi - phi_prime), length);
  return std::min(d, length - d);
}

[[noreturn]] void hyp2_violation(double nu0_sq) {
  std::ostringstream msg;
  msg << "hyp2 violated: lowest cross-section eigenvalue nu0^2 = " << nu0_sq
      << " is not strictly positive";
  throw HypothesisError(msg.str(), nu0_sq);
}

bool same_nu(double a, double b) { return std::abs(a - b) <= kNuMergeTol * std::max(1.0, std::abs(a)); }

class SphereProjector final : public ProjectorEvaluator {
 public:
  SphereProjector(int n, std::vector<double> scale) : n_(n), scale_(std::move(scale)) {}

  void evaluate(double phi, double phi_prime, std::span<double> out) const override {
    const std::size_t count = std::min(out.size(), scale_.size());
    const double theta = separation(phi, phi_prime, 2.0 * kPi);
    if (n_ == 2) {
      for (std::size_t l = 0; l < count; ++l) out[l] = scale_[l] * std::cos(double(l) * theta);
      return;
    }
    // Normalized Gegenbauer G_l = C_l^alpha(x) / C_l^alpha(1), G_l(1) = 1:
    // (l + 2 alpha - 1) G_l = (2l + 2 alpha - 2) x G_{l-1} - (l - 1) G_{l-2}.
    const double alpha = 0.5 * (n_ - 2);
    const double x = std::cos(theta);
    double gm2 = 1.0, gm1 = x;
    for (std::size_t l = 0; l < count; ++l) {
      double g;
      if (l == 0) {
        g = 1.0;
      } else if (l == 1) {
        g = x;
      } else {
        const double ld = double(l);
        g = ((2.0 * ld + 2.0 * alpha - 2.0) * x * gm1 - (ld - 1.0) * gm2) / (ld + 2.0 * alpha - 1.0);
        gm2 = gm1;
        gm1 = g;
      }
      out[l] = scale_[l] * g;
    }
  }

 private:
  int n_;
  std::vector<double> scale_;  // multiplicity / volume
};

class CircleProjector final : public ProjectorEvaluator {
 public:
  CircleProjector(double length, std::size_t count) : length_(length), count_(count) {}
  void evaluate(double phi, double phi_prime, std::span<double> out) const override {
    const std::size_t count = std::min(out.size(), count_);
    const double d = phi - phi_prime;
    for (std::size_t k = 0; k < count; ++k)
      out[k] = (k == 0 ? 1.0 : 2.0 * std::cos(2.0 * kPi * double(k) * d / length_)) / length_;
  }

 private:
  double length_;
  std::size_t count_;
};

class ConstantProjector final : public ProjectorEvaluator {
 public:
  explicit ConstantProjector(std::vector<double> values) : values_(std::move(values)) {}
  void evaluate(double, double, std::span<double> out) const override {
    const std::size_t count = std::min(out.size(), values_.size());
    std::copy_n(values_.begin(), count, out.begin());
  }

 private:
  std::vector<double> values_;
};

// Grid eigenvectors (L^2-normalized) grouped by merged mode; evaluated off
// grid with periodic Catmull-Rom interpolation.
class GridProjector final : public ProjectorEvaluator {
 public:
  GridProjector(double length, std::vector<std::vector<std::vector<double>>> groups)
      : length_(length), groups_(std::move(groups)) {}

  void evaluate(double phi, double phi_prime, std::span<double> out) const override {
    const std::size_t count = std::min(out.size(), groups_.size());
    for (std::size_t j = 0; j < count; ++j) {
      double s = 0.0;
      for (const auto& v : groups_[j]) s += interp(v, phi) * interp(v, phi_prime);
      out[j] = s;
    }
  }

 private:
  double interp(const std::vector<double>& v, double phi) const {
    const int n = int(v.size());
    const double h = length_ / n;
    double u = std::fmod(phi, length_);
    if (u < 0) u += length_;
    u /= h;
    int i = int(std::floor(u));
    const double t = u - i;
    auto at = [&](int k) { return v[std::size_t(((k % n) + n) % n)]; };
    const double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    return p1 + 0.5 * t * (p2 - p0 + t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
  }

  double length_;
  std::vector<std::vector<std::vector<double>>> groups_;
};

}  // namespace

ModeSpectrum::ModeSpectrum(int n, double volume, bool isotropic, std::vector<Mode> modes,
                           std::shared_ptr<const ProjectorEvaluator> projector)
    : n_(n), volume_(volume), isotropic_(isotropic), modes_(std::move(modes)), projector_(std::move(projector)) {
  if (modes_.empty()) throw DomainError("ModeSpectrum: no modes");
  if (!(modes_.front().nu > 0.0)) hyp2_violation(modes_.front().nu * std::abs(modes_.front().nu));
  for (std::size_t j = 1; j < modes_.size(); ++j)
    if (modes_[j].nu < modes_[j - 1].nu) throw DomainError("ModeSpectrum: nu must be nondecreasing");
}

double ModeSpectrum::nu1() const {
  return modes_.size() > 1 ? modes_[1].nu : std::numeric_limits<double>::infinity();
}

void ModeSpectrum::projectors(double phi, double phi_prime, std::span<double> out) const {
  if (out.size() > modes_.size()) throw DomainError("projectors: more values requested than modes");
  projector_->evaluate(phi, phi_prime, out);
}

std::vector<double> ModeSpectrum::projectors(double phi, double phi_prime, std::size_t count) const {
  std::vector<double> out(count);
  projectors(phi, phi_prime, out);
  return out;
}

double ModeSpectrum::projector(std::size_t j, double phi, double phi_prime) const {
  return projectors(phi, phi_prime, j + 1).back();
}

double sphere_volume(int n) {
  if (n < 2) throw DomainError("sphere_volume: n must be >= 2");
  return 2.0 * std::pow(kPi, 0.5 * n) / specfun::gamma(0.5 * n);
}

double sphere_multiplicity(int n, int l) {
  if (n < 2 || l < 0) throw DomainError("sphere_multiplicity: need n >= 2, l >= 0");
  if (n == 2) return l == 0 ? 1.0 : 2.0;
  // (2l+n-2)/(n-2) * binom(l+n-3, l)
  double binom = 1.0;
  for (int k = 1; k <= n - 3; ++k) binom = binom * double(l + k) / double(k);
  return std::round((2.0 * l + n - 2) / (n - 2) * binom);
}

ModeSpectrum sphere_spectrum(int n, double v0, int l_max) {
  if (n < 2) throw DomainError("sphere_spectrum: n must be >= 2");
  if (l_max < 0) throw DomainError("sphere_spectrum: l_max must be >= 0");
  const double shift = 0.25 * (n - 2) * (n - 2) + v0;
  if (!(shift > 0.0)) hyp2_violation(shift);
  const double vol = sphere_volume(n);
  std::vector<Mode> modes;
  std::vector<double> scale;
  for (int l = 0; l <= l_max; ++l) {
    const double mult = sphere_multiplicity(n, l);
    const double nu = std::sqrt(double(l) * (l + n - 2) + shift);
    modes.push_back({nu, int(mult), mult / vol});
    scale.push_back(mult / vol);
  }
  return ModeSpectrum(n, vol, true, std::move(modes), std::make_shared<SphereProjector>(n, std::move(scale)));
}

ModeSpectrum circle_spectrum(double length, double v0, int k_max) {
  if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("circle_spectrum: length must be positive");
  if (k_max < 0) throw DomainError("circle_spectrum: k_max must be >= 0");
  if (!(v0 > 0.0)) hyp2_violation(v0);
  std::vector<Mode> modes;
  for (int k = 0; k <= k_max; ++k) {
    const double w = 2.0 * kPi * k / length;
    const int mult = k == 0 ? 1 : 2;
    modes.push_back({std::sqrt(w * w + v0), mult, mult / length});
  }
  return ModeSpectrum(2, length, true, std::move(modes),
                      std::make_shared<CircleProjector>(length, std::size_t(k_max) + 1));
}

ModeSpectrum custom_spectrum(int n, const std::vector<CustomMode>& raw, double volume) {
  if (n < 2) throw DomainError("custom_spectrum: n must be >= 2");
  if (raw.empty()) throw DomainError("custom_spectrum: empty mode list");
  if (!(volume > 0.0)) throw DomainError("custom_spectrum: volume must be positive");
  std::vector<CustomMode> sorted = raw;
  for (const auto& m : sorted) {
    if (m.multiplicity < 1) throw DomainError("custom_spectrum: multiplicity must be >= 1");
    if (!std::isfinite(m.nu)) throw DomainError("custom_spectrum: nu must be finite");
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.nu < b.nu; });
  if (!(sorted.front().nu > 0.0)) hyp2_violation(sorted.front().nu * std::abs(sorted.front().nu));
  std::vector<Mode> modes;
  for (const auto& m : sorted) {
    if (!modes.empty() && same_nu(modes.back().nu, m.nu)) {
      modes.back().multiplicity += m.multiplicity;
      modes.back().diagonal = modes.back().multiplicity / volume;
    } else {
      modes.push_back({m.nu, m.multiplicity, m.multiplicity / volume});
    }
  }
  std::vector<double> values;
  for (const auto& m : modes) values.push_back(m.diagonal);
  return ModeSpectrum(n, volume, true, std::move(modes), std::make_shared<ConstantProjector>(std::move(values)));
}

ModeSpectrum discretized_circle_spectrum(const std::vector<double>& v0_samples, int grid) {
  if (grid < 8) throw DomainError("discretized_circle_spectrum: grid must be >= 8");
  if (v0_samples.size() != 1 && v0_samples.size() != std::size_t(grid))
    throw DomainError("discretized_circle_spectrum: need 1 or grid samples of V0");
  const std::size_t n = std::size_t(grid);
  const double length = 2.0 * kPi;
  const double h = length / grid;
  const double ih2 = 1.0 / (h * h);
  linalg::DenseSymmetric a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = v0_samples.size() == 1 ? v0_samples[0] : v0_samples[i];
    a(i, i) = 2.0 * ih2 + v;
    a(i, (i + 1) % n) = -ih2;
    a((i + 1) % n, i) = -ih2;
  }
  const auto eig = linalg::dense_symmetric_eigen(a);
  // Values within rounding of zero (relative to ||A|| ~ 4/h^2) count as zero.
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * 4.0 * ih2;
  if (!(eig.values.front() > noise)) hyp2_violation(eig.values.front());

  // Upper half of the discrete spectrum is dominated by grid artifacts.
  const std::size_t keep = n / 2;
  std::vector<Mode> modes;
  std::vector<std::vector<std::vector<double>>> groups;
  const double norm = 1.0 / std::sqrt(h);
  for (std::size_t k = 0; k < keep; ++k) {
    const double nu = std::sqrt(eig.values[k]);
    std::vector<double> v(eig.vectors[k]);
    for (auto& c : v) c *= norm;
    double sup = 0.0;
    if (!modes.empty() && same_nu(modes.back().nu, nu)) {
      modes.back().multiplicity += 1;
      groups.back().push_back(std::move(v));
    } else {
      modes.push_back({nu, 1, 0.0});
      groups.push_back({std::move(v)});
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (const auto& w : groups.back()) s += w[i] * w[i];
      sup = std::max(sup, s);
    }
    modes.back().diagonal = sup;
  }
  bool isotropic = v0_samples.size() == 1 ||
                   std::all_of(v0_samples.begin(), v0_samples.end(), [&](double v) { return v == v0_samples[0]; });
  return ModeSpectrum(2, length, isotropic, std::move(modes),
                      std::make_shared<GridProjector>(length, std::move(groups)));
}

ModeSpectrum check_hyp2(const CrossSectionSpec& spec) {
  return std::visit(
      [](const auto& s) -> ModeSpectrum {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SphereSpec>) {
          return sphere_spectrum(s.n, s.v0, s.l_max);
        } else if constexpr (std::is_same_v<T, CircleSpec>) {
          return circle_spectrum(s.length, s.v0, s.k_max);
        } else if constexpr (std::is_same_v<T, CustomSpec>) {
          return custom_spectrum(s.n, s.modes, s.volume);
        } else {
          return discretized_circle_spectrum(s.v0_samples, s.grid);
        }
      },
      spec);
}

}  // namespace conespec
