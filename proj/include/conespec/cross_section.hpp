#pragma once

// Eigendata of the cross-section operator Delta_Y + (n-2)^2/4 + V0.
//
// Points of Y are addressed by a single coordinate `phi`: arc length along a
// fixed great circle for spheres, the periodic coordinate for circles. For
// isotropic cross sections only the separation |phi - phi'| matters.

#include <cstddef>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace conespec {

struct SphereSpec {
  int n = 3;
  double v0 = 0.0;
  int l_max = 200;
};

// Circle of the given length (n = 2), constant V0.
struct CircleSpec {
  double length = 6.283185307179586;
  double v0 = 1.0;
  int k_max = 200;
};

struct CustomMode {
  double nu;
  int multiplicity;
};

// Abstract spectrum; projector is the constant multiplicity/volume.
struct CustomSpec {
  int n = 3;
  std::vector<CustomMode> modes;
  double volume = 1.0;
};

// Circle of length 2*pi discretized with `grid` points; V0 sampled on the
// grid (size 1 means constant).
struct DiscretizedCircleSpec {
  std::vector<double> v0_samples;
  int grid = 256;
};

using CrossSectionSpec = std::variant<SphereSpec, CircleSpec, CustomSpec, DiscretizedCircleSpec>;

struct Mode {
  double nu;
  int multiplicity;
  double diagonal;  // Pi_j(phi, phi) for isotropic spectra; sup over phi otherwise
};

class ProjectorEvaluator {
 public:
  virtual ~ProjectorEvaluator() = default;
  // Writes Pi_j(phi, phi') for j = 0..out.size()-1.
  virtual void evaluate(double phi, double phi_prime, std::span<double> out) const = 0;
};

class ModeSpectrum {
 public:
  ModeSpectrum(int n, double volume, bool isotropic, std::vector<Mode> modes,
               std::shared_ptr<const ProjectorEvaluator> projector);

  int dimension() const noexcept { return n_; }
  double volume() const noexcept { return volume_; }
  bool isotropic() const noexcept { return isotropic_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const Mode& mode(std::size_t j) const { return modes_.at(j); }
  const std::vector<Mode>& modes() const noexcept { return modes_; }
  double nu0() const { return modes_.front().nu; }
  // +infinity when only one mode is known.
  double nu1() const;

  void projectors(double phi, double phi_prime, std::span<double> out) const;
  std::vector<double> projectors(double phi, double phi_prime, std::size_t count) const;
  double projector(std::size_t j, double phi, double phi_prime) const;

 private:
  int n_;
  double volume_;
  bool isotropic_;
  std::vector<Mode> modes_;
  std::shared_ptr<const ProjectorEvaluator> projector_;
};

double sphere_volume(int n);               // vol(S^{n-1})
double sphere_multiplicity(int n, int l);  // dim of degree-l harmonics on S^{n-1}

ModeSpectrum sphere_spectrum(int n, double v0, int l_max);
ModeSpectrum circle_spectrum(double length, double v0, int k_max);
ModeSpectrum custom_spectrum(int n, const std::vector<CustomMode>& modes, double volume);
ModeSpectrum discretized_circle_spectrum(const std::vector<double>& v0_samples, int grid);

// Builds the spectrum for any spec; throws HypothesisError (carrying nu0^2)
// when the lowest eigenvalue is not strictly positive, DomainError for
// malformed specs.
ModeSpectrum check_hyp2(const CrossSectionSpec& spec);

// Merge tolerance for equal nu.
inline constexpr double kNuMergeTol = 1e-10;

}  // namespace conespec
