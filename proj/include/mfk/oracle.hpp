#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "mfk/kernels.hpp"
#include "mfk/parallel.hpp"
#include "mfk/transform.hpp"

namespace mfk {

enum class IdentityId {
  laplace_transform,
  orthogonality,
  projection,
  kontorovich_lebedev,
  normalization_factor,
  kernel_consistency,
  decay_envelope,
};

std::string identity_name(IdentityId id);
// Throws std::invalid_argument for unknown names.
IdentityId identity_from_name(const std::string& name);
std::vector<IdentityId> all_identities();

// One verified comparison.  lhs and rhs always come from disjoint code paths.
// zero_target marks points whose closed form vanishes identically; those are
// judged on abs_err (relative error is undefined at zero).  threshold_scale
// rescales the judgment threshold, used by orthogonality off-diagonals where
// "zero" is meaningful only against the largest diagonal entry.
struct IdentityReport {
  IdentityId id = IdentityId::kernel_consistency;
  std::vector<std::pair<std::string, std::string>> params;
  std::complex<double> lhs{0.0, 0.0};
  std::complex<double> rhs{0.0, 0.0};
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool passed = false;
  bool zero_target = false;
  double threshold_scale = 1.0;
};

// Pass/fail thresholds per identity class.  The *_zero_cut values only
// classify a point as a zero target; they are never tightened or loosened,
// unlike the judgment thresholds.
struct OracleThresholds {
  double single_integral = 1e-8;    // laplace, kontorovich-lebedev, consistency
  double singular_integral = 1e-7;  // projection (singular endpoint weight)
  double matrix = 1e-6;             // orthogonality entries
  double factor = 1e-12;            // closed-form gamma factor
  double laplace_zero_abs = 1e-12;
  double projection_zero_abs = 1e-9;
  double kl_zero_abs = 1e-10;
  double laplace_zero_cut = 1e-8;  // |rhs| below this: both sides decayed away
  double sine_zero_cut = 1e-12;    // projection / kl closed forms with sin(n t) = 0

  // All judgment thresholds set to v; cuts unchanged.
  static OracleThresholds uniform(double v);
  // Judgment thresholds multiplied by f; cuts unchanged.  scaled(0.1) is the
  // margin sweep.
  OracleThresholds scaled(double f) const;
};

// Re-judges a stored report under different thresholds.  The decay envelope is
// a strict inequality with nothing to tighten, so its verdict is returned
// unchanged.  This is the single source of truth for what "passed" means;
// verifiers set IdentityReport::passed by calling it.
bool passes_with(const IdentityReport& r, const OracleThresholds& th);

struct OrthogonalityMatrix {
  std::complex<double> mu{0.0, 0.0};
  int size = 0;
  std::vector<std::complex<double>> entries;           // row-major, size * size
  std::vector<std::complex<double>> diagonal_targets;  // pi / (n sinh(pi n) gamma_pair)
};

struct OrthogonalityResult {
  OrthogonalityMatrix matrix;
  std::vector<IdentityReport> reports;  // (n, m) row-major
};

IdentityReport verify_laplace_identity(const MuParameter& mu, int m, double y,
                                       const TransformConfig& tc,
                                       const OracleThresholds& th = {});

OrthogonalityResult verify_orthogonality(const MuParameter& mu, int size,
                                         const TransformConfig& tc,
                                         const OracleThresholds& th = {},
                                         Exec exec = Exec::parallel);

IdentityReport verify_projection_identity(const MuParameter& mu, int n, double t,
                                          const TransformConfig& tc,
                                          const OracleThresholds& th = {});

IdentityReport verify_kl_identity(int n, double u, const TransformConfig& tc,
                                  const OracleThresholds& th = {});

IdentityReport verify_fock_factor(int n, const OracleThresholds& th = {});

IdentityReport verify_kernel_consistency(const MuParameter& mu, int n, double x,
                                         const TransformConfig& tc,
                                         const MellinBarnesConfig& mb = {},
                                         const OracleThresholds& th = {});

// The bound is computed once (one contour integral) and shared across t.
IdentityReport verify_decay_envelope(const DecayBound& bound, double t,
                                     const TransformConfig& tc);

// Default grids reproduce the full verification run; tests shrink them.
struct SuiteGrids {
  std::vector<std::complex<double>> consistency_mu{0.0, 0.25, -0.3};
  std::vector<int> consistency_n{1, 2, 3};
  std::vector<double> consistency_x{1.2, 2.0, 5.0, 50.0};

  std::vector<std::complex<double>> laplace_mu{0.0, -0.3};
  std::vector<int> laplace_m{1, 2, 3};
  std::vector<double> laplace_y{0.5, 1.0, 2.0};
  bool laplace_include_far = true;  // adds (mu=0, m=1, y=20), a zero target

  std::vector<std::complex<double>> projection_mu{0.0, -0.4};
  std::vector<int> projection_n{1, 2, 3};
  std::vector<double> projection_t{0.5, 1.0, 2.0};
  bool projection_include_zero = true;  // adds (mu=0, n=2, t=pi/2)

  std::vector<int> kl_n{1, 2};
  std::vector<double> kl_u{0.5, 1.0, 1.5707963267948966};

  std::vector<std::complex<double>> orthogonality_mu{
      {0.0, 0.0}, {0.3, 0.0}, {-0.4, 0.0}, {0.2, 0.1}};
  int orthogonality_size = 5;

  int factor_n_max = 10;

  std::complex<double> decay_mu{0.0, 0.0};
  double decay_gamma = 0.25;
  std::vector<double> decay_t{0.01, 0.1, 1.0, 10.0, 100.0};
};

struct SuiteConfig {
  std::vector<IdentityId> selection;  // run in the given order; empty -> empty
  SuiteGrids grids;
  TransformConfig tc;
  MellinBarnesConfig mb;
  OracleThresholds thresholds;
  Exec exec = Exec::parallel;
};

// Reports are ordered by selection entry, then by grid position; the ordering
// and every computed value are independent of the execution policy.
std::vector<IdentityReport> run_suite(const SuiteConfig& cfg);

inline constexpr const char* kSuiteVersion = "1.0.0";

}  // namespace mfk
