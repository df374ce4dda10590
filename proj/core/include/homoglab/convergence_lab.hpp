#pragma once

#include "homoglab/cell_problem.hpp"
#include "homoglab/effective_interface.hpp"
#include "homoglab/limit_solvers.hpp"
#include "homoglab/profile.hpp"
#include "homoglab/solver.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace homoglab {

struct ResolutionPolicy {
  /// Mesh columns per period (a multiple of the profile's segment count).
  int n_per_period{8};
  /// Layers per half of Q are layers_per_eps / eps.
  int layers_per_eps{8};
  /// Cells per unit length of the flat limit mesh.
  int limit_resolution{128};
  int cell_n{64};
};

struct SweepConfig {
  InterfaceProfile profile{profiles::sawtooth()};
  CoefficientField d{coefficients::smooth()};
  NonlinearityPair h{NonlinearityPair::standard()};
  /// Named source; ignored when `custom_source` is set.
  std::string source{"standard"};
  std::optional<ScalarField> custom_source;
  Rational k{1};
  Rational gamma{0};
  std::vector<Rational> eps{Rational(1, 4), Rational(1, 8), Rational(1, 16), Rational(1, 32)};
  double omega_length{1.0};
  double ell{1.0};
  ResolutionPolicy resolution;
  SolverOptions solver;

  ScalarField source_field() const;
};

/// Sawtooth profile, smooth D, standard h pair and source, k = 2 and
/// gamma = 0, 1, -1 for A, B, C.
SweepConfig standard_config(Regime regime);

/// Throws ValidationError listing every problem (eps list, domain, resolution).
void validate_sweep(const SweepConfig& config);

/// The 6 linear test fields (1,0), (0,1), (x1,0), (0,x1), (x2,0), (0,x2).
constexpr int pairing_field_count = 6;
Eigen::Vector2d pairing_field(int index, const Point& x);
std::string pairing_field_name(int index);

/// Index into pairing arrays: field * 2 + (side == plus).
using PairingValues = std::array<double, 2 * pairing_field_count>;

struct EpsRecord {
  Rational eps;
  bool ok{false};
  std::string failure;
  std::size_t vertices{0};
  double l2_error{0.0};
  double grad_norm{0.0};
  double weighted_jump{0.0};
  double raw_jump{0.0};
  double trace_gap_minus{0.0};
  double trace_gap_plus{0.0};
  PairingValues weak_pairing_gaps{};
  SolveReport solve;
};

struct ConvergenceSlopes {
  double l2_error;
  double raw_jump;
  double trace_gap_minus;
  double trace_gap_plus;
};

struct ConvergenceReport {
  SweepConfig config;
  RegimeTag regime;
  EffectiveTensor d0;
  bool limit_ok{false};
  std::string limit_failure;
  SolveReport limit_solve;
  std::vector<EpsRecord> records;
  ConvergenceSlopes slopes{};
  std::uint64_t config_hash{0};
};

/// Canonical one-line description of a sweep config (hashed into reports).
std::string describe(const SweepConfig& config);

/// Fitted mesh for one eps of the sweep.
BrokenMesh sweep_mesh(const SweepConfig& config, Rational eps);

/// Runs the full pipeline. Per-eps failures are recorded, not thrown; a
/// failed limit solve leaves l2_error and pairing gaps as NaN.
ConvergenceReport run_sweep(const SweepConfig& config);

/// ||a - b||_{L2(Q)} by midpoint quadrature on a background grid 4x finer
/// than the finer of the two meshes in each direction. Each function is
/// evaluated on the side of its own mesh's interface.
double l2_distance(const BrokenFemFunction& a, const BrokenFemFunction& b);

/// int over Q+ and Q- of D(x / scale) grad u . Phi for the 6 test fields.
PairingValues pairing_integrals(const BrokenFemFunction& u, const CoefficientField& d, double scale);

/// |pairing_integrals(u_eps, D, eps) - pairing_integrals(u_lim, D0, 1)|.
PairingValues weak_pairing_gap(const BrokenFemFunction& u_eps, const CoefficientField& d, double eps,
                               const BrokenFemFunction& u_lim, const Matrix2& d0);

struct TraceGap {
  double minus;
  double plus;
};

/// minus: ||u-(x', eps^k g(x'/eps)) - u-(x', 0)||_{L2(omega)};
/// plus:  ||u+(x', eps^k g(x'/eps)) - u+(x', eps^k max g)||_{L2(omega)}.
TraceGap trace_gap(const BrokenFemFunction& u_eps, const InterfaceProfile& profile, Rational eps, Rational k);

/// Least-squares slope of log y against log x; NaN when fewer than two
/// points or any value is not positive and finite.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace homoglab
