#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>

#include "whitney/spacetime_mesh.hpp"

// Multisymplectic variational discretization of the 1+1 wave equation on a
// spacetime cylinder.  The discrete action is
//
//   S(f) = sum over triangles of f_T^T S_T f_T,
//   S_T[a,b] = <d lambda_a, d lambda_b> |star_vol(T)|,
//
// with the Lorentzian inner products taken from each triangle's Gram
// inverse (coordinate-free).  Stationarity of S at every slice-k node
// yields one N x N linear system per slice for the next slice's values;
// marching those systems forward is the integrator.  Meshes adapted to the
// light cone produce singular but consistent slice systems whose kernel is
// the spatial Nyquist mode of the staggered lattice: the solver takes the
// minimum-norm solution, i.e. it propagates nothing along that invisible
// mode.

namespace whitney {

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& msg, int slice, double condition)
      : std::runtime_error(msg), slice_(slice), condition_(condition) {}

  int slice() const { return slice_; }
  double condition_estimate() const { return condition_; }

 private:
  int slice_;
  double condition_;
};

/// Right-moving unit-speed reference wave sin(2 pi (x - t) / L).
double exact_solution(double x, double t, double circumference);

enum class GeometrySource { edge_lengths, embedded };

struct ElementMatrix {
  int triangle = -1;
  Eigen::Matrix3d S = Eigen::Matrix3d::Zero();
};

/// Per-triangle stiffness of triangle `tri` computed from the mesh edge
/// lengths alone.
ElementMatrix element_matrix(const SpacetimeMesh& mesh, int tri);

class WaveOperator {
 public:
  explicit WaveOperator(const SpacetimeMesh& mesh,
                        GeometrySource source = GeometrySource::edge_lengths);

  const SpacetimeMesh& mesh() const { return *mesh_; }
  const std::vector<ElementMatrix>& element_matrices() const {
    return matrices_;
  }
  const Eigen::Matrix3d& element(int tri) const { return matrices_[tri].S; }

  /// Discrete action sum over all triangles.
  double action(const DiscreteField& f) const;

  /// Euler-Lagrange residual dS/df at a node; defined away from the first
  /// and last slice.
  double residual(const DiscreteField& f, int node) const;

  /// Marches slice by slice from two initial slices; throws SolverError if
  /// a slice system is singular and inconsistent.
  DiscreteField march(std::span<const double> slice0,
                      std::span<const double> slice1) const;

  /// Solves all interior stationarity equations as one dense system (for
  /// cross-checking the march on small meshes).
  DiscreteField solve_global(std::span<const double> slice0,
                             std::span<const double> slice1) const;

 private:
  const SpacetimeMesh* mesh_;
  std::vector<ElementMatrix> matrices_;
  std::vector<std::vector<std::pair<int, int>>> incidence_;  // (tri, local)
};

struct Diagnostics {
  std::vector<double> l2_error;    // per-slice RMS error vs exact_solution
  std::vector<double> mode1_amp;   // fundamental spatial Fourier amplitude
  std::vector<double> mode1_phase; // phase of that mode
};

Diagnostics diagnostics(const DiscreteField& f, const SpacetimeMesh& mesh);

/// CSV rows: slice,t,l2_error,mode1_amp,mode1_phase.
void export_diagnostics_csv(const Diagnostics& d, const SpacetimeMesh& mesh,
                            const std::string& path);

struct DispersionSummary {
  double amplitude_drift = 0.0;  // max relative mode-1 amplitude deviation
  double phase_error = 0.0;      // max accumulated mode-1 phase error (rad)
};

DispersionSummary summarize_dispersion(const Diagnostics& d,
                                       const SpacetimeMesh& mesh);

/// Slices 0 and 1 sampled from exact_solution (slice 1 at t = dt).
std::pair<std::vector<double>, std::vector<double>> exact_initial_slices(
    const SpacetimeMesh& mesh);

}  // namespace whitney
