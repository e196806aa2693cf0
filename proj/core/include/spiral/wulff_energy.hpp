#pragma once

// Polygonal support functions, piecewise-linear energy densities, and the
// conversion between them.  A support function
//
//   gamma°(p) = max_j m_j . p,   m_j = eta_j (cos psi_j, sin psi_j)
//
// describes the Wulff polygon W = { gamma° <= 1 }; the dual density
// gamma(p) = max_j n_j . p is reconstructed facet by facet from the angles
// theta_j where two consecutive support vectors tie.

#include <stdexcept>
#include <string>
#include <vector>

#include "spiral/vec2.hpp"

namespace spiral {

struct SupportFacet {
  double eta;  // supporting line m_j . p = 1 at distance 1/eta_j, eta_j > 0
  double psi;  // outward normal angle in radians
};

// gamma°(p) = max_j m_j . p with m_j = eta_j (cos psi_j, sin psi_j).
struct SupportSpec {
  std::vector<SupportFacet> facets;

  int count() const { return static_cast<int>(facets.size()); }
  Vec2 m(int j) const {
    const SupportFacet& f = facets[static_cast<std::size_t>(j)];
    return f.eta * unit_dir(f.psi);
  }
};

// Thrown when a structural assumption fails; carries which one and where.
class AssumptionError : public std::runtime_error {
 public:
  AssumptionError(std::string assumption, int index, const std::string& what)
      : std::runtime_error(what), assumption_(std::move(assumption)), index_(index) {}
  const std::string& assumption() const { return assumption_; }
  int index() const { return index_; }

 private:
  std::string assumption_;
  int index_;
};

double eval_support(const SupportSpec& spec, Vec2 p);

// Per-vector sector diagnostics for a max-of-dots function.  P_j is the cone
// of directions where vector j attains the max; for a valid polygon every P_j
// is a nonempty sector cut out by the two neighbouring vectors alone.
struct SectorInfo {
  bool nonempty = false;
  bool neighbors_only = false;  // P_j == Xi_{j,j-1} ∩ Xi_{j,j+1}
  double lo = 0.0;              // angular extent of P_j (when nonempty)
  double hi = 0.0;
};

struct SectorReport {
  std::vector<SectorInfo> sectors;
  bool pass = false;
};

SectorReport validate_sectors(const std::vector<Vec2>& vectors, double tol = 1e-10);

// Checks assumptions (increasing angles over one period, gaps < pi, sector
// partition); throws AssumptionError naming the failed one.
void validate_spec(const SupportSpec& spec, double tol = 1e-10);

// gamma(p) = max_j n_j . p with n_j = r_j (cos theta_j, sin theta_j),
// r_j > 0, theta_j strictly increasing over one period.
struct EnergyDensity {
  std::vector<Vec2> vectors;
  std::vector<double> radii;
  std::vector<double> angles;

  // Sorts by angle in [0, 2pi), validates r > 0 and strict ordering.
  static EnergyDensity from_vectors(const std::vector<Vec2>& n, double tol = 1e-10);

  int count() const { return static_cast<int>(vectors.size()); }
  // Sector gauge g_j(p) = n_j . p.
  double gauge(int j, Vec2 p) const { return dot(vectors[static_cast<std::size_t>(j)], p); }
  // Sector indicator f_j(p) = min_{k != j} (g_j(p) - g_k(p)).
  double indicator(int j, Vec2 p) const;
};

double eval_energy(const EnergyDensity& density, Vec2 p);

// Wulff polygon data used by the discrete model.
struct WulffShape {
  std::vector<double> phi;       // facet normal angles, strictly increasing
  std::vector<double> ell;       // facet lengths
  std::vector<double> beta;      // mobilities
  std::vector<Vec2> vertices;    // vertex j joins facets j and j+1

  int count() const { return static_cast<int>(phi.size()); }
  Vec2 normal(int j) const { return unit_dir(phi[static_cast<std::size_t>(j)]); }
  Vec2 tangent(int j) const {
    double a = phi[static_cast<std::size_t>(j)];
    return {std::sin(a), -std::cos(a)};
  }
};

// Reconstructs the density from the support function: theta_j = c_j + pi/2
// from the tie condition m_j . q = m_{j-1} . q, r_j = 1/(eta_j cos(theta_j -
// psi_j)), with (r, theta) flipped to keep r > 0.
EnergyDensity dual(const SupportSpec& spec);

// Reads the density vectors back as a support spec (same machinery applies
// with the roles of gamma and gamma° exchanged).
SupportSpec as_support(const EnergyDensity& density);

// Builds the Wulff polygon of the spec: facet j on the line m_j . p = 1,
// vertices from consecutive line intersections.  beta empty means beta == 1.
WulffShape wulff_shape_from_support(const SupportSpec& spec,
                                    const std::vector<double>& beta = {});

struct NormalizationReport {
  std::vector<double> residuals;  // |gamma°(N_j) - 1| per facet
  bool pass = false;
};

// Verifies the normalization gamma°(N_j) = 1 for every facet normal.
NormalizationReport normalization_check(const SupportSpec& spec, const WulffShape& shape,
                                        double tol = 1e-10);

}  // namespace spiral
