#pragma once

#include <string>
#include <vector>

// Bloch bands of V(z) = V0 sin^2(kL z), solved in the plane-wave basis
// exp(i (q + 2n) kL z).  With V0 = s E_R the potential couples only
// n <-> n+1, so the Hamiltonian is real symmetric tridiagonal:
//
//   diagonal  (q + 2n)^2 + s/2,   n = -cutoff..cutoff
//   off-diag  -s/4
//
// in units of E_R with q in units of kL.  Energies come out in E_R,
// group velocities in v_R = hbar kL / m via the Hellmann-Feynman form
//   v_b(q) = sum_n |c_n|^2 (q + 2n).

namespace latsim {

struct BlochProblem {
  double depth = 0.0;          // s >= 0
  int cutoff = 32;             // basis half-width, >= 8
  std::vector<double> q_grid;  // strictly increasing, within [-1, 1]

  /// Uniform q grid on [-1, 1].
  static BlochProblem uniform(double depth, int n_points = 513, int cutoff = 32);
  void validate() const;
};

/// Symmetric tridiagonal Bloch Hamiltonian at fixed quasi-momentum.
struct TridiagonalHamiltonian {
  std::vector<double> diag;      // size 2*cutoff+1
  std::vector<double> off_diag;  // size 2*cutoff
};

TridiagonalHamiltonian build_hamiltonian(double depth, double q, int cutoff);

/// Eigen-decomposition at one quasi-momentum: the lowest n_bands states,
/// energies ascending, eigenvectors unit norm with the first
/// largest-|coefficient| entry made positive.
struct BlochSolution {
  double q = 0.0;
  std::vector<double> energy;                 // [band], E_R
  std::vector<double> velocity;               // [band], v_R
  std::vector<std::vector<double>> coeff;     // [band][basis index]
};

BlochSolution solve_bloch(double depth, double q, int cutoff, int n_bands);

/// Band tables over a q grid.  Immutable after construction; rows are
/// solved independently per q so a parallel build is bit-identical to a
/// serial one.
struct BandStructure {
  double depth = 0.0;
  int cutoff = 32;
  std::vector<double> q_grid;
  std::vector<std::vector<double>> energy;    // [band][iq], E_R
  std::vector<std::vector<double>> velocity;  // [band][iq], v_R
  std::vector<std::vector<std::vector<double>>> coeff;  // [band][iq][basis]

  int n_bands() const { return static_cast<int>(energy.size()); }
};

BandStructure solve_bands(const BlochProblem& prob, int n_bands, int threads = 1);

/// Hellmann-Feynman group velocity at arbitrary q (fresh solve, no
/// interpolation).  band is 1-based.
double group_velocity(const BandStructure& bs, int band, double q);
double group_velocity(double depth, int band, double q, int cutoff = 32);

/// Location and value of the maximum group velocity of one band,
/// from a fine scan over q in [0, 1] refined by quadratic interpolation.
struct BandVelocityMax {
  double q_star = 0.0;
  double v_max = 0.0;  // v_R
};

BandVelocityMax max_band_velocity(double depth, int band, int cutoff = 32,
                                  int n_scan = 4001);

/// Extended-zone mapping of a free momentum kappa (units of kL) to the
/// (band, folded quasi-momentum) it connects to under adiabatic lattice
/// ramp-up.  band = ceil(|kappa|); integer |kappa| is assigned to the
/// lower band.  The folded q keeps the s->0 group velocity sign equal to
/// the sign of kappa on zone interiors.
struct BandMomentum {
  int band = 1;
  double q = 0.0;
};

BandMomentum map_free_momentum(double kappa);

/// Inverse of map_free_momentum on zone interiors: the free momentum with
/// |kappa| in [band-1, band] that folds onto q with a positive-velocity
/// branch for kappa > 0.
double unfold_momentum(int band, double q);

/// CSV export, columns: band,q,E_over_ER,v_over_vR.
void write_band_csv(const BandStructure& bs, const std::string& path);

}  // namespace latsim
