#include "latsim/bandstructure.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "latsim/csv.hpp"
#include "latsim/parallel.hpp"

namespace latsim {

BlochProblem BlochProblem::uniform(double depth, int n_points, int cutoff) {
  BlochProblem prob;
  prob.depth = depth;
  prob.cutoff = cutoff;
  prob.q_grid.resize(n_points);
  for (int i = 0; i < n_points; ++i)
    prob.q_grid[i] = -1.0 + 2.0 * i / (n_points - 1);
  prob.validate();
  return prob;
}

void BlochProblem::validate() const {
  if (!(depth >= 0.0)) throw std::invalid_argument("depth must be >= 0");
  if (cutoff < 8) throw std::invalid_argument("cutoff must be >= 8");
  if (q_grid.empty()) throw std::invalid_argument("q_grid must not be empty");
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    if (std::abs(q_grid[i]) > 1.0)
      throw std::invalid_argument("q_grid values must lie in [-1, 1]");
    if (i > 0 && !(q_grid[i] > q_grid[i - 1]))
      throw std::invalid_argument("q_grid must be strictly increasing");
  }
}

TridiagonalHamiltonian build_hamiltonian(double depth, double q, int cutoff) {
  if (std::abs(q) > 1.0)
    throw std::invalid_argument("quasi-momentum q must lie in [-1, 1]");
  if (cutoff < 8) throw std::invalid_argument("cutoff must be >= 8");
  if (!(depth >= 0.0)) throw std::invalid_argument("depth must be >= 0");
  const int dim = 2 * cutoff + 1;
  TridiagonalHamiltonian h;
  h.diag.resize(dim);
  h.off_diag.assign(dim - 1, -depth / 4.0);
  for (int i = 0; i < dim; ++i) {
    const double kn = q + 2.0 * (i - cutoff);
    h.diag[i] = kn * kn + depth / 2.0;
  }
  return h;
}

BlochSolution solve_bloch(double depth, double q, int cutoff, int n_bands) {
  if (n_bands < 1 || n_bands > cutoff)
    throw std::invalid_argument("n_bands must be in [1, cutoff]");
  const TridiagonalHamiltonian h = build_hamiltonian(depth, q, cutoff);
  const int dim = 2 * cutoff + 1;

  Eigen::Map<const Eigen::VectorXd> diag(h.diag.data(), dim);
  Eigen::Map<const Eigen::VectorXd> off(h.off_diag.data(), dim - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal eigensolver did not converge");

  BlochSolution sol;
  sol.q = q;
  sol.energy.resize(n_bands);
  sol.velocity.resize(n_bands);
  sol.coeff.assign(n_bands, std::vector<double>(dim));
  for (int b = 0; b < n_bands; ++b) {
    sol.energy[b] = solver.eigenvalues()[b];
    Eigen::VectorXd vec = solver.eigenvectors().col(b);
    // Deterministic sign: first entry of largest magnitude made positive.
    int imax = 0;
    double amax = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double a = std::abs(vec[i]);
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    if (vec[imax] < 0.0) vec = -vec;
    double v = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double kn = q + 2.0 * (i - cutoff);
      v += vec[i] * vec[i] * kn;
      sol.coeff[b][i] = vec[i];
    }
    sol.velocity[b] = v;
  }
  return sol;
}

BandStructure solve_bands(const BlochProblem& prob, int n_bands, int threads) {
  prob.validate();
  if (n_bands > prob.cutoff)
    throw std::invalid_argument("n_bands must not exceed cutoff");
  const std::size_t nq = prob.q_grid.size();
  const int dim = 2 * prob.cutoff + 1;

  BandStructure bs;
  bs.depth = prob.depth;
  bs.cutoff = prob.cutoff;
  bs.q_grid = prob.q_grid;
  bs.energy.assign(n_bands, std::vector<double>(nq));
  bs.velocity.assign(n_bands, std::vector<double>(nq));
  bs.coeff.assign(n_bands, std::vector<std::vector<double>>(
                              nq, std::vector<double>(dim)));

  parallel_for(nq, threads, [&](std::size_t iq) {
    const BlochSolution sol =
        solve_bloch(prob.depth, prob.q_grid[iq], prob.cutoff, n_bands);
    for (int b = 0; b < n_bands; ++b) {
      bs.energy[b][iq] = sol.energy[b];
      bs.velocity[b][iq] = sol.velocity[b];
      bs.coeff[b][iq] = sol.coeff[b];
    }
  });
  return bs;
}

double group_velocity(double depth, int band, double q, int cutoff) {
  if (band < 1) throw std::invalid_argument("band index is 1-based");
  return solve_bloch(depth, q, cutoff, band).velocity[band - 1];
}

double group_velocity(const BandStructure& bs, int band, double q) {
  if (band < 1 || band > bs.n_bands())
    throw std::invalid_argument("band outside tabulated range");
  if (std::abs(q) > 1.0)
    throw std::invalid_argument("q outside tabulated range");
  return group_velocity(bs.depth, band, q, bs.cutoff);
}

BandVelocityMax max_band_velocity(double depth, int band, int cutoff,
                                  int n_scan) {
  if (n_scan < 3) throw std::invalid_argument("n_scan must be >= 3");
  // v is odd in q, so the global max of |v| lives in q in [0, 1].
  std::vector<double> vs(n_scan);
  double h = 1.0 / (n_scan - 1);
  int ibest = 0;
  for (int i = 0; i < n_scan; ++i) {
    vs[i] = group_velocity(depth, band, i * h, cutoff);
    if (vs[i] > vs[ibest]) ibest = i;
  }
  BandVelocityMax result{ibest * h, vs[ibest]};
  if (ibest > 0 && ibest < n_scan - 1) {
    // Quadratic refinement through the three points around the max.
    const double ym = vs[ibest - 1], y0 = vs[ibest], yp = vs[ibest + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      const double delta = 0.5 * (ym - yp) / denom;
      const double qr = (ibest + delta) * h;
      const double vr = group_velocity(depth, band, qr, cutoff);
      if (vr > result.v_max) result = BandVelocityMax{qr, vr};
    }
  }
  return result;
}

BandMomentum map_free_momentum(double kappa) {
  const double akappa = std::abs(kappa);
  // ceil(|kappa|); an integer |kappa| sits on a zone boundary and lands in
  // the lower of the two touching bands.
  const int band = std::max(1, static_cast<int>(std::ceil(akappa)));
  // Fold with ties-to-even so q stays in [-1, 1]; the branch reached this
  // way carries the s->0 velocity sign of kappa on zone interiors.
  double q = std::remainder(kappa, 2.0);
  return BandMomentum{band, q};
}

double unfold_momentum(int band, double q) {
  if (band < 1) throw std::invalid_argument("band index is 1-based");
  // kappa = q + 2m for some integer m, with |kappa| in [band-1, band].
  const int span = band / 2 + 1;
  for (int m = -span; m <= span; ++m) {
    const double cand = q + 2.0 * m;
    const double a = std::abs(cand);
    if (a < band - 1 - 1e-12 || a > band + 1e-12) continue;
    const BandMomentum folded = map_free_momentum(cand);
    if (folded.band == band && std::abs(folded.q - q) < 1e-9) return cand;
  }
  throw std::invalid_argument("no extended-zone momentum folds onto (band, q)");
}

void write_band_csv(const BandStructure& bs, const std::string& path) {
  CsvTable t;
  t.header = {"band", "q", "E_over_ER", "v_over_vR"};
  for (int b = 0; b < bs.n_bands(); ++b)
    for (std::size_t iq = 0; iq < bs.q_grid.size(); ++iq)
      t.rows.push_back({static_cast<double>(b + 1), bs.q_grid[iq],
                        bs.energy[b][iq], bs.velocity[b][iq]});
  write_csv(path, t);
}

}  // namespace latsim
