#pragma once

// Monotone wide-stencil solver for f(D^2 u) = psi in the plane with Dirichlet data,
// discrete viscosity verifiers, the comparison harness, and sup-convolution.
//
// The scheme value at a node is built from the directional second differences D_v:
// the Eigen rule evaluates f at (min D, max D); the Concave rule takes the minimum of f
// over orthogonal lattice frames.  Off F (for pairs that are not total) the value is
// c0 + offset, which continues f monotonically and pushes iterates back into F.

#include "nlpot/grid.hpp"
#include "nlpot/ops.hpp"
#include "nlpot/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nlpot {

// scheme value per node, from the directional differences
class SchemeOperator {
 public:
  SchemeOperator(const OperatorPair& pair, std::vector<LatticeDirection> dirs);

  double value(const std::vector<double>& d) const;
  // sup{t : eigenvalue pair - t in F} for the frame value that realizes value()
  double offset(const std::vector<double>& d) const;
  const OperatorPair& pair() const { return pair_; }
  FrameRule rule() const { return form_.rule; }

 private:
  double frame_value(double lo, double hi) const;
  double frame_offset(double lo, double hi) const;

  OperatorPair pair_;
  SpectralForm form_;
  std::vector<LatticeDirection> dirs_;
  double c0_ = 0.0;
};

// planar psi; a constant is the common case
using Source = PlaneFunction;

enum class SweepMode { GaussSeidel, Jacobi };

struct SolveConfig {
  std::string pair = "det";
  Params params{{"n", 2.0}};
  Domain domain;
  int grid = 33;        // nodes across the longer side
  int directions = 16;  // 4, 8, 16 or 32
  Source psi = [](double, double) { return 1.0; };
  PlaneFunction boundary = [](double x, double y) { return 0.5 * (x * x + y * y); };
  std::optional<PlaneFunction> initial;  // defaults to the boundary function
  SweepMode mode = SweepMode::GaussSeidel;
  double theta = 1.0;  // Jacobi damping
  double omega = 0.0;  // Gauss-Seidel relaxation; 0 picks 2 / (1 + sin(pi / (grid - 1)))
  double tolerance = 1e-10;  // on the scheme residual
  int max_iterations = 20000;
  int threads = 1;
};

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // max |value - psi| over interior nodes
  double last_update = 0.0;
  double omega = 1.0;
  std::string mode;
  int penalty_nodes = 0;  // nodes whose stencil jet sits outside F by more than the margin
  double seconds = 0.0;
};

struct Solution {
  GridField u;
  SolveReport report;
};

// throws InvalidInput if psi leaves the closure of the pair's range (1e-12 slack) or
// the pair is not two-dimensional
Solution solve(const SolveConfig& cfg);
Solution solve(const SolveConfig& cfg, const Stencil& stencil, const GridField& start);

// the same configuration, psi tabulated at the nodes of a grid
std::vector<double> tabulate(const GridField& g, const Source& psi);

// value - psi at interior node k
double scheme_residual(const SchemeOperator& op, const Stencil& s, const GridField& u, std::size_t k, double psi);

struct VerifyOptions {
  double tol = 1e-8;      // on value - psi
  double margin = 1e-8;   // on the F offset
  bool full_only = false; // only nodes whose arms stay on the grid
  std::vector<bool> mask; // optional, by grid index: skip nodes with mask[i] == false
};

// u is F_f(psi)-subharmonic at every node: stencil jet in F_f(psi) within tolerance
ProbeReport verify_subsolution(const SchemeOperator& op, const Stencil& s, const GridField& u, const Source& psi,
                               const VerifyOptions& opt = {});
// v is dual-subharmonic: -(stencil jet of v) is not in the interior of F_f(psi)
ProbeReport verify_dual_subsolution(const SchemeOperator& op, const Stencil& s, const GridField& v,
                                    const Source& psi, const VerifyOptions& opt = {});

struct ComparisonVerdict {
  double boundary_max = 0.0;
  double interior_max = 0.0;
  bool hypothesis = false;  // u + v <= tol on the boundary
  bool violated = false;    // hypothesis holds but u + v > tol somewhere inside
  int node = -1;
};
ComparisonVerdict comparison_check(const GridField& u, const GridField& v, double tol = 1e-9);

// Randomized comparison trials: u solves psi + a, w solves psi - b (a, b >= 0) with
// random quadratic boundary data; v = -w - max_boundary(u - w).  The mismatch trial uses
// v from psi' > psi with shared boundary data, which comparison must reject.
struct ComparisonConfig {
  SolveConfig base;
  int trials = 100;
  double perturb = 0.5;
  std::uint64_t seed = 1;
  bool mismatch = true;
  double tol = 1e-8;
};
struct ComparisonBatch {
  int trials = 0;
  int violations = 0;
  int unconverged = 0;
  std::vector<ComparisonVerdict> verdicts;
  std::optional<ComparisonVerdict> mismatch;
};
ComparisonBatch run_comparison_batch(const ComparisonConfig& cfg);

double sup_error(const GridField& u, const PlaneFunction& exact);
double relative_sup_error(const GridField& u, const PlaneFunction& exact);

// ---- sup-convolution -------------------------------------------------------------

struct SupConvolution {
  GridField v;
  double delta = 0.0;   // sqrt(2 eps M)
  int radius = 0;       // delta / h, in nodes
  std::vector<bool> band;  // by grid index: interior nodes at least delta + reach from the edge
  bool noop = false;       // delta < h: v = u_lambda
};
// v(x) = max over grid offsets |z| <= sqrt(2 eps M) of u(x - z) + (lambda/2)|x - z|^2 - |z|^2 / eps
SupConvolution sup_convolution(const GridField& u, double eps, double lambda, double M, int reach = 5);

// min over interior nodes and lattice directions of the plain second difference
double min_second_difference(const GridField& v, const std::vector<bool>& mask, int directions = 8);

// u(x1, x2, x3) = w(x1) on an m^3 grid: largest |lambda_2| of the centred-difference Hessian
double footnote_lambda2_residual(const std::function<double(double)>& w, int m, double h);

}  // namespace nlpot
