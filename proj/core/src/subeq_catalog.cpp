#include "nlpot/error.hpp"
#include "nlpot/subeq.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <numeric>

namespace nlpot {

using EigMember = std::function<bool(std::span<const double>)>;

double spectral_offset(const EigMember& member, std::span<const double> eig) {
  std::vector<double> buf(eig.begin(), eig.end());
  auto in = [&](double t) {
    for (std::size_t i = 0; i < eig.size(); ++i) buf[i] = eig[i] - t;
    return member(buf);
  };
  double scale = 1.0;
  for (double e : eig) scale = std::max(scale, std::abs(e));
  double lo, hi;
  if (in(0.0)) {
    lo = 0.0;
    hi = scale;
    for (int k = 0; in(hi); ++k) {
      if (k > 64) return kInf;
      lo = hi;
      hi *= 2.0;
    }
  } else {
    hi = 0.0;
    lo = -scale;
    for (int k = 0; !in(lo); ++k) {
      if (k > 64) return -kInf;
      hi = lo;
      lo *= 2.0;
    }
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (in(mid) ? lo : hi) = mid;
  }
  return lo;
}

namespace {

int int_param(const Params& p, const std::string& key, const std::string& family) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidInput(family + ": missing parameter " + key);
  double v = it->second;
  if (v != std::floor(v) || v < 1 || v > 64) throw InvalidInput(family + ": parameter " + key + " must be a positive integer");
  return static_cast<int>(v);
}

double real_param(const Params& p, const std::string& key, const std::string& family) {
  auto it = p.find(key);
  if (it == p.end()) throw InvalidInput(family + ": missing parameter " + key);
  if (!std::isfinite(it->second)) throw InvalidInput(family + ": parameter " + key + " must be finite");
  return it->second;
}

// Subequation whose membership only sees the spectrum of some linear image of A.
// `image` maps A to the matrix whose eigenvalues are tested (identity for most entries).
Subequation spectral(const std::string& name, const Params& params, int n, EigMember member,
                     SubeqFlags flags, std::optional<CatalogRef> mono,
                     std::function<SymMatrix(const SymMatrix&)> image = {}) {
  Subequation::Oracle oracle;
  if (image)
    oracle = [member, image](const Jet2& j) { return member(image(j.A).eigenvalues()); };
  else
    oracle = [member](const Jet2& j) { return member(j.A.eigenvalues()); };
  Subequation s(name, params, n, oracle, flags, std::move(mono));
  if (image)
    s.set_offset_hint([member, image](const Jet2& j) { return spectral_offset(member, image(j.A).eigenvalues()); });
  else
    s.set_offset_hint([member](const Jet2& j) { return spectral_offset(member, j.A.eigenvalues()); });
  return s;
}

SubeqFlags cone_flags(bool convex) {
  SubeqFlags f;
  f.is_cone = true;
  f.st_invariant = true;
  f.convex = convex;
  return f;
}

CatalogRef self_ref(const std::string& name, const Params& p) { return CatalogRef{name, p}; }

// ---- Lagrangian frames -----------------------------------------------------

struct LagFrames {
  int n0 = 0;
  Matrix jm;                   // complex structure
  std::vector<Matrix> frames;  // 2n0 x n0, columns orthonormal and spanning a Lagrangian plane
};

const LagFrames& lag_frames(int n0) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<LagFrames>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& slot = cache[n0];
  if (!slot) {
    auto lf = std::make_shared<LagFrames>();
    lf->n0 = n0;
    lf->jm = standard_complex_structure(n0);
    Rng rng = sample_rng(0x1a9ULL, static_cast<std::uint64_t>(n0));
    const int count = 512;
    for (int s = 0; s < count; ++s) {
      Eigen::MatrixXcd g(n0, n0);
      for (int a = 0; a < n0; ++a)
        for (int b = 0; b < n0; ++b) g(a, b) = std::complex<double>(normal(rng), normal(rng));
      Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
      Eigen::MatrixXcd q = qr.householderQ();
      Matrix f(2 * n0, n0);
      for (int k = 0; k < n0; ++k)
        for (int a = 0; a < n0; ++a) {
          f(2 * a, k) = q(a, k).real();
          f(2 * a + 1, k) = q(a, k).imag();
        }
      lf->frames.push_back(std::move(f));
    }
    slot = lf;
  }
  return *slot;
}

double frame_trace(const Matrix& a, const Matrix& u) { return (u.transpose() * a * u).trace(); }

// minimizes P + Q cos 2t + R sin 2t written as c^2 x + s^2 y + 2cs z; returns (c, s, value)
std::array<double, 3> trig_min(double x, double y, double z) {
  double p = 0.5 * (x + y), q = 0.5 * (x - y);
  double amp = std::hypot(q, z);
  if (amp == 0.0) return {1.0, 0.0, x};
  double two_t = std::atan2(-z, -q);
  return {std::cos(0.5 * two_t), std::sin(0.5 * two_t), p - amp};
}

double refine_frame(const Matrix& a, const Matrix& jm, Matrix u) {
  const int n0 = static_cast<int>(u.cols());
  double cur = frame_trace(a, u);
  const double tol = 1e-15 * (1.0 + a.cwiseAbs().maxCoeff());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double before = cur;
    for (int j = 0; j < n0; ++j) {
      Vector uj = u.col(j), ju = jm * uj;
      double x = uj.dot(a * uj), y = ju.dot(a * ju), z = uj.dot(a * ju);
      auto [c, s, v] = trig_min(x, y, z);
      if (v < x) u.col(j) = c * uj + s * ju;
    }
    for (int j = 0; j < n0; ++j)
      for (int k = j + 1; k < n0; ++k) {
        Vector uj = u.col(j), uk = u.col(k);
        Vector juk = jm * uk, juj = jm * uj;
        double x = uj.dot(a * uj) + uk.dot(a * uk);
        double y = juk.dot(a * juk) + juj.dot(a * juj);
        double z = uj.dot(a * juk) + uk.dot(a * juj);
        auto [c, s, v] = trig_min(x, y, z);
        if (v < x) {
          u.col(j) = c * uj + s * juk;
          u.col(k) = c * uk + s * juj;
        }
      }
    cur = frame_trace(a, u);
    if (before - cur <= tol) break;
  }
  return cur;
}

}  // namespace

double lagrangian_min_trace(const SymMatrix& a) {
  if (a.dim() % 2 != 0) throw InvalidInput("lagrangian_min_trace: odd dimension");
  const int n0 = a.dim() / 2;
  const auto& lf = lag_frames(n0);
  const Matrix& m = a.matrix();
  if (n0 == 1) return a.min_eigenvalue();  // every line in R^2 is Lagrangian
  std::vector<std::pair<double, int>> vals;
  vals.reserve(lf.frames.size());
  for (int i = 0; i < static_cast<int>(lf.frames.size()); ++i) vals.emplace_back(frame_trace(m, lf.frames[i]), i);
  std::partial_sort(vals.begin(), vals.begin() + 4, vals.end());
  double best = vals.front().first;
  for (int i = 0; i < 4; ++i) best = std::min(best, refine_frame(m, lf.jm, lf.frames[vals[i].second]));
  return best;
}

Subequation make_subequation(const std::string& name, const Params& params) {
  auto n_of = [&] { return int_param(params, "n", name); };

  if (name == "P") {
    int n = n_of();
    Subequation s = spectral(name, params, n, [](std::span<const double> e) { return e.front() >= 0.0; },
                             cone_flags(true), self_ref("P", {{"n", double(n)}}));
    s.set_offset_hint([](const Jet2& j) { return j.A.min_eigenvalue(); });
    return s;
  }
  if (name == "P_dual") {
    int n = n_of();
    Subequation s = spectral(name, params, n, [](std::span<const double> e) { return e.back() >= 0.0; },
                             cone_flags(false), self_ref("P", {{"n", double(n)}}));
    s.set_offset_hint([](const Jet2& j) { return j.A.max_eigenvalue(); });
    return s;
  }
  if (name == "Lambda_k") {
    int n = n_of();
    int k = int_param(params, "k", name);
    if (k > n) throw InvalidInput("Lambda_k: need 1 <= k <= n");
    Subequation s = spectral(name, params, n, [k](std::span<const double> e) { return e[k - 1] >= 0.0; },
                             cone_flags(k == 1), self_ref("P", {{"n", double(n)}}));
    s.set_offset_hint([k](const Jet2& j) { return j.A.eigenvalues()[k - 1]; });
    return s;
  }
  if (name == "Delta") {
    int n = n_of();
    Subequation s(name, params, n, [](const Jet2& j) { return j.A.trace() >= 0.0; }, cone_flags(true),
                  self_ref("Delta", {{"n", double(n)}}));
    s.set_offset_hint([n](const Jet2& j) { return j.A.trace() / n; });
    return s;
  }
  if (name == "Sigma_k") {
    int n = n_of();
    int k = int_param(params, "k", name);
    if (k > n) throw InvalidInput("Sigma_k: need 1 <= k <= n");
    auto mem = [k](std::span<const double> e) {
      auto s = elementary_symmetric(e);
      for (int j = 1; j <= k; ++j)
        if (s[j] < 0.0) return false;
      return true;
    };
    return spectral(name, params, n, mem, cone_flags(true), self_ref("Sigma_k", {{"n", double(n)}, {"k", double(k)}}));
  }
  if (name == "P_p") {
    int n = n_of();
    int p = int_param(params, "p", name);
    if (p > n) throw InvalidInput("P_p: need 1 <= p <= n");
    auto mem = [p](std::span<const double> e) { return std::accumulate(e.begin(), e.begin() + p, 0.0) >= 0.0; };
    Subequation s = spectral(name, params, n, mem, cone_flags(true), self_ref("P_p", {{"n", double(n)}, {"p", double(p)}}));
    s.set_offset_hint([p](const Jet2& j) {
      const auto& e = j.A.eigenvalues();
      return std::accumulate(e.begin(), e.begin() + p, 0.0) / p;
    });
    return s;
  }
  if (name == "P_delta") {
    int n = n_of();
    double d = real_param(params, "delta", name);
    if (!(d > 0.0)) throw InvalidInput("P_delta: need delta > 0");
    auto mem = [d](std::span<const double> e) {
      return e.front() + d * std::accumulate(e.begin(), e.end(), 0.0) >= 0.0;
    };
    Subequation s = spectral(name, params, n, mem, cone_flags(true),
                             self_ref("P_delta", {{"n", double(n)}, {"delta", d}}));
    s.set_offset_hint([d, n](const Jet2& j) { return (j.A.min_eigenvalue() + d * j.A.trace()) / (1.0 + n * d); });
    return s;
  }
  if (name == "P_pucci") {
    int n = n_of();
    double lam = real_param(params, "lambda", name), Lam = real_param(params, "Lambda", name);
    if (!(lam > 0.0 && Lam >= lam)) throw InvalidInput("P_pucci: need 0 < lambda <= Lambda");
    auto mem = [lam, Lam](std::span<const double> e) {
      double v = 0.0;
      for (double x : e) v += x > 0 ? lam * x : Lam * x;
      return v >= 0.0;
    };
    return spectral(name, params, n, mem, cone_flags(true),
                    self_ref("P_pucci", {{"n", double(n)}, {"lambda", lam}, {"Lambda", Lam}}));
  }
  if (name == "P_C" || name == "P_H") {
    int n0 = int_param(params, "n0", name);
    bool cx = name == "P_C";
    int n = (cx ? 2 : 4) * n0;
    Params full = params;
    full["n"] = n;
    std::function<SymMatrix(const SymMatrix&)> img;
    if (cx) {
      Matrix jm = standard_complex_structure(n0);
      img = [jm](const SymMatrix& a) { return hermitian_part(a, jm); };
    } else {
      img = [](const SymMatrix& a) { return quaternionic_part(a); };
    }
    return spectral(name, full, n, [](std::span<const double> e) { return e.front() >= 0.0; }, cone_flags(true),
                    self_ref(name, {{"n0", double(n0)}}), img);
  }
  if (name == "Lag") {
    int n0 = int_param(params, "n0", name);
    Params full = params;
    full["n"] = 2 * n0;
    Subequation s(name, full, 2 * n0, [](const Jet2& j) { return lagrangian_min_trace(j.A) >= 0.0; }, cone_flags(true),
                  self_ref("Lag", {{"n0", double(n0)}}));
    s.set_offset_hint([n0](const Jet2& j) { return lagrangian_min_trace(j.A) / n0; });
    return s;
  }
  if (name == "F_theta") {
    int n = n_of();
    double th = real_param(params, "theta", name);
    const double half = n * std::numbers::pi / 2;
    if (!(th > -half && th < half)) throw InvalidInput("F_theta: need |theta| < n pi / 2");
    auto mem = [th](std::span<const double> e) {
      double v = 0.0;
      for (double x : e) v += std::atan(x);
      return v >= th;
    };
    SubeqFlags fl;
    fl.st_invariant = true;
    fl.convex = th >= (n - 2) * std::numbers::pi / 2;
    return spectral(name, params, n, mem, fl, self_ref("P", {{"n", double(n)}}));
  }
  if (name == "Sym") {
    int n = n_of();
    SubeqFlags fl = cone_flags(true);
    Subequation s(name, params, n, [](const Jet2&) { return true; }, fl, self_ref("P", {{"n", double(n)}}));
    s.set_offset_hint([](const Jet2&) { return kInf; });
    return s;
  }
  if (name == "P_minus_r") {
    int n = n_of();
    SubeqFlags fl;
    fl.is_cone = true;
    fl.convex = true;
    fl.pure_second_order = false;
    fl.reduced = false;
    Subequation s(name, params, n, [](const Jet2& j) { return j.A.min_eigenvalue() - j.r >= 0.0; }, fl,
                  self_ref("P", {{"n", double(n)}}));
    s.set_offset_hint([](const Jet2& j) { return j.A.min_eigenvalue() - j.r; });
    return s;
  }
  if (name == "P_grad") {
    int n = n_of();
    SubeqFlags fl;
    fl.is_cone = true;
    fl.convex = true;
    fl.pure_second_order = false;
    Subequation s(name, params, n, [](const Jet2& j) { return j.A.min_eigenvalue() >= j.p.norm(); }, fl,
                  self_ref("P", {{"n", double(n)}}));
    s.set_offset_hint([](const Jet2& j) { return j.A.min_eigenvalue() - j.p.norm(); });
    return s;
  }
  throw InvalidInput("unknown subequation: " + name);
}

std::vector<std::string> subequation_names() {
  return {"Delta", "F_theta", "Lag", "Lambda_k", "P", "P_C", "P_H", "P_delta", "P_dual",
          "P_grad", "P_minus_r", "P_p", "P_pucci", "Sigma_k", "Sym"};
}

std::vector<CatalogRef> subequation_catalog_defaults() {
  return {
      {"P", {{"n", 3}}},
      {"P_dual", {{"n", 3}}},
      {"Lambda_k", {{"n", 4}, {"k", 2}}},
      {"Delta", {{"n", 3}}},
      {"Sigma_k", {{"n", 4}, {"k", 2}}},
      {"P_p", {{"n", 4}, {"p", 2}}},
      {"P_delta", {{"n", 3}, {"delta", 0.5}}},
      {"P_pucci", {{"n", 3}, {"lambda", 1.0}, {"Lambda", 2.0}}},
      {"P_C", {{"n0", 2}}},
      {"P_H", {{"n0", 1}}},
      {"Lag", {{"n0", 2}}},
      {"F_theta", {{"n", 3}, {"theta", 0.5}}},
      {"Sym", {{"n", 2}}},
      {"P_minus_r", {{"n", 3}}},
      {"P_grad", {{"n", 3}}},
  };
}

}  // namespace nlpot
