#ifndef SICLADDER_OPTIMIZE_HPP
#define SICLADDER_OPTIMIZE_HPP

// Small unconstrained optimizers on R^n for scale-invariant objectives:
// iterates are renormalized to the unit sphere after every accepted step.
//
// An objective for lbfgs_minimize provides
//   Real value(const RVector<Real>&) const;
//   Real value_and_gradient(const RVector<Real>&, RVector<Real>& grad) const;
// and one for levenberg_marquardt provides
//   void residuals(const RVector<Real>&, RVector<Real>& r, Matrix& jacobian) const;

#include <deque>
#include <limits>

#include "sicladder/types.hpp"

namespace sicladder::optimize {

template <typename Real>
using RMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

struct LbfgsOptions {
  int memory = 12;
  long max_iters = 5000;
  double grad_tol = 1e-12;
  /// Stop as soon as the value drops to this level.
  double target_value = -std::numeric_limits<double>::infinity();
  double armijo = 1e-4;
  int max_backtracks = 40;
};

template <typename Real = double>
struct LbfgsResult {
  RVector<Real> x;
  Real value = 0;
  long iterations = 0;
  bool converged = false;
};

template <typename Real, typename Objective>
LbfgsResult<Real> lbfgs_minimize(const Objective& f, RVector<Real> x, const LbfgsOptions& opts = {}) {
  x.normalize();
  RVector<Real> g;
  Real value = f.value_and_gradient(x, g);
  std::deque<RVector<Real>> s_hist, y_hist;
  std::deque<Real> rho_hist;

  LbfgsResult<Real> out;
  for (long it = 0; it < opts.max_iters; ++it) {
    out.iterations = it;
    if (double(value) <= opts.target_value || double(g.template lpNorm<Eigen::Infinity>()) < opts.grad_tol) {
      out.converged = true;
      break;
    }

    // two-loop recursion
    RVector<Real> q = g;
    std::vector<Real> alpha(s_hist.size());
    for (std::size_t k = s_hist.size(); k-- > 0;) {
      alpha[k] = rho_hist[k] * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    else q /= std::max(Real(1), g.norm());
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const Real beta = rho_hist[k] * y_hist[k].dot(q);
      q += (alpha[k] - beta) * s_hist[k];
    }
    RVector<Real> dir = -q;
    Real slope = g.dot(dir);
    if (!(slope < 0)) {  // lost descent: reset memory
      s_hist.clear(), y_hist.clear(), rho_hist.clear();
      dir = -g / std::max(Real(1), g.norm());
      slope = g.dot(dir);
    }

    Real step = 1;
    RVector<Real> x_new;
    Real value_new = value;
    bool accepted = false;
    for (int b = 0; b < opts.max_backtracks; ++b) {
      x_new = (x + step * dir).normalized();
      value_new = f.value(x_new);
      if (value_new <= value + Real(opts.armijo) * step * slope) {
        accepted = true;
        break;
      }
      step /= 2;
    }
    if (!accepted) break;  // no progress possible at this precision

    RVector<Real> g_new;
    value_new = f.value_and_gradient(x_new, g_new);
    RVector<Real> s = x_new - x;
    RVector<Real> y = g_new - g;
    const Real sy = s.dot(y);
    if (sy > Real(1e-300)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(Real(1) / sy);
      if (int(s_hist.size()) > opts.memory) {
        s_hist.pop_front(), y_hist.pop_front(), rho_hist.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    value = value_new;
    out.iterations = it + 1;
  }
  out.x = std::move(x);
  out.value = value;
  return out;
}

struct LmOptions {
  long max_iters = 200;
  /// Converged once max |r_k| falls below this.
  double residual_tol = 1e-14;
  double initial_damping = 1e-6;
};

template <typename Real = double>
struct LmResult {
  RVector<Real> x;
  Real max_residual = 0;
  long iterations = 0;
  bool converged = false;
};

/// Levenberg-Marquardt on sum r_k^2 with damping lambda * I.
template <typename Real, typename Objective>
LmResult<Real> levenberg_marquardt(const Objective& f, RVector<Real> x, const LmOptions& opts = {}) {
  x.normalize();
  RVector<Real> r;
  RMatrix<Real> jac;
  f.residuals(x, r, jac);
  Real cost = r.squaredNorm();
  Real lambda = Real(opts.initial_damping);

  LmResult<Real> out;
  for (long it = 0; it < opts.max_iters; ++it) {
    out.iterations = it;
    if (double(r.template lpNorm<Eigen::Infinity>()) < opts.residual_tol) {
      out.converged = true;
      break;
    }
    const RMatrix<Real> jtj = jac.transpose() * jac;
    const RVector<Real> jtr = jac.transpose() * r;
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      RMatrix<Real> a = jtj;
      a.diagonal().array() += lambda;
      const RVector<Real> delta = a.ldlt().solve(-jtr);
      const RVector<Real> x_new = (x + delta).normalized();
      RVector<Real> r_new;
      RMatrix<Real> jac_new;
      f.residuals(x_new, r_new, jac_new);
      const Real cost_new = r_new.squaredNorm();
      if (cost_new < cost) {
        x = x_new;
        r = std::move(r_new);
        jac = std::move(jac_new);
        cost = cost_new;
        lambda = std::max(lambda / Real(10), Real(1e-15));
        improved = true;
        break;
      }
      lambda *= Real(10);
    }
    out.iterations = it + 1;
    if (!improved) break;
  }
  out.converged = out.converged || double(r.template lpNorm<Eigen::Infinity>()) < opts.residual_tol;
  out.x = std::move(x);
  out.max_residual = r.template lpNorm<Eigen::Infinity>();
  return out;
}

}  // namespace sicladder::optimize

#endif  // SICLADDER_OPTIMIZE_HPP
