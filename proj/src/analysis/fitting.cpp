/* Copyright 2026 The Echotrain Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "echotrain/analysis/fitting.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <json.hpp>

namespace echotrain::analysis {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kStepTol = 1e-12;

double sum_sq(const Eigen::VectorXd& v) { return v.squaredNorm(); }

// Closed-form single-exponential amplitude with the rate fixed:
// min_A sum (A e_i - y_i)^2.
double fixed_rate_amplitude(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                            double t_decay) {
  const Eigen::VectorXd e = (-t.array() / t_decay).exp();
  const double denom = e.squaredNorm();
  return denom > 0.0 ? e.dot(y) / denom : 0.0;
}

// Log-linear regression slope -> decay time; 0 when not a decay.
double log_slope_time(const Eigen::VectorXd& t, const Eigen::VectorXd& y) {
  double st = 0, sl = 0, stt = 0, stl = 0;
  int m = 0;
  for (int i = 0; i < t.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double l = std::log(y[i]);
    st += t[i];
    sl += l;
    stt += t[i] * t[i];
    stl += t[i] * l;
    ++m;
  }
  if (m < 2) return 0.0;
  const double det = m * stt - st * st;
  if (det == 0.0) return 0.0;
  const double slope = (m * stl - st * sl) / det;
  return slope < 0.0 ? -1.0 / slope : 0.0;
}

struct GaussNewton {
  // Model callbacks fill residual r(p) and Jacobian J(p).
  int n_params;
  std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&,
                     Eigen::MatrixXd&)>
      eval;
  std::function<bool(const Eigen::VectorXd&)> feasible;

  int iterations = 0;
  Eigen::MatrixXd jtj;

  Eigen::VectorXd solve(Eigen::VectorXd p, int n_data) {
    Eigen::VectorXd r(n_data), r_try(n_data);
    Eigen::MatrixXd j(n_data, n_params), j_unused(n_data, n_params);
    eval(p, r, j);
    double cost = sum_sq(r);
    for (iterations = 0; iterations < kMaxIterations; ++iterations) {
      jtj = j.transpose() * j;
      const Eigen::VectorXd g = j.transpose() * r;
      // Rank-deficient normal equations (e.g. a_l pinned at zero) take the
      // minimum-norm step.
      const Eigen::VectorXd step =
          jtj.completeOrthogonalDecomposition().solve(-g);
      const double scale = p.cwiseAbs().maxCoeff() + 1.0;
      if (step.cwiseAbs().maxCoeff() < kStepTol * scale) return p;
      double lambda = 1.0;
      bool improved = false;
      while (lambda > 1e-10) {
        const Eigen::VectorXd cand = p + lambda * step;
        if (feasible(cand)) {
          eval(cand, r_try, j_unused);
          const double cost_try = sum_sq(r_try);
          if (cost_try < cost * (1.0 + 1e-15)) {
            if (std::abs(cost - cost_try) < 1e-15 * (cost + 1e-300)) {
              return cand;  // flat to machine precision
            }
            p = cand;
            cost = cost_try;
            r.swap(r_try);
            eval(p, r, j);
            improved = true;
            break;
          }
        }
        lambda *= 0.5;
      }
      if (!improved) return p;  // backtracking exhausted at a minimum
    }
    throw FitDidNotConverge("Gauss-Newton did not converge in " +
                            std::to_string(kMaxIterations) + " iterations");
  }
};

}  // namespace

FitResult fit_double_exponential(const core::EchoTrain& train,
                                 double t_short_fixed) {
  std::vector<double> t, y;
  t.reserve(train.entries.size());
  y.reserve(train.entries.size());
  for (const core::EchoEntry& e : train.entries) {
    t.push_back(e.t);
    y.push_back(std::abs(e.amp));
  }
  return fit_double_exponential(t, y, t_short_fixed);
}

FitResult fit_double_exponential(const std::vector<double>& t_in,
                                 const std::vector<double>& y_in,
                                 double t_short_fixed) {
  if (t_in.size() != y_in.size())
    throw std::invalid_argument("t and y sizes differ");
  const int n = static_cast<int>(t_in.size());
  if (n < 6) throw std::invalid_argument("need at least 6 echoes to fit");
  if (!(t_short_fixed > 0.0))
    throw std::invalid_argument("t_short_fixed must be > 0");
  Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(t_in.data(), n);
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(y_in.data(), n);
  const double ts = t_short_fixed;

  FitResult out;
  out.t_short = ts;
  out.n_points = static_cast<std::size_t>(n);

  // Decays span several orders of magnitude, so the loss is relative:
  // residuals are scaled by max(|y_i|, 1e-3 y_max), which weights the tail
  // like a semilog plot does without letting noise-floor points dominate.
  const double y_max = y.cwiseAbs().maxCoeff();
  if (!(y_max > 0.0))
    throw std::invalid_argument("all echo amplitudes are zero");
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s[i] = std::max(std::abs(y[i]), 1e-3 * y_max);

  // Best pure single exponential at the fixed rate; collapse fallback and
  // seed for the initial guesses.
  const double a_single = fixed_rate_amplitude(t, y, ts);
  const Eigen::VectorXd r_single =
      a_single * (-t.array() / ts).exp().matrix() - y;

  // The noise floor is the pointwise residual scatter where a tail would
  // live: t > 3 t_short, after the accepted model is removed. A floor taken
  // against the single exponential would count the tail itself as noise.
  const auto late_rms = [&](const Eigen::VectorXd& r_amp) {
    double ss = 0.0;
    int m = 0;
    for (int i = 0; i < n; ++i)
      if (t[i] > 3.0 * ts) {
        ss += r_amp[i] * r_amp[i];
        ++m;
      }
    if (m >= 4) return std::sqrt(ss / m);
    return std::sqrt(sum_sq(r_amp) / n);
  };

  // Initial guesses: a_s from the first echo, t_l from the log slope of
  // the last third, a_l from the last echo given that t_l.
  const int third = std::max(2, n / 3);
  double tl0 = log_slope_time(t.tail(third), y.tail(third));
  if (tl0 <= 2.0 * ts) tl0 = 10.0 * ts;
  const double as0 = y[0] * std::exp(t[0] / ts);
  const double late = y[n - 1] - as0 * std::exp(-t[n - 1] / ts);
  double al0 = late * std::exp(std::min(t[n - 1] / tl0, 50.0));
  if (!(al0 > 0.0)) al0 = 1e-6 * std::max(as0, 1e-300);

  GaussNewton gn;
  gn.n_params = 3;
  gn.eval = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r,
                Eigen::MatrixXd& j) {
    const double a_s = p[0], a_l = p[1], t_l = p[2];
    for (int i = 0; i < n; ++i) {
      const double es = std::exp(-t[i] / ts);
      const double el = std::exp(-t[i] / t_l);
      r[i] = (a_s * es + a_l * el - y[i]) / s[i];
      j(i, 0) = es / s[i];
      j(i, 1) = el / s[i];
      j(i, 2) = a_l * el * t[i] / (t_l * t_l) / s[i];
    }
  };
  gn.feasible = [](const Eigen::VectorXd& p) {
    return p[2] > 0.0 && std::isfinite(p[0]) && std::isfinite(p[1]) &&
           std::isfinite(p[2]);
  };
  Eigen::VectorXd p0(3);
  p0 << as0, al0, tl0;
  Eigen::VectorXd p;
  bool collapsed = false;
  try {
    p = gn.solve(p0, n);
    // A "long" component no slower than 2 t_short is not a tail; the
    // amplitude split in that regime is ill-conditioned noise.
    collapsed = p[2] < 2.0 * ts;
  } catch (const FitDidNotConverge&) {
    collapsed = true;
  }
  if (collapsed) {
    // Data is consistent with the fixed-rate single exponential alone.
    out.a_s = std::max(a_single, 0.0);
    out.a_l = 0.0;
    out.t_l = 10.0 * ts;
    out.a_l_tail = 0.0;
    out.t_l_tail = out.t_l;
    out.residual_rms = std::sqrt(sum_sq(r_single) / n);
    out.noise_floor = late_rms(r_single);
    out.tail_absent = true;
    out.iterations = gn.iterations;
    const double denom = (-t.array() * 2.0 / ts).exp().sum();
    if (n > 1 && denom > 0.0)
      out.std_error[0] = std::sqrt(sum_sq(r_single) / (n - 1) / denom);
    return out;
  }

  out.a_s = std::max(p[0], 0.0);
  out.a_l = std::max(p[1], 0.0);
  out.t_l = p[2];
  out.iterations = gn.iterations;

  Eigen::VectorXd r(n);
  Eigen::MatrixXd j(n, 3);
  gn.eval(p, r, j);
  // residual_rms is reported in amplitude units for comparability with the
  // noise floor; the covariance uses the weighted system that was solved.
  Eigen::VectorXd r_amp(n);
  for (int i = 0; i < n; ++i) r_amp[i] = r[i] * s[i];
  out.residual_rms = std::sqrt(sum_sq(r_amp) / n);
  out.noise_floor = late_rms(r_amp);
  if (n > 3) {
    const double sigma2 = sum_sq(r) / (n - 3);
    const Eigen::MatrixXd cov =
        sigma2 * (j.transpose() * j)
                     .completeOrthogonalDecomposition()
                     .pseudoInverse();
    for (int i = 0; i < 3; ++i)
      out.std_error[static_cast<std::size_t>(i)] =
          std::sqrt(std::max(cov(i, i), 0.0));
  }

  // Present means: above the pointwise scatter where it lives, and
  // resolved at 5 sigma by the integrated fit.
  out.tail_absent =
      out.a_l < out.noise_floor || out.a_l < 5.0 * out.std_error[1];
  out.a_l_tail = out.a_l;
  out.t_l_tail = out.t_l;
  if (!out.tail_absent) {
    // Independent tail estimate: single exponential on t > 3 t_short.
    std::vector<double> tt, ty;
    for (int i = 0; i < n; ++i)
      if (t[i] > 3.0 * ts) {
        tt.push_back(t[i]);
        ty.push_back(y[i]);
      }
    if (tt.size() >= 3) {
      Eigen::VectorXd t2 =
          Eigen::Map<const Eigen::VectorXd>(tt.data(), tt.size());
      Eigen::VectorXd y2 =
          Eigen::Map<const Eigen::VectorXd>(ty.data(), ty.size());
      const double y2_max = y2.cwiseAbs().maxCoeff();
      Eigen::VectorXd s2(t2.size());
      for (int i = 0; i < t2.size(); ++i)
        s2[i] = std::max(std::abs(y2[i]), 1e-3 * std::max(y2_max, 1e-300));
      double tl_t0 = log_slope_time(t2, y2);
      if (tl_t0 <= 0.0) tl_t0 = out.t_l;
      GaussNewton tail;
      tail.n_params = 2;
      tail.eval = [&](const Eigen::VectorXd& q, Eigen::VectorXd& r2,
                      Eigen::MatrixXd& j2) {
        for (int i = 0; i < t2.size(); ++i) {
          const double el = std::exp(-t2[i] / q[1]);
          r2[i] = (q[0] * el - y2[i]) / s2[i];
          j2(i, 0) = el / s2[i];
          j2(i, 1) = q[0] * el * t2[i] / (q[1] * q[1]) / s2[i];
        }
      };
      tail.feasible = [](const Eigen::VectorXd& q) {
        return q[1] > 0.0 && std::isfinite(q[0]) && std::isfinite(q[1]);
      };
      Eigen::VectorXd q0(2);
      q0 << fixed_rate_amplitude(t2, y2, tl_t0), tl_t0;
      try {
        const Eigen::VectorXd q =
            tail.solve(q0, static_cast<int>(t2.size()));
        out.a_l_tail = std::max(q[0], 0.0);
        out.t_l_tail = q[1];
      } catch (const FitDidNotConverge&) {
        // Secondary estimate only; keep the full-fit values.
      }
    }
  }
  return out;
}

QuadraticFit fit_quadratic_gradient(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4)
    throw DegenerateDesign("need at least 4 (G, ratio) points");
  std::vector<double> distinct;
  for (const auto& [g, ratio] : points) {
    (void)ratio;
    bool seen = false;
    for (double v : distinct) seen = seen || v == g;
    if (!seen) distinct.push_back(g);
  }
  if (distinct.size() < 3)
    throw DegenerateDesign("need at least 3 distinct gradient values");

  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [g, ratio] : points) {
    const double x = g * g;
    sx += x;
    sy += ratio;
    sxx += x * x;
    sxy += x * ratio;
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0)
    throw DegenerateDesign("gradient design matrix is singular");
  QuadraticFit fit;
  fit.a = (n * sxy - sx * sy) / det;
  fit.b = (sy - fit.a * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (const auto& [g, ratio] : points) {
    const double e = fit.a * g * g + fit.b - ratio;
    ss_res += e * e;
    ss_tot += (ratio - mean) * (ratio - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::string fit_result_to_json(const FitResult& fit) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["model"] = "a_s*exp(-t/t_short) + a_l*exp(-t/t_l)";
  j["a_s"] = fit.a_s;
  j["a_l"] = fit.a_l;
  j["t_short"] = fit.t_short;
  j["t_l"] = fit.t_l;
  j["a_l_tail"] = fit.a_l_tail;
  j["t_l_tail"] = fit.t_l_tail;
  j["tail_fraction"] = fit.tail_fraction();
  j["residual_rms"] = fit.residual_rms;
  j["noise_floor"] = fit.noise_floor;
  j["tail_absent"] = fit.tail_absent;
  j["iterations"] = fit.iterations;
  j["n_points"] = fit.n_points;
  j["std_error"] = {{"a_s", fit.std_error[0]},
                    {"a_l", fit.std_error[1]},
                    {"t_l", fit.std_error[2]}};
  return j.dump(2);
}

}  // namespace echotrain::analysis
