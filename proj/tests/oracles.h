// Copyright (c) 2026 The svkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference computations for tests. Nothing here calls into the
// code paths it is used to check.

#ifndef SVKIT_TESTS_ORACLES_H_
#define SVKIT_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include <Eigen/Dense>

namespace svkit::oracle {

// ---------------------------------------------------------------- metrics

struct ErrorRates {
  double p_miss;
  double p_fa;
};

// Counts every score directly; accept iff score >= threshold.
inline ErrorRates CountErrors(const std::vector<double>& tgt,
                              const std::vector<double>& non,
                              double threshold) {
  double miss = 0, fa = 0;
  for (double s : tgt) miss += s < threshold ? 1 : 0;
  for (double s : non) fa += s >= threshold ? 1 : 0;
  return {miss / tgt.size(), fa / non.size()};
}

// -inf, every distinct score ascending, +inf.
inline std::vector<double> CandidateThresholds(const std::vector<double>& tgt,
                                               const std::vector<double>& non) {
  std::set<double> s(tgt.begin(), tgt.end());
  s.insert(non.begin(), non.end());
  std::vector<double> out;
  out.push_back(-std::numeric_limits<double>::infinity());
  out.insert(out.end(), s.begin(), s.end());
  out.push_back(std::numeric_limits<double>::infinity());
  return out;
}

inline double BruteEer(const std::vector<double>& tgt,
                       const std::vector<double>& non) {
  const auto th = CandidateThresholds(tgt, non);
  ErrorRates prev = CountErrors(tgt, non, th[0]);
  if (prev.p_miss >= prev.p_fa) return prev.p_miss;
  for (size_t k = 1; k < th.size(); ++k) {
    const ErrorRates cur = CountErrors(tgt, non, th[k]);
    if (cur.p_miss >= cur.p_fa) {
      if (cur.p_miss == cur.p_fa) return cur.p_miss;
      // Intersect the segment prev -> cur with p_miss = p_fa.
      const double a = prev.p_miss - prev.p_fa;
      const double b = cur.p_miss - cur.p_fa;
      const double t = -a / (b - a);
      return prev.p_miss + t * (cur.p_miss - prev.p_miss);
    }
    prev = cur;
  }
  return 1.0;
}

inline double BruteMinDcf(const std::vector<double>& tgt,
                          const std::vector<double>& non, double p,
                          double c_miss = 1.0, double c_fa = 1.0) {
  const double norm = std::min(c_miss * p, c_fa * (1 - p));
  double best = std::numeric_limits<double>::infinity();
  for (double th : CandidateThresholds(tgt, non)) {
    const ErrorRates e = CountErrors(tgt, non, th);
    best = std::min(best, (c_miss * p * e.p_miss + c_fa * (1 - p) * e.p_fa) / norm);
  }
  return best;
}

// ------------------------------------------------------------ eigensolver

// Cyclic Jacobi rotations for a symmetric matrix. Eigenvalues descending,
// eigenvectors in matching columns.
inline void JacobiEigen(Eigen::MatrixXd a, Eigen::VectorXd* values,
                        Eigen::MatrixXd* vectors) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const double t = (theta >= 0 ? 1 : -1) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a(x, x) > a(y, y); });
  values->resize(n);
  vectors->resize(n, n);
  for (int i = 0; i < n; ++i) {
    (*values)[i] = a(order[i], order[i]);
    vectors->col(i) = v.col(order[i]);
  }
}

// Top-k solutions of Sb x = lambda B x via B = L L^T whitening and Jacobi.
inline Eigen::MatrixXd GeneralizedTopK(const Eigen::MatrixXd& sb,
                                       const Eigen::MatrixXd& b, int k) {
  const Eigen::MatrixXd l = b.llt().matrixL();
  const Eigen::MatrixXd linv = l.inverse();
  const Eigen::MatrixXd m = linv * sb * linv.transpose();
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  JacobiEigen(0.5 * (m + m.transpose()), &values, &vectors);
  Eigen::MatrixXd out = linv.transpose() * vectors.leftCols(k);
  for (int c = 0; c < k; ++c) out.col(c).normalize();
  return out;
}

// Largest principal angle (radians) between the column spans of a and b.
inline double MaxPrincipalAngle(const Eigen::MatrixXd& a,
                                const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = a.householderQr().householderQ() *
                             Eigen::MatrixXd::Identity(a.rows(), a.cols());
  const Eigen::MatrixXd qb = b.householderQr().householderQ() *
                             Eigen::MatrixXd::Identity(b.rows(), b.cols());
  // sin of the largest angle is the norm of qb's component outside span(qa);
  // this avoids acos's loss of precision near 1.
  const Eigen::MatrixXd resid = qb - qa * (qa.transpose() * qb);
  const double r = Eigen::JacobiSVD<Eigen::MatrixXd>(resid).singularValues()(0);
  return std::asin(std::min(1.0, r));
}

// -------------------------------------------------------------------- dsp

// Amplitude of a real sinusoid at `hz` by direct correlation. Exact for a
// pure tone when the window holds a whole number of periods.
inline double ToneAmplitude(const std::vector<double>& x, size_t begin,
                            size_t count, double hz, int rate) {
  std::complex<double> acc = 0;
  for (size_t n = 0; n < count; ++n) {
    const double phase = 2 * M_PI * hz * static_cast<double>(n) / rate;
    acc += x[begin + n] * std::complex<double>(std::cos(phase), -std::sin(phase));
  }
  return 2 * std::abs(acc) / static_cast<double>(count);
}

// Frequency (Hz) of the largest DFT bin in a window, O(N^2).
inline double PeakFrequency(const std::vector<double>& x, size_t begin,
                            size_t count, int rate) {
  size_t best = 0;
  double best_mag = -1;
  for (size_t k = 1; k <= count / 2; ++k) {
    std::complex<double> acc = 0;
    for (size_t n = 0; n < count; ++n) {
      const double phase = 2 * M_PI * static_cast<double>(k * n % count) / count;
      acc += x[begin + n] * std::complex<double>(std::cos(phase), -std::sin(phase));
    }
    if (std::abs(acc) > best_mag) {
      best_mag = std::abs(acc);
      best = k;
    }
  }
  return static_cast<double>(best) * rate / static_cast<double>(count);
}

inline double Rms(const std::vector<double>& x, size_t begin, size_t count) {
  double s = 0;
  for (size_t n = 0; n < count; ++n) s += x[begin + n] * x[begin + n];
  return std::sqrt(s / static_cast<double>(count));
}

inline std::vector<double> Sine(double hz, int rate, size_t n,
                                double amplitude = 0.5) {
  std::vector<double> x(n);
  for (size_t i = 0; i < n; ++i)
    x[i] = amplitude * std::sin(2 * M_PI * hz * static_cast<double>(i) / rate);
  return x;
}

// ------------------------------------------------------------- calculus

// Central difference of f with respect to every entry of `x`.
inline Eigen::MatrixXd CentralDifference(
    const std::function<double(const Eigen::MatrixXd&)>& f, Eigen::MatrixXd x,
    double h) {
  Eigen::MatrixXd g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double orig = x(i, j);
      x(i, j) = orig + h;
      const double up = f(x);
      x(i, j) = orig - h;
      const double down = f(x);
      x(i, j) = orig;
      g(i, j) = (up - down) / (2 * h);
    }
  }
  return g;
}

// max |a - b| / max(|a|, |b|, floor) over entries.
inline double MaxRelativeError(const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b, double floor = 1e-6) {
  double worst = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double denom =
          std::max({std::abs(a(i, j)), std::abs(b(i, j)), floor});
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
    }
  return worst;
}

// Entrywise relative error with the floor tied to the gradient's scale, so
// entries that are zero up to roundoff do not dominate.
inline double GradientRelativeError(const Eigen::MatrixXd& analytic,
                                    const Eigen::MatrixXd& numeric) {
  const double scale = std::max(analytic.cwiseAbs().maxCoeff(),
                                numeric.cwiseAbs().maxCoeff());
  return MaxRelativeError(analytic, numeric, std::max(1e-3 * scale, 1e-12));
}

// -------------------------------------------------------------- fixtures

inline std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() /
             ("svkit_test_" + name + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Eigen::MatrixXd RandomNormal(Eigen::Index rows, Eigen::Index cols,
                                    std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = g(rng);
  return m;
}

}  // namespace svkit::oracle

#endif  // SVKIT_TESTS_ORACLES_H_
