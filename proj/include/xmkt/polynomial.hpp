#pragma once
//------------------------------------------------------------------------------
//
//   Copyright 2026 The xmkt Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

// Dense univariate polynomials over doubles. Coefficients are stored in
// ascending powers: {c0, c1, c2} is c0 + c1 t + c2 t^2.

#include "xmkt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace xmkt {

using Coefficients = std::vector<double>;

/// Absolute tolerance on t for every root isolated by bisection.
inline constexpr double kRootTolerance = 1e-12;

/// Two candidate maxima closer than this are considered tied.
inline constexpr double kTieTolerance = 1e-12;

struct Maximum
{
  double t{0.0};
  double value{0.0};
};

/// Index of the highest nonzero coefficient; 0 for the zero polynomial.
inline std::size_t degree(std::span<double const> coeffs)
{
  std::size_t d = coeffs.size();
  while (d > 1 && coeffs[d - 1] == 0.0)
  {
    --d;
  }
  return d == 0 ? 0 : d - 1;
}

inline double horner(std::span<double const> coeffs, double t)
{
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
  {
    acc = acc * t + *it;
  }
  return acc;
}

inline Coefficients derivative(std::span<double const> coeffs)
{
  if (coeffs.size() <= 1)
  {
    return {0.0};
  }
  Coefficients out(coeffs.size() - 1);
  for (std::size_t k = 1; k < coeffs.size(); ++k)
  {
    out[k - 1] = static_cast<double>(k) * coeffs[k];
  }
  return out;
}

/// Antiderivative with zero constant term.
inline Coefficients antiderivative(std::span<double const> coeffs)
{
  Coefficients out(coeffs.size() + 1, 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
  {
    out[k + 1] = coeffs[k] / static_cast<double>(k + 1);
  }
  return out;
}

namespace detail {

inline double bisect_root(std::span<double const> coeffs, double lo, double hi, double f_lo)
{
  for (int iter = 0; iter < 400 && hi - lo > kRootTolerance; ++iter)
  {
    double const mid   = 0.5 * (lo + hi);
    double const f_mid = horner(coeffs, mid);
    if (f_mid == 0.0)
    {
      return mid;
    }
    if ((f_mid < 0.0) == (f_lo < 0.0))
    {
      lo   = mid;
      f_lo = f_mid;
    }
    else
    {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline void collect_roots(std::span<double const> coeffs, double lo, double hi,
                          std::vector<double> &out)
{
  std::size_t const d = degree(coeffs);
  if (d == 0)
  {
    return;
  }
  if (d == 1)
  {
    double const r = -coeffs[0] / coeffs[1];
    if (r >= lo && r <= hi)
    {
      out.push_back(r);
    }
    return;
  }

  // Between consecutive critical points the polynomial is monotone, so each
  // such segment holds at most one sign change.
  Coefficients const  deriv = derivative(coeffs.first(d + 1));
  std::vector<double> points{lo};
  collect_roots(deriv, lo, hi, points);
  points.push_back(hi);
  std::sort(points.begin(), points.end());

  for (std::size_t k = 0; k + 1 < points.size(); ++k)
  {
    double const p = points[k];
    double const q = points[k + 1];
    if (q <= p)
    {
      continue;
    }
    double const fp = horner(coeffs, p);
    double const fq = horner(coeffs, q);
    if (fp == 0.0)
    {
      out.push_back(p);
    }
    else if ((fp < 0.0) != (fq < 0.0) && fq != 0.0)
    {
      out.push_back(bisect_root(coeffs, p, q, fp));
    }
  }
  if (horner(coeffs, hi) == 0.0)
  {
    out.push_back(hi);
  }
}

}  // namespace detail

/// Real roots of the polynomial on [lo, hi], sorted, each located to kRootTolerance.
inline std::vector<double> real_roots(std::span<double const> coeffs, double lo, double hi)
{
  if (lo > hi)
  {
    throw DomainError("real_roots: empty interval");
  }
  std::vector<double> roots;
  detail::collect_roots(coeffs, lo, hi, roots);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) <= kRootTolerance; }),
              roots.end());
  return roots;
}

/**
 * Global maximum of a polynomial on [lo, hi].
 *
 * Candidates are both endpoints and every real root of the derivative inside
 * the interval. Among candidates whose values lie within kTieTolerance of the
 * best, the smallest t wins.
 */
inline Maximum argmax_polynomial(std::span<double const> coeffs, double lo, double hi)
{
  if (!(lo <= hi))
  {
    throw DomainError("argmax_polynomial: empty interval");
  }

  auto const pick = [&](std::span<double const> points) {
    double top = -std::numeric_limits<double>::infinity();
    for (double t : points)
    {
      top = std::max(top, horner(coeffs, t));
    }
    Maximum best{hi, horner(coeffs, hi)};
    for (double t : points)
    {
      double const v = horner(coeffs, t);
      if (v >= top - kTieTolerance && t <= best.t)
      {
        best = {t, v};
      }
    }
    return best;
  };

  std::size_t const d = degree(coeffs);
  if (d <= 2)
  {
    double      points[3] = {lo, hi, lo};
    std::size_t count     = 2;
    if (d == 2)
    {
      // Stationary point of a quadratic, solved in closed form.
      double const vertex = -coeffs[1] / (2.0 * coeffs[2]);
      if (vertex > lo && vertex < hi)
      {
        points[count++] = vertex;
      }
    }
    return pick(std::span<double const>(points, count));
  }

  std::vector<double> points{lo, hi};
  Coefficients const  deriv = derivative(coeffs.first(d + 1));
  detail::collect_roots(deriv, lo, hi, points);
  return pick(points);
}

}  // namespace xmkt
