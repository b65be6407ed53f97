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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace xmkt {

struct NelderMeadOptions
{
  double      reflection{1.0};
  double      expansion{2.0};
  double      contraction{0.5};
  double      shrink{0.5};
  double      diameter_tolerance{1e-3};
  std::size_t max_iterations{200};
};

struct NelderMeadResult
{
  std::vector<double> x;
  double              value{0.0};
  std::size_t         iterations{0};
};

/**
 * Derivative-free minimisation inside a box.
 *
 * Trial points are clamped into [lower, upper] before evaluation. Stops once
 * the largest vertex distance drops below the tolerance or after
 * max_iterations.
 */
template <typename F>
NelderMeadResult nelder_mead(F &&f, std::vector<double> start, std::vector<double> step,
                             std::vector<double> const &lower, std::vector<double> const &upper,
                             NelderMeadOptions const &opt = {})
{
  std::size_t const dim = start.size();
  auto const clamp = [&](std::vector<double> x) {
    for (std::size_t d = 0; d < dim; ++d)
    {
      x[d] = std::clamp(x[d], lower[d], upper[d]);
    }
    return x;
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double>              values;
  simplex.push_back(clamp(start));
  for (std::size_t d = 0; d < dim; ++d)
  {
    auto vertex = start;
    vertex[d] += step[d];
    if (vertex[d] > upper[d])
    {
      vertex[d] = start[d] - step[d];
    }
    simplex.push_back(clamp(vertex));
  }
  for (auto const &v : simplex)
  {
    values.push_back(f(v));
  }

  auto const diameter = [&] {
    double widest = 0.0;
    for (std::size_t a = 0; a < simplex.size(); ++a)
    {
      for (std::size_t b = a + 1; b < simplex.size(); ++b)
      {
        double sq = 0.0;
        for (std::size_t d = 0; d < dim; ++d)
        {
          sq += (simplex[a][d] - simplex[b][d]) * (simplex[a][d] - simplex[b][d]);
        }
        widest = std::max(widest, std::sqrt(sq));
      }
    }
    return widest;
  };

  auto const along = [&](std::vector<double> const &from, std::vector<double> const &to,
                         double coeff) {
    std::vector<double> out(dim);
    for (std::size_t d = 0; d < dim; ++d)
    {
      out[d] = from[d] + coeff * (to[d] - from[d]);
    }
    return clamp(std::move(out));
  };

  std::size_t iter = 0;
  for (; iter < opt.max_iterations && diameter() >= opt.diameter_tolerance; ++iter)
  {
    std::vector<std::size_t> order(simplex.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::size_t const best   = order.front();
    std::size_t const worst  = order.back();
    std::size_t const second = order[order.size() - 2];

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t k = 0; k < simplex.size(); ++k)
    {
      if (k == worst)
      {
        continue;
      }
      for (std::size_t d = 0; d < dim; ++d)
      {
        centroid[d] += simplex[k][d] / static_cast<double>(dim);
      }
    }

    auto const   reflected = along(centroid, simplex[worst], -opt.reflection);
    double const f_r       = f(reflected);
    if (f_r < values[best])
    {
      auto const   expanded = along(centroid, simplex[worst], -opt.expansion);
      double const f_e      = f(expanded);
      if (f_e < f_r)
      {
        simplex[worst] = expanded;
        values[worst]  = f_e;
      }
      else
      {
        simplex[worst] = reflected;
        values[worst]  = f_r;
      }
      continue;
    }
    if (f_r < values[second])
    {
      simplex[worst] = reflected;
      values[worst]  = f_r;
      continue;
    }

    bool const   outside    = f_r < values[worst];
    auto const   contracted = outside ? along(centroid, reflected, opt.contraction)
                                      : along(centroid, simplex[worst], opt.contraction);
    double const f_c        = f(contracted);
    if (f_c < (outside ? f_r : values[worst]))
    {
      simplex[worst] = contracted;
      values[worst]  = f_c;
      continue;
    }

    for (std::size_t k = 0; k < simplex.size(); ++k)
    {
      if (k == best)
      {
        continue;
      }
      simplex[k] = along(simplex[best], simplex[k], opt.shrink);
      values[k]  = f(simplex[k]);
    }
  }

  auto const argmin = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  return {simplex[argmin], values[argmin], iter};
}

}  // namespace xmkt
