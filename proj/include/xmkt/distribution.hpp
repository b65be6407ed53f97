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

#include "xmkt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace xmkt {

/// Grid used for the hazard-rate check cached on every Distribution.
inline constexpr std::size_t kDefaultMhrGrid = 1001;

struct MhrViolation
{
  double theta_lo{0.0};
  double theta_hi{0.0};
  double phi_lo{0.0};
  double phi_hi{0.0};
};

struct MhrReport
{
  bool                        pass{true};
  std::optional<MhrViolation> violation;
};

/**
 * Prior over a single-parameter type theta, supported on [a, b].
 *
 * Two kinds: uniform(a, b), and a tabulated pdf on strictly increasing nodes
 * with linear interpolation between nodes. Table densities are normalised so
 * the trapezoid mass is one; the cdf is the exact integral of the
 * interpolant.
 */
class Distribution
{
public:
  enum class Kind
  {
    Uniform,
    Table
  };

  static Distribution uniform(double a, double b)
  {
    if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0)
    {
      throw InvariantError("distribution: support bounds must be finite with a >= 0");
    }
    if (!(a < b))
    {
      throw InvariantError("distribution: support requires a < b");
    }
    Distribution d;
    d.kind_   = Kind::Uniform;
    d.thetas_ = {a, b};
    d.pdf_    = {1.0 / (b - a), 1.0 / (b - a)};
    d.cdf_    = {0.0, 1.0};
    d.mhr_    = true;
    return d;
  }

  static Distribution table(std::vector<double> thetas, std::vector<double> pdf)
  {
    if (thetas.size() < 2 || thetas.size() != pdf.size())
    {
      throw InvariantError("distribution: table needs >= 2 nodes and one pdf value per node");
    }
    if (!std::isfinite(thetas.front()) || thetas.front() < 0.0)
    {
      throw InvariantError("distribution: table support must start at a >= 0");
    }
    for (std::size_t k = 0; k + 1 < thetas.size(); ++k)
    {
      if (!(thetas[k] < thetas[k + 1]) || !std::isfinite(thetas[k + 1]))
      {
        throw InvariantError("distribution: table thetas must be finite and strictly increasing");
      }
    }
    for (double f : pdf)
    {
      if (!(f >= 0.0) || !std::isfinite(f))
      {
        throw InvariantError("distribution: table pdf must be finite and >= 0");
      }
    }

    std::vector<double> cdf(thetas.size(), 0.0);
    for (std::size_t k = 0; k + 1 < thetas.size(); ++k)
    {
      cdf[k + 1] = cdf[k] + 0.5 * (pdf[k] + pdf[k + 1]) * (thetas[k + 1] - thetas[k]);
    }
    double const mass = cdf.back();
    if (!(mass > 0.0))
    {
      throw InvariantError("distribution: table pdf has zero mass");
    }
    for (std::size_t k = 0; k < pdf.size(); ++k)
    {
      pdf[k] /= mass;
      cdf[k] /= mass;
    }
    cdf.back() = 1.0;

    Distribution d;
    d.kind_   = Kind::Table;
    d.thetas_ = std::move(thetas);
    d.pdf_    = std::move(pdf);
    d.cdf_    = std::move(cdf);
    d.mhr_    = d.compute_mhr(kDefaultMhrGrid).pass;
    return d;
  }

  Kind kind() const noexcept
  {
    return kind_;
  }

  double lower() const noexcept
  {
    return thetas_.front();
  }

  double upper() const noexcept
  {
    return thetas_.back();
  }

  /// Table nodes (or {a, b} for uniform).
  std::vector<double> const &thetas() const noexcept
  {
    return thetas_;
  }

  /// Normalised pdf values at the nodes.
  std::vector<double> const &densities() const noexcept
  {
    return pdf_;
  }

  double pdf(double theta) const
  {
    if (theta < lower() || theta > upper())
    {
      return 0.0;
    }
    std::size_t const k = segment(theta);
    double const      s = (theta - thetas_[k]) / (thetas_[k + 1] - thetas_[k]);
    return pdf_[k] + s * (pdf_[k + 1] - pdf_[k]);
  }

  double cdf(double theta) const
  {
    if (theta <= lower())
    {
      return 0.0;
    }
    if (theta >= upper())
    {
      return 1.0;
    }
    if (kind_ == Kind::Uniform)
    {
      return (theta - lower()) / (upper() - lower());
    }
    std::size_t const k     = segment(theta);
    double const      h     = thetas_[k + 1] - thetas_[k];
    double const      s     = theta - thetas_[k];
    double const      slope = (pdf_[k + 1] - pdf_[k]) / h;
    return std::min(1.0, cdf_[k] + pdf_[k] * s + 0.5 * slope * s * s);
  }

  /// Inverse cdf; u = 0 maps to a and u = 1 to b.
  double quantile(double u) const
  {
    if (!(u >= 0.0 && u <= 1.0))
    {
      throw DomainError("quantile: u must lie in [0,1]");
    }
    if (kind_ == Kind::Uniform)
    {
      return lower() + u * (upper() - lower());
    }
    if (u <= 0.0)
    {
      return lower();
    }
    if (u >= 1.0)
    {
      return upper();
    }
    auto const  it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    std::size_t k  = static_cast<std::size_t>(it - cdf_.begin());
    k              = std::min(k == 0 ? 0 : k - 1, thetas_.size() - 2);

    double const h     = thetas_[k + 1] - thetas_[k];
    double const slope = (pdf_[k + 1] - pdf_[k]) / h;
    double const rest  = u - cdf_[k];
    // Positive root of 0.5 slope s^2 + f_k s - rest = 0, in cancellation-free form.
    double const disc = std::max(0.0, pdf_[k] * pdf_[k] + 2.0 * slope * rest);
    double const den  = pdf_[k] + std::sqrt(disc);
    double const s    = den > 0.0 ? 2.0 * rest / den : 0.0;
    return std::clamp(thetas_[k] + s, thetas_[k], thetas_[k + 1]);
  }

  /**
   * Virtual valuation theta - (1 - F(theta)) / f(theta).
   *
   * Below the support the value continues linearly with slope one from
   * phi(a); this region is only visited by payment integrals.
   */
  double virtual_value(double theta) const
  {
    if (!std::isfinite(theta) || theta > upper())
    {
      throw DomainError("virtual_value: theta = " + std::to_string(theta) +
                        " above support upper bound " + std::to_string(upper()));
    }
    if (theta < lower())
    {
      return virtual_value(lower()) - (lower() - theta);
    }
    if (kind_ == Kind::Uniform)
    {
      return 2.0 * theta - upper();
    }
    double const tail = 1.0 - cdf(theta);
    if (tail <= 0.0)
    {
      return theta;
    }
    double const f = pdf(theta);
    if (!(f > 0.0))
    {
      throw DistributionError("virtual_value: zero density at theta = " + std::to_string(theta) +
                              " inside the support");
    }
    return theta - tail / f;
  }

  /// Cached result of the hazard-rate check on the default grid.
  bool hazard_rate_monotone() const noexcept
  {
    return mhr_;
  }

  MhrReport compute_mhr(std::size_t grid_size) const
  {
    if (grid_size < 2)
    {
      throw DomainError("check_mhr: grid_size must be >= 2");
    }
    auto const phi = [this](double theta) {
      // A zero density with mass remaining sends the virtual value to -inf.
      double const tail = 1.0 - cdf(theta);
      if (kind_ == Kind::Table && tail > 0.0 && !(pdf(theta) > 0.0))
      {
        return -std::numeric_limits<double>::infinity();
      }
      return virtual_value(theta);
    };

    double const a    = lower();
    double const step = (upper() - a) / static_cast<double>(grid_size - 1);
    double       prev = phi(a);
    double       prev_theta = a;
    for (std::size_t k = 1; k < grid_size; ++k)
    {
      double const theta = k + 1 == grid_size ? upper() : a + step * static_cast<double>(k);
      double const cur   = phi(theta);
      if (cur < prev - 1e-9)
      {
        return {false, MhrViolation{prev_theta, theta, prev, cur}};
      }
      prev       = cur;
      prev_theta = theta;
    }
    return {true, std::nullopt};
  }

  friend bool operator==(Distribution const &, Distribution const &) = default;

private:
  Distribution() = default;

  std::size_t segment(double theta) const
  {
    auto const  it = std::upper_bound(thetas_.begin(), thetas_.end(), theta);
    std::size_t k  = static_cast<std::size_t>(it - thetas_.begin());
    return std::min(k == 0 ? 0 : k - 1, thetas_.size() - 2);
  }

  Kind                kind_{Kind::Uniform};
  std::vector<double> thetas_;
  std::vector<double> pdf_;
  std::vector<double> cdf_;
  bool                mhr_{true};
};

inline double virtual_value(Distribution const &dist, double theta)
{
  return dist.virtual_value(theta);
}

inline MhrReport check_mhr(Distribution const &dist, std::size_t grid_size)
{
  return dist.compute_mhr(grid_size);
}

}  // namespace xmkt
