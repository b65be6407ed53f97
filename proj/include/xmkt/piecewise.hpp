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
#include "xmkt/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xmkt {

/**
 * Piecewise polynomial on [0,1] with no sign restriction.
 *
 * Piece k covers [breakpoints[k], breakpoints[k+1]) and its coefficients are
 * expressed in the global variable t, not in a local offset. The last piece
 * is closed on the right. Used for objectives and cumulative integrals; see
 * PiecewisePolynomial for the nonnegative density type.
 */
class Piecewise
{
public:
  Piecewise()
    : Piecewise({0.0, 1.0}, {Coefficients{0.0}})
  {}

  Piecewise(std::vector<double> breakpoints, std::vector<Coefficients> pieces)
    : breakpoints_(std::move(breakpoints))
    , pieces_(std::move(pieces))
  {
    if (breakpoints_.size() < 2)
    {
      throw InvariantError("piecewise: need at least two breakpoints");
    }
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
    {
      throw InvariantError("piecewise: breakpoints must start at 0 and end at 1");
    }
    for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k)
    {
      if (!(breakpoints_[k] < breakpoints_[k + 1]))
      {
        throw InvariantError("piecewise: breakpoints must be strictly increasing");
      }
    }
    if (pieces_.size() + 1 != breakpoints_.size())
    {
      throw InvariantError("piecewise: number of pieces must equal number of breakpoints - 1");
    }
    for (auto &piece : pieces_)
    {
      if (piece.empty())
      {
        piece.push_back(0.0);
      }
      for (double c : piece)
      {
        if (!std::isfinite(c))
        {
          throw InvariantError("piecewise: non-finite coefficient");
        }
      }
    }
  }

  static Piecewise constant(double value)
  {
    return Piecewise({0.0, 1.0}, {Coefficients{value}});
  }

  std::vector<double> const &breakpoints() const noexcept
  {
    return breakpoints_;
  }

  std::vector<Coefficients> const &pieces() const noexcept
  {
    return pieces_;
  }

  std::size_t piece_count() const noexcept
  {
    return pieces_.size();
  }

  /// Index of the piece holding t; interior breakpoints belong to the piece on their right.
  std::size_t locate(double t) const
  {
    auto const it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    auto       k  = static_cast<std::size_t>(it - breakpoints_.begin());
    k             = k == 0 ? 0 : k - 1;
    return std::min(k, pieces_.size() - 1);
  }

  double operator()(double t) const
  {
    if (!(t >= 0.0 && t <= 1.0))
    {
      throw DomainError("eval: t = " + std::to_string(t) + " outside [0,1]");
    }
    return horner(pieces_[locate(t)], t);
  }

  /// Exact integral over [a, b] through per-piece antiderivatives.
  double integral(double a, double b) const
  {
    if (!(a >= 0.0 && b <= 1.0))
    {
      throw DomainError("integrate: bounds outside [0,1]");
    }
    if (a > b)
    {
      throw DomainError("integrate: lower bound exceeds upper bound");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
    {
      double const lo = std::max(a, breakpoints_[k]);
      double const hi = std::min(b, breakpoints_[k + 1]);
      if (hi <= lo)
      {
        continue;
      }
      Coefficients const anti = antiderivative(pieces_[k]);
      total += horner(anti, hi) - horner(anti, lo);
    }
    return total;
  }

  /// The running integral t -> integral over [0, t], on the same breakpoints.
  Piecewise cumulative() const
  {
    std::vector<Coefficients> out;
    out.reserve(pieces_.size());
    double carried = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
    {
      Coefficients anti = antiderivative(pieces_[k]);
      double const base = horner(anti, breakpoints_[k]);
      anti[0]           = carried - base;
      carried           = horner(anti, breakpoints_[k + 1]);
      out.push_back(std::move(anti));
    }
    return Piecewise(breakpoints_, std::move(out));
  }

  /// Same function on the union of the current breakpoints and `extra`.
  Piecewise refined(std::span<double const> extra) const
  {
    std::vector<double> merged(breakpoints_);
    for (double t : extra)
    {
      if (t > 0.0 && t < 1.0)
      {
        merged.push_back(t);
      }
    }
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    std::vector<Coefficients> out;
    out.reserve(merged.size() - 1);
    for (std::size_t k = 0; k + 1 < merged.size(); ++k)
    {
      out.push_back(pieces_[locate(merged[k])]);
    }
    return Piecewise(std::move(merged), std::move(out));
  }

  Piecewise scaled(double k) const
  {
    std::vector<Coefficients> out(pieces_);
    for (auto &piece : out)
    {
      for (double &c : piece)
      {
        c *= k;
      }
    }
    return Piecewise(breakpoints_, std::move(out));
  }

  friend Piecewise operator+(Piecewise const &lhs, Piecewise const &rhs)
  {
    Piecewise const a = lhs.refined(rhs.breakpoints_);
    Piecewise const b = rhs.refined(lhs.breakpoints_);

    std::vector<Coefficients> out(a.pieces_.size());
    for (std::size_t k = 0; k < out.size(); ++k)
    {
      auto const &p = a.pieces_[k];
      auto const &q = b.pieces_[k];
      out[k].assign(std::max(p.size(), q.size()), 0.0);
      for (std::size_t j = 0; j < p.size(); ++j)
      {
        out[k][j] += p[j];
      }
      for (std::size_t j = 0; j < q.size(); ++j)
      {
        out[k][j] += q[j];
      }
    }
    return Piecewise(a.breakpoints_, std::move(out));
  }

  friend Piecewise operator-(Piecewise const &lhs, Piecewise const &rhs)
  {
    return lhs + rhs.scaled(-1.0);
  }

  /// Global maximum on [0,1], smallest maximizer on ties.
  Maximum maximize() const
  {
    Maximum best{};
    bool    first = true;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
    {
      Maximum const m = argmax_polynomial(pieces_[k], breakpoints_[k], breakpoints_[k + 1]);
      if (first || m.value > best.value + kTieTolerance)
      {
        best  = m;
        first = false;
      }
      else if (m.value > best.value)
      {
        // Within the tie band: keep the earlier t, track the larger value.
        best.value = m.value;
      }
    }
    return best;
  }

  /// Global minimum value on [0,1].
  double minimum() const
  {
    return -scaled(-1.0).maximize().value;
  }

  /// Largest absolute coefficient; a scale for tolerance checks.
  double magnitude() const noexcept
  {
    double m = 0.0;
    for (auto const &piece : pieces_)
    {
      for (double c : piece)
      {
        m = std::max(m, std::abs(c));
      }
    }
    return m;
  }

private:
  std::vector<double>       breakpoints_;
  std::vector<Coefficients> pieces_;
};

/**
 * Nonnegative piecewise polynomial on [0,1]: a valuation density v(t) or a
 * weight c(t). Nonnegativity is verified per piece at construction.
 */
class PiecewisePolynomial
{
public:
  PiecewisePolynomial()
    : curve_()
  {}

  PiecewisePolynomial(std::vector<double> breakpoints, std::vector<Coefficients> pieces)
    : PiecewisePolynomial(Piecewise(std::move(breakpoints), std::move(pieces)))
  {}

  explicit PiecewisePolynomial(Piecewise curve)
    : curve_(std::move(curve))
  {
    double const floor = -1e-12 * (1.0 + curve_.magnitude());
    double const low   = curve_.minimum();
    if (low < floor)
    {
      throw InvariantError("piecewise polynomial: negative value " + std::to_string(low) +
                           " on [0,1]; densities must be nonnegative");
    }
  }

  static PiecewisePolynomial constant(double value)
  {
    return PiecewisePolynomial({0.0, 1.0}, {Coefficients{value}});
  }

  /// a + b t on [0,1].
  static PiecewisePolynomial linear(double a, double b)
  {
    return PiecewisePolynomial({0.0, 1.0}, {Coefficients{a, b}});
  }

  Piecewise const &curve() const noexcept
  {
    return curve_;
  }

  std::vector<double> const &breakpoints() const noexcept
  {
    return curve_.breakpoints();
  }

  std::vector<Coefficients> const &pieces() const noexcept
  {
    return curve_.pieces();
  }

private:
  Piecewise curve_;
};

inline double eval(PiecewisePolynomial const &pp, double t)
{
  return pp.curve()(t);
}

inline double integrate(PiecewisePolynomial const &pp, double a, double b)
{
  return pp.curve().integral(a, b);
}

inline PiecewisePolynomial scale(PiecewisePolynomial const &pp, double k)
{
  if (!(k >= 0.0) || !std::isfinite(k))
  {
    throw DomainError("scale: factor must be a finite nonnegative number");
  }
  return PiecewisePolynomial(pp.curve().scaled(k));
}

}  // namespace xmkt
