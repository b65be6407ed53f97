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

#include <stdexcept>
#include <string>

namespace xmkt {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation (t outside [0,1], a > b, k < 0, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// A value violates a structural invariant of a domain type.
class InvariantError : public Error
{
public:
  using Error::Error;
};

/// Agent data does not fit the model a mechanism expects (unresolved theta, mixed models).
class ModelError : public Error
{
public:
  using Error::Error;
};

/// A prior is unusable: zero density inside the support, bad table, ...
class DistributionError : public Error
{
public:
  using Error::Error;
};

/// A mechanism precondition is not met (e.g. a prior fails the hazard-rate check).
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// Malformed input text.
class ParseError : public Error
{
public:
  using Error::Error;
};

}  // namespace xmkt
