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

// Everything at once.

#pragma once

#include "xmkt/ama.hpp"
#include "xmkt/commands.hpp"
#include "xmkt/distribution.hpp"
#include "xmkt/errors.hpp"
#include "xmkt/model.hpp"
#include "xmkt/myerson.hpp"
#include "xmkt/nelder_mead.hpp"
#include "xmkt/piecewise.hpp"
#include "xmkt/polynomial.hpp"
#include "xmkt/reproduction.hpp"
#include "xmkt/rng.hpp"
#include "xmkt/scenario_io.hpp"
#include "xmkt/sim.hpp"
