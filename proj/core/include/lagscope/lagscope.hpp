// Copyright 2026 The lagscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LAGSCOPE_LAGSCOPE_HPP_
#define LAGSCOPE_LAGSCOPE_HPP_

#include "lagscope/blocks.hpp"
#include "lagscope/error.hpp"
#include "lagscope/lag_gauss.hpp"
#include "lagscope/lag_tte.hpp"
#include "lagscope/parallel.hpp"
#include "lagscope/posterior.hpp"
#include "lagscope/series.hpp"
#include "lagscope/synth.hpp"
#include "lagscope/text.hpp"
#include "lagscope/version.hpp"
#include "lagscope/xcorr.hpp"

#endif  // LAGSCOPE_LAGSCOPE_HPP_
