// Copyright 2026 The spikelab Authors
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

// Umbrella header: the full library and the experiment harness.

#pragma once

#include "spikelab/detect.hpp"
#include "spikelab/eigen.hpp"
#include "spikelab/harness/config.hpp"
#include "spikelab/harness/experiment.hpp"
#include "spikelab/harness/stats.hpp"
#include "spikelab/ldlr.hpp"
#include "spikelab/model.hpp"
#include "spikelab/rational.hpp"
#include "spikelab/recover.hpp"
#include "spikelab/rng.hpp"
#include "spikelab/search.hpp"
#include "spikelab/serialize.hpp"
#include "spikelab/subsets.hpp"
#include "spikelab/tailbounds.hpp"
