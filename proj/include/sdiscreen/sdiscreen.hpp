// Copyright 2026 The sdiscreen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "sdiscreen/bench_io.hpp"
#include "sdiscreen/csv.hpp"
#include "sdiscreen/dataset.hpp"
#include "sdiscreen/experiments.hpp"
#include "sdiscreen/oracle.hpp"
#include "sdiscreen/rng.hpp"
#include "sdiscreen/screening.hpp"
#include "sdiscreen/stump.hpp"
#include "sdiscreen/synthetic.hpp"
#include "sdiscreen/thresholding.hpp"
