// Copyright 2026 The ucvqa Authors
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

#pragma once

#include "ucvqa/ansatz.hpp"
#include "ucvqa/circuit.hpp"
#include "ucvqa/error.hpp"
#include "ucvqa/harness.hpp"
#include "ucvqa/noisemit.hpp"
#include "ucvqa/objective.hpp"
#include "ucvqa/optimize.hpp"
#include "ucvqa/random.hpp"
#include "ucvqa/shadow.hpp"
#include "ucvqa/simcore.hpp"
