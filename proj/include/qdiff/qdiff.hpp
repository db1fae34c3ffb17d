// Copyright 2026 The qdiff Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "adjoint.hpp"
#include "checkpoint.hpp"
#include "circuits.hpp"
#include "config.hpp"
#include "data.hpp"
#include "error.hpp"
#include "forward.hpp"
#include "gates.hpp"
#include "io.hpp"
#include "latent.hpp"
#include "loss.hpp"
#include "measure.hpp"
#include "metrics.hpp"
#include "optim.hpp"
#include "parallel.hpp"
#include "png.hpp"
#include "random.hpp"
#include "reverse.hpp"
#include "schedule.hpp"
#include "statevector.hpp"
#include "train.hpp"
