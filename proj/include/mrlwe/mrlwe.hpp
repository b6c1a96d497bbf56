// Copyright 2026 The mrlwe-toolkit Authors
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

#include "mrlwe/codec.hpp"
#include "mrlwe/errors.hpp"
#include "mrlwe/experiments.hpp"
#include "mrlwe/imageio.hpp"
#include "mrlwe/modmath.hpp"
#include "mrlwe/pack.hpp"
#include "mrlwe/params.hpp"
#include "mrlwe/relin.hpp"
#include "mrlwe/ring.hpp"
#include "mrlwe/rng.hpp"
#include "mrlwe/she.hpp"
#include "mrlwe/tensor.hpp"
#include "mrlwe/wire.hpp"
